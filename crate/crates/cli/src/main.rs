use std::io::{self, Write};
use std::process::ExitCode;

use bohrlab::certify::{check_bohr, check_rogosinski, extremal_sample, run_ensemble, EnsembleConfig, EnsembleReport, ThresholdForm, Verdict};
use bohrlab::error::FamilyError;
use bohrlab::families::{FunctionFamily, InequalityKind, MaMindaPhi, QuasiParam, DEFAULT_TRUNCATION};
use bohrlab::solver::{baseline_radius, solve_radius, BaselineKind, RadiusQuery, RadiusResult, SolverError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

const GRAMMAR: &str = "\
Family grammar:
  concave:p=<p>                       concave univalent, pole p in (0,1)
  convex:classical                    C(φ) with φ = (1+z)/(1-z)
  convex:alpha=<α>                    convex of order α in [0,1)
  convex:janowski:A=<A>,B=<B>         Janowski convex, -1 <= B < A <= 1
  starlike:classical                  S*(φ) with φ = (1+z)/(1-z)
  starlike:alpha=<α>                  starlike of order α in [0,1)
  starlike:janowski:A=<A>,B=<B>       Janowski starlike, -1 <= B < A <= 1
  bounded                             |f| < 1 (baseline radii only)
  univalent                           subordinate to univalent (baseline, Bohr only)

Kinds: bohr | rogosinski (index from --N, default 1)

Exit codes: 0 success, 2 usage or parse error, 3 unsupported query, 4 certification failure";

#[derive(Parser)]
#[command(name = "bohrlab", version, about = "Sharp Bohr and Bohr-Rogosinski radii for K-quasiconformal harmonic mappings")]
#[command(after_help = GRAMMAR)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Radius for a single query, as one JSON record.
    #[command(after_help = GRAMMAR)]
    Compute {
        family: String,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Print full binary precision instead of 12 significant digits.
        #[arg(long)]
        full_precision: bool,
    },
    /// Radii over a one-parameter grid.
    #[command(after_help = GRAMMAR)]
    Sweep {
        family: String,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, value_enum)]
        axis: Axis,
        /// Comma separated, strictly increasing.
        #[arg(long, conflicts_with = "range", allow_hyphen_values = true)]
        values: Option<String>,
        /// start,stop,count.
        #[arg(long, allow_hyphen_values = true)]
        range: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        full_precision: bool,
    },
    /// Monte-Carlo ensemble below the radius plus the extremal above it.
    #[command(after_help = GRAMMAR)]
    Certify {
        family: String,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Truncation order of the sampled series.
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
    },
    /// Classical radii: Rogosinski R_N, 1/3, and the convex and univalent subordination radii.
    Baselines {
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Args, Clone, Copy)]
struct QueryArgs {
    #[arg(long = "K", default_value_t = 1.0)]
    big_k: f64,
    #[arg(long, value_enum, default_value_t = Kind::Bohr)]
    kind: Kind,
    /// Index of the Rogosinski sum.
    #[arg(long = "N", default_value_t = 1)]
    n: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Bohr,
    Rogosinski,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axis {
    #[value(name = "K")]
    K,
    #[value(name = "p")]
    P,
    #[value(name = "alpha")]
    Alpha,
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "N")]
    N,
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Axis::K => "K",
            Axis::P => "p",
            Axis::Alpha => "alpha",
            Axis::A => "A",
            Axis::B => "B",
            Axis::N => "N",
        }
    }
}

enum Failure {
    Usage(String),
    Unsupported(String),
    Certification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Unsupported(_) => 3,
            Failure::Certification(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Unsupported(m) | Failure::Certification(m) => m,
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Capability(_) => Failure::Unsupported(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Family(f) => f.into(),
            other => Failure::Certification(other.to_string()),
        }
    }
}

impl From<bohrlab::certify::CertifyError> for Failure {
    fn from(e: bohrlab::certify::CertifyError) -> Self {
        use bohrlab::certify::CertifyError as E;
        match e {
            E::Family(f) => f.into(),
            E::Argument(m) => Failure::Usage(m),
            other => Failure::Certification(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Usage(format!("output: {e}"))
    }
}

type Outcome = Result<(), Failure>;

impl QueryArgs {
    fn kind(&self) -> Result<InequalityKind, Failure> {
        match self.kind {
            Kind::Bohr => Ok(InequalityKind::Bohr),
            Kind::Rogosinski if self.n >= 1 => Ok(InequalityKind::BohrRogosinski { n: self.n }),
            Kind::Rogosinski => Err(Failure::Usage("N must be at least 1".into())),
        }
    }

    fn build(&self, family: &str) -> Result<RadiusQuery, Failure> {
        Ok(RadiusQuery {
            family: family.parse()?,
            quasi: QuasiParam::from_big_k(self.big_k)?,
            kind: self.kind()?,
        })
    }
}

/// Rounds to 12 significant digits.
fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn number(x: f64, full: bool) -> f64 {
    if full {
        x
    } else {
        sig12(x)
    }
}

fn text(x: f64) -> String {
    let v = sig12(x);
    if v != 0.0 && (v.abs() < 1e-5 || v.abs() >= 1e16) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

#[derive(Serialize)]
struct QueryRecord {
    family: String,
    #[serde(rename = "K")]
    big_k: f64,
    kind: String,
}

impl QueryRecord {
    fn new(q: &RadiusQuery) -> Self {
        QueryRecord { family: q.family.to_string(), big_k: q.quasi.K(), kind: q.kind.to_string() }
    }
}

#[derive(Serialize)]
struct ComputeRecord {
    query: QueryRecord,
    value: f64,
    residual: f64,
    method: String,
    sharp: bool,
    clamped_at_one_third: bool,
}

fn cmd_compute(family: &str, args: QueryArgs, format: Format, full: bool) -> Outcome {
    let q = args.build(family)?;
    let res = solve_radius(&q)?;
    let mut out = io::stdout().lock();
    match format {
        Format::Json => {
            let rec = ComputeRecord {
                query: QueryRecord::new(&q),
                value: number(res.value, full),
                residual: number(res.residual, full),
                method: res.method.to_string(),
                sharp: res.sharp,
                clamped_at_one_third: res.clamped_at_one_third,
            };
            serde_json::to_writer(&mut out, &rec).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(["family", "K", "kind", "value", "residual", "method", "sharp", "clamped_at_one_third"])?;
            w.write_record([
                q.family.to_string(),
                text(q.quasi.K()),
                q.kind.to_string(),
                text(res.value),
                text(res.residual),
                res.method.to_string(),
                res.sharp.to_string(),
                res.clamped_at_one_third.to_string(),
            ])?;
            w.flush()?;
        }
    }
    Ok(())
}

fn parse_values(values: Option<&str>, range: Option<&str>) -> Result<Vec<f64>, Failure> {
    let nums = |s: &str| -> Result<Vec<f64>, Failure> {
        s.split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<f64>().map_err(|_| Failure::Usage(format!("invalid number '{t}' in grid"))))
            .collect()
    };
    let grid = match (values, range) {
        (Some(v), None) => nums(v)?,
        (None, Some(r)) => {
            let parts: Vec<&str> = r.split(',').map(str::trim).collect();
            let [a, b, c] = parts[..] else {
                return Err(Failure::Usage(format!("range must be start,stop,count: got '{r}'")));
            };
            let bad = |t: &str| Failure::Usage(format!("invalid number '{t}' in range"));
            let start: f64 = a.parse().map_err(|_| bad(a))?;
            let stop: f64 = b.parse().map_err(|_| bad(b))?;
            let count: usize = c.parse().map_err(|_| bad(c))?;
            match count {
                0 => Vec::new(),
                1 => vec![start],
                _ => (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect(),
            }
        }
        _ => return Err(Failure::Usage("give exactly one of --values or --range".into())),
    };
    if grid.is_empty() {
        return Err(Failure::Usage("sweep grid is empty".into()));
    }
    if let Some(w) = grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(Failure::Usage(format!("sweep values must increase strictly: {} then {}", w[0], w[1])));
    }
    Ok(grid)
}

/// The query at one grid point.
fn point(base: &RadiusQuery, axis: Axis, v: f64) -> Result<RadiusQuery, Failure> {
    let mut q = *base;
    let wrong = |what: &str| Failure::Usage(format!("axis {} needs {what}, got {}", axis.name(), base.family));
    match axis {
        Axis::K => q.quasi = QuasiParam::from_big_k(v)?,
        Axis::P => match base.family {
            FunctionFamily::ConcavePole { .. } => q.family = FunctionFamily::concave(v)?,
            _ => return Err(wrong("a concave family")),
        },
        Axis::Alpha => {
            let phi = MaMindaPhi::order_alpha(v)?;
            q.family = match base.family {
                FunctionFamily::MaMindaConvex { phi: MaMindaPhi::OrderAlpha { .. } } => FunctionFamily::MaMindaConvex { phi },
                FunctionFamily::MaMindaStarlike { phi: MaMindaPhi::OrderAlpha { .. } } => FunctionFamily::MaMindaStarlike { phi },
                _ => return Err(wrong("an order-alpha family")),
            }
        }
        Axis::A | Axis::B => {
            let swap = |a: f64, b: f64| if axis == Axis::A { (v, b) } else { (a, v) };
            q.family = match base.family {
                FunctionFamily::MaMindaConvex { phi: MaMindaPhi::Janowski { a, b } } => {
                    let (a, b) = swap(a, b);
                    FunctionFamily::MaMindaConvex { phi: MaMindaPhi::janowski(a, b)? }
                }
                FunctionFamily::MaMindaStarlike { phi: MaMindaPhi::Janowski { a, b } } => {
                    let (a, b) = swap(a, b);
                    FunctionFamily::MaMindaStarlike { phi: MaMindaPhi::janowski(a, b)? }
                }
                _ => return Err(wrong("a Janowski family")),
            }
        }
        Axis::N => {
            if v < 1.0 || v.fract() != 0.0 {
                return Err(Failure::Usage(format!("N must be a positive integer: got {v}")));
            }
            q.kind = InequalityKind::BohrRogosinski { n: v as usize };
        }
    }
    Ok(q)
}

#[derive(Serialize)]
struct SweepRow {
    axis: &'static str,
    value: f64,
    radius: f64,
    residual: f64,
    method: String,
    sharp: bool,
}

fn cmd_sweep(
    family: &str,
    args: QueryArgs,
    axis: Axis,
    values: Option<&str>,
    range: Option<&str>,
    format: Format,
    full: bool,
) -> Outcome {
    let base = args.build(family)?;
    let grid = parse_values(values, range)?;
    let queries = grid.iter().map(|&v| point(&base, axis, v)).collect::<Result<Vec<_>, _>>()?;
    let results: Vec<Result<RadiusResult, SolverError>> = queries.par_iter().map(solve_radius).collect();
    let mut rows = Vec::with_capacity(grid.len());
    for (&v, res) in grid.iter().zip(results) {
        let res = res?;
        rows.push(SweepRow {
            axis: axis.name(),
            value: v,
            radius: res.value,
            residual: res.residual,
            method: res.method.to_string(),
            sharp: res.sharp,
        });
    }
    let out = io::stdout().lock();
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(["axis", "value", "radius", "residual", "method", "sharp"])?;
            for r in &rows {
                w.write_record([r.axis.to_string(), text(r.value), text(r.radius), text(r.residual), r.method.clone(), r.sharp.to_string()])?;
            }
            w.flush()?;
        }
        Format::Json => {
            for r in &mut rows {
                r.radius = number(r.radius, full);
                r.residual = number(r.residual, full);
            }
            let mut out = out;
            serde_json::to_writer(&mut out, &rows).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ExtremalRecord {
    r: f64,
    verdict: Verdict,
    margin: f64,
}

#[derive(Serialize)]
struct CertifyRecord {
    query: QueryRecord,
    radius: f64,
    sharp: bool,
    seed: u64,
    ensemble: EnsembleReport,
    /// Absent when the radius is not claimed sharp.
    extremal: Option<ExtremalRecord>,
    passed: bool,
}

fn cmd_certify(family: &str, args: QueryArgs, trials: usize, seed: u64, truncation: usize) -> Outcome {
    if trials == 0 {
        return Err(Failure::Usage("trials must be at least 1".into()));
    }
    let q = args.build(family)?;
    if q.family.is_baseline() {
        return Err(Failure::Unsupported(format!("unsupported: certification of {}", q.family)));
    }
    let res = solve_radius(&q)?;
    let cfg = EnsembleConfig {
        family: q.family,
        quasi: q.quasi,
        kind: q.kind,
        r: res.value * (1.0 - 1e-6),
        trials,
        seed_base: seed,
        truncation,
    };
    let ensemble = run_ensemble(&cfg)?;
    let extremal = if res.sharp {
        let s = extremal_sample(&q.family, q.quasi, Complex64::new(1.0, 0.0), truncation)?;
        let r = res.value * (1.0 + 1e-3);
        let c = match q.kind {
            InequalityKind::Bohr => check_bohr(&s, &q.family, r)?,
            InequalityKind::BohrRogosinski { .. } => check_rogosinski(&s, &q.family, r, ThresholdForm::ProofForm)?,
        };
        Some(ExtremalRecord { r, verdict: c.verdict, margin: c.margin })
    } else {
        None
    };
    let passed = ensemble.violated == 0 && extremal.as_ref().map_or(true, |e| e.verdict == Verdict::Violated);
    let rec = CertifyRecord { query: QueryRecord::new(&q), radius: res.value, sharp: res.sharp, seed, ensemble, extremal, passed };
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, &rec).map_err(io::Error::from)?;
    writeln!(out)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::Certification(format!(
            "certification failed: {} violated samples, extremal {}",
            rec.ensemble.violated,
            rec.extremal.as_ref().map_or("not checked".into(), |e| format!("{:?}", e.verdict))
        )))
    }
}

#[derive(Serialize)]
struct BaselineRow {
    baseline: &'static str,
    parameter: String,
    radius: f64,
}

fn cmd_baselines(n_max: usize, format: Format) -> Outcome {
    if n_max == 0 {
        return Err(Failure::Usage("n-max must be at least 1".into()));
    }
    let conformal = QuasiParam::conformal();
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let r = baseline_radius(BaselineKind::RogosinskiN { n }, conformal)?;
        rows.push(BaselineRow { baseline: "rogosinski", parameter: format!("N={n}"), radius: r.value });
    }
    rows.push(BaselineRow {
        baseline: "bohr",
        parameter: "classical".into(),
        radius: baseline_radius(BaselineKind::BohrClassic, conformal)?.value,
    });
    for big_k in [1.0, 2.0, 5.0, 10.0, 100.0] {
        let quasi = QuasiParam::from_big_k(big_k)?;
        for (name, which) in [
            ("convex_subordination", BaselineKind::ConvexSubordination),
            ("univalent_subordination", BaselineKind::UnivalentSubordination),
        ] {
            let r = baseline_radius(which, quasi)?;
            rows.push(BaselineRow { baseline: name, parameter: format!("K={big_k}"), radius: r.value });
        }
    }
    let out = io::stdout().lock();
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(["baseline", "parameter", "radius"])?;
            for r in &rows {
                w.write_record([r.baseline, &r.parameter, &text(r.radius)])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let mut out = out;
            for r in &mut rows {
                r.radius = sig12(r.radius);
            }
            serde_json::to_writer(&mut out, &rows).map_err(io::Error::from)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn limit_threads() {
    let Ok(v) = std::env::var("BOHRLAB_THREADS") else {
        return;
    };
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("could not cap workers: {e}");
            }
        }
        _ => log::warn!("ignoring BOHRLAB_THREADS={v}"),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    limit_threads();
    let cli = Cli::parse();
    let outcome = match cli.cmd {
        Command::Compute { family, query, format, full_precision } => cmd_compute(&family, query, format, full_precision),
        Command::Sweep { family, query, axis, values, range, format, full_precision } => {
            cmd_sweep(&family, query, axis, values.as_deref(), range.as_deref(), format, full_precision)
        }
        Command::Certify { family, query, trials, seed, truncation } => cmd_certify(&family, query, trials, seed, truncation),
        Command::Baselines { n_max, format } => cmd_baselines(n_max, format),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
