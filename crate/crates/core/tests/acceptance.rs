//! Acceptance criteria 1–10, one `[PASS]`/`[FAIL]` line each.

use std::time::{Duration, Instant};

use bohrlab::certify::{
    check_bohr, check_rogosinski, dominating_outers, extremal_sample, lemma_check, random_sample, random_subordinated_pair,
    rotated_extremal, run_ensemble, subordination_outers, EnsembleConfig, Lemma, LemmaInstance, Provenance, ThresholdForm, Verdict,
};
use bohrlab::families::{FunctionFamily, InequalityKind, MaMindaPhi, QuasiParam, DEFAULT_TRUNCATION};
use bohrlab::solver::{baseline_radius, objective, solve_radius, BaselineKind, RadiusQuery, RESIDUAL_TOLERANCE};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const K_GRID: [f64; 6] = [1.0, 1.5, 2.0, 5.0, 10.0, 100.0];
const ROGOSINSKI: InequalityKind = InequalityKind::BohrRogosinski { n: 1 };

fn q(k: f64) -> QuasiParam {
    QuasiParam::from_big_k(k).unwrap()
}

fn fam(s: &str) -> FunctionFamily {
    s.parse().unwrap()
}

fn standard_families() -> Vec<FunctionFamily> {
    let mut out = Vec::new();
    for j in 1..=9 {
        let v = j as f64 / 10.0;
        out.push(FunctionFamily::ConcavePole { p: v });
        out.push(FunctionFamily::MaMindaConvex { phi: MaMindaPhi::OrderAlpha { alpha: v } });
        out.push(FunctionFamily::MaMindaStarlike { phi: MaMindaPhi::OrderAlpha { alpha: v } });
    }
    out.push(fam("convex:classical"));
    out.push(fam("starlike:classical"));
    for (a, b) in [(0.5, -0.5), (1.0, 0.0), (0.0, -1.0), (0.5, 0.0), (0.9, 0.3)] {
        out.push(FunctionFamily::MaMindaConvex { phi: MaMindaPhi::Janowski { a, b } });
        out.push(FunctionFamily::MaMindaStarlike { phi: MaMindaPhi::Janowski { a, b } });
    }
    out
}

fn queries() -> Vec<RadiusQuery> {
    let mut out = Vec::new();
    for f in standard_families() {
        for k in K_GRID {
            out.push(RadiusQuery::bohr(f, q(k)));
            if matches!(f, FunctionFamily::ConcavePole { .. }) {
                out.push(RadiusQuery::rogosinski(f, q(k)));
            }
        }
    }
    out
}

type Check = Result<String, String>;

fn within(elapsed: Duration, limit: f64, detail: String) -> Check {
    let secs = elapsed.as_secs_f64();
    if secs < limit {
        Ok(format!("{detail}; {secs:.2}s"))
    } else {
        Err(format!("{detail}; took {secs:.2}s, limit {limit}s"))
    }
}

fn criterion_1() -> Check {
    let t = Instant::now();
    let r1 = solve_radius(&RadiusQuery::bohr(fam("convex:classical"), q(1.0))).unwrap().value;
    if (r1 - 1.0 / 3.0).abs() > 1e-12 {
        return Err(format!("K=1 gives {r1}"));
    }
    let mut worst: f64 = 0.0;
    for k in [1.0, 2.0, 5.0, 100.0] {
        let v = solve_radius(&RadiusQuery::bohr(fam("convex:classical"), q(k))).unwrap().value;
        worst = worst.max((v - (k + 1.0) / (5.0 * k + 1.0)).abs());
    }
    if worst > 1e-10 {
        return Err(format!("max error {worst:e}"));
    }
    within(t.elapsed(), 1.0, format!("max error {worst:e}"))
}

fn criterion_2() -> Check {
    let s = fam("starlike:classical");
    let r1 = solve_radius(&RadiusQuery::bohr(s, q(1.0))).unwrap().value;
    if (r1 - (3.0 - 2.0 * 2f64.sqrt())).abs() > 1e-12 {
        return Err(format!("K=1 gives {r1}"));
    }
    let mut worst: f64 = 0.0;
    for k in [1.0, 2.0, 5.0, 100.0] {
        let v = solve_radius(&RadiusQuery::bohr(s, q(k))).unwrap().value;
        let want = (5.0 * k + 1.0 - 2.0 * (6.0 * k * k + 2.0 * k).sqrt()) / (k + 1.0);
        worst = worst.max((v - want).abs());
    }
    if worst > 1e-10 {
        return Err(format!("max error {worst:e}"));
    }
    Ok(format!("max error {worst:e}"))
}

fn criterion_3() -> Check {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for j in 1..=9 {
        let p = j as f64 / 10.0;
        let v = solve_radius(&RadiusQuery::bohr(FunctionFamily::ConcavePole { p }, q(1.0))).unwrap().value;
        let want = (1.0 + 1.0 / p + p) - (p.sqrt() + 1.0 / p.sqrt()) * (p + 1.0 / p).sqrt();
        worst = worst.max((v - want).abs());
    }
    if worst > 1e-10 {
        return Err(format!("max error {worst:e}"));
    }
    within(t.elapsed(), 1.0, format!("max error {worst:e}"))
}

fn criterion_4() -> Check {
    let mut worst: f64 = 0.0;
    let qs = queries();
    for rq in &qs {
        let res = solve_radius(rq).map_err(|e| format!("{} K={}: {e}", rq.family, rq.quasi.K()))?;
        let root = res.unclamped_root.unwrap_or(res.value);
        let g = objective(rq).unwrap().eval(root).abs();
        worst = worst.max(g).max(res.residual);
    }
    if worst > RESIDUAL_TOLERANCE {
        return Err(format!("max |G| {worst:e}"));
    }
    Ok(format!("{} queries, max |G| {worst:e}", qs.len()))
}

fn criterion_5() -> Check {
    let t = Instant::now();
    for f in standard_families() {
        let mut prev = f64::INFINITY;
        for k in K_GRID {
            let b = solve_radius(&RadiusQuery::bohr(f, q(k))).unwrap().value;
            if b > prev {
                return Err(format!("{f} increases at K={k}"));
            }
            prev = b;
            match f {
                FunctionFamily::ConcavePole { p } => {
                    let r = solve_radius(&RadiusQuery::rogosinski(f, q(k))).unwrap().value;
                    if !(r < b) || !(b > 0.0 && b < p) {
                        return Err(format!("{f} K={k}: rogosinski {r}, bohr {b}"));
                    }
                }
                _ => {
                    if b > 1.0 / 3.0 {
                        return Err(format!("{f} K={k}: {b} > 1/3"));
                    }
                }
            }
        }
    }
    within(t.elapsed(), 10.0, "ordering holds on the grid".into())
}

fn criterion_6() -> Check {
    let t = Instant::now();
    let mut count = 0;
    for rq in queries() {
        let res = solve_radius(&rq).unwrap();
        if !res.sharp {
            continue;
        }
        let f = rq.family;
        let s = extremal_sample(&f, rq.quasi, Complex64::new(1.0, 0.0), DEFAULT_TRUNCATION).unwrap();
        let check = |r: f64| match rq.kind {
            InequalityKind::Bohr => check_bohr(&s, &f, r),
            _ => check_rogosinski(&s, &f, r, ThresholdForm::ProofForm),
        };
        let above = check(res.value * (1.0 + 1e-3)).unwrap();
        let below = check(res.value * (1.0 - 1e-6)).unwrap();
        if above.verdict != Verdict::Violated {
            return Err(format!("{f} K={} {}: not violated above, {above:?}", rq.quasi.K(), rq.kind));
        }
        if below.verdict != Verdict::Holds && below.margin < -below.lhs_tail {
            return Err(format!("{f} K={} {}: fails below, {below:?}", rq.quasi.K(), rq.kind));
        }
        count += 1;
    }
    within(t.elapsed(), 30.0, format!("{count} sharp queries"))
}

fn criterion_7() -> Check {
    let t = Instant::now();
    let mut configs: Vec<(FunctionFamily, InequalityKind)> = Vec::new();
    for p in [0.2, 0.5, 0.8] {
        configs.push((FunctionFamily::ConcavePole { p }, InequalityKind::Bohr));
    }
    for p in [0.5, 0.8] {
        configs.push((FunctionFamily::ConcavePole { p }, ROGOSINSKI));
    }
    for s in [
        "convex:classical",
        "starlike:classical",
        "convex:alpha=0.25",
        "starlike:alpha=0.25",
        "convex:janowski:A=0.5,B=-0.5",
        "starlike:janowski:A=1,B=0",
        "convex:janowski:A=1,B=0",
    ] {
        configs.push((fam(s), InequalityKind::Bohr));
    }
    let (mut trials, mut worst_frac, mut violated) = (0, 0.0f64, 0);
    for (f, kind) in &configs {
        for k in [1.0, 2.0, 10.0] {
            let quasi = q(k);
            let r = solve_radius(&RadiusQuery { family: *f, quasi, kind: *kind }).unwrap().value;
            let cfg = EnsembleConfig {
                family: *f,
                quasi,
                kind: *kind,
                r: r * (1.0 - 1e-6),
                trials: 1000,
                seed_base: 1_000_003,
                truncation: DEFAULT_TRUNCATION,
            };
            let rep = run_ensemble(&cfg).map_err(|e| format!("{f} K={k}: {e}"))?;
            trials += rep.trials;
            violated += rep.violated;
            worst_frac = worst_frac.max(rep.inconclusive as f64 / rep.trials as f64);
            if rep.violated > 0 {
                return Err(format!("{f} K={k} {kind}: {} violated", rep.violated));
            }
        }
    }
    if worst_frac >= 0.01 {
        return Err(format!("inconclusive fraction {worst_frac}"));
    }
    within(
        t.elapsed(),
        300.0,
        format!("{trials} samples, {violated} violated, worst inconclusive {:.2}%", 100.0 * worst_frac),
    )
}

fn criterion_8() -> Check {
    let r1 = baseline_radius(BaselineKind::RogosinskiN { n: 1 }, q(1.0)).unwrap().value;
    if (r1 - (5f64.sqrt() - 2.0)).abs() > 1e-10 {
        return Err(format!("R_1 = {r1}"));
    }
    let mut prev = 0.0;
    for n in 1..=60 {
        let r = baseline_radius(BaselineKind::RogosinskiN { n }, q(1.0)).unwrap().value;
        if !(r > prev && r < 1.0) {
            return Err(format!("R_{n} = {r} after {prev}"));
        }
        prev = r;
    }
    let d = baseline_radius(BaselineKind::UnivalentSubordination, q(1.0)).unwrap().value;
    if (d - (3.0 - 2.0 * 2f64.sqrt())).abs() > 1e-10 {
        return Err(format!("univalent baseline {d}"));
    }
    Ok(format!("R_1 = {r1:.12}, R_60 = {prev:.12}"))
}

fn criterion_9() -> Check {
    let mut flips = Vec::new();
    for k in [0.0, 1.0 / 3.0, 0.8] {
        let quasi = QuasiParam::from_dilatation(k).unwrap();
        let star = 0.5 * (3.0 + 3.0 * k).ln() / 3f64.ln();
        let above: Vec<bool> = (1..100)
            .map(|j| {
                let phi = MaMindaPhi::OrderAlpha { alpha: j as f64 / 100.0 };
                let res = solve_radius(&RadiusQuery::bohr(FunctionFamily::MaMindaStarlike { phi }, quasi)).unwrap();
                res.unclamped_root.unwrap() > 1.0 / 3.0
            })
            .collect();
        let changes: Vec<usize> = (1..above.len()).filter(|&i| above[i] != above[i - 1]).collect();
        if changes.len() != 1 || above[0] || !above[98] {
            return Err(format!("k={k}: sign changes at {changes:?}"));
        }
        let (a0, a1) = (changes[0] as f64 / 100.0, (changes[0] + 1) as f64 / 100.0);
        if !(a0 <= star + 1e-12 && star < a1 + 1e-12) {
            return Err(format!("k={k}: flip in ({a0}, {a1}], threshold {star}"));
        }
        flips.push(format!("k={k:.3}: ({a0:.2},{a1:.2}] ∋ {star:.4}"));
    }
    Ok(flips.join(", "))
}

fn criterion_10() -> Check {
    let radii = [0.1, 0.2, 1.0 / 3.0];
    let n = DEFAULT_TRUNCATION;
    let (mut holds, mut equal) = (0usize, 0usize);
    let mut judge = |c: bohrlab::certify::Certificate, equality: bool, what: &str| -> Result<(), String> {
        match (c.verdict, equality) {
            (Verdict::Holds, _) => holds += 1,
            (Verdict::Inconclusive, true) => equal += 1,
            _ => return Err(format!("{what}: {c:?}")),
        }
        Ok(())
    };
    // index 1 against every catalog outer, later indices against outers
    // that dominate their subordinates coefficient-wise
    let (all, dominating) = (subordination_outers(), dominating_outers());
    for seed in 0..500u64 {
        let broad = random_subordinated_pair(seed, &all, n).unwrap();
        let narrow = random_subordinated_pair(seed, &dominating, n).unwrap();
        for (nn, inst) in [(1, &broad), (2, &narrow), (5, &narrow)] {
            for r in radii {
                judge(lemma_check(Lemma::Lemma21 { n: nn }, inst, r).unwrap(), false, &format!("2.1 seed {seed} N={nn} r={r}"))?;
            }
        }
    }
    let dil_families = [fam("concave:p=0.5"), fam("convex:classical"), fam("starlike:alpha=0.25")];
    for seed in 0..500u64 {
        let f = dil_families[seed as usize % dil_families.len()];
        let s = random_sample(&f, q(1.0 + (seed % 7) as f64), seed, n).unwrap();
        // constant dilatations make both sides proportional
        let equality = matches!(
            s.provenance,
            Provenance::Random { dilatation: bohrlab::certify::DilatationSpec::Constant { .. }, .. }
        );
        let inst = LemmaInstance::DilatationLinked(s);
        for r in radii {
            judge(lemma_check(Lemma::Lemma22, &inst, r).unwrap(), equality, &format!("2.2 seed {seed} r={r}"))?;
        }
    }
    let convex = [fam("convex:classical"), fam("convex:alpha=0.25"), fam("convex:janowski:A=0.5,B=-0.5"), fam("convex:janowski:A=0.9,B=0.3")];
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for i in 0..200usize {
        let f = convex[i % convex.len()];
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        let t = if i % 2 == 0 { 1.0 } else { 0.5 + 0.5 * rng.gen::<f64>() };
        let inst = rotated_extremal(&f, theta, t, n).unwrap();
        for r in radii {
            judge(lemma_check(Lemma::Lemma35, &inst, r).unwrap(), t == 1.0, &format!("3.5 {f} t={t} r={r}"))?;
        }
    }
    Ok(format!("{holds} Holds, {equal} equality cases within the tail band, 0 Violated"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("classical convex radius", criterion_1),
        ("classical starlike radius", criterion_2),
        ("concave radius at K=1", criterion_3),
        ("defining-equation residuals", criterion_4),
        ("ordering properties", criterion_5),
        ("extremal sharpness", criterion_6),
        ("Monte-Carlo soundness", criterion_7),
        ("baseline radii", criterion_8),
        ("order-alpha threshold", criterion_9),
        ("lemma suite", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
