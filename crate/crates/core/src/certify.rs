//! Falsification harness: certified checks of the Bohr-type inequalities on
//! extremal and randomly sampled sense-preserving harmonic maps.
//!
//! Sampling can refute an inequality but never prove it. A [`Certificate`]
//! compares floating point partial sums with certified tail bands, so a
//! `Violated` verdict is trustworthy while `Holds` only speaks for the
//! sampled map.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::error::FamilyError;
use crate::families::{FunctionFamily, InequalityKind, QuasiParam};
use crate::series::{cauchy_product, Majorant, Poly, Rational, SeriesError, SupNorm, TailBound, TruncatedSeries};

/// Points on the circle used for the sup of `|h|` in the Rogosinski check.
pub const ROGOSINSKI_SCAN_POINTS: usize = 4096;
/// Probe points for the sense-preserving test.
pub const PROBE_POINTS: usize = 256;
/// Largest modulus of a sampled Blaschke zero.
pub const MAX_ZERO_MODULUS: f64 = 0.9;
/// Schwarz caps for concave families stay below this fraction of the pole.
pub const CONCAVE_CAP_FRACTION: f64 = 0.9;
/// Largest Schwarz cap drawn for Ma–Minda families.
pub const MA_MINDA_MAX_CAP: f64 = 0.95;
/// Ensembles double the truncation while this fraction stays inconclusive.
pub const INCONCLUSIVE_LIMIT: f64 = 0.01;
pub const MAX_TRUNCATION: usize = 8192;
/// Resolution of [`empirical_radius`].
pub const EMPIRICAL_TOLERANCE: f64 = 1e-8;
/// The subordination and dilatation lemmas only speak up to this radius.
pub const LEMMA_RADIUS: f64 = 1.0 / 3.0;

const PROBE_TOLERANCE: f64 = 1e-9;
const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("{0}")]
    Argument(String),
    #[error("cannot build sample: {0}")]
    Construction(String),
    #[error("radius {r} exceeds {limit}, beyond which the lemma makes no claim")]
    Domain { r: f64, limit: f64 },
}

/// `ρ e^{iθ} z Π_j (z + t_j)/(1 + conj(t_j) z)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchwarzParams {
    pub cap: f64,
    pub theta: f64,
    #[serde(serialize_with = "ser_complex_vec")]
    pub zeros: Vec<Complex64>,
}

impl SchwarzParams {
    pub fn new(cap: f64, theta: f64, zeros: Vec<Complex64>) -> Result<Self, CertifyError> {
        if !(cap > 0.0 && cap < 1.0) {
            return Err(CertifyError::Argument(format!("Schwarz cap must lie in (0,1): got {cap}")));
        }
        if let Some(t) = zeros.iter().find(|t| !(t.norm() < 1.0)) {
            return Err(CertifyError::Argument(format!("Blaschke zero {t} outside the disk")));
        }
        Ok(SchwarzParams { cap, theta, zeros })
    }

    /// `ρ z`.
    pub fn scaled_identity(cap: f64) -> Result<Self, CertifyError> {
        Self::new(cap, 0.0, Vec::new())
    }

    /// Draws `θ` uniformly and `degree − 1` zeros `0.9 √u e^{2πiv}`.
    pub fn draw<R: Rng + ?Sized>(rng: &mut R, degree: usize, cap: f64) -> Result<Self, CertifyError> {
        if !(1..=4).contains(&degree) {
            return Err(CertifyError::Argument(format!("Schwarz degree must be 1..=4: got {degree}")));
        }
        let theta = rng.gen::<f64>() * TAU;
        let zeros = (1..degree).map(|_| random_zero(rng)).collect();
        Self::new(cap, theta, zeros)
    }

    pub fn degree(&self) -> usize {
        self.zeros.len() + 1
    }

    pub fn rational(&self) -> Rational {
        let mut num = Poly::new(vec![Complex64::new(0.0, 0.0), Complex64::from_polar(self.cap, self.theta)]);
        let mut den = Poly::one();
        for &t in &self.zeros {
            num = num.mul(&Poly::new(vec![t, Complex64::new(1.0, 0.0)]));
            den = den.mul(&Poly::new(vec![Complex64::new(1.0, 0.0), t.conj()]));
        }
        Rational::new(num, den).expect("Blaschke denominator is 1 at the origin")
    }

    /// Truncated expansion; the sup-norm `ρ` is exact by construction.
    pub fn series(&self, n: usize) -> Result<TruncatedSeries, CertifyError> {
        let sup = SupNorm { value: self.cap, exact: true };
        Ok(TruncatedSeries::from_rational(self.rational(), n, 1.0, sup)?)
    }
}

fn random_zero<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let m = MAX_ZERO_MODULUS * rng.gen::<f64>().sqrt();
    Complex64::from_polar(m, rng.gen::<f64>() * TAU)
}

/// Seeded random Schwarz function truncated at order `n`.
pub fn sample_schwarz(seed: u64, degree: usize, cap: f64, n: usize) -> Result<TruncatedSeries, CertifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SchwarzParams::draw(&mut rng, degree, cap)?.series(n)
}

/// Admissible dilatation `g'/h'`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DilatationSpec {
    /// `k e^{iψ}`.
    Constant { k: f64, psi: f64 },
    /// `k e^{iψ} (z + t)/(1 + conj(t) z)`.
    Blaschke {
        k: f64,
        psi: f64,
        #[serde(serialize_with = "ser_complex")]
        t: Complex64,
    },
}

impl DilatationSpec {
    pub fn bound(&self) -> f64 {
        match *self {
            DilatationSpec::Constant { k, .. } | DilatationSpec::Blaschke { k, .. } => k,
        }
    }

    fn series(&self, n: usize) -> Result<TruncatedSeries, CertifyError> {
        let (k, psi, t) = match *self {
            DilatationSpec::Constant { k, psi } => (k, psi, None),
            DilatationSpec::Blaschke { k, psi, t } => (k, psi, Some(t)),
        };
        let lead = Complex64::from_polar(k, psi);
        let q = match t {
            None => Rational::polynomial(Poly::constant(lead)),
            Some(t) => {
                if !(t.norm() < 1.0) {
                    return Err(CertifyError::Construction(format!("dilatation zero {t} outside the disk")));
                }
                let num = Poly::new(vec![t * lead, lead]);
                let den = Poly::new(vec![Complex64::new(1.0, 0.0), t.conj()]);
                Rational::new(num, den).expect("denominator is 1 at the origin")
            }
        };
        Ok(TruncatedSeries::from_rational(q, n, 1.0, SupNorm { value: k, exact: true })?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Provenance {
    Extremal {
        family: String,
        #[serde(serialize_with = "ser_complex")]
        rotation: Complex64,
    },
    Random {
        seed: Option<u64>,
        schwarz: SchwarzParams,
        dilatation: DilatationSpec,
    },
    Explicit,
}

/// `f = h + conj(g)` with `|g'| ≤ k |h'|`.
#[derive(Debug, Clone)]
pub struct HarmonicSample {
    pub h: TruncatedSeries,
    pub g: TruncatedSeries,
    pub dilatation_bound: f64,
    pub provenance: Provenance,
}

/// Outcome of [`HarmonicSample::probe_sense_preserving`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SenseProbe {
    pub points: usize,
    /// Largest `|g'|/|h'|` seen.
    pub max_ratio: f64,
    pub passed: bool,
}

impl HarmonicSample {
    /// Wraps user-supplied parts; `g` must vanish at the origin.
    pub fn from_parts(h: TruncatedSeries, g: TruncatedSeries, k: f64) -> Result<Self, CertifyError> {
        if g.coeff(0).norm() > 1e-14 {
            return Err(CertifyError::Construction("co-analytic part must vanish at 0".into()));
        }
        if !(0.0..1.0).contains(&k) {
            return Err(CertifyError::Construction(format!("dilatation bound {k} outside [0,1)")));
        }
        Ok(HarmonicSample { h, g, dilatation_bound: k, provenance: Provenance::Explicit })
    }

    pub fn validity_radius(&self) -> f64 {
        self.h.validity_radius().min(self.g.validity_radius())
    }

    /// `e^{iθ}h`, `e^{iθ}g`.
    pub fn rotated(&self, theta: f64) -> HarmonicSample {
        let u = Complex64::from_polar(1.0, theta);
        HarmonicSample {
            h: self.h.scale(u),
            g: self.g.scale(u),
            ..self.clone()
        }
    }

    /// Compares `|g'|` with `k |h'|` on 16 concentric circles of 16 points
    /// filling 95% of the validity disk.
    pub fn probe_sense_preserving(&self) -> SenseProbe {
        let (dh, dg) = (self.h.differentiate(), self.g.differentiate());
        let big_r = 0.95 * self.validity_radius();
        let side = (PROBE_POINTS as f64).sqrt() as usize;
        let mut max_ratio: f64 = 0.0;
        let mut passed = true;
        for j in 1..=side {
            let r = big_r * j as f64 / side as f64;
            let hv = dh.eval_on_circle(r, side);
            let gv = dg.eval_on_circle(r, side);
            for (a, b) in hv.iter().zip(&gv) {
                let (a, b) = (a.norm(), b.norm());
                if b > self.dilatation_bound * a * (1.0 + PROBE_TOLERANCE) + 1e-300 {
                    passed = false;
                }
                if a > 0.0 {
                    max_ratio = max_ratio.max(b / a);
                }
            }
        }
        SenseProbe { points: side * side, max_ratio, passed }
    }
}

/// `h = φ∘ω` and `g = ∫ ω_d h'`.
pub fn build_sample(
    family: &FunctionFamily,
    quasi: QuasiParam,
    schwarz: &SchwarzParams,
    dilatation: DilatationSpec,
    n: usize,
) -> Result<HarmonicSample, CertifyError> {
    let k = quasi.k();
    if dilatation.bound() > k + 1e-15 || dilatation.bound() < 0.0 {
        return Err(CertifyError::Construction(format!(
            "dilatation sup {} exceeds k = {k}",
            dilatation.bound()
        )));
    }
    if let FunctionFamily::ConcavePole { p } = *family {
        let limit = CONCAVE_CAP_FRACTION * p;
        if schwarz.cap < p && schwarz.cap > limit * (1.0 + 1e-12) {
            return Err(CertifyError::Construction(format!(
                "Schwarz cap {} exceeds 0.9 p = {limit}",
                schwarz.cap
            )));
        }
    }
    let w = schwarz.series(n)?;
    let h = family.subordinate(&w, n)?.without_constant();
    let g = match dilatation {
        DilatationSpec::Constant { k, psi } => h.scale(Complex64::from_polar(k, psi)),
        DilatationSpec::Blaschke { .. } => {
            let wd = dilatation.series(n)?;
            cauchy_product(&wd, &h.differentiate(), n.saturating_sub(1)).integrate_from_zero()
        }
    };
    Ok(HarmonicSample {
        h,
        g,
        dilatation_bound: k,
        provenance: Provenance::Random { seed: None, schwarz: schwarz.clone(), dilatation },
    })
}

/// The sharpness witness `h = k_φ`, `g = k λ h`.
pub fn extremal_sample(
    family: &FunctionFamily,
    quasi: QuasiParam,
    rotation: Complex64,
    n: usize,
) -> Result<HarmonicSample, CertifyError> {
    if (rotation.norm() - 1.0).abs() > 1e-12 {
        return Err(CertifyError::Argument(format!("rotation {rotation} is not unimodular")));
    }
    let h = family.extremal_series(n)?;
    let g = h.scale(rotation * quasi.k());
    Ok(HarmonicSample {
        h,
        g,
        dilatation_bound: quasi.k(),
        provenance: Provenance::Extremal { family: family.to_string(), rotation },
    })
}

/// Seeded draw of Schwarz function and dilatation, covering the cap range
/// with more mass near the maximum.
pub fn random_sample(
    family: &FunctionFamily,
    quasi: QuasiParam,
    seed: u64,
    n: usize,
) -> Result<HarmonicSample, CertifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let degree = rng.gen_range(1..=4);
    let max_cap = match *family {
        FunctionFamily::ConcavePole { p } => CONCAVE_CAP_FRACTION * p,
        _ => MA_MINDA_MAX_CAP,
    };
    let cap = (max_cap * rng.gen::<f64>().powf(0.25)).max(1e-3 * max_cap);
    let schwarz = SchwarzParams::draw(&mut rng, degree, cap)?;
    let k = quasi.k();
    let psi = rng.gen::<f64>() * TAU;
    let dilatation = if rng.gen_bool(0.5) {
        DilatationSpec::Constant { k, psi }
    } else {
        DilatationSpec::Blaschke { k, psi, t: random_zero(&mut rng) }
    };
    let mut s = build_sample(family, quasi, &schwarz, dilatation, n)?;
    s.provenance = Provenance::Random { seed: Some(seed), schwarz, dilatation };
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

/// Certified comparison `lhs ≤ rhs`, where the true left side lies within
/// `lhs_tail` of `lhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub lhs: f64,
    pub lhs_tail: f64,
    pub rhs: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

impl Certificate {
    pub fn new(lhs: f64, lhs_tail: f64, rhs: f64) -> Self {
        let margin = rhs - lhs - lhs_tail;
        let verdict = if margin >= 0.0 {
            Verdict::Holds
        } else if lhs - rhs > lhs_tail {
            Verdict::Violated
        } else {
            Verdict::Inconclusive
        };
        Certificate { lhs, lhs_tail, rhs, margin, verdict }
    }

    /// Both sides carry uncertainty; widening the band by the right side's
    /// keeps both verdicts conservative.
    fn between(l: Majorant, r: Majorant) -> Self {
        Self::new(l.value, l.band() + r.band(), r.value)
    }
}

/// `Σ_{n≥1} (|a_n| + |b_n|) r^n ≤ d(φ(0), ∂φ(D))`.
pub fn check_bohr(sample: &HarmonicSample, family: &FunctionFamily, r: f64) -> Result<Certificate, CertifyError> {
    let mh = sample.h.majorant_sum(r, 1)?;
    let mg = sample.g.majorant_sum(r, 1)?;
    let d = family.boundary_distance()?;
    let lhs = mh.value + mg.value;
    Ok(Certificate::new(lhs, mh.band() + mg.band() + 2.0 * EPS * (lhs + d), d))
}

/// Which right-hand side the Rogosinski check uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum ThresholdForm {
    /// `|φ(0)| + d`.
    #[default]
    ProofForm,
    /// `d`.
    StatementForm,
}

/// `sup_{|z|=r} |h(z)| + Σ_{n≥1} (|a_n| + |b_n|) r^n ≤ rhs`.
///
/// The sup comes from a boundary scan of the truncated `h`. Near the maximum
/// `Re(e^{-iα} h)` has zero angular derivative, so the scan misses by at most
/// `δ²/2 · Σ n² |a_n| r^n` with `δ` half the angular spacing.
pub fn check_rogosinski(
    sample: &HarmonicSample,
    family: &FunctionFamily,
    r: f64,
    form: ThresholdForm,
) -> Result<Certificate, CertifyError> {
    if !matches!(family, FunctionFamily::ConcavePole { .. }) {
        return Err(FamilyError::Capability(format!("Rogosinski check for {family}")).into());
    }
    let mh = sample.h.majorant_sum(r, 1)?;
    let mg = sample.g.majorant_sum(r, 1)?;
    let full = sample.h.majorant_sum(r, 0)?;
    let m = ROGOSINSKI_SCAN_POINTS;
    let scan = sample
        .h
        .eval_on_circle(r, m)
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    let second: f64 = weighted_sum(&sample.h, r, 2);
    let delta = PI / m as f64;
    let discretization = 0.5 * delta * delta * second;
    let fft_rounding = 4.0 * ((m as f64).log2() + 1.0) * EPS * full.value;
    let sup_band = discretization + fft_rounding + full.tail;

    let d = family.boundary_distance()?;
    let rhs = match form {
        ThresholdForm::ProofForm => family.extremal_value(0.0)?.abs() + d,
        ThresholdForm::StatementForm => d,
    };
    let lhs = scan + mh.value + mg.value;
    let band = sup_band + mh.band() + mg.band() + 2.0 * EPS * (lhs + rhs);
    Ok(Certificate::new(lhs, band, rhs))
}

/// `Σ_{n≤N} n^p |a_n| r^n` of the truncated series.
fn weighted_sum(s: &TruncatedSeries, r: f64, power: i32) -> f64 {
    let mut rn = 1.0;
    let mut acc = 0.0;
    for (n, c) in s.coeffs().iter().enumerate() {
        acc += (n as f64).powi(power) * c.norm() * rn;
        rn *= r;
    }
    acc * (1.0 + 4.0 * s.order() as f64 * EPS)
}

fn verdict_for(
    sample: &HarmonicSample,
    family: &FunctionFamily,
    kind: InequalityKind,
    r: f64,
) -> Result<Certificate, CertifyError> {
    match kind {
        InequalityKind::Bohr => check_bohr(sample, family, r),
        InequalityKind::BohrRogosinski { n: 1 } => check_rogosinski(sample, family, r, ThresholdForm::ProofForm),
        InequalityKind::BohrRogosinski { n } => {
            Err(FamilyError::Capability(format!("Rogosinski check with N = {n}")).into())
        }
    }
}

/// Result of [`empirical_radius`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmpiricalRadius {
    /// Largest radius certified to hold.
    pub value: f64,
    /// Smallest radius certified to fail, if any was found.
    pub violated_from: Option<f64>,
    /// Radii between the two edges where the verdict is Inconclusive.
    pub inconclusive: Option<(f64, f64)>,
}

/// Bisection on the verdict along `r`, assuming the left side grows with `r`.
pub fn empirical_radius(
    sample: &HarmonicSample,
    family: &FunctionFamily,
    kind: InequalityKind,
) -> Result<EmpiricalRadius, CertifyError> {
    const GRID: usize = 256;
    let top = sample.validity_radius().min(family.analytic_radius()?) * (1.0 - 1e-9);
    let at = |r: f64| verdict_for(sample, family, kind, r).map(|c| c.verdict);

    let grid: Vec<f64> = (0..=GRID).map(|i| top * i as f64 / GRID as f64).collect();
    let mut first_bad = None;
    let mut last_holds = 0.0;
    for &r in &grid {
        match at(r)? {
            Verdict::Holds => last_holds = r,
            Verdict::Violated => {
                first_bad = Some(r);
                break;
            }
            Verdict::Inconclusive => {}
        }
    }
    let Some(bad) = first_bad else {
        let inconclusive = (last_holds < top).then_some((last_holds, top));
        return Ok(EmpiricalRadius { value: last_holds, violated_from: None, inconclusive });
    };

    // smallest violated radius
    let (mut lo, mut hi) = (last_holds, bad);
    while hi - lo > EMPIRICAL_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if at(mid)? == Verdict::Violated {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let violated = hi;
    // largest holding radius below it
    let (mut lo, mut hi) = (last_holds, violated);
    while hi - lo > EMPIRICAL_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if at(mid)? == Verdict::Holds {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let inconclusive = (violated - lo > 2.0 * EMPIRICAL_TOLERANCE).then_some((lo, violated));
    Ok(EmpiricalRadius { value: lo, violated_from: Some(violated), inconclusive })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Lemma {
    /// Tails from index `n` of a subordinate function.
    Lemma21 { n: usize },
    /// Co-analytic part against the analytic part.
    Lemma22,
    /// Majorant of a convex-type member against that of `k_φ`.
    Lemma35,
    /// Growth theorem in `C(φ)`.
    Growth32,
    /// Growth theorem in `S*(φ)`.
    Growth33,
}

/// Hypothesis objects for [`lemma_check`].
#[derive(Debug, Clone)]
pub enum LemmaInstance {
    /// `f ≺ g`.
    Subordinated { f: TruncatedSeries, g: TruncatedSeries },
    DilatationLinked(HarmonicSample),
    /// A normalized member `f` of the family's class.
    Member { family: FunctionFamily, f: TruncatedSeries },
}

/// Certified comparison of the two sides of a lemma at radius `r`. Growth
/// checks return whichever of the two bounds has the smaller margin.
pub fn lemma_check(which: Lemma, instance: &LemmaInstance, r: f64) -> Result<Certificate, CertifyError> {
    if matches!(which, Lemma::Lemma21 { .. } | Lemma::Lemma22 | Lemma::Lemma35) && r > LEMMA_RADIUS + 1e-15 {
        return Err(CertifyError::Domain { r, limit: LEMMA_RADIUS });
    }
    let mismatch = || CertifyError::Argument(format!("{which:?} does not apply to this instance"));
    match (which, instance) {
        (Lemma::Lemma21 { n }, LemmaInstance::Subordinated { f, g }) => {
            Ok(Certificate::between(f.majorant_sum(r, n)?, g.majorant_sum(r, n)?))
        }
        (Lemma::Lemma22, LemmaInstance::DilatationLinked(s)) => {
            let k = s.dilatation_bound;
            let mh = s.h.majorant_sum(r, 1)?;
            let scaled = Majorant {
                value: k * mh.value,
                tail: k * mh.tail,
                rounding: k * mh.rounding + EPS * k * mh.value,
            };
            Ok(Certificate::between(s.g.majorant_sum(r, 1)?, scaled))
        }
        (Lemma::Lemma35, LemmaInstance::Member { family, f }) => {
            if !matches!(family, FunctionFamily::MaMindaConvex { .. }) {
                return Err(mismatch());
            }
            let m = f.majorant_sum(r, 1)?;
            let rhs = family.extremal_majorant(r)?;
            Ok(Certificate::new(m.value, m.band() + 2.0 * EPS * rhs, rhs))
        }
        (Lemma::Growth32 | Lemma::Growth33, LemmaInstance::Member { family, f }) => {
            let fits = match which {
                Lemma::Growth32 => matches!(family, FunctionFamily::MaMindaConvex { .. }),
                _ => matches!(family, FunctionFamily::MaMindaStarlike { .. }),
            };
            if !fits {
                return Err(mismatch());
            }
            growth_check(family, f, r)
        }
        _ => Err(mismatch()),
    }
}

fn growth_check(family: &FunctionFamily, f: &TruncatedSeries, r: f64) -> Result<Certificate, CertifyError> {
    let upper = family.extremal_value(r)?;
    let lower = -family.extremal_value(-r)?;
    let m = ROGOSINSKI_SCAN_POINTS;
    let mods: Vec<f64> = f.eval_on_circle(r, m).iter().map(|v| v.norm()).collect();
    let max = mods.iter().copied().fold(0.0, f64::max);
    let min = mods.iter().copied().fold(f64::INFINITY, f64::min);
    let full = f.majorant_sum(r, 0)?;
    let common = full.tail + 4.0 * ((m as f64).log2() + 1.0) * EPS * full.value + 2.0 * EPS * upper;
    let delta = PI / m as f64;
    let top = Certificate::new(max, common + 0.5 * delta * delta * weighted_sum(f, r, 2), upper);
    // At the minimum no derivative vanishes in general; use the first order bound.
    let bottom = Certificate::new(lower, common + delta * weighted_sum(f, r, 1), min);
    Ok(if bottom.margin < top.margin { bottom } else { top })
}

/// Ma–Minda families with nonnegative extremal coefficients, used as outer
/// functions for random subordinated pairs.
pub fn subordination_outers() -> Vec<FunctionFamily> {
    parse_all(&[
        "convex:classical",
        "starlike:classical",
        "convex:alpha=0.25",
        "starlike:alpha=0.25",
        "convex:janowski:A=0.5,B=-0.5",
        "starlike:janowski:A=1,B=0",
        "convex:janowski:A=1,B=0",
    ])
}

/// Outers whose subordinates satisfy `|a_n| ≤ |b_n|` for every `n`.
///
/// Only these support the tail comparison from an index `N ≥ 2`: when
/// `|b_1| > |b_2|`, `g(z²) ≺ g` already breaks it at small `r`.
pub fn dominating_outers() -> Vec<FunctionFamily> {
    parse_all(&["convex:classical", "starlike:classical"])
}

fn parse_all(specs: &[&str]) -> Vec<FunctionFamily> {
    specs.iter().map(|s| s.parse().expect("catalog grammar")).collect()
}

/// `f = k_φ ∘ ω` and `g = k_φ` for a seeded choice among `outers` and a
/// seeded Schwarz function.
pub fn random_subordinated_pair(
    seed: u64,
    outers: &[FunctionFamily],
    n: usize,
) -> Result<LemmaInstance, CertifyError> {
    if outers.is_empty() {
        return Err(CertifyError::Argument("no outer functions given".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = outers[rng.gen_range(0..outers.len())];
    let degree = rng.gen_range(1..=4);
    let cap = (MA_MINDA_MAX_CAP * rng.gen::<f64>().powf(0.25)).max(1e-3);
    let w = SchwarzParams::draw(&mut rng, degree, cap)?.series(n)?;
    Ok(LemmaInstance::Subordinated { f: family.subordinate(&w, n)?, g: family.extremal_series(n)? })
}

/// The member `e^{-iθ} k_φ(t e^{iθ} z)/t` of a convex-type class, or the
/// starlike analogue; `t = 1` is a pure rotation.
pub fn rotated_extremal(family: &FunctionFamily, theta: f64, t: f64, n: usize) -> Result<LemmaInstance, CertifyError> {
    if !family.is_ma_minda() {
        return Err(CertifyError::Argument(format!("{family} has no normalized extremal")));
    }
    if !(t > 0.0 && t <= 1.0) {
        return Err(CertifyError::Argument(format!("contraction {t} outside (0,1]")));
    }
    let ext = family.extremal_series(n)?;
    let coeffs: Vec<Complex64> = ext
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, &c)| {
            let e = m as f64 - 1.0;
            c * Complex64::from_polar(t.powf(e), e * theta)
        })
        .collect();
    let base = ext.tail().clone();
    let tail = if base.is_zero() {
        TailBound::zero()
    } else {
        TailBound::from_fn(base.rigor(), move |r| base.at(t * r) / t)
    };
    let f = TruncatedSeries::new(coeffs, 1.0, tail)?;
    Ok(LemmaInstance::Member { family: *family, f })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleConfig {
    pub family: FunctionFamily,
    pub quasi: QuasiParam,
    pub kind: InequalityKind,
    pub r: f64,
    pub trials: usize,
    pub seed_base: u64,
    pub truncation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleReport {
    pub family: String,
    #[serde(rename = "K")]
    pub big_k: f64,
    pub kind: String,
    pub r: f64,
    pub trials: usize,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub min_margin: f64,
    pub seed_base: u64,
    pub truncation: usize,
}

/// Certifies `trials` random samples with seeds `seed_base + i`. While at
/// least 1% stay inconclusive, those samples are redrawn at twice the
/// truncation, up to [`MAX_TRUNCATION`].
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleReport, CertifyError> {
    if cfg.trials == 0 {
        return Err(CertifyError::Argument("trials must be at least 1".into()));
    }
    let run = |seed: u64, n: usize| -> Result<Certificate, CertifyError> {
        let s = random_sample(&cfg.family, cfg.quasi, seed, n)?;
        verdict_for(&s, &cfg.family, cfg.kind, cfg.r)
    };
    let seeds: Vec<u64> = (0..cfg.trials as u64).map(|i| cfg.seed_base.wrapping_add(i)).collect();
    let mut certs = seeds
        .par_iter()
        .map(|&s| run(s, cfg.truncation))
        .collect::<Result<Vec<_>, _>>()?;
    let mut n = cfg.truncation;
    loop {
        let open: Vec<usize> = (0..certs.len()).filter(|&i| certs[i].verdict == Verdict::Inconclusive).collect();
        if (open.len() as f64) < INCONCLUSIVE_LIMIT * cfg.trials as f64 || 2 * n > MAX_TRUNCATION {
            break;
        }
        n *= 2;
        log::info!("{} inconclusive samples, retrying at N = {n}", open.len());
        let redo = open
            .par_iter()
            .map(|&i| run(seeds[i], n))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, c) in open.into_iter().zip(redo) {
            certs[i] = c;
        }
    }
    let count = |v: Verdict| certs.iter().filter(|c| c.verdict == v).count();
    Ok(EnsembleReport {
        family: cfg.family.to_string(),
        big_k: cfg.quasi.K(),
        kind: cfg.kind.to_string(),
        r: cfg.r,
        trials: cfg.trials,
        holds: count(Verdict::Holds),
        violated: count(Verdict::Violated),
        inconclusive: count(Verdict::Inconclusive),
        min_margin: certs.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min),
        seed_base: cfg.seed_base,
        truncation: n,
    })
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_complex_vec<S: serde::Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}
