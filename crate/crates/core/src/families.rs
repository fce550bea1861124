//! Catalog of the function families whose extremal functions define the
//! Bohr radii: concave maps with a pole at `p`, and the Ma–Minda convex and
//! starlike classes over the Janowski functions `(1 + Az)/(1 + Bz)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::FamilyError;
use crate::series::rational::{rational_exp, rational_log, rational_power};
use crate::series::{Argument, Poly, Rational, Rigor, TailBound, TruncatedSeries};

/// Truncation order used for extremal and subordinate series.
pub const DEFAULT_TRUNCATION: usize = 2048;

/// Concave coefficients grow like `p^{-n}`; the series stops before this.
const CONCAVE_COEFF_CAP: f64 = 1e250;

/// `|2α − 1|` below this sends the order-α convex family to its log branch.
const ALPHA_LOG_BRANCH: f64 = 1e-9;

/// Janowski factor `A − nB` closer to zero than this terminates the series.
const FACTOR_ZERO: f64 = 1e-14;

/// `|lim P|` at or below this counts as zero for the Case I decision.
pub const CASE_I_TOLERANCE: f64 = 1e-10;

/// Distance from the upper bracket end to a pole of the objective.
const POLE_GUARD: f64 = 1e-12;

/// The quasiconformality constant `K ≥ 1` and its dilatation bound
/// `k = (K − 1)/(K + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiParam {
    big_k: f64,
    k: f64,
}

impl QuasiParam {
    pub fn from_big_k(big_k: f64) -> Result<Self, FamilyError> {
        if !(big_k.is_finite() && big_k >= 1.0) {
            return Err(FamilyError::Argument(format!("K = {big_k} must be a finite number >= 1")));
        }
        Ok(QuasiParam {
            big_k,
            k: (big_k - 1.0) / (big_k + 1.0),
        })
    }

    pub fn from_dilatation(k: f64) -> Result<Self, FamilyError> {
        if !(0.0..1.0).contains(&k) {
            return Err(FamilyError::Argument(format!("k = {k} out of [0,1)")));
        }
        Ok(QuasiParam {
            big_k: (1.0 + k) / (1.0 - k),
            k,
        })
    }

    /// `K = 1`: the analytic case.
    pub fn conformal() -> Self {
        QuasiParam { big_k: 1.0, k: 0.0 }
    }

    #[allow(non_snake_case)]
    pub fn K(&self) -> f64 {
        self.big_k
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `k + 1 = 2K/(K + 1)`.
    pub fn bohr_factor(&self) -> f64 {
        2.0 * self.big_k / (self.big_k + 1.0)
    }

    /// `k + 2 = (3K + 1)/(K + 1)`.
    pub fn rogosinski_factor(&self) -> f64 {
        (3.0 * self.big_k + 1.0) / (self.big_k + 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum MaMindaPhi {
    Janowski { a: f64, b: f64 },
    OrderAlpha { alpha: f64 },
    /// Same as `Janowski { a: 1, b: -1 }`.
    Classical,
}

/// A Janowski pair `−1 ≤ B < A ≤ 1`. Every catalog `φ` reduces to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JanowskiParams {
    pub a: f64,
    pub b: f64,
}

impl MaMindaPhi {
    pub fn janowski(a: f64, b: f64) -> Result<Self, FamilyError> {
        let phi = MaMindaPhi::Janowski { a, b };
        phi.validate()?;
        Ok(phi)
    }

    pub fn order_alpha(alpha: f64) -> Result<Self, FamilyError> {
        let phi = MaMindaPhi::OrderAlpha { alpha };
        phi.validate()?;
        Ok(phi)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        match *self {
            MaMindaPhi::Janowski { a, b } => {
                if !(a.is_finite() && b.is_finite() && -1.0 <= b && b < a && a <= 1.0) {
                    return Err(FamilyError::Argument(format!(
                        "Janowski A={a}, B={b} violates -1 <= B < A <= 1"
                    )));
                }
            }
            MaMindaPhi::OrderAlpha { alpha } => {
                if !(0.0..1.0).contains(&alpha) {
                    return Err(FamilyError::Argument(format!("alpha={alpha} out of [0,1)")));
                }
            }
            MaMindaPhi::Classical => {}
        }
        Ok(())
    }

    /// Order α is `φ = (1 + (1 − 2α)z)/(1 − z)`.
    pub fn params(&self) -> JanowskiParams {
        match *self {
            MaMindaPhi::Janowski { a, b } => JanowskiParams { a, b },
            MaMindaPhi::Classical => JanowskiParams { a: 1.0, b: -1.0 },
            MaMindaPhi::OrderAlpha { alpha } => {
                let mut a = 1.0 - 2.0 * alpha;
                if a != 0.0 && a.abs() < ALPHA_LOG_BRANCH {
                    log::warn!("alpha = {alpha} is within {ALPHA_LOG_BRANCH} of 1/2; using the logarithmic branch");
                    a = 0.0;
                }
                JanowskiParams { a, b: -1.0 }
            }
        }
    }
}

impl fmt::Display for MaMindaPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MaMindaPhi::Janowski { a, b } => write!(f, "janowski:A={a},B={b}"),
            MaMindaPhi::OrderAlpha { alpha } => write!(f, "alpha={alpha}"),
            MaMindaPhi::Classical => write!(f, "classical"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FunctionFamily {
    ConcavePole { p: f64 },
    MaMindaConvex { phi: MaMindaPhi },
    MaMindaStarlike { phi: MaMindaPhi },
    BoundedAnalytic,
    UnivalentBaseline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum InequalityKind {
    Bohr,
    /// `|h(z)|` plus the majorant tail from index `n`.
    BohrRogosinski { n: usize },
}

impl fmt::Display for InequalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InequalityKind::Bohr => write!(f, "bohr"),
            InequalityKind::BohrRogosinski { n } => write!(f, "rogosinski:N={n}"),
        }
    }
}

/// Which extremal function a family resolves to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Extremal {
    Concave { p: f64 },
    Convex(JanowskiParams),
    Starlike(JanowskiParams),
}

impl FunctionFamily {
    pub fn concave(p: f64) -> Result<Self, FamilyError> {
        let f = FunctionFamily::ConcavePole { p };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        match self {
            FunctionFamily::ConcavePole { p } => {
                if !(*p > 0.0 && *p < 1.0) {
                    return Err(FamilyError::Argument(format!("p={p} out of (0,1)")));
                }
                Ok(())
            }
            FunctionFamily::MaMindaConvex { phi } | FunctionFamily::MaMindaStarlike { phi } => {
                phi.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn is_baseline(&self) -> bool {
        matches!(self, FunctionFamily::BoundedAnalytic | FunctionFamily::UnivalentBaseline)
    }

    pub fn is_ma_minda(&self) -> bool {
        matches!(
            self,
            FunctionFamily::MaMindaConvex { .. } | FunctionFamily::MaMindaStarlike { .. }
        )
    }

    pub(crate) fn extremal(&self) -> Result<Extremal, FamilyError> {
        self.validate()?;
        match *self {
            FunctionFamily::ConcavePole { p } => Ok(Extremal::Concave { p }),
            FunctionFamily::MaMindaConvex { phi } => Ok(Extremal::Convex(phi.params())),
            FunctionFamily::MaMindaStarlike { phi } => Ok(Extremal::Starlike(phi.params())),
            FunctionFamily::BoundedAnalytic | FunctionFamily::UnivalentBaseline => {
                Err(FamilyError::Capability(format!(
                    "{self} exposes baseline radii only, no extremal function"
                )))
            }
        }
    }

    /// Radius of the disk on which the extremal function is analytic.
    pub fn analytic_radius(&self) -> Result<f64, FamilyError> {
        Ok(match self.extremal()? {
            Extremal::Concave { p } => p,
            _ => 1.0,
        })
    }

    /// `|c_n|` (concave, convex) or `|d_n|` (starlike) of the extremal function.
    pub fn extremal_coeff(&self, n: usize) -> Result<f64, FamilyError> {
        if n == 0 {
            return Err(FamilyError::Argument("coefficient index must be >= 1".into()));
        }
        let ext = self.extremal()?;
        let mut coeffs = ext.coefficients();
        Ok(coeffs.nth(n - 1).unwrap_or(0.0).abs())
    }

    /// Signed real coefficients `0..=n` of the extremal function.
    pub fn extremal_coeffs(&self, n: usize) -> Result<Vec<f64>, FamilyError> {
        let ext = self.extremal()?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(0.0);
        out.extend(ext.coefficients().take(n));
        out.resize(n + 1, 0.0);
        Ok(out)
    }

    /// The extremal function truncated at order `n` (or earlier for concave
    /// families, whose coefficients would overflow), with a geometric tail.
    pub fn extremal_series(&self, n: usize) -> Result<TruncatedSeries, FamilyError> {
        let ext = self.extremal()?;
        let (coeffs, tail, validity) = match ext {
            Extremal::Concave { p } => {
                let mut c = vec![0.0];
                for v in ext.coefficients().take(n) {
                    if v > CONCAVE_COEFF_CAP {
                        break;
                    }
                    c.push(v);
                }
                let big_n = c.len() - 1;
                // c_n ≤ p^{1−n}/(1 − p²)
                let log_first = (p / (1.0 - p * p)).ln() - (big_n + 1) as f64 * p.ln();
                (c, TailBound::geometric(log_first, big_n + 1, 1.0 / p), p)
            }
            Extremal::Convex(jp) | Extremal::Starlike(jp) => {
                let mut c = vec![0.0];
                let mut it = ext.coefficients();
                c.extend(it.by_ref().take(n));
                c.resize(n + 1, 0.0);
                let next = it.next().unwrap_or(0.0).abs();
                let (a, b) = (jp.a.abs(), jp.b.abs());
                let m = (n + 1) as f64;
                let ratio = if matches!(ext, Extremal::Convex(_)) {
                    b.max((a + m * b) / (m + 1.0))
                } else {
                    b + a / m
                };
                let tail = if next == 0.0 {
                    TailBound::zero()
                } else {
                    TailBound::geometric(next.ln(), n + 1, ratio)
                };
                (c, tail, 1.0)
            }
        };
        Ok(TruncatedSeries::from_real(&coeffs, validity, tail)?)
    }

    /// Closed-form `k_p(r)`, `k̂_φ(r)` or `ĥ_φ(r)`.
    pub fn extremal_majorant(&self, r: f64) -> Result<f64, FamilyError> {
        let ext = self.extremal()?;
        ext.check_radius(r)?;
        Ok(ext.majorant(r))
    }

    /// Derivative of [`Self::extremal_majorant`] in `r`.
    pub fn extremal_majorant_derivative(&self, r: f64) -> Result<f64, FamilyError> {
        let ext = self.extremal()?;
        ext.check_radius(r)?;
        Ok(ext.majorant_derivative(r))
    }

    /// Signed value `k_p(x)`, `k_φ(x)` or `h_φ(x)` at real `x` inside the disk.
    pub fn extremal_value(&self, x: f64) -> Result<f64, FamilyError> {
        let ext = self.extremal()?;
        ext.check_radius(x.abs())?;
        Ok(ext.value(x))
    }

    /// `d(φ(0), ∂φ(D))` for the extremal function.
    pub fn boundary_distance(&self) -> Result<f64, FamilyError> {
        Ok(-self.extremal()?.value_at_minus_one())
    }

    /// `k_p(−1)`, `k_φ(−1)` or `h_φ(−1)`.
    pub fn limit_at_minus_one(&self) -> Result<f64, FamilyError> {
        Ok(self.extremal()?.value_at_minus_one())
    }

    /// All extremal Taylor coefficients are `≥ 0`.
    pub fn coefficients_nonnegative(&self) -> Result<bool, FamilyError> {
        Ok(self.extremal()?.nonnegative())
    }

    /// The increasing function whose root is the radius for `kind`.
    pub fn bohr_objective(
        &self,
        q: QuasiParam,
        kind: InequalityKind,
    ) -> Result<Objective, FamilyError> {
        let ext = self.extremal()?;
        let factor = match (ext, kind) {
            (_, InequalityKind::Bohr) => q.bohr_factor(),
            (Extremal::Concave { .. }, InequalityKind::BohrRogosinski { n: 1 }) => q.rogosinski_factor(),
            _ => {
                return Err(FamilyError::Capability(format!(
                    "{kind} is not available for {self}"
                )))
            }
        };
        let distance = -ext.value_at_minus_one();
        let (bracket, limit_at_top, case) = match ext {
            Extremal::Concave { p } => ((0.0, p * (1.0 - POLE_GUARD)), f64::INFINITY, TheoremCase::CaseII),
            _ => {
                let at_one = ext.majorant(1.0);
                let limit = factor * at_one - distance;
                let hi = if at_one.is_finite() { 1.0 } else { 1.0 - POLE_GUARD };
                let case = if limit.is_finite() && limit.abs() <= CASE_I_TOLERANCE {
                    TheoremCase::CaseI
                } else {
                    TheoremCase::CaseII
                };
                ((0.0, hi), limit, case)
            }
        };
        Ok(Objective {
            extremal: ext,
            factor,
            distance,
            bracket,
            branch: BranchInfo { limit_at_top, case },
        })
    }

    /// `F ∘ ω` for the extremal `F` and a Schwarz function `ω`, truncated at `n`.
    ///
    /// When `ω` is rational the expansion comes from the first order ODE
    /// satisfied by the composite, in `O(n · deg ω)`; otherwise it falls back
    /// to generic composition. The tail is the Cauchy estimate built from the
    /// closed-form majorant at `S t`, where `S` bounds `|ω|` on the unit disk
    /// and `t` is the midpoint between the evaluation radius and 1.
    pub fn subordinate(&self, inner: &TruncatedSeries, n: usize) -> Result<TruncatedSeries, FamilyError> {
        let ext = self.extremal()?;
        if inner.coeff(0).norm() > 1e-14 {
            return Err(crate::series::SeriesError::Precondition(
                "Schwarz function must vanish at the origin".into(),
            )
            .into());
        }
        let Some(w) = inner.closed_form().filter(|_| inner.validity_radius() == 1.0) else {
            let outer = self.extremal_series(n)?;
            return Ok(crate::series::compose(&outer, inner, n)?);
        };
        let sup = inner.sup_estimate();
        let limit = self.analytic_radius()?;
        if sup.value >= limit {
            return Err(crate::series::SeriesError::CompositionDomain {
                sup: sup.value,
                validity: limit,
            }
            .into());
        }
        let (pn, qd) = (w.num().clone(), w.den().clone());
        let coeffs = match ext {
            Extremal::Concave { p } => {
                let pc = Complex64::new(p, 0.0);
                let num = pn.mul(&qd).scale(pc);
                let den = qd.scale(pc).sub(&pn).mul(&qd.sub(&pn.scale(pc)));
                Rational::new(num, den)
                    .expect("denominator p·Q(0)² is nonzero")
                    .series(n)
            }
            Extremal::Convex(jp) => janowski_convex_of(jp, &pn, &qd, n),
            Extremal::Starlike(jp) => {
                let body = janowski_quotient_of(jp, &pn, &qd, n);
                w.mul_series(&body, n)
            }
        };
        let s = sup.value;
        let rigor = if sup.exact {
            Rigor::Rigorous(Argument::CauchyEstimate)
        } else {
            Rigor::Heuristic
        };
        let tail = TailBound::from_fn(rigor, move |r| {
            let t = 0.5 * (r + 1.0);
            let m = ext.majorant(s * t);
            m * geometric_sum_from(r / t, n + 1)
        });
        Ok(TruncatedSeries::new(coeffs, 1.0, tail)?)
    }
}

fn geometric_sum_from(x: f64, first: usize) -> f64 {
    if x >= 1.0 {
        return f64::INFINITY;
    }
    (first as f64 * x.ln()).exp() / (1.0 - x)
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Series of `k_φ(P/Q)` with `U = Q + B·P`, so that `1 + Bω = U/Q`.
fn janowski_convex_of(jp: JanowskiParams, pn: &Poly, qd: &Poly, n: usize) -> Vec<Complex64> {
    let JanowskiParams { a, b } = jp;
    if b == 0.0 {
        let u = Rational::new(pn.scale(c(a)), qd.clone()).expect("Q(0) != 0");
        let mut e = rational_exp(&u, n);
        e[0] -= 1.0;
        return e.into_iter().map(|v| v / a).collect();
    }
    let u = Rational::new(qd.add(&pn.scale(c(b))), qd.clone()).expect("Q(0) != 0");
    if a == 0.0 {
        return rational_log(&u, n).into_iter().map(|v| v / b).collect();
    }
    let mut y = rational_power(&u, a / b, n);
    y[0] -= 1.0;
    y.into_iter().map(|v| v / a).collect()
}

/// Series of `h_φ(ω)/ω` at `ω = P/Q`.
fn janowski_quotient_of(jp: JanowskiParams, pn: &Poly, qd: &Poly, n: usize) -> Vec<Complex64> {
    let JanowskiParams { a, b } = jp;
    if b == 0.0 {
        let u = Rational::new(pn.scale(c(a)), qd.clone()).expect("Q(0) != 0");
        return rational_exp(&u, n);
    }
    let u = Rational::new(qd.add(&pn.scale(c(b))), qd.clone()).expect("Q(0) != 0");
    rational_power(&u, (a - b) / b, n)
}

impl Extremal {
    /// `c_1, c_2, …` (signed).
    pub(crate) fn coefficients(self) -> Box<dyn Iterator<Item = f64>> {
        match self {
            Extremal::Concave { p } => {
                // c_{n+1} = c_n/p + p^n
                let mut cur = 1.0;
                let mut pn = p;
                Box::new(std::iter::from_fn(move || {
                    let out = cur;
                    cur = cur / p + pn;
                    pn *= p;
                    Some(out)
                }))
            }
            Extremal::Convex(jp) => Box::new(janowski_coeffs(jp, |n| (n + 1) as f64)),
            Extremal::Starlike(jp) => Box::new(janowski_coeffs(jp, |n| n as f64)),
        }
    }

    fn check_radius(self, r: f64) -> Result<(), FamilyError> {
        let limit = match self {
            Extremal::Concave { p } => p,
            _ => 1.0,
        };
        if !(r >= 0.0 && r < limit) {
            return Err(FamilyError::Domain { r, limit });
        }
        Ok(())
    }

    pub(crate) fn nonnegative(self) -> bool {
        match self {
            Extremal::Concave { .. } => true,
            Extremal::Convex(jp) | Extremal::Starlike(jp) => {
                jp.b <= 0.0 || (jp.a / jp.b).fract() == 0.0
            }
        }
    }

    /// Majorant of the extremal function at `0 ≤ r ≤ 1` (`+∞` past a pole).
    pub(crate) fn majorant(self, r: f64) -> f64 {
        match self {
            Extremal::Concave { p } => {
                if r >= p {
                    return f64::INFINITY;
                }
                p * r / ((p - r) * (1.0 - p * r))
            }
            Extremal::Convex(jp) if jp.b <= 0.0 => convex_value(jp, r),
            Extremal::Starlike(jp) if jp.b <= 0.0 => starlike_value(jp, r),
            _ => self.abs_sum(r, false),
        }
    }

    pub(crate) fn majorant_derivative(self, r: f64) -> f64 {
        match self {
            Extremal::Concave { p } => {
                let d = (p - r) * (1.0 - p * r);
                p * p * (1.0 - r * r) / (d * d)
            }
            Extremal::Convex(jp) if jp.b <= 0.0 => convex_derivative(jp, r),
            Extremal::Starlike(jp) if jp.b <= 0.0 => starlike_derivative(jp, r),
            _ => self.abs_sum(r, true),
        }
    }

    pub(crate) fn value(self, x: f64) -> f64 {
        match self {
            Extremal::Concave { p } => p * x / ((p - x) * (1.0 - p * x)),
            Extremal::Convex(jp) => convex_value(jp, x),
            Extremal::Starlike(jp) => starlike_value(jp, x),
        }
    }

    pub(crate) fn value_at_minus_one(self) -> f64 {
        match self {
            Extremal::Concave { p } => -p / ((1.0 + p) * (1.0 + p)),
            Extremal::Convex(jp) => convex_value(jp, -1.0),
            Extremal::Starlike(jp) => starlike_value(jp, -1.0),
        }
    }

    /// `Σ |c_n| r^n` (or its derivative) for Janowski families with `B > 0`,
    /// whose coefficients alternate past `n = A/B`. Beyond that index the
    /// ratio `|c_{n+1}/c_n|` stays below `B`, which bounds the remainder.
    fn abs_sum(self, r: f64, derivative: bool) -> f64 {
        let b = match self {
            Extremal::Convex(jp) | Extremal::Starlike(jp) => jp.b,
            Extremal::Concave { .. } => unreachable!("concave majorants are closed form"),
        };
        let a = match self {
            Extremal::Convex(jp) | Extremal::Starlike(jp) => jp.a,
            Extremal::Concave { .. } => unreachable!(),
        };
        let settled = (a / b).max(0.0).ceil() as usize + 1;
        let mut sum = 0.0;
        let mut rn = 1.0; // r^{n-1}
        for (idx, cn) in self.coefficients().enumerate() {
            let n = idx + 1;
            if cn == 0.0 && n > settled {
                break;
            }
            let term = if derivative {
                n as f64 * cn.abs() * rn
            } else {
                cn.abs() * rn * r
            };
            sum += term;
            rn *= r;
            if n > settled {
                let q = if derivative {
                    b * r * (n + 1) as f64 / n as f64
                } else {
                    b * r
                };
                if q < 1.0 {
                    let rest = term * q / (1.0 - q);
                    if rest <= 1e-17 * sum || term == 0.0 {
                        return sum + rest;
                    }
                }
            }
            if n > 10_000_000 {
                return f64::INFINITY;
            }
        }
        sum
    }
}

/// Janowski coefficients from `c_1 = 1`, `c_{n+1} = c_n (A − nB)/w(n)`.
fn janowski_coeffs(jp: JanowskiParams, weight: impl Fn(usize) -> f64) -> impl Iterator<Item = f64> {
    let mut cur = 1.0;
    let mut n = 1usize;
    std::iter::from_fn(move || {
        let out = cur;
        let mut factor = jp.a - n as f64 * jp.b;
        if factor.abs() < FACTOR_ZERO {
            factor = 0.0;
        }
        cur = cur * factor / weight(n);
        n += 1;
        Some(out)
    })
}

/// `k_φ(x)` for real `x ∈ [−1, 1]`.
fn convex_value(jp: JanowskiParams, x: f64) -> f64 {
    let JanowskiParams { a, b } = jp;
    if b == 0.0 {
        (a * x).exp_m1() / a
    } else if a == 0.0 {
        (b * x).ln_1p() / b
    } else {
        ((a / b) * (b * x).ln_1p()).exp_m1() / a
    }
}

/// `k_φ'(x) = (1 + Bx)^{(A−B)/B}`.
fn convex_derivative(jp: JanowskiParams, x: f64) -> f64 {
    let JanowskiParams { a, b } = jp;
    if b == 0.0 {
        (a * x).exp()
    } else {
        (((a - b) / b) * (b * x).ln_1p()).exp()
    }
}

/// `h_φ(x) = x (1 + Bx)^{(A−B)/B}`.
fn starlike_value(jp: JanowskiParams, x: f64) -> f64 {
    let JanowskiParams { a, b } = jp;
    if b == 0.0 {
        x * (a * x).exp()
    } else {
        x * (((a - b) / b) * (b * x).ln_1p()).exp()
    }
}

/// `h_φ'(x) = (1 + Bx)^{(A−2B)/B} (1 + Ax)`.
fn starlike_derivative(jp: JanowskiParams, x: f64) -> f64 {
    let JanowskiParams { a, b } = jp;
    if b == 0.0 {
        (a * x).exp() * (1.0 + a * x)
    } else {
        (((a - 2.0 * b) / b) * (b * x).ln_1p()).exp() * (1.0 + a * x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TheoremCase {
    /// The objective tends to 0 at the top of the bracket; the radius is 1/3.
    CaseI,
    CaseII,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchInfo {
    /// Limit of the objective at the upper end of the unit interval
    /// (`+∞` across a pole).
    pub limit_at_top: f64,
    pub case: TheoremCase,
}

/// `G(r) = factor · M(r) − d`, strictly increasing on its bracket.
#[derive(Debug, Clone, Copy)]
pub struct Objective {
    extremal: Extremal,
    factor: f64,
    distance: f64,
    pub bracket: (f64, f64),
    pub branch: BranchInfo,
}

impl Objective {
    pub fn eval(&self, r: f64) -> f64 {
        self.factor * self.extremal.majorant(r) - self.distance
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.factor * self.extremal.majorant_derivative(r)
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }
}

impl fmt::Display for FunctionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionFamily::ConcavePole { p } => write!(f, "concave:p={p}"),
            FunctionFamily::MaMindaConvex { phi } => write!(f, "convex:{phi}"),
            FunctionFamily::MaMindaStarlike { phi } => write!(f, "starlike:{phi}"),
            FunctionFamily::BoundedAnalytic => write!(f, "bounded"),
            FunctionFamily::UnivalentBaseline => write!(f, "univalent"),
        }
    }
}

fn parse_number(token: &str, name: &str) -> Result<f64, FamilyError> {
    token
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| FamilyError::Parse(format!("invalid number '{token}' for {name}")))
}

/// `key=value` with the key matched case-sensitively.
fn keyed<'a>(token: &'a str, key: &str) -> Result<&'a str, FamilyError> {
    match token.split_once('=') {
        Some((k, v)) if k.trim() == key => Ok(v),
        _ => Err(FamilyError::Parse(format!("expected '{key}=<value>', found '{token}'"))),
    }
}

fn parse_phi(rest: &str) -> Result<MaMindaPhi, FamilyError> {
    if rest == "classical" {
        return Ok(MaMindaPhi::Classical);
    }
    if let Some(v) = rest.strip_prefix("alpha=") {
        let alpha = parse_number(v, "alpha")?;
        if !(0.0..1.0).contains(&alpha) {
            return Err(FamilyError::Parse(format!("alpha={v} out of [0,1)")));
        }
        return Ok(MaMindaPhi::OrderAlpha { alpha });
    }
    if let Some(args) = rest.strip_prefix("janowski:") {
        let (ta, tb) = args
            .split_once(',')
            .ok_or_else(|| FamilyError::Parse(format!("expected 'A=<a>,B=<b>', found '{args}'")))?;
        let a = parse_number(keyed(ta, "A")?, "A")?;
        let b = parse_number(keyed(tb, "B")?, "B")?;
        if !(-1.0 <= b && b < a && a <= 1.0) {
            return Err(FamilyError::Parse(format!(
                "A={a},B={b} violates -1 <= B < A <= 1"
            )));
        }
        return Ok(MaMindaPhi::Janowski { a, b });
    }
    Err(FamilyError::Parse(format!(
        "unknown phi '{rest}' (expected classical, alpha=<a> or janowski:A=<a>,B=<b>)"
    )))
}

impl FromStr for FunctionFamily {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "bounded" => return Ok(FunctionFamily::BoundedAnalytic),
            "univalent" => return Ok(FunctionFamily::UnivalentBaseline),
            _ => {}
        }
        let (head, rest) = s
            .split_once(':')
            .ok_or_else(|| FamilyError::Parse(format!("unknown family '{s}'")))?;
        match head {
            "concave" => {
                let v = keyed(rest, "p")?;
                let p = parse_number(v, "p")?;
                if !(p > 0.0 && p < 1.0) {
                    return Err(FamilyError::Parse(format!("p out of (0,1): got {v}")));
                }
                Ok(FunctionFamily::ConcavePole { p })
            }
            "convex" => Ok(FunctionFamily::MaMindaConvex { phi: parse_phi(rest)? }),
            "starlike" => Ok(FunctionFamily::MaMindaStarlike { phi: parse_phi(rest)? }),
            other => Err(FamilyError::Parse(format!("unknown family '{other}'"))),
        }
    }
}
