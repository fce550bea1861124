//! Bohr and Bohr–Rogosinski radii from closed forms or bracketed roots.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::error::FamilyError;
use crate::families::{FunctionFamily, InequalityKind, Objective, QuasiParam, TheoremCase};

/// Bound on `|G(value)|` for every reported radius.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;
/// Allowed gap between a closed form and the bisection root.
pub const CROSS_CHECK_TOLERANCE: f64 = 1e-10;
/// Bisection stops once the bracket is narrower than this.
pub const BISECTION_WIDTH: f64 = 1e-14;
const NEWTON_STEPS: usize = 2;
const ONE_THIRD: f64 = 1.0 / 3.0;
const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("no sign change on [{lo}, {hi}]: G(lo) = {f_lo}, G(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("closed form {closed} and bisection root {iterative} disagree")]
    CrossCheck { closed: f64, iterative: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusQuery {
    pub family: FunctionFamily,
    pub quasi: QuasiParam,
    pub kind: InequalityKind,
}

impl RadiusQuery {
    pub fn bohr(family: FunctionFamily, quasi: QuasiParam) -> Self {
        RadiusQuery {
            family,
            quasi,
            kind: InequalityKind::Bohr,
        }
    }

    pub fn rogosinski(family: FunctionFamily, quasi: QuasiParam) -> Self {
        RadiusQuery {
            family,
            quasi,
            kind: InequalityKind::BohrRogosinski { n: 1 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    ClosedForm,
    Bisection,
    NewtonSafeguarded,
    #[serde(rename = "CaseI_OneThird")]
    CaseIOneThird,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClosedForm => "ClosedForm",
            Method::Bisection => "Bisection",
            Method::NewtonSafeguarded => "NewtonSafeguarded",
            Method::CaseIOneThird => "CaseI_OneThird",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SharpReason {
    /// The extremal function with dilatation `kλ` attains equality.
    ExtremalAttains,
    /// The root exceeds 1/3 and the radius is capped there.
    ClampedAtOneThird,
    /// Some extremal Taylor coefficients are negative.
    MixedSignCoefficients,
    /// The objective vanishes at the top of the unit interval.
    CaseI,
    /// The baseline theorem states the radius is best possible.
    BaselineBestPossible,
    /// The baseline theorem gives no sharpness statement.
    BaselineNoClaim,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusResult {
    pub value: f64,
    pub residual: f64,
    pub bracket: (f64, f64),
    pub method: Method,
    pub sharp: bool,
    pub sharp_reason: SharpReason,
    pub clamped_at_one_third: bool,
    /// Root of the objective before the `min{1/3, ·}` cap (Ma–Minda only).
    pub unclamped_root: Option<f64>,
    pub case: Option<TheoremCase>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaselineKind {
    BohrClassic,
    RogosinskiN { n: usize },
    ConvexSubordination,
    UnivalentSubordination,
}

/// A bracketed root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: f64,
    /// Final bisection bracket, with `f(lo) < 0 < f(hi)`.
    pub bracket: (f64, f64),
    pub method: Method,
}

/// Root of an increasing `f` on `[lo, hi]`: bisection to width
/// [`BISECTION_WIDTH`], then Newton polish steps that are discarded when
/// they leave the bracket or fail to shrink `|f|`.
pub fn find_root(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
) -> Result<Root, SolverError> {
    let (f_lo, f_hi) = (f(lo), f(hi));
    if f_lo == 0.0 {
        return Ok(Root { value: lo, bracket: (lo, lo), method: Method::Bisection });
    }
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(SolverError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let (mut a, mut b) = (lo, hi);
    let mut x = 0.5 * (a + b);
    let mut fx = f(x);
    while b - a > BISECTION_WIDTH {
        x = 0.5 * (a + b);
        if x <= a || x >= b {
            break;
        }
        fx = f(x);
        if fx == 0.0 {
            return Ok(Root { value: x, bracket: (a, b), method: Method::Bisection });
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
    }
    // the midpoint of the final bracket is the bisection estimate
    let mid = 0.5 * (a + b);
    let f_mid = f(mid);
    if f_mid.abs() <= fx.abs() {
        x = mid;
        fx = f_mid;
    }
    let mut method = Method::Bisection;
    for _ in 0..NEWTON_STEPS {
        let d = df(x);
        if !(d.is_finite() && d > 0.0) {
            break;
        }
        let cand = x - fx / d;
        if !(cand >= a && cand <= b) {
            continue;
        }
        let fc = f(cand);
        if fc.abs() < fx.abs() {
            x = cand;
            fx = fc;
            method = Method::NewtonSafeguarded;
        }
    }
    Ok(Root { value: x, bracket: (a, b), method })
}

fn objective_root(obj: &Objective) -> Result<Root, SolverError> {
    find_root(|r| obj.eval(r), |r| obj.derivative(r), obj.bracket.0, obj.bracket.1)
}

/// Closed-form radius when one is known, `None` otherwise.
///
/// For concave families `k_p(r) = d/f` clears to `p r² − b r + p = 0` with
/// `b = (1 + p²) + f (1 + p)²`; the smaller root is evaluated as
/// `2p/(b + √(b² − 4p²))` to avoid cancellation.
pub fn closed_form_radius(q: &RadiusQuery) -> Option<f64> {
    let big_k = q.quasi.K();
    match (q.family, q.kind) {
        (FunctionFamily::ConcavePole { p }, kind) => {
            let factor = match kind {
                InequalityKind::Bohr => q.quasi.bohr_factor(),
                InequalityKind::BohrRogosinski { n: 1 } => q.quasi.rogosinski_factor(),
                _ => return None,
            };
            if !(p > 0.0 && p < 1.0) {
                return None;
            }
            let b = (1.0 + p * p) + factor * (1.0 + p) * (1.0 + p);
            Some(2.0 * p / (b + (b * b - 4.0 * p * p).sqrt()))
        }
        (FunctionFamily::MaMindaConvex { phi }, InequalityKind::Bohr) if is_classical(phi.params()) => {
            Some((big_k + 1.0) / (5.0 * big_k + 1.0))
        }
        (FunctionFamily::MaMindaStarlike { phi }, InequalityKind::Bohr) if is_classical(phi.params()) => {
            Some((big_k + 1.0) / (5.0 * big_k + 1.0 + 2.0 * (6.0 * big_k * big_k + 2.0 * big_k).sqrt()))
        }
        _ => None,
    }
}

fn is_classical(jp: crate::families::JanowskiParams) -> bool {
    jp.a == 1.0 && jp.b == -1.0
}

/// The objective `G` whose root defines the radius of `q`.
pub fn objective(q: &RadiusQuery) -> Result<Objective, SolverError> {
    Ok(q.family.bohr_objective(q.quasi, q.kind)?)
}

pub fn solve_radius(q: &RadiusQuery) -> Result<RadiusResult, SolverError> {
    match (q.family, q.kind) {
        (FunctionFamily::BoundedAnalytic, InequalityKind::Bohr) => {
            return baseline_radius(BaselineKind::BohrClassic, q.quasi)
        }
        (FunctionFamily::BoundedAnalytic, InequalityKind::BohrRogosinski { n }) => {
            return baseline_radius(BaselineKind::RogosinskiN { n }, q.quasi)
        }
        (FunctionFamily::UnivalentBaseline, InequalityKind::Bohr) => {
            return baseline_radius(BaselineKind::UnivalentSubordination, q.quasi)
        }
        (FunctionFamily::UnivalentBaseline, kind) => {
            return Err(FamilyError::Capability(format!("{kind} is not available for univalent")).into())
        }
        _ => {}
    }
    let obj = objective(q)?;
    let closed = closed_form_radius(q);

    if q.family.is_ma_minda() && obj.branch.case == TheoremCase::CaseI {
        return Ok(RadiusResult {
            value: ONE_THIRD,
            residual: 0.0,
            bracket: obj.bracket,
            method: Method::CaseIOneThird,
            sharp: false,
            sharp_reason: SharpReason::CaseI,
            clamped_at_one_third: false,
            unclamped_root: None,
            case: Some(TheoremCase::CaseI),
        });
    }

    let iterative = objective_root(&obj)?;
    let (root, method) = match closed {
        Some(c) => {
            if (c - iterative.value).abs() > CROSS_CHECK_TOLERANCE {
                return Err(SolverError::CrossCheck { closed: c, iterative: iterative.value });
            }
            (c, Method::ClosedForm)
        }
        None => (iterative.value, iterative.method),
    };
    let residual = obj.eval(root).abs();

    if !q.family.is_ma_minda() {
        return Ok(RadiusResult {
            value: root,
            residual,
            bracket: iterative.bracket,
            method,
            sharp: true,
            sharp_reason: SharpReason::ExtremalAttains,
            clamped_at_one_third: false,
            unclamped_root: None,
            case: Some(TheoremCase::CaseII),
        });
    }

    let nonneg = q.family.coefficients_nonnegative()?;
    let (value, clamped, sharp, reason) = if root <= ONE_THIRD + TIE_TOLERANCE {
        let reason = if nonneg {
            SharpReason::ExtremalAttains
        } else {
            SharpReason::MixedSignCoefficients
        };
        (root.min(ONE_THIRD), false, nonneg, reason)
    } else {
        (ONE_THIRD, true, false, SharpReason::ClampedAtOneThird)
    };
    Ok(RadiusResult {
        value,
        residual,
        bracket: iterative.bracket,
        method,
        sharp,
        sharp_reason: reason,
        clamped_at_one_third: clamped,
        unclamped_root: Some(root),
        case: Some(TheoremCase::CaseII),
    })
}

fn exact(value: f64, sharp: bool) -> RadiusResult {
    RadiusResult {
        value,
        residual: 0.0,
        bracket: (value, value),
        method: Method::ClosedForm,
        sharp,
        sharp_reason: if sharp {
            SharpReason::BaselineBestPossible
        } else {
            SharpReason::BaselineNoClaim
        },
        clamped_at_one_third: false,
        unclamped_root: None,
        case: None,
    }
}

/// Radii of the classical results used as reference points.
pub fn baseline_radius(which: BaselineKind, q: QuasiParam) -> Result<RadiusResult, SolverError> {
    match which {
        BaselineKind::BohrClassic => Ok(exact(ONE_THIRD, true)),
        BaselineKind::ConvexSubordination => {
            let big_k = q.K();
            Ok(exact((big_k + 1.0) / (5.0 * big_k + 1.0), true))
        }
        BaselineKind::RogosinskiN { n } => {
            if n == 0 {
                return Err(FamilyError::Argument("Rogosinski index N must be >= 1".into()).into());
            }
            let nn = n as i32;
            let g = |r: f64| 2.0 * (1.0 + r) * r.powi(nn) - (1.0 - r) * (1.0 - r);
            let dg = |r: f64| {
                2.0 * r.powi(nn) + 2.0 * n as f64 * (1.0 + r) * r.powi(nn - 1) + 2.0 * (1.0 - r)
            };
            let root = find_root(g, dg, 0.0, 1.0)?;
            Ok(RadiusResult {
                value: root.value,
                residual: g(root.value).abs(),
                bracket: root.bracket,
                method: root.method,
                sharp: true,
                sharp_reason: SharpReason::BaselineBestPossible,
                clamped_at_one_third: false,
                unclamped_root: None,
                case: None,
            })
        }
        BaselineKind::UnivalentSubordination => {
            let k = q.k();
            let g = |r: f64| 4.0 * r * (1.0 + k * (1.0 + r).sqrt()) - (1.0 - r) * (1.0 - r);
            let dg = |r: f64| {
                let s = (1.0 + r).sqrt();
                4.0 * (1.0 + k * s) + 2.0 * k * r / s + 2.0 * (1.0 - r)
            };
            let root = find_root(g, dg, 0.0, 1.0)?;
            Ok(RadiusResult {
                value: root.value,
                residual: g(root.value).abs(),
                bracket: root.bracket,
                method: root.method,
                sharp: false,
                sharp_reason: SharpReason::BaselineNoClaim,
                clamped_at_one_third: false,
                unclamped_root: None,
                case: None,
            })
        }
    }
}
