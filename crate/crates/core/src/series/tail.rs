//! Certified bounds on the discarded part of a truncated power series.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

/// The analytic argument behind a rigorous tail bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Argument {
    /// Nothing was discarded.
    Exact,
    /// Coefficients dominated by a geometric sequence from an explicit ratio.
    GeometricRatio,
    /// Coefficients bounded by `M(ρ)/ρ^n` with a certified maximum modulus.
    CauchyEstimate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Rigor {
    Rigorous(Argument),
    /// Some input (typically a sampled sup-norm) is an estimate.
    Heuristic,
}

impl Rigor {
    pub fn is_rigorous(self) -> bool {
        matches!(self, Rigor::Rigorous(_))
    }

    /// Rigor of a bound derived from two inputs, with `via` naming the
    /// argument used to combine them.
    pub fn combine(self, other: Rigor, via: Argument) -> Rigor {
        match (self, other) {
            (Rigor::Rigorous(a), Rigor::Rigorous(b)) => {
                Rigor::Rigorous(a.max(b).max(via))
            }
            _ => Rigor::Heuristic,
        }
    }

    pub(crate) fn derived(self, via: Argument) -> Rigor {
        self.combine(Rigor::Rigorous(Argument::Exact), via)
    }
}

type TailFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Map from an evaluation radius `r` to an upper bound on `Σ_{n>N} |a_n| r^n`.
#[derive(Clone)]
pub struct TailBound {
    eval: Option<Arc<TailFn>>,
    rigor: Rigor,
}

impl TailBound {
    pub fn zero() -> Self {
        TailBound {
            eval: None,
            rigor: Rigor::Rigorous(Argument::Exact),
        }
    }

    /// `|a_n| ≤ exp(log_first) · ratio^(n − first_index)` for `n ≥ first_index`.
    ///
    /// The leading coefficient bound is kept in log form because extremal
    /// coefficients with a pole inside the disk overflow long before their
    /// contribution `|a_n| r^n` stops mattering.
    pub fn geometric(log_first: f64, first_index: usize, ratio: f64) -> Self {
        if log_first == f64::NEG_INFINITY {
            return TailBound::zero();
        }
        TailBound::from_fn(Rigor::Rigorous(Argument::GeometricRatio), move |r| {
            if r == 0.0 {
                return if first_index == 0 { log_first.exp() } else { 0.0 };
            }
            let x = ratio * r;
            if x >= 1.0 {
                return f64::INFINITY;
            }
            (log_first + first_index as f64 * r.ln()).exp() / (1.0 - x)
        })
    }

    pub fn from_fn(rigor: Rigor, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        TailBound {
            eval: Some(Arc::new(f)),
            rigor,
        }
    }

    /// Bound at radius `r`; never negative, `+∞` when no finite bound exists.
    pub fn at(&self, r: f64) -> f64 {
        match &self.eval {
            None => 0.0,
            Some(f) => {
                let v = f(r);
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v.max(0.0)
                }
            }
        }
    }

    pub fn rigor(&self) -> Rigor {
        self.rigor
    }

    pub fn is_zero(&self) -> bool {
        self.eval.is_none()
    }

    /// `|λ|` times this bound.
    pub fn scaled(&self, factor: f64) -> TailBound {
        match &self.eval {
            None => TailBound::zero(),
            Some(f) => {
                let f = Arc::clone(f);
                let factor = factor.abs();
                TailBound {
                    eval: Some(Arc::new(move |r| factor * f(r))),
                    rigor: self.rigor,
                }
            }
        }
    }
}

impl fmt::Debug for TailBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TailBound")
            .field("zero", &self.is_zero())
            .field("rigor", &self.rigor)
            .finish()
    }
}

/// `Σ_{n ≥ first} x^n` for `0 ≤ x < 1`.
pub(crate) fn geometric_tail(x: f64, first: usize) -> f64 {
    if x >= 1.0 {
        return f64::INFINITY;
    }
    powi_usize(x, first) / (1.0 - x)
}

/// `Σ_{m ≥ first} m x^(m−1)` for `0 ≤ x < 1` and `first ≥ 1`.
pub(crate) fn weighted_geometric_tail(x: f64, first: usize) -> f64 {
    if x >= 1.0 {
        return f64::INFINITY;
    }
    let m = first as f64;
    powi_usize(x, first - 1) * (m - (m - 1.0) * x) / ((1.0 - x) * (1.0 - x))
}

pub(crate) fn powi_usize(x: f64, n: usize) -> f64 {
    if n == 0 {
        1.0
    } else if x == 0.0 {
        0.0
    } else {
        (n as f64 * x.ln()).exp()
    }
}
