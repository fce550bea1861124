//! Truncated power series with certified tails.
//!
//! A [`TruncatedSeries`] stores `a_0..=a_N`, the radius inside which the
//! underlying function is known to be analytic, and a [`TailBound`] for the
//! discarded coefficients. Every arithmetic operation propagates the tail, so
//! a majorant sum computed at the end of a chain still brackets the value of
//! the infinite series.

pub mod rational;
pub mod tail;

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::FftPlanner;
use thiserror::Error;

pub use rational::{Poly, Rational};
pub use tail::{Argument, Rigor, TailBound};

use tail::{geometric_tail, powi_usize, weighted_geometric_tail};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Points used when a sup-norm has to be estimated by sampling a circle.
pub const SUP_SCAN_POINTS: usize = 4096;
/// Safety factor applied to sampled sup-norms.
pub const SUP_SCAN_SAFETY: f64 = 1.0 + 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("radius {r} outside the validity disk of radius {validity}")]
    Domain { r: f64, validity: f64 },
    #[error("{0}")]
    Argument(String),
    #[error("{0}")]
    Precondition(String),
    #[error("inner sup-norm {sup} is not below the outer validity radius {validity}")]
    CompositionDomain { sup: f64, validity: f64 },
}

/// Upper bound for `sup |f|` over the closed validity disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNorm {
    pub value: f64,
    /// `true` when the bound follows from the construction rather than sampling.
    pub exact: bool,
}

/// Result of [`TruncatedSeries::majorant_sum`].
///
/// The infinite sum `Σ_{n≥from} |a_n| r^n` lies in
/// `[value − rounding, value + tail + rounding]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Majorant {
    pub value: f64,
    pub tail: f64,
    /// Floating point error allowance of the partial sum.
    pub rounding: f64,
}

impl Majorant {
    pub fn upper(&self) -> f64 {
        self.value + self.tail + self.rounding
    }

    pub fn lower(&self) -> f64 {
        (self.value - self.rounding).max(0.0)
    }

    /// Width of the uncertainty band above `value`.
    pub fn band(&self) -> f64 {
        self.tail + self.rounding
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    validity_radius: f64,
    tail: TailBound,
    closed_form: Option<Arc<Rational>>,
    sup_norm: Option<SupNorm>,
}

impl TruncatedSeries {
    pub fn new(
        coeffs: Vec<Complex64>,
        validity_radius: f64,
        tail: TailBound,
    ) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Argument("series needs at least one coefficient".into()));
        }
        if !(validity_radius > 0.0 && validity_radius <= 1.0) {
            return Err(SeriesError::Argument(format!(
                "validity radius {validity_radius} not in (0, 1]"
            )));
        }
        Ok(TruncatedSeries {
            coeffs,
            validity_radius,
            tail,
            closed_form: None,
            sup_norm: None,
        })
    }

    /// An exact polynomial; analytic everywhere, so valid on the whole unit disk.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![ZERO] } else { coeffs };
        let poly = Poly::new(coeffs.clone());
        TruncatedSeries {
            coeffs,
            validity_radius: 1.0,
            tail: TailBound::zero(),
            closed_form: Some(Arc::new(Rational::polynomial(poly))),
            sup_norm: None,
        }
    }

    pub fn from_real(coeffs: &[f64], validity_radius: f64, tail: TailBound) -> Result<Self, SeriesError> {
        Self::new(
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            validity_radius,
            tail,
        )
    }

    /// Expansion of a rational function analytic on the closed disk of radius
    /// `validity_radius`, with `sup` bounding its modulus there.
    ///
    /// The tail comes from the Cauchy estimate `|a_n| ≤ S / R^n`.
    pub fn from_rational(
        rational: Rational,
        n: usize,
        validity_radius: f64,
        sup: SupNorm,
    ) -> Result<Self, SeriesError> {
        let coeffs = rational.series(n);
        let rigor = if sup.exact {
            Rigor::Rigorous(Argument::CauchyEstimate)
        } else {
            Rigor::Heuristic
        };
        let (s, big_r) = (sup.value, validity_radius);
        let tail = if rational.den().degree() == 0 && rational.num().degree() <= n {
            TailBound::zero()
        } else {
            TailBound::from_fn(rigor, move |r| s * geometric_tail(r / big_r, n + 1))
        };
        let mut out = Self::new(coeffs, validity_radius, tail)?;
        out.closed_form = Some(Arc::new(rational));
        out.sup_norm = Some(sup);
        Ok(out)
    }

    pub fn with_sup_norm(mut self, sup: SupNorm) -> Self {
        self.sup_norm = Some(sup);
        self
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn validity_radius(&self) -> f64 {
        self.validity_radius
    }

    pub fn tail(&self) -> &TailBound {
        &self.tail
    }

    pub fn rigor(&self) -> Rigor {
        self.tail.rigor()
    }

    pub fn closed_form(&self) -> Option<&Rational> {
        self.closed_form.as_deref()
    }

    pub fn sup_norm(&self) -> Option<SupNorm> {
        self.sup_norm
    }

    /// No coefficient was discarded.
    pub fn is_exact(&self) -> bool {
        self.tail.is_zero()
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Values of the truncated polynomial at `r·e^{2πij/m}`, `j = 0..m`.
    pub fn eval_on_circle(&self, r: f64, m: usize) -> Vec<Complex64> {
        let mut buf = vec![ZERO; m];
        let mut rn = 1.0;
        for (n, &c) in self.coeffs.iter().enumerate() {
            buf[n % m] += c * rn;
            rn *= r;
        }
        let fft = FftPlanner::new().plan_fft_inverse(m);
        fft.process(&mut buf);
        buf
    }

    pub fn sup_on_circle(&self, r: f64, m: usize) -> f64 {
        self.eval_on_circle(r, m)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// `Σ_{n=from_index}^{N} |a_n| r^n` together with the tail bound at `r`.
    pub fn majorant_sum(&self, r: f64, from_index: usize) -> Result<Majorant, SeriesError> {
        if !(r >= 0.0 && r < self.validity_radius) {
            return Err(SeriesError::Domain {
                r,
                validity: self.validity_radius,
            });
        }
        if from_index > self.order() + 1 {
            return Err(SeriesError::Argument(format!(
                "from_index {from_index} exceeds N + 1 = {}",
                self.order() + 1
            )));
        }
        let (value, rounding) = self.head(r, from_index);
        Ok(Majorant {
            value,
            tail: self.tail.at(r),
            rounding,
        })
    }

    /// Partial sum from `from` with its rounding allowance. Powers of `r`
    /// are built by repeated multiplication, so term `n` carries about
    /// `n + 2` roundings before it is added.
    fn head(&self, r: f64, from: usize) -> (f64, f64) {
        let mut rn = powi_usize(r, from);
        let mut value = 0.0;
        let mut weighted = 0.0;
        let mut terms = 0usize;
        for (n, c) in self.coeffs.iter().enumerate().skip(from) {
            let term = c.norm() * rn;
            value += term;
            weighted += (n + 2) as f64 * term;
            rn *= r;
            terms += 1;
        }
        let rounding = f64::EPSILON * (weighted + (terms + 1) as f64 * value);
        (value, rounding)
    }

    /// Certified upper bound on `Σ_{n≥0} |a_n| t^n`; `+∞` outside the disk.
    pub fn majorant_upper(&self, t: f64) -> f64 {
        if !(t >= 0.0 && (t < self.validity_radius || self.is_exact())) {
            return f64::INFINITY;
        }
        let (value, rounding) = self.head(t, 0);
        value + rounding + self.tail.at(t)
    }

    /// Term-wise derivative.
    ///
    /// Each discarded coefficient satisfies `|a_m| ≤ T(t)/t^m` for any `t`
    /// inside the disk, which turns the tail of `s` into a tail for `s'`.
    pub fn differentiate(&self) -> TruncatedSeries {
        let n = self.order();
        let coeffs: Vec<Complex64> = if n == 0 {
            vec![ZERO]
        } else {
            (1..=n).map(|m| self.coeffs[m] * m as f64).collect()
        };
        let tail = if self.tail.is_zero() {
            TailBound::zero()
        } else {
            let base = self.tail.clone();
            let big_r = self.validity_radius;
            TailBound::from_fn(base.rigor().derived(Argument::CauchyEstimate), move |r| {
                let t = 0.5 * (r + big_r);
                let bt = base.at(t);
                if bt == 0.0 {
                    return 0.0;
                }
                (bt / t) * weighted_geometric_tail(r / t, n + 1)
            })
        };
        let closed_form = self.closed_form.as_ref().map(|q| {
            let num = q.num().derivative().mul(q.den()).sub(&q.num().mul(&q.den().derivative()));
            Arc::new(Rational::new(num, q.den().mul(q.den())).expect("den(0) != 0"))
        });
        TruncatedSeries {
            coeffs,
            validity_radius: self.validity_radius,
            tail,
            closed_form,
            sup_norm: None,
        }
    }

    /// Term-wise antiderivative vanishing at the origin.
    pub fn integrate_from_zero(&self) -> TruncatedSeries {
        let n = self.order();
        let mut coeffs = Vec::with_capacity(n + 2);
        coeffs.push(ZERO);
        coeffs.extend(self.coeffs.iter().enumerate().map(|(j, &c)| c / (j + 1) as f64));
        let tail = if self.tail.is_zero() {
            TailBound::zero()
        } else {
            let base = self.tail.clone();
            let denom = (n + 2) as f64;
            TailBound::from_fn(base.rigor().derived(Argument::Exact), move |r| {
                r * base.at(r) / denom
            })
        };
        TruncatedSeries {
            coeffs,
            validity_radius: self.validity_radius,
            tail,
            closed_form: None,
            sup_norm: None,
        }
    }

    pub fn scale(&self, lambda: Complex64) -> TruncatedSeries {
        let m = lambda.norm();
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&c| c * lambda).collect(),
            validity_radius: self.validity_radius,
            tail: self.tail.scaled(m),
            closed_form: self.closed_form.as_ref().map(|q| {
                Arc::new(Rational::new(q.num().scale(lambda), q.den().clone()).expect("den(0) != 0"))
            }),
            sup_norm: self.sup_norm.map(|s| SupNorm {
                value: s.value * m,
                exact: s.exact,
            }),
        }
    }

    /// `s − s(0)`.
    pub fn without_constant(&self) -> TruncatedSeries {
        let mut out = self.clone();
        let c0 = out.coeffs[0];
        out.coeffs[0] = ZERO;
        out.closed_form = self.closed_form.as_ref().map(|q| {
            let num = q.num().sub(&q.den().scale(c0));
            Arc::new(Rational::new(num, q.den().clone()).expect("den(0) != 0"))
        });
        out.sup_norm = None;
        out
    }

    /// Index of the first coefficient that is not known exactly.
    fn known_through(&self) -> usize {
        if self.tail.is_zero() {
            usize::MAX
        } else {
            self.order()
        }
    }

    /// Upper bound on `sup_{|z| ≤ R} |s(z)|` for the validity radius `R`,
    /// either from the construction or from a boundary scan.
    pub fn sup_estimate(&self) -> SupNorm {
        if let Some(s) = self.sup_norm {
            return s;
        }
        let big_r = self.validity_radius;
        let mut v = self.sup_on_circle(big_r, SUP_SCAN_POINTS);
        if !self.tail.is_zero() {
            let t = self.tail.at(big_r);
            if t.is_finite() {
                v += t;
            }
        }
        SupNorm {
            value: v * SUP_SCAN_SAFETY,
            exact: false,
        }
    }
}

/// First `n + 1` coefficients of `a·b`.
///
/// The result is truncated further when either factor stops being known
/// exactly. Tails come from a Cauchy estimate at the midpoint between `r`
/// and the common validity radius, or are exact when both factors are
/// polynomials.
pub fn cauchy_product(a: &TruncatedSeries, b: &TruncatedSeries, n: usize) -> TruncatedSeries {
    let big_r = a.validity_radius.min(b.validity_radius);
    let mut n_eff = n.min(a.known_through()).min(b.known_through());
    let both_exact = a.is_exact() && b.is_exact();
    if both_exact {
        n_eff = n_eff.min(a.order() + b.order());
    }
    let coeffs = product_coeffs(a, b, n_eff);

    let tail = if both_exact {
        let full = product_coeffs(a, b, a.order() + b.order());
        let over: Vec<(usize, f64)> = full
            .iter()
            .enumerate()
            .skip(n_eff + 1)
            .map(|(m, c)| (m, c.norm()))
            .filter(|&(_, c)| c > 0.0)
            .collect();
        if over.is_empty() {
            TailBound::zero()
        } else {
            TailBound::from_fn(Rigor::Rigorous(Argument::Exact), move |r| {
                over.iter().map(|&(m, c)| c * powi_usize(r, m)).sum()
            })
        }
    } else {
        let (fa, fb) = (Arc::new(a.clone()), Arc::new(b.clone()));
        let rigor = a.rigor().combine(b.rigor(), Argument::CauchyEstimate);
        TailBound::from_fn(rigor, move |r| {
            let t = 0.5 * (r + big_r);
            let m = fa.majorant_upper(t) * fb.majorant_upper(t);
            m * geometric_tail(r / t, n_eff + 1)
        })
    };

    let closed_form = match (&a.closed_form, &b.closed_form) {
        (Some(p), Some(q)) if both_exact => Some(Arc::new(p.mul(q))),
        _ => None,
    };
    TruncatedSeries {
        coeffs,
        validity_radius: big_r,
        tail,
        closed_form,
        sup_norm: None,
    }
}

fn product_coeffs(a: &TruncatedSeries, b: &TruncatedSeries, n: usize) -> Vec<Complex64> {
    // A low-degree rational factor turns the convolution into a recurrence.
    for (p, q) in [(a, b), (b, a)] {
        if let Some(rat) = p.closed_form() {
            if rat.num().degree() + rat.den().degree() <= 16 {
                return rat.mul_series(&q.coeffs, n);
            }
        }
    }
    (0..=n)
        .map(|k| {
            let lo = k.saturating_sub(b.order());
            let hi = k.min(a.order());
            (lo..=hi).map(|j| a.coeffs[j] * b.coeffs[k - j]).sum()
        })
        .collect()
}

/// First `n + 1` coefficients of `outer ∘ inner`.
///
/// `inner` must vanish at the origin and its sup-norm on its validity disk
/// has to stay below the validity radius of `outer`. By the Schwarz lemma
/// `|inner(z)| ≤ S|z|/R`, so on `|z| = t` the composition is bounded by the
/// outer majorant at `S t / R`; the tail is the Cauchy estimate at the
/// midpoint `t = (r + R)/2`.
pub fn compose(
    outer: &TruncatedSeries,
    inner: &TruncatedSeries,
    n: usize,
) -> Result<TruncatedSeries, SeriesError> {
    if inner.coeffs[0].norm() > 1e-14 {
        return Err(SeriesError::Precondition(format!(
            "inner series has constant term {} (must vanish)",
            inner.coeffs[0]
        )));
    }
    let sup = inner.sup_estimate();
    if !outer.is_exact() && sup.value >= outer.validity_radius {
        return Err(SeriesError::CompositionDomain {
            sup: sup.value,
            validity: outer.validity_radius,
        });
    }
    let n_eff = n.min(outer.known_through()).min(inner.known_through());
    let w: Vec<Complex64> = (0..=n_eff).map(|k| if k == 0 { ZERO } else { inner.coeff(k) }).collect();

    // Horner: acc ← acc·w + o_k for k = n_eff..0
    let mut acc = vec![ZERO; n_eff + 1];
    let fast = inner
        .closed_form()
        .filter(|q| q.num().degree() + q.den().degree() <= 16);
    for k in (0..=n_eff.min(outer.order())).rev() {
        acc = match fast {
            Some(q) => q.mul_series(&acc, n_eff),
            None => truncated_product(&acc, &w, n_eff),
        };
        acc[0] += outer.coeffs[k];
    }

    let big_r = inner.validity_radius;
    let s = sup.value;
    let outer_c = Arc::new(outer.clone());
    let rigor = outer
        .rigor()
        .combine(inner.rigor(), Argument::CauchyEstimate)
        .combine(
            if sup.exact {
                Rigor::Rigorous(Argument::Exact)
            } else {
                Rigor::Heuristic
            },
            Argument::CauchyEstimate,
        );
    let tail = TailBound::from_fn(rigor, move |r| {
        let t = 0.5 * (r + big_r);
        let m = outer_c.majorant_upper(s * t / big_r);
        m * geometric_tail(r / t, n_eff + 1)
    });
    Ok(TruncatedSeries {
        coeffs: acc,
        validity_radius: big_r,
        tail,
        closed_form: None,
        sup_norm: None,
    })
}

fn truncated_product(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
        .collect()
}
