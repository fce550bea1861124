//! Dense polynomials, rational functions, and the linear recurrences that
//! expand closed forms built from them.
//!
//! Every routine here is `O(N · deg)`: the catalog functions composed with a
//! finite Blaschke product are rational functions, powers, logarithms, or
//! exponentials of rational functions, and each of those satisfies a first
//! order linear ODE with polynomial coefficients.

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial with coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(Vec<Complex64>);

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    pub fn constant(c: Complex64) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(ONE)
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Poly::new(vec![ZERO, ONE])
    }

    fn trim(&mut self) {
        while self.0.len() > 1 && self.0.last() == Some(&ZERO) {
            self.0.pop();
        }
        if self.0.is_empty() {
            self.0.push(ZERO);
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeff(&self, i: usize) -> Complex64 {
        self.0.get(i).copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.0.iter().map(|&c| c * s).collect())
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::constant(ZERO);
        }
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }
}

/// `num / den` with `den(0) != 0`, so the Taylor expansion at the origin exists.
#[derive(Clone, Debug, PartialEq)]
pub struct Rational {
    num: Poly,
    den: Poly,
}

impl Rational {
    /// Returns `None` when the denominator vanishes at the origin.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.coeff(0) == ZERO {
            return None;
        }
        Some(Rational { num, den })
    }

    pub fn polynomial(p: Poly) -> Self {
        Rational {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn mul(&self, other: &Rational) -> Rational {
        Rational {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    /// First `n + 1` Taylor coefficients.
    pub fn series(&self, n: usize) -> Vec<Complex64> {
        divide_series(self.num.coeffs(), &self.den, n)
    }

    /// Coefficients `0..=n` of `s · self`, where `s` holds at least `n + 1`
    /// coefficients of some series.
    pub fn mul_series(&self, s: &[Complex64], n: usize) -> Vec<Complex64> {
        let numer = mul_poly_truncated(s, &self.num, n);
        divide_series(&numer, &self.den, n)
    }
}

/// Coefficients `0..=n` of `s · p`.
pub fn mul_poly_truncated(s: &[Complex64], p: &Poly, n: usize) -> Vec<Complex64> {
    let mut out = vec![ZERO; n + 1];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = ZERO;
        for (j, &pj) in p.coeffs().iter().enumerate().take(k + 1) {
            if let Some(&sv) = s.get(k - j) {
                acc += pj * sv;
            }
        }
        *slot = acc;
    }
    out
}

/// Coefficients `0..=n` of `s / den`.
pub fn divide_series(s: &[Complex64], den: &Poly, n: usize) -> Vec<Complex64> {
    let d0 = den.coeff(0);
    let mut out = vec![ZERO; n + 1];
    for k in 0..=n {
        let mut acc = s.get(k).copied().unwrap_or(ZERO);
        for j in 1..=den.degree().min(k) {
            acc -= den.coeff(j) * out[k - j];
        }
        out[k] = acc / d0;
    }
    out
}

/// Series solution of `d(z) y'(z) = e(z) y(z)` with `y(0) = y0`, which needs
/// `d(0) != 0`.
///
/// Matching the coefficient of `z^m` gives
/// `d_0 (m+1) y_{m+1} = Σ_j e_j y_{m-j} − Σ_{j≥1} d_j (m+1-j) y_{m+1-j}`.
pub fn ode_series(d: &Poly, e: &Poly, y0: Complex64, n: usize) -> Vec<Complex64> {
    let d0 = d.coeff(0);
    assert!(d0 != ZERO, "ode_series requires d(0) != 0");
    let mut y = vec![ZERO; n + 1];
    y[0] = y0;
    for m in 0..n {
        let mut acc = ZERO;
        for j in 0..=e.degree().min(m) {
            acc += e.coeff(j) * y[m - j];
        }
        for j in 1..=d.degree().min(m + 1) {
            let idx = m + 1 - j;
            acc -= d.coeff(j) * (idx as f64) * y[idx];
        }
        y[m + 1] = acc / (d0 * (m + 1) as f64);
    }
    y
}

/// `(num'·den − num·den')`, the numerator of the derivative of `num/den`.
fn wronskian(u: &Rational) -> Poly {
    u.num
        .derivative()
        .mul(&u.den)
        .sub(&u.num.mul(&u.den.derivative()))
}

/// Taylor coefficients of `u^gamma` on the principal branch, with
/// `u(0) != 0` and `u` nonvanishing on the disk of interest.
pub fn rational_power(u: &Rational, gamma: f64, n: usize) -> Vec<Complex64> {
    let u0 = u.num.coeff(0) / u.den.coeff(0);
    assert!(u0 != ZERO, "rational_power requires u(0) != 0");
    // (num·den) y' = γ (num'·den − num·den') y
    let d = u.num.mul(&u.den);
    let e = wronskian(u).scale(Complex64::new(gamma, 0.0));
    ode_series(&d, &e, u0.powf(gamma), n)
}

/// Taylor coefficients of `exp(u)`.
pub fn rational_exp(u: &Rational, n: usize) -> Vec<Complex64> {
    let u0 = u.num.coeff(0) / u.den.coeff(0);
    // den² y' = (num'·den − num·den') y
    let d = u.den.mul(&u.den);
    ode_series(&d, &wronskian(u), u0.exp(), n)
}

/// Taylor coefficients of `log(u)` on the principal branch.
pub fn rational_log(u: &Rational, n: usize) -> Vec<Complex64> {
    let u0 = u.num.coeff(0) / u.den.coeff(0);
    assert!(u0 != ZERO, "rational_log requires u(0) != 0");
    // (log u)' = (num'·den − num·den') / (num·den)
    let deriv = divide_series(wronskian(u).coeffs(), &u.num.mul(&u.den), n.saturating_sub(1));
    let mut out = Vec::with_capacity(n + 1);
    out.push(u0.ln());
    out.extend(
        deriv
            .iter()
            .take(n)
            .enumerate()
            .map(|(j, &c)| c / (j + 1) as f64),
    );
    out
}
