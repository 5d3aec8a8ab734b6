//! Local Euler factors as rational functions of `X = p^{-s}`.

use num_complex::Complex64;

use super::SpectralPoint;
use crate::arith::{is_prime, kronecker};
use crate::error::{Error, Result};
use crate::quadform::ClassGroup;

/// Coefficients of `Π (1 - γ X)`, lowest degree first.
pub fn poly_from_roots(params: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(1.0, 0.0)];
    for g in params {
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (i, x) in c.iter().enumerate() {
            next[i] += x;
            next[i + 1] -= x * g;
        }
        c = next;
    }
    c
}

fn eval_poly(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * x + a)
}

/// A local factor `num(X) / den(X)` with `den(0) = 1`.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub p: u64,
    /// Advertised degree (2, 4, 8 or 10).
    pub degree: usize,
    /// Inverse roots of the denominator; zero parameters are omitted.
    pub params: Vec<Complex64>,
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
}

impl LocalFactor {
    pub fn from_parameters(p: u64, degree: usize, params: Vec<Complex64>) -> Self {
        let den = poly_from_roots(&params);
        LocalFactor { p, degree, params, num: vec![Complex64::new(1.0, 0.0)], den }
    }

    /// Value at `X`.
    pub fn eval_x(&self, x: Complex64) -> Complex64 {
        eval_poly(&self.num, x) / eval_poly(&self.den, x)
    }

    /// Value at `s` (with `X = p^{-s}`).
    pub fn eval(&self, s: Complex64) -> Complex64 {
        let x = (-s * (self.p as f64).ln()).exp();
        self.eval_x(x)
    }

    /// Value at real `s`.
    pub fn eval_real(&self, s: f64) -> Complex64 {
        self.eval(Complex64::new(s, 0.0))
    }

    /// Coefficientwise comparison of numerators and denominators.
    pub fn approx_eq(&self, o: &LocalFactor, tol: f64) -> bool {
        let close = |a: &[Complex64], b: &[Complex64]| {
            let n = a.len().max(b.len());
            (0..n).all(|i| {
                let x = a.get(i).copied().unwrap_or_default();
                let y = b.get(i).copied().unwrap_or_default();
                (x - y).norm() <= tol * (1.0 + x.norm().max(y.norm()))
            })
        };
        self.p == o.p && close(&self.num, &o.num) && close(&self.den, &o.den)
    }

    /// Product of two factors at the same prime.
    pub fn mul(&self, o: &LocalFactor) -> LocalFactor {
        let mut params = self.params.clone();
        params.extend(o.params.iter().copied());
        LocalFactor::from_parameters(self.p, self.degree + o.degree, params)
    }
}

/// Degree-4 spin factor `Π_j (1 - α_j X)⁻¹ (1 - α_j⁻¹ X)⁻¹`.
pub fn spin_factor(pt: &SpectralPoint) -> LocalFactor {
    LocalFactor::from_parameters(pt.p, 4, pt.spin_parameters())
}

/// Degree-4 standard factor of the orthogonal side, with parameters
/// `α, β, α⁻¹, β⁻¹` for `α = p^{-ν₁}`, `β = p^{-ν₂}`.
pub fn standard_factor(pt: &SpectralPoint) -> LocalFactor {
    let [a, b] = pt.alphas();
    LocalFactor::from_parameters(pt.p, 4, vec![a, b, a.inv(), b.inv()])
}

/// Degree-10 adjoint factor with parameters
/// `1, 1, a^{±2}, b^{±2}, (ab)^{±1}, (a/b)^{±1}`.
pub fn adjoint_factor(pt: &SpectralPoint) -> LocalFactor {
    let [a, b] = pt.alphas();
    let one = Complex64::new(1.0, 0.0);
    let params = vec![one, one, a * a, (a * a).inv(), b * b, (b * b).inv(), a * b, (a * b).inv(), a / b, b / a];
    LocalFactor::from_parameters(pt.p, 10, params)
}

/// Parameters of `AI(χ)_p`: `{χ(𝔭), χ(𝔭̄)}` when `p` splits, `{1, -1}` when
/// inert, `{χ(𝔭)}` when ramified.
pub fn ai_parameters(g: &ClassGroup, chi: usize, p: u64) -> Result<Vec<Complex64>> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not a finite prime")));
    }
    let ch = &g.characters[chi];
    Ok(match kronecker(g.d, p) {
        1 => {
            let c = g.prime_to_class(p)?;
            vec![ch.value(c), ch.value(g.inverse[c])]
        }
        -1 => vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        _ => vec![ch.value(g.ramified_class(p)?)],
    })
}

/// Degree-2 factor `L(s, AI(χ)_p)`.
pub fn ai_factor(g: &ClassGroup, chi: usize, p: u64) -> Result<LocalFactor> {
    Ok(LocalFactor::from_parameters(p, 2, ai_parameters(g, chi, p)?))
}

/// Degree-8 factor of `π(ν) × AI(χ)_p`: all products of parameters.
pub fn spin_times_ai_factor(pt: &SpectralPoint, g: &ClassGroup, chi: usize) -> Result<LocalFactor> {
    let ai = ai_parameters(g, chi, pt.p)?;
    let params = pt.spin_parameters().iter().flat_map(|s| ai.iter().map(move |t| s * t)).collect();
    Ok(LocalFactor::from_parameters(pt.p, 8, params))
}

/// Twist of the spin factor by the quadratic character `η_D`.
pub fn spin_twist_factor(pt: &SpectralPoint, d: i64) -> LocalFactor {
    let e = kronecker(d, pt.p) as f64;
    let params = pt.spin_parameters().into_iter().map(|a| a * e).filter(|a| a.norm() > 0.0).collect();
    LocalFactor::from_parameters(pt.p, 4, params)
}

/// `ζ_p(s) = (1 - p^{-s})⁻¹`.
pub fn zeta_p(p: u64, s: f64) -> f64 {
    1.0 / (1.0 - (p as f64).powf(-s))
}
