//! Satake parameters of unramified representations of `GSp₂ ≅ GSpin(5)`,
//! local L-factors, and global L-values at the edge of the critical strip.
//!
//! A spectral point `ν = (ν₁, ν₂)` lives in `(ℂ / 2πi(log p)⁻¹ℤ)²` modulo the
//! Weyl group `W(C₂)` (permutations and sign changes). Its spin parameters
//! are `α_j^{±1}` with `α_j = p^{-ν_j}`.

pub mod local;
pub mod lvalues;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::arith::Q;
use crate::error::{Error, Result};
use crate::siegel::eigenforms::Eigenform;

pub use local::LocalFactor;
pub use lvalues::GlobalLValue;

const TOL: f64 = 1e-9;

/// A point of `X_p / W(C₂)` stored by its canonical representative.
#[derive(Clone, Copy, Debug)]
pub struct SpectralPoint {
    pub p: u64,
    pub nu: [Complex64; 2],
}

fn period(p: u64) -> f64 {
    2.0 * PI / (p as f64).ln()
}

fn wrap_im(z: Complex64, per: f64) -> Complex64 {
    let mut im = z.im.rem_euclid(per);
    if (per - im).abs() < TOL * per {
        im = 0.0;
    }
    Complex64::new(z.re, im)
}

/// The eight elements of `W(C₂)` applied to `(ν₁, ν₂)`.
pub fn weyl_orbit(nu: [Complex64; 2]) -> Vec<[Complex64; 2]> {
    let mut out = Vec::with_capacity(8);
    for swap in [false, true] {
        let (a, b) = if swap { (nu[1], nu[0]) } else { (nu[0], nu[1]) };
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                out.push([a * s1, b * s2]);
            }
        }
    }
    out
}

impl SpectralPoint {
    /// Canonical representative: `Re ν₁ >= Re ν₂ >= 0`, imaginary parts in
    /// `[0, 2π/log p)`, ties broken by the smallest `(Im ν₁, Im ν₂)`.
    pub fn new(p: u64, nu: [Complex64; 2]) -> Self {
        let per = period(p);
        let mut best: Option<[Complex64; 2]> = None;
        for w in weyl_orbit(nu) {
            let w = [wrap_im(w[0], per), wrap_im(w[1], per)];
            if w[0].re < w[1].re - TOL || w[1].re < -TOL {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => {
                    let key = |v: &[Complex64; 2]| [v[0].re, v[1].re, -v[0].im, -v[1].im];
                    let (kw, kb) = (key(&w), key(&b));
                    let mut ord = std::cmp::Ordering::Equal;
                    for (x, y) in kw.iter().zip(kb.iter()) {
                        if (x - y).abs() > TOL * (1.0 + per) {
                            ord = x.partial_cmp(y).unwrap();
                            break;
                        }
                    }
                    ord == std::cmp::Ordering::Greater
                }
            };
            if better {
                best = Some(w);
            }
        }
        let nu = best.expect("some Weyl image has nonnegative real parts");
        SpectralPoint { p, nu }
    }

    /// Point with `α_j = p^{-ν_j}`.
    pub fn from_alphas(p: u64, a1: Complex64, a2: Complex64) -> Self {
        let lp = (p as f64).ln();
        Self::new(p, [-a1.ln() / lp, -a2.ln() / lp])
    }

    /// `(α₁, α₂) = (p^{-ν₁}, p^{-ν₂})`.
    pub fn alphas(&self) -> [Complex64; 2] {
        let lp = (self.p as f64).ln();
        [(-self.nu[0] * lp).exp(), (-self.nu[1] * lp).exp()]
    }

    /// Spin parameters `α₁, α₁⁻¹, α₂, α₂⁻¹`.
    pub fn spin_parameters(&self) -> Vec<Complex64> {
        let [a, b] = self.alphas();
        vec![a, a.inv(), b, b.inv()]
    }

    /// True when `Re ν₁ = Re ν₂ = 0` (to `1e-9`).
    pub fn is_tempered(&self) -> bool {
        self.nu.iter().all(|z| z.re.abs() < 1e-9)
    }

    /// Necessary conditions for unitarizability: the spin parameters are
    /// closed under `γ ↦ 1/γ̄` and `|Re ν_j| <= 1/2`.
    pub fn is_unitary_candidate(&self) -> bool {
        if self.nu.iter().any(|z| z.re.abs() > 0.5 + 1e-9) {
            return false;
        }
        let params = self.spin_parameters();
        let mut used = vec![false; params.len()];
        for g in &params {
            let target = g.conj().inv();
            let found = params
                .iter()
                .enumerate()
                .find(|(i, h)| !used[*i] && (*h - target).norm() < 1e-7 * (1.0 + target.norm()));
            match found {
                Some((i, _)) => used[i] = true,
                None => return false,
            }
        }
        true
    }

    /// Equality of `W(C₂)`-orbits up to `tol`.
    pub fn approx_eq(&self, o: &SpectralPoint, tol: f64) -> bool {
        if self.p != o.p {
            return false;
        }
        let per = period(self.p);
        let close = |a: Complex64, b: Complex64| {
            let d = a - b;
            let k = (d.im / per).round();
            (Complex64::new(d.re, d.im - k * per)).norm() < tol
        };
        weyl_orbit(o.nu).iter().any(|w| close(self.nu[0], w[0]) && close(self.nu[1], w[1]))
    }
}

fn pow_f(p: u64, e: f64) -> f64 {
    (p as f64).powf(e)
}

/// Point whose normalised spin polynomial is `1 - aY + bY² - aY³ + Y⁴`.
pub fn from_normalized(p: u64, a: Complex64, b: Complex64) -> Result<SpectralPoint> {
    // u + v = a, uv = b - 2 with u = α₁ + α₁⁻¹, v = α₂ + α₂⁻¹.
    // Double roots are ill-conditioned; discriminants at rounding level are
    // snapped to zero so that coincident parameters come back exactly.
    let snap = |z: Complex64, scale: f64| if z.norm() < 1e-10 * scale { Complex64::new(0.0, 0.0) } else { z };
    let disc = snap(a * a - (b - 2.0) * 4.0, 1.0 + a.norm_sqr() + b.norm()).sqrt();
    let u = (a + disc) / 2.0;
    let v = (a - disc) / 2.0;
    let root = |u: Complex64| (u + snap(u * u - 4.0, 1.0 + u.norm_sqr()).sqrt()) / 2.0;
    let (a1, a2) = (root(u), root(v));
    if a1.norm() == 0.0 || a2.norm() == 0.0 {
        return Err(Error::Invalid("degenerate Satake parameters".into()));
    }
    let pt = SpectralPoint::from_alphas(p, a1, a2);
    let c = local::poly_from_roots(&pt.spin_parameters());
    let expect = [Complex64::new(1.0, 0.0), -a, b, -a, Complex64::new(1.0, 0.0)];
    let scale = 1.0 + a.norm() + b.norm();
    if c.iter().zip(expect.iter()).any(|(x, y)| (x - y).norm() > 1e-8 * scale) {
        return Err(Error::Invalid("no Satake parameters reproduce the spin polynomial".into()));
    }
    Ok(pt)
}

/// Normalised spin coefficients `(a, b)` from the classical eigenvalues
/// `λ(p)` of `T(p)` and `λ₁(p²)` of the operator attached to `diag(1,p,p²,p)`,
/// using `q₂ = p λ₁(p²) + (p² + 1) p^{2l-5}`.
pub fn normalized_from_eigenvalues(lambda: Complex64, lambda1: Complex64, l: i64, p: u64) -> (Complex64, Complex64) {
    let pf = p as f64;
    let q2 = lambda1 * pf + (pf * pf + 1.0) * pow_f(p, (2 * l - 5) as f64);
    (lambda * pow_f(p, 1.5 - l as f64), q2 * pow_f(p, (3 - 2 * l) as f64))
}

/// Spectral point of an eigenform from its eigenvalues at `p`.
pub fn satake_from_eigenvalues(lambda: Complex64, lambda1: Complex64, l: i64, p: u64) -> Result<SpectralPoint> {
    let (a, b) = normalized_from_eigenvalues(lambda, lambda1, l, p);
    from_normalized(p, a, b)
}

/// Inverse of `satake_from_eigenvalues`: `(λ(p), λ₁(p²))`.
pub fn eigenvalues_from_satake(pt: &SpectralPoint, l: i64) -> (Complex64, Complex64) {
    let p = pt.p;
    let pf = p as f64;
    let c = local::poly_from_roots(&pt.spin_parameters());
    let a = -c[1];
    let b = c[2];
    let lambda = a * pow_f(p, l as f64 - 1.5);
    let q2 = b * pow_f(p, (2 * l - 3) as f64);
    let lambda1 = (q2 - (pf * pf + 1.0) * pow_f(p, (2 * l - 5) as f64)) / pf;
    (lambda, lambda1)
}

/// Spectral points of every embedding of a Siegel eigenform at `p`,
/// in the order of `form.alg().embeddings()`.
pub fn spectral_points(form: &Eigenform, p: u64) -> Result<Vec<SpectralPoint>> {
    let l = form.weight;
    let sd = form.spin_data(p)?;
    let pq = Q::from_integer(p.into());
    let na = sd.lambda.scale(&pq.pow((3 - 2 * l) as i32));
    let nb = sd.coeffs[2].scale(&pq.pow((3 - 2 * l) as i32));
    // a = λ p^{3/2-l} = (λ p^{3-2l}) p^{l-3/2}.
    let half = pow_f(p, l as f64 - 1.5);
    form.alg()
        .embeddings()
        .into_iter()
        .map(|z| from_normalized(p, na.eval_c(z) * half, nb.eval_c(z)))
        .collect()
}
