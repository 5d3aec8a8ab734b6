//! Unramified Plancherel measure of the split group of type `C₂` on the
//! tempered spectrum, and the weighted spectral measures `Λ_S^χ(s)`.
//!
//! A tempered point is written `ν = iθ`, so that `α_j = p^{-ν_j} = e^{-iφ_j}`
//! with angles `φ_j = θ_j log p`. The density is the Macdonald product
//! `|c(ν)|⁻²` over the roots `α₁², α₂², α₁α₂, α₁/α₂`, normalised to total
//! mass one on the grid. Quadrature is the tensor trapezoid rule on the
//! torus, evaluated once per `W(C₂)`-orbit of grid nodes.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{is_prime, kronecker};
use crate::error::{Error, Result};
use crate::quadform::ClassGroup;
use crate::satake::local::{adjoint_factor, ai_parameters, spin_factor, spin_times_ai_factor, zeta_p, LocalFactor};
use crate::satake::SpectralPoint;

/// Default number of nodes per torus coordinate.
pub const DEFAULT_NODES: usize = 256;

/// Default tolerance on the quadrature error estimate.
pub const DEFAULT_TOL: f64 = 1e-6;

fn roots(a: Complex64, b: Complex64) -> [Complex64; 4] {
    [a * a, b * b, a * b, a / b]
}

/// Harish-Chandra `c`-function `Π_β (1 - β/p) / (1 - β)` over the positive
/// roots, with `β` in `α₁², α₂², α₁α₂, α₁/α₂`.
pub fn c_function(nu: [Complex64; 2], p: u64) -> Result<Complex64> {
    let pt = SpectralPoint { p, nu };
    let [a, b] = pt.alphas();
    let pf = p as f64;
    let mut out = Complex64::new(1.0, 0.0);
    for beta in roots(a, b) {
        let den = Complex64::new(1.0, 0.0) - beta;
        if den.norm() < 1e-12 {
            return Err(Error::Invalid(format!("ν = {nu:?} lies on a pole of the c-function")));
        }
        out *= (Complex64::new(1.0, 0.0) - beta / pf) / den;
    }
    Ok(out)
}

/// Unnormalised density `|c(ν)|⁻²` at the tempered point with angles `φ`.
pub fn raw_density(phi: [f64; 2], p: u64) -> f64 {
    let a = Complex64::from_polar(1.0, -phi[0]);
    let b = Complex64::from_polar(1.0, -phi[1]);
    let pf = p as f64;
    roots(a, b)
        .iter()
        .map(|beta| {
            let one = Complex64::new(1.0, 0.0);
            (one - beta).norm_sqr() / (one - beta / pf).norm_sqr()
        })
        .product()
}

/// Total raw mass `∫_T |c|⁻² dφ / (2π)²` predicted by Macdonald's formula:
/// `|W| / W(t) = 8 / ((1 + t)(1 + t + t² + t³))` with `t = 1/p`.
pub fn macdonald_mass(p: u64) -> f64 {
    let t = 1.0 / p as f64;
    8.0 / ((1.0 + t) * (1.0 + t + t * t + t * t * t))
}

/// A chamber node: grid indices, orbit images and the orbit size.
#[derive(Clone, Debug)]
struct Node {
    orbit: Vec<(usize, usize)>,
    even: bool,
}

/// Trapezoid grid on `X_p⁰ / W(C₂)`.
#[derive(Clone, Debug)]
pub struct PlancherelGrid {
    pub p: u64,
    pub n: usize,
    nodes: Vec<Node>,
    /// Normalised density at each chamber node.
    density: Vec<f64>,
    /// Raw mass at `n` and at `n / 2`.
    pub raw_mass: f64,
    pub raw_mass_half: f64,
}

/// Value of a quadrature with the difference to the half grid as estimate.
#[derive(Clone, Copy, Debug)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

impl PlancherelGrid {
    /// Grid with `n` nodes per coordinate (`n` even, at least 8).
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::Invalid(format!("grid size {n} must be even and at least 8")));
        }
        let half = n / 2;
        let mut nodes = Vec::new();
        for i in 0..=half {
            for j in 0..=i {
                let mut orbit: Vec<(usize, usize)> = Vec::with_capacity(8);
                for (x, y) in [(i, j), (j, i)] {
                    for sx in [false, true] {
                        for sy in [false, true] {
                            let fx = if sx { (n - x) % n } else { x };
                            let fy = if sy { (n - y) % n } else { y };
                            if !orbit.contains(&(fx, fy)) {
                                orbit.push((fx, fy));
                            }
                        }
                    }
                }
                nodes.push(Node { orbit, even: i % 2 == 0 && j % 2 == 0 });
            }
        }
        let step = 2.0 * PI / n as f64;
        let raw: Vec<f64> = nodes
            .par_iter()
            .map(|nd| {
                let (i, j) = nd.orbit[0];
                raw_density([i as f64 * step, j as f64 * step], p)
            })
            .collect();
        let mut grid = PlancherelGrid { p, n, nodes, density: raw, raw_mass: 0.0, raw_mass_half: 0.0 };
        let m = grid.sum(|k| grid.density[k]);
        grid.raw_mass = m.0;
        grid.raw_mass_half = m.1;
        let scale = 1.0 / m.0;
        for d in grid.density.iter_mut() {
            *d *= scale;
        }
        Ok(grid)
    }

    /// Angles of a grid index pair.
    pub fn angles(&self, ij: (usize, usize)) -> [f64; 2] {
        let step = 2.0 * PI / self.n as f64;
        [ij.0 as f64 * step, ij.1 as f64 * step]
    }

    /// Tempered spectral point at the given angles.
    pub fn point(&self, phi: [f64; 2]) -> SpectralPoint {
        let lp = (self.p as f64).ln();
        SpectralPoint { p: self.p, nu: [Complex64::new(0.0, phi[0] / lp), Complex64::new(0.0, phi[1] / lp)] }
    }

    /// Full-grid and half-grid trapezoid sums of a per-node value already
    /// averaged over the orbit.
    fn sum<F: Fn(usize) -> f64 + Sync>(&self, f: F) -> (f64, f64) {
        let (full, half) = (0..self.nodes.len())
            .into_par_iter()
            .map(|k| {
                let nd = &self.nodes[k];
                let v = f(k) * nd.orbit.len() as f64;
                (v, if nd.even { v } else { 0.0 })
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let n2 = (self.n * self.n) as f64;
        (full / n2, 4.0 * half / n2)
    }

    /// `∫ f dμ^Pl`, with `f` averaged over each Weyl orbit (so the result is
    /// the integral of the Weyl symmetrisation of `f`).
    pub fn integrate<F: Fn(&SpectralPoint) -> f64 + Sync>(&self, f: F) -> Quadrature {
        self.integrate_split(|_| 1.0, f)
    }

    /// `∫ g·f dμ^Pl` where `g` is Weyl invariant (evaluated once per orbit)
    /// and `f` is averaged over the orbit.
    pub fn integrate_split<G, F>(&self, g: G, f: F) -> Quadrature
    where
        G: Fn(&SpectralPoint) -> f64 + Sync,
        F: Fn(&SpectralPoint) -> f64 + Sync,
    {
        let (full, half) = self.sum(|k| {
            let nd = &self.nodes[k];
            let rep = self.point(self.angles(nd.orbit[0]));
            let avg = nd.orbit.iter().map(|&ij| f(&self.point(self.angles(ij)))).sum::<f64>() / nd.orbit.len() as f64;
            self.density[k] * g(&rep) * avg
        });
        Quadrature { value: full, error: (full - half).abs() }
    }

    /// `∫ f dμ^Pl`, failing when the half-grid comparison exceeds `tol`.
    pub fn integrate_checked<F: Fn(&SpectralPoint) -> f64 + Sync>(&self, f: F, tol: f64) -> Result<f64> {
        let q = self.integrate(f);
        if q.error > tol {
            return Err(Error::Tolerance { what: format!("Plancherel quadrature at p = {}", self.p), requested: tol, achieved: q.error });
        }
        Ok(q.value)
    }

    /// Number of chamber nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// A trigonometric polynomial `Σ c_m α₁^{m₁} α₂^{m₂}` on the spectrum.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HeckeSymbol {
    pub terms: BTreeMap<(i64, i64), Complex64>,
}

fn weyl_exponents(m: (i64, i64)) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(8);
    for (a, b) in [(m.0, m.1), (m.1, m.0)] {
        for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            out.push((sa * a, sb * b));
        }
    }
    out
}

impl HeckeSymbol {
    pub fn constant(c: f64) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0), Complex64::new(c, 0.0));
        HeckeSymbol { terms }
    }

    /// Sum of the distinct monomials in the Weyl orbit of `α^m`.
    pub fn orbit_sum(m: (i64, i64)) -> Self {
        let mut ex = weyl_exponents(m);
        ex.sort();
        ex.dedup();
        HeckeSymbol { terms: ex.into_iter().map(|e| (e, Complex64::new(1.0, 0.0))).collect() }
    }

    /// Trace of the spin representation, `α₁ + α₁⁻¹ + α₂ + α₂⁻¹`.
    pub fn spin_trace() -> Self {
        Self::orbit_sum((1, 0))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((i64, i64), Complex64)>) -> Self {
        let mut s = HeckeSymbol::default();
        for (m, c) in terms {
            *s.terms.entry(m).or_default() += c;
        }
        s.terms.retain(|_, c| c.norm() != 0.0);
        s
    }

    pub fn scale(&self, c: f64) -> Self {
        HeckeSymbol { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn add(&self, o: &HeckeSymbol) -> Self {
        Self::from_terms(self.terms.iter().chain(o.terms.iter()).map(|(m, v)| (*m, *v)))
    }

    pub fn mul(&self, o: &HeckeSymbol) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .flat_map(|(m, v)| o.terms.iter().map(move |(n, w)| ((m.0 + n.0, m.1 + n.1), v * w))),
        )
    }

    /// Average over the eight Weyl images.
    pub fn symmetrize(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .flat_map(|(m, v)| weyl_exponents(*m).into_iter().map(move |e| (e, v / 8.0))),
        )
    }

    /// True when every Weyl image of the symbol equals the symbol.
    pub fn is_invariant(&self) -> bool {
        let sym = self.symmetrize();
        let keys: std::collections::BTreeSet<(i64, i64)> = self.terms.keys().chain(sym.terms.keys()).copied().collect();
        keys.iter().all(|k| {
            let a = self.terms.get(k).copied().unwrap_or_default();
            let b = sym.terms.get(k).copied().unwrap_or_default();
            (a - b).norm() <= 1e-12 * (1.0 + a.norm())
        })
    }

    /// Value at a spectral point.
    pub fn eval(&self, pt: &SpectralPoint) -> Complex64 {
        let [a, b] = pt.alphas();
        self.terms.iter().map(|((i, j), c)| c * a.powi(*i as i32) * b.powi(*j as i32)).sum()
    }
}

fn check_s(primes: &[u64], d: i64) -> Result<()> {
    let mut seen = Vec::new();
    for &p in primes {
        if !is_prime(p) || p == 2 {
            return Err(Error::Invalid(format!("{p} is not an odd prime")));
        }
        if kronecker(d, p) == 0 {
            return Err(Error::Invalid(format!("{p} divides D = {d}")));
        }
        if seen.contains(&p) {
            return Err(Error::Invalid(format!("{p} repeated in S")));
        }
        seen.push(p);
    }
    Ok(())
}

fn real(z: Complex64) -> f64 {
    z.re
}

/// Local weighted integral at one prime:
/// `ζ_p(2)ζ_p(4) / (ζ_p(1) L_p(s+1, AI(χ))) ·
///  ∫ α(ν) L_p(1/2, π(ν)×AI(χ)) L_p(1/2+s, π(ν)) / L_p(1, π(ν), Ad) dμ^Pl`.
pub fn lambda_local(grid: &PlancherelGrid, g: &ClassGroup, chi: usize, alpha: &HeckeSymbol, s: f64) -> Result<Quadrature> {
    let p = grid.p;
    check_s(&[p], g.d)?;
    let ai = LocalFactor::from_parameters(p, 2, ai_parameters(g, chi, p)?);
    let pre = zeta_p(p, 2.0) * zeta_p(p, 4.0) / (zeta_p(p, 1.0) * real(ai.eval_real(s + 1.0)));
    let weight = |pt: &SpectralPoint| {
        let conv = spin_times_ai_factor(pt, g, chi).map(|f| real(f.eval_real(0.5))).unwrap_or(f64::NAN);
        conv * real(spin_factor(pt).eval_real(0.5 + s)) / real(adjoint_factor(pt).eval_real(1.0))
    };
    let q = grid.integrate_split(weight, |pt| alpha.eval(pt).re);
    if !q.value.is_finite() {
        return Err(Error::Invalid("non-finite Λ integrand".into()));
    }
    Ok(Quadrature { value: pre * q.value, error: pre.abs() * q.error })
}

/// `Λ_S^χ(s) = Π_{p∈S} Λ_p`, with `alphas` giving the test symbol at each
/// `p ∈ S`; the empty product is `1`.
pub fn lambda_measure(g: &ClassGroup, chi: usize, alphas: &[(u64, HeckeSymbol)], s: f64, n: usize) -> Result<Quadrature> {
    let primes: Vec<u64> = alphas.iter().map(|(p, _)| *p).collect();
    check_s(&primes, g.d)?;
    let mut value = 1.0;
    let mut rel = 0.0;
    for (p, alpha) in alphas {
        let grid = PlancherelGrid::new(*p, n)?;
        let q = lambda_local(&grid, g, chi, alpha, s)?;
        value *= q.value;
        rel += q.error / q.value.abs().max(f64::MIN_POSITIVE);
    }
    Ok(Quadrature { value, error: rel * value.abs() })
}

/// `d/ds Λ_S^χ(s)` at `s = 0` by five-point central differences with step
/// `10⁻³` and one Richardson step; the error is the Richardson correction.
pub fn lambda_s_derivative_at_0(g: &ClassGroup, chi: usize, alphas: &[(u64, HeckeSymbol)], n: usize) -> Result<Quadrature> {
    let primes: Vec<u64> = alphas.iter().map(|(p, _)| *p).collect();
    check_s(&primes, g.d)?;
    let grids: Vec<PlancherelGrid> = primes.iter().map(|&p| PlancherelGrid::new(p, n)).collect::<Result<_>>()?;
    let f = |s: f64| -> Result<f64> {
        let mut v = 1.0;
        for (grid, (_, alpha)) in grids.iter().zip(alphas) {
            v *= lambda_local(grid, g, chi, alpha, s)?.value;
        }
        Ok(v)
    };
    let five = |h: f64| -> Result<f64> {
        Ok((-f(2.0 * h)? + 8.0 * f(h)? - 8.0 * f(-h)? + f(-2.0 * h)?) / (12.0 * h))
    };
    let h = 1e-3;
    let d1 = five(h)?;
    let d2 = five(h / 2.0)?;
    Ok(Quadrature { value: d2 + (d2 - d1) / 15.0, error: (d2 - d1).abs() / 15.0 })
}
