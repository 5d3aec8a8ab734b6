//! Hecke eigenforms of level one and Saito–Kurokawa detection.
//!
//! Eigenforms are Galois orbits over `Q`: each carries its coordinates and
//! eigenvalues as elements of `Q[θ]/(m)`, where `θ` is the eigenvalue of a
//! fixed rational combination of the Hecke operators. A Siegel orbit is a
//! Saito–Kurokawa lift when an elliptic eigenform `f` of weight `2l-2`
//! satisfies `λ(p) = a_f(p) + p^{l-1} + p^{l-2}` exactly at every prime used.

use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::eigensys::{decompose, EigenOrbit};
use super::elliptic::{coefficient_rows as q_rows, cusp_dim, hecke_matrix_q};
use super::expansion::FourierExpansion;
use super::halfint::HalfIntMatrix;
use super::hecke::{coefficient_rows, hecke_matrix, independence_bound};
use super::igusa::{cusp_basis, Monomial};
use crate::arith::{is_fundamental, is_prime, kronecker, qi, Q};
use crate::error::{Error, Result};
use crate::linalg::{charpoly, identity, mat_add, mat_scale, QMatrix};
use crate::numfield::Algebra;
use crate::quadform::reduced_forms;
use crate::poly::QPoly;

fn pow_q(p: u64, e: i64) -> Q {
    if e >= 0 {
        Q::from_integer(BigInt::from(p).pow(e as u32))
    } else {
        Q::one() / Q::from_integer(BigInt::from(p).pow((-e) as u32))
    }
}

/// The shift `p^{l-1} + p^{l-2}` in the Saito–Kurokawa eigenvalue relation.
pub fn sk_shift(l: i64, p: u64) -> Q {
    pow_q(p, l - 1) + pow_q(p, l - 2)
}

fn check_primes(primes: &[u64]) -> Result<()> {
    if primes.is_empty() {
        return Err(Error::Invalid("at least one prime is required".into()));
    }
    if let Some(&p) = primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    Ok(())
}

/// A Galois orbit of normalised elliptic Hecke eigenforms (`a(1) = 1`).
#[derive(Clone, Debug)]
pub struct EllipticEigenform {
    pub weight: i64,
    pub orbit: EigenOrbit,
    /// `a(1), …, a(M)` in the orbit algebra.
    pub coefficients: Vec<QPoly>,
}

impl EllipticEigenform {
    pub fn degree(&self) -> usize {
        self.orbit.degree()
    }

    pub fn alg(&self) -> &Algebra {
        &self.orbit.alg
    }

    /// Eigenvalue `a(p)` for a prime used in the decomposition.
    pub fn a_p(&self, p: u64) -> Option<&QPoly> {
        self.orbit.eigenvalue(p)
    }

    /// Coefficient `a(n)` for `1 <= n <= M`.
    pub fn coefficient(&self, n: usize) -> Option<&QPoly> {
        n.checked_sub(1).and_then(|i| self.coefficients.get(i))
    }

    pub fn restrict(&self, g: &QPoly) -> EllipticEigenform {
        let orbit = self.orbit.restrict(g);
        let coefficients = self.coefficients.iter().map(|c| orbit.alg.reduce(c)).collect();
        EllipticEigenform { weight: self.weight, orbit, coefficients }
    }
}

/// Eigenforms of `S_k(SL₂(ℤ))` with eigenvalues at `primes` and coefficients up to `precision`.
pub fn elliptic_eigenforms(k: i64, primes: &[u64], precision: usize) -> Result<Vec<EllipticEigenform>> {
    check_primes(primes)?;
    if k % 2 != 0 || k < 0 {
        return Err(Error::UnsupportedWeight(k));
    }
    if cusp_dim(k) == 0 {
        return Ok(Vec::new());
    }
    let mats: Vec<(u64, QMatrix)> = primes.iter().map(|&p| Ok((p, hecke_matrix_q(k, p)?))).collect::<Result<_>>()?;
    let rows = q_rows(k, precision.max(1));
    let d = decompose(&mats, &rows, None)?;
    Ok(d
        .orbits
        .into_iter()
        .map(|orbit| {
            let coefficients = rows.iter().map(|r| orbit.apply_row(r)).collect();
            EllipticEigenform { weight: k, orbit, coefficients }
        })
        .collect())
}

/// Elliptic source of a Saito–Kurokawa lift.
#[derive(Clone, Debug)]
pub struct SkSource {
    pub form: EllipticEigenform,
    /// Image of the Siegel generator `θ` in the algebra of `form`.
    pub theta: QPoly,
}

impl SkSource {
    /// Transports a Siegel orbit value into the algebra of the source.
    pub fn transport(&self, v: &QPoly) -> QPoly {
        self.form.alg().substitute(v, &self.theta)
    }
}

/// Data read off the degree-4 spin polynomial at `p`.
#[derive(Clone, Debug)]
pub struct SpinData {
    pub p: u64,
    pub lambda: QPoly,
    /// Eigenvalue of the operator attached to `diag(1,p,p²,p)`.
    pub lambda1: QPoly,
    /// Coefficients of `Q_p(X) = 1 - λX + q₂X² - p^{2l-3}λX³ + p^{4l-6}X⁴`.
    pub coeffs: [QPoly; 5],
    /// Matrix used in the rationality identity.
    pub t: HalfIntMatrix,
}

/// A Galois orbit of Siegel Hecke eigenforms.
#[derive(Clone, Debug)]
pub struct Eigenform {
    pub weight: i64,
    pub monomials: Vec<Monomial>,
    pub basis: Arc<Vec<FourierExpansion>>,
    pub orbit: EigenOrbit,
    pub sk: Option<SkSource>,
}

impl Eigenform {
    pub fn is_sk(&self) -> bool {
        self.sk.is_some()
    }

    pub fn degree(&self) -> usize {
        self.orbit.degree()
    }

    pub fn alg(&self) -> &Algebra {
        &self.orbit.alg
    }

    pub fn bound(&self) -> i64 {
        self.basis[0].bound()
    }

    pub fn lambda(&self, p: u64) -> Option<&QPoly> {
        self.orbit.eigenvalue(p)
    }

    /// Eigenvalue as a rational number when the orbit is a single form.
    pub fn lambda_rational(&self, p: u64) -> Option<Q> {
        self.lambda(p).and_then(|v| self.alg().as_rational(v))
    }

    /// Eigenvalue at each complex embedding, in the order of `alg().embeddings()`.
    pub fn lambda_embedded(&self, p: u64) -> Option<Vec<Complex64>> {
        let v = self.lambda(p)?;
        Some(self.alg().embeddings().into_iter().map(|z| v.eval_c(z)).collect())
    }

    /// Fourier coefficient `A(T)` of the eigenform, in the orbit algebra.
    pub fn coefficient(&self, t: &HalfIntMatrix) -> Result<QPoly> {
        let mut acc = QPoly::zero();
        for (v, f) in self.orbit.vector.iter().zip(self.basis.iter()) {
            let a = f.coeff_checked(t)?;
            if !a.is_zero() {
                acc = acc.add(&v.scale(&a));
            }
        }
        Ok(self.alg().reduce(&acc))
    }

    /// Spin polynomial at `p` from the rationality identity
    /// `Σ_m A(p^m T) X^m · Q_p(X) = A(T)(1 - p^{l-2} X)(1 - χ_D(p) p^{l-2} X)`,
    /// valid for primitive `T` whose discriminant `D = -det4(T)` is
    /// fundamental with class number one.
    pub fn spin_data(&self, p: u64) -> Result<SpinData> {
        let k = self.weight;
        let lambda = self.lambda(p).ok_or_else(|| Error::Invalid(format!("T({p}) was not computed")))?.clone();
        let alg = self.alg().clone();
        let n = self.bound();
        let pi = p as i64;
        let p4 = pi.pow(4);
        let keys = self.basis[0].keys();
        let candidates = |coprime: bool| {
            keys.iter()
                .filter(move |t| {
                    let d = t.det4();
                    d > 0 && t.content() == 1 && d * p4 <= n && t.c * pi * pi <= n
                        && (!coprime || d % pi != 0)
                        && is_fundamental(-d) && reduced_forms(-d).len() == 1
                })
                .copied()
                .collect::<Vec<_>>()
        };
        let mut list = candidates(true);
        list.extend(candidates(false));
        if list.is_empty() {
            let needed = 3 * p4;
            return Err(Error::InsufficientTruncation { needed, available: n });
        }
        for t in list {
            let a0 = self.coefficient(&t)?;
            let Ok(inv) = alg.inv(&a0) else { continue };
            let a1 = self.coefficient(&t.scale(pi))?;
            let a2 = self.coefficient(&t.scale(pi * pi))?;
            let chi = qi(kronecker(-t.det4(), p) as i64);
            // X¹: A(pT) - λA(T) = -(1 + χ(p)) p^{k-2} A(T).
            let lhs = a1.sub(&alg.mul(&lambda, &a0));
            let rhs = a0.scale(&-((Q::one() + &chi) * pow_q(p, k - 2)));
            if !alg.reduce(&lhs.sub(&rhs)).is_zero() {
                return Err(Error::Invalid(format!("rationality identity fails at p = {p}, T = {t}")));
            }
            // X²: A(p²T) - λA(pT) + q₂A(T) = χ(p) p^{2k-4} A(T).
            let q2 = alg.mul(&alg.mul(&lambda, &a1).sub(&a2), &inv).add(&QPoly::constant(chi * pow_q(p, 2 * k - 4)));
            let c3 = alg.reduce(&lambda.scale(&-pow_q(p, 2 * k - 3)));
            let big = t.scale(pi * pi * pi);
            if big.det4() <= n && big.c <= n {
                let a3 = self.coefficient(&big)?;
                let x3 = a3
                    .sub(&alg.mul(&lambda, &a2))
                    .add(&alg.mul(&q2, &a1))
                    .add(&alg.mul(&c3, &a0));
                if !alg.reduce(&x3).is_zero() {
                    return Err(Error::Invalid(format!("rationality identity fails in degree 3 at p = {p}")));
                }
            }
            let lambda1 = q2.sub(&QPoly::constant(qi(pi * pi + 1) * pow_q(p, 2 * k - 5))).scale(&(Q::one() / qi(pi)));
            let coeffs = [
                QPoly::constant(Q::one()),
                lambda.scale(&-Q::one()),
                q2,
                c3,
                QPoly::constant(pow_q(p, 4 * k - 6)),
            ];
            return Ok(SpinData { p, lambda, lambda1, coeffs, t });
        }
        Err(Error::Invalid(format!("no admissible T with invertible coefficient at p = {p}")))
    }

    /// Checks `Q_p(X) = (1 - p^{l-1}X)(1 - p^{l-2}X)(1 - a_f(p)X + p^{2l-3}X²)` exactly
    /// in the algebra of the elliptic source. Returns `None` for forms that are not lifts.
    pub fn sk_spin_factorization(&self, p: u64) -> Result<Option<bool>> {
        let Some(src) = &self.sk else { return Ok(None) };
        let k = self.weight;
        let sd = self.spin_data(p)?;
        let ealg = src.form.alg();
        let ap = src.form.a_p(p).ok_or_else(|| Error::Invalid(format!("a({p}) was not computed")))?;
        let lin = |c: Q| vec![QPoly::constant(Q::one()), QPoly::constant(-c)];
        let ell = vec![QPoly::constant(Q::one()), ap.scale(&-Q::one()), QPoly::constant(pow_q(p, 2 * k - 3))];
        let prod = poly_mul(ealg, &poly_mul(ealg, &lin(pow_q(p, k - 1)), &lin(pow_q(p, k - 2))), &ell);
        Ok(Some(prod.iter().zip(sd.coeffs.iter()).all(|(a, b)| ealg.reduce(&a.sub(&src.transport(b))).is_zero())))
    }
}

/// Product of polynomials with coefficients in an algebra.
pub fn poly_mul(alg: &Algebra, a: &[QPoly], b: &[QPoly]) -> Vec<QPoly> {
    let mut out = vec![QPoly::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&alg.mul(x, y));
        }
    }
    out
}

/// Truncation that lets `spin_data(p)` use `T = [1,1,1]` or `[1,0,1]`.
pub fn spin_bound(p: u64) -> i64 {
    4 * (p as i64).pow(4)
}

/// Smallest bound at which `T(p)` matrices can be formed for every listed prime.
pub fn hecke_bound(l: i64, primes: &[u64]) -> Result<i64> {
    check_primes(primes)?;
    let ms = super::igusa::monomials(l, true);
    if ms.is_empty() {
        return Ok(1);
    }
    let mut trial = 8;
    let nprime = loop {
        let basis: Vec<FourierExpansion> = cusp_basis(l, trial)?.into_iter().map(|(_, f)| f).collect();
        if let Some(b) = independence_bound(&basis, trial) {
            break b.max(1);
        }
        if trial > 4096 {
            return Err(Error::RankDeficient { rank: 0, dim: ms.len(), largest: trial });
        }
        trial *= 2;
    };
    let pmax = *primes.iter().max().unwrap() as i64;
    Ok(pmax * pmax * nprime)
}

/// Hecke eigenbasis of `S_l` with eigenvalues at `primes`.
///
/// The truncation is `max(bound, hecke_bound(l, primes))`. Each orbit is
/// normalised so that its first nonzero coefficient (in key order) is 1.
pub fn eigenforms(l: i64, primes: &[u64], bound: Option<i64>) -> Result<Vec<Eigenform>> {
    check_primes(primes)?;
    let n = bound.unwrap_or(0).max(hecke_bound(l, primes)?);
    let with_monomials = cusp_basis(l, n)?;
    if with_monomials.is_empty() {
        return Ok(Vec::new());
    }
    let monomials: Vec<Monomial> = with_monomials.iter().map(|(m, _)| *m).collect();
    let basis: Arc<Vec<FourierExpansion>> = Arc::new(with_monomials.into_iter().map(|(_, f)| f).collect());
    let mats: Vec<(u64, QMatrix)> = primes
        .par_iter()
        .map(|&p| Ok((p, hecke_matrix(&basis, p)?)))
        .collect::<Result<_>>()?;
    let rows = coefficient_rows(&basis);
    let k_ell = 2 * l - 2;
    let ell = elliptic_eigenforms(k_ell, primes, 32)?;
    let ell_mats: Vec<QMatrix> = if ell.is_empty() {
        Vec::new()
    } else {
        primes
            .iter()
            .map(|&p| {
                let m = hecke_matrix_q(k_ell, p)?;
                Ok(mat_add(&m, &mat_scale(&identity(m.len()), &sk_shift(l, p))))
            })
            .collect::<Result<_>>()?
    };
    let hint = |coeffs: &[Q]| -> Result<QPoly> {
        if ell_mats.is_empty() {
            return Ok(QPoly::constant(Q::one()));
        }
        let d = ell_mats[0].len();
        let mut g = vec![vec![Q::zero(); d]; d];
        for (c, m) in coeffs.iter().zip(&ell_mats) {
            g = mat_add(&g, &mat_scale(m, c));
        }
        Ok(charpoly(&g))
    };
    let dec = decompose(&mats, &rows, Some(&hint))?;
    let mut work = dec.orbits;
    let mut forms = Vec::new();
    while let Some(o) = work.pop() {
        match match_source(&o, &dec.generator, primes, l, &ell)? {
            Matched::Split(a, b) => {
                work.push(o.restrict(&a));
                work.push(o.restrict(&b));
            }
            Matched::Lift(src) => forms.push(Eigenform {
                weight: l,
                monomials: monomials.clone(),
                basis: basis.clone(),
                orbit: o,
                sk: Some(src),
            }),
            Matched::General => forms.push(Eigenform {
                weight: l,
                monomials: monomials.clone(),
                basis: basis.clone(),
                orbit: o,
                sk: None,
            }),
        }
    }
    forms.sort_by_key(|f| (!f.is_sk(), f.degree(), f.alg().modulus.to_string()));
    Ok(forms)
}

enum Matched {
    Split(QPoly, QPoly),
    Lift(SkSource),
    General,
}

fn match_source(o: &EigenOrbit, generator: &[Q], primes: &[u64], l: i64, ell: &[EllipticEigenform]) -> Result<Matched> {
    let m = &o.alg.modulus;
    for e in ell {
        let ealg = e.alg();
        // Generator eigenvalue predicted by the lift relation.
        let mut mu = QPoly::zero();
        for (c, &p) in generator.iter().zip(primes) {
            if !c.is_zero() {
                let ap = e.a_p(p).expect("elliptic eigenvalue at every prime");
                mu = mu.add(&ap.add(&QPoly::constant(sk_shift(l, p))).scale(c));
            }
        }
        mu = ealg.reduce(&mu);
        let h = QPoly::gcd(&ealg.modulus, &ealg.substitute(m, &mu)).monic();
        if h.degree() < 1 {
            continue;
        }
        let sub = e.restrict(&h);
        let mu_h = sub.alg().reduce(&mu);
        let g = QPoly::gcd(m, &sub.alg().charpoly(&mu_h)).monic();
        if g.degree() < m.degree() {
            return Ok(Matched::Split(g.clone(), m.divrem(&g).0.monic()));
        }
        for &p in primes {
            let lam = o.eigenvalue(p).expect("Siegel eigenvalue at every prime");
            let lhs = sub.alg().substitute(lam, &mu_h);
            let rhs = sub.a_p(p).unwrap().add(&QPoly::constant(sk_shift(l, p)));
            if !sub.alg().reduce(&lhs.sub(&rhs)).is_zero() {
                return Err(Error::LiftMismatch(p));
            }
        }
        return Ok(Matched::Lift(SkSource { form: sub, theta: mu_h }));
    }
    Ok(Matched::General)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_ten_is_a_lift() {
        let fs = eigenforms(10, &[2, 3], Some(spin_bound(2))).unwrap();
        assert_eq!(fs.len(), 1);
        assert!(fs[0].is_sk());
        assert_eq!(fs[0].lambda_rational(2), Some(qi(240)));
        assert_eq!(fs[0].sk_spin_factorization(2).unwrap(), Some(true));
    }
}
