//! The Hecke operator `T(p)` on Fourier expansions.
//!
//! For weight `k`,
//! `A_{T(p)F}(T) = A(pT) + p^{k-2} Σ_α A(T[α]/p) + p^{2k-3} A(T/p)`,
//! where `α` runs over representatives of the `p + 1` sublattices of index
//! `p` in `ℤ²` and terms whose argument is not half-integral are dropped.
//! The output is exact up to `det4 <= ⌊N/p²⌋` when the input is exact up to `N`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::expansion::FourierExpansion;
use super::halfint::HalfIntMatrix;
use crate::arith::{is_prime, Q};
use crate::error::{Error, Result};
use crate::linalg::{rank, solve, QMatrix};

/// Output bound of `T(p)` applied to an expansion of bound `n`.
pub fn hecke_output_bound(n: i64, p: u64) -> i64 {
    n / (p * p) as i64
}

/// Applies `T(p)` and returns the image truncated at `⌊N/p²⌋`.
pub fn hecke_operator(f: &FourierExpansion, p: u64) -> Result<FourierExpansion> {
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    let k = f.weight;
    if k < 2 {
        return Err(Error::UnsupportedWeight(k));
    }
    let out_bound = hecke_output_bound(f.bound(), p);
    if out_bound < 0 {
        return Err(Error::InsufficientTruncation { needed: (p * p) as i64, available: f.bound() });
    }
    let pi = p as i64;
    let pk2 = Q::from_integer(BigInt::from(p).pow(k as u32 - 2));
    let p2k3 = Q::from_integer(BigInt::from(p).pow(2 * k as u32 - 3));
    let get = |t: HalfIntMatrix| f.coeff(&t).expect("Hecke input inside the truncation");
    Ok(FourierExpansion::from_fn(k, out_bound, |t| {
        let (b, a, c) = (t.b, t.a, t.c);
        let mut v = get(t.scale(pi));
        let mut mid = Q::zero();
        for j in 0..pi {
            let bb = b + a * j + c * j * j;
            if bb % pi == 0 {
                mid += get(HalfIntMatrix::new(bb / pi, a + 2 * c * j, c * pi));
            }
        }
        if c % pi == 0 {
            mid += get(HalfIntMatrix::new(b * pi, a, c / pi));
        }
        v += &pk2 * mid;
        if b % pi == 0 && a % pi == 0 && c % pi == 0 {
            v += &p2k3 * get(HalfIntMatrix::new(b / pi, a / pi, c / pi));
        }
        v
    }))
}

/// Coefficient rows of a basis on the positive definite keys (in key order).
pub fn coefficient_rows(basis: &[FourierExpansion]) -> Vec<Vec<Q>> {
    let keys = basis[0].keys();
    (0..keys.len())
        .filter(|&i| keys[i].det4() > 0)
        .map(|i| basis.iter().map(|f| f.coeff_at(i)).collect())
        .collect()
}

/// Matrix of `T(p)` in a basis (column `i` is the image of basis element `i`).
///
/// The images are computed at `⌊N/p²⌋` and expressed in the basis restricted
/// to that bound; every available coefficient is checked.
pub fn hecke_matrix(basis: &[FourierExpansion], p: u64) -> Result<QMatrix> {
    let dim = basis.len();
    if dim == 0 {
        return Ok(Vec::new());
    }
    let out_bound = hecke_output_bound(basis[0].bound(), p);
    let small: Vec<FourierExpansion> = basis.iter().map(|f| f.truncate(out_bound)).collect::<Result<_>>()?;
    let a: QMatrix = (0..small[0].len()).map(|i| small.iter().map(|f| f.coeff_at(i)).collect()).collect();
    let r = rank(&a);
    if r < dim {
        return Err(Error::RankDeficient { rank: r, dim, largest: out_bound });
    }
    let mut m = vec![vec![Q::zero(); dim]; dim];
    for (i, f) in basis.iter().enumerate() {
        let g = hecke_operator(f, p)?;
        let col = solve(&a, &g.coeffs()).ok_or(Error::NotInSpan)?;
        for (j, x) in col.into_iter().enumerate() {
            m[j][i] = x;
        }
    }
    Ok(m)
}

/// Smallest bound at which the basis is linearly independent, searching up to `max_bound`.
pub fn independence_bound(basis: &[FourierExpansion], max_bound: i64) -> Option<i64> {
    if basis.is_empty() {
        return Some(0);
    }
    let keys = basis[0].keys();
    let mut rows: QMatrix = Vec::new();
    for (i, t) in keys.iter().enumerate() {
        if t.det4() > max_bound {
            break;
        }
        rows.push(basis.iter().map(|f| f.coeff_at(i)).collect());
        if rank(&rows) == basis.len() {
            return Some(t.det4().max(t.c).max(t.b));
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qi;
    use crate::siegel::igusa::Generators;

    #[test]
    fn chi10_eigenvalue_at_two() {
        let g = Generators::get(12).unwrap();
        let m = hecke_matrix(std::slice::from_ref(&g.chi10), 2).unwrap();
        assert_eq!(m, vec![vec![qi(240)]]);
    }
}
