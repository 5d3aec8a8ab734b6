//! Degree-two Siegel Eisenstein series.
//!
//! For `T > 0` the coefficient is
//! `2/(ζ(1-k)ζ(3-2k)) · Σ_{d | cont T} d^{k-1} H(k-1, det4(T)/d²)`
//! with Cohen's function `H`; singular `T` of content `n` carry the
//! coefficient `-2k/B_k · σ_{k-1}(n)` of the elliptic Eisenstein series.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::expansion::FourierExpansion;
use super::halfint::HalfIntMatrix;
use crate::arith::{
    bernoulli, divisors, fundamental_part, kronecker, l_at_negative, mobius, qi, sigma, Q,
};
use crate::error::{Error, Result};

/// Cohen's function `H(r, N)` for `N > 0`.
pub fn cohen_h(r: usize, n: i64, cache: &Mutex<HashMap<i64, Q>>) -> Q {
    if n == 0 {
        return l_at_negative(2 * r, 1);
    }
    let m = n.rem_euclid(4);
    if m == 1 || m == 2 {
        return Q::zero();
    }
    let (d0, f) = fundamental_part(-n);
    let l = {
        let mut g = cache.lock().unwrap();
        g.entry(d0).or_insert_with(|| l_at_negative(r, d0)).clone()
    };
    let mut s = BigInt::zero();
    for d in divisors(f) {
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let chi = kronecker(d0, d);
        if chi == 0 {
            continue;
        }
        let term = BigInt::from(d).pow(r as u32 - 1) * sigma(2 * r as u32 - 1, f / d);
        if mu * chi as i64 > 0 {
            s += term;
        } else {
            s -= term;
        }
    }
    l * Q::from_integer(s)
}

/// The Siegel Eisenstein series `E_k` (normalised `A(0) = 1`), truncated at `bound`.
///
/// Any even weight `k >= 4` is accepted.
pub fn eisenstein(k: i64, bound: i64) -> Result<FourierExpansion> {
    if k < 4 || k % 2 != 0 {
        return Err(Error::UnsupportedWeight(k));
    }
    let ku = k as usize;
    let zeta_1k = l_at_negative(ku, 1);
    let zeta_32k = l_at_negative(2 * ku - 2, 1);
    let front = qi(2) / (zeta_1k * zeta_32k);
    let singular = qi(-2 * k) / bernoulli(ku);
    let cache = Mutex::new(HashMap::new());
    Ok(FourierExpansion::from_fn(k, bound, |t: &HalfIntMatrix| {
        if t.det4() == 0 {
            let n = t.content();
            return if n == 0 { Q::one() } else { &singular * Q::from_integer(sigma(ku as u32 - 1, n as u64)) };
        }
        let cont = t.content() as u64;
        let mut s = Q::zero();
        for d in divisors(cont) {
            let dd = d as i64;
            let h = cohen_h(ku - 1, t.det4() / (dd * dd), &cache);
            s += Q::from_integer(BigInt::from(d).pow(ku as u32 - 1)) * h;
        }
        &front * s
    }))
}
