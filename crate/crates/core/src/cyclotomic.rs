//! Exact arithmetic in cyclotomic fields `Q(ζ_m)`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{divisors, q_to_f64, Q};

/// Integer coefficients of the cyclotomic polynomial `Φ_m`, lowest degree first.
pub fn cyclotomic_poly(m: u64) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // x^m - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let den = cyclotomic_poly(d);
        num = exact_div_int(&num, &den);
    }
    cache.lock().unwrap().insert(m, num.clone());
    num
}

fn exact_div_int(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let mut quo = vec![0i64; r.len() - dd];
    for i in (dd..r.len()).rev() {
        let c = r[i];
        if c == 0 {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            r[i - dd + j] -= c * dj;
        }
        quo[i - dd] = c;
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    quo
}

/// Reduces an integer combination `Σ hist[k] ζ_m^k` to its canonical
/// representative modulo `Φ_m` (length `φ(m)`).
pub fn reduce_int(hist: &[i64], m: u64) -> Vec<i128> {
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    let mut v: Vec<i128> = vec![0; (m as usize).max(deg)];
    for (k, &c) in hist.iter().enumerate() {
        v[k % m as usize] += c as i128;
    }
    for i in (deg..v.len()).rev() {
        let c = v[i];
        if c == 0 {
            continue;
        }
        for (j, &pj) in phi.iter().enumerate() {
            v[i - deg + j] -= c * pj as i128;
        }
    }
    v.truncate(deg);
    v
}

/// Element of `Q(ζ_m)` in the power basis `1, ζ, …, ζ^{φ(m)-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclo {
    pub m: u64,
    pub coeffs: Vec<Q>,
}

impl Cyclo {
    fn phi_len(m: u64) -> usize {
        cyclotomic_poly(m).len() - 1
    }

    pub fn zero(m: u64) -> Self {
        Cyclo { m, coeffs: vec![Q::zero(); Self::phi_len(m)] }
    }

    pub fn from_q(m: u64, c: Q) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = c;
        z
    }

    /// `ζ_m^e`.
    pub fn root_power(m: u64, e: i64) -> Self {
        let mut raw = vec![Q::zero(); m as usize];
        raw[e.rem_euclid(m as i64) as usize] = Q::from_integer(1.into());
        Self::from_raw(m, raw)
    }

    /// Reduces an arbitrary coefficient vector (any length) modulo `Φ_m`.
    pub fn from_raw(m: u64, raw: Vec<Q>) -> Self {
        let phi = cyclotomic_poly(m);
        let deg = phi.len() - 1;
        let mut v = vec![Q::zero(); (m as usize).max(deg)];
        for (k, c) in raw.into_iter().enumerate() {
            v[k % m as usize] += c;
        }
        for i in (deg..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = v[i].clone();
            for (j, &pj) in phi.iter().enumerate() {
                v[i - deg + j] -= &c * Q::from_integer(BigInt::from(pj));
            }
        }
        v.truncate(deg);
        Cyclo { m, coeffs: v }
    }

    pub fn add(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.m, o.m);
        Cyclo { m: self.m, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Q) -> Cyclo {
        Cyclo { m: self.m, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, o: &Cyclo) -> Cyclo {
        assert_eq!(self.m, o.m);
        let mut raw = vec![Q::zero(); self.coeffs.len() + o.coeffs.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        Self::from_raw(self.m, raw)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Cyclo {
        let m = self.m as usize;
        let mut raw = vec![Q::zero(); m];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[(m - k) % m] += c;
        }
        Self::from_raw(self.m, raw)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<Q> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    /// Value under the embedding `ζ_m ↦ exp(2πi/m)`.
    pub fn to_complex(&self) -> Complex64 {
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / self.m as f64);
        let mut acc = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            acc += p * q_to_f64(c);
            p *= z;
        }
        acc
    }
}

/// Euler totient.
pub fn totient(m: u64) -> u64 {
    crate::arith::factorize(m)
        .iter()
        .fold(m, |acc, &(p, _)| acc / p * (p - 1))
}

/// Tests whether an `i128` vector is identically zero.
pub fn is_zero_int(v: &[i128]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// The rational value of a reduced integer vector when it is constant.
pub fn int_as_rational(v: &[i128]) -> Option<i64> {
    if v.iter().skip(1).all(|&x| x == 0) {
        v.first().copied().unwrap_or(0).to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qi;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12).len() - 1, totient(12) as usize);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for m in 2..30u64 {
            let s = (0..m).fold(Cyclo::zero(m), |acc, e| acc.add(&Cyclo::root_power(m, e as i64)));
            assert!(s.is_zero(), "m = {m}");
            assert!(is_zero_int(&reduce_int(&vec![1; m as usize], m)));
        }
        let z = Cyclo::root_power(7, 3);
        assert_eq!(z.mul(&z.conj()).as_rational(), Some(qi(1)));
    }
}
