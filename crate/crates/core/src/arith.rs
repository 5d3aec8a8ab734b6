//! Elementary number theory and exact rational helpers.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// Builds a rational from a pair of machine integers.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Builds an integral rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Formats a rational as `num/den` (denominator always present).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Converts a rational to `f64`, robust for huge numerators and denominators.
pub fn q_to_f64(x: &Q) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = nb.max(db) - 60;
    let n = (x.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
    n / d
}

/// Non-negative remainder.
pub fn modp(a: i64, m: i64) -> i64 {
    a.rem_euclid(m)
}

/// Greatest common divisor of machine integers (always non-negative).
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Trial-division factorisation of a positive integer.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Primality by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Primes up to and including `n`.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n as usize {
        if sieve[i] {
            let mut j = i * i;
            while j <= n as usize {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k as usize]).collect()
}

/// True when no square of a prime divides `n`.
pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

/// Möbius function.
pub fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Divisor power sum σ_k(n).
pub fn sigma(k: u32, n: u64) -> BigInt {
    divisors(n).into_iter().map(|d| BigInt::from(d).pow(k)).sum()
}

/// Kronecker symbol (d / n) for n > 0.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut result = 1i32;
    while n.is_multiple_of(2) {
        n /= 2;
        let r = modp(d, 8);
        if r % 2 == 0 {
            return 0;
        }
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    // Jacobi symbol (d mod n / n) for odd n.
    let mut a = modp(d, n as i64) as u64;
    let mut m = n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if m % 8 == 3 || m % 8 == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut m);
        if a % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        a %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}

/// True when `d` is a fundamental discriminant (negative or positive, excluding 1).
pub fn is_fundamental(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    let r = modp(d, 4);
    if r == 1 {
        is_squarefree(d.unsigned_abs())
    } else if r == 0 {
        let m = d / 4;
        let rm = modp(m, 4);
        (rm == 2 || rm == 3) && is_squarefree(m.unsigned_abs())
    } else {
        false
    }
}

/// Writes `d ≡ 0,1 mod 4` as `d0 · f²` with `d0` fundamental (or 1).
pub fn fundamental_part(d: i64) -> (i64, u64) {
    let mut f = 1u64;
    let mut d0 = d;
    for (p, e) in factorize(d.unsigned_abs()) {
        let mut e = e;
        while e >= 2 {
            let p2 = (p * p) as i64;
            let cand = d0 / p2;
            if d0 % p2 == 0 && (modp(cand, 4) == 0 || modp(cand, 4) == 1) {
                d0 = cand;
                f *= p;
                e -= 2;
            } else {
                break;
            }
        }
    }
    (d0, f)
}

fn bernoulli_table() -> &'static Vec<Q> {
    static TABLE: OnceLock<Vec<Q>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_0..B_80 with B_1 = -1/2.
        let n = 80usize;
        let mut b: Vec<Q> = Vec::with_capacity(n + 1);
        let binom = binomial_rows(n + 1);
        for m in 0..=n {
            if m == 0 {
                b.push(Q::one());
                continue;
            }
            let mut s = Q::zero();
            for (k, bk) in b.iter().enumerate().take(m) {
                s += Q::from_integer(binom[m + 1][k].clone()) * bk;
            }
            b.push(-s / Q::from_integer(BigInt::from(m as i64 + 1)));
        }
        b
    })
}

fn binomial_rows(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for i in 1..=n {
        let prev = &rows[i - 1];
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

/// Binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Bernoulli number `B_n` (with `B_1 = -1/2`), `n <= 80`.
pub fn bernoulli(n: usize) -> Q {
    bernoulli_table()[n].clone()
}

/// Bernoulli polynomial `B_n(x)`.
pub fn bernoulli_poly(n: usize, x: &Q) -> Q {
    let mut s = Q::zero();
    let mut xp = Q::one();
    // Σ_j C(n,j) B_j x^{n-j}, accumulated from j = n downwards.
    for j in (0..=n).rev() {
        s += Q::from_integer(binomial(n as u64, j as u64)) * bernoulli(j) * &xp;
        xp *= x;
    }
    s
}

/// Generalised Bernoulli number `B_{r,χ_d}` for the primitive character of a
/// fundamental discriminant `d` (the trivial character when `d == 1`).
pub fn bernoulli_chi(r: usize, d: i64) -> Q {
    if d == 1 {
        let b = bernoulli(r);
        return if r == 1 { -b } else { b };
    }
    let f = d.unsigned_abs();
    let fq = qi(f as i64);
    let mut s = Q::zero();
    for a in 1..=f {
        let chi = kronecker(d, a);
        if chi == 0 {
            continue;
        }
        let t = bernoulli_poly(r, &Q::new(BigInt::from(a), BigInt::from(f)));
        if chi > 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    s * num_traits::pow(fq, r - 1)
}

/// `L(1 - r, χ_d) = -B_{r,χ}/r` for a fundamental discriminant `d` (or `d = 1`, giving ζ).
pub fn l_at_negative(r: usize, d: i64) -> Q {
    -bernoulli_chi(r, d) / qi(r as i64)
}

/// Harmonic number `H_n` exactly.
pub fn harmonic(n: u64) -> Q {
    let mut s = Q::zero();
    for k in 1..=n {
        s += q(1, k as i64);
    }
    s
}

/// Exact integer square root test.
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(&r * &r) == n
}

/// Exact test whether a non-negative rational is the square of a rational.
pub fn is_rational_square(x: &Q) -> bool {
    !x.is_negative() && is_square(x.numer()) && is_square(x.denom())
}

/// Factorial as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}
