//! Exact positive reals of the form `q · π^{k/2} · √m`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorial, factorize, fmt_q, Q};

/// `coeff · π^{pi_half / 2} · √rad` with `rad` squarefree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicReal {
    pub coeff: Q,
    pub pi_half: i64,
    pub rad: u64,
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).abs().ln();
    }
    let shift = bits - 64;
    (n.abs() >> shift as usize).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

impl SymbolicReal {
    pub fn rational(q: Q) -> Self {
        SymbolicReal { coeff: q, pi_half: 0, rad: 1 }
    }

    pub fn int(n: i64) -> Self {
        Self::rational(Q::from_integer(n.into()))
    }

    /// `π^k`.
    pub fn pi_pow(k: i64) -> Self {
        SymbolicReal { coeff: Q::one(), pi_half: 2 * k, rad: 1 }
    }

    /// `√π`.
    pub fn sqrt_pi() -> Self {
        SymbolicReal { coeff: Q::one(), pi_half: 1, rad: 1 }
    }

    /// `√n` for a positive integer `n`, with the square part pulled out.
    pub fn sqrt_int(n: u64) -> Self {
        assert!(n > 0, "square root of zero");
        let mut outside = 1i64;
        let mut rad = 1u64;
        for (p, e) in factorize(n) {
            outside *= (p as i64).pow(e / 2);
            if e % 2 == 1 {
                rad *= p;
            }
        }
        SymbolicReal { coeff: Q::from_integer(outside.into()), pi_half: 0, rad }
    }

    /// `q^e` for rational `q` and integer `e`.
    pub fn q_pow(q: &Q, e: i64) -> Self {
        let base = if e >= 0 { q.clone() } else { Q::one() / q };
        Self::rational(num_traits::pow(base, e.unsigned_abs() as usize))
    }

    /// `Γ(n/2)` for a positive integer `n`.
    pub fn gamma_half(n: i64) -> Self {
        assert!(n >= 1, "Γ(n/2) needs n >= 1");
        if n % 2 == 0 {
            Self::rational(Q::from_integer(factorial((n / 2 - 1) as u64)))
        } else {
            // Γ(k + 1/2) = (2k)! √π / (4^k k!).
            let k = (n - 1) / 2;
            let num = factorial(2 * k as u64);
            let den = BigInt::from(4).pow(k as u32) * factorial(k as u64);
            SymbolicReal { coeff: Q::new(num, den), pi_half: 1, rad: 1 }
        }
    }

    pub fn mul(&self, o: &SymbolicReal) -> Self {
        let g = num_integer::gcd(self.rad, o.rad);
        let rad = (self.rad / g) * (o.rad / g);
        SymbolicReal { coeff: &self.coeff * &o.coeff * Q::from_integer(g.into()), pi_half: self.pi_half + o.pi_half, rad }
    }

    pub fn inv(&self) -> Self {
        assert!(!self.coeff.is_zero(), "inverse of zero");
        SymbolicReal {
            coeff: Q::one() / (&self.coeff * Q::from_integer(self.rad.into())),
            pi_half: -self.pi_half,
            rad: self.rad,
        }
    }

    pub fn div(&self, o: &SymbolicReal) -> Self {
        self.mul(&o.inv())
    }

    pub fn scale(&self, q: &Q) -> Self {
        SymbolicReal { coeff: &self.coeff * q, ..self.clone() }
    }

    /// The value as a rational number, when it is one.
    pub fn as_rational(&self) -> Option<Q> {
        (self.coeff.is_zero() || (self.pi_half == 0 && self.rad == 1)).then(|| self.coeff.clone())
    }

    /// Natural logarithm of the absolute value.
    pub fn ln_abs(&self) -> f64 {
        ln_bigint(self.coeff.numer()) - ln_bigint(self.coeff.denom())
            + self.pi_half as f64 * 0.5 * std::f64::consts::PI.ln()
            + 0.5 * (self.rad as f64).ln()
    }

    /// Floating value (may underflow to zero for extreme exponents).
    pub fn to_f64(&self) -> f64 {
        if self.coeff.is_zero() {
            return 0.0;
        }
        let sign = if self.coeff.is_negative() { -1.0 } else { 1.0 };
        sign * self.ln_abs().exp()
    }
}

impl fmt::Display for SymbolicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_q(&self.coeff))?;
        if self.pi_half != 0 {
            write!(f, "*pi^({}/2)", self.pi_half)?;
        }
        if self.rad != 1 {
            write!(f, "*sqrt({})", self.rad)?;
        }
        Ok(())
    }
}
