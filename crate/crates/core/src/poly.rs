//! Dense univariate polynomials over the rationals.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::arith::{fmt_q, q_to_f64, Q};

/// Polynomial with rational coefficients, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QPoly {
    pub coeffs: Vec<Q>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        QPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        QPoly::new(vec![Q::zero(), Q::one()])
    }

    /// `x - r`.
    pub fn linear_root(r: Q) -> Self {
        QPoly::new(vec![-r, Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn coeff(&self, i: usize) -> Q {
        self.coeffs.get(i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn lead(&self) -> Q {
        self.coeffs.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Q) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let lead_inv = Q::one() / d.lead();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut quo = vec![Q::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                let t = &c * dj;
                r[i - dd + j] -= t;
            }
            quo[i - dd] = c;
        }
        r.truncate(dd);
        (QPoly::new(quo), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&(Q::one() / self.lead()))
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn xgcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (QPoly::constant(Q::one()), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::constant(Q::one()));
        while !r1.is_zero() {
            let (qt, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&qt.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&qt.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = Q::one() / r0.lead();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Q::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluates at a complex point using `f64` coefficients.
    pub fn eval_c(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + q_to_f64(c);
        }
        acc
    }

    /// Substitutes `x ↦ x + s`.
    pub fn shift(&self, s: &Q) -> QPoly {
        let lin = QPoly::new(vec![s.clone(), Q::one()]);
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    /// Substitutes `x ↦ c·x`.
    pub fn scale_var(&self, c: &Q) -> QPoly {
        let mut p = Q::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &p);
            p *= c;
        }
        QPoly::new(out)
    }

    /// Composition `self(g(x))`.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&QPoly::constant(c.clone()));
        }
        acc
    }

    /// True when the polynomial has no repeated factor.
    pub fn is_squarefree(&self) -> bool {
        QPoly::gcd(self, &self.derivative()).degree() <= 0
    }

    /// Numerical complex roots (Aberth iteration on the monic normalisation).
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n <= 0 {
            return Vec::new();
        }
        let n = n as usize;
        let m = self.monic();
        let c: Vec<f64> = m.coeffs.iter().map(q_to_f64).collect();
        if n == 1 {
            return vec![Complex64::new(-c[0], 0.0)];
        }
        if n == 2 {
            let disc = Complex64::new(c[1] * c[1] - 4.0 * c[0], 0.0).sqrt();
            let b = c[1];
            // Numerically stable quadratic formula.
            let qv = if b >= 0.0 { -0.5 * (b + disc) } else { -0.5 * (b - disc) };
            let r1 = qv;
            let r2 = if qv.norm() > 0.0 { Complex64::new(c[0], 0.0) / qv } else { -qv };
            return vec![r1, r2];
        }
        let radius = 1.0 + c.iter().take(n).map(|x| x.abs()).fold(0.0, f64::max);
        let eval = |z: Complex64| -> (Complex64, Complex64) {
            let mut p = Complex64::new(1.0, 0.0);
            let mut dp = Complex64::new(0.0, 0.0);
            for k in (0..n).rev() {
                dp = dp * z + p;
                p = p * z + c[k];
            }
            (p, dp)
        };
        let mut z: Vec<Complex64> = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64;
                Complex64::from_polar(radius * 0.9, t)
            })
            .collect();
        for _ in 0..2000 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let (p, dp) = eval(z[i]);
                if p.norm() == 0.0 {
                    continue;
                }
                let ratio = p / dp;
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        s += Complex64::new(1.0, 0.0) / (z[i] - z[j]);
                    }
                }
                let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
            if moved < 1e-16 {
                break;
            }
        }
        z
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => fmt_q(c),
                1 => format!("({})*x", fmt_q(c)),
                _ => format!("({})*x^{}", fmt_q(c), i),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qi;

    fn p(v: &[i64]) -> QPoly {
        QPoly::new(v.iter().map(|&c| qi(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]); // x^2 - 1
        let b = p(&[1, 1]); // x + 1
        let (qt, r) = a.divrem(&b);
        assert_eq!(qt, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(QPoly::gcd(&a, &p(&[1, 2, 1])), b);
        let (g, s, t) = QPoly::xgcd(&p(&[1, 0, 1]), &p(&[0, 1]));
        assert_eq!(g, p(&[1]));
        assert_eq!(s.mul(&p(&[1, 0, 1])).add(&t.mul(&p(&[0, 1]))), p(&[1]));
    }

    #[test]
    fn shift_and_roots() {
        let a = p(&[6, -5, 1]); // (x-2)(x-3)
        assert_eq!(a.shift(&qi(2)), p(&[0, -1, 1]));
        let mut r: Vec<f64> = p(&[-6, 11, -6, 1]).complex_roots().iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (x, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert!((x - e).abs() < 1e-10);
        }
    }
}
