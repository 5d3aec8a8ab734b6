//! Oracles shared by the integration tests.

use equidist::arith::{qi, Q};
use equidist::siegel::HalfIntMatrix;
use num_traits::Zero;
use std::collections::HashMap;

/// Jacobi coefficients `c(n, r)` of `η¹⁸ ϑ₁²`, keyed by `4n - r²` (they depend on nothing else).
pub fn jacobi_10_1(max_disc: i64) -> HashMap<i64, i64> {
    // η¹⁸ = q^{3/4} Π (1 - qⁿ)¹⁸; track the integral part of the q-exponent.
    let nmax = (max_disc / 4 + 2) as usize;
    let mut eta = vec![0i128; nmax + 1];
    eta[0] = 1;
    for n in 1..=nmax {
        for _ in 0..18 {
            for i in (n..=nmax).rev() {
                eta[i] -= eta[i - n];
            }
        }
    }
    // ϑ₁² exponent: (n²+n+m²+m)/2 + 1/4, with ζ^{n+m+1} and sign (-1)^{n+m}.
    let mut c: HashMap<(i64, i64), i128> = HashMap::new();
    let range = (nmax as f64).sqrt() as i64 * 2 + 3;
    for a in -range..=range {
        for b in -range..=range {
            let e = (a * a + a + b * b + b) / 2;
            if e as usize > nmax {
                continue;
            }
            let r = a + b + 1;
            let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
            for (j, &x) in eta.iter().enumerate() {
                let n = e + j as i64 + 1;
                if n as usize > nmax {
                    break;
                }
                *c.entry((n, r)).or_insert(0) += sign * x;
            }
        }
    }
    let mut out = HashMap::new();
    for ((n, r), v) in c {
        let d = 4 * n - r * r;
        if d <= max_disc && (n as usize) < nmax {
            if let Some(&old) = out.get(&d) {
                assert_eq!(old, v as i64, "Jacobi coefficient depends only on 4n - r²");
            } else {
                out.insert(d, v as i64);
            }
        }
    }
    out
}

pub fn maass_lift(k: u32, jac: &HashMap<i64, i64>, t: &HalfIntMatrix) -> Q {
    let g = num_integer::gcd(num_integer::gcd(t.b, t.a), t.c);
    let mut acc = Q::zero();
    for d in 1..=g {
        if g % d == 0 {
            let disc = t.det4() / (d * d);
            acc += Q::from_integer(d.pow(k - 1).into()) * qi(*jac.get(&disc).unwrap_or(&0));
        }
    }
    acc
}

