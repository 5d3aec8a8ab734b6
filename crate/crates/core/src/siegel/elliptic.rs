//! Level-one elliptic modular forms as exact `q`-expansions.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{q, qi, sigma, Q};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;

/// `q`-expansion `Σ_{n <= N} a(n) qⁿ` of a weight `k` form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    pub weight: i64,
    pub coeffs: Vec<Q>,
}

impl QExpansion {
    pub fn precision(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, o: &QExpansion) -> QExpansion {
        let n = self.coeffs.len().min(o.coeffs.len());
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        QExpansion { weight: self.weight + o.weight, coeffs: out }
    }

    pub fn pow(&self, e: u32, precision: usize) -> QExpansion {
        let mut acc = QExpansion { weight: 0, coeffs: vec![Q::zero(); precision + 1] };
        acc.coeffs[0] = Q::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Applies `T(p)`: `b(n) = a(pn) + p^{k-1} a(n/p)`.
    pub fn hecke(&self, p: u64) -> QExpansion {
        let p = p as usize;
        let n_out = self.precision() / p;
        let pk = Q::from_integer(BigInt::from(p).pow(self.weight as u32 - 1));
        let coeffs = (0..=n_out)
            .map(|n| {
                let mut v = self.coeffs[p * n].clone();
                if n % p == 0 {
                    v += &pk * &self.coeffs[n / p];
                }
                v
            })
            .collect();
        QExpansion { weight: self.weight, coeffs }
    }
}

/// Normalised Eisenstein series `E_k = 1 - (2k/B_k) Σ σ_{k-1}(n) qⁿ`.
pub fn eisenstein_q(k: i64, precision: usize) -> QExpansion {
    let c = qi(-2 * k) / crate::arith::bernoulli(k as usize);
    let mut coeffs = vec![Q::one()];
    for n in 1..=precision {
        coeffs.push(&c * Q::from_integer(sigma(k as u32 - 1, n as u64)));
    }
    QExpansion { weight: k, coeffs }
}

/// The discriminant function `Δ = (E₄³ - E₆²)/1728`.
pub fn delta(precision: usize) -> QExpansion {
    let e4 = eisenstein_q(4, precision);
    let e6 = eisenstein_q(6, precision);
    let a = e4.pow(3, precision);
    let b = e6.mul(&e6);
    let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x - y) * q(1, 1728)).collect();
    QExpansion { weight: 12, coeffs }
}

/// Dimension of `S_k(SL₂(ℤ))` for even `k >= 0`.
pub fn cusp_dim(k: i64) -> usize {
    if k < 12 || k % 2 != 0 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base - 1
    } else {
        base
    }
}

/// Dimension of `M_k(SL₂(ℤ))` for even `k >= 0`.
pub fn modular_dim(k: i64) -> usize {
    if k < 0 || k % 2 != 0 || k == 2 {
        return 0;
    }
    if k == 0 {
        return 1;
    }
    cusp_dim(k) + 1
}

/// Basis `Δʲ E₄^a E₆^b` of `S_k`, upper triangular in the `q`-expansion.
pub fn cusp_basis_q(k: i64, precision: usize) -> Vec<QExpansion> {
    let d = cusp_dim(k);
    let e4 = eisenstein_q(4, precision);
    let e6 = eisenstein_q(6, precision);
    let dl = delta(precision);
    (1..=d)
        .map(|j| {
            let rest = k - 12 * j as i64;
            let (a, b) = if rest % 4 == 0 { (rest / 4, 0) } else { ((rest - 6) / 4, 1) };
            let f = dl.pow(j as u32, precision).mul(&e4.pow(a as u32, precision)).mul(&e6.pow(b, precision));
            QExpansion { weight: k, coeffs: f.coeffs }
        })
        .collect()
}

/// Matrix of `T(p)` on the triangular basis (column `i` holds the image of basis element `i`).
pub fn hecke_matrix_q(k: i64, p: u64) -> Result<QMatrix> {
    let d = cusp_dim(k);
    let precision = (d + 1) * p as usize + 1;
    let basis = cusp_basis_q(k, precision);
    let mut m = vec![vec![Q::zero(); d]; d];
    for (i, f) in basis.iter().enumerate() {
        let g = f.hecke(p);
        // Triangular solve: basis j has leading term q^{j+1}.
        let mut rest = g.coeffs.clone();
        for j in 0..d {
            let c = rest[j + 1].clone();
            m[j][i] = c.clone();
            if !c.is_zero() {
                for (n, bn) in basis[j].coeffs.iter().enumerate().take(rest.len()) {
                    rest[n] -= &c * bn;
                }
            }
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return Err(Error::NotInSpan);
        }
    }
    Ok(m)
}

/// Coefficient rows `(a_{f_1}(n), …, a_{f_d}(n))` for `n = 1..=count`.
pub fn coefficient_rows(k: i64, count: usize) -> Vec<Vec<Q>> {
    let basis = cusp_basis_q(k, count);
    (1..=count).map(|n| basis.iter().map(|f| f.coeffs[n].clone()).collect()).collect()
}

/// Ramanujan's τ(n) for small `n`.
pub fn ramanujan_tau(n: usize) -> BigInt {
    let d = delta(n);
    let v = &d.coeffs[n];
    assert!(v.denom().is_one());
    v.numer().clone()
}
