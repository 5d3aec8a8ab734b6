//! Arithmetic in `Q[x]/(m)` for a squarefree monic `m`.
//!
//! When `m` is reducible the ring is a product of number fields. Operations
//! that need a unit (inversion, pivoting) report a nontrivial factor of `m`
//! instead of silently failing, so callers can split and retry on each factor.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::arith::Q;
use crate::poly::QPoly;

/// A nontrivial monic factor of the modulus, found while attempting to invert.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split(pub QPoly);

/// The algebra `Q[x]/(m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Algebra {
    pub modulus: QPoly,
}

impl Algebra {
    pub fn new(modulus: QPoly) -> Self {
        Algebra { modulus: modulus.monic() }
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().max(0) as usize
    }

    pub fn reduce(&self, a: &QPoly) -> QPoly {
        if a.degree() < self.modulus.degree() {
            a.clone()
        } else {
            a.rem(&self.modulus)
        }
    }

    pub fn from_q(&self, c: Q) -> QPoly {
        QPoly::constant(c)
    }

    /// The generator `x mod m`.
    pub fn gen(&self) -> QPoly {
        self.reduce(&QPoly::x())
    }

    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&a.mul(b))
    }

    pub fn inv(&self, a: &QPoly) -> Result<QPoly, Split> {
        let (g, s, _) = QPoly::xgcd(a, &self.modulus);
        if g.degree() == 0 {
            Ok(self.reduce(&s))
        } else if g.is_zero() || g.degree() == self.modulus.degree() {
            Err(Split(self.modulus.clone()))
        } else {
            Err(Split(g))
        }
    }

    /// Complex roots of the modulus; each gives one embedding.
    pub fn embeddings(&self) -> Vec<Complex64> {
        let mut r = self.modulus.complex_roots();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        r
    }

    /// Characteristic polynomial of multiplication by `a`.
    pub fn charpoly(&self, a: &QPoly) -> QPoly {
        let n = self.degree();
        let mut m = vec![vec![Q::zero(); n]; n];
        let mut col = self.reduce(a);
        let x = self.gen();
        for j in 0..n {
            for (i, row) in m.iter_mut().enumerate() {
                row[j] = col.coeff(i);
            }
            col = self.mul(&col, &x);
        }
        crate::linalg::charpoly(&m)
    }

    /// Image of `v(θ)` under `θ ↦ image`, reduced in this algebra.
    pub fn substitute(&self, v: &QPoly, image: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for c in v.coeffs.iter().rev() {
            acc = self.mul(&acc, image).add(&QPoly::constant(c.clone()));
        }
        self.reduce(&acc)
    }

    /// Rational value of an element when it is constant.
    pub fn as_rational(&self, a: &QPoly) -> Option<Q> {
        let r = self.reduce(a);
        match r.degree() {
            -1 => Some(Q::zero()),
            0 => Some(r.coeffs[0].clone()),
            _ => None,
        }
    }
}

/// Finds a nonzero vector in the kernel of a square matrix over the algebra,
/// assuming the kernel has rank one in every component.
pub fn kernel_vector(alg: &Algebra, mat: &[Vec<QPoly>]) -> Result<Option<Vec<QPoly>>, Split> {
    let n = mat.len();
    let mut m: Vec<Vec<QPoly>> = mat.iter().map(|r| r.iter().map(|x| alg.reduce(x)).collect()).collect();
    let mut pivot_cols = Vec::new();
    let mut free_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            free_cols.push(c);
            continue;
        };
        m.swap(r, piv);
        let inv = alg.inv(&m[r][c])?;
        for j in 0..n {
            m[r][j] = alg.mul(&m[r][j], &inv);
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let t = alg.mul(&f, &m[r][j]);
                    m[i][j] = m[i][j].sub(&t);
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    if free_cols.len() != 1 {
        return Ok(None);
    }
    let free = free_cols[0];
    let mut v = vec![QPoly::zero(); n];
    v[free] = QPoly::constant(Q::one());
    for (row, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = m[row][free].scale(&-Q::one());
    }
    Ok(Some(v))
}
