//! Exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::arith::Q;
use crate::poly::QPoly;

/// Dense rational matrix stored row-major.
pub type QMatrix = Vec<Vec<Q>>;

/// Identity matrix.
pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::one() } else { Q::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    let k = b.len();
    let mut out = vec![vec![Q::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][t] * &b[t][j];
            }
        }
    }
    out
}

pub fn mat_vec(a: &QMatrix, v: &[Q]) -> Vec<Q> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(Q::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn mat_add(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn mat_scale(a: &QMatrix, c: &Q) -> QMatrix {
    a.iter().map(|r| r.iter().map(|x| x * c).collect()).collect()
}

/// Rank of a matrix.
pub fn rank(a: &QMatrix) -> usize {
    let mut m = a.clone();
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = Q::one() / &m[r][c];
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Solves `A x = b` for an overdetermined consistent system with full column
/// rank. Returns `None` when the system is inconsistent or rank deficient.
pub fn solve(a: &QMatrix, b: &[Q]) -> Option<Vec<Q>> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            row
        })
        .collect();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let piv = (r..rows).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, piv);
        let inv = Q::one() / &m[r][c];
        for j in c..=cols {
            m[r][j] *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..rows).any(|i| !m[i][cols].is_zero()) {
        return None;
    }
    Some((0..cols).map(|i| m[i][cols].clone()).collect())
}

/// Basis of the right kernel `{x : A x = 0}`.
pub fn kernel(a: &QMatrix, cols: usize) -> Vec<Vec<Q>> {
    let mut m = a.clone();
    let rows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = Q::one() / &m[r][c];
        for j in c..cols {
            m[r][j] *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

/// Characteristic polynomial `det(x I - A)` (Faddeev–LeVerrier).
pub fn charpoly(a: &QMatrix) -> QPoly {
    let n = a.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut mk: QMatrix = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        mk = next;
        let am = mat_mul(a, &mk);
        let tr: Q = (0..n).fold(Q::zero(), |acc, i| acc + &am[i][i]);
        coeffs[n - k] = -tr / Q::from_integer((k as i64).into());
    }
    QPoly::new(coeffs)
}

/// Evaluates a polynomial at a square matrix.
pub fn poly_at_matrix(p: &QPoly, a: &QMatrix) -> QMatrix {
    let n = a.len();
    let mut acc = vec![vec![Q::zero(); n]; n];
    for c in p.coeffs.iter().rev() {
        acc = mat_mul(&acc, a);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] += c;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::qi;

    fn m(v: &[&[i64]]) -> QMatrix {
        v.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
    }

    #[test]
    fn charpoly_cayley_hamilton() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let p = charpoly(&a);
        assert_eq!(p.degree(), 3);
        let z = poly_at_matrix(&p, &a);
        assert!(z.iter().flatten().all(|x| x.is_zero()));
        assert_eq!(p.coeff(2), qi(-9));
    }

    #[test]
    fn solve_overdetermined() {
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve(&a, &[qi(2), qi(3), qi(5)]), Some(vec![qi(2), qi(3)]));
        assert_eq!(solve(&a, &[qi(2), qi(3), qi(6)]), None);
        assert_eq!(rank(&a), 2);
        let k = kernel(&m(&[&[1, 1, 0], &[0, 0, 1]]), 3);
        assert_eq!(k, vec![vec![qi(-1), qi(1), qi(0)]]);
    }
}
