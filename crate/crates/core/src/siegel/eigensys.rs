//! Simultaneous eigenvectors of commuting rational matrices.
//!
//! Eigenvectors are computed exactly over `Q[x]/(m)` where `m` runs through
//! factors of the characteristic polynomial of a generator. One orbit stands
//! for the Galois conjugacy class of eigenvectors attached to the roots of
//! `m`; its complex embeddings are the individual eigenvectors.

use num_traits::{One, Zero};

use crate::arith::{qi, Q};
use crate::error::{Error, Result};
use crate::linalg::{charpoly, mat_add, mat_scale, QMatrix};
use crate::numfield::{kernel_vector, Algebra, Split};
use crate::poly::QPoly;

/// A Galois orbit of simultaneous eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenOrbit {
    pub alg: Algebra,
    /// Coordinates of the eigenvector in the input basis.
    pub vector: Vec<QPoly>,
    /// Eigenvalue of each input matrix, keyed by its label.
    pub eigenvalues: Vec<(u64, QPoly)>,
}

impl EigenOrbit {
    pub fn degree(&self) -> usize {
        self.alg.degree()
    }

    pub fn eigenvalue(&self, label: u64) -> Option<&QPoly> {
        self.eigenvalues.iter().find(|(l, _)| *l == label).map(|(_, v)| v)
    }

    /// Restriction to the factor `g` of the modulus.
    pub fn restrict(&self, g: &QPoly) -> EigenOrbit {
        let alg = Algebra::new(g.clone());
        EigenOrbit {
            vector: self.vector.iter().map(|x| alg.reduce(x)).collect(),
            eigenvalues: self.eigenvalues.iter().map(|(p, v)| (*p, alg.reduce(v))).collect(),
            alg,
        }
    }

    /// Evaluates a linear functional given by rational row coefficients.
    pub fn apply_row(&self, row: &[Q]) -> QPoly {
        let mut acc = QPoly::zero();
        for (c, v) in row.iter().zip(&self.vector) {
            if !c.is_zero() {
                acc = acc.add(&v.scale(c));
            }
        }
        self.alg.reduce(&acc)
    }
}

/// Result of a decomposition.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub orbits: Vec<EigenOrbit>,
    /// Coefficients of the generator `Σ cᵢ Mᵢ` used to separate eigenvectors.
    pub generator: Vec<Q>,
}

fn generator_candidates(n: usize) -> Vec<Vec<Q>> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut v = vec![Q::zero(); n];
        v[i] = Q::one();
        out.push(v);
    }
    if n >= 2 {
        for c in [1, 2, 3, -1, 5, 7] {
            let mut v = vec![Q::zero(); n];
            v[0] = Q::one();
            v[1] = qi(c);
            out.push(v);
        }
    }
    if n >= 3 {
        for c in [1, 2, 3] {
            let mut v = vec![Q::zero(); n];
            v[0] = Q::one();
            v[1] = qi(c);
            v[2] = qi(c + 1);
            out.push(v);
        }
    }
    out
}

/// Splits off linear factors `x - r` with integral `r` located numerically.
fn split_integer_roots(m: &QPoly) -> Vec<QPoly> {
    let mut rest = m.clone();
    let mut out = Vec::new();
    for z in m.complex_roots() {
        if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) || z.re.abs() > 1e15 {
            continue;
        }
        let r = qi(z.re.round() as i64);
        if rest.degree() > 1 && rest.eval(&r).is_zero() {
            let lin = QPoly::linear_root(r);
            rest = rest.divrem(&lin).0;
            out.push(lin);
        }
    }
    out.push(rest.monic());
    out.retain(|p| p.degree() >= 1);
    out
}

/// Decomposes the common eigenspaces of commuting matrices.
///
/// `rows` are linear functionals (for example Fourier coefficients) used to
/// normalise each eigenvector: the first row with a nonzero value is set to 1.
/// `hint`, when given, maps generator coefficients to a polynomial whose gcd
/// with the characteristic polynomial is split off first.
pub fn decompose(
    mats: &[(u64, QMatrix)],
    rows: &[Vec<Q>],
    hint: Option<&dyn Fn(&[Q]) -> Result<QPoly>>,
) -> Result<Decomposition> {
    let n = mats[0].1.len();
    if n == 0 {
        return Ok(Decomposition { orbits: Vec::new(), generator: vec![Q::zero(); mats.len()] });
    }
    for coeffs in generator_candidates(mats.len()) {
        let mut g = vec![vec![Q::zero(); n]; n];
        for (c, (_, m)) in coeffs.iter().zip(mats) {
            if !c.is_zero() {
                g = mat_add(&g, &mat_scale(m, c));
            }
        }
        let cp = charpoly(&g);
        if !cp.is_squarefree() {
            continue;
        }
        let mut initial = vec![cp.clone()];
        if let Some(h) = hint {
            let hp = h(&coeffs)?;
            let common = QPoly::gcd(&cp, &hp);
            if common.degree() >= 1 && common.degree() < cp.degree() {
                initial = vec![common.clone(), cp.divrem(&common).0.monic()];
            }
        }
        let mut work: Vec<QPoly> = initial.iter().flat_map(split_integer_roots).collect();
        let mut orbits = Vec::new();
        while let Some(m) = work.pop() {
            match eigen_orbit(&m, &g, mats, rows) {
                Ok(o) => orbits.push(o),
                Err(OrbitFailure::Split(f)) => {
                    let other = m.divrem(&f).0.monic();
                    work.push(f);
                    work.push(other);
                }
                Err(OrbitFailure::Fatal(e)) => return Err(e),
            }
        }
        orbits.sort_by(|a, b| {
            a.degree().cmp(&b.degree()).then_with(|| {
                let ka: Vec<f64> = a.alg.modulus.coeffs.iter().map(crate::arith::q_to_f64).collect();
                let kb: Vec<f64> = b.alg.modulus.coeffs.iter().map(crate::arith::q_to_f64).collect();
                ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
            })
        });
        return Ok(Decomposition { orbits, generator: coeffs });
    }
    Err(Error::EigenvalueCollision)
}

enum OrbitFailure {
    Split(QPoly),
    Fatal(Error),
}

impl From<Split> for OrbitFailure {
    fn from(s: Split) -> Self {
        OrbitFailure::Split(s.0)
    }
}

fn eigen_orbit(
    m: &QPoly,
    g: &QMatrix,
    mats: &[(u64, QMatrix)],
    rows: &[Vec<Q>],
) -> std::result::Result<EigenOrbit, OrbitFailure> {
    let alg = Algebra::new(m.clone());
    let n = g.len();
    let theta = alg.gen();
    let shifted: Vec<Vec<QPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = QPoly::constant(g[i][j].clone());
                    if i == j {
                        c.sub(&theta)
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut v = match kernel_vector(&alg, &shifted)? {
        Some(v) => v,
        None => return Err(OrbitFailure::Fatal(Error::EigenvalueCollision)),
    };
    let mut orbit = EigenOrbit { alg: alg.clone(), vector: v.clone(), eigenvalues: Vec::new() };
    let mut normalised = false;
    for row in rows {
        let val = orbit.apply_row(row);
        if val.is_zero() {
            continue;
        }
        let inv = alg.inv(&val)?;
        v = v.iter().map(|x| alg.mul(x, &inv)).collect();
        normalised = true;
        break;
    }
    if !normalised {
        return Err(OrbitFailure::Fatal(Error::RankDeficient { rank: 0, dim: n, largest: rows.len() as i64 }));
    }
    orbit.vector = v.clone();
    // A coordinate that is a unit, used to read off eigenvalues.
    let mut unit = None;
    for (j, x) in v.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let inv = alg.inv(x)?;
        unit = Some((j, inv));
        break;
    }
    let (j, inv) = unit.expect("normalised eigenvector is nonzero");
    for (label, mat) in mats {
        let w: Vec<QPoly> = (0..n)
            .map(|i| {
                let mut acc = QPoly::zero();
                for (k, vk) in v.iter().enumerate() {
                    if !mat[i][k].is_zero() {
                        acc = acc.add(&vk.scale(&mat[i][k]));
                    }
                }
                alg.reduce(&acc)
            })
            .collect();
        let lambda = alg.mul(&w[j], &inv);
        for i in 0..n {
            if alg.reduce(&w[i].sub(&alg.mul(&lambda, &v[i]))).degree() >= 0 {
                return Err(OrbitFailure::Fatal(Error::Invalid(format!(
                    "matrix {label} does not preserve the eigenvector"
                ))));
            }
        }
        orbit.eigenvalues.push((*label, lambda));
    }
    Ok(orbit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalises_commuting_pair() {
        // Matrices with eigenvalues in Q(√2) plus a rational block.
        let m1: QMatrix = vec![
            vec![qi(0), qi(2), qi(0)],
            vec![qi(1), qi(0), qi(0)],
            vec![qi(0), qi(0), qi(5)],
        ];
        let m2: QMatrix = vec![
            vec![qi(1), qi(0), qi(0)],
            vec![qi(0), qi(1), qi(0)],
            vec![qi(0), qi(0), qi(3)],
        ];
        let rows = vec![vec![qi(1), qi(0), qi(0)], vec![qi(0), qi(0), qi(1)]];
        let d = decompose(&[(2, m1), (3, m2)], &rows, None).unwrap();
        assert_eq!(d.orbits.len(), 2);
        assert_eq!(d.orbits[0].degree(), 1);
        assert_eq!(d.orbits[0].alg.as_rational(d.orbits[0].eigenvalue(2).unwrap()), Some(qi(5)));
        assert_eq!(d.orbits[1].degree(), 2);
        assert_eq!(d.orbits[1].alg.as_rational(d.orbits[1].eigenvalue(3).unwrap()), Some(qi(1)));
    }
}
