//! Igusa generators and monomial bases of cusp forms.
//!
//! The even-weight ring is generated by `E₄, E₆, χ₁₀, χ₁₂`; the cusp forms
//! are the ideal generated by `χ₁₀` and `χ₁₂`. Both cusp generators are
//! produced as the unique combination of Eisenstein monomials of their
//! weight whose singular coefficients all vanish, normalised so that
//! `A([1,1,1]) = 1`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use super::eisenstein::eisenstein;
use super::expansion::FourierExpansion;
use super::halfint::HalfIntMatrix;
use crate::arith::Q;
use crate::error::{Error, Result};
use crate::linalg::kernel;

/// `E₄, E₆, χ₁₀, χ₁₂` at a common bound.
#[derive(Clone, Debug)]
pub struct Generators {
    pub e4: FourierExpansion,
    pub e6: FourierExpansion,
    pub chi10: FourierExpansion,
    pub chi12: FourierExpansion,
}

fn cusp_generator(weight: i64, monomials: &[FourierExpansion]) -> Result<FourierExpansion> {
    let bound = monomials[0].bound();
    let rows: Vec<Vec<Q>> = (0..=bound)
        .map(|n| monomials.iter().map(|f| f.coeff(&HalfIntMatrix::new(0, 0, n)).unwrap()).collect())
        .collect();
    let ker = kernel(&rows, monomials.len());
    if ker.len() != 1 {
        return Err(Error::Invalid(format!("weight {weight}: singular kernel has dimension {}", ker.len())));
    }
    let terms: Vec<(Q, &FourierExpansion)> = ker[0].iter().cloned().zip(monomials.iter()).collect();
    let f = FourierExpansion::linear_combination(&terms);
    let a111 = f.coeff(&HalfIntMatrix::new(1, 1, 1)).unwrap();
    if a111.is_zero() {
        return Err(Error::Invalid(format!("weight {weight} cusp generator vanishes at [1,1,1]")));
    }
    Ok(f.scale(&(Q::one() / a111)))
}

impl Generators {
    fn build(bound: i64) -> Result<Self> {
        // The singular kernel is already one-dimensional with a few terms.
        let b = bound.max(4);
        let e4 = eisenstein(4, b)?;
        let e6 = eisenstein(6, b)?;
        let e10 = eisenstein(10, b)?;
        let e12 = eisenstein(12, b)?;
        let chi10 = cusp_generator(10, &[e4.mul(&e6), e10])?;
        let chi12 = cusp_generator(12, &[e4.pow(3), e6.mul(&e6), e12])?;
        let g = Generators { e4, e6, chi10, chi12 };
        if b == bound {
            Ok(g)
        } else {
            g.truncate(bound)
        }
    }

    fn truncate(&self, bound: i64) -> Result<Self> {
        Ok(Generators {
            e4: self.e4.truncate(bound)?,
            e6: self.e6.truncate(bound)?,
            chi10: self.chi10.truncate(bound)?,
            chi12: self.chi12.truncate(bound)?,
        })
    }

    /// Generators at a bound, reusing any larger cached computation.
    pub fn get(bound: i64) -> Result<Arc<Generators>> {
        static CACHE: OnceLock<Mutex<HashMap<i64, Arc<Generators>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        {
            let guard = cache.lock().unwrap();
            if let Some(g) = guard.get(&bound) {
                return Ok(g.clone());
            }
            if let Some((_, g)) = guard.iter().filter(|(&b, _)| b > bound).min_by_key(|(&b, _)| b) {
                let t = Arc::new(g.truncate(bound)?);
                drop(guard);
                cache.lock().unwrap().insert(bound, t.clone());
                return Ok(t);
            }
        }
        let g = Arc::new(Generators::build(bound)?);
        cache.lock().unwrap().insert(bound, g.clone());
        Ok(g)
    }
}

/// Exponents of a monomial `E₄^a E₆^b χ₁₀^c χ₁₂^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub e4: u32,
    pub e6: u32,
    pub chi10: u32,
    pub chi12: u32,
}

impl Monomial {
    pub fn weight(&self) -> i64 {
        4 * self.e4 as i64 + 6 * self.e6 as i64 + 10 * self.chi10 as i64 + 12 * self.chi12 as i64
    }

    pub fn is_cuspidal(&self) -> bool {
        self.chi10 + self.chi12 >= 1
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("E4", self.e4), ("E6", self.e6), ("chi10", self.chi10), ("chi12", self.chi12)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// All monomials of weight `l` (cusp monomials only when `cusp` is set),
/// ordered by `(χ₁₂, χ₁₀, E₆)` exponents.
pub fn monomials(l: i64, cusp: bool) -> Vec<Monomial> {
    let mut out = Vec::new();
    if l < 0 || l % 2 != 0 {
        return out;
    }
    for d in 0..=(l / 12) {
        for c in 0..=((l - 12 * d) / 10) {
            for b in 0..=((l - 12 * d - 10 * c) / 6) {
                let rest = l - 12 * d - 10 * c - 6 * b;
                if rest % 4 != 0 {
                    continue;
                }
                let m = Monomial { e4: (rest / 4) as u32, e6: b as u32, chi10: c as u32, chi12: d as u32 };
                if !cusp || m.is_cuspidal() {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Evaluates monomials, sharing intermediate products.
pub fn evaluate_monomials(ms: &[Monomial], bound: i64) -> Result<Vec<FourierExpansion>> {
    let g = Generators::get(bound)?;
    let mut memo: HashMap<Monomial, FourierExpansion> = HashMap::new();
    fn eval(m: Monomial, g: &Generators, memo: &mut HashMap<Monomial, FourierExpansion>, bound: i64) -> FourierExpansion {
        if let Some(f) = memo.get(&m) {
            return f.clone();
        }
        let f = if m.chi12 > 0 {
            let prev = eval(Monomial { chi12: m.chi12 - 1, ..m }, g, memo, bound);
            prev.mul(&g.chi12)
        } else if m.chi10 > 0 {
            let prev = eval(Monomial { chi10: m.chi10 - 1, ..m }, g, memo, bound);
            prev.mul(&g.chi10)
        } else if m.e6 > 0 {
            let prev = eval(Monomial { e6: m.e6 - 1, ..m }, g, memo, bound);
            prev.mul(&g.e6)
        } else if m.e4 > 0 {
            let prev = eval(Monomial { e4: m.e4 - 1, ..m }, g, memo, bound);
            prev.mul(&g.e4)
        } else {
            FourierExpansion::one(bound)
        };
        memo.insert(m, f.clone());
        f
    }
    Ok(ms.iter().map(|&m| eval(m, &g, &mut memo, bound)).collect())
}

/// Monomial basis of `S_l` truncated at `bound`.
pub fn cusp_basis(l: i64, bound: i64) -> Result<Vec<(Monomial, FourierExpansion)>> {
    if l < 0 || l % 2 != 0 {
        return Err(Error::UnsupportedWeight(l));
    }
    let ms = monomials(l, true);
    let fs = evaluate_monomials(&ms, bound)?;
    Ok(ms.into_iter().zip(fs).collect())
}

/// Dimension of the even-weight space `M_l` from the generating function
/// `1/((1-t⁴)(1-t⁶)(1-t¹⁰)(1-t¹²))`.
pub fn siegel_modular_dim(l: i64) -> usize {
    monomials(l, false).len()
}
