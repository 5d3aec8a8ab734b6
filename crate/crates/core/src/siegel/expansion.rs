//! Truncated Fourier expansions of degree-two Siegel modular forms.
//!
//! Coefficients are exact rationals stored as integer numerators over a
//! common denominator. Multiplication uses a convolution plan cached per
//! truncation bound: for each canonical output matrix `T` it lists every
//! decomposition `T = T₁ + T₂` into positive semidefinite parts by the
//! indices of their canonical representatives.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::halfint::{HalfIntMatrix, KeySet};
use crate::arith::Q;
use crate::error::{Error, Result};

/// Decomposition table for one bound.
struct ConvolutionPlan {
    offsets: Vec<usize>,
    pairs: Vec<(u32, u32, u32)>,
}

impl ConvolutionPlan {
    fn build(keys: &KeySet) -> Self {
        let lists: Vec<Vec<(u32, u32, u32)>> = keys
            .keys
            .par_iter()
            .map(|t| {
                let mut acc: HashMap<(u32, u32), u32> = HashMap::new();
                for b1 in 0..=t.b {
                    for c1 in 0..=t.c {
                        let b2 = t.b - b1;
                        let c2 = t.c - c1;
                        let r1 = 4 * b1 * c1;
                        let r2 = 4 * b2 * c2;
                        let s1 = isqrt(r1);
                        for a1 in -s1..=s1 {
                            let a2 = t.a - a1;
                            if a2 * a2 > r2 {
                                continue;
                            }
                            let i1 = keys.lookup(&HalfIntMatrix::new(b1, a1, c1)).expect("summand in key set");
                            let i2 = keys.lookup(&HalfIntMatrix::new(b2, a2, c2)).expect("summand in key set");
                            *acc.entry((i1 as u32, i2 as u32)).or_insert(0) += 1;
                        }
                    }
                }
                let mut v: Vec<(u32, u32, u32)> = acc.into_iter().map(|((x, y), m)| (x, y, m)).collect();
                v.sort_unstable();
                v
            })
            .collect();
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut pairs = Vec::new();
        offsets.push(0);
        for l in lists {
            pairs.extend(l);
            offsets.push(pairs.len());
        }
        ConvolutionPlan { offsets, pairs }
    }

    fn get(bound: i64) -> Arc<ConvolutionPlan> {
        static CACHE: OnceLock<Mutex<HashMap<i64, Arc<ConvolutionPlan>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(p) = cache.lock().unwrap().get(&bound) {
            return p.clone();
        }
        let plan = Arc::new(ConvolutionPlan::build(&KeySet::get(bound)));
        cache.lock().unwrap().insert(bound, plan.clone());
        plan
    }
}

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Truncated Fourier expansion `F(Z) = Σ_T A(T) e(tr(TZ))`.
#[derive(Clone, Debug)]
pub struct FourierExpansion {
    pub weight: i64,
    keys: Arc<KeySet>,
    den: BigInt,
    nums: Vec<BigInt>,
}

impl PartialEq for FourierExpansion {
    fn eq(&self, o: &Self) -> bool {
        self.weight == o.weight && self.bound() == o.bound() && self.den == o.den && self.nums == o.nums
    }
}

impl FourierExpansion {
    fn normalized(weight: i64, keys: Arc<KeySet>, mut den: BigInt, mut nums: Vec<BigInt>) -> Self {
        if den.is_negative() {
            den = -den;
            for x in nums.iter_mut() {
                *x = -&*x;
            }
        }
        let g = nums.iter().fold(den.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() && !g.is_zero() {
            den /= &g;
            for x in nums.iter_mut() {
                *x /= &g;
            }
        }
        FourierExpansion { weight, keys, den, nums }
    }

    /// Builds an expansion from one rational per key of the bound.
    pub fn from_rationals(weight: i64, bound: i64, values: Vec<Q>) -> Self {
        let keys = KeySet::get(bound);
        assert_eq!(values.len(), keys.len());
        let den = values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums = values.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        Self::normalized(weight, keys, den, nums)
    }

    /// Builds an expansion by evaluating a coefficient function on every key.
    pub fn from_fn<F>(weight: i64, bound: i64, f: F) -> Self
    where
        F: Fn(&HalfIntMatrix) -> Q + Sync,
    {
        let keys = KeySet::get(bound);
        let values: Vec<Q> = keys.keys.par_iter().map(&f).collect();
        Self::from_rationals(weight, bound, values)
    }

    pub fn zero(weight: i64, bound: i64) -> Self {
        let keys = KeySet::get(bound);
        let n = keys.len();
        FourierExpansion { weight, keys, den: BigInt::one(), nums: vec![BigInt::zero(); n] }
    }

    pub fn bound(&self) -> i64 {
        self.keys.bound
    }

    pub fn keys(&self) -> &[HalfIntMatrix] {
        &self.keys.keys
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(|x| x.is_zero())
    }

    /// Coefficient at the `i`-th key.
    pub fn coeff_at(&self, i: usize) -> Q {
        BigRational::new(self.nums[i].clone(), self.den.clone())
    }

    /// Coefficient `A(T)` of any positive semidefinite `T` inside the bound.
    pub fn coeff(&self, t: &HalfIntMatrix) -> Option<Q> {
        if !t.is_psd() {
            return Some(Q::zero());
        }
        self.keys.lookup(t).map(|i| self.coeff_at(i))
    }

    /// Coefficient lookup that reports truncation failures.
    pub fn coeff_checked(&self, t: &HalfIntMatrix) -> Result<Q> {
        self.coeff(t)
            .ok_or(Error::InsufficientTruncation { needed: t.det4().max(t.b).max(t.c), available: self.bound() })
    }

    /// All coefficients in key order.
    pub fn coeffs(&self) -> Vec<Q> {
        (0..self.len()).map(|i| self.coeff_at(i)).collect()
    }

    /// Singular coefficients `A([n,0,0])` for `n = 0..=bound`, i.e. the
    /// expansion of `Φ F`.
    pub fn phi(&self) -> Vec<Q> {
        (0..=self.bound()).map(|n| self.coeff(&HalfIntMatrix::new(0, 0, n)).unwrap()).collect()
    }

    /// Restriction to a smaller bound.
    pub fn truncate(&self, bound: i64) -> Result<Self> {
        if bound > self.bound() {
            return Err(Error::InsufficientTruncation { needed: bound, available: self.bound() });
        }
        let keys = KeySet::get(bound);
        let nums = keys.keys.iter().map(|t| self.nums[self.keys.position(t).unwrap()].clone()).collect();
        Ok(Self::normalized(self.weight, keys, self.den.clone(), nums))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let nums = self.nums.iter().map(|x| x * c.numer()).collect();
        Self::normalized(self.weight, self.keys.clone(), &self.den * c.denom(), nums)
    }

    /// `Σ cᵢ Fᵢ` over expansions of equal weight and bound.
    pub fn linear_combination(terms: &[(Q, &FourierExpansion)]) -> Self {
        let first = terms[0].1;
        let keys = first.keys.clone();
        let den = terms.iter().fold(BigInt::one(), |acc, (c, f)| acc.lcm(&(c.denom() * &f.den)));
        let mut nums = vec![BigInt::zero(); keys.len()];
        for (c, f) in terms {
            assert_eq!(f.bound(), first.bound(), "bounds differ in linear combination");
            assert_eq!(f.weight, first.weight, "weights differ in linear combination");
            if c.is_zero() {
                continue;
            }
            let factor = c.numer() * (&den / (c.denom() * &f.den));
            for (acc, x) in nums.iter_mut().zip(&f.nums) {
                *acc += x * &factor;
            }
        }
        Self::normalized(first.weight, keys, den, nums)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::linear_combination(&[(Q::one(), self), (Q::one(), o)])
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::linear_combination(&[(Q::one(), self), (-Q::one(), o)])
    }

    /// Product of two expansions; the result has the smaller bound.
    pub fn mul(&self, o: &Self) -> Self {
        let bound = self.bound().min(o.bound());
        let a = self.truncate(bound).unwrap();
        let b = o.truncate(bound).unwrap();
        let plan = ConvolutionPlan::get(bound);
        let keys = KeySet::get(bound);
        let nums: Vec<BigInt> = (0..keys.len())
            .into_par_iter()
            .map(|i| {
                let mut s = BigInt::zero();
                for &(i1, i2, m) in &plan.pairs[plan.offsets[i]..plan.offsets[i + 1]] {
                    let x = &a.nums[i1 as usize];
                    let y = &b.nums[i2 as usize];
                    if x.is_zero() || y.is_zero() {
                        continue;
                    }
                    let t = x * y;
                    if m == 1 {
                        s += t;
                    } else {
                        s += t * m;
                    }
                }
                s
            })
            .collect();
        Self::normalized(self.weight + o.weight, keys, &a.den * &b.den, nums)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc: Option<Self> = None;
        for _ in 0..e {
            acc = Some(match acc {
                None => self.clone(),
                Some(x) => x.mul(self),
            });
        }
        acc.unwrap_or_else(|| Self::one(self.bound()))
    }

    /// The constant function 1 (weight 0).
    pub fn one(bound: i64) -> Self {
        let mut z = Self::zero(0, bound);
        z.nums[0] = BigInt::one();
        z
    }

    /// Index of the first key (in key order) carrying a nonzero coefficient.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.nums.iter().position(|x| !x.is_zero())
    }

    /// Scales so that the first nonzero coefficient equals 1.
    pub fn normalize_first(&self) -> Self {
        match self.first_nonzero() {
            Some(i) => self.scale(&(Q::one() / self.coeff_at(i))),
            None => self.clone(),
        }
    }
}
