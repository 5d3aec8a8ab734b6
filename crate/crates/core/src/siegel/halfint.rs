//! Half-integral 2×2 matrices and the index set of a truncated expansion.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

use crate::quadform::BinaryQF;

/// Half-integral symmetric matrix `[[b, a/2], [a/2, c]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfIntMatrix {
    pub b: i64,
    pub a: i64,
    pub c: i64,
}

impl HalfIntMatrix {
    pub const fn new(b: i64, a: i64, c: i64) -> Self {
        HalfIntMatrix { b, a, c }
    }

    /// `4·det = 4bc - a²`.
    pub fn det4(&self) -> i64 {
        4 * self.b * self.c - self.a * self.a
    }

    pub fn is_psd(&self) -> bool {
        self.b >= 0 && self.c >= 0 && self.det4() >= 0
    }

    pub fn content(&self) -> i64 {
        self.b.gcd(&self.a).gcd(&self.c)
    }

    pub fn scale(&self, k: i64) -> Self {
        HalfIntMatrix::new(k * self.b, k * self.a, k * self.c)
    }

    /// Canonical representative of the `GL₂(ℤ)`-orbit of a positive
    /// semidefinite matrix.
    ///
    /// Definite matrices map to `0 <= a <= b <= c`; singular ones of content
    /// `n` map to `[0, 0, n]`. Even weight forms are invariant under the full
    /// `GL₂(ℤ)`, so this is the key used for coefficient storage.
    pub fn canonical(&self) -> Self {
        debug_assert!(self.is_psd(), "canonical form needs a psd matrix: {self}");
        if self.det4() == 0 {
            return HalfIntMatrix::new(0, 0, self.content());
        }
        let r = BinaryQF::new(self.b, self.a, self.c).reduce();
        HalfIntMatrix::new(r.b, r.a.abs(), r.c)
    }

    /// True when `self` is its own canonical representative.
    pub fn is_canonical(&self) -> bool {
        self.is_psd() && self.canonical() == *self
    }
}

impl fmt::Display for HalfIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.b, self.a, self.c)
    }
}

/// Ordered index set of canonical matrices with `det4 <= bound` and
/// `max(b, c) <= bound`, sorted by `(det4, b, a, c)`.
#[derive(Debug)]
pub struct KeySet {
    pub bound: i64,
    pub keys: Vec<HalfIntMatrix>,
    index: HashMap<HalfIntMatrix, u32>,
}

impl KeySet {
    fn build(bound: i64) -> Self {
        let mut keys = Vec::new();
        for n in 0..=bound {
            keys.push(HalfIntMatrix::new(0, 0, n));
        }
        let mut b = 1i64;
        while 3 * b * b <= bound {
            for a in 0..=b {
                let mut c = b;
                while 4 * b * c - a * a <= bound && c <= bound {
                    let t = HalfIntMatrix::new(b, a, c);
                    if t.det4() > 0 && t.is_canonical() {
                        keys.push(t);
                    }
                    c += 1;
                }
            }
            b += 1;
        }
        keys.sort_by_key(|t| (t.det4(), t.b, t.a, t.c));
        let index = keys.iter().enumerate().map(|(i, t)| (*t, i as u32)).collect();
        KeySet { bound, keys, index }
    }

    /// Shared key set for a bound.
    pub fn get(bound: i64) -> Arc<KeySet> {
        static CACHE: OnceLock<Mutex<HashMap<i64, Arc<KeySet>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard.entry(bound).or_insert_with(|| Arc::new(KeySet::build(bound))).clone()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Position of a canonical key.
    pub fn position(&self, t: &HalfIntMatrix) -> Option<usize> {
        self.index.get(t).map(|&i| i as usize)
    }

    /// Position of any psd matrix after canonicalisation.
    pub fn lookup(&self, t: &HalfIntMatrix) -> Option<usize> {
        self.position(&t.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        assert_eq!(HalfIntMatrix::new(3, 2, 2).canonical(), HalfIntMatrix::new(2, 2, 3));
        assert_eq!(HalfIntMatrix::new(2, -1, 3).canonical(), HalfIntMatrix::new(2, 1, 3));
        assert_eq!(HalfIntMatrix::new(4, 4, 1).canonical(), HalfIntMatrix::new(0, 0, 1));
        assert_eq!(HalfIntMatrix::new(2, 0, 0).canonical(), HalfIntMatrix::new(0, 0, 2));
        assert_eq!(HalfIntMatrix::new(0, 0, 0).canonical(), HalfIntMatrix::new(0, 0, 0));
    }

    #[test]
    fn keyset_contents() {
        let ks = KeySet::get(8);
        let pd: Vec<_> = ks.keys.iter().filter(|t| t.det4() > 0).copied().collect();
        assert_eq!(
            pd,
            vec![
                HalfIntMatrix::new(1, 1, 1),
                HalfIntMatrix::new(1, 0, 1),
                HalfIntMatrix::new(1, 1, 2),
                HalfIntMatrix::new(1, 0, 2),
            ]
        );
        assert_eq!(ks.len(), 9 + 4);
    }
}
