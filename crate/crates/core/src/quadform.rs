//! Positive definite binary quadratic forms and the form class group.
//!
//! A form `[b, a, c]` stands for `b·x² + a·xy + c·y²` with discriminant
//! `a² - 4bc`. Reduced forms satisfy `-b < a <= b <= c` with `a >= 0` when
//! `b = c`. Class group characters are stored as exponent tables: the value
//! of a character on class `j` is `exp(2πi·values[j]/m)` with `m` the group
//! exponent, so every identity between characters is checked exactly.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;

use crate::arith::{factorize, is_fundamental, kronecker, modp};
use crate::cyclotomic::{int_as_rational, is_zero_int, reduce_int};
use crate::error::{Error, Result};

/// Integral binary quadratic form `b·x² + a·xy + c·y²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryQF {
    pub b: i64,
    pub a: i64,
    pub c: i64,
}

/// Integral 2×2 matrix `[[m00, m01], [m10, m11]]`.
pub type Mat2 = [[i64; 2]; 2];

fn mat2_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
        [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
    ]
}

impl BinaryQF {
    pub const fn new(b: i64, a: i64, c: i64) -> Self {
        BinaryQF { b, a, c }
    }

    pub fn disc(&self) -> i64 {
        self.a * self.a - 4 * self.b * self.c
    }

    pub fn content(&self) -> i64 {
        self.b.gcd(&self.a).gcd(&self.c)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.disc() < 0 && self.b > 0
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.b * x * x + self.a * x * y + self.c * y * y
    }

    /// The conjugate form `[b, -a, c]`, representing the inverse class.
    pub fn conj(&self) -> Self {
        BinaryQF::new(self.b, -self.a, self.c)
    }

    pub fn is_reduced(&self) -> bool {
        -self.b < self.a && self.a <= self.b && self.b <= self.c && (self.b != self.c || self.a >= 0)
    }

    /// Applies `γ`: the Gram matrix `M` becomes `γ M γᵗ`.
    pub fn act(&self, g: &Mat2) -> Self {
        let [[p, q], [r, s]] = *g;
        // Rows of γ give the new basis vectors (p, q) and (r, s).
        let b = self.eval(p, q);
        let c = self.eval(r, s);
        let a = 2 * self.b * p * r + self.a * (p * s + q * r) + 2 * self.c * q * s;
        BinaryQF::new(b, a, c)
    }

    /// Reduction together with `γ ∈ SL₂(ℤ)` such that `reduced = self.act(γ)`.
    pub fn reduce_with_transform(&self) -> (Self, Mat2) {
        assert!(self.is_positive_definite(), "reduction needs a positive definite form");
        let (mut b, mut a, mut c) = (self.b, self.a, self.c);
        let mut g: Mat2 = [[1, 0], [0, 1]];
        loop {
            if !(-b < a && a <= b) {
                let t = Integer::div_floor(&(b - a), &(2 * b));
                c += t * t * b + t * a;
                a += 2 * t * b;
                g = mat2_mul(&[[1, 0], [t, 1]], &g);
            }
            if b > c || (b == c && a < 0) {
                std::mem::swap(&mut b, &mut c);
                a = -a;
                g = mat2_mul(&[[0, 1], [-1, 0]], &g);
                continue;
            }
            break;
        }
        (BinaryQF::new(b, a, c), g)
    }

    pub fn reduce(&self) -> Self {
        self.reduce_with_transform().0
    }

    /// Dirichlet composition followed by reduction.
    pub fn compose(&self, other: &Self) -> Self {
        // Working in (a, b, c) = (leading, middle, last) notation.
        let (mut a1, mut b1, mut c1) = (self.b, self.a, self.c);
        let (mut a2, mut b2, mut c2) = (other.b, other.a, other.c);
        if a1 > a2 {
            std::mem::swap(&mut a1, &mut a2);
            std::mem::swap(&mut b1, &mut b2);
            std::mem::swap(&mut c1, &mut c2);
        }
        let _ = c1;
        let s = (b1 + b2) / 2;
        let n = b2 - s;
        let (d, y1) = if a2 % a1 == 0 {
            (a1, 0)
        } else {
            let e = a2.extended_gcd(&a1);
            (e.gcd, e.x)
        };
        let (d1, x2, y2) = if s % d == 0 {
            (d, 0, -1)
        } else {
            let e = s.extended_gcd(&d);
            (e.gcd, e.x, -e.y)
        };
        let v1 = a1 / d1;
        let v2 = a2 / d1;
        let r = modp(y1 * y2 * n - x2 * c2, v1);
        let b3 = b2 + 2 * v2 * r;
        let a3 = v1 * v2;
        let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
        BinaryQF::new(a3, b3, c3).reduce()
    }
}

impl fmt::Display for BinaryQF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.b, self.a, self.c)
    }
}

/// Checks that `d` is a negative fundamental discriminant.
pub fn check_discriminant(d: i64) -> Result<()> {
    if d < 0 && is_fundamental(d) {
        Ok(())
    } else {
        Err(Error::NotFundamental(d))
    }
}

/// Number of roots of unity in the ring of integers of `Q(√d)`.
pub fn units_count(d: i64) -> i64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// The principal form of discriminant `d`.
pub fn principal_form(d: i64) -> BinaryQF {
    if modp(d, 4) == 0 {
        BinaryQF::new(1, 0, -d / 4)
    } else {
        BinaryQF::new(1, 1, (1 - d) / 4)
    }
}

/// All primitive reduced forms of discriminant `d < 0`, sorted.
pub fn reduced_forms(d: i64) -> Vec<BinaryQF> {
    let mut out = Vec::new();
    let mut b = 1i64;
    while 3 * b * b <= -d {
        for a in (-b + 1)..=b {
            if modp(a - d, 2) != 0 {
                continue;
            }
            let num = a * a - d;
            if num % (4 * b) != 0 {
                continue;
            }
            let c = num / (4 * b);
            let f = BinaryQF::new(b, a, c);
            if f.is_reduced() && f.content() == 1 {
                out.push(f);
            }
        }
        b += 1;
    }
    out.sort();
    out
}

/// A class group character, stored by exponents modulo the group exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCharacter {
    /// Exponents on the chosen generators (modulo `m`).
    pub gen_exps: Vec<u32>,
    /// `values[j]` gives `χ(class j) = ζ_m^{values[j]}`.
    pub values: Vec<u32>,
    /// Group exponent.
    pub m: u32,
}

impl ClassCharacter {
    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Order of the character.
    pub fn order(&self) -> u32 {
        let g = self.values.iter().fold(self.m, |acc, &v| acc.gcd(&v));
        self.m / g
    }

    /// True when `χ² = 1`.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|&v| (2 * v) % self.m == 0)
    }

    /// `d_χ`: 1 for quadratic (or trivial) characters, 2 otherwise.
    pub fn d_chi(&self) -> u32 {
        if self.is_real() {
            1
        } else {
            2
        }
    }

    /// Complex value on class `j`.
    pub fn value(&self, j: usize) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(
            1.0,
            2.0 * std::f64::consts::PI * self.values[j] as f64 / self.m as f64,
        )
    }
}

/// The class group `Cl_D` of a negative fundamental discriminant.
#[derive(Clone, Debug)]
pub struct ClassGroup {
    pub d: i64,
    pub w: i64,
    /// Reduced representatives; index 0 is the principal class.
    pub forms: Vec<BinaryQF>,
    index: HashMap<BinaryQF, usize>,
    table: Vec<u32>,
    /// Index of the inverse (equivalently Galois conjugate) class.
    pub inverse: Vec<usize>,
    /// Exponent of the group.
    pub exponent: u32,
    /// Generator indices used for the exponent coordinates.
    pub generators: Vec<usize>,
    /// Relative orders of the generators.
    pub relative_orders: Vec<u32>,
    /// Exponent coordinates of each class on the generators.
    pub coords: Vec<Vec<u32>>,
    /// All characters; index 0 is trivial.
    pub characters: Vec<ClassCharacter>,
    char_index: HashMap<Vec<u32>, usize>,
    relations_cache: Vec<Vec<u32>>,
}

impl ClassGroup {
    /// Builds the group, its full composition table and its character group.
    pub fn new(d: i64) -> Result<Self> {
        check_discriminant(d)?;
        let mut forms = reduced_forms(d);
        let principal = principal_form(d);
        let pos = forms.iter().position(|f| *f == principal).expect("principal form present");
        forms.swap(0, pos);
        let h = forms.len();
        let index: HashMap<BinaryQF, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut table = vec![0u32; h * h];
        for i in 0..h {
            for j in i..h {
                let k = index[&forms[i].compose(&forms[j])] as u32;
                table[i * h + j] = k;
                table[j * h + i] = k;
            }
        }
        let inverse: Vec<usize> = forms.iter().map(|f| index[&f.conj().reduce()]).collect();
        let mut g = ClassGroup {
            d,
            w: units_count(d),
            forms,
            index,
            table,
            inverse,
            exponent: 1,
            generators: Vec::new(),
            relative_orders: Vec::new(),
            coords: Vec::new(),
            characters: Vec::new(),
            char_index: HashMap::new(),
            relations_cache: Vec::new(),
        };
        g.build_structure();
        g.build_characters();
        Ok(g)
    }

    pub fn h(&self) -> usize {
        self.forms.len()
    }

    /// Composition of class indices.
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i * self.h() + j] as usize
    }

    pub fn pow(&self, i: usize, e: u64) -> usize {
        let mut acc = 0;
        for _ in 0..e {
            acc = self.mul(acc, i);
        }
        acc
    }

    pub fn order_of(&self, i: usize) -> u32 {
        let mut acc = i;
        let mut n = 1;
        while acc != 0 {
            acc = self.mul(acc, i);
            n += 1;
        }
        n
    }

    /// Index of the class of any primitive positive definite form of discriminant `D`.
    pub fn class_of(&self, f: &BinaryQF) -> Result<usize> {
        if !f.is_positive_definite() {
            return Err(Error::NotPositiveDefinite { b: f.b, a: f.a, c: f.c });
        }
        if f.disc() != self.d {
            return Err(Error::WrongDiscriminant { b: f.b, a: f.a, c: f.c, found: f.disc(), expected: self.d });
        }
        if f.content() != 1 {
            return Err(Error::Imprimitive { b: f.b, a: f.a, c: f.c });
        }
        Ok(self.index[&f.reduce()])
    }

    fn build_structure(&mut self) {
        let h = self.h();
        let orders: Vec<u32> = (0..h).map(|i| self.order_of(i)).collect();
        self.exponent = orders.iter().fold(1u32, |acc, &o| acc.lcm(&o));
        let mut in_sub = vec![false; h];
        let mut coords: Vec<Option<Vec<u32>>> = vec![None; h];
        in_sub[0] = true;
        coords[0] = Some(Vec::new());
        let mut members = vec![0usize];
        let mut relations: Vec<Vec<u32>> = Vec::new();
        while members.len() < h {
            let g = (0..h).filter(|&i| !in_sub[i]).max_by_key(|&i| (orders[i], std::cmp::Reverse(i))).unwrap();
            let gi = self.generators.len();
            // Relative order: smallest r with g^r in the current subgroup.
            let mut r = 1u32;
            let mut acc = g;
            while !in_sub[acc] {
                acc = self.mul(acc, g);
                r += 1;
            }
            let landing = coords[acc].clone().unwrap();
            let old = members.clone();
            for c in coords.iter_mut().flatten() {
                c.push(0);
            }
            let mut power = 0usize; // g^k
            for k in 1..r {
                power = self.mul(power, g);
                for &x in &old {
                    let y = self.mul(x, power);
                    debug_assert!(!in_sub[y]);
                    let mut cv = coords[x].clone().unwrap();
                    cv[gi] = k;
                    coords[y] = Some(cv);
                    in_sub[y] = true;
                    members.push(y);
                }
            }
            let mut rel = landing;
            rel.push(0);
            relations.push(rel);
            self.generators.push(g);
            self.relative_orders.push(r);
        }
        let n = self.generators.len();
        self.coords = coords
            .into_iter()
            .map(|c| {
                let mut c = c.unwrap();
                c.resize(n, 0);
                c
            })
            .collect();
        // relations[i] holds the coordinates of g_i^{r_i} on earlier generators.
        self.relations_cache = relations;
    }

    fn build_characters(&mut self) {
        let m = self.exponent;
        let n = self.generators.len();
        let mut partial: Vec<Vec<u32>> = vec![Vec::new()];
        for i in 0..n {
            let r = self.relative_orders[i];
            let rel = &self.relations_cache[i];
            let mut next = Vec::new();
            for e in &partial {
                let s: u64 = e.iter().zip(rel).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % m as u64;
                let s = s as u32;
                assert!(s.is_multiple_of(r), "inconsistent relation in class group structure");
                let step = m / r;
                for k in 0..r {
                    let mut v = e.clone();
                    v.push((s / r + k * step) % m);
                    next.push(v);
                }
            }
            partial = next;
        }
        let h = self.h();
        self.characters = partial
            .into_iter()
            .map(|e| {
                let values = (0..h)
                    .map(|j| {
                        let s: u64 = self.coords[j].iter().zip(&e).map(|(&a, &b)| a as u64 * b as u64).sum();
                        (s % m as u64) as u32
                    })
                    .collect();
                ClassCharacter { gen_exps: e, values, m }
            })
            .collect();
        self.char_index = self.characters.iter().enumerate().map(|(i, c)| (c.gen_exps.clone(), i)).collect();
    }

    /// Index of the product character `χ_i · χ_j^{±1}`.
    pub fn char_product(&self, i: usize, j: usize, conj_j: bool) -> usize {
        let m = self.exponent;
        let e: Vec<u32> = self.characters[i]
            .gen_exps
            .iter()
            .zip(&self.characters[j].gen_exps)
            .map(|(&a, &b)| if conj_j { (a + m - b) % m } else { (a + b) % m })
            .collect();
        self.char_index[&e]
    }

    /// Index of the conjugate character `χ̄`.
    pub fn char_conj(&self, i: usize) -> usize {
        self.char_product(0, i, true)
    }

    /// Exact character sum `Σ_j χ(j)` as a reduced cyclotomic integer vector.
    pub fn character_sum(&self, i: usize) -> Vec<i128> {
        let m = self.exponent as usize;
        let mut hist = vec![0i64; m];
        for &v in &self.characters[i].values {
            hist[v as usize] += 1;
        }
        reduce_int(&hist, m as u64)
    }

    /// Verifies the group axioms on the full composition table.
    pub fn check_axioms(&self) -> Result<()> {
        let h = self.h();
        let fail = |msg: &str| Err(Error::Invalid(format!("class group {}: {msg}", self.d)));
        for i in 0..h {
            if self.mul(0, i) != i {
                return fail("identity");
            }
            if self.mul(i, self.inverse[i]) != 0 {
                return fail("inverse");
            }
            let row: std::collections::HashSet<_> = (0..h).map(|j| self.mul(i, j)).collect();
            if row.len() != h {
                return fail("row is not a permutation");
            }
        }
        for i in 0..h {
            for j in 0..h {
                let ij = self.mul(i, j);
                for k in 0..h {
                    if self.mul(ij, k) != self.mul(i, self.mul(j, k)) {
                        return fail("associativity");
                    }
                }
            }
        }
        for f in &self.forms {
            if f.disc() != self.d || !f.is_reduced() || f.content() != 1 {
                return fail("bad representative");
            }
        }
        Ok(())
    }

    /// Exact orthogonality `Σ_j χ(j) η̄(j) = h·δ(χ, η)` for all pairs.
    pub fn check_orthogonality(&self) -> Result<()> {
        let h = self.h();
        let sums: Vec<Vec<i128>> = (0..h).map(|i| self.character_sum(i)).collect();
        for (i, s) in sums.iter().enumerate() {
            let ok = if i == 0 { int_as_rational(s) == Some(h as i64) } else { is_zero_int(s) };
            if !ok {
                return Err(Error::Invalid(format!("character sum {i} for D={} is wrong", self.d)));
            }
        }
        for i in 0..h {
            for j in 0..h {
                let k = self.char_product(i, j, true);
                let expect_trivial = i == j;
                if (k == 0) != expect_trivial {
                    return Err(Error::Invalid(format!("orthogonality fails for ({i},{j}) at D={}", self.d)));
                }
                // Also check the product table pointwise.
                let m = self.exponent;
                let ci = &self.characters[i].values;
                let cj = &self.characters[j].values;
                let ck = &self.characters[k].values;
                if (0..h).any(|t| (ci[t] + m - cj[t]) % m != ck[t]) {
                    return Err(Error::Invalid("character product table inconsistent".into()));
                }
            }
        }
        Ok(())
    }

    /// Verifies that every character is a homomorphism and that Galois
    /// conjugation of classes conjugates character values.
    pub fn check_characters(&self) -> Result<()> {
        let h = self.h();
        let m = self.exponent;
        let distinct: std::collections::HashSet<_> = self.characters.iter().map(|c| c.values.clone()).collect();
        if distinct.len() != h {
            return Err(Error::Invalid("characters are not distinct".into()));
        }
        for c in &self.characters {
            for i in 0..h {
                if (c.values[self.inverse[i]] + c.values[i]) % m != 0 {
                    return Err(Error::Invalid("conjugation is not inversion".into()));
                }
                for j in 0..h {
                    if (c.values[i] + c.values[j]) % m != c.values[self.mul(i, j)] {
                        return Err(Error::Invalid("character is not multiplicative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of distinct prime divisors of `D`.
    pub fn prime_divisor_count(&self) -> usize {
        factorize(self.d.unsigned_abs()).len()
    }

    /// Number of characters with `χ² = 1`.
    pub fn real_character_count(&self) -> usize {
        self.characters.iter().filter(|c| c.is_real()).count()
    }

    /// Indices of ambiguous classes (`c = c̄`).
    pub fn ambiguous_classes(&self) -> Vec<usize> {
        (0..self.h()).filter(|&i| self.inverse[i] == i).collect()
    }

    /// Class of a prime ideal above `p`, from `b² ≡ D (mod 4p)` with the
    /// smallest `0 <= b < 2p`. Works for split and ramified `p`.
    fn prime_form(&self, p: u64) -> Option<BinaryQF> {
        let p = p as i64;
        (0..2 * p)
            .find(|&b| modp(b * b - self.d, 4 * p) == 0)
            .map(|b| BinaryQF::new(p, b, (b * b - self.d) / (4 * p)))
    }

    /// Class of the prime `𝔭 = (p, (-b+√D)/2)` for a split prime `p`.
    pub fn prime_to_class(&self, p: u64) -> Result<usize> {
        if !crate::arith::is_prime(p) {
            return Err(Error::Invalid(format!("{p} is not prime")));
        }
        match kronecker(self.d, p) {
            1 => {}
            0 => return Err(Error::NotSplit { p, d: self.d, kind: "ramified" }),
            _ => return Err(Error::NotSplit { p, d: self.d, kind: "inert" }),
        }
        let f = self.prime_form(p).expect("split prime has a square root of D");
        self.class_of(&f)
    }

    /// Class of the unique prime above a ramified `p`.
    pub fn ramified_class(&self, p: u64) -> Result<usize> {
        if kronecker(self.d, p) != 0 || !crate::arith::is_prime(p) {
            return Err(Error::Invalid(format!("{p} does not ramify in D={}", self.d)));
        }
        let f = self.prime_form(p).expect("ramified prime has a square root of D");
        self.class_of(&f)
    }
}
