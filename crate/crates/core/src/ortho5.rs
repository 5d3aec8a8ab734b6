//! The quinary quadratic space, the exceptional isomorphism
//! `PGSp₂ ≅ SO(5)`, and the ternary data attached to a discriminant.
//!
//! `ρ(g)` is computed from the conjugation action `Y ↦ gYg⁻¹` on a
//! five-dimensional space of 4×4 matrices with `q(Y) = ½ tr(Y²)`, expressed
//! in a basis `(e₁, e₀, v, e₀', e₁')` whose Gram matrix is anti-diagonal with
//! a 2 in the middle. The block formulas for `ρ` on the Siegel parabolic are
//! consequences checked in the tests, not inputs.
//!
//! The ternary space is `V₁ = {X = [x y; z -x]}` with `Q₁(X) = 2x² + 2yz`,
//! written in the coordinates `(y, x, z)`.

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime, kronecker, q, qi, Q};
use crate::cyclotomic::{int_as_rational, reduce_int};
use crate::error::{Error, Result};
use crate::linalg::{identity, mat_mul, QMatrix};
use crate::quadform::{check_discriminant, BinaryQF, ClassGroup};

/// Rational 2×2 matrix.
pub type Mat2Q = [[Q; 2]; 2];

/// Gram matrix of the quinary form, anti-diagonal with middle entry 2.
pub fn quinary_gram() -> QMatrix {
    let mut m = vec![vec![Q::zero(); 5]; 5];
    for i in 0..5 {
        m[i][4 - i] = Q::one();
    }
    m[2][2] = qi(2);
    m
}

/// Gram matrix of `Q₁` in the coordinates `(y, x, z)`.
pub fn ternary_gram() -> QMatrix {
    vec![vec![qi(0), qi(0), qi(1)], vec![qi(0), qi(2), qi(0)], vec![qi(1), qi(0), qi(0)]]
}

fn quad(gram: &QMatrix, v: &[Q]) -> Q {
    let mut s = Q::zero();
    for (i, row) in gram.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                s += c * &v[i] * &v[j];
            }
        }
    }
    s
}

/// `ᵗx Q x` for the quinary form.
pub fn q_vec(v: &[Q]) -> Q {
    quad(&quinary_gram(), v)
}

/// `ᵗx Q₁ x` for the ternary form.
pub fn q1_vec(v: &[Q]) -> Q {
    quad(&ternary_gram(), v)
}

fn transpose(a: &QMatrix) -> QMatrix {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

fn unit(n: usize, i: usize, j: usize, c: Q) -> QMatrix {
    let mut m = vec![vec![Q::zero(); n]; n];
    m[i][j] = c;
    m
}

fn add(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
}

/// The basis `(e₁, e₀, v, e₀', e₁')` of the five-dimensional matrix model.
pub fn basis_matrices() -> [QMatrix; 5] {
    let u = |i, j, c: i64| unit(4, i, j, qi(c));
    [
        add(&u(0, 3, -1), &u(1, 2, 1)),
        add(&u(0, 1, 1), &u(3, 2, 1)),
        add(&add(&u(0, 0, 1), &u(1, 1, -1)), &add(&u(2, 2, 1), &u(3, 3, -1))),
        add(&u(1, 0, 1), &u(2, 3, 1)),
        add(&u(2, 1, 1), &u(3, 0, -1)),
    ]
}

/// Coordinates of `Y` in the basis of [`basis_matrices`]; errors when `Y`
/// does not lie in the five-dimensional space.
pub fn coordinates(y: &QMatrix) -> Result<[Q; 5]> {
    let c = [-y[0][3].clone(), y[0][1].clone(), y[0][0].clone(), y[1][0].clone(), -y[3][0].clone()];
    let b = basis_matrices();
    let mut r = vec![vec![Q::zero(); 4]; 4];
    for (k, m) in b.iter().enumerate() {
        for i in 0..4 {
            for j in 0..4 {
                r[i][j] += &c[k] * &m[i][j];
            }
        }
    }
    if &r != y {
        return Err(Error::Invalid("matrix is not in the quinary model".into()));
    }
    Ok(c)
}

/// `q(Y) = ½ tr(Y²)`.
pub fn q_matrix(y: &QMatrix) -> Q {
    let y2 = mat_mul(y, y);
    (0..4).fold(Q::zero(), |s, i| s + &y2[i][i]) / qi(2)
}

/// The standard symplectic form `[[0, 1₂], [-1₂, 0]]`.
pub fn symplectic_form() -> QMatrix {
    let mut j = vec![vec![Q::zero(); 4]; 4];
    j[0][2] = qi(1);
    j[1][3] = qi(1);
    j[2][0] = qi(-1);
    j[3][1] = qi(-1);
    j
}

/// A rational symplectic similitude `g` with `ᵗg J g = ν J`.
#[derive(Clone, Debug, PartialEq)]
pub struct Similitude {
    pub g: QMatrix,
    pub nu: Q,
}

impl Similitude {
    pub fn new(g: QMatrix) -> Result<Self> {
        if g.len() != 4 || g.iter().any(|r| r.len() != 4) {
            return Err(Error::Invalid("similitude must be 4×4".into()));
        }
        let j = symplectic_form();
        let lhs = mat_mul(&mat_mul(&transpose(&g), &j), &g);
        let nu = lhs[0][2].clone();
        if nu.is_zero() {
            return Err(Error::Invalid("singular matrix".into()));
        }
        let expect: QMatrix = j.iter().map(|r| r.iter().map(|c| c * &nu).collect()).collect();
        if lhs != expect {
            return Err(Error::Invalid("not a symplectic similitude".into()));
        }
        Ok(Similitude { g, nu })
    }

    /// `[[A, 0], [0, ν ᵗA⁻¹]]`.
    pub fn levi(a: &Mat2Q, nu: Q) -> Result<Self> {
        let det = &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0];
        if det.is_zero() || nu.is_zero() {
            return Err(Error::Invalid("singular Levi component".into()));
        }
        let mut g = vec![vec![Q::zero(); 4]; 4];
        for i in 0..2 {
            for j in 0..2 {
                g[i][j] = a[i][j].clone();
            }
        }
        // ν ᵗA⁻¹ = (ν/det) [[d, -c], [-b, a]].
        let s = &nu / &det;
        g[2][2] = &s * &a[1][1];
        g[2][3] = -&s * &a[1][0];
        g[3][2] = -&s * &a[0][1];
        g[3][3] = &s * &a[0][0];
        Similitude::new(g)
    }

    /// `[[1₂, B], [0, 1₂]]` with `B = [[b1, b2], [b2, b3]]`.
    pub fn unipotent(b1: Q, b2: Q, b3: Q) -> Self {
        let mut g = identity(4);
        g[0][2] = b1;
        g[0][3] = b2.clone();
        g[1][2] = b2;
        g[1][3] = b3;
        Similitude { g, nu: Q::one() }
    }

    /// The symplectic form itself as a group element.
    pub fn involution() -> Self {
        Similitude { g: symplectic_form(), nu: Q::one() }
    }

    pub fn mul(&self, o: &Similitude) -> Similitude {
        Similitude { g: mat_mul(&self.g, &o.g), nu: &self.nu * &o.nu }
    }

    /// `g⁻¹ = ν⁻¹ J⁻¹ ᵗg J`.
    pub fn inverse(&self) -> QMatrix {
        let j = symplectic_form();
        let jinv: QMatrix = j.iter().map(|r| r.iter().map(|c| -c).collect()).collect();
        let m = mat_mul(&mat_mul(&jinv, &transpose(&self.g)), &j);
        m.into_iter().map(|r| r.into_iter().map(|c| c / &self.nu).collect()).collect()
    }

    /// Floating copy of the matrix.
    pub fn to_f64(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = crate::arith::q_to_f64(&self.g[i][j]);
            }
        }
        m
    }
}

/// `ρ(g)`: the matrix of `Y ↦ gYg⁻¹` in the basis `(e₁, e₀, v, e₀', e₁')`.
pub fn rho(g: &Similitude) -> QMatrix {
    let ginv = g.inverse();
    let cols: Vec<[Q; 5]> = basis_matrices()
        .iter()
        .map(|b| coordinates(&mat_mul(&mat_mul(&g.g, b), &ginv)).expect("conjugation preserves the quinary model"))
        .collect();
    (0..5).map(|i| (0..5).map(|j| cols[j][i].clone()).collect()).collect()
}

/// `ss(A) = (ad-bc)⁻¹ [[a², -2ab, -b²], [-ac, ad+bc, bd], [-c², 2cd, d²]]`,
/// the action `X ↦ AXA⁻¹` on `V₁` in the coordinates `(y, x, z)`.
pub fn ss(a: &Mat2Q) -> Result<QMatrix> {
    let [[a0, b0], [c0, d0]] = a;
    let det = a0 * d0 - b0 * c0;
    if det.is_zero() {
        return Err(Error::Invalid("ss needs an invertible matrix".into()));
    }
    let m = vec![
        vec![a0 * a0, -(qi(2) * a0 * b0), -(b0 * b0)],
        vec![-(a0 * c0), a0 * d0 + b0 * c0, b0 * d0],
        vec![-(c0 * c0), qi(2) * d0 * c0, d0 * d0],
    ];
    Ok(m.into_iter().map(|r| r.into_iter().map(|c| c / &det).collect()).collect())
}

/// `sm(r; h) = diag(r, h, r⁻¹)`.
pub fn sm(r: &Q, h: &QMatrix) -> QMatrix {
    let mut m = vec![vec![Q::zero(); 5]; 5];
    m[0][0] = r.clone();
    m[4][4] = Q::one() / r;
    for i in 0..3 {
        for j in 0..3 {
            m[i + 1][j + 1] = h[i][j].clone();
        }
    }
    m
}

/// `sn(X) = [[1, -ᵗX Q₁, -½Q₁[X]], [0, 1₃, X], [0, 0, 1]]`.
pub fn sn(x: &[Q; 3]) -> QMatrix {
    let g1 = ternary_gram();
    let mut m = identity(5);
    for j in 0..3 {
        let s = (0..3).fold(Q::zero(), |acc, i| acc + &x[i] * &g1[i][j]);
        m[0][j + 1] = -s;
        m[j + 1][4] = x[j].clone();
    }
    m[0][4] = -q1_vec(x) / qi(2);
    m
}

/// A vector `X = [x y; z -x]` of the ternary space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryVector {
    pub x: Q,
    pub y: Q,
    pub z: Q,
}

impl TernaryVector {
    pub fn new(x: Q, y: Q, z: Q) -> Self {
        TernaryVector { x, y, z }
    }

    /// `Q₁(X) = 2x² + 2yz`.
    pub fn norm(&self) -> Q {
        qi(2) * &self.x * &self.x + qi(2) * &self.y * &self.z
    }

    /// Coordinates `(y, x, z)`.
    pub fn coords(&self) -> [Q; 3] {
        [self.y.clone(), self.x.clone(), self.z.clone()]
    }

    pub fn from_coords(c: &[Q]) -> Self {
        TernaryVector { y: c[0].clone(), x: c[1].clone(), z: c[2].clone() }
    }

    pub fn matrix(&self) -> Mat2Q {
        [[self.x.clone(), self.y.clone()], [self.z.clone(), -self.x.clone()]]
    }

    /// Membership in `𝓛₁* = {y, z ∈ ℤ, 2x ∈ ℤ}`.
    pub fn in_dual_lattice(&self) -> bool {
        self.y.is_integer() && self.z.is_integer() && (qi(2) * &self.x).is_integer()
    }

    /// Primitive in `𝓛₁*`: `gcd(y, 2x, z) = 1`.
    pub fn is_primitive_dual(&self) -> bool {
        if !self.in_dual_lattice() {
            return false;
        }
        let a = (qi(2) * &self.x).to_integer();
        a.gcd(self.y.numer()).gcd(self.z.numer()).is_one()
    }

    /// The binary form `X w⁻¹ = [[y, -x], [-x, -z]]`, i.e. `[y, -2x, -z]`.
    pub fn to_form(&self) -> Result<BinaryQF> {
        if !self.in_dual_lattice() {
            return Err(Error::Invalid("vector outside the dual lattice".into()));
        }
        let int = |v: &Q| -> i64 { v.to_integer().try_into().unwrap_or(i64::MAX) };
        Ok(BinaryQF::new(int(&self.y), -int(&(qi(2) * &self.x)), -int(&self.z)))
    }

    /// Inverse of [`TernaryVector::to_form`]: `X = T w`.
    pub fn from_form(f: &BinaryQF) -> Self {
        TernaryVector { x: q(-f.a, 2), y: qi(f.b), z: qi(-f.c) }
    }

    pub fn apply(&self, h: &QMatrix) -> Self {
        let c = self.coords();
        let out: Vec<Q> = (0..3).map(|i| (0..3).fold(Q::zero(), |s, j| s + &h[i][j] * &c[j])).collect();
        TernaryVector::from_coords(&out)
    }
}

/// `ξ_D`: `[0 1; D/4 0]` for `D ≡ 0 (4)`, `[1/2 1; (D-1)/4 -1/2]` for `D ≡ 1 (4)`.
pub fn xi(d: i64) -> Result<TernaryVector> {
    check_discriminant(d)?;
    Ok(if d.rem_euclid(4) == 0 {
        TernaryVector::new(qi(0), qi(1), q(d, 4))
    } else {
        TernaryVector::new(q(1, 2), qi(1), q(d - 1, 4))
    })
}

/// `T_D = ξ_D w⁻¹`, the Gram matrix of `(X + ωY)(X + ω̄Y)`.
pub fn t_matrix(d: i64) -> Result<Mat2Q> {
    let x = xi(d)?;
    // [x y; z -x] · [0 -1; 1 0] = [y -x; -x -z]
    Ok([[x.y.clone(), -x.x.clone()], [-x.x.clone(), -x.z.clone()]])
}

/// Trace and norm of `ω`: `√D/2` or `(√D - 1)/2`.
pub fn omega_trace_norm(d: i64) -> (i64, Q) {
    if d.rem_euclid(4) == 0 {
        (0, q(-d, 4))
    } else {
        (-1, q(1 - d, 4))
    }
}

/// An element `u + vω` of `E = ℚ(√D)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadElement {
    pub d: i64,
    pub u: Q,
    pub v: Q,
}

impl QuadElement {
    pub fn new(d: i64, u: Q, v: Q) -> Self {
        QuadElement { d, u, v }
    }

    pub fn norm(&self) -> Q {
        let (t, n) = omega_trace_norm(self.d);
        &self.u * &self.u + qi(t) * &self.u * &self.v + n * &self.v * &self.v
    }

    pub fn conj(&self) -> Self {
        let (t, _) = omega_trace_norm(self.d);
        // ω̄ = t - ω
        QuadElement { d: self.d, u: &self.u + qi(t) * &self.v, v: -self.v.clone() }
    }
}

/// `ι(τ)` defined by `[τ, τω] = [1, ω] ᵗι(τ)`.
pub fn iota(tau: &QuadElement) -> Result<Mat2Q> {
    if tau.u.is_zero() && tau.v.is_zero() {
        return Err(Error::Invalid("ι needs τ ≠ 0".into()));
    }
    let (t, n) = omega_trace_norm(tau.d);
    // τω = -v·nr(ω) + (u + v·tr(ω)) ω
    Ok([[tau.u.clone(), tau.v.clone()], [-(&tau.v * n), &tau.u + qi(t) * &tau.v]])
}

/// Matrix product of 2×2 rational matrices.
pub fn mat2_mul(a: &Mat2Q, b: &Mat2Q) -> Mat2Q {
    let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

pub fn mat2_transpose(a: &Mat2Q) -> Mat2Q {
    [[a[0][0].clone(), a[1][0].clone()], [a[0][1].clone(), a[1][1].clone()]]
}

pub fn mat2_det(a: &Mat2Q) -> Q {
    &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0]
}

/// Order of `E_p(ξ_D)`: 2 when `p` ramifies in `ℚ(√D)`, 1 otherwise.
pub fn e_p_order(d: i64, p: u64) -> Result<u32> {
    check_discriminant(d)?;
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    Ok(if kronecker(d, p) == 0 { 2 } else { 1 })
}

/// A point of the tube domain `𝒟`, `𝔷 = [z₂ z₁; z₃ -z₂]` stored as `(z₁, z₂, z₃)`.
pub type DomainPoint = [Complex64; 3];

fn q1_c(z: &DomainPoint) -> Complex64 {
    z[0] * z[2] * 2.0 + z[1] * z[1] * 2.0
}

/// True when `(Im z₁)(Im z₃) + (Im z₂)² < 0` and `Im z₁ > 0`.
pub fn in_domain(z: &DomainPoint) -> bool {
    z[0].im * z[2].im + z[1].im * z[1].im < 0.0 && z[0].im > 0.0
}

fn check_siegel(z: &[[Complex64; 2]; 2]) -> Result<()> {
    let (y1, y2, y3) = (z[0][0].im, z[0][1].im, z[1][1].im);
    if (z[0][1] - z[1][0]).norm() > 1e-12 * (1.0 + z[0][1].norm()) {
        return Err(Error::Invalid("Z must be symmetric".into()));
    }
    if !(y1 > 0.0 && y1 * y3 - y2 * y2 > 0.0) {
        return Err(Error::Invalid("Im Z is not positive definite".into()));
    }
    Ok(())
}

/// `j_𝒟(Z) = (z₁, -z₂, -z₃)` for `Z = [z₁ z₂; z₂ z₃] ∈ 𝔥₂`.
pub fn j_domain(z: &[[Complex64; 2]; 2]) -> Result<DomainPoint> {
    check_siegel(z)?;
    Ok([z[0][0], -z[0][1], -z[1][1]])
}

/// Base point `𝔷₀ = j_𝒟(i·1₂)`.
pub fn base_point() -> DomainPoint {
    let i = Complex64::new(0.0, 1.0);
    [i, Complex64::new(0.0, 0.0), -i]
}

/// Action of a real 5×5 matrix `h ∈ SO(Q)` on `𝒟`: returns `(J(h, 𝔷), h⟨𝔷⟩)`
/// from `h (-Q₁[𝔷]/2, 𝔷, 1) = J(h, 𝔷) (-Q₁[h⟨𝔷⟩]/2, h⟨𝔷⟩, 1)`.
pub fn factor_j(h: &[[f64; 5]; 5], z: &DomainPoint) -> Result<(Complex64, DomainPoint)> {
    if !in_domain(z) {
        return Err(Error::Invalid("point is not in the domain".into()));
    }
    let v = [-q1_c(z) / 2.0, z[0], z[1], z[2], Complex64::new(1.0, 0.0)];
    let w: Vec<Complex64> = h.iter().map(|r| r.iter().zip(&v).map(|(a, b)| b * *a).sum()).collect();
    let j = w[4];
    if j.norm() == 0.0 {
        return Err(Error::Invalid("degenerate factor of automorphy".into()));
    }
    Ok((j, [w[1] / j, w[2] / j, w[3] / j]))
}

/// Floating copy of a rational matrix.
pub fn to_f64_5(m: &QMatrix) -> [[f64; 5]; 5] {
    let mut out = [[0.0; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            out[i][j] = crate::arith::q_to_f64(&m[i][j]);
        }
    }
    out
}

/// `g.Z = (AZ + B)(CZ + D)⁻¹` together with `det(CZ + D)`.
pub fn siegel_action(g: &[[f64; 4]; 4], z: &[[Complex64; 2]; 2]) -> Result<([[Complex64; 2]; 2], Complex64)> {
    check_siegel(z)?;
    let blk = |r: usize, c: usize| [[g[r][c], g[r][c + 1]], [g[r + 1][c], g[r + 1][c + 1]]];
    let (a, b, c, d) = (blk(0, 0), blk(0, 2), blk(2, 0), blk(2, 2));
    let lin = |m: [[f64; 2]; 2], n: [[f64; 2]; 2]| {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = m[i][0] * z[0][j] + m[i][1] * z[1][j] + n[i][j];
            }
        }
        out
    };
    let num = lin(a, b);
    let den = lin(c, d);
    let det = den[0][0] * den[1][1] - den[0][1] * den[1][0];
    if det.norm() == 0.0 {
        return Err(Error::Invalid("CZ + D is singular".into()));
    }
    let inv = [[den[1][1] / det, -den[0][1] / det], [-den[1][0] / det, den[0][0] / det]];
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = num[i][0] * inv[0][j] + num[i][1] * inv[1][j];
        }
    }
    Ok((out, det))
}

/// Ratio of the pulled-back invariant density of `𝒟` to that of `𝔥₂` at `Z`:
/// `|Q₁(Im j(Z))|⁻³ |det dj|² / (det Im Z)⁻³`, with `det dj` obtained by
/// central differences.
pub fn measure_ratio(z: &[[Complex64; 2]; 2]) -> Result<f64> {
    let p = j_domain(z)?;
    let h = 1e-6;
    let mut jac = [[Complex64::new(0.0, 0.0); 3]; 3];
    let idx = [(0usize, 0usize), (0, 1), (1, 1)];
    for (k, &(r, c)) in idx.iter().enumerate() {
        let mut zp = *z;
        let mut zm = *z;
        zp[r][c] += h;
        zm[r][c] -= h;
        if r != c {
            zp[c][r] += h;
            zm[c][r] -= h;
        }
        let fp = j_domain(&zp)?;
        let fm = j_domain(&zm)?;
        for i in 0..3 {
            jac[i][k] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    let det = jac[0][0] * (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1])
        - jac[0][1] * (jac[1][0] * jac[2][2] - jac[1][2] * jac[2][0])
        + jac[0][2] * (jac[1][0] * jac[2][1] - jac[1][1] * jac[2][0]);
    let im = [p[0].im, p[1].im, p[2].im];
    let q1_im = 2.0 * im[0] * im[2] + 2.0 * im[1] * im[1];
    let det_y = z[0][0].im * z[1][1].im - z[0][1].im * z[0][1].im;
    Ok(q1_im.abs().powi(-3) * det.norm_sqr() / det_y.powi(-3))
}

/// One `Γ_{Q₁}`-orbit of primitive vectors of norm `D/2`.
#[derive(Clone, Debug)]
pub struct VectorOrbit {
    /// Classes of `Cl_D` met by the orbit: a class and its conjugate.
    pub classes: Vec<usize>,
    /// The vector matching the reduced representative of the first class.
    pub representative: TernaryVector,
}

/// Result of the enumeration behind the orbit bijection.
#[derive(Clone, Debug)]
pub struct OrbitBijection {
    pub d: i64,
    pub box_size: i64,
    pub vectors_found: usize,
    pub orbits: Vec<VectorOrbit>,
}

/// Enumerates primitive `X ∈ 𝓛₁*` with `Q₁(X) = D/2` in a box, sends each
/// to the positive form `±Xw⁻¹`, and groups the classes reached into orbits
/// of `Γ_{Q₁} = GL₂(ℤ)/±1 ⋉ {1, -1}`. Those orbits are the classes modulo
/// conjugation. The box starts at `|D|` and doubles while a class is missed.
pub fn orbit_bijection(g: &ClassGroup) -> Result<OrbitBijection> {
    let d = g.d;
    let mut bound = -d;
    let parity = d.rem_euclid(2);
    loop {
        let mut hit = vec![false; g.h()];
        let mut found = 0usize;
        for y in -bound..=bound {
            if y == 0 {
                continue;
            }
            let mut a = -bound;
            if a.rem_euclid(2) != parity {
                a += 1;
            }
            while a <= bound {
                let num = d - a * a;
                if num % (4 * y) == 0 {
                    let z = num / (4 * y);
                    if z.abs() <= bound && a.gcd(&y).gcd(&z) == 1 {
                        found += 1;
                        let v = TernaryVector::new(q(a, 2), qi(y), qi(z));
                        let mut f = v.to_form()?;
                        if f.b < 0 {
                            f = BinaryQF::new(-f.b, -f.a, -f.c);
                        }
                        hit[g.class_of(&f)?] = true;
                    }
                }
                a += 2;
            }
        }
        if hit.iter().all(|&h| h) {
            let mut seen = vec![false; g.h()];
            let mut orbits = Vec::new();
            for c in 0..g.h() {
                if seen[c] {
                    continue;
                }
                let mut classes = vec![c];
                seen[c] = true;
                let ci = g.inverse[c];
                if !seen[ci] {
                    seen[ci] = true;
                    classes.push(ci);
                }
                orbits.push(VectorOrbit { classes, representative: TernaryVector::from_form(&g.forms[c]) });
            }
            return Ok(OrbitBijection { d, box_size: bound, vectors_found: found, orbits });
        }
        if bound > 64 * -d {
            return Err(Error::Invalid(format!("box {bound} too small to reach every class of D = {d}")));
        }
        bound *= 2;
    }
}

/// Stabilizer orders `e_j` and total volume `μ_D = Σ 1/e_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerCounts {
    /// Classes in each Galois orbit, self-conjugate orbits first.
    pub orbits: Vec<Vec<usize>>,
    pub e: Vec<i64>,
    pub mu: Q,
}

/// `e_j = w_D` on self-conjugate classes and `w_D/2` on conjugate pairs,
/// one entry per Galois orbit of classes.
pub fn stabilizer_counts(g: &ClassGroup) -> StabilizerCounts {
    let mut selfconj = Vec::new();
    let mut pairs = Vec::new();
    for c in 0..g.h() {
        let ci = g.inverse[c];
        if ci == c {
            selfconj.push(vec![c]);
        } else if c < ci {
            pairs.push(vec![c, ci]);
        }
    }
    let mut orbits = selfconj;
    let n_self = orbits.len();
    orbits.extend(pairs);
    let e: Vec<i64> = (0..orbits.len()).map(|i| if i < n_self { g.w } else { g.w / 2 }).collect();
    let mu = e.iter().fold(Q::zero(), |acc, x| acc + q(1, *x));
    StabilizerCounts { orbits, e, mu }
}

/// `⟨f_χ, f_η⟩ = Σ_j f_χ(u_j) conj(f_η(u_j)) / e_j` over Galois orbits of
/// classes, with `f_χ(u) = ½(χ(u) + χ(ū))`.
pub fn f_chi_inner(g: &ClassGroup, chi: usize, eta: usize) -> Result<Q> {
    let n = g.characters.len();
    if chi >= n || eta >= n {
        return Err(Error::Invalid(format!("character index out of range for D = {}", g.d)));
    }
    let (a, b) = (&g.characters[chi], &g.characters[eta]);
    if a.m != b.m {
        return Err(Error::Invalid("characters of different class groups".into()));
    }
    let m = a.m as usize;
    // Each orbit contributes ¼ Σ ζ^k over four exponents, weighted by 1/e_j:
    // 1/(4w) on self-conjugate classes and 2/(4w) on pairs.
    let sc = stabilizer_counts(g);
    let mut hist = vec![0i64; m];
    for (orbit, e) in sc.orbits.iter().zip(&sc.e) {
        let c = orbit[0];
        let weight = if *e == g.w { 1 } else { 2 };
        for x in [a.values[c], a.values[g.inverse[c]]] {
            for y in [b.values[c], b.values[g.inverse[c]]] {
                hist[(x as usize + m - y as usize) % m] += weight;
            }
        }
    }
    let v = reduce_int(&hist, m as u64);
    let num = int_as_rational(&v).ok_or_else(|| Error::Invalid("inner product is not rational".into()))?;
    Ok(q(num, 4 * g.w))
}

/// `‖f_χ‖² = (h_D / 2w_D)(1 + δ(χ² = 1))`, the closed form.
pub fn f_chi_norm2(g: &ClassGroup, chi: usize) -> Q {
    let sq = g.characters[chi].is_real();
    Q::new((g.h() as i64).into(), (2 * g.w).into()) * qi(if sq { 2 } else { 1 })
}

/// True when `ss(A)` lies in `SO(Q₁)`.
pub fn in_so_ternary(h: &QMatrix) -> bool {
    let g1 = ternary_gram();
    let lhs = mat_mul(&mat_mul(&transpose(h), &g1), h);
    lhs == g1 && det3(h).is_one()
}

fn det3(m: &QMatrix) -> Q {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// True when `ᵗh Q h = Q`.
pub fn preserves_quinary(h: &QMatrix) -> bool {
    let g = quinary_gram();
    mat_mul(&mat_mul(&transpose(h), &g), h) == g
}

/// True when every entry is an integer.
pub fn is_integral(m: &QMatrix) -> bool {
    m.iter().all(|r| r.iter().all(|c| c.is_integer()))
}

/// True when `h` maps `𝓛* = ℤ ⊕ ℤ ⊕ ½ℤ ⊕ ℤ ⊕ ℤ` into itself.
pub fn preserves_dual(h: &QMatrix) -> bool {
    // Columns are images of the generators e₁, e₀, v/2, e₀', e₁'.
    (0..5).all(|j| {
        let s = if j == 2 { q(1, 2) } else { qi(1) };
        (0..5).all(|i| {
            let v = &h[i][j] * &s;
            if i == 2 {
                (qi(2) * v).is_integer()
            } else {
                v.is_integer()
            }
        })
    })
}

/// Absolute value used in test diagnostics.
pub fn q_abs(x: &Q) -> Q {
    x.abs()
}
