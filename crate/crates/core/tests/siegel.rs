use equidist::arith::{q, qi, Q};
use equidist::linalg::{charpoly, mat_mul};
use equidist::siegel::eigenforms::{eigenforms, hecke_bound, elliptic_eigenforms, sk_shift, spin_bound};
use equidist::siegel::eisenstein::eisenstein;
use equidist::siegel::elliptic::{cusp_dim, modular_dim};
use equidist::siegel::hecke::{hecke_matrix, hecke_operator};
use equidist::siegel::igusa::{cusp_basis, monomials, siegel_modular_dim, Generators};
use equidist::siegel::{FourierExpansion, HalfIntMatrix};
use num_traits::Zero;
use proptest::prelude::*;

mod common;
use common::{jacobi_10_1, maass_lift};

#[test]
fn chi10_matches_maass_lift_oracle() {
    let bound = 60;
    let g = Generators::get(bound).unwrap();
    let jac = jacobi_10_1(bound);
    let norm = maass_lift(10, &jac, &HalfIntMatrix::new(1, 1, 1));
    for t in g.chi10.keys() {
        if t.det4() == 0 {
            continue;
        }
        assert_eq!(g.chi10.coeff(t).unwrap(), maass_lift(10, &jac, t) / &norm, "at {t}");
    }
    assert_eq!(g.chi10.coeff(&HalfIntMatrix::new(1, 0, 1)), Some(qi(-2)));
}

#[test]
fn eisenstein_values_and_product() {
    let e4 = eisenstein(4, 20).unwrap();
    assert_eq!(e4.coeff(&HalfIntMatrix::new(0, 0, 0)), Some(qi(1)));
    assert_eq!(e4.coeff(&HalfIntMatrix::new(1, 0, 0)), Some(qi(240)));
    assert_eq!(e4.coeff(&HalfIntMatrix::new(1, 1, 1)), e4.coeff(&HalfIntMatrix::new(1, -1, 1)));
    assert_eq!(e4.mul(&e4), eisenstein(8, 20).unwrap());
    assert!(eisenstein(5, 10).is_err());
    assert!(eisenstein(2, 10).is_err());
}

#[test]
fn cusp_dimensions_match_monomial_count() {
    for l in (0..=40).step_by(2) {
        let count = monomials(l, true).len();
        assert_eq!(count, siegel_modular_dim(l) - modular_dim(l), "weight {l}");
    }
    assert_eq!(monomials(10, true).len(), 1);
    assert_eq!(monomials(20, true).len(), 3);
    assert_eq!(monomials(8, true).len(), 0);
    for (_, f) in cusp_basis(20, 30).unwrap() {
        assert!(f.phi().iter().all(|x| x.is_zero()));
    }
}

#[test]
fn hecke_commutes_and_is_linear() {
    let basis: Vec<FourierExpansion> = cusp_basis(20, hecke_bound(20, &[2, 3]).unwrap()).unwrap().into_iter().map(|(_, f)| f).collect();
    let t2 = hecke_matrix(&basis, 2).unwrap();
    let t3 = hecke_matrix(&basis, 3).unwrap();
    assert_eq!(mat_mul(&t2, &t3), mat_mul(&t3, &t2));
    let c = q(-7, 3);
    assert_eq!(hecke_operator(&basis[0].scale(&c), 2).unwrap(), hecke_operator(&basis[0], 2).unwrap().scale(&c));
    // Real spectrum.
    let cp = charpoly(&t2);
    for z in cp.complex_roots() {
        assert!(z.im.abs() < 1e-8 * (1.0 + z.re.abs()));
    }
}

#[test]
fn hecke_reports_insufficient_truncation() {
    let g = Generators::get(3).unwrap();
    assert!(hecke_matrix(std::slice::from_ref(&g.chi10), 5).is_err());
}

#[test]
fn saito_kurokawa_relation_low_weights() {
    for (l, lam2) in [(10, 240), (12, 2784)] {
        let fs = eigenforms(l, &[2, 3, 5], None).unwrap();
        assert_eq!(fs.len(), 1);
        let f = &fs[0];
        assert!(f.is_sk());
        assert_eq!(f.lambda_rational(2), Some(qi(lam2)));
        let src = f.sk.as_ref().unwrap();
        for p in [2, 3, 5] {
            let ap = src.form.alg().as_rational(src.form.a_p(p).unwrap()).unwrap();
            assert_eq!(f.lambda_rational(p).unwrap(), ap + sk_shift(l, p));
        }
    }
    let f18 = elliptic_eigenforms(18, &[2], 4).unwrap();
    assert_eq!(f18[0].alg().as_rational(f18[0].a_p(2).unwrap()), Some(qi(-528)));
}

#[test]
fn weight_twenty_split() {
    let fs = eigenforms(20, &[2, 3], Some(spin_bound(2))).unwrap();
    let sk: usize = fs.iter().filter(|f| f.is_sk()).map(|f| f.degree()).sum();
    let general: usize = fs.iter().filter(|f| !f.is_sk()).map(|f| f.degree()).sum();
    assert_eq!((sk, general), (2, 1));
    assert_eq!(cusp_dim(38), 2);
    for f in &fs {
        if f.is_sk() {
            assert_eq!(f.sk_spin_factorization(2).unwrap(), Some(true));
        } else {
            // A general-type form violates the lift relation against every elliptic eigenform.
            let ell = elliptic_eigenforms(38, &[2, 3], 4).unwrap();
            let lam: Vec<_> = f.lambda_embedded(2).unwrap();
            for e in &ell {
                for z in e.alg().embeddings() {
                    let a = e.a_p(2).unwrap().eval_c(z);
                    let shift = equidist::arith::q_to_f64(&sk_shift(20, 2));
                    assert!((lam[0].re - a.re - shift).abs() > 1.0);
                }
            }
        }
    }
}

#[test]
fn elliptic_eigenforms_basic() {
    assert!(elliptic_eigenforms(10, &[2], 10).unwrap().is_empty());
    let f = &elliptic_eigenforms(12, &[2, 3], 20).unwrap()[0];
    let a = |n: usize| f.alg().as_rational(f.coefficient(n).unwrap()).unwrap();
    for m in 1..=20usize {
        for n in 1..=20usize {
            if m * n <= 20 && num_integer::gcd(m, n) == 1 {
                assert_eq!(a(m * n), a(m) * a(n));
            }
        }
    }
}

#[test]
fn multiplication_is_stable_under_enlargement() {
    let small = Generators::get(20).unwrap();
    let large = Generators::get(40).unwrap();
    let p1 = small.chi10.mul(&small.e4);
    let p2 = large.chi10.mul(&large.e4).truncate(20).unwrap();
    assert_eq!(p1, p2);
    // The Φ operator is a ring homomorphism.
    let e4e6 = small.e4.mul(&small.e6);
    let phi: Vec<Q> = (0..=20usize)
        .map(|n| (0..=n).map(|i| &small.e4.phi()[i] * &small.e6.phi()[n - i]).fold(Q::zero(), |a, b| a + b))
        .collect();
    assert_eq!(e4e6.phi(), phi);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn coefficients_are_gl2_invariant(b in 0i64..4, a in -4i64..=4, c in 0i64..4, x in -3i64..=3, y in -3i64..=3, z in -3i64..=3) {
        let g = Generators::get(30).unwrap();
        let t = HalfIntMatrix::new(b, a, c);
        prop_assume!(t.is_psd());
        // δ = [[1, x], [0, 1]] · [[1, 0], [y, 1]] · [[1, z], [0, 1]] has determinant one.
        let act = |t: HalfIntMatrix, (p, q, r, s): (i64, i64, i64, i64)| {
            HalfIntMatrix::new(
                t.b * p * p + t.a * p * q + t.c * q * q,
                2 * t.b * p * r + t.a * (p * s + q * r) + 2 * t.c * q * s,
                t.b * r * r + t.a * r * s + t.c * s * s,
            )
        };
        let moved = act(act(act(t, (1, x, 0, 1)), (1, 0, y, 1)), (1, z, 0, 1));
        if moved.det4() <= 30 && moved.b.max(moved.c) <= 30 || moved.canonical().c <= 30 {
            prop_assert_eq!(g.chi10.coeff(&moved), g.chi10.coeff(&t));
            prop_assert_eq!(g.e4.coeff(&moved), g.e4.coeff(&t));
        }
    }
}

#[test]
fn cache_roundtrip_is_bit_exact() {
    use equidist::siegel::cache::{from_json, to_json, CacheStatus, ExpansionCache};
    let e4 = eisenstein(4, 20).unwrap();
    let (kind, back) = from_json(&to_json("E4", &e4).unwrap()).unwrap();
    assert_eq!(kind, "E4");
    assert_eq!(back, e4);
    let chi = Generators::get(20).unwrap().chi10.clone();
    assert_eq!(from_json(&to_json("chi10", &chi).unwrap()).unwrap().1, chi);

    let dir = tempfile::tempdir().unwrap();
    let cache = ExpansionCache::new(dir.path());
    let (_, s1) = cache.load_or_build("E4", 4, 20, || eisenstein(4, 20)).unwrap();
    assert_eq!(s1, CacheStatus::Built);
    let (f, s2) = cache.load_or_build("E4", 4, 20, || panic!("cache hit expected")).unwrap();
    assert_eq!((f, s2), (e4.clone(), CacheStatus::Hit));
    // A schema bump invalidates the file.
    let path = cache.path("E4", 4, 20);
    let text = std::fs::read_to_string(&path).unwrap().replace("\"schema\":1", "\"schema\":0");
    std::fs::write(&path, text).unwrap();
    let (_, s3) = cache.load_or_build("E4", 4, 20, || eisenstein(4, 20)).unwrap();
    assert!(matches!(s3, CacheStatus::Rebuilt(_)));
    std::fs::write(&path, "{not json").unwrap();
    let (f, s4) = cache.load_or_build("E4", 4, 20, || eisenstein(4, 20)).unwrap();
    assert!(matches!(s4, CacheStatus::Rebuilt(_)));
    assert_eq!(f, e4);
}
