use std::f64::consts::PI;

use equidist::plancherel::{
    c_function, lambda_local, lambda_measure, lambda_s_derivative_at_0, macdonald_mass, raw_density, HeckeSymbol,
    PlancherelGrid, DEFAULT_NODES,
};
use equidist::quadform::ClassGroup;
use equidist::satake::weyl_orbit;
use num_complex::Complex64;
use proptest::prelude::*;

fn trivial(g: &ClassGroup) -> usize {
    (0..g.characters.len()).find(|&i| g.characters[i].is_trivial()).unwrap()
}

#[test]
fn total_mass_and_refinement() {
    for p in [3u64, 5, 7] {
        let g = PlancherelGrid::new(p, DEFAULT_NODES).unwrap();
        let one = g.integrate(|_| 1.0);
        assert!((one.value - 1.0).abs() < 1e-6);
        assert!(one.error < 1e-6);
        assert!((g.raw_mass - macdonald_mass(p)).abs() < 1e-12 * macdonald_mass(p));
        let fine = PlancherelGrid::new(p, 2 * DEFAULT_NODES).unwrap();
        assert!((fine.raw_mass - g.raw_mass).abs() < 1e-6);
        let tr2 = |pt: &_| HeckeSymbol::spin_trace().eval(pt).norm_sqr();
        assert!((g.integrate(tr2).value - fine.integrate(tr2).value).abs() < 1e-6);
    }
}

/// Inversion formula: the spin trace is `p^{-3/2}` times the transform of
/// the characteristic function of `K diag(1,1,p,p) K`, which has
/// `p³ + p² + p + 1` cosets and does not contain the identity.
#[test]
fn inversion_formula_for_the_spin_trace() {
    for p in [3u64, 5, 7, 11] {
        let g = PlancherelGrid::new(p, DEFAULT_NODES).unwrap();
        let tr = HeckeSymbol::spin_trace();
        assert!(g.integrate(|pt| tr.eval(pt).re).value.abs() < 1e-12);
        let pf = p as f64;
        let norm = g.integrate(|pt| tr.eval(pt).norm_sqr()).value;
        assert!((norm - (1.0 + 1.0 / pf + 1.0 / (pf * pf) + 1.0 / pf.powi(3))).abs() < 1e-12);
    }
}

#[test]
fn large_p_mass_tends_to_weyl_order() {
    let gap = |p: u64| (PlancherelGrid::new(p, 64).unwrap().raw_mass / 8.0 - 1.0).abs();
    assert!(gap(1_000_003) < gap(1009));
    assert!(gap(1_000_003) < 1e-5);
}

#[test]
fn c_function_pole_is_flagged() {
    assert!(c_function([Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)], 3).is_err());
    assert!(c_function([Complex64::new(0.3, 0.1), Complex64::new(0.1, 0.2)], 3).is_ok());
}

#[test]
fn mean_value_bracketing() {
    let g = PlancherelGrid::new(5, 128).unwrap();
    let f = |pt: &equidist::satake::SpectralPoint| 2.0 + HeckeSymbol::spin_trace().eval(pt).re / 4.0;
    let v = g.integrate(f).value;
    assert!(v > 1.0 && v < 3.0);
}

#[test]
fn coarse_grid_reports_aliasing() {
    let g = PlancherelGrid::new(5, 8).unwrap();
    let wild = HeckeSymbol::orbit_sum((7, 3));
    let e = g.integrate_checked(|pt| wild.eval(pt).re, 1e-6).unwrap_err();
    assert!(e.is_tolerance());
    assert!(PlancherelGrid::new(5, 7).is_err());
    assert!(PlancherelGrid::new(6, 64).is_err());
}

#[test]
fn lambda_basic_properties() {
    let d4 = ClassGroup::new(-4).unwrap();
    let t = trivial(&d4);
    let one = HeckeSymbol::constant(1.0);
    let empty = lambda_measure(&d4, t, &[], 0.0, DEFAULT_NODES).unwrap();
    assert_eq!(empty.value, 1.0);
    assert_eq!(empty.error, 0.0);

    let l3 = lambda_measure(&d4, t, &[(3, one.clone())], 0.0, DEFAULT_NODES).unwrap();
    assert!(l3.value > 0.0);
    let l3x = lambda_measure(&d4, t, &[(3, one.scale(2.5))], 0.0, DEFAULT_NODES).unwrap();
    assert!((l3x.value - 2.5 * l3.value).abs() < 1e-12 * l3.value);

    let l5 = lambda_measure(&d4, t, &[(5, one.clone())], 0.0, DEFAULT_NODES).unwrap();
    let l35 = lambda_measure(&d4, t, &[(3, one.clone()), (5, one.clone())], 0.0, DEFAULT_NODES).unwrap();
    assert!((l35.value - l3.value * l5.value).abs() < 1e-6 * l35.value);

    assert!(lambda_measure(&d4, t, &[(2, one.clone())], 0.0, 64).is_err());
    let d20 = ClassGroup::new(-20).unwrap();
    assert!(lambda_measure(&d20, trivial(&d20), &[(5, one.clone())], 0.0, 64).is_err());
    assert!(lambda_measure(&d4, t, &[(3, one.clone()), (3, one)], 0.0, 64).is_err());
}

#[test]
fn lambda_is_weyl_invariant_in_alpha() {
    let g = ClassGroup::new(-23).unwrap();
    let grid = PlancherelGrid::new(5, DEFAULT_NODES).unwrap();
    let alpha = HeckeSymbol::from_terms([((1, 0), Complex64::new(1.0, 0.0)), ((2, -1), Complex64::new(0.3, 0.0))]);
    assert!(!alpha.is_invariant());
    let sym = alpha.symmetrize();
    assert!(sym.is_invariant());
    for chi in 0..g.h() {
        let a = lambda_local(&grid, &g, chi, &alpha, 0.0).unwrap().value;
        let b = lambda_local(&grid, &g, chi, &sym, 0.0).unwrap().value;
        assert!((a - b).abs() <= 1e-8 * b.abs().max(1e-300), "chi={chi}: {a} vs {b}");
    }
}

#[test]
fn lambda_derivative_is_stable() {
    let g = ClassGroup::new(-4).unwrap();
    let t = trivial(&g);
    let s = [(3u64, HeckeSymbol::constant(1.0))];
    let d = lambda_s_derivative_at_0(&g, t, &s, 128).unwrap();
    assert!(d.error < 1e-5);
    // Independent plain central difference with a smaller step.
    let h = 2e-4;
    let plus = lambda_measure(&g, t, &s, h, 128).unwrap().value;
    let minus = lambda_measure(&g, t, &s, -h, 128).unwrap().value;
    assert!(((plus - minus) / (2.0 * h) - d.value).abs() < 1e-5);
}

fn angles() -> impl Strategy<Value = [f64; 2]> {
    (0.0f64..2.0 * PI, 0.0f64..2.0 * PI).prop_map(|(a, b)| [a, b])
}

proptest! {
    #[test]
    fn density_is_weyl_symmetric(phi in angles(), pi in 0usize..3) {
        let p = [3u64, 5, 7][pi];
        let lp = (p as f64).ln();
        let nu = [Complex64::new(0.0, phi[0] / lp), Complex64::new(0.0, phi[1] / lp)];
        let d0 = raw_density(phi, p);
        for w in weyl_orbit(nu) {
            let ang = [w[0].im * lp, w[1].im * lp];
            prop_assert!((raw_density(ang, p) - d0).abs() < 1e-10 * (1.0 + d0));
        }
        // |c(ν)|⁻² = 1 / (c(ν) c(-ν)) on the tempered locus.
        if let (Ok(c1), Ok(c2)) = (c_function(nu, p), c_function([-nu[0], -nu[1]], p)) {
            let prod = c1 * c2;
            prop_assert!(prod.im.abs() < 1e-8 * prod.norm());
            prop_assert!((1.0 / prod.re - d0).abs() < 1e-8 * (1.0 + d0));
            prop_assert!((c2 - c1.conj()).norm() < 1e-9 * c1.norm());
        }
    }

    #[test]
    fn symbol_algebra(m1 in -3i64..4, m2 in -3i64..4, phi in angles()) {
        let p = 5u64;
        let lp = (p as f64).ln();
        let pt = equidist::satake::SpectralPoint { p, nu: [Complex64::new(0.0, phi[0] / lp), Complex64::new(0.0, phi[1] / lp)] };
        let a = HeckeSymbol::orbit_sum((m1, m2));
        let b = HeckeSymbol::spin_trace();
        prop_assert!(a.is_invariant());
        prop_assert!(a.mul(&b).is_invariant());
        prop_assert!((a.mul(&b).eval(&pt) - a.eval(&pt) * b.eval(&pt)).norm() < 1e-9);
        prop_assert!((a.add(&b).eval(&pt) - a.eval(&pt) - b.eval(&pt)).norm() < 1e-9);
        prop_assert!(a.eval(&pt).im.abs() < 1e-9);
    }
}
