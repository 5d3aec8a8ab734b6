use std::f64::consts::PI;

use equidist::arith::{harmonic, q, qi, Q};
use equidist::bessel::*;
use equidist::plancherel::HeckeSymbol;
use equidist::quadform::ClassGroup;
use equidist::satake::lvalues::EULER_GAMMA;
use equidist::siegel::igusa::{cusp_basis, Generators};
use equidist::siegel::{FourierExpansion, HalfIntMatrix};
use num_traits::{One, Zero};
use proptest::prelude::*;
use statrs::function::gamma::{digamma as statrs_digamma, ln_gamma};

mod common;
use common::{jacobi_10_1, maass_lift};

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

/// `c_l` from floating gamma values.
fn c_l_float(l: f64) -> f64 {
    (0.5 * PI.ln() - 4f64.ln() + (3.0 - 2.0 * l) * (4.0 * PI).ln() + ln_gamma(l - 1.5) + ln_gamma(l - 2.0)).exp()
}

#[test]
fn chi10_periods_match_the_jacobi_oracle() {
    // A primitive T of fundamental discriminant D has A(T) = c(|D|) for a
    // Maass lift, so R(χ10, D, χ) = h_D c(|D|) δ(χ = 1).
    let bound = 90;
    let gens = Generators::get(bound).unwrap();
    let jac = jacobi_10_1(bound);
    let norm = maass_lift(10, &jac, &HalfIntMatrix::new(1, 1, 1));
    for d in [-3i64, -4, -7, -20, -23, -47, -84] {
        let g = ClassGroup::new(d).unwrap();
        let cd = qi(jac[&(-d)]) / &norm;
        for chi in 0..g.characters.len() {
            let p = period_datum_exact(&gens.chi10, &g, chi).unwrap();
            let expect = if g.characters[chi].is_trivial() { cd.clone() * qi(g.h() as i64) } else { Q::zero() };
            assert_eq!(p.exact.unwrap().as_rational(), Some(expect.clone()), "D = {d}, chi = {chi}");
            assert_eq!(p.abs2_exact.unwrap(), &expect * &expect);
        }
    }
    // Frozen: A(χ10, [1,1,6]) drives D = -23.
    let g = ClassGroup::new(-23).unwrap();
    assert_eq!(class_coefficients(&gens.chi10, &g).unwrap().len(), 3);
}

#[test]
fn parseval_on_rational_cusp_forms() {
    let gens = Generators::get(50).unwrap();
    let basis = cusp_basis(20, 50).unwrap();
    for d in [-23i64, -47] {
        let g = ClassGroup::new(d).unwrap();
        let (lhs, rhs) = parseval(&gens.chi10, &g).unwrap();
        assert_eq!(lhs, rhs);
        for (_, f) in &basis {
            let (lhs, rhs) = parseval(f, &g).unwrap();
            assert_eq!(lhs, rhs, "D = {d}");
        }
        let mix = FourierExpansion::linear_combination(&[(q(3, 7), &basis[0].1), (qi(-2), &basis[2].1)]);
        let (lhs, rhs) = parseval(&mix, &g).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs > Q::zero());
    }
}

#[test]
fn periods_need_enough_coefficients() {
    let gens = Generators::get(10).unwrap();
    let g = ClassGroup::new(-23).unwrap();
    assert!(period_exact(&gens.chi10, &g, 0).is_err());
    assert!(period_exact(&gens.chi10, &ClassGroup::new(-7).unwrap(), 0).is_ok());
}

#[test]
fn sk_lifts_have_vanishing_twisted_periods() {
    let g = ClassGroup::new(-23).unwrap();
    let opts = EnsembleOptions { primes: vec![2], ..Default::default() };
    let ens = ensemble_table(20, &g, &[0, 1, 2], &opts).unwrap();
    let mut sk_seen = 0;
    for r in &ens.rows {
        if r.is_sk && r.chi != 0 {
            let scale = ens.rows.iter().find(|s| s.form_id == r.form_id && s.chi == 0).unwrap().r.norm();
            assert!(scale > 1.0);
            assert!(r.r.norm() < 1e-12 * scale, "{} at chi {}", r.form_id, r.chi);
            sk_seen += 1;
        }
    }
    assert_eq!(sk_seen, 4);
}

#[test]
fn ensemble_weight_10() {
    let g = ClassGroup::new(-23).unwrap();
    let ens = ensemble_table(10, &g, &[0], &EnsembleOptions::default()).unwrap();
    assert_eq!(ens.rows.len(), 1);
    let r = &ens.rows[0];
    assert!(r.is_sk);
    assert!(r.flags.iter().any(|f| f == PROXY_FLAG));
    assert!(r.omega_times_norm2 > 0.0);
    assert!(ens.shortfalls.is_empty());
    assert_eq!(ens.aggregate_general, 0.0);
    assert!(rel_close(ens.aggregate_sk, r.contribution, 1e-15));
}

#[test]
fn ensemble_weight_20() {
    let g = ClassGroup::new(-23).unwrap();
    let ens = ensemble_table(20, &g, &[0], &EnsembleOptions::default()).unwrap();
    assert_eq!(ens.rows.len(), 3);
    assert_eq!(ens.rows.iter().filter(|r| r.is_sk).count(), 2);
    let total: f64 = ens.rows.iter().map(|r| r.contribution).sum();
    assert!(rel_close(ens.aggregate_sk + ens.aggregate_general, total, 1e-12));
    let csv = ens.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "l,form_id,is_sk,D,chi_id,R_re,R_im,omega_times_norm2,lambda_2,flags");
    assert_eq!(lines.count(), 3);
    // Deterministic despite the parallel map.
    assert_eq!(ensemble_table(20, &g, &[0], &EnsembleOptions::default()).unwrap().to_csv(), csv);
}

#[test]
fn ensemble_rejects_bad_characters() {
    let g = ClassGroup::new(-23).unwrap();
    assert!(ensemble_table(10, &g, &[3], &EnsembleOptions::default()).is_err());
}

#[test]
fn ensemble_omega_matches_formula() {
    let g = ClassGroup::new(-47).unwrap();
    let ens = ensemble_table(20, &g, &[1], &EnsembleOptions::default()).unwrap();
    let c = c_ld(20, &g).unwrap().to_f64();
    for r in &ens.rows {
        let expect = c * d_chi(&g, 1) as f64 * r.r_inverse.norm_sqr();
        assert!(rel_close(r.omega_times_norm2, expect, 1e-12));
    }
}

#[test]
fn digamma_values() {
    assert_eq!(digamma_rational_part(9), q(761, 280));
    assert_eq!(digamma_rational_part(1), Q::zero());
    assert!((digamma(9) - (-EULER_GAMMA + 761.0 / 280.0)).abs() < 1e-15);
    for n in [1u64, 2, 5, 19, 99, 1000] {
        assert!((digamma(n) - statrs_digamma(n as f64)).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn euler_gamma_string_matches_constant() {
    assert_eq!(EULER_GAMMA_50.parse::<f64>().unwrap(), EULER_GAMMA);
    assert_eq!(EULER_GAMMA_50.len(), 52);
}

#[test]
fn main_term_slope_in_log_weight() {
    // For trivial χ, P grows like L(1, η_D) log l, and L(1, η_{-4}) = π/4.
    let g = ClassGroup::new(-4).unwrap();
    let p3 = main_term(1000, &g, 0).unwrap().value;
    let p4 = main_term(10000, &g, 0).unwrap().value;
    let slope = (p4 - p3) / 10f64.ln();
    assert!((slope - PI / 4.0).abs() < 1e-3, "{slope}");
}

#[test]
fn main_term_components() {
    let g = ClassGroup::new(-23).unwrap();
    let m = main_term(10, &g, 0).unwrap();
    let get = |k: &str| m.components.iter().find(|(n, _)| n == k).unwrap().1;
    let expect = get("L(1,eta)") * (get("psi(l-1)") - (4.0 * PI * PI).ln()) + get("L'(1,eta)");
    assert!((m.value - expect).abs() < 1e-14);
    assert!((get("L(1,eta)") - 2.0 * PI * 3.0 / (2.0 * 23f64.sqrt())).abs() < 1e-14);
    let nt = main_term(10, &g, 1).unwrap();
    assert!(nt.value > 0.0);
    // The non-trivial main term does not depend on the weight.
    assert_eq!(main_term(30, &g, 1).unwrap().value, nt.value);
    assert!(main_term(9, &g, 0).is_err());
    assert!(main_term(10, &g, 5).is_err());
}

#[test]
fn weighted_main_term_is_linear_in_the_symbol() {
    let g = ClassGroup::new(-23).unwrap();
    for chi in [0usize, 1] {
        let a = main_term_weighted(10, &g, chi, &[(3, HeckeSymbol::spin_trace())], 64).unwrap();
        let b = main_term_weighted(10, &g, chi, &[(3, HeckeSymbol::spin_trace().scale(2.0))], 64).unwrap();
        assert!((b.value - 2.0 * a.value).abs() < 1e-10 * a.value.abs().max(1.0));
    }
    assert!(main_term_weighted(10, &g, 0, &[(23, HeckeSymbol::constant(1.0))], 64).is_err());
}

#[test]
fn symbolic_constants() {
    assert_eq!(c_l(4).unwrap().to_string(), "3/16384*pi^(-8/2)");
    for l in [4i64, 10, 20, 36] {
        assert!(rel_close(c_l(l).unwrap().to_f64(), c_l_float(l as f64), 1e-12), "l = {l}");
    }
    assert!(c_l(5).is_err() && c_l(2).is_err());
    let g = ClassGroup::new(-23).unwrap();
    let expect = c_l_float(10.0) * (23.0f64 / 4.0).powf(1.5 - 10.0) * 4.0 / (2.0 * 3.0);
    assert!(rel_close(c_ld(10, &g).unwrap().to_f64(), expect, 1e-12));
    assert_eq!(d_star(&qi(3)), qi(8));
    assert_eq!(d_star(&q(1, 2)), q(-3, 4));
}

#[test]
fn gamma_bold_is_rational_and_inverts() {
    assert_eq!(gamma_bold(4).unwrap(), q(64, 15));
    for l in (4..=80).step_by(2) {
        assert_eq!(gamma_bold(l).unwrap() * gamma_bold_reciprocal(l), Q::one());
    }
    assert!(gamma_bold(7).is_err());
}

#[test]
fn period_lemma_identity() {
    for d in [-3i64, -4, -23, -84, -163] {
        for l in [4i64, 6, 12, 40] {
            assert_eq!(period_lemma_lhs(l, d).unwrap(), period_lemma_rhs(l, d).unwrap());
        }
    }
}

#[test]
fn normalization_bridge_closes() {
    let r = normalization_bridge().unwrap();
    for c in &r.checks {
        assert!(c.ok, "{}: {}", c.name, c.detail);
    }
    assert!(r.all_ok());
    assert_eq!(r.corollary_constant, qi(32));
    assert_eq!(r.norm_ratio, qi(16));
    assert_eq!(r.measure_factor, q(1, 8));
    assert_eq!(r.cover_degree, 2);
    assert_eq!(r.theorem_factor, qi(2));
}

#[test]
fn lemma_ratio_is_universal() {
    let g = ClassGroup::new(-20).unwrap();
    let k = lemma_ratio(14, &g, 1).unwrap();
    assert!(rel_close(k.to_f64(), 1.0 / (2.0 * PI), 1e-14));
}

#[test]
fn omega_scaling_and_orientation() {
    let g = ClassGroup::new(-23).unwrap();
    let periods: Vec<PeriodDatum> = (0..3)
        .map(|chi| PeriodDatum {
            d: -23,
            chi,
            embedding: 0,
            r: num_complex::Complex64::new(chi as f64 + 1.0, 0.5),
            exact: None,
            abs2: (chi as f64 + 1.0).powi(2) + 0.25,
            abs2_exact: None,
        })
        .collect();
    let w1 = omega_weight(12, &g, 1, &periods, 1.0, Orientation::Inverse).unwrap();
    let w3 = omega_weight(12, &g, 1, &periods, 3.0, Orientation::Inverse).unwrap();
    assert!(rel_close(w1, 3.0 * w3, 1e-14));
    let direct = omega_weight(12, &g, 1, &periods, 1.0, Orientation::Direct).unwrap();
    let inv = g.char_conj(1);
    assert!(rel_close(w1 / direct, periods[inv].abs2 / periods[1].abs2, 1e-14));
    // Real characters see no difference.
    assert_eq!(
        omega_weight(12, &g, 0, &periods, 1.0, Orientation::Direct).unwrap(),
        omega_weight(12, &g, 0, &periods, 1.0, Orientation::Inverse).unwrap()
    );
    assert!(omega_weight(12, &g, 1, &periods, 0.0, Orientation::Inverse).is_err());
    assert!(omega_weight(12, &g, 1, &periods, -1.0, Orientation::Inverse).is_err());
    let exact = omega_times_norm2_exact(12, &g, 1, &q(5, 4)).unwrap();
    assert!(rel_close(exact.to_f64(), omega_times_norm2(12, &g, 1, 1.25).unwrap(), 1e-13));
}

#[test]
fn sk_weight_constant() {
    let inputs = SkInputs { central_twist: 0.7, edge: 1.3, petersson: 2.0 };
    let g23 = ClassGroup::new(-23).unwrap();
    let g4 = ClassGroup::new(-4).unwrap();
    assert_eq!(sk_omega(10, &g23, 1, Some(&inputs)).unwrap(), 0.0);
    assert!(sk_omega(10, &g23, 0, None).is_err());
    let a = sk_omega(10, &g23, 0, Some(&inputs)).unwrap();
    let b = sk_omega(10, &g4, 0, Some(&inputs)).unwrap();
    // Only h_D / w_D depends on D.
    assert!(rel_close(a / b, (3.0 / 2.0) / (1.0 / 4.0), 1e-13));
    let l = 10.0f64;
    let float = (2.0 * (48.0 * PI).ln() + 3f64.ln() - 2f64.ln() - ((l - 1.0) * (l - 2.0)).ln() + ln_gamma(2.0 * l - 3.0)
        - (2.0 * l - 3.0) * (4.0 * PI).ln())
    .exp();
    assert!(rel_close(sk_constant(10, &g23).unwrap().to_f64(), float, 1e-12));
    assert!(rel_close(a, float * 0.7 / (1.3 * 2.0), 1e-12));
}

proptest! {
    #[test]
    fn prop_symbolic_inverse(n in 1i64..500, d in 1i64..500, k in -6i64..6, r in 1u64..200) {
        let x = SymbolicReal::rational(q(n, d)).mul(&SymbolicReal { coeff: Q::one(), pi_half: k, rad: 1 }).mul(&SymbolicReal::sqrt_int(r));
        let one = x.mul(&x.inv());
        prop_assert_eq!(one.as_rational(), Some(Q::one()));
        let y = SymbolicReal::sqrt_int(r + 1).mul(&SymbolicReal::pi_pow(1));
        prop_assert!(rel_close(x.mul(&y).to_f64(), x.to_f64() * y.to_f64(), 1e-12));
    }

    #[test]
    fn prop_gamma_half(n in 1i64..120) {
        let v = SymbolicReal::gamma_half(n);
        prop_assert!(rel_close(v.ln_abs(), ln_gamma(n as f64 / 2.0), 1e-12) || ln_gamma(n as f64 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn prop_digamma_rational_part(n in 1u64..300) {
        prop_assert_eq!(digamma_rational_part(n), harmonic(n - 1));
        prop_assert!((digamma(n) - statrs_digamma(n as f64)).abs() < 1e-11);
    }

    #[test]
    fn prop_parseval_scaling(a in -20i64..20, b in 1i64..20) {
        let gens = Generators::get(30).unwrap();
        let g = ClassGroup::new(-23).unwrap();
        let f = gens.chi10.scale(&q(a, b));
        let (lhs, rhs) = parseval(&f, &g).unwrap();
        prop_assert_eq!(&lhs, &rhs);
        let (l0, _) = parseval(&gens.chi10, &g).unwrap();
        prop_assert_eq!(lhs, l0 * q(a * a, b * b));
    }
}
