//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Built with `harness = false` so the lines reach stdout under a plain
//! `cargo test`. Exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use equidist::arith::{is_fundamental, q, qi, Q};
use equidist::bessel::{c_l, c_ld, ensemble_table, gamma_bold, gamma_bold_reciprocal, main_term, normalization_bridge, parseval, EnsembleOptions, SymbolicReal};
use equidist::linalg::{identity, mat_mul, mat_vec};
use equidist::ortho5::{f_chi_inner, factor_j, j_domain, mat2_det, q_vec, rho, siegel_action, stabilizer_counts, to_f64_5, Mat2Q, Similitude};
use equidist::plancherel::{lambda_measure, HeckeSymbol, PlancherelGrid, DEFAULT_NODES};
use equidist::quadform::{reduced_forms, ClassGroup};
use equidist::satake::lvalues::l_eta_at_1;
use equidist::siegel::eigenforms::{eigenforms, elliptic_eigenforms, sk_shift, spin_bound};
use equidist::siegel::elliptic::modular_dim;
use equidist::siegel::igusa::{cusp_basis, monomials, siegel_modular_dim, Generators};
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn lib<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, fail: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(fail.into())
    }
}

/// Fundamental discriminants `-bound < D < 0`, in decreasing order.
fn suite(bound: i64) -> impl Iterator<Item = i64> {
    (3..bound).map(|k| -k).filter(|&d| is_fundamental(d))
}

fn class_groups() -> Outcome {
    let start = Instant::now();
    let mut n = 0;
    for d in suite(10_000) {
        let g = lib(ClassGroup::new(d))?;
        ensure(reduced_forms(d).len() == g.h(), format!("D = {d}: reduced-form count differs from group order"))?;
        lib(g.check_axioms()).map_err(|e| format!("D = {d}: {e}"))?;
        lib(g.check_orthogonality()).map_err(|e| format!("D = {d}: {e}"))?;
        n += 1;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), format!("took {t:.1?}"))?;
    Ok(format!("{n} discriminants in {t:.1?}"))
}

fn stabilizers() -> Outcome {
    let mut n = 0;
    for d in suite(10_000) {
        let g = lib(ClassGroup::new(d))?;
        let sc = stabilizer_counts(&g);
        ensure(sc.e.iter().all(|&e| e == g.w || 2 * e == g.w), format!("D = {d}: e = {:?}", sc.e))?;
        let direct = sc.e.iter().fold(Q::zero(), |acc, &e| acc + q(1, e));
        ensure(direct == q(g.h() as i64, g.w) && sc.mu == direct, format!("D = {d}: volume {direct}"))?;
        n += 1;
    }
    Ok(format!("{n} discriminants"))
}

fn f_chi_gram() -> Outcome {
    let (mut n, mut pairs) = (0, 0usize);
    for d in suite(10_000) {
        let g = lib(ClassGroup::new(d))?;
        if g.h() > 50 {
            continue;
        }
        let base = q(g.h() as i64, 2 * g.w);
        for a in 0..g.h() {
            for b in 0..g.h() {
                let galois_diagonal = b == a || b == g.char_conj(a);
                let expect = if galois_diagonal { &base * qi(1 + g.characters[a].is_real() as i64) } else { Q::zero() };
                ensure(lib(f_chi_inner(&g, a, b))? == expect, format!("D = {d}, ({a}, {b})"))?;
                pairs += 1;
            }
        }
        n += 1;
    }
    Ok(format!("{n} discriminants with h <= 50, {pairs} pairs"))
}

fn cusp_dimensions() -> Outcome {
    for l in (0..=40).step_by(2) {
        ensure(monomials(l, true).len() == siegel_modular_dim(l) - modular_dim(l), format!("weight {l}"))?;
    }
    ensure(monomials(10, true).len() == 1 && monomials(20, true).len() == 3, "dim S_10 or dim S_20")?;
    let bound = 12;
    let mut forms = 0;
    for l in (10..=40).step_by(2) {
        for (m, f) in lib(cusp_basis(l, bound))? {
            ensure(f.phi().iter().all(|x| x.is_zero()), format!("weight {l}, {m:?}: nonzero Phi image"))?;
            forms += 1;
        }
    }
    Ok(format!("even l <= 40, Phi kills {forms} cusp forms at bound {bound}"))
}

fn saito_kurokawa() -> Outcome {
    let start = Instant::now();
    for (l, lam2) in [(10i64, 240i64), (12, 2784)] {
        let fs = lib(eigenforms(l, &[2, 3, 5], None))?;
        ensure(fs.len() == 1, format!("weight {l}: {} eigenforms", fs.len()))?;
        let f = &fs[0];
        let src = f.sk.as_ref().ok_or(format!("weight {l}: not detected as a lift"))?;
        ensure(f.lambda_rational(2) == Some(qi(lam2)), format!("weight {l}: lambda(2) = {:?}", f.lambda_rational(2)))?;
        for p in [2u64, 3, 5] {
            let ap = src.form.alg().as_rational(src.form.a_p(p).unwrap()).ok_or("irrational a_p")?;
            ensure(f.lambda_rational(p) == Some(ap + sk_shift(l, p)), format!("weight {l}, p = {p}"))?;
        }
    }
    // The elliptic side alone, from the weight 18 newform.
    let f18 = lib(elliptic_eigenforms(18, &[2], 4))?;
    let a2 = f18[0].alg().as_rational(f18[0].a_p(2).unwrap()).ok_or("irrational a_f18(2)")?;
    ensure(a2 == qi(-528), format!("a_f18(2) = {a2}"))?;
    ensure(&a2 + sk_shift(10, 2) == qi(240), "a_f18(2) + 2^9 + 2^8 != 240")?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(600), format!("took {t:.1?}"))?;
    Ok(format!("l in {{10, 12}}, p in {{2, 3, 5}}, {t:.1?}"))
}

fn spin_factorization() -> Outcome {
    for l in [10i64, 12] {
        let fs = lib(eigenforms(l, &[2, 3], Some(spin_bound(3))))?;
        for p in [2u64, 3] {
            ensure(lib(fs[0].sk_spin_factorization(p))? == Some(true), format!("weight {l}, p = {p}"))?;
        }
    }
    Ok("l in {10, 12}, p in {2, 3}".into())
}

fn plancherel_mass() -> Outcome {
    let mut worst: f64 = 0.0;
    for p in [3u64, 5, 7] {
        let g = lib(PlancherelGrid::new(p, DEFAULT_NODES))?;
        let fine = lib(PlancherelGrid::new(p, 2 * DEFAULT_NODES))?;
        let (one, one_fine) = (g.integrate(|_| 1.0).value, fine.integrate(|_| 1.0).value);
        ensure((one - 1.0).abs() <= 1e-6, format!("p = {p}: mass {one}"))?;
        let drift = (g.raw_mass - fine.raw_mass).abs().max((one - one_fine).abs());
        ensure(drift <= 1e-6, format!("p = {p}: drift {drift:.2e} under grid doubling"))?;
        worst = worst.max((one - 1.0).abs()).max(drift);
    }
    Ok(format!("p in {{3, 5, 7}}, worst deviation {worst:.1e}"))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn random_similitude(rng: &mut ChaCha8Rng, symplectic: bool) -> Similitude {
    let mut g = Similitude::new(identity(4)).expect("identity is symplectic");
    for _ in 0..3 {
        let h = match rng.gen_range(0..3) {
            0 => {
                let nu = if symplectic { qi(1) } else { [qi(1), qi(2), q(1, 3), qi(-1)][rng.gen_range(0..4)].clone() };
                loop {
                    let a: Mat2Q = [[qi(rng.gen_range(-2..=2)), qi(rng.gen_range(-2..=2))], [qi(rng.gen_range(-2..=2)), qi(rng.gen_range(-2..=2))]];
                    if !mat2_det(&a).is_zero() {
                        break Similitude::levi(&a, nu.clone()).expect("invertible Levi block");
                    }
                }
            }
            1 => Similitude::unipotent(random_rational(rng), random_rational(rng), random_rational(rng)),
            _ => Similitude::involution(),
        };
        g = g.mul(&h);
    }
    g
}

fn exceptional_isomorphism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..50 {
        let (g, h) = (random_similitude(&mut rng, false), random_similitude(&mut rng, false));
        ensure(rho(&g.mul(&h)) == mat_mul(&rho(&g), &rho(&h)), format!("sample {i}: rho(gh) != rho(g) rho(h)"))?;
        let x: Vec<Q> = (0..5).map(|_| random_rational(&mut rng)).collect();
        ensure(q_vec(&mat_vec(&rho(&g), &x)) == q_vec(&x), format!("sample {i}: q(rho(g) x) != q(x)"))?;
    }
    let mut worst: f64 = 0.0;
    let mut n = 0;
    while n < 100 {
        let g = random_similitude(&mut rng, true);
        let (a, b, d) = (rng.gen_range(0.5..2.0), rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0));
        let x: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let y = [a * a, a * b, b * b + d * d];
        let z = [[Complex64::new(x[0], y[0]), Complex64::new(x[1], y[1])], [Complex64::new(x[1], y[1]), Complex64::new(x[2], y[2])]];
        let (_, det) = lib(siegel_action(&g.to_f64(), &z))?;
        if det.norm() < 0.2 || det.norm() > 50.0 {
            continue;
        }
        let (jv, _) = lib(factor_j(&to_f64_5(&rho(&g)), &lib(j_domain(&z))?))?;
        worst = worst.max((jv - det).norm() / det.norm());
        n += 1;
    }
    ensure(worst <= 1e-9, format!("J relative error {worst:.2e}"))?;
    Ok(format!("50 similitudes exact, 100 J samples with relative error {worst:.1e}"))
}

fn bridge() -> Outcome {
    let r = lib(normalization_bridge())?;
    if let Some(c) = r.checks.iter().find(|c| !c.ok) {
        return Err(format!("{}: {}", c.name, c.detail));
    }
    ensure(r.corollary_constant == qi(32) && r.corollary_constant == qi(2) * &r.norm_ratio, "32 != 2 * 16")?;
    for d in [-3i64, -4, -23, -47, -84, -163] {
        let g = lib(ClassGroup::new(d))?;
        for l in [4i64, 10, 20, 40] {
            // (|D|/4)^{3/2-l} = (|D|/4)^{1-l} · √|D| / 2
            let power = SymbolicReal::q_pow(&q(-d, 4), 1 - l).mul(&SymbolicReal::sqrt_int((-d) as u64)).scale(&q(1, 2));
            let expect = lib(c_l(l))?.mul(&power).scale(&q(4, g.w * g.h() as i64));
            ensure(lib(c_ld(l, &g))? == expect, format!("c_(l,D) at l = {l}, D = {d}"))?;
        }
    }
    for l in (4..=80).step_by(2) {
        ensure(gamma_bold_reciprocal(l) * lib(gamma_bold(l))? == Q::one(), format!("Gamma(l) at l = {l}"))?;
    }
    Ok(format!("{} bridge steps, c_(l,D) at 24 points, Gamma(l) for even 4 <= l <= 80", r.checks.len()))
}

fn parseval_and_weights() -> Outcome {
    let gens = lib(Generators::get(50))?;
    let basis = lib(cusp_basis(20, 50))?;
    let mut checked = 0;
    for d in [-23i64, -47] {
        let g = lib(ClassGroup::new(d))?;
        for f in std::iter::once(&gens.chi10).chain(basis.iter().map(|(_, f)| f)) {
            let (lhs, rhs) = lib(parseval(f, &g))?;
            ensure(lhs == rhs, format!("D = {d}: {lhs} != {rhs}"))?;
            checked += 1;
        }
    }
    let mut rows = 0;
    for d in [-23i64, -47] {
        let g = lib(ClassGroup::new(d))?;
        let chis: Vec<usize> = (0..g.h()).collect();
        for l in [10i64, 20] {
            let ens = lib(ensemble_table(l, &g, &chis, &EnsembleOptions::default()))?;
            ensure(ens.rows.iter().all(|r| r.omega_times_norm2 >= 0.0), format!("negative weight at l = {l}, D = {d}"))?;
            rows += ens.rows.len();
        }
    }
    Ok(format!("{checked} exact Parseval identities, {rows} nonnegative weights"))
}

fn main_term_slope() -> Outcome {
    let g = lib(ClassGroup::new(-4))?;
    let l1 = l_eta_at_1(&g).value;
    ensure((l1 - PI / 4.0).abs() <= 1e-8, format!("L(1, eta_-4) = {l1}"))?;
    let (p3, p4) = (lib(main_term(1000, &g, 0))?, lib(main_term(10_000, &g, 0))?);
    let from_components = p3.components.iter().find(|(k, _)| k == "L(1,eta)").map(|(_, v)| *v);
    ensure(from_components == Some(l1), "P(l,-4,1) uses a different L(1, eta)")?;
    let slope = (p4.value - p3.value) / 10f64.ln();
    ensure((slope - l1).abs() < 1e-3, format!("slope {slope}"))?;
    Ok(format!("L(1, eta_-4) - pi/4 = {:.1e}, slope - L(1, eta) = {:.1e}", l1 - PI / 4.0, slope - l1))
}

fn lambda_sanity() -> Outcome {
    let g = lib(ClassGroup::new(-4))?;
    let one = HeckeSymbol::constant(1.0);
    let lam = |s: &[(u64, HeckeSymbol)]| lib(lambda_measure(&g, 0, s, 0.0, DEFAULT_NODES)).map(|v| v.value);
    let empty = lam(&[])?;
    ensure(empty == 1.0, format!("Lambda of the empty set = {empty}"))?;
    let l3 = lam(&[(3, one.clone())])?;
    ensure(l3 > 0.0, format!("Lambda({{3}}) = {l3}"))?;
    let mut worst: f64 = 0.0;
    for (p1, p2) in [(3u64, 5u64), (3, 7), (5, 11)] {
        let spin = HeckeSymbol::spin_trace();
        let a = lam(&[(p1, one.clone())])?;
        let b = lam(&[(p2, spin.clone())])?;
        let ab = lam(&[(p1, one.clone()), (p2, spin)])?;
        worst = worst.max((ab - a * b).abs());
    }
    ensure(worst <= 1e-6, format!("multiplicativity defect {worst:.2e}"))?;
    Ok(format!("Lambda({{3}}) = {l3:.6}, multiplicativity defect {worst:.1e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("class-group suite", class_groups),
        ("stabilizer counts", stabilizers),
        ("f_chi Gram matrix", f_chi_gram),
        ("cusp form dimensions and Phi", cusp_dimensions),
        ("Saito-Kurokawa eigenvalues", saito_kurokawa),
        ("spin factorization", spin_factorization),
        ("Plancherel mass", plancherel_mass),
        ("exceptional isomorphism", exceptional_isomorphism),
        ("normalization bridge", bridge),
        ("Parseval and weights", parseval_and_weights),
        ("main term", main_term_slope),
        ("Lambda sanity", lambda_sanity),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
