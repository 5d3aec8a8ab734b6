//! `verify`: module invariants gathered into one pass/fail table.

use clap::ValueEnum;
use equidist::arith::{is_fundamental, q, qi, Q};
use equidist::bessel::{ensemble_table, normalization_bridge, parseval, EnsembleOptions};
use equidist::linalg::{identity, mat_mul};
use equidist::ortho5::{
    f_chi_inner, factor_j, j_domain, mat2_det, preserves_quinary, rho, siegel_action, stabilizer_counts, to_f64_5, Mat2Q,
    Similitude,
};
use equidist::plancherel::{lambda_measure, macdonald_mass, PlancherelGrid, DEFAULT_NODES};
use equidist::quadform::{reduced_forms, ClassGroup};
use equidist::satake::{eigenvalues_from_satake, satake_from_eigenvalues, spectral_points};
use equidist::siegel::eigenforms::{eigenforms, sk_shift, spin_bound};
use equidist::siegel::elliptic::modular_dim;
use equidist::siegel::igusa::{cusp_basis, monomials, siegel_modular_dim, Generators};
use equidist::Error;
use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Table;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Quadform,
    Siegel,
    Satake,
    Plancherel,
    Bessel,
    Ortho5,
}

struct Checks {
    suite: &'static str,
    table: Table,
}

impl Checks {
    fn record(&mut self, name: &str, outcome: Result<String, String>) {
        let (ok, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.table.push(vec![self.suite.into(), name.into(), ok.to_string(), detail]);
    }
}

fn lib<T>(r: Result<T, Error>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ensure(cond: bool, ok: impl Into<String>, fail: impl Into<String>) -> Result<String, String> {
    if cond {
        Ok(ok.into())
    } else {
        Err(fail.into())
    }
}

fn quadform(c: &mut Checks, max_disc: i64) {
    c.record("class group suite", (|| {
        let mut n = 0;
        for d in (1..max_disc).map(|k| -k).filter(|&d| is_fundamental(d)) {
            let g = lib(ClassGroup::new(d))?;
            if reduced_forms(d).len() != g.h() {
                return Err(format!("D = {d}: reduced-form count differs from the group order"));
            }
            lib(g.check_axioms()).map_err(|e| format!("D = {d}: {e}"))?;
            lib(g.check_orthogonality()).map_err(|e| format!("D = {d}: {e}"))?;
            lib(g.check_characters()).map_err(|e| format!("D = {d}: {e}"))?;
            n += 1;
        }
        Ok(format!("{n} discriminants above -{max_disc}"))
    })());
    c.record("h(-23)", (|| {
        let g = lib(ClassGroup::new(-23))?;
        ensure(g.h() == 3, "h = 3", format!("h = {}", g.h()))
    })());
}

fn siegel(c: &mut Checks) {
    c.record("cusp dimensions", (|| {
        for l in (0..=40).step_by(2) {
            let n = monomials(l, true).len();
            if n != siegel_modular_dim(l) - modular_dim(l) {
                return Err(format!("weight {l}"));
            }
        }
        ensure(monomials(10, true).len() == 1 && monomials(20, true).len() == 3, "l <= 40", "dim S_10 or S_20")
    })());
    c.record("Phi kills cusp forms", (|| {
        let basis = lib(cusp_basis(20, 30))?;
        ensure(basis.iter().all(|(_, f)| f.phi().iter().all(|x| x.is_zero())), "S_20 at bound 30", "nonzero Phi image")
    })());
    c.record("SK eigenvalues", (|| {
        for (l, lam2) in [(10i64, 240i64), (12, 2784)] {
            let fs = lib(eigenforms(l, &[2, 3], None))?;
            let f = fs.first().ok_or("empty eigenbasis")?;
            let src = f.sk.as_ref().ok_or(format!("weight {l} form is not a lift"))?;
            if f.lambda_rational(2) != Some(qi(lam2)) {
                return Err(format!("lambda(2) at weight {l}"));
            }
            for p in [2u64, 3] {
                let ap = src.form.alg().as_rational(src.form.a_p(p).unwrap()).ok_or("irrational a_p")?;
                if f.lambda_rational(p) != Some(ap + sk_shift(l, p)) {
                    return Err(format!("weight {l}, p = {p}"));
                }
            }
        }
        Ok("l in {10, 12}, p in {2, 3}".into())
    })());
}

fn satake(c: &mut Checks) {
    c.record("eigenvalue roundtrip", (|| {
        let fs = lib(eigenforms(20, &[2], None))?;
        for f in &fs {
            for pt in lib(spectral_points(f, 2))? {
                let (lam, lam1) = eigenvalues_from_satake(&pt, 20);
                let back = lib(satake_from_eigenvalues(lam, lam1, 20, 2))?;
                if !back.approx_eq(&pt, 1e-6) {
                    return Err(format!("{pt:?}"));
                }
            }
        }
        Ok(format!("{} forms of weight 20 at p = 2", fs.len()))
    })());
    c.record("SK spin factorization", (|| {
        let fs = lib(eigenforms(10, &[2, 3], Some(spin_bound(3))))?;
        for p in [2u64, 3] {
            if lib(fs[0].sk_spin_factorization(p))? != Some(true) {
                return Err(format!("p = {p}"));
            }
        }
        Ok("weight 10 at p in {2, 3}".into())
    })());
}

fn plancherel(c: &mut Checks) {
    c.record("Plancherel mass", (|| {
        for p in [3u64, 5, 7] {
            let g = lib(PlancherelGrid::new(p, DEFAULT_NODES))?;
            let fine = lib(PlancherelGrid::new(p, 2 * DEFAULT_NODES))?;
            let one = g.integrate(|_| 1.0).value;
            if (one - 1.0).abs() > 1e-6 || (g.raw_mass - macdonald_mass(p)).abs() > 1e-6 * macdonald_mass(p) {
                return Err(format!("p = {p}: mass {one}, raw {}", g.raw_mass));
            }
            if (g.raw_mass - fine.raw_mass).abs() > 1e-6 {
                return Err(format!("p = {p}: unstable under grid doubling"));
            }
        }
        Ok("p in {3, 5, 7}".into())
    })());
    c.record("Lambda sanity", (|| {
        let g = lib(ClassGroup::new(-4))?;
        let one = equidist::plancherel::HeckeSymbol::constant(1.0);
        let empty = lib(lambda_measure(&g, 0, &[], 0.0, DEFAULT_NODES))?.value;
        let l3 = lib(lambda_measure(&g, 0, &[(3, one.clone())], 0.0, DEFAULT_NODES))?.value;
        let l5 = lib(lambda_measure(&g, 0, &[(5, one.clone())], 0.0, DEFAULT_NODES))?.value;
        let l35 = lib(lambda_measure(&g, 0, &[(3, one.clone()), (5, one)], 0.0, DEFAULT_NODES))?.value;
        ensure(empty == 1.0 && l3 > 0.0 && (l35 - l3 * l5).abs() < 1e-6, format!("Lambda(3) = {l3:.6}"), "Lambda fails a sanity check")
    })());
}

fn bessel(c: &mut Checks) {
    c.record("normalization bridge", (|| {
        let r = lib(normalization_bridge())?;
        match r.checks.iter().find(|x| !x.ok) {
            None => Ok(format!("32 = 2 * 16 ({} steps)", r.checks.len())),
            Some(x) => Err(format!("{}: {}", x.name, x.detail)),
        }
    })());
    c.record("Parseval", (|| {
        let gens = lib(Generators::get(50))?;
        let basis = lib(cusp_basis(20, 50))?;
        for d in [-23i64, -47] {
            let g = lib(ClassGroup::new(d))?;
            for f in std::iter::once(&gens.chi10).chain(basis.iter().map(|(_, f)| f)) {
                let (lhs, rhs) = lib(parseval(f, &g))?;
                if lhs != rhs {
                    return Err(format!("D = {d}"));
                }
            }
        }
        Ok("D in {-23, -47}".into())
    })());
    c.record("weights nonnegative", (|| {
        let g = lib(ClassGroup::new(-23))?;
        let ens = lib(ensemble_table(20, &g, &[0, 1, 2], &EnsembleOptions::default()))?;
        ensure(ens.rows.iter().all(|r| r.omega_times_norm2 >= 0.0), format!("{} rows", ens.rows.len()), "negative weight")
    })());
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn random_levi(rng: &mut ChaCha8Rng, nu: Q) -> Similitude {
    loop {
        let a: Mat2Q = [[qi(rng.gen_range(-2..=2)), qi(rng.gen_range(-2..=2))], [qi(rng.gen_range(-2..=2)), qi(rng.gen_range(-2..=2))]];
        if !mat2_det(&a).is_zero() {
            return Similitude::levi(&a, nu).expect("invertible Levi block");
        }
    }
}

fn random_similitude(rng: &mut ChaCha8Rng, symplectic: bool) -> Similitude {
    let mut g = Similitude::new(identity(4)).expect("identity is symplectic");
    for _ in 0..3 {
        let h = match rng.gen_range(0..3) {
            0 => {
                let nu = if symplectic { qi(1) } else { [qi(1), qi(2), q(1, 3), qi(-1)][rng.gen_range(0..4)].clone() };
                random_levi(rng, nu)
            }
            1 => Similitude::unipotent(random_rational(rng), random_rational(rng), random_rational(rng)),
            _ => Similitude::involution(),
        };
        g = g.mul(&h);
    }
    g
}

fn ortho5(c: &mut Checks, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    c.record("rho homomorphism", (|| {
        for _ in 0..50 {
            let g = random_similitude(&mut rng, false);
            let h = random_similitude(&mut rng, false);
            if rho(&g.mul(&h)) != mat_mul(&rho(&g), &rho(&h)) || !preserves_quinary(&rho(&g)) {
                return Err(format!("seed {seed}"));
            }
        }
        Ok(format!("50 similitudes, seed {seed}"))
    })());
    c.record("factor of automorphy", (|| {
        let mut n = 0;
        let mut worst: f64 = 0.0;
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
        ensure(worst <= 1e-9, format!("max relative error {worst:.2e}"), format!("relative error {worst:.2e}"))
    })());
    c.record("stabilizer volumes", (|| {
        for d in (1..2000).map(|k| -k).filter(|&d| is_fundamental(d)) {
            let g = lib(ClassGroup::new(d))?;
            let sc = stabilizer_counts(&g);
            let ok_e = sc.e.iter().all(|&e| e == g.w || 2 * e == g.w);
            if !ok_e || sc.mu != Q::new((g.h() as i64).into(), g.w.into()) {
                return Err(format!("D = {d}"));
            }
        }
        Ok("fundamental D above -2000".into())
    })());
    c.record("f_chi Gram matrix", (|| {
        for d in [-23i64, -47, -84, -199, -251] {
            let g = lib(ClassGroup::new(d))?;
            for a in 0..g.characters.len() {
                for b in 0..g.characters.len() {
                    let delta = (a == b) as i64 + (g.char_conj(a) == b) as i64;
                    let expect = Q::new((g.h() as i64 * delta).into(), (2 * g.w).into());
                    if lib(f_chi_inner(&g, a, b))? != expect {
                        return Err(format!("D = {d}, ({a}, {b})"));
                    }
                }
            }
        }
        Ok("5 discriminants".into())
    })());
}

/// Runs the selected suites.
pub fn run(suite: Suite, seed: u64, max_disc: i64) -> Result<Table, Error> {
    if max_disc < 3 {
        return Err(Error::Invalid("max-disc must be at least 3".into()));
    }
    let mut table = Table::new(&["suite", "check", "ok", "detail"]);
    let all = suite == Suite::All;
    type Step<'a> = (Suite, &'static str, Box<dyn Fn(&mut Checks) + 'a>);
    let steps: Vec<Step> = vec![
        (Suite::Quadform, "quadform", Box::new(|c: &mut Checks| quadform(c, max_disc))),
        (Suite::Siegel, "siegel", Box::new(siegel)),
        (Suite::Satake, "satake", Box::new(satake)),
        (Suite::Plancherel, "plancherel", Box::new(plancherel)),
        (Suite::Bessel, "bessel", Box::new(bessel)),
        (Suite::Ortho5, "ortho5", Box::new(move |c: &mut Checks| ortho5(c, seed))),
    ];
    for (s, name, step) in steps {
        if all || s == suite {
            let mut c = Checks { suite: name, table: Table::new(&["suite", "check", "ok", "detail"]) };
            step(&mut c);
            table.rows.extend(c.table.rows);
        }
    }
    let failed: Vec<String> = table.rows.iter().filter(|r| r[2] != "true").map(|r| format!("{}/{}", r[0], r[1])).collect();
    if !failed.is_empty() {
        table.failure = Some(format!("failed: {}", failed.join(", ")));
    }
    Ok(table)
}
