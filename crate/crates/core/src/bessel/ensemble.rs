//! Per-form rows and aggregate sums of the weighted ensemble.

use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{c_ld, d_chi, period_eigenform, Orientation, PeriodDatum};
use crate::error::{Error, Result};
use crate::plancherel::HeckeSymbol;
use crate::quadform::ClassGroup;
use crate::satake::local::spin_factor;
use crate::satake::lvalues::partial_euler;
use crate::satake::{spectral_points, SpectralPoint};
use crate::siegel::eigenforms::{eigenforms, spin_bound, Eigenform};

/// Flag attached to every row whose L-value is a partial Euler product.
pub const PROXY_FLAG: &str = "central-value proxy: not certified";

/// Configuration of [`ensemble_table`].
#[derive(Clone, Debug)]
pub struct EnsembleOptions {
    /// Primes at which Hecke eigenvalues are computed and reported.
    pub primes: Vec<u64>,
    /// Test symbols `α_p` for the primes of `S`.
    pub s_alphas: Vec<(u64, HeckeSymbol)>,
    /// Real point at which the spin Euler product stands in for the central value.
    pub proxy_s: f64,
    /// Orientation of the character inside the weight.
    pub orientation: Orientation,
    /// Extra truncation bound for the expansions.
    pub bound: Option<i64>,
}

impl Default for EnsembleOptions {
    fn default() -> Self {
        EnsembleOptions { primes: vec![2], s_alphas: Vec::new(), proxy_s: 2.0, orientation: Orientation::Inverse, bound: None }
    }
}

/// One (eigenform embedding, character) pair.
#[derive(Clone, Debug)]
pub struct EnsembleRow {
    pub l: i64,
    pub form_id: String,
    pub is_sk: bool,
    pub d: i64,
    pub chi: usize,
    /// `(p, λ(p))` at this embedding.
    pub lambdas: Vec<(u64, f64)>,
    /// Spectral points at the primes of `S`.
    pub nu_s: Vec<SpectralPoint>,
    /// `R(Φ, D, χ)`.
    pub r: Complex64,
    /// `R(Φ, D, χ⁻¹)`.
    pub r_inverse: Complex64,
    /// `c_{l,D} d_χ |R|²` at the oriented character.
    pub omega_times_norm2: f64,
    /// `Π_p α_p(ν_p)` over `S`.
    pub alpha: f64,
    /// Partial spin Euler product standing in for the central value.
    pub l_proxy: f64,
    pub l_proxy_error: f64,
    /// `α · L-proxy · ω·‖Φ‖²`.
    pub contribution: f64,
    pub flags: Vec<String>,
}

/// Rows plus aggregates split by the Saito–Kurokawa flag.
#[derive(Clone, Debug)]
pub struct Ensemble {
    pub rows: Vec<EnsembleRow>,
    /// Sum over non-lifts.
    pub aggregate_general: f64,
    /// Sum over Saito–Kurokawa lifts.
    pub aggregate_sk: f64,
    /// Truncation shortfalls, one per failing form.
    pub shortfalls: Vec<String>,
}

fn form_rows(
    idx: usize,
    form: &Eigenform,
    g: &ClassGroup,
    chis: &[usize],
    opts: &EnsembleOptions,
    c: f64,
) -> Result<Vec<EnsembleRow>> {
    let l = form.weight;
    let mut needed: Vec<usize> = chis.iter().flat_map(|&chi| [chi, g.char_conj(chi)]).collect();
    needed.sort_unstable();
    needed.dedup();
    let periods: Vec<(usize, Vec<PeriodDatum>)> =
        needed.iter().map(|&chi| period_eigenform(form, g, chi).map(|p| (chi, p))).collect::<Result<_>>()?;
    let period = |chi: usize, e: usize| periods.iter().find(|(c, _)| *c == chi).map(|(_, v)| v[e].r).unwrap();
    let lambdas: Vec<(u64, Vec<Complex64>)> = opts
        .primes
        .iter()
        .map(|&p| form.lambda_embedded(p).map(|v| (p, v)).ok_or_else(|| Error::Invalid(format!("T({p}) was not computed"))))
        .collect::<Result<_>>()?;
    let nu_all: Vec<Vec<SpectralPoint>> = opts.s_alphas.iter().map(|(p, _)| spectral_points(form, *p)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for e in 0..form.degree() {
        let nu_s: Vec<SpectralPoint> = nu_all.iter().map(|v| v[e]).collect();
        let alpha: f64 = opts.s_alphas.iter().zip(&nu_s).map(|((_, a), pt)| a.eval(pt).re).product();
        let proxy = partial_proxy(form, e, opts)?;
        for &chi in chis {
            let r = period(chi, e);
            let r_inverse = period(g.char_conj(chi), e);
            let sel = match opts.orientation {
                Orientation::Inverse => r_inverse,
                Orientation::Direct => r,
            };
            let omega = c * d_chi(g, chi) as f64 * sel.norm_sqr();
            let mut flags = vec![PROXY_FLAG.to_string()];
            if form.is_sk() {
                flags.push("saito-kurokawa".into());
            }
            if omega < 0.0 {
                flags.push("negative weight".into());
            }
            rows.push(EnsembleRow {
                l,
                form_id: format!("l{l}_f{idx}_e{e}"),
                is_sk: form.is_sk(),
                d: g.d,
                chi,
                lambdas: lambdas.iter().map(|(p, v)| (*p, v[e].re)).collect(),
                nu_s: nu_s.clone(),
                r,
                r_inverse,
                omega_times_norm2: omega,
                alpha,
                l_proxy: proxy.0,
                l_proxy_error: proxy.1,
                contribution: alpha * proxy.0 * omega,
                flags,
            });
        }
    }
    Ok(rows)
}

/// Partial spin Euler product at `proxy_s` over the primes whose
/// eigenvalues were computed, from the spectral points when available.
fn partial_proxy(form: &Eigenform, e: usize, opts: &EnsembleOptions) -> Result<(f64, f64)> {
    let bound = form.bound();
    let usable: Vec<u64> = opts.primes.iter().copied().filter(|&p| spin_bound(p) <= bound).collect();
    if usable.is_empty() {
        return Ok((1.0, 0.0));
    }
    let pmax = *usable.iter().max().unwrap();
    let v = partial_euler("spin proxy", pmax, opts.proxy_s, 4, |p| {
        if !usable.contains(&p) {
            return Ok(crate::satake::LocalFactor::from_parameters(p, 4, Vec::new()));
        }
        Ok(spin_factor(&spectral_points(form, p)?[e]))
    })?;
    Ok((v.value, v.error))
}

/// Weighted ensemble over a Hecke eigenbasis of `S_l`.
///
/// Every eigenform orbit contributes one row per complex embedding and per
/// requested character. Rows are computed in parallel and folded in a fixed
/// order, so the aggregates are reproducible.
pub fn ensemble_table(l: i64, g: &ClassGroup, chis: &[usize], opts: &EnsembleOptions) -> Result<Ensemble> {
    for &chi in chis {
        if chi >= g.characters.len() {
            return Err(Error::Invalid(format!("no character {chi} for D = {}", g.d)));
        }
    }
    let mut bound = opts.bound.unwrap_or(0).max(-g.d);
    for (p, _) in &opts.s_alphas {
        bound = bound.max(spin_bound(*p));
    }
    let forms = eigenforms(l, &opts.primes, Some(bound))?;
    let c = c_ld(l, g)?.to_f64();
    let results: Vec<Result<Vec<EnsembleRow>>> =
        forms.par_iter().enumerate().map(|(i, f)| form_rows(i, f, g, chis, opts, c)).collect();
    let mut rows = Vec::new();
    let mut shortfalls = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => rows.extend(v),
            Err(e @ Error::InsufficientTruncation { .. }) => shortfalls.push(format!("form {i}: {e}")),
            Err(e) => return Err(e),
        }
    }
    let mut aggregate_general = 0.0;
    let mut aggregate_sk = 0.0;
    for r in &rows {
        if r.is_sk {
            aggregate_sk += r.contribution;
        } else {
            aggregate_general += r.contribution;
        }
    }
    Ok(Ensemble { rows, aggregate_general, aggregate_sk, shortfalls })
}

impl Ensemble {
    /// CSV with columns `l, form_id, is_sk, D, chi_id, R_re, R_im,
    /// omega_times_norm2, lambda_<p>…, flags`.
    pub fn to_csv(&self) -> String {
        let primes: Vec<u64> = self.rows.first().map(|r| r.lambdas.iter().map(|(p, _)| *p).collect()).unwrap_or_default();
        let mut out = String::from("l,form_id,is_sk,D,chi_id,R_re,R_im,omega_times_norm2");
        for p in &primes {
            let _ = write!(out, ",lambda_{p}");
        }
        out.push_str(",flags\n");
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{},{},{:.14e},{:.14e},{:.14e}",
                r.l, r.form_id, r.is_sk, r.d, r.chi, r.r.re, r.r.im, r.omega_times_norm2
            );
            for (_, v) in &r.lambdas {
                let _ = write!(out, ",{v:.14e}");
            }
            let _ = writeln!(out, ",{}", r.flags.join(";"));
        }
        out
    }
}
