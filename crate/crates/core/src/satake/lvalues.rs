//! Global L-values at the edge of the critical strip.
//!
//! `L(1, η_D)` is exact through the class number formula. `L(s, η_D)` near
//! `s = 1` and `L(1, AI(χ))` are evaluated by incomplete-gamma smoothed sums
//! derived from the completed functional equations. Partial Euler products
//! carry a tail estimate.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use statrs::function::gamma::{gamma, gamma_ur, ln_gamma};

use super::local::LocalFactor;
use crate::arith::{kronecker, primes_up_to, Q};
use crate::cyclotomic::Cyclo;
use crate::error::{Error, Result};
use crate::quadform::ClassGroup;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Default tolerance for numerically evaluated values.
pub const DEFAULT_TOL: f64 = 1e-8;

/// How a global value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    SmoothedSum,
    PartialEuler,
    DirichletSeries,
}

/// A global L-value with an error estimate (zero for exact values).
#[derive(Clone, Debug)]
pub struct GlobalLValue {
    pub label: String,
    pub value: f64,
    pub error: f64,
    pub method: Method,
}

fn check_d(d: i64) -> Result<()> {
    crate::quadform::check_discriminant(d)
}

/// `L(1, η_D) = 2π h_D / (w_D √|D|)`.
pub fn l_eta_at_1(g: &ClassGroup) -> GlobalLValue {
    let q = (-g.d) as f64;
    GlobalLValue {
        label: format!("L(1,eta_{})", g.d),
        value: 2.0 * PI * g.h() as f64 / (g.w as f64 * q.sqrt()),
        error: 0.0,
        method: Method::Exact,
    }
}

fn upper_gamma(a: f64, x: f64) -> f64 {
    gamma_ur(a, x) * gamma(a)
}

/// `L(s, η_D)` for real `s` in `(0, 2)` by the smoothed sum of the odd
/// quadratic character of conductor `|D|`.
pub fn l_eta(d: i64, s: f64) -> Result<f64> {
    check_d(d)?;
    if !(s > 0.0 && s < 2.0) {
        return Err(Error::Invalid(format!("s = {s} outside (0, 2)")));
    }
    let q = (-d) as f64;
    let c = q / PI;
    let (a1, a2) = ((s + 1.0) / 2.0, (2.0 - s) / 2.0);
    let n_max = (60.0 * q / PI).sqrt().ceil() as u64 + 1;
    let mut lambda = 0.0;
    for n in 1..=n_max {
        let chi = kronecker(d, n);
        if chi == 0 {
            continue;
        }
        let nf = n as f64;
        let x = PI * nf * nf / q;
        let t = c.powf(a1) * nf.powf(-s) * upper_gamma(a1, x) + c.powf(a2) * nf.powf(s - 1.0) * upper_gamma(a2, x);
        lambda += chi as f64 * t;
    }
    Ok(lambda / (c.powf(a1) * gamma(a1)))
}

fn central_difference(f: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    let (a, b, c, e) = (f(x + 2.0 * h)?, f(x + h)?, f(x - h)?, f(x - 2.0 * h)?);
    Ok((-a + 8.0 * b - 8.0 * c + e) / (12.0 * h))
}

/// `L′(1, η_D)` to the default tolerance.
pub fn l_eta_derivative_at_1(d: i64) -> Result<GlobalLValue> {
    l_eta_derivative_at_1_tol(d, DEFAULT_TOL)
}

/// `L′(1, η_D)` by five-point central differences of the smoothed sum at
/// steps `h, h/2, h/4` and two Richardson levels; fails when the last two
/// extrapolants disagree beyond `tol`.
pub fn l_eta_derivative_at_1_tol(d: i64, tol: f64) -> Result<GlobalLValue> {
    let f = |s: f64| l_eta(d, s);
    let h = 0.02;
    let d0 = central_difference(&f, 1.0, h)?;
    let d1 = central_difference(&f, 1.0, h / 2.0)?;
    let d2 = central_difference(&f, 1.0, h / 4.0)?;
    let r0 = d1 + (d1 - d0) / 15.0;
    let r1 = d2 + (d2 - d1) / 15.0;
    let value = r1 + (r1 - r0) / 63.0;
    let error = (r1 - r0).abs() / 63.0 + 1e-13 * (1.0 + value.abs());
    if error > tol {
        return Err(Error::Tolerance { what: format!("L'(1,eta_{d})"), requested: tol, achieved: error });
    }
    Ok(GlobalLValue { label: format!("L'(1,eta_{d})"), value, error, method: Method::SmoothedSum })
}

/// `L(s, η_D)` by a truncated Dirichlet series stopped at a multiple `N` of
/// `|D|`, with the first-order tail `-(Σ_{a<=|D|} a η_D(a)) / (|D| N^s)`
/// added back; the remaining error is `O(|D|² N^{-s-1})`.
pub fn l_eta_dirichlet(d: i64, s: f64, terms: u64) -> Result<GlobalLValue> {
    check_d(d)?;
    let q = (-d) as u64;
    let stop = terms.max(1).div_ceil(q) * q;
    let sum: f64 = (1..=stop).map(|n| kronecker(d, n) as f64 * (n as f64).powf(-s)).sum();
    let moment: f64 = (1..=q).map(|a| a as f64 * kronecker(d, a) as f64).sum();
    let nf = stop as f64;
    let value = sum - moment / (q as f64 * nf.powf(s));
    let error = (q as f64).powi(2) * nf.powf(-s - 1.0);
    Ok(GlobalLValue { label: format!("L({s},eta_{d})"), value, error, method: Method::DirichletSeries })
}

/// Numbers of representations `r_c(n)` of `1 <= n <= n_max` by the reduced
/// form of each class `c`.
pub fn representation_counts(g: &ClassGroup, n_max: u64) -> Vec<Vec<u64>> {
    let q = -g.d;
    let n_max = n_max as i64;
    g.forms
        .iter()
        .map(|f| {
            let (a, b, c) = (f.b, f.a, f.c);
            let mut r = vec![0u64; n_max as usize + 1];
            // 4a·f(x, y) = (2ax + by)² + |D| y².
            let y_max = ((4 * a * n_max) as f64 / q as f64).sqrt().floor() as i64 + 1;
            for y in -y_max..=y_max {
                let rest = 4 * a * n_max - q * y * y;
                if rest < 0 {
                    continue;
                }
                let s = (rest as f64).sqrt().floor() as i64 + 1;
                let x_lo = (-s - b * y).div_euclid(2 * a) - 1;
                let x_hi = (s - b * y).div_euclid(2 * a) + 1;
                for x in x_lo..=x_hi {
                    let v = a * x * x + b * x * y + c * y * y;
                    if v >= 1 && v <= n_max {
                        r[v as usize] += 1;
                    }
                }
            }
            r
        })
        .collect()
}

/// Exact coefficients `a(n) = Σ_{N𝔞 = n} χ(𝔞)` of `L(s, AI(χ))` for
/// `n <= n_max` (index 0 is zero), as elements of `Q(ζ_m)`.
pub fn ai_coefficients(g: &ClassGroup, chi: usize, n_max: u64) -> Vec<Cyclo> {
    let ch = &g.characters[chi];
    let m = ch.m as u64;
    let r = representation_counts(g, n_max);
    (0..=n_max as usize)
        .map(|n| {
            let mut raw = vec![Q::from_integer(0.into()); m as usize];
            for (c, rc) in r.iter().enumerate() {
                raw[ch.values[c] as usize] += Q::new((rc[n] as i64).into(), g.w.into());
            }
            Cyclo::from_raw(m, raw)
        })
        .collect()
}

/// Exponential integral `E₁(x)` for `x > 0`.
pub fn exp_int_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 needs x > 0");
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= -x / k as f64;
            let t = term / k as f64;
            sum += t;
            if t.abs() < 1e-17 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        // Modified Lentz evaluation of the continued fraction.
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Largest `n` used in the smoothed sum for `L(1, AI(χ))`.
pub const AI_TERM_LIMIT: u64 = 20_000_000;

/// `L(1, AI(χ))` for a nontrivial class group character, from
/// `Λ(s) = A^s Γ(s) L(s)`, `A = √|D| / 2π`, `Λ(s) = Λ(1 - s)`:
/// `L(1) = Σ a(n) (e^{-x_n}/n + E₁(x_n)/A)` with `x_n = n / A`.
pub fn l_ai_at_1(g: &ClassGroup, chi: usize) -> Result<GlobalLValue> {
    let ch = g.characters.get(chi).ok_or_else(|| Error::Invalid(format!("no character {chi}")))?;
    if ch.is_trivial() {
        return Err(Error::Invalid("L(s, AI(1)) = ζ(s)L(s, η_D) has a pole at s = 1".into()));
    }
    let q = (-g.d) as f64;
    let big_a = q.sqrt() / (2.0 * PI);
    let cut = 46.0;
    let n_max = (cut * big_a).ceil() as u64 + 1;
    if n_max > AI_TERM_LIMIT {
        return Err(Error::Tolerance { what: format!("L(1,AI(chi)) for D={} needs {n_max} terms", g.d), requested: DEFAULT_TOL, achieved: f64::INFINITY });
    }
    let r = representation_counts(g, n_max);
    let vals: Vec<Complex64> = (0..g.h()).map(|c| ch.value(c)).collect();
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=n_max as usize {
        let mut an = Complex64::new(0.0, 0.0);
        for (c, rc) in r.iter().enumerate() {
            if rc[n] != 0 {
                an += vals[c] * rc[n] as f64;
            }
        }
        if an.norm() == 0.0 {
            continue;
        }
        an /= g.w as f64;
        let x = n as f64 / big_a;
        sum += an * ((-x).exp() / n as f64 + exp_int_e1(x) / big_a);
    }
    // Coefficients are real because r_c = r_{c⁻¹}.
    let tail = (n_max as f64) * (-(n_max as f64) / big_a).exp() * (1.0 + 1.0 / big_a);
    Ok(GlobalLValue {
        label: format!("L(1,AI(chi_{chi})) D={}", g.d),
        value: sum.re,
        error: tail + 1e-14 * (1.0 + sum.re.abs()) + sum.im.abs(),
        method: Method::SmoothedSum,
    })
}

/// Truncated Euler product `Π_{p <= x} L_p(s)` with tail estimate
/// `degree · x^{1-σ} / ((σ - 1) log x)`, valid for tempered factors.
pub fn partial_euler<F>(label: &str, x: u64, s: f64, degree: usize, factor: F) -> Result<GlobalLValue>
where
    F: Fn(u64) -> Result<LocalFactor> + Sync,
{
    if s <= 1.0 {
        return Err(Error::Invalid(format!("s = {s} outside the region of absolute convergence")));
    }
    let primes = primes_up_to(x);
    let logs: Vec<Complex64> = primes
        .par_iter()
        .map(|&p| factor(p).map(|f| f.eval_real(s).ln()))
        .collect::<Result<_>>()?;
    let total: Complex64 = logs.iter().sum();
    let value = total.exp();
    let error = if primes.is_empty() {
        0.0
    } else {
        let xf = x as f64;
        value.norm() * degree as f64 * xf.powf(1.0 - s) / ((s - 1.0) * xf.ln())
    };
    Ok(GlobalLValue { label: label.to_string(), value: value.re, error: error + value.im.abs(), method: Method::PartialEuler })
}

/// Digamma at a positive integer: `ψ(n) = -γ + Σ_{k<n} 1/k`.
pub fn digamma_int(n: u64) -> f64 {
    assert!(n >= 1, "ψ(n) needs n >= 1");
    // Summed from the small terms up for accuracy.
    (1..n).rev().map(|k| 1.0 / k as f64).sum::<f64>() - EULER_GAMMA
}

/// `log Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> f64 {
    ln_gamma(x)
}
