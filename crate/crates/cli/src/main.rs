//! `equidist`: command-line front end for the library.
//!
//! Every subcommand produces a table, written as CSV (default) or as a JSON
//! report. Exit status is 0 on success, 2 on invalid input and 3 when a
//! computation misses its tolerance or a verification check fails.

mod verify;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use equidist::arith::fmt_q;
use equidist::bessel::{
    ensemble_table, main_term, main_term_weighted, normalization_bridge, period_eigenform, EnsembleOptions, Orientation,
};
use equidist::plancherel::{lambda_measure, HeckeSymbol, DEFAULT_NODES};
use equidist::quadform::ClassGroup;
use equidist::satake::spectral_points;
use equidist::siegel::cache::{CacheStatus, ExpansionCache, CACHE_DIR_ENV};
use equidist::siegel::eigenforms::eigenforms;
use equidist::siegel::hecke::hecke_matrix;
use equidist::siegel::igusa::{evaluate_monomials, monomials};
use equidist::Error;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "equidist", version, about = "Class groups, Siegel eigenforms, Satake data and Bessel-period weights")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the table here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Expansion cache directory (overrides the environment variable).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Log cache activity and wall time to standard error.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationArg {
    Inverse,
    Direct,
}

#[derive(Clone, Copy, ValueEnum)]
enum SymbolArg {
    /// The constant symbol 1.
    One,
    /// `α₁ + α₁⁻¹ + α₂ + α₂⁻¹`.
    Spin,
}

/// Character selector: `trivial`, `all`, or an index into the character table.
#[derive(Clone, Copy, Debug)]
enum ChiSel {
    Trivial,
    All,
    Index(usize),
}

impl FromStr for ChiSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "trivial" => Ok(ChiSel::Trivial),
            "all" => Ok(ChiSel::All),
            _ => s.parse().map(ChiSel::Index).map_err(|_| format!("expected 'trivial', 'all' or an index, got {s:?}")),
        }
    }
}

impl ChiSel {
    fn resolve(self, g: &ClassGroup) -> Result<Vec<usize>, Error> {
        match self {
            ChiSel::Trivial => Ok(vec![0]),
            ChiSel::All => Ok((0..g.characters.len()).collect()),
            ChiSel::Index(i) if i < g.characters.len() => Ok(vec![i]),
            ChiSel::Index(i) => Err(Error::Invalid(format!("no character {i} for D = {}", g.d))),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduced forms, class orders and inverses of Cl_D.
    #[command(allow_negative_numbers = true)]
    Classgroup {
        #[arg(short = 'D', long = "disc")]
        d: i64,
    },
    /// Monomial basis of S_l with exact Fourier coefficients (cached).
    Basis {
        #[arg(short = 'l', long = "weight")]
        l: i64,
        #[arg(long, default_value_t = 20)]
        bound: i64,
    },
    /// Matrix of T(p) on the monomial basis of S_l.
    Hecke {
        #[arg(short = 'l', long = "weight")]
        l: i64,
        #[arg(short = 'p', long)]
        p: u64,
    },
    /// Hecke eigenvalues of an eigenbasis of S_l.
    Eigen {
        #[arg(short = 'l', long = "weight")]
        l: i64,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        primes: Vec<u64>,
    },
    /// Satake parameters of the eigenbasis of S_l.
    Satake {
        #[arg(short = 'l', long = "weight")]
        l: i64,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        primes: Vec<u64>,
    },
    /// Bessel periods R(Φ, D, χ) of every eigenform of S_l.
    #[command(allow_negative_numbers = true)]
    Period {
        #[arg(short = 'D', long = "disc")]
        d: i64,
        #[arg(short = 'l', long = "weight")]
        l: i64,
        #[arg(long, default_value = "all")]
        chi: ChiSel,
    },
    /// Per-form ensemble weights ω·‖Φ‖² and the aggregate sums.
    #[command(allow_negative_numbers = true)]
    Weights {
        #[arg(short = 'D', long = "disc")]
        d: i64,
        #[arg(short = 'l', long = "weight")]
        l: i64,
        #[arg(long, default_value = "all")]
        chi: ChiSel,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        primes: Vec<u64>,
        /// Primes of S, each weighted by `--symbol`.
        #[arg(short = 'S', long = "s-primes", value_delimiter = ',')]
        s_primes: Vec<u64>,
        #[arg(long, value_enum, default_value_t = SymbolArg::Spin)]
        symbol: SymbolArg,
        #[arg(long, value_enum, default_value_t = OrientationArg::Inverse)]
        orientation: OrientationArg,
        /// Point at which the spin Euler product stands in for the central value.
        #[arg(long, default_value_t = 2.0)]
        proxy_s: f64,
    },
    /// Main term P(l, D, χ), optionally weighted by Λ over S.
    #[command(name = "main-term", allow_negative_numbers = true)]
    MainTerm {
        #[arg(short = 'D', long = "disc")]
        d: i64,
        #[arg(short = 'l', long = "weight")]
        l: i64,
        #[arg(long, default_value = "trivial")]
        chi: ChiSel,
        #[arg(short = 'S', long = "s-primes", value_delimiter = ',')]
        s_primes: Vec<u64>,
        #[arg(long, value_enum, default_value_t = SymbolArg::One)]
        symbol: SymbolArg,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        /// Fail with status 3 when the error estimate exceeds this.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// The measure Λ^χ_S(α) at a real point s.
    #[command(allow_negative_numbers = true)]
    Lambda {
        #[arg(short = 'D', long = "disc")]
        d: i64,
        #[arg(long, default_value = "trivial")]
        chi: ChiSel,
        #[arg(short = 'S', long = "s-primes", value_delimiter = ',')]
        s_primes: Vec<u64>,
        #[arg(long, value_enum, default_value_t = SymbolArg::One)]
        symbol: SymbolArg,
        #[arg(long = "at", default_value_t = 0.0)]
        s: f64,
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Symbolic check of the normalization constants.
    Bridge,
    /// Runs the invariant checks of every module.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        /// Seed for the randomized checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Class-group checks cover fundamental discriminants above `-max-disc`.
        #[arg(long, default_value_t = 2000)]
        max_disc: i64,
    },
}

/// A result table with the largest error estimate it carries.
#[derive(Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub tolerance: Option<f64>,
    /// Set when a check failed or a tolerance was missed.
    pub failure: Option<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), ..Default::default() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    fn to_json(&self, argv: &[String], wall: Option<f64>) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.header.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect::<Map<_, _>>()))
            .collect();
        let mut report = json!({
            "command": argv,
            "version": env!("CARGO_PKG_VERSION"),
            "rows": rows,
            "tolerance_achieved": self.tolerance,
            "failure": self.failure,
        });
        if let Some(w) = wall {
            report["wall_time_s"] = json!(w);
        }
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// Fixed float format: 15 significant digits.
pub fn f(x: f64) -> String {
    format!("{x:.14e}")
}

fn symbol(s: SymbolArg) -> HeckeSymbol {
    match s {
        SymbolArg::One => HeckeSymbol::constant(1.0),
        SymbolArg::Spin => HeckeSymbol::spin_trace(),
    }
}

fn cache(cli: &Cli) -> ExpansionCache {
    match &cli.cache_dir {
        Some(d) => ExpansionCache::new(d),
        None => ExpansionCache::from_env(),
    }
}

fn run(cli: &Cli) -> Result<Table, Error> {
    match &cli.command {
        Command::Classgroup { d } => {
            let g = ClassGroup::new(*d)?;
            let mut t = Table::new(&["class", "b", "a", "c", "order", "inverse", "h", "w"]);
            for (i, form) in g.forms.iter().enumerate() {
                t.push(vec![
                    i.to_string(),
                    form.b.to_string(),
                    form.a.to_string(),
                    form.c.to_string(),
                    g.order_of(i).to_string(),
                    g.inverse[i].to_string(),
                    g.h().to_string(),
                    g.w.to_string(),
                ]);
            }
            Ok(t)
        }
        Command::Basis { l, bound } => {
            if *bound < 1 {
                return Err(Error::Invalid("bound must be positive".into()));
            }
            let ms = monomials(*l, true);
            let store = cache(cli);
            let mut t = Table::new(&["index", "monomial", "b", "a", "c", "coefficient"]);
            for (i, m) in ms.iter().enumerate() {
                let kind = format!("cusp-{}", m.to_string().replace(['*', '^'], "_"));
                let (fe, status) =
                    store.load_or_build(&kind, *l, *bound, || Ok(evaluate_monomials(&[*m], *bound)?.remove(0)))?;
                if cli.timing {
                    eprintln!("cache {}: {}", store.path(&kind, *l, *bound).display(), status_text(&status));
                }
                if let CacheStatus::Rebuilt(why) = &status {
                    eprintln!("warning: rebuilt cached expansion ({why})");
                }
                for (key, v) in fe.keys().iter().zip(fe.coeffs()) {
                    t.push(vec![i.to_string(), m.to_string(), key.b.to_string(), key.a.to_string(), key.c.to_string(), fmt_q(&v)]);
                }
            }
            Ok(t)
        }
        Command::Hecke { l, p } => {
            let bound = equidist::siegel::eigenforms::hecke_bound(*l, &[*p])?;
            let basis: Vec<_> = evaluate_monomials(&monomials(*l, true), bound)?;
            let m = hecke_matrix(&basis, *p)?;
            let mut t = Table::new(&["row", "col", "entry"]);
            for (i, r) in m.iter().enumerate() {
                for (j, v) in r.iter().enumerate() {
                    t.push(vec![i.to_string(), j.to_string(), fmt_q(v)]);
                }
            }
            Ok(t)
        }
        Command::Eigen { l, primes } => {
            let forms = eigenforms(*l, primes, None)?;
            let mut t = Table::new(&["l", "form_id", "embedding", "is_sk", "p", "lambda_exact", "lambda_re", "lambda_im"]);
            for (i, form) in forms.iter().enumerate() {
                for &p in primes {
                    let exact = form.lambda_rational(p).map(|q| fmt_q(&q)).unwrap_or_default();
                    let emb = form.lambda_embedded(p).ok_or_else(|| Error::Invalid(format!("T({p}) missing")))?;
                    for (e, z) in emb.iter().enumerate() {
                        t.push(vec![
                            l.to_string(),
                            format!("l{l}_f{i}"),
                            e.to_string(),
                            form.is_sk().to_string(),
                            p.to_string(),
                            exact.clone(),
                            f(z.re),
                            f(z.im),
                        ]);
                    }
                }
            }
            Ok(t)
        }
        Command::Satake { l, primes } => {
            let forms = eigenforms(*l, primes, None)?;
            let mut t = Table::new(&["l", "form_id", "embedding", "is_sk", "p", "nu1_re", "nu1_im", "nu2_re", "nu2_im", "tempered"]);
            for (i, form) in forms.iter().enumerate() {
                for &p in primes {
                    for (e, pt) in spectral_points(form, p)?.iter().enumerate() {
                        t.push(vec![
                            l.to_string(),
                            format!("l{l}_f{i}"),
                            e.to_string(),
                            form.is_sk().to_string(),
                            p.to_string(),
                            f(pt.nu[0].re),
                            f(pt.nu[0].im),
                            f(pt.nu[1].re),
                            f(pt.nu[1].im),
                            pt.is_tempered().to_string(),
                        ]);
                    }
                }
            }
            Ok(t)
        }
        Command::Period { d, l, chi } => {
            let g = ClassGroup::new(*d)?;
            let chis = chi.resolve(&g)?;
            let forms = eigenforms(*l, &[2], Some(-*d))?;
            let mut t = Table::new(&["l", "form_id", "embedding", "is_sk", "D", "chi_id", "R_re", "R_im", "abs2"]);
            for (i, form) in forms.iter().enumerate() {
                for &c in &chis {
                    for p in period_eigenform(form, &g, c)? {
                        t.push(vec![
                            l.to_string(),
                            format!("l{l}_f{i}"),
                            p.embedding.to_string(),
                            form.is_sk().to_string(),
                            d.to_string(),
                            c.to_string(),
                            f(p.r.re),
                            f(p.r.im),
                            f(p.abs2),
                        ]);
                    }
                }
            }
            Ok(t)
        }
        Command::Weights { d, l, chi, primes, s_primes, symbol: sym, orientation, proxy_s } => {
            let g = ClassGroup::new(*d)?;
            let chis = chi.resolve(&g)?;
            let opts = EnsembleOptions {
                primes: primes.clone(),
                s_alphas: s_primes.iter().map(|&p| (p, symbol(*sym))).collect(),
                proxy_s: *proxy_s,
                orientation: match orientation {
                    OrientationArg::Inverse => Orientation::Inverse,
                    OrientationArg::Direct => Orientation::Direct,
                },
                bound: None,
            };
            let ens = ensemble_table(*l, &g, &chis, &opts)?;
            for s in &ens.shortfalls {
                eprintln!("warning: {s}");
            }
            let mut header: Vec<String> =
                ["l", "form_id", "is_sk", "D", "chi_id", "R_re", "R_im", "omega_times_norm2"].iter().map(|s| s.to_string()).collect();
            header.extend(primes.iter().map(|p| format!("lambda_{p}")));
            header.extend(["alpha", "l_proxy", "contribution", "flags"].iter().map(|s| s.to_string()));
            let mut t = Table { header, ..Default::default() };
            for r in &ens.rows {
                let mut row = vec![
                    r.l.to_string(),
                    r.form_id.clone(),
                    r.is_sk.to_string(),
                    r.d.to_string(),
                    r.chi.to_string(),
                    f(r.r.re),
                    f(r.r.im),
                    f(r.omega_times_norm2),
                ];
                row.extend(r.lambdas.iter().map(|(_, v)| f(*v)));
                row.extend([f(r.alpha), f(r.l_proxy), f(r.contribution), r.flags.join(";")]);
                t.push(row);
            }
            let n = t.header.len();
            let mut agg = |name: &str, v: f64| {
                let mut row = vec![String::new(); n];
                row[1] = name.to_string();
                row[n - 2] = f(v);
                t.push(row);
            };
            agg("aggregate_general", ens.aggregate_general);
            agg("aggregate_sk", ens.aggregate_sk);
            if !ens.shortfalls.is_empty() {
                t.failure = Some(ens.shortfalls.join("; "));
            }
            Ok(t)
        }
        Command::MainTerm { d, l, chi, s_primes, symbol: sym, nodes, tol } => {
            let g = ClassGroup::new(*d)?;
            let chis = chi.resolve(&g)?;
            let alphas: Vec<(u64, HeckeSymbol)> = s_primes.iter().map(|&p| (p, symbol(*sym))).collect();
            let mut t = Table::new(&["l", "D", "chi_id", "quantity", "value"]);
            let mut worst: f64 = 0.0;
            for c in chis {
                let m = if alphas.is_empty() { main_term(*l, &g, c)? } else { main_term_weighted(*l, &g, c, &alphas, *nodes)? };
                worst = worst.max(m.error);
                let mut push = |q: &str, v: f64| t.push(vec![l.to_string(), d.to_string(), c.to_string(), q.to_string(), f(v)]);
                push("P", m.value);
                push("error", m.error);
                for (name, v) in &m.components {
                    push(name, *v);
                }
            }
            t.tolerance = Some(worst);
            if let Some(tol) = tol {
                if worst > *tol {
                    t.failure = Some(format!("error estimate {worst:e} exceeds {tol:e}"));
                }
            }
            Ok(t)
        }
        Command::Lambda { d, chi, s_primes, symbol: sym, s, nodes, tol } => {
            let g = ClassGroup::new(*d)?;
            let chis = chi.resolve(&g)?;
            let alphas: Vec<(u64, HeckeSymbol)> = s_primes.iter().map(|&p| (p, symbol(*sym))).collect();
            let s_label = s_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(";");
            let mut t = Table::new(&["D", "chi_id", "S", "s", "value", "error"]);
            let mut worst: f64 = 0.0;
            for c in chis {
                let q = lambda_measure(&g, c, &alphas, *s, *nodes)?;
                worst = worst.max(q.error);
                t.push(vec![d.to_string(), c.to_string(), s_label.clone(), f(*s), f(q.value), f(q.error)]);
            }
            t.tolerance = Some(worst);
            if worst > *tol {
                t.failure = Some(format!("quadrature error {worst:e} exceeds {tol:e}"));
            }
            Ok(t)
        }
        Command::Bridge => {
            let r = normalization_bridge()?;
            let mut t = Table::new(&["check", "ok", "detail"]);
            for c in &r.checks {
                t.push(vec![c.name.clone(), c.ok.to_string(), c.detail.clone()]);
            }
            for (name, v) in [
                ("corollary_constant", &r.corollary_constant),
                ("norm_ratio", &r.norm_ratio),
                ("measure_factor", &r.measure_factor),
                ("theorem_factor", &r.theorem_factor),
            ] {
                t.push(vec![name.to_string(), "true".into(), fmt_q(v)]);
            }
            t.push(vec!["cover_degree".into(), "true".into(), r.cover_degree.to_string()]);
            if !r.all_ok() {
                t.failure = Some("normalization chain does not close".into());
            }
            Ok(t)
        }
        Command::Verify { suite, seed, max_disc } => verify::run(*suite, *seed, *max_disc),
    }
}

fn status_text(s: &CacheStatus) -> String {
    match s {
        CacheStatus::Hit => "hit".into(),
        CacheStatus::Built => "built".into(),
        CacheStatus::Rebuilt(why) => format!("rebuilt ({why})"),
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    if cli.timing {
        if let Ok(dir) = std::env::var(CACHE_DIR_ENV) {
            eprintln!("cache dir from {CACHE_DIR_ENV}: {dir}");
        }
    }
    let table = match run(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                Error::Tolerance { .. } | Error::InsufficientTruncation { .. } => 3,
                _ => 2,
            });
        }
    };
    let wall = start.elapsed().as_secs_f64();
    if cli.timing {
        eprintln!("wall time: {wall:.3} s");
    }
    let text = match cli.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(&argv[1..], cli.timing.then_some(wall)),
    };
    if let Err(e) = emit(&cli, &text) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if let Some(why) = &table.failure {
        eprintln!("failure: {why}");
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
