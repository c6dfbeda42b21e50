//! `freeconv` command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_rational::BigRational;

use freeconv::alg::fixtures;
use freeconv::alg::pipeline::{pipeline_xxyx, LawName};
use freeconv::combinat::{cumulants_from_moments, moments_of_w, CumulantData, CumulantKind};
use freeconv::numeric::parse_complex;
use freeconv::rational::{format_rational, parse_rational};
use freeconv::rmt::{self, Histogram};
use freeconv::verify::{Verifier, VerifyOptions};
use freeconv::xforms::density::uniform_grid;
use freeconv::xforms::{
    cauchy_w, contour_moments, convolve_additive, convolve_multiplicative, stieltjes_density, DensityOptions, Law,
    PolyFn, PreparedLaw, SolveOptions,
};

#[derive(Parser)]
#[command(name = "freeconv", version, about = "Spectral distribution of X + f(X) Y f(X) for free X, Y")]
struct Cli {
    /// Worker threads for density grids, random-matrix trials and verification.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact moments of W from cumulants, cross-checked against a series or contour route.
    Moments {
        #[command(flatten)]
        model: Model,
        /// Number of moments.
        #[arg(long, default_value = "8")]
        order: String,
        /// Tolerance of the numeric cross-check on |contour − exact| / max(|m_k|, b^k),
        /// with b a bound on the spectrum of W.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Density of W on a uniform grid by Stieltjes inversion (CSV x,density).
    Density {
        #[command(flatten)]
        model: Model,
        /// Left end of the grid.
        #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
        lo: f64,
        /// Right end of the grid.
        #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
        hi: f64,
        /// Grid points, endpoints included.
        #[arg(long, default_value_t = 1000)]
        points: usize,
        /// Distance Im z above the real axis.
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Combine ε and ε/2 by Richardson extrapolation.
        #[arg(long)]
        richardson: bool,
    },
    /// Cauchy transform at the given points (CSV).
    Convolve {
        #[arg(long, value_enum, default_value_t = Mode::Additive)]
        mode: Mode,
        #[command(flatten)]
        model: Model,
        /// Points `a+bi` in the upper half-plane, comma-separated or repeated.
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        z: Vec<String>,
    },
    /// Elimination pipeline for X + XYX; writes the selected factor as polynomial JSON.
    Eliminate {
        /// `semicircle` or `arcsine`.
        #[arg(long, default_value = "semicircle")]
        law: String,
        /// Moments taken from the selected branch.
        #[arg(long, default_value = "8")]
        order: String,
        /// Stage report destination (default stderr).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Random-matrix spectrum of W as a histogram CSV.
    Rmt {
        #[command(flatten)]
        model: Model,
        /// Matrix size.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Trials with seeds seed, seed+1, …; eigenvalues are pooled.
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Histogram bins.
        #[arg(long, default_value_t = 100)]
        bins: usize,
        /// Histogram range (default: the eigenvalue range).
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
    },
    /// Fixture checksums and the end-to-end acceptance checks.
    Verify {
        /// Only these checks (1-10).
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
        /// Matrix size of the random-matrix check.
        #[arg(long, default_value_t = 1000)]
        rmt_n: usize,
    },
}

#[derive(Args)]
struct Model {
    /// Law of X: semicircle, arcsine, bernoulli, projection:p, zero, or inline JSON.
    #[arg(long, default_value = "semicircle")]
    law_x: String,
    /// Law of Y.
    #[arg(long, default_value = "semicircle")]
    law_y: String,
    /// Coefficients of f, lowest degree first, as rationals `p/q`.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    f: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// X ⊞ Y
    Additive,
    /// X ⊠ Y for positive X, Y
    Multiplicative,
    /// X + f(X) Y f(X)
    W,
}

enum Failure {
    Usage(String),
    Compute(String),
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn compute<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Compute(e.to_string())
}

struct Parsed {
    x: Law,
    y: Law,
    /// Trailing zeros stripped; empty for `f = 0`.
    f: Vec<BigRational>,
}

impl Model {
    fn parse(&self) -> Result<Parsed, Failure> {
        let x = Law::preset(&self.law_x).map_err(|e| usage(format!("--law-x: {e}")))?;
        let y = Law::preset(&self.law_y).map_err(|e| usage(format!("--law-y: {e}")))?;
        let mut f = self
            .f
            .split(',')
            .map(|t| parse_rational(t.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| usage(format!("--f: {e}")))?;
        while f.last().is_some_and(|c| *c == BigRational::from_integer(0.into())) {
            f.pop();
        }
        Ok(Parsed { x, y, f })
    }
}

impl Parsed {
    fn poly_fn(&self) -> Result<PolyFn, Failure> {
        PolyFn::new(self.f.clone()).map_err(usage)
    }

    fn f64_coeffs(&self) -> Vec<f64> {
        self.f.iter().map(freeconv::rational::to_f64).collect()
    }

    fn prepared(&self) -> Result<(PreparedLaw, PreparedLaw), Failure> {
        Ok((self.x.prepare().map_err(compute)?, self.y.prepare().map_err(compute)?))
    }
}

fn parse_order(s: &str) -> Result<usize, Failure> {
    let r = parse_rational(s).map_err(|e| usage(format!("--order: {e}")))?;
    if !r.is_integer() || r < BigRational::from_integer(1.into()) {
        return Err(usage(format!("--order must be a positive integer, got {s}")));
    }
    r.to_integer().to_string().parse().map_err(usage)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn joined(v: &[BigRational]) -> String {
    v.iter().map(format_rational).collect::<Vec<_>>().join(",")
}

fn moments(model: &Model, order: &str, tolerance: f64, out: &Option<PathBuf>) -> Result<(), Failure> {
    let n = parse_order(order)?;
    let p = model.parse()?;
    let deg = p.f.len().saturating_sub(1);
    let mx = p.x.moments(n * (2 * deg + 1)).map_err(compute)?;
    let my = p.y.moments(n).map_err(compute)?;
    let ky = cumulants_from_moments(&CumulantData::new(CumulantKind::Moment, my[1..].to_vec()), CumulantKind::Free, n)
        .map_err(compute)?;
    let m = if p.f.is_empty() { mx[1..=n].to_vec() } else { moments_of_w(&mx, &ky.values, &p.f, n).map_err(compute)? };

    let identity = p.f.len() == 2 && p.f[0] == BigRational::from_integer(0.into()) && p.f[1] == BigRational::from_integer(1.into());
    let series_law = match (&p.x, &p.y) {
        (a, b) if *a == Law::semicircle() && *b == Law::semicircle() => Some(LawName::Semicircle),
        (a, b) if *a == Law::arcsine() && *b == Law::arcsine() => Some(LawName::Arcsine),
        _ => None,
    };
    if let (true, Some(law)) = (identity, series_law) {
        let rep = pipeline_xxyx(law, n).map_err(compute)?;
        if rep.moments != m {
            return Err(compute(format!("series route disagrees: {}", joined(&rep.moments))));
        }
        eprintln!("series cross-check: exact agreement");
    } else if !p.f.is_empty() {
        let (x, y) = p.prepared()?;
        let f = p.poly_fn()?;
        // a circle well outside the spectrum of W
        let fmax = (0..=200)
            .map(|k| x.radius * (2.0 * k as f64 / 200.0 - 1.0))
            .map(|t| f.eval(Complex64::new(t, 0.0)).norm())
            .fold(0.0, f64::max);
        let bound = x.radius + fmax * fmax * y.radius;
        let radius = 1.2 * bound + 0.5;
        let nodes = (64 * (n + 1)).max(512);
        let c = contour_moments(&x, &y, &f, n, radius, nodes).map_err(compute)?;
        let worst = m
            .iter()
            .zip(&c[1..])
            .zip(1..)
            .map(|((e, c), k)| {
                let e = freeconv::rational::to_f64(e);
                (c - e).abs() / e.abs().max(bound.max(1.0).powi(k))
            })
            .fold(0.0, f64::max);
        eprintln!("contour cross-check: max scaled error {worst:.2e} (radius {radius:.3})");
        if worst > tolerance {
            return Err(compute(format!("contour route disagrees: {worst:.2e} > {tolerance:.1e}")));
        }
    }
    emit(out, &format!("{}\n", joined(&m)))
}

fn density(
    model: &Model,
    (lo, hi, points, epsilon, richardson): (f64, f64, usize, f64, bool),
    threads: usize,
    out: &Option<PathBuf>,
) -> Result<(), Failure> {
    if !(lo < hi) || points < 2 {
        return Err(usage(format!("need lo < hi and at least 2 points, got [{lo}, {hi}] with {points}")));
    }
    let p = model.parse()?;
    let f = p.poly_fn()?;
    let (x, y) = p.prepared()?;
    let opts = DensityOptions { epsilon, richardson, threads, ..DensityOptions::default() };
    let grid = stieltjes_density(&x, &y, &f, &uniform_grid(lo, hi, points), &opts).map_err(compute)?;
    for (k, why) in &grid.failures {
        eprintln!("x = {}: {why}", grid.abscissae[*k]);
    }
    if grid.failures.len() == points {
        return Err(compute("no grid point converged"));
    }
    eprintln!("mass {:.6}", grid.mass);
    emit(out, &grid.to_csv())
}

fn convolve(mode: Mode, model: &Model, zs: &[String], out: &Option<PathBuf>) -> Result<(), Failure> {
    let p = model.parse()?;
    let (x, y) = p.prepared()?;
    let opts = SolveOptions::default();
    let mut csv = String::from("z_re,z_im,g_re,g_im,sub_re,sub_im\n");
    for s in zs {
        let z = parse_complex(s).ok_or_else(|| usage(format!("cannot parse z = {s:?}")))?;
        let (g, sub) = match mode {
            Mode::Additive => convolve_additive(&x, &y, z, &opts),
            Mode::Multiplicative => convolve_multiplicative(&x, &y, z, &opts),
            Mode::W => cauchy_w(&x, &y, &p.poly_fn()?, z, &opts).map(|(g, st)| (g, st.delta)),
        }
        .map_err(|e| compute(format!("z = {s}: {e}")))?;
        let _ = writeln!(csv, "{:e},{:e},{:e},{:e},{:e},{:e}", z.re, z.im, g.re, g.im, sub.re, sub.im);
    }
    emit(out, &csv)
}

fn eliminate(law: &str, order: &str, report: &Option<PathBuf>, out: &Option<PathBuf>) -> Result<(), Failure> {
    let name = LawName::from_name(law).ok_or_else(|| usage(format!("--law must be semicircle or arcsine, got {law:?}")))?;
    let n = parse_order(order)?;
    let rep = pipeline_xxyx(name, n).map_err(compute)?;
    let mut text = String::new();
    for s in &rep.stages {
        let _ = writeln!(text, "{s}");
    }
    for b in &rep.branches {
        let gammas: Vec<String> = b.families.iter().map(|f| f.gamma.to_string()).collect();
        let _ = writeln!(text, "{}: slopes {}", b.factor, gammas.join(", "));
    }
    let _ = writeln!(text, "selected factor {} ({})", rep.selected + 1, rep.seed.description);
    let _ = writeln!(text, "moments {}", joined(&rep.moments));
    match report {
        Some(p) => std::fs::write(p, &text).map_err(|e| usage(format!("cannot write {}: {e}", p.display())))?,
        None => eprint!("{text}"),
    }
    let sel = rep.selected_factor();
    let json = serde_json::to_string_pretty(&sel.to_json(&sel.json_vars())).map_err(compute)?;
    emit(out, &format!("{json}\n"))
}

struct RmtJob {
    n: usize,
    seed: u64,
    trials: u64,
    bins: usize,
    lo: Option<f64>,
    hi: Option<f64>,
}

fn rmt_cmd(model: &Model, job: RmtJob, threads: usize, out: &Option<PathBuf>) -> Result<(), Failure> {
    if job.trials == 0 || job.bins == 0 {
        return Err(usage("--trials and --bins must be positive"));
    }
    let p = model.parse()?;
    let seeds: Vec<u64> = (0..job.trials).map(|k| job.seed.wrapping_add(k)).collect();
    let mut eigs = Vec::new();
    for r in rmt::trials(&p.x, &p.y, &p.f64_coeffs(), job.n, &seeds, threads) {
        eigs.extend(r.map_err(compute)?);
    }
    let lo = job.lo.unwrap_or_else(|| eigs.iter().copied().fold(f64::INFINITY, f64::min));
    let hi = job.hi.unwrap_or_else(|| eigs.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    let hi = if hi > lo { hi } else { lo + 1.0 };
    let h = Histogram::new(&eigs, lo, hi, job.bins).map_err(usage)?;
    emit(out, &h.to_csv())
}

fn verify(only: &[usize], rmt_n: usize, threads: usize, out: &Option<PathBuf>) -> Result<(), Failure> {
    let mut text = String::new();
    let mut ok = true;
    if only.is_empty() {
        match fixtures::check_all() {
            Ok(checks) => {
                let bad: Vec<String> = checks.iter().filter(|c| !c.ok()).map(|c| c.name.clone()).collect();
                ok &= bad.is_empty();
                let tag = if bad.is_empty() { "PASS" } else { "FAIL" };
                let _ = writeln!(text, "[{tag}]  0 fixture-checksums        {} fixtures; failing: {:?}", checks.len(), bad);
            }
            Err(e) => {
                ok = false;
                let _ = writeln!(text, "[FAIL]  0 fixture-checksums        {e}");
            }
        }
    }
    let v = Verifier::new(VerifyOptions { threads, rmt_n, ..VerifyOptions::default() });
    let ids: Vec<usize> = if only.is_empty() { (1..=10).collect() } else { only.to_vec() };
    for id in ids {
        let r = v.run(id).ok_or_else(|| usage(format!("no check {id}; checks are 1-10")))?;
        if out.is_some() {
            eprintln!("{r}");
        }
        ok &= r.passed;
        let _ = writeln!(text, "{r}");
    }
    emit(out, &text)?;
    if ok {
        Ok(())
    } else {
        Err(compute("some checks failed"))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let threads = cli.threads.max(1);
    match &cli.command {
        Command::Moments { model, order, tolerance } => moments(model, order, *tolerance, &cli.out),
        Command::Density { model, lo, hi, points, epsilon, richardson } => {
            density(model, (*lo, *hi, *points, *epsilon, *richardson), threads, &cli.out)
        }
        Command::Convolve { mode, model, z } => convolve(*mode, model, z, &cli.out),
        Command::Eliminate { law, order, report } => eliminate(law, order, report, &cli.out),
        Command::Rmt { model, n, seed, trials, bins, lo, hi } => rmt_cmd(
            model,
            RmtJob { n: *n, seed: *seed, trials: *trials, bins: *bins, lo: *lo, hi: *hi },
            threads,
            &cli.out,
        ),
        Command::Verify { only, rmt_n } => verify(only, *rmt_n, threads, &cli.out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
