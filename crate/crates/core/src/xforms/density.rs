//! Stieltjes inversion `ρ(x) = −Im G_W(x + iε)/π` on a grid.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::law::PreparedLaw;
use super::resolvent::PolyFn;
use super::solver::{cauchy_w, SolveOptions};
use super::XformError;
use crate::numeric::trapezoid;

#[derive(Debug, Clone, Copy)]
pub struct DensityOptions {
    pub epsilon: f64,
    /// Two-point extrapolation `2ρ(ε/2) − ρ(ε)`.
    pub richardson: bool,
    /// Number of independent sub-sweeps run in parallel.
    pub threads: usize,
    pub solve: SolveOptions,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            epsilon: 1e-6,
            richardson: false,
            threads: 1,
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub abscissae: Vec<f64>,
    pub epsilon: f64,
    /// `NaN` where the solver failed.
    pub values: Vec<f64>,
    /// `(index, message)` of each failed point.
    pub failures: Vec<(usize, String)>,
    /// Trapezoid mass over the points that succeeded.
    pub mass: f64,
}

impl DensityGrid {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,density\n");
        for (x, v) in self.abscissae.iter().zip(&self.values) {
            let _ = writeln!(out, "{x:.16e},{v:.16e}");
        }
        out
    }

    /// Linear interpolation, zero outside the grid and across gaps.
    pub fn value_at(&self, x: f64) -> f64 {
        let a = &self.abscissae;
        if a.is_empty() || x < a[0] || x > a[a.len() - 1] {
            return 0.0;
        }
        let k = a.partition_point(|&t| t <= x).clamp(1, a.len() - 1);
        let (x0, x1) = (a[k - 1], a[k]);
        let (v0, v1) = (self.values[k - 1], self.values[k]);
        if !(v0.is_finite() && v1.is_finite()) {
            return 0.0;
        }
        if x1 == x0 {
            return v0;
        }
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }

    /// Trapezoid CDF at each abscissa, normalized by the total mass.
    pub fn cdf(&self) -> Vec<f64> {
        let v: Vec<f64> = self.values.iter().map(|&d| if d.is_finite() { d.max(0.0) } else { 0.0 }).collect();
        let mut c = crate::numeric::cumulative_trapezoid(&self.abscissae, &v);
        let total = c.last().copied().unwrap_or(0.0);
        if total > 0.0 {
            c.iter_mut().for_each(|t| *t /= total);
        }
        c
    }
}

/// Uniform grid of `n` points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Height where each sub-sweep starts its descent towards the axis.
const START_HEIGHT: f64 = 10.0;

/// `δ` at `x + iε` reached from `x + 10i` by geometric descent.
fn descend(
    x: &PreparedLaw,
    y: &PreparedLaw,
    f: &PolyFn,
    re: f64,
    eps: f64,
    opts: &SolveOptions,
) -> Result<Complex64, XformError> {
    let mut h = START_HEIGHT;
    let mut warm = None;
    loop {
        let o = SolveOptions { warm_start: warm, ..*opts };
        let (_, st) = cauchy_w(x, y, f, Complex64::new(re, h), &o)?;
        warm = Some(st.delta);
        if h <= eps {
            return Ok(st.delta);
        }
        h = (h * 0.5).max(eps);
    }
}

fn sweep(
    x: &PreparedLaw,
    y: &PreparedLaw,
    f: &PolyFn,
    xs: &[f64],
    eps: f64,
    opts: &SolveOptions,
) -> Vec<Result<f64, XformError>> {
    let mut out = Vec::with_capacity(xs.len());
    let mut warm: Option<Complex64> = None;
    for &re in xs {
        let z = Complex64::new(re, eps);
        let attempt = |warm: Option<Complex64>| cauchy_w(x, y, f, z, &SolveOptions { warm_start: warm, ..*opts });
        let r = match warm {
            Some(w) => attempt(Some(w)).or_else(|_| descend(x, y, f, re, eps, opts).and_then(|d| attempt(Some(d)))),
            None => descend(x, y, f, re, eps, opts).and_then(|d| attempt(Some(d))),
        };
        match r {
            Ok((g, st)) => {
                warm = Some(st.delta);
                out.push(Ok(-g.im / std::f64::consts::PI));
            }
            Err(e) => {
                warm = None;
                out.push(Err(e));
            }
        }
    }
    out
}

fn run(
    x: &PreparedLaw,
    y: &PreparedLaw,
    f: &PolyFn,
    xs: &[f64],
    eps: f64,
    opts: &DensityOptions,
) -> Vec<Result<f64, XformError>> {
    let threads = opts.threads.max(1).min(xs.len().max(1));
    if threads == 1 {
        return sweep(x, y, f, xs, eps, &opts.solve);
    }
    let chunk = xs.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = xs
            .chunks(chunk)
            .map(|part| s.spawn(move || sweep(x, y, f, part, eps, &opts.solve)))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("density worker panicked"))
            .collect()
    })
}

/// Density of `W = X + f(X) Y f(X)` on the increasing abscissae `xs`.
pub fn stieltjes_density(
    x: &PreparedLaw,
    y: &PreparedLaw,
    f: &PolyFn,
    xs: &[f64],
    opts: &DensityOptions,
) -> Result<DensityGrid, XformError> {
    if !(1e-9..=1e-3).contains(&opts.epsilon) {
        return Err(XformError::Domain(format!("epsilon {} outside [1e-9, 1e-3]", opts.epsilon)));
    }
    if xs.windows(2).any(|w| !(w[0] < w[1])) || xs.iter().any(|t| !t.is_finite()) {
        return Err(XformError::Domain("abscissae must be finite and increasing".into()));
    }
    let eps = opts.epsilon;
    let coarse = run(x, y, f, xs, eps, opts);
    let fine = if opts.richardson { Some(run(x, y, f, xs, eps / 2.0, opts)) } else { None };
    let mut values = Vec::with_capacity(xs.len());
    let mut failures = Vec::new();
    for (k, r) in coarse.into_iter().enumerate() {
        let v = match (r, fine.as_ref().map(|v| &v[k])) {
            (Ok(a), None) => Ok(a),
            (Ok(a), Some(Ok(b))) => Ok(2.0 * b - a),
            (Err(e), _) => Err(e.to_string()),
            (Ok(_), Some(Err(e))) => Err(e.to_string()),
        };
        match v {
            Ok(d) => values.push(d),
            Err(msg) => {
                values.push(f64::NAN);
                failures.push((k, msg));
            }
        }
    }
    let (gx, gv): (Vec<f64>, Vec<f64>) = xs
        .iter()
        .zip(&values)
        .filter(|(_, v)| v.is_finite())
        .map(|(a, b)| (*a, *b))
        .unzip();
    Ok(DensityGrid {
        abscissae: xs.to_vec(),
        epsilon: eps,
        mass: trapezoid(&gx, &gv),
        values,
        failures,
    })
}
