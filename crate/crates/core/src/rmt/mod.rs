//! Random-matrix cross-check: sample independent unitarily invariant models
//! for `X` and `Y`, take the spectrum of `X + f(X) Y f(X)` and compare it
//! with a density grid.

pub mod eigen;
pub mod rng;
pub mod sample;

pub use eigen::hermitian_eigenvalues;
pub use rng::SplitMix64;
pub use sample::{haar_unitary, sample_matrix, CMatrix, MatrixSample, MAX_DIM};

use std::fmt::Write as _;

use thiserror::Error;

use crate::xforms::{DensityGrid, Law};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RmtError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("eigenvalue iteration did not converge at index {0}")]
    NonConvergence(usize),
    #[error("empty input: {0}")]
    Empty(String),
}

/// Sorted eigenvalues of `X + f(X) Y f(X)`; `f[k]` is the coefficient of
/// `x^k` and may be empty (`f = 0`).
pub fn empirical_spectrum(x: &MatrixSample, y: &MatrixSample, f: &[f64]) -> Result<Vec<f64>, RmtError> {
    if x.n != y.n {
        return Err(RmtError::Dimension(format!("{} vs {}", x.n, y.n)));
    }
    let w = assemble(x, y, f);
    hermitian_eigenvalues(w.to_row_major(), x.n)
}

/// The matrix `X + f(X) Y f(X)`, symmetrized.
pub fn assemble(x: &MatrixSample, y: &MatrixSample, f: &[f64]) -> CMatrix {
    if f.iter().all(|c| *c == 0.0) {
        return x.entries.clone();
    }
    let fx = x.entries.poly(f);
    x.entries.add(&fx.mul(&y.entries).mul(&fx)).hermitian_part()
}

/// Seed of the `Y` sample paired with trial seed `seed`.
pub fn partner_seed(seed: u64) -> u64 {
    rng::mix(seed ^ 0xD1B5_4A32_D192_ED03)
}

/// One trial: `X` from `seed`, `Y` from [`partner_seed`].
pub fn trial(law_x: &Law, law_y: &Law, f: &[f64], n: usize, seed: u64) -> Result<Vec<f64>, RmtError> {
    let x = sample_matrix(law_x, n, seed)?;
    let y = sample_matrix(law_y, n, partner_seed(seed))?;
    empirical_spectrum(&x, &y, f)
}

/// Independent trials, at most `threads` at a time; results in seed order.
pub fn trials(
    law_x: &Law,
    law_y: &Law,
    f: &[f64],
    n: usize,
    seeds: &[u64],
    threads: usize,
) -> Vec<Result<Vec<f64>, RmtError>> {
    let threads = threads.max(1);
    let mut out = Vec::with_capacity(seeds.len());
    for batch in seeds.chunks(threads) {
        std::thread::scope(|s| {
            let handles: Vec<_> = batch.iter().map(|&seed| s.spawn(move || trial(law_x, law_y, f, n, seed))).collect();
            out.extend(handles.into_iter().map(|h| h.join().expect("trial panicked")));
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

impl Histogram {
    /// `bins` equal bins on `[lo, hi]`; values outside are dropped.
    pub fn new(values: &[f64], lo: f64, hi: f64, bins: usize) -> Result<Self, RmtError> {
        if bins == 0 || !(lo < hi) {
            return Err(RmtError::Dimension(format!("{bins} bins on [{lo}, {hi}]")));
        }
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins).map(|k| lo + width * k as f64).collect();
        let mut counts = vec![0; bins];
        for &v in values {
            if (lo..=hi).contains(&v) {
                let k = (((v - lo) / width) as usize).min(bins - 1);
                counts[k] += 1;
            }
        }
        Ok(Histogram { edges, counts })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,count\n");
        for (k, c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{:.16e},{:.16e},{c}", self.edges[k], self.edges[k + 1]);
        }
        out
    }
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `eigs` and the
/// normalized trapezoid CDF of `grid`, taken over the grid abscissae (the
/// resolution at which the grid CDF is known).
pub fn ks_distance(eigs: &[f64], grid: &DensityGrid) -> Result<f64, RmtError> {
    if eigs.is_empty() || grid.abscissae.len() < 2 {
        return Err(RmtError::Empty("need eigenvalues and at least two grid points".into()));
    }
    let mut sorted = eigs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = grid
        .abscissae
        .iter()
        .zip(grid.cdf())
        .map(|(&x, f)| (sorted.partition_point(|&e| e <= x) as f64 / n - f).abs())
        .fold(0.0, f64::max);
    Ok(d.min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xforms::density::uniform_grid;
    use crate::xforms::PolyFn;

    fn moment(ev: &[f64], k: i32) -> f64 {
        ev.iter().map(|x| x.powi(k)).sum::<f64>() / ev.len() as f64
    }

    fn grid_from(xs: Vec<f64>, values: Vec<f64>) -> DensityGrid {
        DensityGrid {
            mass: crate::numeric::trapezoid(&xs, &values),
            abscissae: xs,
            epsilon: 1e-6,
            values,
            failures: Vec::new(),
        }
    }

    #[test]
    fn zero_f_gives_x() {
        let x = sample_matrix(&Law::semicircle(), 60, 1).unwrap();
        let y = sample_matrix(&Law::arcsine(), 60, 2).unwrap();
        let alone = hermitian_eigenvalues(x.entries.to_row_major(), 60).unwrap();
        assert_eq!(empirical_spectrum(&x, &y, &[]).unwrap(), alone);
        assert_eq!(empirical_spectrum(&x, &y, &[0.0, 0.0]).unwrap(), alone);
        let small = sample_matrix(&Law::semicircle(), 10, 1).unwrap();
        assert!(empirical_spectrum(&x, &small, &[1.0]).is_err());
    }

    #[test]
    fn trace_consistency() {
        let x = sample_matrix(&Law::semicircle(), 80, 3).unwrap();
        let y = sample_matrix(&Law::bernoulli(), 80, 4).unwrap();
        let f = [0.5, 1.0, -0.25];
        let ev = empirical_spectrum(&x, &y, &f).unwrap();
        let w = assemble(&x, &y, &f);
        assert!((moment(&ev, 1) - w.normalized_trace()).abs() < 1e-10);
    }

    #[test]
    fn x_plus_xyx_moments() {
        let ev = trial(&Law::semicircle(), &Law::semicircle(), &PolyFn::identity().coeffs_f64(), 1000, 1).unwrap();
        let (m2, m4) = (moment(&ev, 2), moment(&ev, 4));
        assert!((m2 - 2.0).abs() < 0.2, "{m2}");
        assert!((m4 - 14.0).abs() < 1.4, "{m4}");
        assert!(ev[0] > -9.3 && ev[999] < 9.3);
    }

    #[test]
    fn parallel_trials_are_deterministic() {
        let seeds = [5, 6, 7];
        let law = Law::bernoulli();
        let a = trials(&Law::semicircle(), &law, &[0.0, 1.0], 40, &seeds, 3);
        let b = trials(&Law::semicircle(), &law, &[0.0, 1.0], 40, &seeds, 1);
        assert_eq!(a, b);
        assert_eq!(a[1], trial(&Law::semicircle(), &law, &[0.0, 1.0], 40, 6));
    }

    #[test]
    fn histogram_csv() {
        let h = Histogram::new(&[0.1, 0.2, 0.9, 1.0, 5.0], 0.0, 1.0, 2).unwrap();
        assert_eq!(h.counts, vec![2, 2]);
        let csv = h.to_csv();
        assert!(csv.starts_with("bin_left,bin_right,count\n"));
        assert_eq!(csv.lines().count(), 3);
        assert!(Histogram::new(&[], 1.0, 0.0, 3).is_err());
    }

    #[test]
    fn ks_against_inverse_cdf_samples() {
        // triangle density on [−1, 1]
        let xs = uniform_grid(-1.0, 1.0, 2001);
        let vals: Vec<f64> = xs.iter().map(|x| 1.0 - x.abs()).collect();
        let grid = grid_from(xs.clone(), vals);
        let cdf = grid.cdf();
        let mut rng = SplitMix64::new(12);
        let samples: Vec<f64> = (0..10_000)
            .map(|_| {
                let u = rng.uniform();
                let k = cdf.partition_point(|&c| c < u).clamp(1, xs.len() - 1);
                xs[k - 1] + (xs[k] - xs[k - 1]) * (u - cdf[k - 1]) / (cdf[k] - cdf[k - 1])
            })
            .collect();
        let d = ks_distance(&samples, &grid).unwrap();
        assert!(d < 0.03, "{d}");
        let shifted: Vec<f64> = samples.iter().map(|x| x + 0.5).collect();
        assert!(ks_distance(&shifted, &grid).unwrap() > 0.2);
        assert!(ks_distance(&[], &grid).is_err());
    }

    #[test]
    fn ks_point_mass() {
        // a hat on one node: the grid CDF is 0, 1/2, 1 on three consecutive
        // nodes, so the distance is bounded by the mass of one cell
        let xs = uniform_grid(-1.0, 1.0, 201);
        let vals: Vec<f64> = xs.iter().map(|x| if x.abs() < 1e-9 { 1.0 } else { 0.0 }).collect();
        let grid = grid_from(xs, vals);
        assert!((ks_distance(&[0.0; 50], &grid).unwrap() - 0.5).abs() < 1e-12);
        assert!((ks_distance(&[0.005; 50], &grid).unwrap() - 0.5).abs() < 1e-12);
        assert!((ks_distance(&[0.5; 50], &grid).unwrap() - 1.0).abs() < 1e-12);
    }
}
