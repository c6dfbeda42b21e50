//! Matrix models: GUE for semicircles, `U + U*` for arcsines and Haar
//! conjugates of diagonal matrices for discrete laws.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::rng::SplitMix64;
use super::RmtError;
use crate::rational::to_f64;
use crate::xforms::Law;

/// Largest dimension accepted by the samplers.
pub const MAX_DIM: usize = 4096;

/// Dense complex matrix stored as real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub re: DMatrix<f64>,
    pub im: DMatrix<f64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix { re: DMatrix::zeros(n, n), im: DMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        CMatrix { re: DMatrix::identity(n, n), im: DMatrix::zeros(n, n) }
    }

    pub fn dim(&self) -> usize {
        self.re.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(self.re[(i, j)], self.im[(i, j)])
    }

    pub fn set(&mut self, i: usize, j: usize, z: Complex64) {
        self.re[(i, j)] = z.re;
        self.im[(i, j)] = z.im;
    }

    pub fn mul(&self, b: &CMatrix) -> CMatrix {
        CMatrix {
            re: &self.re * &b.re - &self.im * &b.im,
            im: &self.re * &b.im + &self.im * &b.re,
        }
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix { re: self.re.transpose(), im: -self.im.transpose() }
    }

    pub fn add(&self, b: &CMatrix) -> CMatrix {
        CMatrix { re: &self.re + &b.re, im: &self.im + &b.im }
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        CMatrix { re: &self.re * s, im: &self.im * s }
    }

    /// `self + s·I`
    pub fn shift(&self, s: f64) -> CMatrix {
        let mut out = self.clone();
        for i in 0..self.dim() {
            out.re[(i, i)] += s;
        }
        out
    }

    /// `(A + A*)/2`
    pub fn hermitian_part(&self) -> CMatrix {
        CMatrix {
            re: (&self.re + self.re.transpose()) * 0.5,
            im: (&self.im - self.im.transpose()) * 0.5,
        }
    }

    /// `max |A − A*|` over entries.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.re.iter().zip(self.im.iter()).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max)
    }

    /// Normalized trace `tr(A)/n`.
    pub fn normalized_trace(&self) -> f64 {
        self.re.trace() / self.dim() as f64
    }

    /// Row-major entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    /// `f(A)` by Horner's scheme, `c[k]` the coefficient of `x^k`.
    pub fn poly(&self, c: &[f64]) -> CMatrix {
        let n = self.dim();
        match c.len() {
            0 => CMatrix::zeros(n),
            1 => CMatrix::identity(n).scale(c[0]),
            _ => {
                let d = c.len() - 1;
                let mut acc = self.scale(c[d]).shift(c[d - 1]);
                for k in (0..d - 1).rev() {
                    acc = acc.mul(self).shift(c[k]);
                }
                acc
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSample {
    pub n: usize,
    pub entries: CMatrix,
    pub law: String,
    pub seed: u64,
}

fn gue(n: usize, rng: &mut SplitMix64) -> CMatrix {
    // E|a_ij|² = 1/n
    let s = (1.0 / n as f64).sqrt();
    let mut m = CMatrix::zeros(n);
    for i in 0..n {
        m.re[(i, i)] = rng.normal() * s;
        for j in i + 1..n {
            let z = rng.complex_normal() * s;
            m.set(i, j, z);
            m.set(j, i, z.conj());
        }
    }
    m
}

/// Haar unitary: modified Gram–Schmidt on the columns of a Ginibre matrix
/// (the implied `R` has a positive diagonal).
pub fn haar_unitary(n: usize, rng: &mut SplitMix64) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|_| (0..n).map(|_| rng.complex_normal()).collect()).collect();
    for j in 0..n {
        let (done, rest) = cols.split_at_mut(j);
        let a = &mut rest[0];
        for q in done.iter() {
            let r: Complex64 = q.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum();
            for (ai, qi) in a.iter_mut().zip(q) {
                *ai -= r * qi;
            }
        }
        let norm = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        a.iter_mut().for_each(|x| *x /= norm);
    }
    let mut u = CMatrix::zeros(n);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u.set(i, j, *z);
        }
    }
    u
}

/// Atom multiplicities summing to `n` by largest remainders.
fn multiplicities(weights: &[f64], n: usize) -> Vec<usize> {
    let raw: Vec<f64> = weights.iter().map(|w| w * n as f64).collect();
    let mut counts: Vec<usize> = raw.iter().map(|r| r.floor() as usize).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| (raw[b] - raw[b].floor()).total_cmp(&(raw[a] - raw[a].floor())));
    let mut missing = n - counts.iter().sum::<usize>();
    for &k in order.iter().cycle() {
        if missing == 0 {
            break;
        }
        counts[k] += 1;
        missing -= 1;
    }
    counts
}

/// Random matrix whose spectrum approximates `law`, reproducible from
/// `(law, n, seed)`.
pub fn sample_matrix(law: &Law, n: usize, seed: u64) -> Result<MatrixSample, RmtError> {
    if n == 0 || n > MAX_DIM {
        return Err(RmtError::Dimension(format!("n = {n} outside 1..={MAX_DIM}")));
    }
    let mut rng = SplitMix64::new(seed);
    let (entries, tag) = match law {
        Law::Semicircle { mean, variance } => {
            let m = gue(n, &mut rng).scale(to_f64(variance).sqrt()).shift(to_f64(mean));
            (m, "semicircle")
        }
        Law::Arcsine { center, radius } => {
            let u = haar_unitary(n, &mut rng);
            let m = u.add(&u.adjoint()).scale(to_f64(radius) / 2.0).shift(to_f64(center));
            (m.hermitian_part(), "arcsine")
        }
        Law::Discrete(atoms) => {
            let xs: Vec<f64> = atoms.iter().map(|(x, _)| to_f64(x)).collect();
            let ws: Vec<f64> = atoms.iter().map(|(_, w)| to_f64(w)).collect();
            if xs.len() == 1 {
                (CMatrix::identity(n).scale(xs[0]), "discrete")
            } else {
                let counts = multiplicities(&ws, n);
                let diag: Vec<f64> = xs.iter().zip(&counts).flat_map(|(x, c)| std::iter::repeat_n(*x, *c)).collect();
                let v = haar_unitary(n, &mut rng);
                let mut vd = v.clone();
                for (j, x) in diag.iter().enumerate() {
                    vd.re.column_mut(j).scale_mut(*x);
                    vd.im.column_mut(j).scale_mut(*x);
                }
                (vd.mul(&v.adjoint()).hermitian_part(), "discrete")
            }
        }
        Law::AlgebraicCauchy { .. } => {
            return Err(RmtError::Unsupported("no matrix model for an algebraic law".into()));
        }
    };
    Ok(MatrixSample { n, entries, law: tag.into(), seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use crate::rmt::eigen::hermitian_eigenvalues;

    fn spectrum(s: &MatrixSample) -> Vec<f64> {
        hermitian_eigenvalues(s.entries.to_row_major(), s.n).unwrap()
    }

    #[test]
    fn reproducible() {
        let a = sample_matrix(&Law::semicircle(), 50, 9).unwrap();
        let b = sample_matrix(&Law::semicircle(), 50, 9).unwrap();
        let c = sample_matrix(&Law::semicircle(), 50, 10).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.entries, c.entries);
        let h = sample_matrix(&Law::arcsine(), 40, 1).unwrap();
        assert_eq!(h, sample_matrix(&Law::arcsine(), 40, 1).unwrap());
    }

    #[test]
    fn hermitian_samples() {
        for law in [Law::semicircle(), Law::arcsine(), Law::bernoulli()] {
            let s = sample_matrix(&law, 80, 2).unwrap();
            assert!(s.entries.hermitian_defect() <= 1e-14 * s.entries.max_abs().max(1.0));
        }
    }

    #[test]
    fn haar_is_unitary() {
        let mut r = SplitMix64::new(4);
        let u = haar_unitary(30, &mut r);
        let p = u.adjoint().mul(&u);
        let id = CMatrix::identity(30);
        let err = p.add(&id.scale(-1.0)).max_abs();
        assert!(err < 1e-13);
    }

    #[test]
    fn semicircle_second_moment() {
        let s = sample_matrix(&Law::semicircle(), 1000, 11).unwrap();
        let ev = spectrum(&s);
        let m2 = ev.iter().map(|x| x * x).sum::<f64>() / 1000.0;
        assert!((0.9..=1.1).contains(&m2), "{m2}");
        let m1 = ev.iter().sum::<f64>() / 1000.0;
        assert!(m1.abs() < 5.0 / 1000f64.sqrt());
    }

    #[test]
    fn arcsine_support() {
        let s = sample_matrix(&Law::arcsine(), 500, 5).unwrap();
        let ev = spectrum(&s);
        assert!(ev[0] >= -2.2 && ev[499] <= 2.2);
        let m2 = ev.iter().map(|x| x * x).sum::<f64>() / 500.0;
        assert!((m2 - 2.0).abs() < 5.0 / 500f64.sqrt());
    }

    #[test]
    fn discrete_laws() {
        let a = sample_matrix(&Law::point(ratio(3, 2)), 7, 0).unwrap();
        assert_eq!(a.entries, CMatrix::identity(7).scale(1.5));
        let law = Law::discrete(vec![(rat(-1), ratio(1, 4)), (rat(2), ratio(3, 4))]).unwrap();
        let ev = spectrum(&sample_matrix(&law, 40, 3).unwrap());
        assert_eq!(ev.iter().filter(|x| (*x + 1.0).abs() < 1e-10).count(), 10);
        assert_eq!(ev.iter().filter(|x| (*x - 2.0).abs() < 1e-10).count(), 30);
        assert_eq!(multiplicities(&[1.0 / 3.0; 3], 10).iter().sum::<usize>(), 10);
    }

    #[test]
    fn horner_matches_direct() {
        let s = sample_matrix(&Law::semicircle(), 12, 1).unwrap().entries;
        let direct = CMatrix::identity(12).add(&s.scale(-2.0)).add(&s.mul(&s).scale(0.5));
        assert!(s.poly(&[1.0, -2.0, 0.5]).add(&direct.scale(-1.0)).max_abs() < 1e-13);
        assert_eq!(s.poly(&[]), CMatrix::zeros(12));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(sample_matrix(&Law::semicircle(), 0, 0).is_err());
        assert!(sample_matrix(&Law::semicircle(), MAX_DIM + 1, 0).is_err());
    }
}
