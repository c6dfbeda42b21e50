//! Eigenvalues of a Hermitian matrix: Householder reduction to a real
//! symmetric tridiagonal matrix, then implicit-shift QL.

use num_complex::Complex64;

use super::RmtError;

/// Relative deflation threshold.
pub const EIGEN_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 60;

/// Diagonal and off-diagonal of the tridiagonal form of the Hermitian `a`
/// (row-major, `n × n`). `a` is overwritten.
pub fn tridiagonalize(a: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let zero = Complex64::new(0.0, 0.0);
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    let mut v = vec![zero; n];
    let mut p = vec![zero; n];
    for k in 0..n.saturating_sub(1) {
        d[k] = a[k * n + k].re;
        let lo = k + 1;
        let m = n - lo;
        let norm = (lo..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = a[lo * n + k];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        // H x = α e₁ with α = −phase·‖x‖, v = x − α e₁
        for i in 0..m {
            v[i] = a[(lo + i) * n + k];
        }
        v[0] = phase * (x0.norm() + norm);
        let tau = 1.0 / (norm * (norm + x0.norm()));
        e[k] = norm;
        for i in 0..m {
            let row = &a[(lo + i) * n + lo..(lo + i) * n + n];
            let mut s = zero;
            for (aij, vj) in row.iter().zip(&v[..m]) {
                s += aij * vj;
            }
            p[i] = s * tau;
        }
        let vp: f64 = (0..m).map(|i| (v[i].conj() * p[i]).re).sum();
        let kk = 0.5 * tau * vp;
        for i in 0..m {
            p[i] -= v[i] * kk;
        }
        for i in 0..m {
            let (vi, qi) = (v[i], p[i]);
            let row = &mut a[(lo + i) * n + lo..(lo + i) * n + n];
            for (j, aij) in row.iter_mut().enumerate() {
                *aij -= vi * p[j].conj() + qi * v[j].conj();
            }
        }
    }
    if n > 0 {
        d[n - 1] = a[(n - 1) * n + n - 1].re;
    }
    (d, e)
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[i]` coupling `i` and `i+1`.
pub fn tridiagonal_eigenvalues(mut d: Vec<f64>, mut e: Vec<f64>) -> Result<Vec<f64>, RmtError> {
    let n = d.len();
    e.resize(n, 0.0);
    let scale = (0..n)
        .map(|i| d[i].abs() + e[i].abs() + if i > 0 { e[i - 1].abs() } else { 0.0 })
        .fold(0.0, f64::max);
    let tol = EIGEN_TOL * scale;
    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd || e[m].abs() <= tol {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(RmtError::NonConvergence(l));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Sorted eigenvalues of the Hermitian `a` (row-major).
pub fn hermitian_eigenvalues(mut a: Vec<Complex64>, n: usize) -> Result<Vec<f64>, RmtError> {
    if a.len() != n * n {
        return Err(RmtError::Dimension(format!("{} entries for n = {n}", a.len())));
    }
    let (d, e) = tridiagonalize(&mut a, n);
    tridiagonal_eigenvalues(d, e)
}
