//! Moments of `W` from its Cauchy transform by a contour integral.
//!
//! `m_k = (1/2πi) ∮ z^k G_W(z) dz` over a circle enclosing the support. The
//! trapezoid rule on the circle converges geometrically in the number of
//! nodes, with rate `(support radius)/(circle radius)`.

use num_complex::Complex64;

use super::law::PreparedLaw;
use super::resolvent::PolyFn;
use super::solver::{cauchy_w, SolveOptions};
use super::XformError;

/// `m_0..m_n` of `W = X + f(X) Y f(X)` from `G_W` on the circle `|z| = radius`
/// sampled at `nodes` points (half of them in `C⁺`, the rest by conjugation).
pub fn contour_moments(
    x: &PreparedLaw,
    y: &PreparedLaw,
    f: &PolyFn,
    n: usize,
    radius: f64,
    nodes: usize,
) -> Result<Vec<f64>, XformError> {
    if nodes < 2 * (n + 1) {
        return Err(XformError::Domain(format!("{nodes} nodes cannot resolve {n} moments")));
    }
    let half = nodes / 2;
    let mut acc = vec![0.0; n + 1];
    let mut warm = None;
    for j in 0..half {
        // nodes off the real axis, symmetric under conjugation
        let theta = std::f64::consts::PI * (j as f64 + 0.5) / half as f64;
        let z = Complex64::from_polar(radius, theta);
        let (g, st) = cauchy_w(x, y, f, z, &SolveOptions { warm_start: warm, ..SolveOptions::default() })?;
        warm = Some(st.delta);
        // z^{k+1} G(z) plus its conjugate
        let mut zk = z * g;
        for a in acc.iter_mut() {
            *a += 2.0 * zk.re;
            zk *= z;
        }
    }
    Ok(acc.into_iter().map(|a| a / (2 * half) as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::xforms::Law;

    #[test]
    fn semicircle_x_plus_xyx() {
        let s = Law::semicircle().prepare().unwrap();
        let m = contour_moments(&s, &s, &PolyFn::identity(), 8, 10.0, 512).unwrap();
        let want = [1.0, 0.0, 2.0, 0.0, 14.0, 0.0, 138.0, 0.0, 1586.0];
        for (k, (a, b)) in m.iter().zip(want).enumerate() {
            assert!((a - b).abs() <= 1e-6 * b.abs().max(1.0), "m_{k}: {a} vs {b}");
        }
    }

    #[test]
    fn law_alone() {
        let b = Law::bernoulli().prepare().unwrap();
        let zero = Law::zero().prepare().unwrap();
        let m = contour_moments(&b, &zero, &PolyFn::one(), 4, 5.0, 128).unwrap();
        for (k, v) in m.iter().enumerate() {
            let want = if k % 2 == 0 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-12);
        }
        assert!(contour_moments(&b, &zero, &PolyFn::one(), 10, 5.0, 8).is_err());
    }
}
