//! The subordination fixed point `δ = η̃_Y(η̃_T(δ))` and its additive and
//! multiplicative specializations.

use num_complex::Complex64;

use super::law::PreparedLaw;
use super::resolvent::{eta_tilde_resolvent, perturbed_cauchy, PolyFn};
use super::XformError;

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Iterations of the secant fallback.
    pub secant_iter: usize,
    pub warm_start: Option<Complex64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-12,
            max_iter: 10_000,
            secant_iter: 200,
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubordinationState {
    pub z: Complex64,
    pub delta: Complex64,
    pub iterations: usize,
    pub residual: f64,
    pub warm_start: Option<Complex64>,
}

/// Slack allowed for `Im δ > 0` from rounding.
const DOMAIN_SLACK: f64 = 1e-9;

/// Fixed point of `map` from `start`: plain iteration, halved steps after
/// any increase of the residual, then a secant search on `δ − map(δ)`.
pub(crate) fn fixed_point<F>(mut map: F, start: Complex64, opts: &SolveOptions) -> Result<(Complex64, usize, f64), XformError>
where
    F: FnMut(Complex64) -> Result<Complex64, XformError>,
{
    let mut d = start;
    let mut prev = f64::INFINITY;
    let mut damped = false;
    let mut best = (d, f64::INFINITY);
    for it in 0..opts.max_iter {
        let fd = map(d)?;
        let res = (fd - d).norm();
        if !res.is_finite() {
            break;
        }
        if res < best.1 {
            best = (d, res);
        }
        if res <= opts.tol {
            return Ok((d, it + 1, res));
        }
        if res > prev {
            damped = true;
        }
        d = if damped { (d + fd) / 2.0 } else { fd };
        prev = res;
    }
    // secant on g(δ) = δ − map(δ) from the best iterate
    let mut x0 = best.0;
    let mut g0 = x0 - map(x0)?;
    let mut x1 = x0 - g0;
    let mut g1 = x1 - map(x1)?;
    for k in 0..opts.secant_iter {
        if g1.norm() <= opts.tol {
            return Ok((x1, opts.max_iter + k + 1, g1.norm()));
        }
        let denom = g1 - g0;
        if denom.norm() == 0.0 {
            break;
        }
        let x2 = x1 - g1 * (x1 - x0) / denom;
        x0 = x1;
        g0 = g1;
        x1 = x2;
        g1 = x1 - map(x1)?;
    }
    let residual = g1.norm().min(best.1);
    Err(XformError::NonConvergence {
        iterations: opts.max_iter + opts.secant_iter,
        residual,
    })
}

/// `F(δ) = η̃_Y(η̃_T(δ))`.
pub fn delta_map(x: &PreparedLaw, y: &PreparedLaw, f: &PolyFn, z: Complex64, d: Complex64) -> Result<Complex64, XformError> {
    y.eta_tilde(eta_tilde_resolvent(x, f, z, d)?)
}

/// Solves `δ = η̃_Y(η̃_T(δ))` at `z ∈ C⁺`, starting from `φ(Y)` or the warm
/// start.
pub fn solve_delta(
    x: &PreparedLaw,
    y: &PreparedLaw,
    f: &PolyFn,
    z: Complex64,
    opts: &SolveOptions,
) -> Result<SubordinationState, XformError> {
    if z.im <= 0.0 {
        return Err(XformError::Domain(format!("Im z = {} must be positive", z.im)));
    }
    let start = opts.warm_start.unwrap_or(Complex64::new(y.mean(), 0.0));
    let (delta, iterations, residual) = fixed_point(|d| delta_map(x, y, f, z, d), start, opts)?;
    if delta.im > DOMAIN_SLACK * delta.norm().max(1.0) {
        return Err(XformError::DomainViolation { re: delta.re, im: delta.im });
    }
    Ok(SubordinationState {
        z,
        delta,
        iterations,
        residual,
        warm_start: opts.warm_start,
    })
}

/// `G_W(z)` for `W = X + f(X) Y f(X)` together with the solver state.
pub fn cauchy_w(
    x: &PreparedLaw,
    y: &PreparedLaw,
    f: &PolyFn,
    z: Complex64,
    opts: &SolveOptions,
) -> Result<(Complex64, SubordinationState), XformError> {
    let st = solve_delta(x, y, f, z, opts)?;
    Ok((perturbed_cauchy(x, f, st.delta, z)?, st))
}

/// `G_{X⊞Y}(z) = G_X(ω_1(z))` with `ω_1 = z − δ` for `f ≡ 1`.
pub fn convolve_additive(
    x: &PreparedLaw,
    y: &PreparedLaw,
    z: Complex64,
    opts: &SolveOptions,
) -> Result<(Complex64, Complex64), XformError> {
    let (g, st) = cauchy_w(x, y, &PolyFn::one(), z, opts)?;
    Ok((g, z - st.delta))
}

/// `ψ_μ(w) = G(1/w)/w − 1`
fn psi(law: &PreparedLaw, w: Complex64) -> Result<Complex64, XformError> {
    Ok(law.cauchy(1.0 / w)? / w - 1.0)
}

/// `G_{X⊠Y}(z)` for positive free `X`, `Y`, with the subordination function
/// `F(w) = w η̃_Y(w η̃_X(F(w)))`, `ψ_{XY}(w) = ψ_X(F(w))` at `w = 1/z`.
/// Returns `(G, F(1/z))`.
pub fn convolve_multiplicative(
    x: &PreparedLaw,
    y: &PreparedLaw,
    z: Complex64,
    opts: &SolveOptions,
) -> Result<(Complex64, Complex64), XformError> {
    if z.im <= 0.0 {
        return Err(XformError::Domain(format!("Im z = {} must be positive", z.im)));
    }
    for (name, l) in [("X", x), ("Y", y)] {
        if l.support.is_some_and(|(lo, _)| lo < 0.0) || l.support.is_none() {
            return Err(XformError::Unsupported(format!("{name} must be a positive law with known support")));
        }
    }
    let w = 1.0 / z;
    let start = opts.warm_start.unwrap_or(w * y.mean());
    let (fw, _, _) = fixed_point(|v| Ok(w * y.eta_tilde(w * x.eta_tilde(v)?)?), start, opts)?;
    let m = 1.0 + psi(x, fw)?;
    Ok((w * m, fw))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::xforms::Law;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn branch_sqrt(z: Complex64, a: f64) -> Complex64 {
        crate::numeric::sqrt_pair(z, a)
    }

    #[test]
    fn bernoulli_delta() {
        let b = Law::bernoulli().prepare().unwrap();
        for z in [c(0.5, 0.5), c(-2.5, 0.1), c(3.0, 2.0)] {
            let st = solve_delta(&b, &b, &PolyFn::one(), z, &SolveOptions::default()).unwrap();
            let want = (z - branch_sqrt(z, 2.0)) / 2.0;
            assert!((st.delta - want).norm() < 1e-10, "{z}: {} vs {want}", st.delta);
            let (g, _) = convolve_additive(&b, &b, z, &SolveOptions::default()).unwrap();
            assert!((g - 1.0 / branch_sqrt(z, 2.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn zero_y_gives_zero_delta() {
        let s = Law::semicircle().prepare().unwrap();
        let zero = Law::zero().prepare().unwrap();
        let st = solve_delta(&s, &zero, &PolyFn::identity(), c(0.3, 0.2), &SolveOptions::default()).unwrap();
        assert_eq!(st.delta, c(0.0, 0.0));
    }

    #[test]
    fn projection_closed_form() {
        let s = Law::semicircle().prepare().unwrap();
        let pl = Law::projection(ratio(1, 4)).unwrap().prepare().unwrap();
        let z = c(3.0, 1e-9);
        let st = solve_delta(&pl, &s, &PolyFn::identity(), z, &SolveOptions::default()).unwrap();
        assert!((st.delta - (2.0 - 3f64.sqrt()) / 2.0).norm() < 1e-8);
    }

    #[test]
    fn semicircle_sum_has_variance_two() {
        let s = Law::semicircle().prepare().unwrap();
        for z in [c(0.1, 0.1), c(2.0, 0.5), c(-3.0, 0.05)] {
            let (g, _) = convolve_additive(&s, &s, z, &SolveOptions::default()).unwrap();
            assert!((2.0 * g * g - z * g + 1.0).norm() < 1e-10);
        }
    }

    #[test]
    fn shift_by_point_mass() {
        let s = Law::arcsine().prepare().unwrap();
        let a = Law::point(ratio(3, 2)).prepare().unwrap();
        let z = c(0.2, 0.4);
        let (g, _) = convolve_additive(&s, &a, z, &SolveOptions::default()).unwrap();
        assert!((g - s.cauchy(z - 1.5).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn additive_equals_general_path() {
        let x = Law::arcsine().prepare().unwrap();
        let y = Law::bernoulli().prepare().unwrap();
        let z = c(0.7, 0.3);
        let (g1, _) = convolve_additive(&x, &y, z, &SolveOptions::default()).unwrap();
        let (g2, _) = cauchy_w(&x, &y, &PolyFn::one(), z, &SolveOptions::default()).unwrap();
        assert!((g1 - g2).norm() <= 1e-14);
    }

    #[test]
    fn multiplicative_identity_and_moments() {
        let x = Law::discrete(vec![(ratio(1, 2), ratio(1, 3)), (ratio(2, 1), ratio(2, 3))]).unwrap().prepare().unwrap();
        let one = Law::point(ratio(1, 1)).prepare().unwrap();
        let z = c(0.5, 1.0);
        let (g, _) = convolve_multiplicative(&x, &one, z, &SolveOptions::default()).unwrap();
        assert!((g - x.cauchy(z).unwrap()).norm() < 1e-12);
        let (g, _) = convolve_multiplicative(&one, &x, z, &SolveOptions::default()).unwrap();
        assert!((g - x.cauchy(z).unwrap()).norm() < 1e-12);
        assert!(convolve_multiplicative(&Law::semicircle().prepare().unwrap(), &x, z, &SolveOptions::default()).is_err());
    }

    #[test]
    fn herglotz_delta() {
        let s = Law::semicircle().prepare().unwrap();
        let a = Law::arcsine().prepare().unwrap();
        for z in [c(0.0, 1.0), c(3.0, 0.01), c(-1.0, 0.2)] {
            let st = solve_delta(&s, &a, &PolyFn::identity(), z, &SolveOptions::default()).unwrap();
            assert!(st.delta.im <= 1e-12);
            assert!(st.residual < 1e-12);
            let g = perturbed_cauchy(&s, &PolyFn::identity(), st.delta, z).unwrap();
            assert!(g.im < 0.0);
        }
    }
}
