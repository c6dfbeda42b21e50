//! Integrals against the law of `X` of rational functions built from `f`:
//! `η̃` of `T = f(X)(z − X)^{-1} f(X)` and the perturbed resolvent.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use super::law::PreparedLaw;
use super::XformError;
use crate::numeric::{poly_deriv, poly_eval, poly_mul, poly_roots, quadratic_roots};
use crate::rational::{format_rational, parse_rational, to_f64};

/// Real polynomial `f`, `coeffs[k]` the coefficient of `x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFn {
    pub coeffs: Vec<BigRational>,
    c: Vec<Complex64>,
}

impl PolyFn {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self, XformError> {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(XformError::InvalidLaw("f is identically zero".into()));
        }
        let c = coeffs.iter().map(|r| Complex64::new(to_f64(r), 0.0)).collect();
        Ok(PolyFn { coeffs, c })
    }

    /// Coefficients as floats, lowest degree first.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        self.c.iter().map(|z| z.re).collect()
    }

    /// `f(x) = x`
    pub fn identity() -> Self {
        PolyFn::new(vec![BigRational::zero(), BigRational::from_integer(1.into())]).expect("nonzero")
    }

    /// `f ≡ 1`
    pub fn one() -> Self {
        PolyFn::new(vec![BigRational::from_integer(1.into())]).expect("nonzero")
    }

    /// Comma-separated rationals `c_0,c_1,…`.
    pub fn parse(s: &str) -> Result<Self, XformError> {
        let coeffs = s
            .split(',')
            .map(|t| parse_rational(t.trim()).map_err(|e| XformError::InvalidLaw(format!("f: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        PolyFn::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        poly_eval(&self.c, x)
    }

    /// Coefficients of `f^2`.
    pub fn square(&self) -> Vec<Complex64> {
        poly_mul(&self.c, &self.c)
    }

    /// Whether `f` vanishes at every atom of a discrete law.
    pub fn vanishes_on(&self, law: &PreparedLaw) -> bool {
        law.atoms()
            .is_some_and(|a| a.iter().all(|&(x, _)| self.eval(Complex64::new(x, 0.0)).norm() == 0.0))
    }
}

impl std::fmt::Display for PolyFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "{}", v.join(","))
    }
}

/// `∫ (α + βx)/((λ1 − x)(λ2 − x)) dμ(x)
///  = −[(α + βλ1)G(λ1) − (α + βλ2)G(λ2)]/(λ1 − λ2)`,
/// and `−d/dλ[(α + βλ)G(λ)]` when the two points merge.
pub fn cauchy_divdiff(
    law: &PreparedLaw,
    alpha: Complex64,
    beta: Complex64,
    l1: Complex64,
    l2: Complex64,
) -> Result<Complex64, XformError> {
    let scale = 1.0 + l1.norm().max(l2.norm());
    if (l1 - l2).norm() <= 1e-7 * scale {
        let l = (l1 + l2) / 2.0;
        let g = law.cauchy(l)?;
        let dg = law.cauchy_derivative(l)?;
        return Ok(-(beta * g + (alpha + beta * l) * dg));
    }
    let a = (alpha + beta * l1) * law.cauchy(l1)?;
    let b = (alpha + beta * l2) * law.cauchy(l2)?;
    Ok(-(a - b) / (l1 - l2))
}

/// Polynomial long division, `num = q·den + r` with `deg r < deg den`.
fn divide(num: &[Complex64], den: &[Complex64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut q = vec![Complex64::zero(); r.len() - dd];
    for k in (0..q.len()).rev() {
        let c = r[k + dd] / den[dd];
        q[k] = c;
        for (j, d) in den.iter().enumerate() {
            r[k + j] -= c * d;
        }
    }
    r.truncate(dd);
    (q, r)
}

/// `∫ num(x)/den(x) dμ(x)` for `den` without zeros on the support.
///
/// Discrete laws are summed exactly. Otherwise the partial fraction
/// expansion over the roots of `den` reduces the integral to values of `G`
/// (via [`cauchy_divdiff`] for quadratic denominators). Clustered roots of
/// higher-degree denominators fall back to quadrature.
pub(crate) fn integrate_rational(
    law: &PreparedLaw,
    num: &[Complex64],
    den: &[Complex64],
) -> Result<Complex64, XformError> {
    if let Some(atoms) = law.atoms() {
        let mut acc = Complex64::zero();
        for &(x, w) in atoms {
            let xc = Complex64::new(x, 0.0);
            let d = poly_eval(den, xc);
            if d.norm() == 0.0 {
                return Err(XformError::Proximity { re: x, im: 0.0 });
            }
            acc += w * poly_eval(num, xc) / d;
        }
        return Ok(acc);
    }
    let den = crate::numeric::poly_trim(den, 1e-15);
    if den.len() < 2 {
        return Err(XformError::Integration("denominator is constant".into()));
    }
    let (q, r) = divide(num, &den);
    let mut acc = Complex64::zero();
    for (k, c) in q.iter().enumerate() {
        let m = law
            .moment(k)
            .ok_or_else(|| XformError::Integration(format!("moment {k} unavailable")))?;
        acc += c * m;
    }
    if r.iter().all(|c| c.norm() == 0.0) {
        return Ok(acc);
    }
    let d = den.len() - 1;
    if d == 1 {
        // r0 / (d0 + d1 x) = −(r0/d1) / (λ − x), λ = −d0/d1
        let l = -den[0] / den[1];
        return Ok(acc - r[0] / den[1] * law.cauchy(l)?);
    }
    if d == 2 {
        // den = a (λ1 − x)(λ2 − x)
        let [l1, l2] = quadratic_roots(den[2], den[1], den[0]);
        let r1 = r.get(1).copied().unwrap_or_default();
        return Ok(acc + cauchy_divdiff(law, r[0], r1, l1, l2)? / den[2]);
    }
    let roots = poly_roots(&den);
    let scale = roots.iter().map(|x| x.norm()).fold(1.0, f64::max);
    let clustered = roots
        .iter()
        .enumerate()
        .any(|(i, a)| roots[i + 1..].iter().any(|b| (a - b).norm() < 1e-6 * scale));
    if clustered {
        let v = law.quadrature(|x| {
            let xc = Complex64::new(x, 0.0);
            poly_eval(&r, xc) / poly_eval(&den, xc)
        })?;
        return Ok(acc + v);
    }
    let dd = poly_deriv(&den);
    for l in roots {
        acc -= poly_eval(&r, l) * law.cauchy(l)? / poly_eval(&dd, l);
    }
    Ok(acc)
}

/// `z − x − s f(x)^2`
fn perturbed_denominator(f: &PolyFn, z: Complex64, s: Complex64) -> Vec<Complex64> {
    let mut d: Vec<Complex64> = f.square().iter().map(|c| -s * c).collect();
    if d.len() < 2 {
        d.resize(2, Complex64::zero());
    }
    d[0] += z;
    d[1] -= 1.0;
    d
}

/// `∫ f(x)^2 / (z − x − s f(x)^2) dμ(x)`.
fn t_integral(law: &PreparedLaw, f: &PolyFn, z: Complex64, s: Complex64) -> Result<Complex64, XformError> {
    let f2 = f.square();
    let den = perturbed_denominator(f, z, s);
    // Near s = 0 one root of the denominator escapes to infinity and the
    // partial fraction terms cancel; integrate directly while z keeps away
    // from the support.
    let fmax = law.radius.max(1.0).powi(2 * f.degree() as i32) * f2.iter().map(|c| c.norm()).sum::<f64>();
    if !law.is_discrete() && s.norm() * fmax < 1e-4 && law.support_distance(z) > 1e-2 && law.support.is_some() {
        return law.quadrature(|x| {
            let xc = Complex64::new(x, 0.0);
            poly_eval(&f2, xc) / poly_eval(&den, xc)
        });
    }
    integrate_rational(law, &f2, &den)
}

/// `η̃_T(s)` for `T = f(X)(z − X)^{-1} f(X)`: with
/// `ψ_T(s) = ∫ s f²/(z − x − s f²) dμ`, `η̃_T = ψ_T/(s(1 + ψ_T))`.
pub fn eta_tilde_resolvent(law: &PreparedLaw, f: &PolyFn, z: Complex64, s: Complex64) -> Result<Complex64, XformError> {
    if z.im <= 0.0 {
        return Err(XformError::Domain(format!("Im z = {} must be positive", z.im)));
    }
    let i = t_integral(law, f, z, s)?;
    Ok(i / (1.0 + s * i))
}

/// `ψ_T(s)` as above.
pub fn psi_resolvent(law: &PreparedLaw, f: &PolyFn, z: Complex64, s: Complex64) -> Result<Complex64, XformError> {
    Ok(s * t_integral(law, f, z, s)?)
}

/// `G_W(z) = ∫ dμ(x) / (z − x − δ f(x)^2)`.
pub fn perturbed_cauchy(law: &PreparedLaw, f: &PolyFn, delta: Complex64, z: Complex64) -> Result<Complex64, XformError> {
    let den = perturbed_denominator(f, z, delta);
    integrate_rational(law, &[Complex64::new(1.0, 0.0)], &den)
}

/// `φ(T^k) = ∫ f^{2k}/(z − x)^k dμ` for `k = 0..=n`, exact for discrete laws
/// and by quadrature otherwise.
pub fn t_moments(law: &PreparedLaw, f: &PolyFn, z: Complex64, n: usize) -> Result<Vec<Complex64>, XformError> {
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let v = law.quadrature(|x| {
            let xc = Complex64::new(x, 0.0);
            (f.eval(xc) * f.eval(xc) / (z - xc)).powu(k as u32)
        })?;
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use crate::xforms::Law;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn divdiff_examples() {
        let p = Law::zero().prepare().unwrap();
        let v = cauchy_divdiff(&p, c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)).unwrap();
        assert!((v - 1.0 / 6.0).norm() < 1e-15);
        let s = Law::semicircle().prepare().unwrap();
        let (a, b) = (c(0.5, 1.0), c(-2.0, 0.0));
        let l = c(0.7, 0.4);
        let near = cauchy_divdiff(&s, a, b, l, l + 1e-9).unwrap();
        let h = 1e-6;
        let g = |t: Complex64| (a + b * t) * s.cauchy(t).unwrap();
        let fd = (g(l + h) - g(l - h)) / (2.0 * h);
        assert!((near + fd).norm() < 1e-8, "{near} vs {}", -fd);
    }

    #[test]
    fn divdiff_matches_quadrature() {
        for law in [Law::semicircle(), Law::arcsine()] {
            let p = law.prepare().unwrap();
            let (a, b, l1, l2) = (c(1.0, 0.5), c(0.3, 0.0), c(0.2, 0.8), c(-1.5, -0.3));
            let direct = p
                .quadrature(|x| (a + b * x) / ((l1 - x) * (l2 - x)))
                .unwrap();
            assert!((cauchy_divdiff(&p, a, b, l1, l2).unwrap() - direct).norm() < 1e-10);
        }
    }

    #[test]
    fn projection_eta() {
        let p = ratio(1, 4);
        let law = Law::projection(p.clone()).unwrap().prepare().unwrap();
        let f = PolyFn::identity();
        let pf = to_f64(&p);
        for (z, s) in [(c(0.3, 0.5), c(0.2, -0.1)), (c(2.0, 1.0), c(0.0, 0.0)), (c(-1.0, 0.1), c(-0.5, -0.5))] {
            let want = pf / (z - 1.0 - s * (1.0 - pf));
            assert!((eta_tilde_resolvent(&law, &f, z, s).unwrap() - want).norm() < 1e-14);
        }
    }

    #[test]
    fn f_one_eta() {
        for law in [Law::semicircle(), Law::arcsine(), Law::bernoulli()] {
            let p = law.prepare().unwrap();
            let f = PolyFn::one();
            let (z, s) = (c(0.4, 0.6), c(0.3, -0.2));
            let g = p.cauchy(z - s).unwrap();
            let want = g / (1.0 + s * g);
            assert!((eta_tilde_resolvent(&p, &f, z, s).unwrap() - want).norm() < 1e-13);
        }
    }

    #[test]
    fn eta_at_zero_is_first_moment_of_t() {
        let p = Law::semicircle().prepare().unwrap();
        let f = PolyFn::identity();
        let z = c(0.5, 2.0);
        let want = p.quadrature(|x| x * x / (z - x)).unwrap();
        assert!((eta_tilde_resolvent(&p, &f, z, c(0.0, 0.0)).unwrap() - want).norm() < 1e-12);
        // and continuity across the small-s switch
        let a = eta_tilde_resolvent(&p, &f, z, c(1e-6, -1e-6)).unwrap();
        let b = eta_tilde_resolvent(&p, &f, z, c(1e-3, -1e-3)).unwrap();
        assert!((a - want).norm() < 1e-5 && (b - want).norm() < 1e-2);
    }

    #[test]
    fn partial_fractions_against_quadrature() {
        let f = PolyFn::new(vec![ratio(1, 2), rat(-1), rat(1)]).unwrap();
        for law in [Law::semicircle(), Law::arcsine(), Law::Semicircle { mean: rat(1), variance: ratio(1, 2) }] {
            let p = law.prepare().unwrap();
            for (z, s) in [(c(0.3, 0.5), c(0.4, -0.3)), (c(-1.0, 0.2), c(-0.2, -0.05))] {
                let want = p
                    .quadrature(|x| {
                        let fx = f.eval(c(x, 0.0));
                        fx * fx / (z - x - s * fx * fx)
                    })
                    .unwrap();
                let got = t_integral(&p, &f, z, s).unwrap();
                assert!((got - want).norm() < 1e-10, "{got} vs {want}");
                let want = p.quadrature(|x| 1.0 / (z - x - s * f.eval(c(x, 0.0)).powu(2))).unwrap();
                assert!((perturbed_cauchy(&p, &f, s, z).unwrap() - want).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn perturbed_examples() {
        let s = Law::semicircle().prepare().unwrap();
        let z = c(0.2, 0.3);
        assert!((perturbed_cauchy(&s, &PolyFn::identity(), c(0.0, 0.0), z).unwrap() - s.cauchy(z).unwrap()).norm() < 1e-14);
        let p = Law::projection(ratio(1, 2)).unwrap().prepare().unwrap();
        let d = c(0.3, -0.4);
        let want = 0.5 / z + 0.5 / (z - 1.0 - d);
        assert!((perturbed_cauchy(&p, &PolyFn::identity(), d, z).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn polyfn_parsing() {
        assert_eq!(PolyFn::parse("0,1").unwrap(), PolyFn::identity());
        assert_eq!(PolyFn::parse("1, 0, 0").unwrap(), PolyFn::one());
        assert!(PolyFn::parse("0,0").is_err());
        assert!(PolyFn::parse("a").is_err());
        assert_eq!(PolyFn::parse("1/2,-3").unwrap().to_string(), "1/2,-3");
    }
}
