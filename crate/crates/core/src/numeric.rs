//! Floating-point helpers shared by `xforms` and `rmt`: branch-aware square
//! roots, complex polynomial roots, Gauss–Legendre rules and a CDF distance.

use std::sync::{Arc, Mutex, OnceLock};
use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `√(w − a)·√(w + a)` with principal roots: analytic off `[−a, a]` and
/// asymptotic to `w` at infinity.
pub fn sqrt_pair(w: Complex64, a: f64) -> Complex64 {
    (w - a).sqrt() * (w + a).sqrt()
}

/// Horner evaluation, `c[k]` the coefficient of `x^k`.
pub fn poly_eval(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

pub fn poly_deriv(c: &[Complex64]) -> Vec<Complex64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect()
}

pub fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Drops trailing coefficients that vanish relative to the largest one.
pub fn poly_trim(c: &[Complex64], rel: f64) -> Vec<Complex64> {
    let scale = c.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut v = c.to_vec();
    while let Some(last) = v.last() {
        if last.norm() <= rel * scale {
            v.pop();
        } else {
            break;
        }
    }
    v
}

/// All roots of `c[0] + c[1] x + … + c[d] x^d` (`c[d] ≠ 0`): eigenvalues of
/// the companion matrix, then two Newton steps on the original polynomial.
pub fn poly_roots(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len().saturating_sub(1);
    match d {
        0 => return Vec::new(),
        1 => return vec![-c[0] / c[1]],
        2 => return quadratic_roots(c[2], c[1], c[0]).to_vec(),
        _ => {}
    }
    let lead = c[d];
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let ev = m.schur().eigenvalues().expect("complex Schur form is triangular");
    let dc = poly_deriv(c);
    ev.iter()
        .map(|&r| {
            let mut x = r;
            for _ in 0..2 {
                let dp = poly_eval(&dc, x);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = poly_eval(c, x) / dp;
                if !step.is_finite() {
                    break;
                }
                x -= step;
            }
            x
        })
        .collect()
}

/// Roots of `a x^2 + b x + c` without cancellation.
pub fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - 4.0 * a * c).sqrt();
    // pick the sign that avoids cancellation in −b ∓ √disc
    let q = if (b.conj() * disc).re >= 0.0 {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q / a, c / q]
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`, by Newton iteration on
/// `P_n` from the Chebyshev-like initial guesses.
pub fn gauss_legendre(n: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(r) = cache.lock().expect("cache lock").get(&n) {
        return r.clone();
    }
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    let r = Arc::new((x, w));
    cache.lock().expect("cache lock").insert(n, r.clone());
    r
}

/// `∫_a^b g` with `n`-point Gauss–Legendre.
pub fn integrate<F: FnMut(f64) -> Complex64>(mut g: F, a: f64, b: f64, n: usize) -> Complex64 {
    let rule = gauss_legendre(n);
    let (h, c) = ((b - a) / 2.0, (b + a) / 2.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in rule.0.iter().zip(&rule.1) {
        acc += g(c + h * x) * *w;
    }
    acc * h
}

/// Trapezoid rule on a (possibly nonuniform) grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Cumulative trapezoid integral, starting at 0.
pub fn cumulative_trapezoid(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..x.len() {
        acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
        out.push(acc);
    }
    out
}

/// Parses `a+bi`, `a-bi`, `bi`, `a` (also with `j`).
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    let body = t.strip_suffix('i').or_else(|| t.strip_suffix('j'));
    let Some(body) = body else {
        return t.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let imag = |s: &str| -> Option<f64> {
        match s {
            "" | "+" => Some(1.0),
            "-" => Some(-1.0),
            _ => s.parse().ok(),
        }
    };
    match split {
        Some(k) => Some(Complex64::new(body[..k].parse().ok()?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_pair_branch() {
        for z in [c(3.0, 0.1), c(-3.0, 0.1), c(0.5, 1e-9), c(-0.5, -2.0), c(-5.0, 0.0)] {
            let g = (z - sqrt_pair(z, 2.0)) / 2.0;
            assert!((g * g - z * g + 1.0).norm() < 1e-12);
            if z.im != 0.0 {
                assert!(g.im * z.im < 0.0, "{z}");
            }
        }
        assert!((sqrt_pair(c(-5.0, 0.0), 2.0) - c(-21f64.sqrt(), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn roots_of_known_polynomials() {
        // (x − 1)(x + 2)(x − i)(x + 3i)
        let p = poly_mul(
            &poly_mul(&[c(-1.0, 0.0), c(1.0, 0.0)], &[c(2.0, 0.0), c(1.0, 0.0)]),
            &poly_mul(&[c(0.0, -1.0), c(1.0, 0.0)], &[c(0.0, 3.0), c(1.0, 0.0)]),
        );
        let r = poly_roots(&p);
        for want in [c(1.0, 0.0), c(-2.0, 0.0), c(0.0, 1.0), c(0.0, -3.0)] {
            assert!(r.iter().any(|x| (x - want).norm() < 1e-12), "{want} in {r:?}");
        }
        let q = quadratic_roots(c(1e-12, 0.0), c(1.0, 0.0), c(-1.0, 0.0));
        assert!(q.iter().any(|x| (x - 1.0).norm() < 1e-10));
    }

    #[test]
    fn gauss_legendre_is_exact_on_polynomials() {
        let r = gauss_legendre(7);
        let s: f64 = r.1.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m12 = integrate(|x| c(x.powi(12), 0.0), -1.0, 1.0, 7);
        assert!((m12.re - 2.0 / 13.0).abs() < 1e-14);
        let big = gauss_legendre(512);
        assert!((big.1.iter().sum::<f64>() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("3+0.001i"), Some(c(3.0, 0.001)));
        assert_eq!(parse_complex("-1.5-2i"), Some(c(-1.5, -2.0)));
        assert_eq!(parse_complex("2i"), Some(c(0.0, 2.0)));
        assert_eq!(parse_complex("-i"), Some(c(0.0, -1.0)));
        assert_eq!(parse_complex("1e-3+1e-2i"), Some(c(1e-3, 1e-2)));
        assert_eq!(parse_complex("4"), Some(c(4.0, 0.0)));
        assert_eq!(parse_complex("x"), None);
    }

    #[test]
    fn trapezoid_rules() {
        let x: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
        let y: Vec<f64> = x.iter().map(|t| 2.0 * t).collect();
        assert!((trapezoid(&x, &y) - 1.0).abs() < 1e-12);
        assert!((cumulative_trapezoid(&x, &y)[50] - 0.25).abs() < 1e-12);
    }
}
