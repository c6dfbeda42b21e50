//! Series expansions: the alternating Boolean cumulant series for the
//! subordination functions, and formal R- and Σ-transforms.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::law::PreparedLaw;
use super::resolvent::{t_moments, PolyFn};
use super::XformError;
use crate::alg::series::series_mul;
use crate::combinat::{
    alternating_boolean, boolean_cumulants_recursive, cumulants_from_moments, CumulantData, CumulantKind, PARTITION_CAP,
};
use crate::rational::to_f64;

#[derive(Debug, Clone)]
pub struct DeltaSeries {
    /// Partial sum.
    pub value: Complex64,
    /// `β_{2n+1}(Y, T, …, T, Y)`, `n = 0..=N`.
    pub terms: Vec<Complex64>,
    /// The last terms grew instead of decaying.
    pub diverging: bool,
}

fn free_cumulants(law: &PreparedLaw, n: usize) -> Result<Vec<BigRational>, XformError> {
    if n > PARTITION_CAP {
        return Err(XformError::Unsupported(format!("series order needs cumulants beyond {PARTITION_CAP}")));
    }
    let m = CumulantData::new(CumulantKind::Moment, law.moments[1..=n].to_vec());
    Ok(cumulants_from_moments(&m, CumulantKind::Free, n)?.values)
}

fn growing(terms: &[Complex64]) -> bool {
    let n = terms.len();
    n >= 3 && terms[n - 1].norm() > terms[n - 2].norm() && terms[n - 2].norm() > terms[n - 3].norm()
}

/// `δ(z) ≈ Σ_{n ≤ N} β_{2n+1}(Y, T, Y, …, T, Y)`, `T = f(X)(z − X)^{-1} f(X)`.
pub fn delta_series(x: &PreparedLaw, y: &PreparedLaw, f: &PolyFn, z: Complex64, n: usize) -> Result<DeltaSeries, XformError> {
    let ky: Vec<Complex64> = free_cumulants(y, n + 1)?.iter().map(|r| Complex64::new(to_f64(r), 0.0)).collect();
    let mt = t_moments(x, f, z, n)?;
    let terms = alternating_boolean(&mt, &ky, n)?;
    Ok(DeltaSeries {
        value: terms.iter().sum(),
        diverging: growing(&terms),
        terms,
    })
}

/// Exact coefficients `β_{2n+1}(Y, X, …, X, Y)`, `n = 0..=N`, of the
/// multiplicative subordination function `F(w) = Σ β_{2n+1} w^{n+1}`.
pub fn multiplicative_coefficients(x: &PreparedLaw, y: &PreparedLaw, n: usize) -> Result<Vec<BigRational>, XformError> {
    let ky = free_cumulants(y, n + 1)?;
    Ok(alternating_boolean(&x.moments, &ky, n)?)
}

/// Partial sum of `F(w)`.
pub fn multiplicative_series(x: &PreparedLaw, y: &PreparedLaw, w: Complex64, n: usize) -> Result<DeltaSeries, XformError> {
    let terms: Vec<Complex64> = multiplicative_coefficients(x, y, n)?
        .iter()
        .enumerate()
        .map(|(k, b)| to_f64(b) * w.powu(k as u32 + 1))
        .collect();
    Ok(DeltaSeries {
        value: terms.iter().sum(),
        diverging: growing(&terms),
        terms,
    })
}

/// Coefficients of `R(z) = Σ κ_{n+1} z^n` from moments `m_0..m_N`.
pub fn r_series(moments: &[BigRational], n: usize) -> Result<Vec<BigRational>, XformError> {
    if moments.len() <= n {
        return Err(XformError::Unsupported(format!("need moments up to order {n}")));
    }
    let m = CumulantData::new(CumulantKind::Moment, moments[1..=n].to_vec());
    Ok(cumulants_from_moments(&m, CumulantKind::Free, n)?.values)
}

/// Coefficients `Σ_0..Σ_{N−1}` of `Σ(z) = η^{-1}(z)/z` from `m_0..m_N`.
pub fn sigma_series(moments: &[BigRational], n: usize) -> Result<Vec<BigRational>, XformError> {
    if moments.len() <= n || n == 0 {
        return Err(XformError::Unsupported(format!("need moments up to order {n}")));
    }
    let beta = boolean_cumulants_recursive(&moments[..=n]);
    if beta[0].is_zero() {
        return Err(XformError::Unsupported("Σ-transform needs a nonzero first moment".into()));
    }
    // reversion of η(u) = Σ β_k u^k, solved order by order
    let len = n + 1;
    let mut u = vec![BigRational::zero(); len];
    u[1] = BigRational::one() / &beta[0];
    for k in 2..len {
        let mut eta = vec![BigRational::zero(); len];
        let mut pw = u.clone();
        for b in &beta {
            for (e, p) in eta.iter_mut().zip(&pw) {
                *e += b * p;
            }
            pw = series_mul(&pw, &u, len);
        }
        u[k] = -&eta[k] / &beta[0];
    }
    Ok(u[1..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{free_mixed_moment, Letter, Operands};
    use crate::rational::{rat, ratio};
    use crate::xforms::{solve_delta, Law, SolveOptions};

    #[test]
    fn bernoulli_delta_series() {
        let b = Law::bernoulli().prepare().unwrap();
        let z = Complex64::new(4.0, 0.0);
        let s0 = delta_series(&b, &b, &PolyFn::one(), z, 0).unwrap();
        assert_eq!(s0.terms.len(), 1);
        assert!(s0.value.norm() < 1e-15);
        let s = delta_series(&b, &b, &PolyFn::one(), z, 8).unwrap();
        let want = (4.0 - 12f64.sqrt()) / 2.0;
        assert!((s.value - want).norm() < 1e-4, "{} vs {want}", s.value);
        assert!(!s.diverging);
    }

    #[test]
    fn delta_series_approaches_solver() {
        let x = Law::semicircle().prepare().unwrap();
        let y = Law::Semicircle { mean: ratio(1, 2), variance: ratio(1, 4) }.prepare().unwrap();
        let f = PolyFn::identity();
        let z = Complex64::new(0.0, 10.0);
        let st = solve_delta(&x, &y, &f, z, &SolveOptions::default()).unwrap();
        let mut last = f64::INFINITY;
        for n in [1, 3, 5, 7, 9, 11] {
            let err = (delta_series(&x, &y, &f, z, n).unwrap().value - st.delta).norm();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-9, "{last}");
    }

    #[test]
    fn multiplicative_series_matches_fixed_point() {
        let x = Law::discrete(vec![(ratio(1, 2), ratio(1, 2)), (rat(1), ratio(1, 2))]).unwrap().prepare().unwrap();
        let y = Law::discrete(vec![(ratio(1, 4), ratio(1, 3)), (ratio(3, 2), ratio(2, 3))]).unwrap().prepare().unwrap();
        let w = Complex64::new(0.05, 0.0);
        let s = multiplicative_series(&x, &y, w, 10).unwrap();
        // F(w) = w η̃_Y(w η̃_X(F(w))) by direct iteration (contractive at small w)
        let mut fw = Complex64::new(0.0, 0.0);
        for _ in 0..200 {
            fw = w * y.eta_tilde(w * x.eta_tilde(fw).unwrap()).unwrap();
        }
        assert!((s.value - fw).norm() < 1e-8, "{} vs {fw}", s.value);
        assert_eq!(multiplicative_coefficients(&x, &y, 0).unwrap()[0], y.moments[1]);
    }

    #[test]
    fn r_transforms() {
        let s = Law::semicircle().moments(6).unwrap();
        assert_eq!(r_series(&s, 6).unwrap(), vec![rat(0), rat(1), rat(0), rat(0), rat(0), rat(0)]);
        let a = Law::point(ratio(5, 3)).moments(4).unwrap();
        assert_eq!(r_series(&a, 4).unwrap(), vec![ratio(5, 3), rat(0), rat(0), rat(0)]);
    }

    #[test]
    fn sigma_is_multiplicative() {
        let kx = vec![ratio(1, 2), ratio(1, 4), ratio(-1, 8), rat(0), ratio(1, 16), rat(0)];
        let ky = vec![rat(2), rat(1), ratio(1, 3), ratio(-1, 2), rat(0), rat(1)];
        let ops = Operands::new(kx.clone(), ky.clone());
        let mx = crate::combinat::free_moments_recursive(&kx, 6).unwrap();
        let my = crate::combinat::free_moments_recursive(&ky, 6).unwrap();
        let mut mxy = vec![rat(1)];
        for k in 1..=6 {
            let word: Vec<Letter> = (0..k).flat_map(|_| [Letter::X, Letter::Y]).collect();
            mxy.push(free_mixed_moment(&word, &ops).unwrap());
        }
        let sx = sigma_series(&mx, 6).unwrap();
        let sy = sigma_series(&my, 6).unwrap();
        let sxy = sigma_series(&mxy, 6).unwrap();
        assert_eq!(series_mul(&sx, &sy, 6), sxy);
        assert!(sigma_series(&Law::semicircle().moments(4).unwrap(), 4).is_err());
    }
}
