//! Power-series solutions of `P(x, z) = 0` by Newton lifting, started from
//! an integer-exponent branch `x = z^γ (η + …)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::newton::{param_var, BranchSpec, Eta};
use super::poly::{MPoly, Var};
use super::AlgError;
use crate::rational::binomial;

/// Truncated power series, coefficient `k` of `z^k`.
pub type Series = Vec<BigRational>;

pub fn series_mul(a: &[BigRational], b: &[BigRational], len: usize) -> Series {
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Reciprocal of a series with nonzero constant term.
pub fn series_inv(a: &[BigRational], len: usize) -> Option<Series> {
    let a0 = a.first()?;
    if a0.is_zero() {
        return None;
    }
    let inv0 = a0.recip();
    let mut out = vec![BigRational::zero(); len];
    if len == 0 {
        return Some(out);
    }
    out[0] = inv0.clone();
    for n in 1..len {
        let mut acc = BigRational::zero();
        for k in 1..=n.min(a.len() - 1) {
            acc += &a[k] * &out[n - k];
        }
        out[n] = -acc * &inv0;
    }
    Some(out)
}

fn series_add(a: &mut Series, b: &[BigRational]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

/// Horner evaluation of `Σ q_j u^j` with series coefficients.
fn eval_poly_series(q: &[Series], u: &[BigRational], len: usize) -> Series {
    let mut acc = vec![BigRational::zero(); len];
    for c in q.iter().rev() {
        acc = series_mul(&acc, u, len);
        series_add(&mut acc, c);
    }
    acc
}

fn deriv_coeffs(q: &[Series]) -> Vec<Series> {
    q.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| {
            let k = BigRational::from_integer(BigInt::from(j));
            c.iter().map(|x| x * &k).collect()
        })
        .collect()
}

/// Coefficients `c_0..c_n` of the unique power series `x(z)` with
/// `P(x(z), z) = 0` and leading term `η z^γ`.
pub fn series_solve(p: &MPoly, main: Var, seed: &BranchSpec, n: usize) -> Result<Series, AlgError> {
    let param = param_var(p, main)?;
    if !seed.gamma.is_integer() || seed.gamma.is_negative() {
        return Err(AlgError::Unsupported(format!(
            "series lifting needs a nonnegative integer exponent, got {}",
            seed.gamma
        )));
    }
    let eta = match &seed.eta {
        Eta::Rational(e) => e.clone(),
        Eta::Algebraic { .. } => {
            return Err(AlgError::Unsupported(
                "series lifting needs a rational leading coefficient".into(),
            ))
        }
    };
    if eta.is_zero() {
        return Err(AlgError::InvalidSeed("leading coefficient must be nonzero".into()));
    }
    let gamma = seed.gamma.to_integer().to_u32().expect("small exponent");
    let coeffs = p.coeffs(main);
    // Order in z of p_k(z) z^{γk}; β is the minimum over all k.
    let mut beta = u32::MAX;
    for (k, c) in coeffs.iter().enumerate() {
        if let Some(a) = c.min_degree(param) {
            beta = beta.min(a + gamma * k as u32);
        }
    }
    if n < gamma as usize {
        return Ok(vec![BigRational::zero(); n + 1]);
    }
    let len = n - gamma as usize + 1;
    // Q(u) = P(z^γ(η+u), z) / z^β = Σ_j Q_j(z) u^j.
    let deg = coeffs.len();
    let mut q: Vec<Series> = vec![vec![BigRational::zero(); len]; deg];
    for (k, c) in coeffs.iter().enumerate() {
        for (e, a) in c.terms() {
            let ord = (e[param.index()] + gamma * k as u32 - beta) as usize;
            if ord >= len {
                continue;
            }
            let mut eta_pow = BigRational::one();
            for j in (0..=k).rev() {
                // coefficient of u^j in (η+u)^k is C(k,j) η^{k-j}
                let b = BigRational::from_integer(binomial(k as u64, j as u64));
                q[j][ord] += a * &b * &eta_pow;
                eta_pow *= &eta;
            }
        }
    }
    if !q[0][0].is_zero() {
        return Err(AlgError::InvalidSeed(format!(
            "leading terms do not cancel for η = {eta}, γ = {gamma}"
        )));
    }
    let dq = deriv_coeffs(&q);
    if dq.is_empty() || dq[0][0].is_zero() {
        return Err(AlgError::SingularBranch(format!(
            "η = {eta} is a multiple root of the critical polynomial"
        )));
    }
    let mut u: Series = vec![BigRational::zero(); len];
    let mut prec = 1usize;
    while prec < len {
        prec = (2 * prec).min(len);
        let f = eval_poly_series(&q, &u[..prec], prec);
        let fp = eval_poly_series(&dq, &u[..prec], prec);
        let inv = series_inv(&fp, prec).ok_or_else(|| {
            AlgError::SingularBranch("derivative vanishes along the branch".into())
        })?;
        let step = series_mul(&f, &inv, prec);
        for i in 0..prec {
            u[i] -= &step[i];
        }
    }
    let mut out = vec![BigRational::zero(); n + 1];
    out[gamma as usize] = eta;
    for i in 1..len {
        out[gamma as usize + i] = u[i].clone();
    }
    Ok(out)
}

/// `z`-adic valuation of `P(x(z), z)` for a truncated series `x`, computed
/// through order `up_to`; returns `up_to + 1` when everything cancels.
pub fn residual_valuation(p: &MPoly, main: Var, x: &[BigRational], up_to: usize) -> Result<usize, AlgError> {
    let param = param_var(p, main)?;
    let len = up_to + 1;
    let mut acc = vec![BigRational::zero(); len];
    for c in p.coeffs(main).iter().rev() {
        acc = series_mul(&acc, x, len);
        for (e, a) in c.terms() {
            let k = e[param.index()] as usize;
            if k < len {
                acc[k] += a;
            }
        }
    }
    Ok(acc.iter().position(|c| !c.is_zero()).unwrap_or(len))
}
