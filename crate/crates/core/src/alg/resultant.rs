//! Resultants with respect to one variable, coefficients in the remaining
//! ones. Two independent algorithms: the Sylvester determinant by
//! fraction-free (Bareiss) elimination, and the subresultant pseudo-remainder
//! sequence.

use num_rational::BigRational;

use super::poly::{MPoly, Var};
use super::AlgError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResultantMethod {
    Sylvester,
    Prs,
}

pub fn resultant(p: &MPoly, q: &MPoly, v: Var, method: ResultantMethod) -> Result<MPoly, AlgError> {
    if p.is_zero() || q.is_zero() {
        return Err(AlgError::Degenerate(format!(
            "resultant in {v} of a zero polynomial"
        )));
    }
    let a = p.coeffs(v);
    let b = q.coeffs(v);
    Ok(match method {
        ResultantMethod::Sylvester => sylvester_det(&a, &b),
        ResultantMethod::Prs => subresultant(a, b),
    })
}

/// Convenience wrapper using the subresultant sequence.
pub fn res(p: &MPoly, q: &MPoly, v: Var) -> Result<MPoly, AlgError> {
    resultant(p, q, v, ResultantMethod::Prs)
}

fn deg(c: &[MPoly]) -> usize {
    c.len() - 1
}

/// Sylvester matrix, rows of `a` (high to low) shifted `n` times, then rows
/// of `b` shifted `m` times.
pub fn sylvester_matrix(a: &[MPoly], b: &[MPoly]) -> Vec<Vec<MPoly>> {
    let m = deg(a);
    let n = deg(b);
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![MPoly::zero(); size];
        for k in 0..=m {
            row[i + k] = a[m - k].clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![MPoly::zero(); size];
        for k in 0..=n {
            row[i + k] = b[n - k].clone();
        }
        rows.push(row);
    }
    rows
}

fn sylvester_det(a: &[MPoly], b: &[MPoly]) -> MPoly {
    let (m, n) = (deg(a), deg(b));
    if m == 0 {
        return a[0].pow(n as u32);
    }
    if n == 0 {
        return b[0].pow(m as u32);
    }
    bareiss_det(sylvester_matrix(a, b))
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss_det(mut mat: Vec<Vec<MPoly>>) -> MPoly {
    let size = mat.len();
    if size == 0 {
        return MPoly::one();
    }
    let mut negate = false;
    let mut prev = MPoly::one();
    for k in 0..size - 1 {
        if mat[k][k].is_zero() {
            match (k + 1..size).find(|&i| !mat[i][k].is_zero()) {
                Some(i) => {
                    mat.swap(i, k);
                    negate = !negate;
                }
                None => return MPoly::zero(),
            }
        }
        let (top, bottom) = mat.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..size {
                let mut val = pivot * &row[j];
                if !lead.is_zero() && !pivot_row[j].is_zero() {
                    val = &val - &(&lead * &pivot_row[j]);
                }
                row[j] = if prev.is_constant() {
                    val.scale(&prev.constant_term().recip())
                } else {
                    val.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
            row[k] = MPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    let d = mat[size - 1][size - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

fn trim(c: &mut Vec<MPoly>) {
    while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
}

fn is_zero_poly(c: &[MPoly]) -> bool {
    c.iter().all(|x| x.is_zero())
}

fn lc(c: &[MPoly]) -> &MPoly {
    c.last().expect("nonempty")
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) a = q b + r`.
pub fn pseudo_rem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = deg(b);
    let mut r: Vec<MPoly> = a.to_vec();
    trim(&mut r);
    if r.len() <= db || is_zero_poly(&r) {
        return r;
    }
    let delta = deg(&r) - db;
    let lb = lc(b).clone();
    let mut steps = 0u32;
    while !is_zero_poly(&r) && r.len() > db {
        let dr = deg(&r);
        let lr = lc(&r).clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &lb;
            }
        }
        for (k, bc) in b.iter().enumerate() {
            if !bc.is_zero() {
                r[k + shift] = &r[k + shift] - &(&lr * bc);
            }
        }
        r.pop();
        trim(&mut r);
        steps += 1;
    }
    let missing = delta as u32 + 1 - steps;
    if missing > 0 {
        let f = lb.pow(missing);
        for c in r.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &f;
            }
        }
    }
    r
}

fn rational_content(c: &[MPoly]) -> BigRational {
    MPoly::from_coeffs(Var::X, c).rational_content()
}

fn scale_all(c: &mut [MPoly], r: &BigRational) {
    for x in c.iter_mut() {
        *x = x.scale(r);
    }
}

fn div_all(c: &mut [MPoly], d: &MPoly) {
    if d.is_constant() {
        let r = d.constant_term().recip();
        scale_all(c, &r);
        return;
    }
    for x in c.iter_mut() {
        if !x.is_zero() {
            *x = x.div_exact(d).expect("subresultant division is exact");
        }
    }
}

fn subresultant(mut a: Vec<MPoly>, mut b: Vec<MPoly>) -> MPoly {
    trim(&mut a);
    trim(&mut b);
    let ca = rational_content(&a);
    let cb = rational_content(&b);
    scale_all(&mut a, &ca.recip());
    scale_all(&mut b, &cb.recip());
    let mut s_neg = false;
    let t = ca.pow(deg(&b) as i32) * cb.pow(deg(&a) as i32);
    if deg(&a) < deg(&b) {
        if deg(&a) % 2 == 1 && deg(&b) % 2 == 1 {
            s_neg = !s_neg;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if deg(&b) == 0 {
        let r = lc(&b).pow(deg(&a) as u32).scale(&t);
        return if s_neg { -r } else { r };
    }
    let mut g = MPoly::one();
    let mut h = MPoly::one();
    loop {
        let da = deg(&a);
        let db = deg(&b);
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            s_neg = !s_neg;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        let mut nb = r;
        trim(&mut nb);
        if is_zero_poly(&nb) {
            return MPoly::zero();
        }
        let divisor = &g * &h.pow(delta);
        div_all(&mut nb, &divisor);
        b = nb;
        g = lc(&a).clone();
        h = if delta == 0 {
            h
        } else {
            let num = g.pow(delta);
            let den = h.pow(delta - 1);
            if den.is_constant() {
                num.scale(&den.constant_term().recip())
            } else {
                num.div_exact(&den).expect("exact")
            }
        };
        if deg(&b) == 0 {
            break;
        }
    }
    let da = deg(&a) as u32;
    let num = lc(&b).pow(da);
    let den = h.pow(da - 1);
    let hh = if den.is_constant() {
        num.scale(&den.constant_term().recip())
    } else {
        num.div_exact(&den).expect("exact")
    };
    let out = hh.scale(&t);
    if s_neg {
        -out
    } else {
        out
    }
}

/// Determinant of a square matrix over `Q[x, …]`.
pub fn det(mat: Vec<Vec<MPoly>>) -> MPoly {
    bareiss_det(mat)
}

/// Whether `deg_v(p) ≥ 1`; resultants in `v` of constants are trivial.
pub fn depends_on(p: &MPoly, v: Var) -> bool {
    p.deg(v) > 0 && !p.leading_coeff(v).is_zero()
}
