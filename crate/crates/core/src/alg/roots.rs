//! Real-root isolation for univariate rational polynomials by Sturm
//! sequences and exact bisection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{MPoly, Var};
use super::AlgError;
use crate::rational::to_f64;

/// Dense coefficients, lowest degree first, no trailing zeros.
pub type UPoly = Vec<BigRational>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn eval(p: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn derivative(p: &[BigRational]) -> UPoly {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
        .collect()
}

/// Euclidean remainder over Q.
pub fn rem(a: &[BigRational], b: &[BigRational]) -> UPoly {
    let mut r: UPoly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let q = &r[r.len() - 1] / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[i + k] -= &q * bc;
        }
        r.pop();
        trim(&mut r);
    }
    r
}

pub fn gcd(a: &[BigRational], b: &[BigRational]) -> UPoly {
    let mut x: UPoly = a.to_vec();
    let mut y: UPoly = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &l;
        }
    }
    x
}

pub fn div_exact(a: &[BigRational], b: &[BigRational]) -> UPoly {
    let mut r: UPoly = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    if r.len() <= db {
        return Vec::new();
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &b[db];
        for (i, bc) in b.iter().enumerate() {
            r[i + k] -= &c * bc;
        }
        q[k] = c;
        r.pop();
    }
    q
}

/// `p / gcd(p, p')`.
pub fn squarefree_part(p: &[BigRational]) -> UPoly {
    let g = gcd(p, &derivative(p));
    if g.len() <= 1 {
        let mut out = p.to_vec();
        trim(&mut out);
        return out;
    }
    div_exact(p, &g)
}

pub fn sturm_sequence(p: &[BigRational]) -> Vec<UPoly> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r: UPoly = rem(&seq[n - 2], &seq[n - 1]).into_iter().map(|c| -c).collect();
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn sign_changes(seq: &[UPoly], x: &BigRational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in seq {
        let v = eval(p, x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Cauchy bound: every root satisfies |r| < bound.
pub fn root_bound(p: &[BigRational]) -> BigRational {
    let n = p.len() - 1;
    let lead = p[n].abs();
    let m = p[..n]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    m + BigRational::one()
}

/// A closed interval `[lo, hi]` containing exactly one real root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn midpoint(&self) -> f64 {
        to_f64(&((&self.lo + &self.hi) / BigRational::from_integer(2.into())))
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Isolating intervals for the distinct real roots of a univariate
/// polynomial, in increasing order, each narrower than `precision`.
pub fn isolate_real_roots(p: &MPoly, precision: &BigRational) -> Result<Vec<RootInterval>, AlgError> {
    let vars = p.vars();
    if vars.len() > 1 {
        return Err(AlgError::Degenerate(format!(
            "root isolation needs a univariate polynomial, got variables {vars:?}"
        )));
    }
    let v = vars.first().copied().unwrap_or(Var::X);
    let c = p.univariate_coeffs(v).expect("univariate");
    isolate_upoly(&c, precision)
}

pub fn isolate_upoly(p: &[BigRational], precision: &BigRational) -> Result<Vec<RootInterval>, AlgError> {
    if !precision.is_positive() {
        return Err(AlgError::Degenerate("precision must be positive".into()));
    }
    let mut q: UPoly = p.to_vec();
    trim(&mut q);
    if q.is_empty() {
        return Err(AlgError::Degenerate("zero polynomial has no isolated roots".into()));
    }
    if q.len() == 1 {
        return Ok(Vec::new());
    }
    let q = squarefree_part(&q);
    let seq = sturm_sequence(&q);
    let b = root_bound(&q);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b.clone())];
    let two = BigRational::from_integer(2.into());
    // Roots counted in (lo, hi]; -b is never a root.
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(refine(&q, lo, hi, precision));
            continue;
        }
        let mid = (&lo + &hi) / &two;
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Bisection on a half-open interval `(lo, hi]` holding one root.
fn refine(p: &[BigRational], mut lo: BigRational, mut hi: BigRational, precision: &BigRational) -> RootInterval {
    let two = BigRational::from_integer(2.into());
    let fhi = eval(p, &hi);
    if fhi.is_zero() {
        return RootInterval { lo: hi.clone(), hi };
    }
    let shi = fhi.is_positive();
    while &hi - &lo >= *precision {
        let mid = (&lo + &hi) / &two;
        let fm = eval(p, &mid);
        if fm.is_zero() {
            return RootInterval { lo: mid.clone(), hi: mid };
        }
        if fm.is_positive() == shi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RootInterval { lo, hi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ratio, rat};

    fn p(s: &str) -> MPoly {
        MPoly::parse(s).unwrap()
    }

    #[test]
    fn sqrt_two() {
        let r = isolate_real_roots(&p("x^2 - 2"), &ratio(1, 1_000_000_000_000)).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].midpoint() + 2f64.sqrt()).abs() < 1e-11);
        assert!((r[1].midpoint() - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn no_real_roots() {
        assert!(isolate_real_roots(&p("x^2 + 1"), &ratio(1, 100)).unwrap().is_empty());
    }

    #[test]
    fn exact_and_repeated_roots() {
        let r = isolate_real_roots(&p("(x - 1)^2*(x + 1/2)"), &ratio(1, 1000)).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].lo <= ratio(-1, 2) && ratio(-1, 2) <= r[0].hi);
        assert!(r[1].lo <= rat(1) && rat(1) <= r[1].hi);
    }

    #[test]
    fn close_roots_are_separated() {
        let r = isolate_real_roots(&p("(1000x - 1)*(1000x - 2)*(x - 5)"), &ratio(1, 1_000_000)).unwrap();
        assert_eq!(r.len(), 3);
        assert!((r[0].midpoint() - 0.001).abs() < 1e-6);
        assert!((r[1].midpoint() - 0.002).abs() < 1e-6);
    }

    #[test]
    fn gcd_and_division() {
        let a: UPoly = [-1, 0, 1].iter().map(|&k| rat(k)).collect();
        let b: UPoly = [1, 2, 1].iter().map(|&k| rat(k)).collect();
        assert_eq!(gcd(&a, &b), vec![rat(1), rat(1)]);
        assert_eq!(div_exact(&a, &[rat(1), rat(1)]), vec![rat(-1), rat(1)]);
    }
}
