//! Multivariate gcd, squarefree decomposition and factor bookkeeping.
//!
//! There is deliberately no irreducible factorization here: squarefree
//! parts are split further only by exact division against supplied
//! candidate factors.

use num_rational::BigRational;
use num_traits::One;

use super::poly::{MPoly, Var};
use super::resultant::pseudo_rem;

fn main_var(a: &MPoly, b: &MPoly) -> Option<Var> {
    Var::ALL.iter().copied().find(|&v| a.uses(v) || b.uses(v))
}

fn normalize(p: MPoly) -> MPoly {
    p.primitive_integer()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `v`.
pub fn content(p: &MPoly, v: Var) -> MPoly {
    let mut g = MPoly::zero();
    for c in p.coeffs(v) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return MPoly::one();
        }
    }
    if g.is_zero() {
        MPoly::one()
    } else {
        g
    }
}

/// Primitive part in `v`, normalized to an integer polynomial.
pub fn primitive_part(p: &MPoly, v: Var) -> MPoly {
    let c = content(p, v);
    normalize(p.div_exact(&c).expect("content divides"))
}

/// Greatest common divisor, normalized to a primitive integer polynomial with
/// positive lex-leading coefficient (zero only if both inputs are zero).
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return normalize(b.clone());
    }
    if b.is_zero() {
        return normalize(a.clone());
    }
    let v = match main_var(a, b) {
        Some(v) => v,
        None => return MPoly::one(),
    };
    if !a.uses(v) {
        return gcd(a, &content(b, v));
    }
    if !b.uses(v) {
        return gcd(&content(a, v), b);
    }
    // Cheap monomial gcd first.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mut m = [0u32; super::poly::NVARS];
    for i in 0..m.len() {
        m[i] = ma[i].min(mb[i]);
    }
    let a = a.div_monomial(&ma).expect("monomial content");
    let b = b.div_monomial(&mb).expect("monomial content");
    let mono = MPoly::monomial(BigRational::one(), m);
    if !a.uses(v) || !b.uses(v) {
        return normalize(&gcd(&a, &b) * &mono);
    }
    let ca = content(&a, v);
    let cb = content(&b, v);
    let c = gcd(&ca, &cb);
    let mut r0 = normalize(a.div_exact(&ca).expect("content"));
    let mut r1 = normalize(b.div_exact(&cb).expect("content"));
    if r0.deg(v) < r1.deg(v) {
        std::mem::swap(&mut r0, &mut r1);
    }
    let g = loop {
        let r = MPoly::from_coeffs(v, &pseudo_rem(&r0.coeffs(v), &r1.coeffs(v)));
        if r.is_zero() {
            break r1;
        }
        if !r.uses(v) {
            break MPoly::one();
        }
        r0 = r1;
        r1 = primitive_part(&r, v);
    };
    normalize(&(&c * &primitive_part(&g, v)) * &mono)
}

/// Result of [`strip_factors`]: `P = unit · Π f^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct Stripped {
    /// Rational constant times a monomial.
    pub unit: MPoly,
    pub factors: Vec<(MPoly, u32)>,
}

impl Stripped {
    pub fn product(&self) -> MPoly {
        let mut acc = self.unit.clone();
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    pub fn factor_list(&self) -> Vec<MPoly> {
        self.factors.iter().map(|(f, _)| f.clone()).collect()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.factors.iter().map(|(_, m)| *m).collect()
    }

    /// Splits each factor further by exact division against `candidates`.
    /// Candidates are tried in order, each as often as it divides.
    pub fn refine(&self, candidates: &[MPoly]) -> Stripped {
        let mut out = Vec::new();
        let mut unit = self.unit.clone();
        for (f, m) in &self.factors {
            let mut rest = f.clone();
            for c in candidates {
                if c.is_constant() || rest.is_constant() {
                    continue;
                }
                let cn = normalize(c.clone());
                while let Some(q) = rest.div_exact(&cn) {
                    push_factor(&mut out, cn.clone(), *m);
                    rest = q;
                    if rest.is_constant() {
                        break;
                    }
                }
            }
            if rest.is_constant() {
                unit = unit.scale(&rest.constant_term().pow(*m as i32));
            } else {
                let rn = normalize(rest.clone());
                let k = rest.scalar_ratio(&rn).expect("normalization is a scalar");
                unit = unit.scale(&k.pow(*m as i32));
                push_factor(&mut out, rn, *m);
            }
        }
        Stripped { unit, factors: out }
    }
}

fn push_factor(list: &mut Vec<(MPoly, u32)>, f: MPoly, m: u32) {
    let f = normalize(f);
    if let Some(entry) = list.iter_mut().find(|(g, _)| *g == f) {
        entry.1 += m;
    } else {
        list.push((f, m));
    }
}

/// Squarefree decomposition of a polynomial primitive in `v` (Yun).
fn yun(p: &MPoly, v: Var) -> Vec<(MPoly, u32)> {
    let mut out = Vec::new();
    if !p.uses(v) {
        return out;
    }
    let dp = p.derivative(v);
    let a0 = gcd(p, &dp);
    let mut b = p.div_exact(&a0).expect("gcd divides");
    let c = dp.div_exact(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative(v);
    let mut i = 1;
    while b.uses(v) {
        let a = gcd(&b, &d);
        let nb = b.div_exact(&a).expect("gcd divides");
        let nc = d.div_exact(&a).expect("gcd divides");
        if a.uses(v) {
            out.push((normalize(a), i));
        }
        d = &nc - &nb.derivative(v);
        b = nb;
        i += 1;
    }
    out
}

fn sqf_recursive(p: &MPoly, out: &mut Vec<(MPoly, u32)>) {
    if p.is_constant() {
        return;
    }
    let v = p.vars()[0];
    let c = content(p, v);
    let pp = p.div_exact(&c).expect("content divides");
    for (f, m) in yun(&pp, v) {
        push_factor(out, f, m);
    }
    sqf_recursive(&c, out);
}

/// Removes monomial and rational content, then splits the rest into
/// squarefree parts with multiplicities (content in each variable is handled
/// recursively).
pub fn strip_factors(p: &MPoly) -> Stripped {
    if p.is_zero() {
        return Stripped {
            unit: MPoly::zero(),
            factors: Vec::new(),
        };
    }
    let mono = p.monomial_content();
    let rest = p.div_monomial(&mono).expect("monomial content");
    let mut factors = Vec::new();
    sqf_recursive(&rest, &mut factors);
    let mut prod = MPoly::one();
    for (f, m) in &factors {
        prod = &prod * &f.pow(*m);
    }
    let k = rest.scalar_ratio(&prod).expect("squarefree parts reproduce input");
    Stripped {
        unit: MPoly::monomial(k, mono),
        factors,
    }
}

/// True iff `p = unit · Π factor_i^{m_i}` exactly.
pub fn verify_factor_product(p: &MPoly, factors: &[MPoly], mults: &[u32], unit: &MPoly) -> bool {
    if factors.len() != mults.len() || unit.is_zero() {
        return false;
    }
    let mut rest = match p.div_exact(unit) {
        Some(q) => q,
        None => return false,
    };
    for (f, &m) in factors.iter().zip(mults) {
        for _ in 0..m {
            rest = match rest.div_exact(f) {
                Some(q) => q,
                None => return false,
            };
        }
    }
    rest == MPoly::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        MPoly::parse(s).unwrap()
    }

    #[test]
    fn gcd_univariate_and_multivariate() {
        assert_eq!(gcd(&p("x^2 - 1"), &p("x^2 + 2x + 1")), p("x + 1"));
        assert_eq!(gcd(&p("(x + y)*(x - z)^2"), &p("(x - z)*(y + 3)")), p("x - z"));
        assert_eq!(gcd(&p("6*x*y"), &p("4*x^2")), p("x"));
        assert_eq!(gcd(&p("x + 1"), &p("x + 2")), MPoly::one());
        assert_eq!(gcd(&p("(s + 4z)*(x^2 + s)"), &p("(s + 4z)*x")), p("s + 4z"));
    }

    #[test]
    fn strips_monomials_and_powers() {
        let q = p("x^2 - z*x + 1");
        let big = &p("7*s^8").clone() * &q.pow(2);
        let st = strip_factors(&big);
        assert_eq!(st.factors, vec![(q.clone(), 2)]);
        assert_eq!(st.unit, p("7*s^8"));
        assert_eq!(st.product(), big);
    }

    #[test]
    fn mixed_multiplicities() {
        let a = p("x^2 + s*x + z");
        let b = p("s + 4z");
        let c = p("x - s");
        let big = &(&a * &b.pow(4)) * &c.pow(3);
        let st = strip_factors(&big);
        assert_eq!(st.product(), big);
        let mut got = st.factors.clone();
        got.sort_by_key(|(_, m)| *m);
        assert_eq!(got, vec![(a, 1), (c, 3), (b, 4)]);
    }

    #[test]
    fn refinement_splits_products() {
        let a = p("x^2 + s*x + z");
        let b = p("x^3 - z");
        let big = &p("s^3") * &(&a * &b).pow(2);
        let st = strip_factors(&big);
        assert_eq!(st.factors.len(), 1);
        let r = st.refine(&[a.clone(), b.clone()]);
        assert_eq!(r.factors, vec![(a, 2), (b, 2)]);
        assert_eq!(r.product(), big);
    }

    #[test]
    fn verifies_products() {
        let f = p("x - 1");
        let g = p("x + z");
        let prod = &p("3*z^2") * &(&f.pow(2) * &g);
        assert!(verify_factor_product(&prod, &[f.clone(), g.clone()], &[2, 1], &p("3*z^2")));
        assert!(!verify_factor_product(&prod, &[f.clone(), g.clone()], &[1, 1], &p("3*z^2")));
        assert!(!verify_factor_product(&prod, &[f, p("x + 2")], &[2, 1], &p("3*z^2")));
    }
}
