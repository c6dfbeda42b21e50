//! Newton polygons and critical polynomials of bivariate polynomials
//! `P(x, z) = Σ p_k(z) x^k`, used to read off the leading terms
//! `x ~ η z^γ` of the solution branches near `z = 0`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{unit_exps, MPoly, Var};
use super::roots::{isolate_upoly, RootInterval};
use super::AlgError;

/// One lower edge of the polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: (u32, u32),
    pub to: (u32, u32),
    /// Leading exponent of the branches belonging to this edge.
    pub gamma: BigRational,
    /// Lowest total `z` order `α_k + γ k` on the edge.
    pub beta: BigRational,
    /// Horizontal length, the number of branches (with multiplicity).
    pub length: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygonData {
    pub main: Var,
    pub param: Var,
    /// `(k, α_k)` for every nonzero coefficient `p_k`.
    pub points: Vec<(u32, u32)>,
    /// Lower hull vertices, left to right.
    pub hull: Vec<(u32, u32)>,
    pub edges: Vec<Edge>,
}

impl NewtonPolygonData {
    /// Admissible exponents, ascending.
    pub fn gammas(&self) -> Vec<BigRational> {
        let mut g: Vec<BigRational> = self.edges.iter().map(|e| e.gamma.clone()).collect();
        g.sort();
        g
    }

    pub fn edge(&self, gamma: &BigRational) -> Option<&Edge> {
        self.edges.iter().find(|e| &e.gamma == gamma)
    }

    pub fn total_length(&self) -> u32 {
        self.edges.iter().map(|e| e.length).sum()
    }
}

/// Leading coefficient of a branch: rational, or a real root of a minimal
/// polynomial singled out by an isolating interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eta {
    Rational(BigRational),
    Algebraic { minpoly: MPoly, interval: RootInterval },
}

/// Leading behaviour `x = z^γ (η + o(1))` selecting one analytic branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchSpec {
    pub gamma: BigRational,
    pub eta: Eta,
    pub description: String,
}

impl BranchSpec {
    pub fn rational(gamma: BigRational, eta: BigRational, description: &str) -> Self {
        BranchSpec {
            gamma,
            eta: Eta::Rational(eta),
            description: description.to_string(),
        }
    }
}

impl fmt::Display for BranchSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.eta {
            Eta::Rational(e) => write!(f, "z^({}) ({} + O(z))", self.gamma, e),
            Eta::Algebraic { minpoly, .. } => {
                write!(f, "z^({}) (η + O(z)), {} = 0", self.gamma, minpoly)
            }
        }
    }
}

/// The parameter variable of a bivariate polynomial in `main`.
pub fn param_var(p: &MPoly, main: Var) -> Result<Var, AlgError> {
    let others: Vec<Var> = p.vars().into_iter().filter(|&v| v != main).collect();
    match others.as_slice() {
        [v] => Ok(*v),
        [] => Ok(if main == Var::Z { Var::X } else { Var::Z }),
        _ => Err(AlgError::Degenerate(format!(
            "Newton polygon needs a bivariate polynomial, found variables {:?}",
            p.vars()
        ))),
    }
}

fn lowest_points(p: &MPoly, main: Var, param: Var) -> Vec<(u32, u32, BigRational)> {
    let mut pts: Vec<(u32, u32, BigRational)> = Vec::new();
    for (e, c) in p.terms() {
        let k = e[main.index()];
        let a = e[param.index()];
        match pts.iter_mut().find(|(kk, _, _)| *kk == k) {
            Some(entry) => {
                if a < entry.1 {
                    entry.1 = a;
                    entry.2 = c.clone();
                }
            }
            None => pts.push((k, a, c.clone())),
        }
    }
    pts.sort_by_key(|(k, _, _)| *k);
    pts
}

fn cross(o: (u32, u32), a: (u32, u32), b: (u32, u32)) -> i64 {
    let (ox, oy) = (o.0 as i64, o.1 as i64);
    (a.0 as i64 - ox) * (b.1 as i64 - oy) - (a.1 as i64 - oy) * (b.0 as i64 - ox)
}

pub fn newton_polygon(p: &MPoly, main: Var) -> Result<NewtonPolygonData, AlgError> {
    let param = param_var(p, main)?;
    let pts = lowest_points(p, main, param);
    if pts.len() < 2 {
        return Err(AlgError::Degenerate(
            "Newton polygon of a monomial has no edges".into(),
        ));
    }
    let points: Vec<(u32, u32)> = pts.iter().map(|(k, a, _)| (*k, *a)).collect();
    let mut hull: Vec<(u32, u32)> = Vec::new();
    for &q in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], q) <= 0 {
            hull.pop();
        }
        hull.push(q);
    }
    let edges = hull
        .windows(2)
        .map(|w| {
            let (k0, a0) = w[0];
            let (k1, a1) = w[1];
            let slope = BigRational::new(
                BigInt::from(a1 as i64 - a0 as i64),
                BigInt::from((k1 - k0) as i64),
            );
            let gamma = -slope;
            let beta = BigRational::from_integer(BigInt::from(a0)) + &gamma * BigInt::from(k0);
            Edge {
                from: w[0],
                to: w[1],
                gamma,
                beta,
                length: k1 - k0,
            }
        })
        .collect();
    Ok(NewtonPolygonData {
        main,
        param,
        points,
        hull,
        edges,
    })
}

/// `Σ a_k η^k` over the points on the `γ`-edge, divided by the lowest power
/// of `η`. Its nonzero roots are the admissible leading coefficients.
pub fn critical_polynomial(p: &MPoly, main: Var, gamma: &BigRational) -> Result<MPoly, AlgError> {
    let np = newton_polygon(p, main)?;
    let edge = np
        .edge(gamma)
        .ok_or_else(|| AlgError::InadmissibleSlope(gamma.to_string()))?
        .clone();
    let pts = lowest_points(p, main, np.param);
    let mut crit = MPoly::zero();
    for (k, a, c) in pts {
        let order = BigRational::from_integer(BigInt::from(a)) + gamma * BigInt::from(k);
        if order == edge.beta {
            crit.add_term(unit_exps(Var::Eta, k - edge.from.0), c);
        }
    }
    Ok(crit)
}

/// Rational roots by the rational root theorem; coefficients are scaled to
/// integers first. Gives up (returns what it found) on huge coefficients.
pub fn rational_roots(p: &MPoly) -> Vec<BigRational> {
    let v = p.vars().first().copied().unwrap_or(Var::Eta);
    let c = match p.primitive_integer().univariate_coeffs(v) {
        Some(c) => c,
        None => return Vec::new(),
    };
    let mut out = Vec::new();
    let mut c: Vec<BigInt> = c.iter().map(|r| r.numer().clone()).collect();
    if c.iter().all(|k| k.is_zero()) {
        return out;
    }
    let shift = c.iter().position(|k| !k.is_zero()).unwrap_or(0);
    if shift > 0 {
        out.push(BigRational::zero());
        c.drain(..shift);
    }
    if c.len() < 2 {
        return out;
    }
    let a0 = c[0].abs();
    let an = c[c.len() - 1].abs();
    let (Some(a0s), Some(ans)) = (a0.to_u64(), an.to_u64()) else {
        return out;
    };
    if a0s > 1_000_000_000_000 || ans > 1_000_000_000_000 {
        return out;
    }
    let ps = divisors(a0s);
    let qs = divisors(ans);
    let rc: Vec<BigRational> = c.iter().map(|k| BigRational::from_integer(k.clone())).collect();
    for &pp in &ps {
        for &qq in &qs {
            if pp.gcd(&qq) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let r = BigRational::new(BigInt::from(sign) * BigInt::from(pp), BigInt::from(qq));
                if super::roots::eval(&rc, &r).is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            d.push(i);
            if i * i != n {
                d.push(n / i);
            }
        }
        i += 1;
    }
    d
}

/// All branch families of `p` near `param = 0`: for every edge the critical
/// polynomial, its branch count and any rational leading coefficients.
#[derive(Debug, Clone)]
pub struct BranchFamily {
    pub gamma: BigRational,
    pub critical: MPoly,
    pub count: u32,
    pub rational_etas: Vec<BigRational>,
    /// Real roots of the critical polynomial, isolated to 1e-12.
    pub real_etas: Vec<RootInterval>,
}

pub fn branch_families(p: &MPoly, main: Var) -> Result<Vec<BranchFamily>, AlgError> {
    let np = newton_polygon(p, main)?;
    let mut out = Vec::new();
    for gamma in np.gammas() {
        let edge = np.edge(&gamma).expect("edge").clone();
        let critical = critical_polynomial(p, main, &gamma)?;
        let rational_etas: Vec<BigRational> = rational_roots(&critical)
            .into_iter()
            .filter(|r| !r.is_zero())
            .collect();
        let coeffs = critical
            .univariate_coeffs(Var::Eta)
            .unwrap_or_else(|| vec![BigRational::one()]);
        let eps = BigRational::new(BigInt::one(), BigInt::from(10u64).pow(12));
        let real_etas = isolate_upoly(&coeffs, &eps)?
            .into_iter()
            .filter(|iv| !(iv.lo <= BigRational::zero() && BigRational::zero() <= iv.hi))
            .collect();
        out.push(BranchFamily {
            gamma,
            critical,
            count: edge.length,
            rational_etas,
            real_etas,
        });
    }
    Ok(out)
}
