//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Every polynomial lives in the same global ring `Q[x, y, z, s, t, λ, η]`;
//! unused variables simply carry exponent zero. Terms are kept in a
//! `BTreeMap` keyed by the exponent vector, so iteration order is
//! lexicographic with `x` most significant.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::AlgError;
use crate::rational::{format_rational, parse_rational, to_f64};

pub const NVARS: usize = 7;

pub type Exps = [u32; NVARS];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
    S = 3,
    T = 4,
    Lambda = 5,
    Eta = 6,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::X,
        Var::Y,
        Var::Z,
        Var::S,
        Var::T,
        Var::Lambda,
        Var::Eta,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::S => "s",
            Var::T => "t",
            Var::Lambda => "λ",
            Var::Eta => "η",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Some(match name {
            "x" => Var::X,
            "y" => Var::Y,
            "z" => Var::Z,
            "s" => Var::S,
            "t" => Var::T,
            "λ" | "lambda" | "lam" => Var::Lambda,
            "η" | "eta" => Var::Eta,
            _ => return None,
        })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Exps, BigRational>,
}

pub fn unit_exps(v: Var, k: u32) -> Exps {
    let mut e = [0; NVARS];
    e[v.index()] = k;
    e
}

fn add_exps(a: &Exps, b: &Exps) -> Exps {
    let mut e = *a;
    for i in 0..NVARS {
        e[i] += b[i];
    }
    e
}

fn divides_exps(a: &Exps, b: &Exps) -> bool {
    (0..NVARS).all(|i| a[i] <= b[i])
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        MPoly::monomial(c, [0; NVARS])
    }

    pub fn int(c: i64) -> Self {
        MPoly::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(v: Var) -> Self {
        MPoly::monomial(BigRational::one(), unit_exps(v, 1))
    }

    pub fn monomial(c: BigRational, e: Exps) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, BigRational)>>(it: I) -> Self {
        let mut p = MPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from coefficients `c[k]` of `v^k`.
    pub fn from_coeffs(v: Var, coeffs: &[MPoly]) -> Self {
        let mut p = MPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut e2 = *e;
                e2[v.index()] += k as u32;
                p.add_term(e2, a.clone());
            }
        }
        p
    }

    pub fn from_rational_coeffs(v: Var, coeffs: &[BigRational]) -> Self {
        MPoly::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (unit_exps(v, k as u32), c.clone())),
        )
    }

    pub fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exps) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&[0; NVARS])
    }

    /// Lexicographically largest term.
    pub fn leading_term(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|e| e[v.index()]).max()
    }

    pub fn deg(&self, v: Var) -> u32 {
        self.degree(v).unwrap_or(0)
    }

    pub fn min_degree(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|e| e[v.index()]).min()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Var> {
        Var::ALL
            .iter()
            .copied()
            .filter(|v| self.terms.keys().any(|e| e[v.index()] > 0))
            .collect()
    }

    pub fn uses(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.index()] > 0)
    }

    /// Coefficients in `v`, index = power of `v`.
    pub fn coeffs(&self, v: Var) -> Vec<MPoly> {
        let d = self.deg(v) as usize;
        let mut out = vec![MPoly::zero(); if self.is_zero() { 0 } else { d + 1 }];
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let k = e2[v.index()] as usize;
            e2[v.index()] = 0;
            out[k].terms.insert(e2, c.clone());
        }
        out
    }

    pub fn coeff_of(&self, v: Var, k: u32) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v.index()] == k)
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[v.index()] = 0;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    pub fn leading_coeff(&self, v: Var) -> MPoly {
        self.coeff_of(v, self.deg(v))
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Exps) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (add_exps(e, m), a.clone()))
                .collect(),
        }
    }

    /// Divides by the monomial `m`; every term must be divisible.
    pub fn div_monomial(&self, m: &Exps) -> Option<MPoly> {
        let mut terms = BTreeMap::new();
        for (e, a) in &self.terms {
            if !divides_exps(m, e) {
                return None;
            }
            let mut e2 = *e;
            for i in 0..NVARS {
                e2[i] -= m[i];
            }
            terms.insert(e2, a.clone());
        }
        Some(MPoly { terms })
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Exps {
        let mut m = [u32::MAX; NVARS];
        for e in self.terms.keys() {
            for i in 0..NVARS {
                m[i] = m[i].min(e[i]);
            }
        }
        if self.is_zero() {
            [0; NVARS]
        } else {
            m
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        MPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v.index()] > 0)
                .map(|(e, c)| {
                    let mut e2 = *e;
                    let k = e2[v.index()];
                    e2[v.index()] -= 1;
                    (e2, c * BigRational::from_integer(BigInt::from(k)))
                })
                .collect(),
        }
    }

    /// Replaces `v` by `q` (Horner in `v`).
    pub fn subs(&self, v: Var, q: &MPoly) -> MPoly {
        let cs = self.coeffs(v);
        let mut acc = MPoly::zero();
        for c in cs.iter().rev() {
            acc = &(&acc * q) + c;
        }
        acc
    }

    /// Simultaneous substitution; variables absent from `map` stay put.
    pub fn subs_many(&self, map: &[(Var, MPoly)]) -> MPoly {
        let mut images: Vec<Option<&MPoly>> = vec![None; NVARS];
        for (v, q) in map {
            images[v.index()] = Some(q);
        }
        let mut cache: HashMap<(usize, u32), MPoly> = HashMap::new();
        let mut out: HashMap<Exps, BigRational> = HashMap::new();
        for (e, c) in &self.terms {
            let mut kept = [0u32; NVARS];
            let mut prod = MPoly::constant(c.clone());
            for i in 0..NVARS {
                match images[i] {
                    Some(q) if e[i] > 0 => {
                        let pw = cache
                            .entry((i, e[i]))
                            .or_insert_with(|| q.pow(e[i]))
                            .clone();
                        prod = &prod * &pw;
                    }
                    Some(_) => {}
                    None => kept[i] = e[i],
                }
            }
            for (e2, c2) in prod.terms {
                let key = add_exps(&e2, &kept);
                *out.entry(key).or_insert_with(BigRational::zero) += c2;
            }
        }
        MPoly::from_hash(out)
    }

    pub fn eval_rational(&self, v: Var, r: &BigRational) -> MPoly {
        self.subs(v, &MPoly::constant(r.clone()))
    }

    /// Numeric evaluation; `point[i]` is the value of variable `i`.
    pub fn eval_complex(&self, point: &[Complex64; NVARS]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(to_f64(c), 0.0);
            for i in 0..NVARS {
                if e[i] > 0 {
                    t *= point[i].powu(e[i]);
                }
            }
            acc += t;
        }
        acc
    }

    /// Per-term magnitudes at `point`; useful for relative residuals.
    pub fn max_term_abs(&self, point: &[Complex64; NVARS]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = to_f64(c).abs();
                for i in 0..NVARS {
                    if e[i] > 0 {
                        t *= point[i].norm().powi(e[i] as i32);
                    }
                }
                t
            })
            .fold(0.0, f64::max)
    }

    /// Univariate coefficient list (low to high) when `self` only uses `v`.
    pub fn univariate_coeffs(&self, v: Var) -> Option<Vec<BigRational>> {
        if self.vars().iter().any(|&w| w != v) {
            return None;
        }
        let mut out = vec![BigRational::zero(); self.deg(v) as usize + 1];
        for (e, c) in &self.terms {
            out[e[v.index()] as usize] = c.clone();
        }
        Some(out)
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (q, r) = self.div_rem_lex(d)?;
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Multivariate division by the lex leading term. The remainder is zero
    /// exactly when `d` divides `self`.
    fn div_rem_lex(&self, d: &MPoly) -> Option<(MPoly, MPoly)> {
        let (lde, ldc) = d.leading_term()?;
        let (lde, ldc) = (*lde, ldc.clone());
        if d.terms.len() == 1 {
            let mut q = MPoly::zero();
            let mut r = MPoly::zero();
            for (e, c) in &self.terms {
                if divides_exps(&lde, e) {
                    let mut e2 = *e;
                    for i in 0..NVARS {
                        e2[i] -= lde[i];
                    }
                    q.terms.insert(e2, c / &ldc);
                } else {
                    r.terms.insert(*e, c.clone());
                }
            }
            return Some((q, r));
        }
        let mut rem = self.clone();
        let mut q = MPoly::zero();
        let mut r = MPoly::zero();
        while let Some((e, c)) = rem.terms.iter().next_back().map(|(e, c)| (*e, c.clone())) {
            if divides_exps(&lde, &e) {
                let mut qe = e;
                for i in 0..NVARS {
                    qe[i] -= lde[i];
                }
                let qc = &c / &ldc;
                for (de, dc) in &d.terms {
                    rem.add_term(add_exps(de, &qe), -(dc * &qc));
                }
                q.terms.insert(qe, qc);
            } else {
                // Remaining terms below the leading one could still be
                // divisible, but for exact-division purposes a leftover
                // term already proves non-divisibility.
                rem.terms.remove(&e);
                r.terms.insert(e, c);
                return Some((q, r));
            }
        }
        Some((q, r))
    }

    /// Content over Q: gcd of numerators / lcm of denominators, sign of the
    /// leading term. Dividing by it gives a primitive integer polynomial.
    pub fn rational_content(&self) -> BigRational {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            return BigRational::one();
        }
        let mut out = BigRational::new(g, l);
        if let Some((_, c)) = self.leading_term() {
            if c.is_negative() {
                out = -out;
            }
        }
        out
    }

    /// Scales to a primitive integer polynomial with positive lex-leading
    /// coefficient.
    pub fn primitive_integer(&self) -> MPoly {
        if self.is_zero() {
            return MPoly::zero();
        }
        let c = self.rational_content();
        self.scale(&c.recip())
    }

    /// Monic in the lex order: leading coefficient one.
    pub fn monic(&self) -> MPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip()),
            None => MPoly::zero(),
        }
    }

    /// True when `self = c·other` for a nonzero rational `c`.
    pub fn eq_up_to_scalar(&self, other: &MPoly) -> bool {
        self.primitive_integer() == other.primitive_integer()
    }

    /// Scalar `c` with `self = c·other`, if any.
    pub fn scalar_ratio(&self, other: &MPoly) -> Option<BigRational> {
        let (e, a) = self.leading_term()?;
        let b = other.terms.get(e)?;
        let c = a / b;
        if *self == other.scale(&c) {
            Some(c)
        } else {
            None
        }
    }

    fn from_hash(h: HashMap<Exps, BigRational>) -> MPoly {
        MPoly {
            terms: h.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Renames variables by a permutation map (simultaneous).
    pub fn rename(&self, map: &[(Var, Var)]) -> MPoly {
        let mut perm: [usize; NVARS] = [0, 1, 2, 3, 4, 5, 6];
        for (a, b) in map {
            perm[a.index()] = b.index();
        }
        let mut out = MPoly::zero();
        for (e, c) in &self.terms {
            let mut e2 = [0; NVARS];
            for i in 0..NVARS {
                e2[perm[i]] += e[i];
            }
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Reverse polynomial `v^d p(1/v)` in the variable `v`.
    pub fn reverse(&self, v: Var) -> MPoly {
        let d = self.deg(v);
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[v.index()] = d - e[v.index()];
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Exponents restricted to `vars`, in that order.
    pub fn to_json(&self, vars: &[Var]) -> PolyJson {
        let mut terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(e, c)| TermJson {
                c: format_rational(c),
                e: vars.iter().map(|v| e[v.index()]).collect(),
            })
            .collect();
        terms.sort_by(|a, b| a.e.cmp(&b.e));
        PolyJson {
            vars: vars.iter().map(|v| v.name().to_string()).collect(),
            terms,
        }
    }

    /// Variables in canonical order that actually occur (at least `x`).
    pub fn json_vars(&self) -> Vec<Var> {
        let v = self.vars();
        if v.is_empty() {
            vec![Var::X]
        } else {
            v
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<MPoly, AlgError> {
        let vars: Vec<Var> = j
            .vars
            .iter()
            .map(|n| Var::from_name(n).ok_or_else(|| AlgError::Parse(format!("unknown variable {n:?}"))))
            .collect::<Result<_, _>>()?;
        let mut p = MPoly::zero();
        for t in &j.terms {
            if t.e.len() != vars.len() {
                return Err(AlgError::Parse(format!(
                    "exponent vector {:?} does not match {} variables",
                    t.e,
                    vars.len()
                )));
            }
            let mut e = [0; NVARS];
            for (v, k) in vars.iter().zip(&t.e) {
                e[v.index()] += *k;
            }
            let c = parse_rational(&t.c).map_err(|err| AlgError::Parse(err.to_string()))?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn parse(text: &str) -> Result<MPoly, AlgError> {
        super::parse::parse_poly(text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub c: String,
    pub e: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl fmt::Display for MPoly {
    /// Descending lex order, `*` for products and `^` for powers; the output
    /// parses back with [`MPoly::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&k| k == 0);
            if !a.is_one() || is_const {
                parts.push(format_rational(&a));
            }
            for v in Var::ALL {
                match e[v.index()] {
                    0 => {}
                    1 => parts.push(v.name().to_string()),
                    k => parts.push(format!("{}^{}", v.name(), k)),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (big, small) = if self.terms.len() >= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        if self.is_zero() || rhs.is_zero() {
            return MPoly::zero();
        }
        if rhs.terms.len() == 1 {
            let (e, c) = rhs.terms.iter().next().unwrap();
            return MPoly {
                terms: self.terms.iter().map(|(a, b)| (add_exps(a, e), b * c)).collect(),
            };
        }
        let mut h: HashMap<Exps, BigRational> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len() / 2 + 1);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let prod = ca * cb;
                match h.entry(add_exps(ea, eb)) {
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                    std::collections::hash_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += prod;
                    }
                }
            }
        }
        MPoly::from_hash(h)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<MPoly> for &'a MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}
