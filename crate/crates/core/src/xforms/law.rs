//! Probability laws and their Cauchy / shifted Boolean transforms.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::XformError;
use crate::alg::newton::Eta;
use crate::alg::pipeline::psi_shift;
use crate::alg::{series_solve, BranchSpec, MPoly, Var};
use crate::combinat::{boolean_cumulants_recursive, free_moments_recursive};
use crate::numeric::{poly_roots, sqrt_pair};
use crate::rational::{binomial, format_rational, parse_rational, rat, to_f64};

/// Number of exact moments kept with a prepared law.
pub const MOMENT_ORDER: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum Law {
    /// Atoms `(position, weight)`.
    Discrete(Vec<(BigRational, BigRational)>),
    Semicircle { mean: BigRational, variance: BigRational },
    Arcsine { center: BigRational, radius: BigRational },
    /// `annihilator(x = G(z), z) = 0`; `branch` is the leading term of
    /// `ψ(w) = Σ m_n w^n` in the moment-shifted equation.
    AlgebraicCauchy { annihilator: MPoly, branch: BranchSpec },
}

impl Law {
    pub fn discrete(atoms: Vec<(BigRational, BigRational)>) -> Result<Self, XformError> {
        let l = Law::Discrete(atoms);
        l.validate()?;
        Ok(l)
    }

    pub fn semicircle() -> Self {
        Law::Semicircle {
            mean: rat(0),
            variance: rat(1),
        }
    }

    pub fn arcsine() -> Self {
        Law::Arcsine {
            center: rat(0),
            radius: rat(2),
        }
    }

    /// `½(δ_{−1} + δ_1)`.
    pub fn bernoulli() -> Self {
        let h = BigRational::new(1.into(), 2.into());
        Law::Discrete(vec![(rat(-1), h.clone()), (rat(1), h)])
    }

    /// Projection of trace `p`: `(1 − p) δ_0 + p δ_1`.
    pub fn projection(p: BigRational) -> Result<Self, XformError> {
        if p <= BigRational::zero() || p > BigRational::one() {
            return Err(XformError::InvalidLaw(format!("projection trace {p} not in (0, 1]")));
        }
        if p.is_one() {
            return Ok(Law::Discrete(vec![(rat(1), rat(1))]));
        }
        Ok(Law::Discrete(vec![(rat(0), BigRational::one() - &p), (rat(1), p)]))
    }

    pub fn point(a: BigRational) -> Self {
        Law::Discrete(vec![(a, rat(1))])
    }

    pub fn zero() -> Self {
        Law::point(rat(0))
    }

    pub fn algebraic(annihilator: MPoly, branch: BranchSpec) -> Result<Self, XformError> {
        let l = Law::AlgebraicCauchy { annihilator, branch };
        l.validate()?;
        Ok(l)
    }

    /// `semicircle`, `arcsine`, `bernoulli`, `projection:p`, `zero`, or an
    /// inline JSON law.
    pub fn preset(name: &str) -> Result<Self, XformError> {
        let t = name.trim();
        if t.starts_with('{') {
            let v: Value = serde_json::from_str(t).map_err(|e| XformError::InvalidLaw(format!("law JSON: {e}")))?;
            return Law::from_json(&v);
        }
        match t {
            "semicircle" => Ok(Law::semicircle()),
            "arcsine" => Ok(Law::arcsine()),
            "bernoulli" => Ok(Law::bernoulli()),
            "zero" => Ok(Law::zero()),
            _ => {
                if let Some(p) = t.strip_prefix("projection:") {
                    let p = parse_rational(p).map_err(|e| XformError::InvalidLaw(e.to_string()))?;
                    Law::projection(p)
                } else {
                    Err(XformError::InvalidLaw(format!("unknown law preset {t:?}")))
                }
            }
        }
    }

    pub fn validate(&self) -> Result<(), XformError> {
        match self {
            Law::Discrete(atoms) => {
                if atoms.is_empty() {
                    return Err(XformError::InvalidLaw("no atoms".into()));
                }
                if atoms.iter().any(|(_, w)| !w.is_positive()) {
                    return Err(XformError::InvalidLaw("atom weights must be positive".into()));
                }
                let total: BigRational = atoms.iter().map(|(_, w)| w.clone()).sum();
                if !total.is_one() {
                    return Err(XformError::InvalidLaw(format!("weights sum to {total}")));
                }
                Ok(())
            }
            Law::Semicircle { variance, .. } if !variance.is_positive() => {
                Err(XformError::InvalidLaw("semicircle variance must be positive".into()))
            }
            Law::Arcsine { radius, .. } if !radius.is_positive() => {
                Err(XformError::InvalidLaw("arcsine radius must be positive".into()))
            }
            Law::AlgebraicCauchy { annihilator, branch } => {
                if annihilator.deg(Var::X) == 0 {
                    return Err(XformError::InvalidLaw("annihilator does not involve x".into()));
                }
                if annihilator.vars().iter().any(|v| *v != Var::X && *v != Var::Z) {
                    return Err(XformError::InvalidLaw("annihilator must be in x and z".into()));
                }
                if !branch.gamma.is_positive() {
                    return Err(XformError::InvalidLaw("branch must have ψ → 0, i.e. G ~ 1/z".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Exact moments `m_0..m_n`.
    pub fn moments(&self, n: usize) -> Result<Vec<BigRational>, XformError> {
        match self {
            Law::Discrete(atoms) => Ok((0..=n)
                .map(|k| {
                    atoms
                        .iter()
                        .map(|(a, w)| w * num_traits::pow(a.clone(), k))
                        .sum()
                })
                .collect()),
            Law::Semicircle { mean, variance } => {
                let mut kappa = vec![BigRational::zero(); n.max(2)];
                kappa[0] = mean.clone();
                kappa[1] = variance.clone();
                Ok(free_moments_recursive(&kappa, n)?)
            }
            Law::Arcsine { center, radius } => {
                let half = radius / rat(2);
                let centered: Vec<BigRational> = (0..=n)
                    .map(|k| {
                        if k % 2 == 1 {
                            BigRational::zero()
                        } else {
                            BigRational::from_integer(binomial(k as u64, k as u64 / 2)) * num_traits::pow(half.clone(), k)
                        }
                    })
                    .collect();
                Ok((0..=n)
                    .map(|k| {
                        (0..=k)
                            .map(|j| {
                                BigRational::from_integer(binomial(k as u64, j as u64))
                                    * num_traits::pow(center.clone(), k - j)
                                    * &centered[j]
                            })
                            .sum()
                    })
                    .collect())
            }
            Law::AlgebraicCauchy { annihilator, branch } => {
                let shifted = psi_shift(annihilator, Var::X, Var::Z);
                let c = series_solve(&shifted, Var::X, branch, n)?;
                let mut m = vec![BigRational::one()];
                m.extend(c.into_iter().skip(1));
                m.truncate(n + 1);
                Ok(m)
            }
        }
    }

    pub fn mean(&self) -> Result<BigRational, XformError> {
        Ok(self.moments(1)?[1].clone())
    }

    pub fn to_json(&self) -> Value {
        let r = format_rational;
        match self {
            Law::Discrete(atoms) => json!({
                "law": "discrete",
                "atoms": atoms.iter().map(|(a, w)| json!({"x": r(a), "w": r(w)})).collect::<Vec<_>>(),
            }),
            Law::Semicircle { mean, variance } => json!({"law": "semicircle", "mean": r(mean), "variance": r(variance)}),
            Law::Arcsine { center, radius } => json!({"law": "arcsine", "center": r(center), "radius": r(radius)}),
            Law::AlgebraicCauchy { annihilator, branch } => {
                let eta = match &branch.eta {
                    Eta::Rational(e) => r(e),
                    Eta::Algebraic { .. } => "algebraic".to_string(),
                };
                json!({
                    "law": "algebraic",
                    "poly": serde_json::to_value(annihilator.to_json(&annihilator.json_vars())).expect("serializable"),
                    "gamma": r(&branch.gamma),
                    "eta": eta,
                })
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, XformError> {
        let bad = |m: String| XformError::InvalidLaw(m);
        let q = |key: &str, default: Option<&str>| -> Result<BigRational, XformError> {
            match v.get(key).and_then(Value::as_str).or(default) {
                Some(s) => parse_rational(s).map_err(|e| bad(format!("{key}: {e}"))),
                None => Err(bad(format!("missing {key:?}"))),
            }
        };
        let law = match v.get("law").and_then(Value::as_str) {
            Some("discrete") => {
                let atoms = v
                    .get("atoms")
                    .and_then(Value::as_array)
                    .ok_or_else(|| bad("missing \"atoms\"".into()))?
                    .iter()
                    .map(|a| {
                        let f = |k: &str| {
                            a.get(k)
                                .and_then(Value::as_str)
                                .ok_or_else(|| bad(format!("atom needs string {k:?}")))
                                .and_then(|s| parse_rational(s).map_err(|e| bad(e.to_string())))
                        };
                        Ok((f("x")?, f("w")?))
                    })
                    .collect::<Result<Vec<_>, XformError>>()?;
                Law::Discrete(atoms)
            }
            Some("semicircle") => Law::Semicircle {
                mean: q("mean", Some("0"))?,
                variance: q("variance", Some("1"))?,
            },
            Some("arcsine") => Law::Arcsine {
                center: q("center", Some("0"))?,
                radius: q("radius", Some("2"))?,
            },
            Some("algebraic") => {
                let pj = serde_json::from_value(v.get("poly").cloned().unwrap_or(Value::Null))
                    .map_err(|e| bad(format!("poly: {e}")))?;
                let annihilator = MPoly::from_json(&pj)?;
                let branch = BranchSpec::rational(q("gamma", None)?, q("eta", None)?, "law JSON");
                Law::AlgebraicCauchy { annihilator, branch }
            }
            other => return Err(bad(format!("unknown law tag {other:?}"))),
        };
        law.validate()?;
        Ok(law)
    }

    pub fn prepare(&self) -> Result<PreparedLaw, XformError> {
        PreparedLaw::new(self)
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Discrete(Vec<(f64, f64)>),
    Semicircle { m: f64, v: f64 },
    Arcsine { c: f64, r: f64 },
    /// `coeffs[k][j]`: coefficient of `x^k z^j`.
    Algebraic { coeffs: Vec<Vec<f64>> },
}

/// A law with its numeric data precomputed.
#[derive(Debug, Clone)]
pub struct PreparedLaw {
    pub law: Law,
    pub moments: Vec<BigRational>,
    moments_f: Vec<f64>,
    /// `β_1..β_M`
    boolean: Vec<f64>,
    kind: Kind,
    /// Closed support interval, when known.
    pub support: Option<(f64, f64)>,
    /// Bound (or, for algebraic laws, an estimate) of `sup |x|` on the support.
    pub radius: f64,
    /// Smallest admissible `|Im z|` near the support.
    pub min_im: f64,
}

impl PreparedLaw {
    pub fn new(law: &Law) -> Result<Self, XformError> {
        law.validate()?;
        let moments = law.moments(MOMENT_ORDER)?;
        let moments_f: Vec<f64> = moments.iter().map(to_f64).collect();
        let boolean: Vec<f64> = boolean_cumulants_recursive(&moments).iter().map(to_f64).collect();
        let (kind, support) = match law {
            Law::Discrete(atoms) => {
                let a: Vec<(f64, f64)> = atoms.iter().map(|(x, w)| (to_f64(x), to_f64(w))).collect();
                let lo = a.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
                let hi = a.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
                (Kind::Discrete(a), Some((lo, hi)))
            }
            Law::Semicircle { mean, variance } => {
                let (m, v) = (to_f64(mean), to_f64(variance));
                let r = 2.0 * v.sqrt();
                (Kind::Semicircle { m, v }, Some((m - r, m + r)))
            }
            Law::Arcsine { center, radius } => {
                let (c, r) = (to_f64(center), to_f64(radius));
                (Kind::Arcsine { c, r }, Some((c - r, c + r)))
            }
            Law::AlgebraicCauchy { annihilator, .. } => {
                let dx = annihilator.deg(Var::X) as usize;
                let dz = annihilator.deg(Var::Z) as usize;
                let mut coeffs = vec![vec![0.0; dz + 1]; dx + 1];
                for (e, c) in annihilator.terms() {
                    coeffs[e[Var::X.index()] as usize][e[Var::Z.index()] as usize] = to_f64(c);
                }
                (Kind::Algebraic { coeffs }, None)
            }
        };
        let radius = match support {
            Some((lo, hi)) => lo.abs().max(hi.abs()),
            None => (1..moments_f.len())
                .map(|k| moments_f[k].abs().powf(1.0 / k as f64))
                .fold(0.0, f64::max),
        };
        Ok(PreparedLaw {
            law: law.clone(),
            moments,
            moments_f,
            boolean,
            kind,
            support,
            radius,
            min_im: 1e-12,
        })
    }

    pub fn mean(&self) -> f64 {
        self.moments_f[1]
    }

    pub fn moment(&self, k: usize) -> Option<f64> {
        self.moments_f.get(k).copied()
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.kind, Kind::Discrete(_))
    }

    pub fn atoms(&self) -> Option<&[(f64, f64)]> {
        match &self.kind {
            Kind::Discrete(a) => Some(a),
            _ => None,
        }
    }

    /// `∫ g(x) dμ(x)` for continuous laws with known support, by
    /// Gauss–Legendre in the angle `x = c + r cos θ`, doubling from 256 nodes
    /// until the relative change is below `1e−11`.
    pub fn quadrature<F: FnMut(f64) -> Complex64>(&self, mut g: F) -> Result<Complex64, XformError> {
        let (c, r, semi) = match self.kind {
            Kind::Semicircle { m, v } => (m, 2.0 * v.sqrt(), true),
            Kind::Arcsine { c, r } => (c, r, false),
            Kind::Discrete(ref a) => {
                return Ok(a.iter().map(|&(x, w)| g(x) * w).sum());
            }
            Kind::Algebraic { .. } => {
                return Err(XformError::Integration("no quadrature for algebraic laws".into()));
            }
        };
        let pi = std::f64::consts::PI;
        let mut eval = |n: usize| {
            crate::numeric::integrate(
                |t| {
                    let weight = if semi { 2.0 / pi * t.sin().powi(2) } else { 1.0 / pi };
                    g(c + r * t.cos()) * weight
                },
                0.0,
                pi,
                n,
            )
        };
        let mut n = 256;
        let mut prev = eval(n);
        while n < 16384 {
            n *= 2;
            let cur = eval(n);
            if (cur - prev).norm() <= 1e-11 * cur.norm().max(1e-300) {
                return Ok(cur);
            }
            prev = cur;
        }
        Err(XformError::Integration(format!("quadrature did not settle with {n} nodes")))
    }

    /// Distance from `z` to the support (to the convex hull for discrete laws).
    pub fn support_distance(&self, z: Complex64) -> f64 {
        match self.support {
            Some((lo, hi)) => {
                let dx = if z.re < lo {
                    lo - z.re
                } else if z.re > hi {
                    z.re - hi
                } else {
                    0.0
                };
                dx.hypot(z.im)
            }
            None => (z.norm() - self.radius).max(z.im.abs()),
        }
    }

    fn check_proximity(&self, z: Complex64) -> Result<(), XformError> {
        if z.im.abs() >= self.min_im {
            return Ok(());
        }
        let near = match &self.kind {
            Kind::Discrete(a) => a.iter().any(|(x, _)| (z.re - x).abs() < self.min_im),
            _ => match self.support {
                Some((lo, hi)) => z.re >= lo - self.min_im && z.re <= hi + self.min_im,
                None => false,
            },
        };
        if near {
            Err(XformError::Proximity { re: z.re, im: z.im })
        } else {
            Ok(())
        }
    }

    /// Cauchy transform `G(z) = ∫ dμ(x)/(z − x)`.
    pub fn cauchy(&self, z: Complex64) -> Result<Complex64, XformError> {
        self.check_proximity(z)?;
        Ok(match &self.kind {
            Kind::Discrete(a) => a.iter().map(|&(x, w)| w / (z - x)).sum(),
            Kind::Semicircle { m, v } => {
                let w = z - m;
                // (w − √·√)/(2v) rewritten without cancellation at large |w|
                2.0 / (w + sqrt_pair(w, 2.0 * v.sqrt()))
            }
            Kind::Arcsine { c, r } => 1.0 / sqrt_pair(z - c, *r),
            Kind::Algebraic { coeffs } => self.track(coeffs, z)?,
        })
    }

    /// `G'(z)`.
    pub fn cauchy_derivative(&self, z: Complex64) -> Result<Complex64, XformError> {
        let g = self.cauchy(z)?;
        Ok(match &self.kind {
            Kind::Discrete(a) => a.iter().map(|&(x, w)| -w / ((z - x) * (z - x))).sum(),
            Kind::Semicircle { m, v } => g / (2.0 * v * g - (z - m)),
            Kind::Arcsine { c, .. } => -(z - c) * g * g * g,
            Kind::Algebraic { coeffs } => {
                // implicit differentiation of P(G, z) = 0
                let (mut px, mut pz) = (Complex64::zero(), Complex64::zero());
                for (k, row) in coeffs.iter().enumerate() {
                    for (j, &a) in row.iter().enumerate() {
                        if a == 0.0 {
                            continue;
                        }
                        if k > 0 {
                            px += a * k as f64 * g.powu(k as u32 - 1) * z.powu(j as u32);
                        }
                        if j > 0 {
                            pz += a * j as f64 * g.powu(k as u32) * z.powu(j as u32 - 1);
                        }
                    }
                }
                -pz / px
            }
        })
    }

    /// Shifted Boolean transform `η̃(s) = (G(1/s) − s)/(s G(1/s))`, by its
    /// Boolean cumulant series near `s = 0`.
    pub fn eta_tilde(&self, s: Complex64) -> Result<Complex64, XformError> {
        if s.norm() * (self.radius + 1.0) < 1e-3 {
            let mut acc = Complex64::zero();
            for b in self.boolean.iter().rev() {
                acc = acc * s + b;
            }
            return Ok(acc);
        }
        let g = self.cauchy(1.0 / s)?;
        Ok((g - s) / (s * g))
    }

    /// Root of `P(·, z)` continued from the moment series at large `|z|`
    /// down the vertical line through `z`.
    fn track(&self, coeffs: &[Vec<f64>], z: Complex64) -> Result<Complex64, XformError> {
        if z.im < 0.0 {
            return Ok(self.track(coeffs, z.conj())?.conj());
        }
        let roots_at = |zz: Complex64| -> Vec<Complex64> {
            let c: Vec<Complex64> = coeffs
                .iter()
                .map(|row| row.iter().rev().fold(Complex64::zero(), |acc, &a| acc * zz + a))
                .collect();
            poly_roots(&crate::numeric::poly_trim(&c, 1e-300))
        };
        let nearest = |roots: &[Complex64], target: Complex64| -> (Complex64, f64, f64) {
            let mut d: Vec<(f64, Complex64)> = roots.iter().map(|r| ((r - target).norm(), *r)).collect();
            d.sort_by(|a, b| a.0.total_cmp(&b.0));
            (d[0].1, d[0].0, d.get(1).map_or(f64::INFINITY, |p| p.0))
        };
        let top = (10.0 * (self.radius + 1.0)).max(z.im).max(z.re.abs());
        let z0 = Complex64::new(z.re, top);
        let series: Complex64 = {
            let w = 1.0 / z0;
            let mut acc = Complex64::zero();
            for m in self.moments_f.iter().rev() {
                acc = acc * w + m;
            }
            acc * w
        };
        let (mut g, d1, d2) = nearest(&roots_at(z0), series);
        if d2 < 10.0 * d1 {
            return Err(XformError::Branch(format!(
                "at z = {z0} the moment series {series} does not single out a root (distances {d1:.3e}, {d2:.3e})"
            )));
        }
        // geometric descent in Im z, refining steps where roots crowd
        let mut y = top;
        let target = z.im;
        while y > target {
            let mut next = if target > 0.0 { (y * 0.8).max(target) } else { y * 0.8 };
            if target <= 0.0 && next < 1e-14 * top {
                next = target;
            }
            let mut tries = 0;
            loop {
                let (r, d1, d2) = nearest(&roots_at(Complex64::new(z.re, next)), g);
                if d2 > 3.0 * d1 || tries > 40 {
                    if d2 <= 3.0 * d1 {
                        return Err(XformError::Branch(format!(
                            "two roots within tolerance near z = {}+{}i (distances {d1:.3e}, {d2:.3e})",
                            z.re, next
                        )));
                    }
                    g = r;
                    break;
                }
                next = y - (y - next) / 2.0;
                tries += 1;
            }
            y = next;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use num_traits::ToPrimitive;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bernoulli_cauchy() {
        let b = Law::bernoulli().prepare().unwrap();
        assert!((b.cauchy(c(2.0, 0.0)).unwrap() - 2.0 / 3.0).norm() < 1e-15);
        let z = c(0.3, 0.7);
        assert!((b.cauchy(z).unwrap() - z / (z * z - 1.0)).norm() < 1e-15);
    }

    #[test]
    fn semicircle_against_moment_series() {
        let s = Law::semicircle().prepare().unwrap();
        let z = c(0.0, 10.0);
        let series: Complex64 = (0..30)
            .map(|k| crate::rational::catalan(k).to_f64().unwrap() / z.powu(2 * k as u32 + 1))
            .sum();
        assert!((s.cauchy(z).unwrap() - series).norm() < 1e-10);
    }

    #[test]
    fn herglotz_and_normalization() {
        let laws = [
            Law::semicircle(),
            Law::arcsine(),
            Law::bernoulli(),
            Law::projection(ratio(1, 4)).unwrap(),
            Law::Semicircle { mean: ratio(1, 2), variance: rat(3) },
            Law::Arcsine { center: rat(-1), radius: ratio(1, 2) },
            Law::algebraic(MPoly::parse("x^2 - z*x + 1").unwrap(), BranchSpec::rational(rat(2), rat(1), "semicircle")).unwrap(),
        ];
        for law in laws {
            let p = law.prepare().unwrap();
            for z in [c(0.1, 0.01), c(-3.0, 0.5), c(5.0, 2.0), c(0.0, 1e-3)] {
                assert!(p.cauchy(z).unwrap().im < 0.0, "{law} at {z}");
            }
            let y = 1e3;
            assert!((c(0.0, y) * p.cauchy(c(0.0, y)).unwrap() - 1.0).norm() < 0.01);
        }
    }

    #[test]
    fn algebraic_matches_closed_form() {
        let alg = Law::algebraic(MPoly::parse("x^2*(z^2 - 4) - 1").unwrap(), BranchSpec::rational(rat(2), rat(2), "arcsine"))
            .unwrap()
            .prepare()
            .unwrap();
        let closed = Law::arcsine().prepare().unwrap();
        for z in [c(0.5, 0.1), c(-1.9, 1e-4), c(3.0, 1.0), c(0.0, -2.0), c(2.5, 0.0)] {
            let a = alg.cauchy(z).unwrap();
            let b = closed.cauchy(z).unwrap();
            assert!((a - b).norm() < 1e-9, "{z}: {a} vs {b}");
            let da = alg.cauchy_derivative(z).unwrap();
            let db = closed.cauchy_derivative(z).unwrap();
            assert!((da - db).norm() < 1e-7 * db.norm().max(1.0));
        }
        assert_eq!(alg.moments[..7], Law::arcsine().moments(6).unwrap()[..]);
    }

    #[test]
    fn derivatives_by_finite_differences() {
        for law in [Law::semicircle(), Law::arcsine(), Law::bernoulli(), Law::Semicircle { mean: rat(1), variance: ratio(1, 4) }] {
            let p = law.prepare().unwrap();
            let z = c(0.4, 0.3);
            let h = 1e-6;
            let fd = (p.cauchy(z + h).unwrap() - p.cauchy(z - h).unwrap()) / (2.0 * h);
            assert!((fd - p.cauchy_derivative(z).unwrap()).norm() < 1e-7);
        }
    }

    #[test]
    fn eta_tilde_examples() {
        let s = Law::semicircle().prepare().unwrap();
        for x in [c(0.1, -0.2), c(0.3, 0.1), c(1e-5, 1e-5), c(-0.2, -0.01)] {
            let v = s.eta_tilde(x).unwrap();
            assert!((v / (1.0 + v * v) - x).norm() < 1e-12, "{x}");
        }
        let b = Law::bernoulli().prepare().unwrap();
        for x in [c(0.3, -0.2), c(1e-6, 0.0), c(-0.7, 0.4)] {
            assert!((b.eta_tilde(x).unwrap() - x).norm() < 1e-12);
        }
        assert_eq!(s.eta_tilde(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        // Boolean series agrees with the direct formula where both apply
        let a = Law::arcsine().prepare().unwrap();
        let x = c(2e-4, -1e-4);
        let direct = {
            let g = a.cauchy(1.0 / x).unwrap();
            (g - x) / (x * g)
        };
        assert!((a.eta_tilde(x).unwrap() - direct).norm() < 1e-9);
    }

    #[test]
    fn proximity() {
        let s = Law::semicircle().prepare().unwrap();
        assert!(matches!(s.cauchy(c(1.0, 0.0)), Err(XformError::Proximity { .. })));
        assert!(s.cauchy(c(3.0, 0.0)).is_ok());
        let b = Law::bernoulli().prepare().unwrap();
        assert!(b.cauchy(c(1.0, 0.0)).is_err());
        assert!(b.cauchy(c(0.0, 0.0)).is_ok());
    }

    #[test]
    fn presets_and_json() {
        for name in ["semicircle", "arcsine", "bernoulli", "projection:1/4", "zero"] {
            let l = Law::preset(name).unwrap();
            assert_eq!(Law::from_json(&l.to_json()).unwrap(), l);
            assert_eq!(Law::preset(&l.to_json().to_string()).unwrap(), l);
        }
        assert!(Law::preset("cauchy").is_err());
        assert!(Law::preset("projection:3/2").is_err());
        assert!(Law::discrete(vec![(rat(0), ratio(1, 2))]).is_err());
        assert!(Law::from_json(&json!({"law": "semicircle", "variance": "-1"})).is_err());
    }

    #[test]
    fn exact_moments() {
        let m = Law::Arcsine { center: rat(1), radius: rat(2) }.moments(3).unwrap();
        assert_eq!(m, vec![rat(1), rat(1), rat(3), rat(7)]);
        let m = Law::Semicircle { mean: rat(1), variance: rat(2) }.moments(2).unwrap();
        assert_eq!(m, vec![rat(1), rat(1), rat(3)]);
        assert_eq!(Law::projection(ratio(1, 3)).unwrap().moments(3).unwrap(), vec![rat(1), ratio(1, 3), ratio(1, 3), ratio(1, 3)]);
    }
}
