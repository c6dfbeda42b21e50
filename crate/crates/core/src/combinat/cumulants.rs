//! Univariate moment-cumulant transforms, by partition sums (capped) and by
//! the generating-function recursions (uncapped).

use std::fmt;

use num_rational::BigRational;
use num_traits::{Num, Zero};
use serde_json::{json, Value};

use super::partition::{block_type_counts, Family, PARTITION_CAP};
use super::CombinatError;
use crate::rational::{format_rational, parse_rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CumulantKind {
    Moment,
    Free,
    Boolean,
}

impl CumulantKind {
    pub fn name(self) -> &'static str {
        match self {
            CumulantKind::Moment => "moment",
            CumulantKind::Free => "free",
            CumulantKind::Boolean => "boolean",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "moment" | "moments" => Some(CumulantKind::Moment),
            "free" => Some(CumulantKind::Free),
            "boolean" => Some(CumulantKind::Boolean),
            _ => None,
        }
    }

    fn family(self) -> Result<Family, CombinatError> {
        match self {
            CumulantKind::Free => Ok(Family::NonCrossing),
            CumulantKind::Boolean => Ok(Family::Interval),
            CumulantKind::Moment => Err(CombinatError::Shape("expected a cumulant kind".into())),
        }
    }
}

/// `values[k - 1]` is the order-`k` entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantData {
    pub kind: CumulantKind,
    pub values: Vec<BigRational>,
}

impl CumulantData {
    pub fn new(kind: CumulantKind, values: Vec<BigRational>) -> Self {
        CumulantData { kind, values }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, k: usize) -> Option<&BigRational> {
        k.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "order": self.order(),
            "values": self.values.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, CombinatError> {
        let bad = |m: &str| CombinatError::Shape(m.to_string());
        let kind = v["kind"]
            .as_str()
            .and_then(CumulantKind::from_name)
            .ok_or_else(|| bad("missing or unknown \"kind\""))?;
        let values = v["values"]
            .as_array()
            .ok_or_else(|| bad("missing \"values\""))?
            .iter()
            .map(|x| {
                x.as_str()
                    .ok_or_else(|| bad("values must be strings"))
                    .and_then(|s| parse_rational(s).map_err(|e| bad(&e.to_string())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(n) = v.get("order").and_then(Value::as_u64) {
            if n as usize != values.len() {
                return Err(bad("\"order\" disagrees with the number of values"));
            }
        }
        Ok(CumulantData { kind, values })
    }
}

impl fmt::Display for CumulantData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(format_rational).collect();
        write!(f, "{}", v.join(","))
    }
}

fn need(c: &CumulantData, n: usize) -> Result<(), CombinatError> {
    if n == 0 || n > PARTITION_CAP {
        return Err(CombinatError::SizeCap { n, cap: PARTITION_CAP });
    }
    if c.values.len() < n {
        return Err(CombinatError::IncompleteData(format!(
            "need {} entries up to order {n}, have {}",
            c.kind.name(),
            c.values.len()
        )));
    }
    Ok(())
}

/// `m_n = Σ_π c_π` over NC(n) (free) or IP(n) (Boolean), for n = 1..=N.
pub fn moments_from_cumulants(c: &CumulantData, n: usize) -> Result<CumulantData, CombinatError> {
    let family = c.kind.family()?;
    need(c, n)?;
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let mut m = BigRational::zero();
        for (sizes, count) in block_type_counts(k, family)? {
            let mut term = BigRational::from_integer(count.into());
            for s in sizes {
                term *= &c.values[s - 1];
            }
            m += term;
        }
        out.push(m);
    }
    Ok(CumulantData::new(CumulantKind::Moment, out))
}

/// Möbius inversion on the respective lattice, solved order by order.
pub fn cumulants_from_moments(
    m: &CumulantData,
    kind: CumulantKind,
    n: usize,
) -> Result<CumulantData, CombinatError> {
    let family = kind.family()?;
    if m.kind != CumulantKind::Moment {
        return Err(CombinatError::Shape("expected moment data".into()));
    }
    need(m, n)?;
    let mut out: Vec<BigRational> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut rest = BigRational::zero();
        for (sizes, count) in block_type_counts(k, family)? {
            if sizes == [k] {
                continue;
            }
            let mut term = BigRational::from_integer(count.into());
            for s in sizes {
                term *= &out[s - 1];
            }
            rest += term;
        }
        out.push(&m.values[k - 1] - rest);
    }
    Ok(CumulantData::new(kind, out))
}

/// `m_0..m_n` from free cumulants `kappa[k-1] = κ_k` by
/// `m_n = Σ_s κ_s Σ_{i_1+…+i_s = n−s} m_{i_1}⋯m_{i_s}`.
pub fn free_moments_recursive<T: Num + Clone>(kappa: &[T], n: usize) -> Result<Vec<T>, CombinatError> {
    if kappa.len() < n {
        return Err(CombinatError::IncompleteData(format!(
            "need free cumulants up to order {n}, have {}",
            kappa.len()
        )));
    }
    let mut m: Vec<T> = vec![T::one()];
    for k in 1..=n {
        // pow[s][j]: coefficient of t^j in (Σ_{i<k} m_i t^i)^s
        let mut acc = T::zero();
        let mut pow: Vec<T> = vec![T::zero(); k];
        pow[0] = T::one();
        for s in 1..=k {
            let mut next = vec![T::zero(); k];
            for (i, a) in pow.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in m.iter().enumerate() {
                    if i + j >= k {
                        break;
                    }
                    next[i + j] = next[i + j].clone() + a.clone() * b.clone();
                }
            }
            pow = next;
            if !kappa[s - 1].is_zero() {
                acc = acc + kappa[s - 1].clone() * pow[k - s].clone();
            }
        }
        m.push(acc);
    }
    Ok(m)
}

/// `m_0..m_n` from Boolean cumulants: `m_n = Σ_s β_s m_{n−s}`.
pub fn boolean_moments_recursive<T: Num + Clone>(beta: &[T], n: usize) -> Result<Vec<T>, CombinatError> {
    if beta.len() < n {
        return Err(CombinatError::IncompleteData(format!(
            "need Boolean cumulants up to order {n}, have {}",
            beta.len()
        )));
    }
    let mut m = vec![T::one()];
    for k in 1..=n {
        let mut acc = T::zero();
        for s in 1..=k {
            acc = acc + beta[s - 1].clone() * m[k - s].clone();
        }
        m.push(acc);
    }
    Ok(m)
}

/// Inverse of [`boolean_moments_recursive`]; `moments[0]` must be 1.
pub fn boolean_cumulants_recursive<T: Num + Clone>(moments: &[T]) -> Vec<T> {
    let mut beta: Vec<T> = Vec::new();
    for k in 1..moments.len() {
        let mut acc = moments[k].clone();
        for s in 1..k {
            acc = acc - beta[s - 1].clone() * moments[k - s].clone();
        }
        beta.push(acc);
    }
    beta
}
