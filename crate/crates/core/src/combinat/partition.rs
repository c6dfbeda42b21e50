//! Set partitions of `{1..n}` and the lattices NC(n), IP(n), NCirr(n).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use super::CombinatError;

/// Largest ground set handled by brute-force enumeration.
pub const PARTITION_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    All,
    NonCrossing,
    Interval,
    NcIrreducible,
}

/// Blocks hold 0-based positions, each block sorted, blocks ordered by their
/// smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    pub n: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, mut blocks: Vec<Vec<usize>>) -> Result<Self, CombinatError> {
        let mut seen = vec![false; n];
        for b in blocks.iter_mut() {
            if b.is_empty() {
                return Err(CombinatError::Shape("empty block".into()));
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= n || seen[i] {
                    return Err(CombinatError::Shape(format!("bad element {i}")));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(CombinatError::Shape("blocks do not cover the ground set".into()));
        }
        blocks.sort();
        Ok(Partition { n, blocks })
    }

    pub fn one(n: usize) -> Self {
        Partition {
            n,
            blocks: vec![(0..n).collect()],
        }
    }

    fn block_of(&self) -> Vec<usize> {
        let mut lab = vec![0; self.n];
        for (k, b) in self.blocks.iter().enumerate() {
            for &i in b {
                lab[i] = k;
            }
        }
        lab
    }

    pub fn is_noncrossing(&self) -> bool {
        let lab = self.block_of();
        for a in 0..self.n {
            for b in a + 1..self.n {
                for c in b + 1..self.n {
                    if lab[a] == lab[b] {
                        continue;
                    }
                    for d in c + 1..self.n {
                        if lab[a] == lab[c] && lab[b] == lab[d] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn is_interval(&self) -> bool {
        self.blocks
            .iter()
            .all(|b| b.windows(2).all(|w| w[1] == w[0] + 1))
    }

    pub fn is_irreducible(&self) -> bool {
        self.n > 0 && self.is_noncrossing() && self.block_of()[0] == self.block_of()[self.n - 1]
    }

    pub fn in_family(&self, f: Family) -> bool {
        match f {
            Family::All => true,
            Family::NonCrossing => self.is_noncrossing(),
            Family::Interval => self.is_interval(),
            Family::NcIrreducible => self.is_irreducible(),
        }
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.blocks.iter().map(|b| b.len()).collect();
        s.sort_unstable();
        s
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let inner: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
                format!("{{{}}}", inner.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(""))
    }
}

fn check_size(n: usize) -> Result<(), CombinatError> {
    if n == 0 || n > PARTITION_CAP {
        return Err(CombinatError::SizeCap { n, cap: PARTITION_CAP });
    }
    Ok(())
}

/// Restricted growth strings; `nc` prunes crossings as elements are placed.
fn grow(n: usize, nc: bool) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    fn rec(i: usize, n: usize, nc: bool, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Partition>) {
        if i == n {
            out.push(Partition {
                n,
                blocks: blocks.clone(),
            });
            return;
        }
        for k in 0..blocks.len() {
            if nc {
                let last = *blocks[k].last().expect("nonempty");
                // every element strictly between `last` and `i` must sit in a
                // block that starts after `last`
                let crossing = blocks
                    .iter()
                    .enumerate()
                    .any(|(c, b)| c != k && b[0] < last && b.iter().any(|&e| e > last && e < i));
                if crossing {
                    continue;
                }
            }
            blocks[k].push(i);
            rec(i + 1, n, nc, blocks, out);
            blocks[k].pop();
        }
        blocks.push(vec![i]);
        rec(i + 1, n, nc, blocks, out);
        blocks.pop();
    }
    rec(0, n, nc, &mut blocks, &mut out);
    out
}

fn intervals(n: usize) -> Vec<Partition> {
    (0..1u32 << (n - 1))
        .map(|mask| {
            let mut blocks = vec![vec![0]];
            for i in 1..n {
                if mask >> (i - 1) & 1 == 1 {
                    blocks.push(vec![i]);
                } else {
                    blocks.last_mut().expect("nonempty").push(i);
                }
            }
            Partition { n, blocks }
        })
        .collect()
}

/// All partitions of `{1..n}` in `family`, in a deterministic order.
pub fn enumerate_partitions(n: usize, family: Family) -> Result<Vec<Partition>, CombinatError> {
    check_size(n)?;
    Ok(match family {
        Family::All => grow(n, false),
        Family::NonCrossing => grow(n, true),
        Family::Interval => intervals(n),
        Family::NcIrreducible => grow(n, true)
            .into_iter()
            .filter(|p| p.blocks[0].last() == Some(&(n - 1)))
            .collect(),
    })
}

/// Shared, cached copy of [`enumerate_partitions`].
pub fn partitions_cached(n: usize, family: Family) -> Result<Arc<Vec<Partition>>, CombinatError> {
    type Cache = Mutex<BTreeMap<(usize, Family), Arc<Vec<Partition>>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    check_size(n)?;
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().expect("cache").get(&(n, family)) {
        return Ok(v.clone());
    }
    let v = Arc::new(enumerate_partitions(n, family)?);
    cache.lock().expect("cache").insert((n, family), v.clone());
    Ok(v)
}

/// Multiset of block sizes → number of partitions in the family with that
/// type. Cached; this is all the univariate transforms need.
pub fn block_type_counts(n: usize, family: Family) -> Result<Vec<(Vec<usize>, u64)>, CombinatError> {
    static CACHE: OnceLock<Mutex<BTreeMap<(usize, Family), Vec<(Vec<usize>, u64)>>>> = OnceLock::new();
    check_size(n)?;
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(v) = cache.lock().expect("cache").get(&(n, family)) {
        return Ok(v.clone());
    }
    let mut counts: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
    for p in partitions_cached(n, family)?.iter() {
        *counts.entry(p.block_sizes()).or_insert(0) += 1;
    }
    let v: Vec<(Vec<usize>, u64)> = counts.into_iter().collect();
    cache.lock().expect("cache").insert((n, family), v.clone());
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::catalan;

    fn bell(n: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                let x = next.last().unwrap() + v;
                next.push(x);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn spot_counts() {
        assert_eq!(enumerate_partitions(3, Family::NonCrossing).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(4, Family::Interval).unwrap().len(), 8);
        assert_eq!(enumerate_partitions(4, Family::NcIrreducible).unwrap().len(), 5);
        assert_eq!(enumerate_partitions(4, Family::All).unwrap().len(), 15);
    }

    #[test]
    fn family_counts_up_to_ten() {
        for n in 1..=10 {
            let nc = enumerate_partitions(n, Family::NonCrossing).unwrap();
            assert_eq!(nc.len() as u64, u64::try_from(catalan(n as u64)).unwrap());
            assert!(nc.iter().all(|p| p.is_noncrossing()));
            assert_eq!(enumerate_partitions(n, Family::Interval).unwrap().len(), 1 << (n - 1));
            let irr = enumerate_partitions(n, Family::NcIrreducible).unwrap();
            assert_eq!(irr.len() as u64, u64::try_from(catalan(n as u64 - 1)).unwrap());
            assert!(irr.iter().all(|p| p.is_irreducible()));
        }
        for n in 1..=8 {
            let all = enumerate_partitions(n, Family::All).unwrap();
            assert_eq!(all.len() as u64, bell(n));
            let nc_filtered = all.iter().filter(|p| p.is_noncrossing()).count();
            assert_eq!(nc_filtered as u64, u64::try_from(catalan(n as u64)).unwrap());
        }
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        let mut all = enumerate_partitions(7, Family::All).unwrap();
        let len = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), len);
    }

    #[test]
    fn predicates() {
        let crossing = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        assert!(!crossing.is_noncrossing());
        let nested = Partition::new(4, vec![vec![0, 3], vec![1, 2]]).unwrap();
        assert!(nested.is_noncrossing() && nested.is_irreducible() && !nested.is_interval());
        assert_eq!(nested.to_string(), "{1,4}{2,3}");
        assert!(Partition::new(3, vec![vec![0, 1]]).is_err());
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            enumerate_partitions(13, Family::Interval),
            Err(CombinatError::SizeCap { n: 13, .. })
        ));
        assert!(enumerate_partitions(0, Family::All).is_err());
    }
}
