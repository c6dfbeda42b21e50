//! Moments of `W = X + f(X) Y f(X)` for long words.
//!
//! Every word in the expansion of `W^k` has the shape
//! `X^{a_0} Y X^{a_1} ⋯ Y X^{a_r}`. After a cyclic rotation this is
//! `Y b_1 ⋯ Y b_r` with `b_i` powers of `X`, and
//! `φ(Y b_1 ⋯ Y b_r) = Σ_{π ∈ NC(r)} κ_π[Y] φ_{K(π)}[b]`
//! with `K` the Kreweras complement, so only `r` (the number of `Y`s) is
//! subject to the partition cap.

use std::collections::BTreeMap;

use num_traits::Num;

use super::partition::{partitions_cached, Family, Partition};
use super::CombinatError;

/// Exponents `(a_0, …, a_r)` of `X^{a_0} Y X^{a_1} ⋯ Y X^{a_r}`.
pub type XyWord = Vec<usize>;

/// Kreweras complement, read off the cycles of `π^{-1} γ` with
/// `γ = (1 2 … n)` and each block of `π` a cycle in increasing order.
pub fn kreweras_complement(p: &Partition) -> Partition {
    let n = p.n;
    let mut inv = vec![0; n];
    for b in &p.blocks {
        for (k, &i) in b.iter().enumerate() {
            let next = b[(k + 1) % b.len()];
            inv[next] = i;
        }
    }
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cyc.push(i);
            i = inv[(i + 1) % n];
        }
        cyc.sort_unstable();
        blocks.push(cyc);
    }
    blocks.sort();
    Partition { n, blocks }
}

fn get<T: Clone>(v: &[T], k: usize, what: &str) -> Result<T, CombinatError> {
    v.get(k)
        .cloned()
        .ok_or_else(|| CombinatError::IncompleteData(format!("{what} of order {k}")))
}

/// `φ(X^{a_0} Y ⋯ Y X^{a_r})` from moments of `X` (`mx[k] = φ(X^k)`) and free
/// cumulants of `Y` (`ky[k-1] = κ_k(Y)`).
pub fn word_moment<T: Num + Clone>(w: &[usize], mx: &[T], ky: &[T]) -> Result<T, CombinatError> {
    if w.is_empty() {
        return Err(CombinatError::Shape("empty exponent list".into()));
    }
    let r = w.len() - 1;
    if r == 0 {
        return get(mx, w[0], "moment of X");
    }
    let mut b: Vec<usize> = w[1..].to_vec();
    b[r - 1] += w[0];
    let mut acc = T::zero();
    'outer: for p in partitions_cached(r, Family::NonCrossing)?.iter() {
        let mut term = T::one();
        for blk in &p.blocks {
            let k = get(ky, blk.len() - 1, "free cumulant of Y")?;
            if k.is_zero() {
                continue 'outer;
            }
            term = term * k;
        }
        for blk in kreweras_complement(p).blocks {
            let e: usize = blk.iter().map(|&i| b[i]).sum();
            let m = get(mx, e, "moment of X")?;
            if m.is_zero() {
                continue 'outer;
            }
            term = term * m;
        }
        acc = acc + term;
    }
    Ok(acc)
}

/// `W^k` expanded as a combination of [`XyWord`]s; `f[i]` is the coefficient
/// of `x^i`.
pub fn expand_power<T: Num + Clone>(f: &[T], k: usize) -> BTreeMap<XyWord, T> {
    let mut cur: BTreeMap<XyWord, T> = BTreeMap::new();
    cur.insert(vec![0], T::one());
    for _ in 0..k {
        let mut next: BTreeMap<XyWord, T> = BTreeMap::new();
        let mut add = |w: XyWord, c: T| {
            let e = next.entry(w).or_insert_with(T::zero);
            *e = e.clone() + c;
        };
        for (w, c) in &cur {
            let mut wx = w.clone();
            *wx.last_mut().expect("nonempty") += 1;
            add(wx, c.clone());
            for (i, fi) in f.iter().enumerate() {
                if fi.is_zero() {
                    continue;
                }
                for (j, fj) in f.iter().enumerate() {
                    if fj.is_zero() {
                        continue;
                    }
                    let mut wy = w.clone();
                    *wy.last_mut().expect("nonempty") += i;
                    wy.push(j);
                    add(wy, c.clone() * fi.clone() * fj.clone());
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        cur = next;
    }
    cur
}

/// `φ(W^1), …, φ(W^n)`. `mx` must reach order `n·(1 + 2 deg f)` and `ky`
/// order `n`.
pub fn moments_of_w<T: Num + Clone>(mx: &[T], ky: &[T], f: &[T], n: usize) -> Result<Vec<T>, CombinatError> {
    let mut out = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = T::zero();
        for (w, c) in expand_power(f, k) {
            acc = acc + c * word_moment(&w, mx, ky)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// `β_{2k+1}(Y, A, Y, …, A, Y)` for `k = 0..=n`, with `A` free from `Y`,
/// `ma[k] = φ(A^k)` and `ky[k-1] = κ_k(Y)`. Boolean cumulants come from the
/// interval recursion `β(w) = φ(w) − Σ_k β(w_1..w_k) φ(w_{k+1}..w_m)` over
/// prefixes; every subword is again alternating.
pub fn alternating_boolean<T: Num + Clone>(ma: &[T], ky: &[T], n: usize) -> Result<Vec<T>, CombinatError> {
    let len = 2 * n + 1;
    // moment of the alternating word of length `l` starting with Y (p = 0) or A (p = 1)
    let mut memo: BTreeMap<(usize, usize), T> = BTreeMap::new();
    let mut moment = |p: usize, l: usize| -> Result<T, CombinatError> {
        if let Some(v) = memo.get(&(p, l)) {
            return Ok(v.clone());
        }
        let mut w: XyWord = vec![0];
        for i in 0..l {
            if (i + p).is_multiple_of(2) {
                w.push(0);
            } else {
                *w.last_mut().expect("nonempty") += 1;
            }
        }
        let v = word_moment(&w, ma, ky)?;
        memo.insert((p, l), v.clone());
        Ok(v)
    };
    let mut beta: Vec<T> = Vec::with_capacity(len);
    for m in 1..=len {
        let mut b = moment(0, m)?;
        for k in 1..m {
            b = b - beta[k - 1].clone() * moment(k % 2, m - k)?;
        }
        beta.push(b);
    }
    Ok(beta.into_iter().step_by(2).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::cumulants::free_moments_recursive;
    use crate::combinat::words::{free_mixed_moment, Letter, Operands};
    use crate::rational::{rat, ratio};
    use num_rational::BigRational;

    fn semicircle_kappa(len: usize) -> Vec<BigRational> {
        (1..=len).map(|i| rat(if i == 2 { 1 } else { 0 })).collect()
    }

    #[test]
    fn kreweras_small_cases() {
        let p = Partition::new(3, vec![vec![0, 1], vec![2]]).unwrap();
        assert_eq!(kreweras_complement(&p).blocks, vec![vec![0], vec![1, 2]]);
        let zero = Partition::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(kreweras_complement(&zero), Partition::one(3));
        assert_eq!(kreweras_complement(&Partition::one(4)).blocks.len(), 4);
        for n in 1..=7 {
            for p in partitions_cached(n, Family::NonCrossing).unwrap().iter() {
                let k = kreweras_complement(p);
                assert!(k.is_noncrossing());
                assert_eq!(p.blocks.len() + k.blocks.len(), n + 1);
            }
        }
    }

    #[test]
    fn x_plus_xyx_semicircle() {
        let kx = semicircle_kappa(24);
        let mx = free_moments_recursive(&kx, 24).unwrap();
        let m = moments_of_w(&mx, &semicircle_kappa(8), &[rat(0), rat(1)], 8).unwrap();
        let want: Vec<BigRational> = [0, 2, 0, 14, 0, 138, 0, 1586].iter().map(|&k| rat(k)).collect();
        assert_eq!(m, want);
    }

    #[test]
    fn agrees_with_brute_force_on_short_words() {
        let kx: Vec<BigRational> = vec![ratio(1, 2), rat(2), ratio(-1, 3), rat(1), rat(0), ratio(1, 5), rat(2), rat(-1), rat(1), rat(0), rat(1), rat(3)];
        let ky: Vec<BigRational> = vec![ratio(-1, 4), rat(1), rat(1), ratio(2, 3), rat(-1), rat(0), rat(1), rat(1), rat(0), rat(2), rat(1), rat(1)];
        let mx = free_moments_recursive(&kx, 12).unwrap();
        let ops = Operands::new(kx, ky.clone());
        for w in [vec![2, 1, 0], vec![1, 2, 3], vec![0, 0, 0, 0], vec![3, 0, 1, 2, 1], vec![0, 4]] {
            let mut letters = vec![Letter::X; w[0]];
            for &a in &w[1..] {
                letters.push(Letter::Y);
                letters.extend(std::iter::repeat_n(Letter::X, a));
            }
            assert_eq!(word_moment(&w, &mx, &ky).unwrap(), free_mixed_moment(&letters, &ops).unwrap(), "{w:?}");
        }
    }

    #[test]
    fn zero_y_gives_moments_of_x() {
        let mut kx: Vec<BigRational> = vec![rat(1), rat(2), rat(0), rat(1)];
        kx.resize(12, rat(0));
        let mx = free_moments_recursive(&kx, 12).unwrap();
        let m = moments_of_w(&mx, &vec![rat(0); 4], &[rat(1), rat(1)], 4).unwrap();
        assert_eq!(m, mx[1..=4].to_vec());
    }

    #[test]
    fn alternating_boolean_matches_partition_sums() {
        let ka: Vec<BigRational> = vec![ratio(1, 3), rat(1), rat(-1), ratio(1, 2), rat(0), rat(2), rat(1), rat(0), rat(1), rat(1), rat(0), rat(1)];
        let ky: Vec<BigRational> = vec![ratio(1, 2), rat(2), rat(0), rat(-1), rat(1), rat(0), rat(1), ratio(1, 4), rat(0), rat(1), rat(1), rat(1)];
        let ma = free_moments_recursive(&ka, 12).unwrap();
        let b = alternating_boolean(&ma, &ky, 5).unwrap();
        let ops = Operands::new(ka, ky.clone());
        for (k, bk) in b.iter().enumerate() {
            let mut word = vec![Letter::Y];
            for _ in 0..k {
                word.push(Letter::X);
                word.push(Letter::Y);
            }
            assert_eq!(*bk, crate::combinat::words::boolean_from_free(&word, &ops).unwrap(), "k = {k}");
        }
        assert_eq!(b[0], ratio(1, 2));
    }

    #[test]
    fn missing_data_is_reported() {
        let mx = vec![rat(1), rat(0), rat(1)];
        assert!(matches!(
            moments_of_w(&mx, &[rat(1), rat(1)], &[rat(0), rat(1)], 2),
            Err(CombinatError::IncompleteData(_))
        ));
    }
}
