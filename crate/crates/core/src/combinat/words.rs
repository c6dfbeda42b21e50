//! Mixed moments and Boolean cumulants of words in two free variables.
//!
//! The brute-force oracle sums over colored noncrossing partitions; a block
//! touching both letters is a mixed free cumulant and contributes zero.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Num;

use super::cumulants::free_moments_recursive;
use super::partition::{partitions_cached, Family, Partition, PARTITION_CAP};
use super::CombinatError;

/// Longest word (in letters) accepted by the brute-force routines.
pub const WORD_CAP: usize = PARTITION_CAP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }
}

/// A power `letter^power` used as one argument of a multilinear functional.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Entry {
    pub letter: Letter,
    pub power: usize,
}

impl Entry {
    pub fn new(letter: Letter, power: usize) -> Self {
        Entry { letter, power }
    }

    /// Parses words like `"XYXY"`, `"X^2 Y X"` or `"Y*X^3*Y"`.
    pub fn parse_word(s: &str) -> Result<Vec<Entry>, CombinatError> {
        let mut out = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let letter = match c {
                'X' | 'x' => Letter::X,
                'Y' | 'y' => Letter::Y,
                ' ' | '*' | '·' => continue,
                _ => return Err(CombinatError::Shape(format!("unexpected {c:?} in word"))),
            };
            let mut power = 1;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                power = digits
                    .parse()
                    .map_err(|_| CombinatError::Shape("missing exponent".into()))?;
            }
            if power == 0 {
                return Err(CombinatError::Shape("zero exponent".into()));
            }
            out.push(Entry { letter, power });
        }
        Ok(out)
    }

    pub fn letters(word: &[Entry]) -> Vec<Letter> {
        word.iter()
            .flat_map(|e| std::iter::repeat_n(e.letter, e.power))
            .collect()
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = match self.letter {
            Letter::X => "X",
            Letter::Y => "Y",
        };
        if self.power == 1 {
            write!(f, "{l}")
        } else {
            write!(f, "{l}^{}", self.power)
        }
    }
}

/// Free cumulants of the two variables; `x[k-1] = κ_k(X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Operands<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Num + Clone> Operands<T> {
    pub fn new(x: Vec<T>, y: Vec<T>) -> Self {
        Operands { x, y }
    }

    pub fn kappa(&self, l: Letter, k: usize) -> Result<T, CombinatError> {
        let table = match l {
            Letter::X => &self.x,
            Letter::Y => &self.y,
        };
        table.get(k - 1).cloned().ok_or_else(|| {
            CombinatError::IncompleteData(format!("free cumulant of order {k} for {l:?}"))
        })
    }

    pub fn swapped(&self) -> Self {
        Operands {
            x: self.y.clone(),
            y: self.x.clone(),
        }
    }

    /// `φ(l^0), …, φ(l^n)`.
    pub fn moments(&self, l: Letter, n: usize) -> Result<Vec<T>, CombinatError> {
        let table = match l {
            Letter::X => &self.x,
            Letter::Y => &self.y,
        };
        free_moments_recursive(table, n)
    }
}

fn check_len(n: usize) -> Result<(), CombinatError> {
    if n == 0 || n > WORD_CAP {
        return Err(CombinatError::SizeCap { n, cap: WORD_CAP });
    }
    Ok(())
}

/// `κ_π` for the colored word, zero when some block is not monochromatic.
fn colored_kappa<T: Num + Clone>(p: &Partition, letters: &[Letter], ops: &Operands<T>) -> Result<T, CombinatError> {
    let mut prod = T::one();
    for b in &p.blocks {
        let l = letters[b[0]];
        if b.iter().any(|&i| letters[i] != l) {
            return Ok(T::zero());
        }
        let k = ops.kappa(l, b.len())?;
        if k.is_zero() {
            return Ok(T::zero());
        }
        prod = prod * k;
    }
    Ok(prod)
}

fn colored_sum<T, F>(letters: &[Letter], ops: &Operands<T>, family: Family, keep: F) -> Result<T, CombinatError>
where
    T: Num + Clone,
    F: Fn(&Partition) -> bool,
{
    check_len(letters.len())?;
    let mut acc = T::zero();
    for p in partitions_cached(letters.len(), family)?.iter() {
        if keep(p) {
            acc = acc + colored_kappa(p, letters, ops)?;
        }
    }
    Ok(acc)
}

/// `φ(w_1 ⋯ w_L)` for free `X`, `Y`.
pub fn free_mixed_moment<T: Num + Clone>(word: &[Letter], ops: &Operands<T>) -> Result<T, CombinatError> {
    colored_sum(word, ops, Family::NonCrossing, |_| true)
}

/// `β_L(w_1, …, w_L)` as the sum of `κ_π` over irreducible noncrossing `π`.
pub fn boolean_from_free<T: Num + Clone>(word: &[Letter], ops: &Operands<T>) -> Result<T, CombinatError> {
    colored_sum(word, ops, Family::NcIrreducible, |_| true)
}

/// Boolean cumulant whose arguments are the products `entries[i]`: sums
/// `κ_π` over `π ∈ NC(L)` for which `π ∨ σ` joins the first and last letter,
/// `σ` being the grouping of letters into entries.
pub fn boolean_cumulant_entries<T: Num + Clone>(entries: &[Entry], ops: &Operands<T>) -> Result<T, CombinatError> {
    if entries.iter().any(|e| e.power == 0) {
        return Err(CombinatError::Shape("zero exponent".into()));
    }
    let letters = Entry::letters(entries);
    let mut group = Vec::with_capacity(letters.len());
    for (g, e) in entries.iter().enumerate() {
        group.extend(std::iter::repeat_n(g, e.power));
    }
    let last = letters.len().saturating_sub(1);
    colored_sum(&letters, ops, Family::NonCrossing, |p| {
        // Union-find over entries; π's blocks glue the entries they touch.
        let mut parent: Vec<usize> = (0..entries.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for b in &p.blocks {
            let r = find(&mut parent, group[b[0]]);
            for &i in &b[1..] {
                let s = find(&mut parent, group[i]);
                parent[s] = r;
            }
        }
        find(&mut parent, group[0]) == find(&mut parent, group[last])
    })
}

fn check_alternating(entries: &[Entry]) -> Result<(), CombinatError> {
    if entries.is_empty() {
        return Err(CombinatError::Shape("empty word".into()));
    }
    if entries.windows(2).any(|w| w[0].letter == w[1].letter) {
        return Err(CombinatError::Shape("word is not alternating".into()));
    }
    if entries.iter().any(|e| e.power == 0) {
        return Err(CombinatError::Shape("zero exponent".into()));
    }
    let total: usize = entries.iter().map(|e| e.power).sum();
    check_len(total)
}

/// Product over consecutive runs `A_{i_j+1} B_{i_j+1} … A_{i_{j+1}}` of
/// their Boolean cumulants, with `i_0 = 0` and `i_{k+1} = n`.
fn run_product<T: Num + Clone>(
    entries: &[Entry],
    cuts: &[usize],
    n: usize,
    ops: &Operands<T>,
) -> Result<T, CombinatError> {
    let mut prod = T::one();
    let mut prev = 0;
    for &i in cuts.iter().chain(std::iter::once(&n)) {
        let b = boolean_cumulant_entries(&entries[2 * prev..2 * i - 1], ops)?;
        if b.is_zero() {
            return Ok(T::zero());
        }
        prod = prod * b;
        prev = i;
    }
    Ok(prod)
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    // subsets of {1..n-1}, as increasing lists
    let m = n.saturating_sub(1);
    (0u32..1 << m).map(move |mask| (1..=m).filter(|&i| mask >> (i - 1) & 1 == 1).collect())
}

/// `φ(A_1 B_1 ⋯ A_n B_n)` through Boolean cumulants of the `A`-led runs and
/// plain moments of the `B` letter. Either letter may lead; odd-length words
/// are rotated (the state is tracial) so that they end in the other letter.
pub fn alternating_moment_boolean<T: Num + Clone>(entries: &[Entry], ops: &Operands<T>) -> Result<T, CombinatError> {
    check_alternating(entries)?;
    let mut w = entries.to_vec();
    if w.len() % 2 == 1 {
        let last = w.pop().expect("nonempty");
        if w.is_empty() {
            return Ok(ops.moments(last.letter, last.power)?[last.power].clone());
        }
        w[0].power += last.power;
    }
    let n = w.len() / 2;
    let b_letter = w[1].letter;
    let b_total: usize = w.iter().skip(1).step_by(2).map(|e| e.power).sum();
    let mb = ops.moments(b_letter, b_total)?;
    let mut acc = T::zero();
    for cuts in subsets(n) {
        let power: usize = cuts.iter().map(|&i| w[2 * i - 1].power).sum::<usize>() + w[2 * n - 1].power;
        let m = mb[power].clone();
        if m.is_zero() {
            continue;
        }
        acc = acc + m * run_product(&w, &cuts, n, ops)?;
    }
    Ok(acc)
}

/// Coefficients of `E[A_1 B_1 ⋯ B_{n−1} A_n | B]` in the monomials
/// `B_{i_1} ⋯ B_{i_k}`, keyed by the 1-based index lists `[i_1, …, i_k]`
/// (all `2^{n−1}` keys present, zeros included).
pub fn cond_exp_coeffs<T: Num + Clone>(
    entries: &[Entry],
    ops: &Operands<T>,
) -> Result<BTreeMap<Vec<usize>, T>, CombinatError> {
    check_alternating(entries)?;
    if entries.len().is_multiple_of(2) {
        return Err(CombinatError::Shape("word must start and end with the same letter".into()));
    }
    let n = entries.len().div_ceil(2);
    let mut out = BTreeMap::new();
    for cuts in subsets(n) {
        let c = run_product(entries, &cuts, n, ops)?;
        out.insert(cuts, c);
    }
    Ok(out)
}

/// `Σ_S coeff_S · φ(B_{i_1} ⋯ B_{i_k} B^j)`, the left side of the
/// conditional-expectation test against `b = B^j`.
pub fn contract_cond_exp<T: Num + Clone>(
    coeffs: &BTreeMap<Vec<usize>, T>,
    entries: &[Entry],
    j: usize,
    ops: &Operands<T>,
) -> Result<T, CombinatError> {
    let b = entries[0].letter.swap();
    let total: usize = entries.iter().skip(1).step_by(2).map(|e| e.power).sum::<usize>() + j;
    let m = ops.moments(b, total)?;
    let mut acc = T::zero();
    for (cuts, c) in coeffs {
        let p: usize = cuts.iter().map(|&i| entries[2 * i - 1].power).sum::<usize>() + j;
        acc = acc + c.clone() * m[p].clone();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use num_rational::BigRational;

    fn semi() -> Operands<BigRational> {
        let k: Vec<BigRational> = (1..=12).map(|i| rat(if i == 2 { 1 } else { 0 })).collect();
        Operands::new(k.clone(), k)
    }

    fn bern() -> Vec<BigRational> {
        // free cumulants of (δ_{-1} + δ_1)/2: 0, 1, 0, -1, 0, 2, 0, -5, …
        let mut k = vec![rat(0); 12];
        let mut sign = 1;
        for j in 1..=6 {
            k[2 * j - 1] = rat(sign) * BigRational::from_integer(crate::rational::catalan(j as u64 - 1));
            sign = -sign;
        }
        k
    }

    fn word(s: &str) -> Vec<Letter> {
        Entry::letters(&Entry::parse_word(s).unwrap())
    }

    #[test]
    fn spot_moments() {
        let o = semi();
        assert_eq!(free_mixed_moment(&word("XXYY"), &o).unwrap(), rat(1));
        assert_eq!(free_mixed_moment(&word("XYXY"), &o).unwrap(), rat(0));
        assert_eq!(free_mixed_moment(&word("XYXXYX"), &o).unwrap(), rat(1));
    }

    #[test]
    fn spot_boolean() {
        let o = semi();
        assert_eq!(boolean_from_free(&word("XX"), &o).unwrap(), rat(1));
        assert_eq!(boolean_from_free(&word("XXXXXX"), &o).unwrap(), rat(2));
        assert_eq!(boolean_from_free(&word("XY"), &o).unwrap(), rat(0));
        // the entry form agrees with singleton entries
        let e = Entry::parse_word("XXXXXX").unwrap();
        assert_eq!(boolean_cumulant_entries(&e, &o).unwrap(), rat(2));
    }

    #[test]
    fn bernoulli_moments() {
        let o = Operands::new(bern(), bern());
        let m = o.moments(Letter::X, 8).unwrap();
        assert_eq!(m, [1, 0, 1, 0, 1, 0, 1, 0, 1].iter().map(|&k| rat(k)).collect::<Vec<_>>());
    }

    #[test]
    fn alternating_examples() {
        let mut o = semi();
        o.x[0] = rat(3);
        o.y[0] = rat(-2);
        let xy = Entry::parse_word("XY").unwrap();
        assert_eq!(alternating_moment_boolean(&xy, &o).unwrap(), rat(-6));
        let o = Operands::new(semi().x, bern());
        let w = Entry::parse_word("XYXY").unwrap();
        assert_eq!(alternating_moment_boolean(&w, &o).unwrap(), rat(0));
        assert_eq!(free_mixed_moment(&word("XYXY"), &o).unwrap(), rat(0));
        let o = semi();
        let w = Entry::parse_word("YXYXYX").unwrap();
        let v = alternating_moment_boolean(&w, &o).unwrap();
        assert_eq!(v, free_mixed_moment(&word("YXYXYX"), &o).unwrap());
        assert_eq!(v, rat(0));
        let w = Entry::parse_word("Y^2 X^2 Y X^3 Y").unwrap();
        assert_eq!(
            alternating_moment_boolean(&w, &o).unwrap(),
            free_mixed_moment(&Entry::letters(&w), &o).unwrap()
        );
    }

    #[test]
    fn conditional_expectation_examples() {
        let mut o = semi();
        let c = cond_exp_coeffs(&Entry::parse_word("Y").unwrap(), &o).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![(vec![], rat(0))]);
        o.x[0] = rat(5);
        let c = cond_exp_coeffs(&Entry::parse_word("YXY").unwrap(), &o).unwrap();
        assert_eq!(c[&vec![]], rat(5));
        assert_eq!(c[&vec![1]], rat(0));
        let c = cond_exp_coeffs(&Entry::parse_word("YXYXY").unwrap(), &o).unwrap();
        assert!(c.values().all(|v| *v == rat(0)));
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn shape_errors() {
        let o = semi();
        let bad = Entry::parse_word("XXY").unwrap();
        assert!(matches!(alternating_moment_boolean(&bad, &o), Err(CombinatError::Shape(_))));
        assert!(matches!(cond_exp_coeffs(&Entry::parse_word("YX").unwrap(), &o), Err(CombinatError::Shape(_))));
        assert!(matches!(free_mixed_moment(&[Letter::X; 13], &o), Err(CombinatError::SizeCap { .. })));
        assert!(Entry::parse_word("XZ").is_err());
    }
}
