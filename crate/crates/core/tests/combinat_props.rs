use num_rational::BigRational;
use proptest::prelude::*;

use freeconv::combinat::{
    alternating_moment_boolean, boolean_cumulants_recursive, boolean_from_free, cond_exp_coeffs,
    cumulants_from_moments, free_mixed_moment, free_moments_recursive, moments_from_cumulants, moments_of_w,
    words::contract_cond_exp, CumulantData, CumulantKind, Entry, Letter, Operands,
};
use freeconv::rational::{rat, ratio};

const ORDER: usize = 8;

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-7i64..=7, 1i64..=5).prop_map(|(n, d)| ratio(n, d))
}

fn cumulants(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec(small_rat(), n)
}

fn operands() -> impl Strategy<Value = Operands<BigRational>> {
    (cumulants(ORDER), cumulants(ORDER)).prop_map(|(x, y)| Operands::new(x, y))
}

/// Alternating word with powers in `1..=3` and at most `ORDER` letters.
fn alternating_word() -> impl Strategy<Value = Vec<Entry>> {
    (any::<bool>(), prop::collection::vec(1usize..=3, 1..=5)).prop_map(|(lead_x, mut powers)| {
        while powers.iter().sum::<usize>() > ORDER {
            powers.pop();
        }
        let lead = if lead_x { Letter::X } else { Letter::Y };
        powers
            .iter()
            .enumerate()
            .map(|(i, &p)| Entry::new(if i % 2 == 0 { lead } else { lead.swap() }, p))
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trips(vals in cumulants(ORDER)) {
        for kind in [CumulantKind::Free, CumulantKind::Boolean] {
            let c = CumulantData::new(kind, vals.clone());
            let m = moments_from_cumulants(&c, ORDER).unwrap();
            prop_assert_eq!(cumulants_from_moments(&m, kind, ORDER).unwrap(), c.clone());
        }
    }

    #[test]
    fn recursions_match_partition_sums(vals in cumulants(ORDER)) {
        let c = CumulantData::new(CumulantKind::Free, vals.clone());
        let m = moments_from_cumulants(&c, ORDER).unwrap();
        let rec = free_moments_recursive(&vals, ORDER).unwrap();
        prop_assert_eq!(&rec[1..], &m.values[..]);
        let beta = cumulants_from_moments(&m, CumulantKind::Boolean, ORDER).unwrap();
        prop_assert_eq!(boolean_cumulants_recursive(&rec), beta.values.clone());
        let ops = Operands::new(vals, vec![rat(0); ORDER]);
        for k in 1..=ORDER {
            prop_assert_eq!(&boolean_from_free(&vec![Letter::X; k], &ops).unwrap(), &beta.values[k - 1]);
        }
    }

    #[test]
    fn alternating_moments_agree(ops in operands(), w in alternating_word()) {
        let lhs = alternating_moment_boolean(&w, &ops).unwrap();
        prop_assert_eq!(lhs, free_mixed_moment(&Entry::letters(&w), &ops).unwrap());
        // the same word with the roles of X and Y exchanged
        let swapped: Vec<Entry> = w.iter().map(|e| Entry::new(e.letter.swap(), e.power)).collect();
        let lhs = alternating_moment_boolean(&swapped, &ops).unwrap();
        prop_assert_eq!(lhs, free_mixed_moment(&Entry::letters(&swapped), &ops).unwrap());
    }

    #[test]
    fn conditional_expectation_contracts(ops in operands(), w in alternating_word(), j in 0usize..=3) {
        prop_assume!(w.len() % 2 == 1 && w.iter().map(|e| e.power).sum::<usize>() + j <= ORDER);
        let coeffs = cond_exp_coeffs(&w, &ops).unwrap();
        let mut ext = Entry::letters(&w);
        ext.extend(std::iter::repeat_n(w[0].letter.swap(), j));
        prop_assert_eq!(contract_cond_exp(&coeffs, &w, j, &ops).unwrap(), free_mixed_moment(&ext, &ops).unwrap());
    }

    #[test]
    fn constant_f_is_additive_convolution(kx in cumulants(ORDER), ky in cumulants(ORDER)) {
        // f ≡ 1: W = X + Y and free cumulants add
        let mx = free_moments_recursive(&kx, ORDER).unwrap();
        let got = moments_of_w(&mx, &ky, &[rat(1)], ORDER).unwrap();
        let sum: Vec<BigRational> = kx.iter().zip(&ky).map(|(a, b)| a + b).collect();
        prop_assert_eq!(got, free_moments_recursive(&sum, ORDER).unwrap()[1..].to_vec());
    }

    #[test]
    fn zero_y_gives_x(kx in cumulants(15), f in prop::collection::vec(small_rat(), 1..3)) {
        let n = 3;
        let mx = free_moments_recursive(&kx, n * (2 * f.len() - 1)).unwrap();
        let got = moments_of_w(&mx, &vec![rat(0); n], &f, n).unwrap();
        prop_assert_eq!(got, mx[1..=n].to_vec());
    }
}
