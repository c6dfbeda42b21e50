use num_rational::BigRational;
use proptest::prelude::*;

use freeconv::alg::newton::branch_families;
use freeconv::alg::poly::unit_exps;
use freeconv::alg::{
    alg_combine, isolate_real_roots, newton_polygon, resultant, series_solve, BranchSpec, CombineOp, MPoly,
    ResultantMethod, Var,
};
use freeconv::rational::{rat, ratio};

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

/// Polynomial in `x` and `z` with `deg_x` exactly `dx`.
fn bivariate(max_dx: u32, max_dz: u32) -> impl Strategy<Value = MPoly> {
    (1..=max_dx)
        .prop_flat_map(move |dx| {
            let n = ((dx + 1) * (max_dz + 1)) as usize;
            (Just(dx), prop::collection::vec(-4i64..=4, n), 1i64..=3)
        })
        .prop_map(move |(dx, cs, lead)| {
            let mut p = MPoly::zero();
            for i in 0..=dx {
                for j in 0..=max_dz {
                    let c = cs[(i * (max_dz + 1) + j) as usize];
                    if c != 0 && i < dx {
                        let mut e = unit_exps(Var::X, i);
                        e[Var::Z.index()] = j;
                        p.add_term(e, rat(c));
                    }
                }
            }
            p.add_term(unit_exps(Var::X, dx), rat(lead));
            p
        })
}

fn linear(a: &BigRational) -> MPoly {
    &MPoly::var(Var::X) - &MPoly::constant(a.clone())
}

fn product_of_linears(roots: &[BigRational]) -> MPoly {
    roots.iter().fold(MPoly::one(), |acc, r| &acc * &linear(r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resultant_methods_agree(p in bivariate(4, 2), q in bivariate(4, 2)) {
        let a = resultant(&p, &q, Var::X, ResultantMethod::Sylvester).unwrap();
        let b = resultant(&p, &q, Var::X, ResultantMethod::Prs).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resultant_is_multiplicative(p in bivariate(3, 1), q in bivariate(2, 1), r in bivariate(3, 1)) {
        let pq = &p * &q;
        let lhs = resultant(&pq, &r, Var::X, ResultantMethod::Prs).unwrap();
        let rhs = &resultant(&p, &r, Var::X, ResultantMethod::Prs).unwrap()
            * &resultant(&q, &r, Var::X, ResultantMethod::Prs).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_vanishes_on_common_root(a in small_rat(), b in small_rat(), c in small_rat()) {
        let p = product_of_linears(&[a.clone(), b]);
        let q = product_of_linears(&[a, c]);
        prop_assert!(resultant(&p, &q, Var::X, ResultantMethod::Sylvester).unwrap().is_zero());
    }

    #[test]
    fn combine_is_sound(ra in prop::collection::vec(small_rat(), 1..3), rb in prop::collection::vec(small_rat(), 1..3)) {
        let (pa, pb) = (product_of_linears(&ra), product_of_linears(&rb));
        for (op, f) in [
            (CombineOp::Add, (|a: &BigRational, b: &BigRational| Some(a + b)) as fn(&BigRational, &BigRational) -> Option<BigRational>),
            (CombineOp::Sub, |a, b| Some(a - b)),
            (CombineOp::Mul, |a, b| Some(a * b)),
            (CombineOp::Div, |a, b| if num_traits::Zero::is_zero(b) { None } else { Some(a / b) }),
        ] {
            let Ok(c) = alg_combine(&pa, &pb, op, Var::X) else {
                // only division by a polynomial with root 0 may be refused
                prop_assert!(matches!(op, CombineOp::Div));
                continue;
            };
            prop_assert!(!c.is_zero());
            for a in &ra {
                for b in &rb {
                    if let Some(v) = f(a, b) {
                        prop_assert!(c.eval_rational(Var::X, &v).is_zero(), "{:?}: {} at {}", op, c, v);
                    }
                }
            }
        }
    }

    #[test]
    fn newton_polygon_finds_every_branch(
        etas in prop::collection::vec((-5i64..=5).prop_filter("nonzero", |e| *e != 0), 3),
        gammas in prop::sample::subsequence(vec![0u32, 1, 2, 3, 4], 3),
    ) {
        // p = Π (x − η_i z^{γ_i}) with distinct exponents
        let mut p = MPoly::one();
        for (eta, g) in etas.iter().zip(&gammas) {
            let mut e = unit_exps(Var::Z, *g);
            e[Var::X.index()] = 0;
            let factor = &MPoly::var(Var::X) - &MPoly::monomial(rat(*eta), e);
            p = &p * &factor;
        }
        let np = newton_polygon(&p, Var::X).unwrap();
        let found = np.gammas();
        let families = branch_families(&p, Var::X).unwrap();
        for (eta, g) in etas.iter().zip(&gammas) {
            let g = rat(*g as i64);
            prop_assert!(found.contains(&g), "{:?} missing {}", found, g);
            let fam = families.iter().find(|f| f.gamma == g).unwrap();
            prop_assert!(fam.rational_etas.contains(&rat(*eta)));
            // the branch is the monomial itself
            let s = series_solve(&p, Var::X, &BranchSpec::rational(g.clone(), rat(*eta), "test"), 6).unwrap();
            for (k, c) in s.iter().enumerate() {
                let want = if rat(k as i64) == g { rat(*eta) } else { rat(0) };
                prop_assert_eq!(c, &want);
            }
        }
    }

    #[test]
    fn real_roots_are_isolated(mut roots in prop::collection::btree_set((-40i64..=40, 1i64..=3), 1..6)) {
        let roots: Vec<BigRational> = std::mem::take(&mut roots).into_iter().map(|(n, d)| ratio(n, d)).collect();
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        // a factor without real roots must not add intervals
        let p = &product_of_linears(&distinct) * &MPoly::parse("x^2 + 1").unwrap();
        let found = isolate_real_roots(&p, &ratio(1, 1_000_000)).unwrap();
        prop_assert_eq!(found.len(), distinct.len());
        for (iv, r) in found.iter().zip(&distinct) {
            prop_assert!(iv.lo <= *r && *r <= iv.hi, "{} not in [{}, {}]", r, iv.lo, iv.hi);
        }
    }
}
