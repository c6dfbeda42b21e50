//! Annihilating polynomials for sums, differences, products and quotients
//! of algebraic quantities, by resultants.

use super::poly::{MPoly, Var};
use super::resultant::res;
use super::AlgError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A variable used by none of the inputs, for the elimination.
pub fn fresh_var(polys: &[&MPoly]) -> Result<Var, AlgError> {
    [Var::T, Var::Lambda, Var::Eta, Var::S, Var::Y, Var::Z, Var::X]
        .into_iter()
        .find(|&v| polys.iter().all(|p| !p.uses(v)))
        .ok_or_else(|| AlgError::Degenerate("no free variable left for elimination".into()))
}

/// If `α` is a root of `pa` and `β` of `pb` (both in `main`, other variables
/// are parameters), the result vanishes at `α ∘ β`.
pub fn alg_combine(pa: &MPoly, pb: &MPoly, op: CombineOp, main: Var) -> Result<MPoly, AlgError> {
    if pa.is_zero() || pb.is_zero() {
        return Err(AlgError::Degenerate("zero polynomial has no roots to combine".into()));
    }
    let y = fresh_var(&[pa, pb])?;
    let x = MPoly::var(main);
    let yv = MPoly::var(y);
    let g = pb.rename(&[(main, y), (y, main)]);
    let out = match op {
        CombineOp::Add => res(&pa.subs(main, &(&x - &yv)), &g, y)?,
        CombineOp::Sub => res(&pa.subs(main, &(&x + &yv)), &g, y)?,
        CombineOp::Mul => {
            let zero_root = pb.eval_rational(main, &num_traits::Zero::zero()).is_zero();
            let stripped = strip_var_power(&g, y);
            let mut r = if stripped.uses(y) {
                res(&pa.subs(main, &(&x * &yv)), &stripped.reverse(y), y)?
            } else {
                MPoly::one()
            };
            if zero_root {
                r = &r * &x;
            }
            r
        }
        CombineOp::Div => {
            let stripped = strip_var_power(&g, y);
            if !stripped.uses(y) {
                return Err(AlgError::Degenerate("division by an algebraic zero".into()));
            }
            res(&pa.subs(main, &(&x * &yv)), &stripped, y)?
        }
    };
    Ok(out.primitive_integer())
}

fn strip_var_power(p: &MPoly, v: Var) -> MPoly {
    let k = p.min_degree(v).unwrap_or(0);
    p.div_monomial(&super::poly::unit_exps(v, k)).expect("power divides")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MPoly {
        MPoly::parse(s).unwrap()
    }

    #[test]
    fn table_examples() {
        let a = p("x^2 - 2");
        let b = p("x^2 - 3");
        assert!(alg_combine(&a, &b, CombineOp::Add, Var::X).unwrap().eq_up_to_scalar(&p("x^4 - 10x^2 + 1")));
        assert!(alg_combine(&a, &p("x"), CombineOp::Add, Var::X).unwrap().eq_up_to_scalar(&a));
        assert!(alg_combine(&a, &p("x - 2"), CombineOp::Div, Var::X).unwrap().eq_up_to_scalar(&p("2x^2 - 1")));
        assert!(alg_combine(&a, &b, CombineOp::Mul, Var::X).unwrap().eq_up_to_scalar(&p("(x^2 - 6)^2")));
        assert!(alg_combine(&a, &p("x - 1"), CombineOp::Sub, Var::X).unwrap().eq_up_to_scalar(&p("(x + 1)^2 - 2")));
    }

    #[test]
    fn zero_roots() {
        assert!(alg_combine(&p("x - 3"), &p("x*(x - 2)"), CombineOp::Mul, Var::X).unwrap().eq_up_to_scalar(&p("x*(x - 6)")));
        assert!(alg_combine(&p("x - 3"), &p("x"), CombineOp::Div, Var::X).is_err());
    }

    #[test]
    fn with_parameters() {
        // roots of λ^2 + sλ - sz: difference satisfies x^2(x^2 - 4sz - s^2)
        let l = p("x^2 + s*x - s*z");
        let d = alg_combine(&l, &l, CombineOp::Sub, Var::X).unwrap();
        assert!(d.eq_up_to_scalar(&p("x^2*(x^2 - 4*s*z - s^2)")));
    }
}
