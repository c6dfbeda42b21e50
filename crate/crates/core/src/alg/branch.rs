//! Choosing the correct factor among candidate annihilating polynomials by
//! specializing one variable and testing a known value.

use num_rational::BigRational;

use super::poly::{MPoly, Var};
use super::AlgError;

#[derive(Debug, Clone)]
pub enum BranchTest {
    /// After `pin := value`, the polynomial must vanish at `main = root`.
    Root {
        pin: (Var, BigRational),
        main: Var,
        root: BigRational,
    },
    /// After `pin := value`, the polynomial must be divisible by `target`.
    Divides { pin: (Var, BigRational), target: MPoly },
}

impl BranchTest {
    pub fn specialize(&self, p: &MPoly) -> MPoly {
        let (v, r) = match self {
            BranchTest::Root { pin, .. } | BranchTest::Divides { pin, .. } => pin,
        };
        p.eval_rational(*v, r)
    }

    pub fn passes(&self, p: &MPoly) -> bool {
        let sp = self.specialize(p);
        if sp.is_zero() {
            // the pinned value kills the whole polynomial: no information
            return false;
        }
        match self {
            BranchTest::Root { main, root, .. } => sp.eval_rational(*main, root).is_zero(),
            BranchTest::Divides { target, .. } => sp.div_exact(target).is_some(),
        }
    }
}

/// Index of the unique candidate passing `test`.
pub fn select_branch(factors: &[MPoly], test: &BranchTest) -> Result<usize, AlgError> {
    let passing: Vec<usize> = factors
        .iter()
        .enumerate()
        .filter(|(_, f)| test.passes(f))
        .map(|(i, _)| i)
        .collect();
    match passing.as_slice() {
        [i] => Ok(*i),
        _ => Err(AlgError::Ambiguous {
            passing,
            specialized: factors.iter().map(|f| test.specialize(f).to_string()).collect(),
        }),
    }
}
