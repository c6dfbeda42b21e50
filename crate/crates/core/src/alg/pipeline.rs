//! Elimination pipeline for the Cauchy transform of `X + XYX` with `X`, `Y`
//! free copies of one law.
//!
//! Variables: `x` the unknown, `z` the spectral parameter, `s` the argument
//! of `G_T` and `η̃_T`, `y` for `δ(z)` (and as an elimination variable in
//! the first stages), `t` and `λ` as elimination variables.

use std::fmt;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::fixtures;
use super::newton::{branch_families, critical_polynomial, newton_polygon, BranchFamily, BranchSpec};
use super::poly::{unit_exps, MPoly, Var, NVARS};
use super::resultant::res;
use super::series::series_solve;
use super::{select_branch, strip_factors, AlgError, BranchTest};
use crate::combinat::{free_moments_recursive, moments_of_w};
use crate::rational::{binomial, rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LawName {
    Semicircle,
    Arcsine,
}

impl LawName {
    pub fn from_name(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "semicircle" | "wigner" => Some(LawName::Semicircle),
            "arcsine" => Some(LawName::Arcsine),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            LawName::Semicircle => "semicircle",
            LawName::Arcsine => "arcsine",
        }
    }

    /// Annihilator of the Cauchy transform, `x = G`, spectral variable `z`.
    pub fn cauchy_equation(self) -> Result<MPoly, AlgError> {
        fixtures::poly(match self {
            LawName::Semicircle => "semicircle_cauchy",
            LawName::Arcsine => "arcsine_cauchy",
        })
    }

    /// Relation between `x = s` and `y = η̃(s)`.
    pub fn eta_relation(self) -> Result<MPoly, AlgError> {
        fixtures::poly(match self {
            LawName::Semicircle => "semicircle_eta",
            LawName::Arcsine => "arcsine_eta",
        })
    }

    /// `φ(X^0), …, φ(X^n)`.
    pub fn moments(self, n: usize) -> Vec<BigRational> {
        match self {
            LawName::Semicircle => {
                let mut k = vec![BigRational::zero(); n.max(2)];
                k[1] = BigRational::one();
                free_moments_recursive(&k, n).expect("enough cumulants")
            }
            LawName::Arcsine => (0..=n)
                .map(|k| {
                    if k % 2 == 1 {
                        BigRational::zero()
                    } else {
                        BigRational::from_integer(binomial(k as u64, k as u64 / 2))
                    }
                })
                .collect(),
        }
    }

    /// Free cumulants `κ_1..κ_n`.
    pub fn free_cumulants(self, n: usize) -> Vec<BigRational> {
        let m = crate::combinat::CumulantData::new(crate::combinat::CumulantKind::Moment, self.moments(n)[1..].to_vec());
        crate::combinat::cumulants_from_moments(&m, crate::combinat::CumulantKind::Free, n)
            .expect("order within the partition cap")
            .values
    }

    /// Exact moments `φ(W^1..W^n)` of `W = X + XYX` from the combinatorial
    /// oracle.
    pub fn oracle_moments(self, n: usize) -> Vec<BigRational> {
        let mx = self.moments(3 * n);
        let ky = self.free_cumulants(n.clamp(1, crate::combinat::PARTITION_CAP));
        moments_of_w(&mx, &ky, &[rat(0), rat(1)], n).expect("moment data suffices")
    }
}

/// How a computed polynomial relates to its reference.
#[derive(Debug, Clone, PartialEq)]
pub enum StageStatus {
    Exact,
    /// Equal after multiplying the reference by this rational.
    Scalar(BigRational),
    /// Nothing to compare against.
    Computed,
}

#[derive(Debug, Clone)]
pub struct StageReport {
    pub stage: String,
    pub status: StageStatus,
    pub detail: String,
    pub millis: u128,
}

impl fmt::Display for StageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let st = match &self.status {
            StageStatus::Exact => "match".to_string(),
            StageStatus::Scalar(c) => format!("match up to factor {c}"),
            StageStatus::Computed => "computed".to_string(),
        };
        write!(f, "{:<24} {:<24} {:>7} ms  {}", self.stage, st, self.millis, self.detail)
    }
}

/// Newton polygon summary of one moment-shifted factor.
#[derive(Debug, Clone)]
pub struct FactorBranches {
    pub factor: String,
    pub shifted: MPoly,
    pub families: Vec<BranchFamily>,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub law: LawName,
    pub stages: Vec<StageReport>,
    /// `x = δ(z)` annihilator (semicircle run only).
    pub p_delta: Option<MPoly>,
    /// Factors of the final equation, in `(x = G, z)`.
    pub final_factors: Vec<MPoly>,
    pub selected: usize,
    pub branches: Vec<FactorBranches>,
    pub seed: BranchSpec,
    /// `φ(W^1..W^n)` from the power series of the selected branch.
    pub moments: Vec<BigRational>,
}

impl PipelineReport {
    pub fn selected_factor(&self) -> &MPoly {
        &self.final_factors[self.selected]
    }
}

struct Run {
    stages: Vec<StageReport>,
    clock: Instant,
}

impl Run {
    fn new() -> Self {
        Run {
            stages: Vec::new(),
            clock: Instant::now(),
        }
    }

    fn push(&mut self, stage: &str, status: StageStatus, detail: String) {
        self.stages.push(StageReport {
            stage: stage.to_string(),
            status,
            detail,
            millis: self.clock.elapsed().as_millis(),
        });
        self.clock = Instant::now();
    }

    /// `got` must equal the fixture, up to a rational factor at worst.
    fn compare(&mut self, stage: &str, got: &MPoly, fixture: &str) -> Result<(), AlgError> {
        let want = fixtures::poly(fixture)?;
        let status = if *got == want {
            StageStatus::Exact
        } else if let Some(c) = got.scalar_ratio(&want) {
            StageStatus::Scalar(c)
        } else {
            return Err(mismatch(stage, &want, got));
        };
        self.push(stage, status, format!("{fixture}: {} terms", want.num_terms()));
        Ok(())
    }

    /// `got = unit · Π f^m` with the given factors; the leftover unit must
    /// be a rational multiple of `unit`.
    fn compare_product(
        &mut self,
        stage: &str,
        got: &MPoly,
        factors: &[(MPoly, u32)],
        unit: &MPoly,
        label: &str,
    ) -> Result<(), AlgError> {
        let mut rest = got.clone();
        for (f, m) in factors {
            for _ in 0..*m {
                rest = rest.div_exact(f).ok_or_else(|| {
                    AlgError::StageMismatch {
                        stage: stage.to_string(),
                        expected: format!("a multiple of {f}"),
                        got: truncate(&rest.to_string()),
                    }
                })?;
            }
        }
        let c = rest.scalar_ratio(unit).ok_or_else(|| AlgError::StageMismatch {
            stage: stage.to_string(),
            expected: format!("leftover {unit}"),
            got: truncate(&rest.to_string()),
        })?;
        let status = if c.is_one() {
            StageStatus::Exact
        } else {
            StageStatus::Scalar(c)
        };
        self.push(stage, status, label.to_string());
        Ok(())
    }
}

fn truncate(s: &str) -> String {
    if s.len() > 400 {
        format!("{}… ({} chars)", &s[..s.char_indices().take_while(|(i, _)| *i < 400).last().map_or(0, |(i, c)| i + c.len_utf8())], s.len())
    } else {
        s.to_string()
    }
}

fn mismatch(stage: &str, want: &MPoly, got: &MPoly) -> AlgError {
    AlgError::StageMismatch {
        stage: stage.to_string(),
        expected: truncate(&want.to_string()),
        got: truncate(&got.to_string()),
    }
}

fn v(var: Var) -> MPoly {
    MPoly::var(var)
}

fn mono(c: i64, pairs: &[(Var, u32)]) -> MPoly {
    let mut e = [0u32; NVARS];
    for (var, k) in pairs {
        e[var.index()] += k;
    }
    MPoly::monomial(rat(c), e)
}

/// Strips every factor that is a power of a single variable.
fn strip_monomial(p: &MPoly) -> MPoly {
    p.div_monomial(&p.monomial_content()).expect("monomial content divides")
}

/// Numerator of `p(s·x, 1/s)`: the moment generating function side of an
/// equation for `G(s)`.
pub fn to_moment_form(p: &MPoly, x: Var, s: Var) -> MPoly {
    let d = p
        .terms()
        .map(|(e, _)| e[s.index()] as i64 - e[x.index()] as i64)
        .max()
        .unwrap_or(0);
    let q = MPoly::from_terms(p.terms().map(|(e, c)| {
        let mut e2 = *e;
        e2[s.index()] = (e[x.index()] as i64 - e[s.index()] as i64 + d) as u32;
        (e2, c.clone())
    }));
    strip_power(&q, s)
}

fn strip_power(p: &MPoly, var: Var) -> MPoly {
    let k = p.min_degree(var).unwrap_or(0);
    p.div_monomial(&unit_exps(var, k)).expect("power divides")
}

/// Numerator of `p(1/(1 − s·x), s)` times `(1 − s·x)^{deg_x p}`.
pub fn boolean_substitute(p: &MPoly, x: Var, s: Var) -> MPoly {
    let d = p.deg(x);
    let one_minus = &MPoly::one() - &(&v(s) * &v(x));
    let mut acc = MPoly::zero();
    for (k, c) in p.coeffs(x).iter().enumerate() {
        if !c.is_zero() {
            acc = &acc + &(c * &one_minus.pow(d - k as u32));
        }
    }
    acc
}

/// Moment-generating-function shift: `G(ζ) = w(1 + ψ(w))` with `w = 1/ζ`.
/// Returns the numerator of `p(z(1 + x), 1/z)` with its power of `z` removed.
pub fn psi_shift(p: &MPoly, x: Var, z: Var) -> MPoly {
    let d = p.deg(z);
    let one_plus = &MPoly::one() + &v(x);
    let mut acc = MPoly::zero();
    for (e, c) in p.terms() {
        let i = e[x.index()];
        let j = e[z.index()];
        let mut rest = *e;
        rest[x.index()] = 0;
        rest[z.index()] = i + d - j;
        acc = &acc + &one_plus.pow(i).mul_monomial(&rest).scale(c);
    }
    strip_power(&acc, z)
}

/// For every power of `x` the term of lowest degree in `z`.
pub fn critical_monomials(p: &MPoly, x: Var, z: Var) -> MPoly {
    let mut out = MPoly::zero();
    for (k, c) in p.coeffs(x).iter().enumerate() {
        if let Some(a) = c.min_degree(z) {
            let lead = c.coeff_of(z, a);
            out = &out + &lead.mul_monomial(&unit_exps(z, a)).mul_monomial(&unit_exps(x, k as u32));
        }
    }
    out
}

/// Runs the elimination for `law` and extracts `n_moments` moments from the
/// selected branch. Any intermediate that disagrees with its reference is an
/// error naming the stage.
pub fn pipeline_xxyx(law: LawName, n_moments: usize) -> Result<PipelineReport, AlgError> {
    match law {
        LawName::Semicircle => semicircle(n_moments),
        LawName::Arcsine => arcsine(n_moments),
    }
}

/// Leading term of `ψ = Σ m_n z^n` from the first nonzero low moment.
fn seed_from_moments(m: &[BigRational]) -> Result<BranchSpec, AlgError> {
    m.iter()
        .position(|c| !c.is_zero())
        .map(|i| BranchSpec::rational(rat(i as i64 + 1), m[i].clone(), "first nonzero moment"))
        .ok_or_else(|| AlgError::Degenerate("all low moments vanish".into()))
}

/// Shifts every factor, reads off its branches and picks the unique factor
/// with a branch matching `seed`.
fn branch_stage(
    run: &mut Run,
    factors: &[MPoly],
    names: &[&str],
    seed: &BranchSpec,
) -> Result<(usize, Vec<FactorBranches>), AlgError> {
    let eta = match &seed.eta {
        super::newton::Eta::Rational(e) => e.clone(),
        _ => return Err(AlgError::Unsupported("seed must be rational".into())),
    };
    let mut out = Vec::new();
    let mut passing = Vec::new();
    for (i, (f, name)) in factors.iter().zip(names).enumerate() {
        let shifted = psi_shift(f, Var::X, Var::Z);
        let np = newton_polygon(&shifted, Var::X)?;
        if np.total_length() != shifted.deg(Var::X) {
            return Err(AlgError::StageMismatch {
                stage: "newton".into(),
                expected: format!("edge lengths summing to {}", shifted.deg(Var::X)),
                got: np.total_length().to_string(),
            });
        }
        let families = branch_families(&shifted, Var::X)?;
        if families
            .iter()
            .any(|fam| fam.gamma == seed.gamma && fam.rational_etas.contains(&eta))
        {
            passing.push(i);
        }
        out.push(FactorBranches {
            factor: name.to_string(),
            shifted,
            families,
        });
    }
    let summary: Vec<String> = out
        .iter()
        .map(|fb| {
            let g: Vec<String> = fb.families.iter().map(|f| f.gamma.to_string()).collect();
            format!("{}: {{{}}}", fb.factor, g.join(", "))
        })
        .collect();
    match passing.as_slice() {
        [i] => {
            run.push(
                "newton",
                StageStatus::Computed,
                format!("{}; branch {seed} on {}", summary.join("; "), names[*i]),
            );
            Ok((*i, out))
        }
        _ => Err(AlgError::Ambiguous {
            passing,
            specialized: summary,
        }),
    }
}

fn moment_stage(run: &mut Run, shifted: &MPoly, seed: &BranchSpec, n: usize, oracle: &[BigRational]) -> Result<Vec<BigRational>, AlgError> {
    let c = series_solve(shifted, Var::X, seed, n)?;
    let moments = c[1..].to_vec();
    if moments != oracle {
        return Err(AlgError::StageMismatch {
            stage: "moments".into(),
            expected: format!("{oracle:?}"),
            got: format!("{moments:?}"),
        });
    }
    let shown: Vec<String> = moments.iter().map(|m| m.to_string()).collect();
    run.push("moments", StageStatus::Exact, format!("series = oracle: {}", shown.join(",")));
    Ok(moments)
}

fn semicircle(n_moments: usize) -> Result<PipelineReport, AlgError> {
    let law = LawName::Semicircle;
    let mut run = Run::new();
    let (x, y, z, s, t, lam) = (Var::X, Var::Y, Var::Z, Var::S, Var::T, Var::Lambda);
    let cauchy = law.cauchy_equation()?;

    // Denominator λ_1 − λ_2 with λ^2 + sλ − sz = 0.
    let quad = |var: Var| &(&v(var).pow(2) + &(&v(s) * &v(var))) - &(&v(s) * &v(z));
    let q_xy = quad(y).subs(y, &(&v(x) + &v(y)));
    let dl_full = res(&q_xy, &quad(y), y)?;
    run.compare("delta-lambda", &dl_full, "p_dlambda_s")?;
    let dl = strip_monomial(&dl_full);

    // λ^2 G(λ) and its differences.
    let gt_rel = lift_tilde(&cauchy, lam)?;
    let p_gt = res(&quad(lam), &gt_rel, lam)?;
    run.compare("g-tilde", &p_gt, "p_gtilde")?;

    let dgt = res(&p_gt.subs(x, &(&v(x) + &v(y))), &p_gt.rename(&[(x, y)]), y)?;
    let dgt1 = fixtures::poly("p_dgtilde_1")?;
    let dgt2 = fixtures::poly("p_dgtilde_2")?;
    run.compare_product(
        "delta-g-tilde",
        &dgt,
        &[(dgt1.clone(), 1), (dgt2.clone(), 1)],
        &mono(1, &[(x, 4)]),
        "x^4 · p_dgtilde_1 · p_dgtilde_2",
    )?;

    // Divided difference G_T(s) = ΔG̃ / (s Δλ).
    let dl_y = dl.rename(&[(x, y)]);
    let sxy = &(&v(s) * &v(x)) * &v(y);
    let b1 = res(&dgt1.subs(x, &sxy), &dl_y, y)?;
    let gt1 = fixtures::poly("p_gt_1")?;
    run.compare_product("g-t branch 1", &b1, &[(gt1.clone(), 2)], &mono(1, &[(s, 8)]), "s^8 · p_gt_1^2")?;
    let b2 = res(&dgt2.subs(x, &sxy), &dl_y, y)?;
    let gt21 = fixtures::poly("p_gt_21")?;
    let gt22 = fixtures::poly("p_gt_22")?;
    let s4z = &v(s) + &mono(4, &[(z, 1)]);
    run.compare_product(
        "g-t branch 2",
        &b2,
        &[(gt21.clone(), 2), (gt22.clone(), 2), (s4z, 4)],
        &mono(1, &[(s, 20)]),
        "s^20 (s+4z)^4 · p_gt_21^2 · p_gt_22^2",
    )?;

    // M_T(0) = 1 picks the branch.
    let candidates = [gt1, gt21, gt22];
    let mt: Vec<MPoly> = candidates.iter().map(|p| to_moment_form(p, x, s)).collect();
    for (p, name) in mt.iter().zip(["p_mt_1", "p_mt_21", "p_mt_22"]) {
        run.compare(&format!("moment form {}", &name[5..]), p, name)?;
    }
    let test = BranchTest::Root {
        pin: (s, BigRational::zero()),
        main: x,
        root: BigRational::one(),
    };
    let k = select_branch(&mt, &test)?;
    let specialized: Vec<String> = mt.iter().map(|p| test.specialize(p).to_string()).collect();
    run.push(
        "select g-t",
        StageStatus::Computed,
        format!("at s = 0: [{}] -> {}", specialized.join(", "), ["p_gt_1", "p_gt_21", "p_gt_22"][k]),
    );
    let p_mt = mt[k].clone();

    // M_T = 1/(1 − s η̃_T).
    let sub = boolean_substitute(&p_mt, x, s);
    let p_eta = fixtures::poly("p_eta_t")?;
    run.compare_product("eta-t", &sub, &[(p_eta.clone(), 1)], &mono(1, &[(s, 2)]), "s^2 · p_eta_t")?;

    // δ = η̃_Y(η̃_T(δ)): eliminate η̃_T = y with s := δ = x.
    let eta_rel = law.eta_relation()?;
    let p_eta_xy = p_eta.rename(&[(x, y), (s, x)]);
    let p_delta = res(&p_eta_xy, &eta_rel, y)?;
    run.compare("delta", &p_delta, "p_delta")?;

    // G_W = (1/δ) ΔG(λ) / Δλ with yλ^2 + λ − z = 0, y = δ.
    let p_lam = |var: Var| &(&(&v(y) * &v(var).pow(2)) + &v(var)) - &v(z);
    let p_g = res(&p_lam(t), &cauchy.rename(&[(z, t)]), t)?;
    run.compare("g-at-lambda", &p_g, "p_g")?;
    let dg = res(&p_g.subs(x, &(&v(x) + &v(t))), &p_g.rename(&[(x, t)]), t)?;
    let dg1 = fixtures::poly("p_dg_1")?;
    let dg2 = fixtures::poly("p_dg_2")?;
    run.compare_product(
        "delta-g",
        &dg,
        &[(dg1.clone(), 1), (dg2.clone(), 1)],
        &mono(1, &[(x, 4), (y, 2)]),
        "x^4 y^2 · p_dg_1 · p_dg_2",
    )?;
    let dlam = res(&p_lam(x).subs(x, &(&v(x) + &v(t))), &p_lam(t), t)?;
    let p_dlam = fixtures::poly("p_dlambda_y")?;
    run.compare_product(
        "delta-lambda-y",
        &dlam,
        &[(p_dlam.clone(), 1)],
        &mono(1, &[(x, 2), (y, 2)]),
        "x^2 y^2 · p_dlambda_y",
    )?;
    let stripped = strip_factors(&dlam);
    if stripped.factors.len() != 1 || stripped.factors[0].0 != p_dlam.primitive_integer() {
        return Err(mismatch("delta-lambda-y", &p_dlam, &stripped.product()));
    }

    // ΔG = G_W · δ · Δλ, with Δλ a root of p_dlambda_y.
    let xty = &(&v(x) * &v(t)) * &v(y);
    let p_dlam_t = p_dlam.rename(&[(x, t)]);
    let c1 = res(&dg1.subs(x, &xty), &p_dlam_t, t)?;
    let q1 = fixtures::poly("p_xxyx_delta_1")?;
    run.compare_product("g-w branch 1", &c1, &[(q1.clone(), 2)], &mono(1, &[(y, 8)]), "y^8 · q_1^2")?;
    let c2 = res(&dg2.subs(x, &xty), &p_dlam_t, t)?;
    let q21 = fixtures::poly("p_xxyx_delta_21")?;
    let q22 = fixtures::poly("p_xxyx_delta_22")?;
    let yz = &mono(4, &[(y, 1), (z, 1)]) + &MPoly::one();
    run.compare_product(
        "g-w branch 2",
        &c2,
        &[(q21.clone(), 2), (q22.clone(), 2), (yz, 4)],
        &mono(1, &[(y, 16)]),
        "y^16 (4yz+1)^4 · q_21^2 · q_22^2",
    )?;

    // δ = 0 must give back the law of X.
    let cands = [q1, q21, q22];
    let test = BranchTest::Divides {
        pin: (y, BigRational::zero()),
        target: cauchy.clone(),
    };
    let k = select_branch(&cands, &test)?;
    let specialized: Vec<String> = cands.iter().map(|p| test.specialize(p).to_string()).collect();
    run.push(
        "select g-w",
        StageStatus::Computed,
        format!("at y = 0: [{}] -> {}", specialized.join(", "), ["q_1", "q_21", "q_22"][k]),
    );
    let q = cands[k].clone();

    // Eliminate δ.
    let fin = res(&q, &p_delta.rename(&[(x, y)]), y)?;
    let finals = [
        fixtures::poly("p_gxxyx_1")?,
        fixtures::poly("p_gxxyx_2")?,
        fixtures::poly("p_gxxyx_3")?,
    ];
    run.compare_product(
        "final",
        &fin,
        &[(finals[0].clone(), 1), (finals[1].clone(), 1), (finals[2].clone(), 1)],
        &mono(16, &[(z, 1)]),
        "16z · p_gxxyx_1 · p_gxxyx_2 · p_gxxyx_3",
    )?;

    for (i, f) in finals.iter().enumerate() {
        let crit = critical_monomials(&psi_shift(f, x, z), x, z);
        run.compare(&format!("psi critical {}", i + 1), &crit, &format!("psi_crit_{}", i + 1))?;
    }
    let oracle = law.oracle_moments(n_moments.max(2));
    let seed = seed_from_moments(&oracle)?;
    let (sel, branches) = branch_stage(&mut run, &finals, &["p_gxxyx_1", "p_gxxyx_2", "p_gxxyx_3"], &seed)?;
    let moments = moment_stage(&mut run, &branches[sel].shifted, &seed, n_moments, &oracle[..n_moments])?;
    Ok(PipelineReport {
        law,
        stages: run.stages,
        p_delta: Some(p_delta),
        final_factors: finals.to_vec(),
        selected: sel,
        branches,
        seed,
        moments,
    })
}

/// Annihilator of `λ^2 G(λ)` in `x` from the annihilator of `G` in `(x, z)`.
fn lift_tilde(cauchy: &MPoly, lam: Var) -> Result<MPoly, AlgError> {
    // c(x / λ^2, λ) · λ^{2 deg_x c}
    let d = cauchy.deg(Var::X);
    let mut acc = MPoly::zero();
    for (e, c) in cauchy.terms() {
        let i = e[Var::X.index()];
        let j = e[Var::Z.index()];
        let mut e2 = *e;
        e2[Var::Z.index()] = 0;
        e2[lam.index()] += j + 2 * (d - i);
        acc.add_term(e2, c.clone());
    }
    if acc.is_zero() {
        return Err(AlgError::Degenerate("empty Cauchy equation".into()));
    }
    Ok(acc)
}

fn arcsine(n_moments: usize) -> Result<PipelineReport, AlgError> {
    let law = LawName::Arcsine;
    let mut run = Run::new();
    let fin = fixtures::load("arcsine_final")?;
    let sums = fixtures::expected_checksums()?;
    let check = fixtures::check_fixture("arcsine_final", &sums)?;
    if !check.ok() {
        return Err(AlgError::Fixture(format!("arcsine_final failed its integrity check: {check:?}")));
    }
    run.push("fixture", StageStatus::Exact, format!("arcsine_final: {} terms", fin.poly.num_terms()));
    let oracle = law.oracle_moments(n_moments.max(2));
    let seed = seed_from_moments(&oracle)?;
    let finals = vec![fin.poly.clone()];
    let (sel, branches) = branch_stage(&mut run, &finals, &["arcsine_final"], &seed)?;
    let moments = moment_stage(&mut run, &branches[sel].shifted, &seed, n_moments, &oracle[..n_moments])?;
    Ok(PipelineReport {
        law,
        stages: run.stages,
        p_delta: None,
        final_factors: finals,
        selected: sel,
        branches,
        seed,
        moments,
    })
}

/// Critical polynomial of a moment-shifted factor at slope `gamma`.
pub fn shifted_critical(p: &MPoly, gamma: &BigRational) -> Result<MPoly, AlgError> {
    critical_polynomial(&psi_shift(p, Var::X, Var::Z), Var::X, gamma)
}
