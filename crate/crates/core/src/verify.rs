//! Seeded parameter sampling and two-sided identity checks.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bailey::{pair_sides, pair_transform, BaileyPair, EvalOptions, Evaluation};
use crate::constraints::ConstraintSet;
use crate::ellgamma::BaseParams;
use crate::expr::Assignment;
use crate::identities::{self, IdentitySides};
use crate::{Error, Result};

/// Rejections tolerated by [`sample_params`] before giving up.
pub const MAX_DRAWS: usize = 10_000;

/// Default modulus range for sampled parameters.
pub const DEFAULT_MODULI: (f64, f64) = (0.4, 0.8);

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub identity_id: String,
    pub assignment: Assignment,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_err: f64,
    /// `abs_err / max(|lhs|, |rhs|, 1e-300)`
    pub rel_err: f64,
    /// Node counts visited by each side's quadrature; empty for closed forms.
    pub nodes_used: Vec<Vec<usize>>,
    pub converged: bool,
    /// Filled in by callers with a clock; zero otherwise.
    pub runtime_ms: f64,
}

impl VerificationReport {
    pub fn new(identity_id: &str, assignment: Assignment, lhs: &Evaluation, rhs: &Evaluation) -> Self {
        let (abs_err, rel_err) = errors(lhs.value, rhs.value);
        Self {
            identity_id: identity_id.to_string(),
            assignment,
            lhs: lhs.value,
            rhs: rhs.value,
            abs_err,
            rel_err,
            nodes_used: [lhs, rhs].iter().map(|e| e.nodes_used()).collect(),
            converged: lhs.converged() && rhs.converged(),
            runtime_ms: 0.0,
        }
    }

    /// Converged and within `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.converged && self.rel_err <= tol
    }
}

fn errors(a: Complex64, b: Complex64) -> (f64, f64) {
    let abs = (a - b).norm();
    (abs, abs / a.norm().max(b.norm()).max(1e-300))
}

/// Relative distance `|a - b| / max(|a|, |b|, 1e-300)`.
pub fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    errors(a, b).1
}

/// Draws parameters with moduli uniform in `moduli` and uniform phases,
/// and points on the unit circle, until every record of `cs` holds with
/// its margin.
pub fn sample_params(cs: &ConstraintSet, base: &BaseParams, seed: u64, moduli: (f64, f64)) -> Result<Assignment> {
    let (lo, hi) = moduli;
    if !(0.0 < lo && lo <= hi && hi < 1.0) {
        return Err(Error::Domain("moduli range must lie in (0, 1)".to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_DRAWS {
        let mut a = Assignment::new();
        for name in &cs.params {
            let r = if hi > lo { rng.gen_range(lo..hi) } else { lo };
            a.set_param(name, Complex64::from_polar(r, rng.gen_range(0.0..TAU)));
        }
        for name in &cs.points {
            a.set_var(name, Complex64::from_polar(1.0, rng.gen_range(0.0..TAU)));
        }
        if cs.satisfied_with_margins(&a, base)? {
            return Ok(a);
        }
    }
    Err(Error::SamplingExhausted(MAX_DRAWS))
}

/// Evaluates both sides after checking the identity's constraints.
///
/// Non-convergence is reported through `converged`, not as an error.
pub fn verify_identity(
    sides: &IdentitySides,
    a: &Assignment,
    base: &BaseParams,
    opts: &EvalOptions,
) -> Result<VerificationReport> {
    sides.constraints.check(a, base)?;
    let lhs = sides.lhs.evaluate(a, base, opts)?;
    let rhs = sides.rhs.evaluate(a, base, opts)?;
    Ok(VerificationReport::new(&sides.id, a.clone(), &lhs, &rhs))
}

/// Quadrature of the elliptic beta integral against its product formula.
pub fn verify_beta_integral(a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<VerificationReport> {
    verify_identity(&identities::beta_integral(), a, base, opts)
}

pub fn verify_transformation(a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<VerificationReport> {
    verify_identity(&identities::transformation(), a, base, opts)
}

/// `m`-fold chain identity. `m >= 3` usually ends unconverged under the
/// default node caps.
pub fn verify_id_seq(m: usize, a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<VerificationReport> {
    verify_identity(&identities::id_seq(m)?, a, base, opts)
}

pub fn verify_ident1(a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<VerificationReport> {
    verify_identity(&identities::ident1(), a, base, opts)
}

/// `m` dual steps and a chain step; the right side has `m + 1` dimensions.
pub fn verify_identfin(m: usize, a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<VerificationReport> {
    verify_identity(&identities::identfin(m)?, a, base, opts)
}

/// Dispatches on `beta`, `transformation`, `id-seq:<m>`, `ident1`,
/// `identfin:<m>`.
pub fn verify_by_id(id: &str, a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<VerificationReport> {
    verify_identity(&identities::by_id(id)?, a, base, opts)
}

/// `beta(w)` against the integral transform of `alpha`.
pub fn verify_pair(
    id: &str,
    pair: &BaileyPair,
    a: &Assignment,
    base: &BaseParams,
    opts: &EvalOptions,
) -> Result<VerificationReport> {
    let sides = pair_sides(pair, a, base, opts)?;
    Ok(VerificationReport::new(id, a.clone(), &sides.beta, &sides.transform))
}

/// Constraint set of a pair's defining relation, including the transform.
pub fn pair_constraints(pair: &BaileyPair) -> ConstraintSet {
    let mut cs = pair.constraints.clone();
    for v in pair_transform(pair).flatten().integrand.free_vars() {
        cs.declare_point(&v);
    }
    cs
}

/// Maps chain-identity parameters at `m = 1` to those of the
/// transformation: `s0 = u1`, `s1 = s1 w`, `s2 = s1 / w`.
pub fn id_seq_to_transformation(a: &Assignment) -> Result<Assignment> {
    let (s1, u1, w) = (a.param("s1")?, a.param("u1")?, a.var(crate::bailey::POINT)?);
    let mut out = Assignment::new();
    for n in ["t", "t0", "t1", "t2"] {
        out.set_param(n, a.param(n)?);
    }
    out.set_param("s0", u1);
    out.set_param("s1", s1 * w);
    out.set_param("s2", s1 / w);
    Ok(out)
}

/// The `m = 1` chain identity next to the transformation it rewrites to.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainTransformationCheck {
    pub id_seq: VerificationReport,
    pub transformation: VerificationReport,
    /// Common factor between matching sides.
    pub ratio: Complex64,
    /// `rel_diff(id_seq.lhs, ratio * transformation.lhs)`
    pub lhs_rel_err: f64,
    pub rhs_rel_err: f64,
}

impl ChainTransformationCheck {
    pub fn max_rel_err(&self) -> f64 {
        self.lhs_rel_err.max(self.rhs_rel_err)
    }
}

pub fn verify_id_seq_against_transformation(
    a: &Assignment,
    base: &BaseParams,
    opts: &EvalOptions,
) -> Result<ChainTransformationCheck> {
    let id_seq = verify_id_seq(1, a, base, opts)?;
    let transformation = verify_transformation(&id_seq_to_transformation(a)?, base, opts)?;
    let ratio = identities::id_seq_transformation_ratio().evaluate(a, base, opts)?.value;
    Ok(ChainTransformationCheck {
        lhs_rel_err: rel_diff(id_seq.lhs, ratio * transformation.lhs),
        rhs_rel_err: rel_diff(id_seq.rhs, ratio * transformation.rhs),
        id_seq,
        transformation,
        ratio,
    })
}

/// Parameter values as a name-sorted map, for display.
pub fn params_of(a: &Assignment) -> BTreeMap<String, Complex64> {
    a.params.iter().chain(a.vars.iter()).map(|(k, v)| (k.clone(), *v)).collect()
}
