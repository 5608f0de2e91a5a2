//! Integral elliptic Bailey pairs.
//!
//! `(alpha, beta)` form a pair with respect to `t` when
//!
//! ```text
//! beta(w, t) = kappa \oint_T Gamma(t w^± z^±) alpha(z, t) dz/z
//! ```
//!
//! Pairs are kept as expression trees ([`BaileyExpr`]) so that they can be
//! compared structurally as well as evaluated. [`chain_step`] and
//! [`dual_step`] are the two lemmas; words over them ([`TreeWord`]) walk the
//! binary tree of pairs grown from [`seed_pair`].

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;

use crate::constraints::{Constraint, ConstraintSet};
use crate::ellgamma::{kappa, BaseParams, ToleranceSpec};
use crate::expr::{pm_factors, pole_margin, Assignment, GammaFactor, Integrand, Location, ParamMonomial};
use crate::quadrature::{GammaGrid, QuadratureConfig, QuadratureResult};
use crate::{Error, Result};

/// Name of the external point shared by `alpha` and `beta`.
pub const POINT: &str = "w";

/// Scalar prefactor `monomial * (q;q)^a (p;p)^b (2 pi i)^c`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Prefactor {
    pub monomial: ParamMonomial,
    pub qq_power: i32,
    pub pp_power: i32,
    pub two_pi_i_power: i32,
}

impl Prefactor {
    pub fn numeric(x: f64) -> Self {
        Self { monomial: ParamMonomial::one().with_scale(Complex64::new(x, 0.0)), ..Self::default() }
    }

    fn absorb(&mut self, other: &Prefactor) {
        self.monomial = &self.monomial * &other.monomial;
        self.qq_power += other.qq_power;
        self.pp_power += other.pp_power;
        self.two_pi_i_power += other.two_pi_i_power;
    }

    pub fn evaluate(&self, a: &Assignment, base: &BaseParams) -> Result<Complex64> {
        let two_pi_i = Complex64::new(0.0, 2.0 * PI);
        Ok(self.monomial.evaluate(a)?
            * base.qq().powi(self.qq_power)
            * base.pp().powi(self.pp_power)
            * two_pi_i.powi(self.two_pi_i_power))
    }
}

/// Evaluable expression for an `alpha` or `beta` function.
#[derive(Debug, Clone, PartialEq)]
pub enum BaileyExpr {
    /// Product of gamma factors; variables are free or bound by an
    /// enclosing [`BaileyExpr::Integral`].
    GammaProduct(Vec<GammaFactor>),
    Scale(Prefactor),
    Product(Vec<BaileyExpr>),
    /// `kappa^kappa_power \oint_T body d(var)/var`
    Integral { var: String, kappa_power: u32, body: Box<BaileyExpr> },
}

/// A [`BaileyExpr`] with all integrals pulled to the front:
/// `prefactor * kappa^k * \oint_{T^m} prod(factors) prod dx/x`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatForm {
    pub prefactor: Prefactor,
    pub kappa_power: u32,
    /// Integration variables are `integrand.contour_vars`, outermost first.
    pub integrand: Integrand,
}

impl FlatForm {
    /// Cancels identical numerator/denominator factors.
    pub fn normalized(mut self) -> Self {
        self.integrand.cancel_common();
        self
    }
}

impl BaileyExpr {
    pub fn one() -> Self {
        BaileyExpr::Product(Vec::new())
    }

    pub fn integral(var: &str, kappa_power: u32, body: BaileyExpr) -> Self {
        BaileyExpr::Integral { var: var.to_string(), kappa_power, body: Box::new(body) }
    }

    pub fn flatten(&self) -> FlatForm {
        let mut out = FlatForm { prefactor: Prefactor::default(), kappa_power: 0, integrand: Integrand::default() };
        self.flatten_into(&mut out);
        out
    }

    fn flatten_into(&self, out: &mut FlatForm) {
        match self {
            BaileyExpr::GammaProduct(fs) => out.integrand.factors.extend(fs.iter().cloned()),
            BaileyExpr::Scale(p) => out.prefactor.absorb(p),
            BaileyExpr::Product(children) => children.iter().for_each(|c| c.flatten_into(out)),
            BaileyExpr::Integral { var, kappa_power, body } => {
                out.integrand.contour_vars.push(var.clone());
                out.kappa_power += kappa_power;
                body.flatten_into(out);
            }
        }
    }

    /// Renames free occurrences of `from`.
    pub fn rename_var(&mut self, from: &str, to: &str) {
        match self {
            BaileyExpr::GammaProduct(fs) => fs.iter_mut().for_each(|f| f.rename_var(from, to)),
            BaileyExpr::Scale(_) => {}
            BaileyExpr::Product(children) => children.iter_mut().for_each(|c| c.rename_var(from, to)),
            BaileyExpr::Integral { var, body, .. } => {
                if var != from {
                    body.rename_var(from, to);
                }
            }
        }
    }

    pub fn renamed(mut self, from: &str, to: &str) -> Self {
        self.rename_var(from, to);
        self
    }

    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |e| {
            if let BaileyExpr::Integral { var, .. } = e {
                out.insert(var.clone());
            }
        });
        out
    }

    pub fn integral_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |e| n += matches!(e, BaileyExpr::Integral { .. }) as usize);
        n
    }

    /// Sum of `kappa_power` over all integral nodes.
    pub fn kappa_total(&self) -> u32 {
        let mut k = 0;
        self.visit(&mut |e| {
            if let BaileyExpr::Integral { kappa_power, .. } = e {
                k += kappa_power;
            }
        });
        k
    }

    /// Longest chain of nested integral nodes.
    pub fn nesting_depth(&self) -> usize {
        match self {
            BaileyExpr::GammaProduct(_) | BaileyExpr::Scale(_) => 0,
            BaileyExpr::Product(cs) => cs.iter().map(Self::nesting_depth).max().unwrap_or(0),
            BaileyExpr::Integral { body, .. } => 1 + body.nesting_depth(),
        }
    }

    fn visit(&self, f: &mut impl FnMut(&BaileyExpr)) {
        f(self);
        match self {
            BaileyExpr::Product(cs) => cs.iter().for_each(|c| c.visit(f)),
            BaileyExpr::Integral { body, .. } => body.visit(f),
            _ => {}
        }
    }

    pub fn evaluate(&self, a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<Evaluation> {
        evaluate_flat(&self.flatten(), a, base, opts)
    }
}

/// Quadrature and gamma-function settings for evaluating expressions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    /// Convergence target for every quadrature; `None` picks
    /// [`QuadratureConfig::default_target`] by dimension.
    pub quad_target: Option<f64>,
    pub n_start: usize,
    /// Overrides the per-dimension default cap.
    pub n_max: Option<usize>,
    pub gamma: ToleranceSpec,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self { quad_target: None, n_start: 16, n_max: None, gamma: ToleranceSpec::default() }
    }
}

impl EvalOptions {
    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = Some(n_max);
        self
    }

    pub fn config_for(&self, dims: usize) -> QuadratureConfig {
        let target = self.quad_target.unwrap_or_else(|| QuadratureConfig::default_target(dims));
        let mut cfg = QuadratureConfig::for_dims(dims, target);
        cfg.n_start = self.n_start;
        match self.n_max {
            Some(n) => cfg.with_n_max(n),
            None => cfg,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    /// `None` when there is nothing to integrate.
    pub quadrature: Option<QuadratureResult>,
    /// Smallest pole margin over the integration variables.
    pub pole_margin: f64,
}

impl Evaluation {
    pub fn converged(&self) -> bool {
        self.quadrature.as_ref().is_none_or(|q| q.converged)
    }

    pub fn nodes_used(&self) -> Vec<usize> {
        self.quadrature.as_ref().map(|q| q.nodes_used.clone()).unwrap_or_default()
    }
}

pub fn evaluate_flat(flat: &FlatForm, a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<Evaluation> {
    let dims = flat.integrand.contour_vars.len();
    let mut margin = f64::INFINITY;
    for v in &flat.integrand.contour_vars {
        margin = margin.min(pole_margin(&flat.integrand, v, a, base)?);
    }
    let mut grid = GammaGrid::new(&flat.integrand, a, base, &opts.gamma)?;
    let scale = flat.prefactor.evaluate(a, base)?
        * kappa(base).powi(flat.kappa_power as i32)
        * Complex64::new(0.0, 2.0 * PI).powi(dims as i32);
    if dims == 0 {
        return Ok(Evaluation { value: scale * grid.constant(), quadrature: None, pole_margin: margin });
    }
    let q = grid.integrate(&opts.config_for(dims))?;
    Ok(Evaluation { value: scale * q.value, quadrature: Some(q), pole_margin: margin })
}

/// `alpha`, `beta`, the pairing parameter and the accumulated validity region.
#[derive(Debug, Clone, PartialEq)]
pub struct BaileyPair {
    pub alpha: BaileyExpr,
    pub beta: BaileyExpr,
    pub t_expr: ParamMonomial,
    pub constraints: ConstraintSet,
}

pub(crate) fn mono(pairs: &[(&ParamMonomial, i32)]) -> ParamMonomial {
    pairs.iter().fold(ParamMonomial::one(), |acc, (m, e)| &acc * &m.pow(*e))
}

/// Collects gamma factors, expanding `±` over every listed variable.
#[derive(Default)]
pub(crate) struct Factors(Vec<GammaFactor>);

impl Factors {
    pub(crate) fn num(mut self, c: ParamMonomial, vars: &[(&str, i32)]) -> Self {
        self.0.extend(pm_factors(&c, vars, Location::Numerator));
        self
    }

    pub(crate) fn den(mut self, c: ParamMonomial, vars: &[(&str, i32)]) -> Self {
        self.0.extend(pm_factors(&c, vars, Location::Denominator));
        self
    }

    pub(crate) fn expr(self) -> BaileyExpr {
        BaileyExpr::GammaProduct(self.0)
    }
}

/// First `x<k>` not bound in any of `exprs`.
fn fresh_var(exprs: &[&BaileyExpr]) -> String {
    let next = exprs
        .iter()
        .flat_map(|e| e.bound_vars())
        .filter_map(|v| v.strip_prefix('x').and_then(|k| k.parse::<usize>().ok()))
        .max()
        .map_or(1, |k| k + 1);
    format!("x{next}")
}

fn add_step_constraints(cs: &mut ConstraintSet, t: &ParamMonomial, s: &ParamMonomial, u: &ParamMonomial) {
    for m in [t, s, u] {
        for name in m.names() {
            cs.declare_param(name);
            cs.push(Constraint::inside_disk(ParamMonomial::param(name)));
        }
        cs.push(Constraint::inside_disk(m.clone()));
    }
    cs.push(Constraint::balancing(mono(&[(t, 2), (s, 2), (u, 1)])));
}

/// The seed pair obtained from the elliptic beta integral with
/// `t_3 = t w`, `t_4 = t w^{-1}`:
///
/// ```text
/// alpha(z, t) = prod_r Gamma(t_r z^±) / Gamma(z^{±2}, t^2 t_0 t_1 t_2 z^±)
/// beta(w, t)  = Gamma(t^2) prod_{r<j} Gamma(t_r t_j) / Gamma(t^2 t_r t_j)
///               * prod_r Gamma(t t_r w^±) / Gamma(t t_0 t_1 t_2 w^±)
/// ```
pub fn seed_pair(t0: &str, t1: &str, t2: &str, t: &str) -> BaileyPair {
    seed_pair_at(t0, t1, t2, ParamMonomial::param(t))
}

/// [`seed_pair`] with the pairing parameter given as a monomial, e.g.
/// `s_1 t` when a dual step is to be applied first.
pub fn seed_pair_at(t0: &str, t1: &str, t2: &str, t: ParamMonomial) -> BaileyPair {
    let tr: [ParamMonomial; 3] = [t0, t1, t2].map(ParamMonomial::param);
    let b = mono(&[(&tr[0], 1), (&tr[1], 1), (&tr[2], 1)]);
    let w = [(POINT, 1)];

    let mut alpha = Factors::default();
    for r in &tr {
        alpha = alpha.num(r.clone(), &w);
    }
    let alpha = alpha.den(ParamMonomial::one(), &[(POINT, 2)]).den(mono(&[(&t, 2), (&b, 1)]), &w);

    let mut beta = Factors::default().num(t.pow(2), &[]);
    for (r, j) in [(0, 1), (0, 2), (1, 2)] {
        let rj = &tr[r] * &tr[j];
        beta = beta.num(rj.clone(), &[]).den(mono(&[(&t, 2), (&rj, 1)]), &[]);
    }
    for r in &tr {
        beta = beta.num(&t * r, &w);
    }
    let beta = beta.den(&t * &b, &w);

    let mut cs = ConstraintSet::new();
    cs.disk_params(&[t0, t1, t2]);
    for name in t.names() {
        cs.declare_param(name);
        cs.push(Constraint::inside_disk(ParamMonomial::param(name)));
    }
    cs.push(Constraint::inside_disk(t.clone()));
    cs.push(Constraint::balancing(mono(&[(&t, 2), (&b, 1)])));
    cs.declare_point(POINT);

    BaileyPair { alpha: alpha.expr(), beta: beta.expr(), t_expr: t, constraints: cs }
}

/// First lemma: a pair at `t` gives a pair at `s t`,
///
/// ```text
/// alpha'(w, st) = Gamma(t u w^±) / Gamma(t s^2 u w^±) alpha(w, t)
/// beta'(w, st)  = kappa Gamma(t^2 s^2, t^2 s u w^±) / Gamma(s^2, t^2, s u w^±)
///                 \oint Gamma(s w^± x^±, u x^±) / Gamma(x^{±2}, t^2 s^2 u x^±) beta(x, t) dx/x
/// ```
pub fn chain_step(pair: &BaileyPair, s: &str, u: &str) -> BaileyPair {
    let t = &pair.t_expr;
    let (sm, um) = (ParamMonomial::param(s), ParamMonomial::param(u));
    let w = [(POINT, 1)];

    let alpha = BaileyExpr::Product(vec![
        Factors::default().num(&t.clone() * &um, &w).den(mono(&[(t, 1), (&sm, 2), (&um, 1)]), &w).expr(),
        pair.alpha.clone(),
    ]);

    let x = fresh_var(&[&pair.beta]);
    let prefactor = Factors::default()
        .num(mono(&[(t, 2), (&sm, 2)]), &[])
        .num(mono(&[(t, 2), (&sm, 1), (&um, 1)]), &w)
        .den(sm.pow(2), &[])
        .den(t.pow(2), &[])
        .den(&sm * &um, &w);
    let kernel = Factors::default()
        .num(sm.clone(), &[(POINT, 1), (&x, 1)])
        .num(um.clone(), &[(&x, 1)])
        .den(ParamMonomial::one(), &[(&x, 2)])
        .den(mono(&[(t, 2), (&sm, 2), (&um, 1)]), &[(&x, 1)]);
    let beta = BaileyExpr::Product(vec![
        prefactor.expr(),
        BaileyExpr::integral(&x, 1, BaileyExpr::Product(vec![kernel.expr(), pair.beta.clone().renamed(POINT, &x)])),
    ]);

    let mut constraints = pair.constraints.clone();
    add_step_constraints(&mut constraints, t, &sm, &um);
    BaileyPair { alpha, beta, t_expr: t * &sm, constraints }
}

/// Second lemma: a pair at `s t` gives a pair at `t`,
///
/// ```text
/// alpha'(w, t) = kappa Gamma(s^2 t^2, u w^±) / Gamma(s^2, t^2, w^{±2}, t^2 s^2 u w^±)
///                \oint Gamma(t^2 s u x^±, s w^± x^±) / Gamma(s u x^±) alpha(x, st) dx/x
/// beta'(w, t)  = Gamma(t u w^±) / Gamma(t s^2 u w^±) beta(w, st)
/// ```
///
/// Fails with [`Error::Shape`] unless `s` divides the pair's `t_expr`.
pub fn dual_step(pair: &BaileyPair, s: &str, u: &str) -> Result<BaileyPair> {
    if !pair.t_expr.divisible_by(s) {
        return Err(Error::Shape(format!("dual step needs a pair at {s}·t, got t_expr = {}", pair.t_expr)));
    }
    let (sm, um) = (ParamMonomial::param(s), ParamMonomial::param(u));
    let t = &pair.t_expr / &sm;
    let w = [(POINT, 1)];

    let x = fresh_var(&[&pair.alpha]);
    let prefactor = Factors::default()
        .num(mono(&[(&sm, 2), (&t, 2)]), &[])
        .num(um.clone(), &w)
        .den(sm.pow(2), &[])
        .den(t.pow(2), &[])
        .den(ParamMonomial::one(), &[(POINT, 2)])
        .den(mono(&[(&t, 2), (&sm, 2), (&um, 1)]), &w);
    let kernel = Factors::default()
        .num(mono(&[(&t, 2), (&sm, 1), (&um, 1)]), &[(&x, 1)])
        .num(sm.clone(), &[(POINT, 1), (&x, 1)])
        .den(&sm * &um, &[(&x, 1)]);
    let alpha = BaileyExpr::Product(vec![
        prefactor.expr(),
        BaileyExpr::integral(&x, 1, BaileyExpr::Product(vec![kernel.expr(), pair.alpha.clone().renamed(POINT, &x)])),
    ]);

    let beta = BaileyExpr::Product(vec![
        Factors::default().num(&t * &um, &w).den(mono(&[(&t, 1), (&sm, 2), (&um, 1)]), &w).expr(),
        pair.beta.clone(),
    ]);

    let mut constraints = pair.constraints.clone();
    add_step_constraints(&mut constraints, &t, &sm, &um);
    Ok(BaileyPair { alpha, beta, t_expr: t, constraints })
}

/// `m`-fold [`chain_step`], first step first.
pub fn iterate_chain(pair: &BaileyPair, steps: &[(&str, &str)]) -> BaileyPair {
    steps.iter().fold(pair.clone(), |p, (s, u)| chain_step(&p, s, u))
}

/// `m`-fold [`dual_step`], first step first.
pub fn iterate_dual(pair: &BaileyPair, steps: &[(&str, &str)]) -> Result<BaileyPair> {
    steps.iter().try_fold(pair.clone(), |p, (s, u)| dual_step(&p, s, u))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Lemma {
    /// [`chain_step`], written `C`
    Chain,
    /// [`dual_step`], written `D`
    Dual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub lemma: Lemma,
    pub s: String,
    pub u: String,
}

/// A path in the Bailey tree, e.g. `D(s1,u1);C(s2,u2)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreeWord {
    pub letters: Vec<Letter>,
}

impl TreeWord {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        for l in &letters {
            if l.s.is_empty() || l.u.is_empty() || l.s == l.u {
                return Err(Error::Parse(format!("letter needs two distinct names, got ({}, {})", l.s, l.u)));
            }
        }
        Ok(Self { letters })
    }

    /// Smallest seed parameter `t * prod s` that makes every dual letter
    /// admissible: a dual letter's `s` is added unless an earlier chain
    /// letter already supplied it.
    pub fn seed_parameter(&self, t: &str) -> ParamMonomial {
        let mut seed = ParamMonomial::param(t);
        let mut current = seed.clone();
        for l in &self.letters {
            match l.lemma {
                Lemma::Chain => current = current.times(&l.s, 1),
                Lemma::Dual => {
                    if !current.divisible_by(&l.s) {
                        seed = seed.times(&l.s, 1);
                        current = current.times(&l.s, 1);
                    }
                    current = current.times(&l.s, -1);
                }
            }
        }
        seed
    }

    /// Pairing parameter after the word: `t_seed * prod_C s / prod_D s`.
    pub fn final_parameter(&self, seed: &ParamMonomial) -> ParamMonomial {
        self.letters.iter().fold(seed.clone(), |m, l| match l.lemma {
            Lemma::Chain => m.times(&l.s, 1),
            Lemma::Dual => m.times(&l.s, -1),
        })
    }
}

impl FromStr for TreeWord {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for part in src.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || Error::Parse(format!("bad tree letter `{part}`, expected C(s,u) or D(s,u)"));
            let lemma = match part.chars().next() {
                Some('C') | Some('c') => Lemma::Chain,
                Some('D') | Some('d') => Lemma::Dual,
                _ => return Err(bad()),
            };
            let inner = part[1..].trim().strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
            let (s, u) = inner.split_once(',').ok_or_else(bad)?;
            letters.push(Letter { lemma, s: s.trim().to_string(), u: u.trim().to_string() });
        }
        TreeWord::new(letters)
    }
}

impl fmt::Display for TreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            let c = if l.lemma == Lemma::Chain { 'C' } else { 'D' };
            write!(f, "{c}({},{})", l.s, l.u)?;
        }
        Ok(())
    }
}

/// Applies the word's letters to `seed`, left to right.
pub fn tree_pair(word: &TreeWord, seed: &BaileyPair) -> Result<BaileyPair> {
    word.letters.iter().try_fold(seed.clone(), |p, l| match l.lemma {
        Lemma::Chain => Ok(chain_step(&p, &l.s, &l.u)),
        Lemma::Dual => dual_step(&p, &l.s, &l.u),
    })
}

/// Seeds at [`TreeWord::seed_parameter`] and applies the word.
pub fn tree_pair_from_seed(word: &TreeWord, t0: &str, t1: &str, t2: &str, t: &str) -> Result<BaileyPair> {
    tree_pair(word, &seed_pair_at(t0, t1, t2, word.seed_parameter(t)))
}

/// Both sides of the defining relation at one assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSides {
    /// `beta(w, t)`
    pub beta: Evaluation,
    /// `kappa \oint Gamma(t w^± z^±) alpha(z, t) dz/z`
    pub transform: Evaluation,
}

impl PairSides {
    pub fn residual(&self) -> Complex64 {
        self.beta.value - self.transform.value
    }

    pub fn converged(&self) -> bool {
        self.beta.converged() && self.transform.converged()
    }
}

/// The right-hand side of the pair relation as an expression in `w`.
pub fn pair_transform(pair: &BaileyPair) -> BaileyExpr {
    let z = fresh_var(&[&pair.alpha]);
    let kernel = Factors::default().num(pair.t_expr.clone(), &[(POINT, 1), (&z, 1)]).expr();
    BaileyExpr::integral(&z, 1, BaileyExpr::Product(vec![kernel, pair.alpha.clone().renamed(POINT, &z)]))
}

/// Evaluates both sides after checking the pair's constraints; `w` must be
/// bound in `a.vars`.
pub fn pair_sides(pair: &BaileyPair, a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<PairSides> {
    pair.constraints.check(a, base)?;
    a.var(POINT)?;
    Ok(PairSides {
        beta: pair.beta.evaluate(a, base, opts)?,
        transform: pair_transform(pair).evaluate(a, base, opts)?,
    })
}

/// `beta(w, t) - kappa \oint Gamma(t w^± z^±) alpha(z, t) dz/z`.
pub fn pair_residual(pair: &BaileyPair, a: &Assignment, base: &BaseParams, opts: &EvalOptions) -> Result<Complex64> {
    let sides = pair_sides(pair, a, base, opts)?;
    if !sides.converged() {
        let (est, value) = [&sides.beta, &sides.transform]
            .iter()
            .filter_map(|e| e.quadrature.as_ref().filter(|q| !q.converged).map(|q| (q.est_error, e.value)))
            .fold((0.0, Complex64::new(0.0, 0.0)), |acc, x| if x.0 >= acc.0 { x } else { acc });
        return Err(Error::NotConverged { estimate: value, est_error: est });
    }
    Ok(sides.residual())
}
