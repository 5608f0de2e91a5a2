//! Symbolic products of elliptic gamma functions.
//!
//! A [`GammaFactor`] is `Gamma(c * prod_v v^{e_v})` in the numerator or the
//! denominator, where `c` is a [`ParamMonomial`] in named parameters and the
//! `v` are contour (or external) variables. The `±` shorthand
//! `Gamma(t z^± x^±)` expands to every sign combination, see [`expand_pm`].

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Div, Mul};

use num_complex::Complex64;
// std-linked builds resolve these calls to inherent f64 methods instead
#[allow(unused_imports)]
use num_traits::Float;

use crate::ellgamma::{elliptic_gamma, elliptic_gamma_recip, BaseParams, ToleranceSpec};
use crate::{Error, Result};

/// Product of integer powers of named parameters times a numeric scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamMonomial {
    exponents: BTreeMap<String, i32>,
    scale: Complex64,
}

impl Default for ParamMonomial {
    fn default() -> Self {
        Self::one()
    }
}

impl ParamMonomial {
    pub fn one() -> Self {
        Self { exponents: BTreeMap::new(), scale: Complex64::new(1.0, 0.0) }
    }

    pub fn param(name: &str) -> Self {
        Self::one().times(name, 1)
    }

    pub fn from_exponents<'a>(pairs: impl IntoIterator<Item = (&'a str, i32)>) -> Self {
        pairs.into_iter().fold(Self::one(), |m, (n, e)| m.times(n, e))
    }

    pub fn with_scale(mut self, scale: Complex64) -> Self {
        self.scale = scale;
        self
    }

    /// Multiplies by `name^exp`.
    pub fn times(mut self, name: &str, exp: i32) -> Self {
        if exp != 0 {
            let e = self.exponents.entry(name.to_string()).or_insert(0);
            *e += exp;
            if *e == 0 {
                self.exponents.remove(name);
            }
        }
        self
    }

    pub fn pow(&self, n: i32) -> Self {
        Self {
            exponents: self.exponents.iter().filter(|_| n != 0).map(|(k, &e)| (k.clone(), e * n)).collect(),
            scale: self.scale.powi(n),
        }
    }

    pub fn exponent(&self, name: &str) -> i32 {
        self.exponents.get(name).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &BTreeMap<String, i32> {
        &self.exponents
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty() && self.scale == Complex64::new(1.0, 0.0)
    }

    /// True when `name` appears with a positive exponent.
    pub fn divisible_by(&self, name: &str) -> bool {
        self.exponent(name) >= 1
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.exponents.keys().map(String::as_str)
    }

    pub fn evaluate(&self, a: &Assignment) -> Result<Complex64> {
        let mut v = self.scale;
        for (name, &e) in &self.exponents {
            let x = a.param(name)?;
            v *= x.powi(e);
        }
        if v == Complex64::new(0.0, 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("monomial {self} evaluates to {v}")));
        }
        Ok(v)
    }
}

impl Mul<&ParamMonomial> for &ParamMonomial {
    type Output = ParamMonomial;
    fn mul(self, rhs: &ParamMonomial) -> ParamMonomial {
        let mut out = self.clone();
        for (n, &e) in &rhs.exponents {
            out = out.times(n, e);
        }
        out.scale *= rhs.scale;
        out
    }
}

impl Mul for ParamMonomial {
    type Output = ParamMonomial;
    fn mul(self, rhs: ParamMonomial) -> ParamMonomial {
        &self * &rhs
    }
}

impl Div<&ParamMonomial> for &ParamMonomial {
    type Output = ParamMonomial;
    fn div(self, rhs: &ParamMonomial) -> ParamMonomial {
        self * &rhs.pow(-1)
    }
}

impl fmt::Display for ParamMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if self.scale != Complex64::new(1.0, 0.0) || self.exponents.is_empty() {
            write!(f, "{}", self.scale)?;
            first = false;
        }
        for (n, &e) in &self.exponents {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write_power(f, n, e)?;
        }
        Ok(())
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, name: &str, e: i32) -> fmt::Result {
    if e == 1 {
        write!(f, "{name}")
    } else {
        write!(f, "{name}^{e}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Location {
    Numerator,
    Denominator,
}

/// `Gamma(coeff * prod vars^exp)` in the numerator or denominator.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaFactor {
    pub coeff: ParamMonomial,
    pub vars: BTreeMap<String, i32>,
    pub loc: Location,
}

/// Total order key for multiset comparisons of factors.
pub type FactorKey = (Location, Vec<(String, i32)>, Vec<(String, i32)>, (u64, u64));

impl GammaFactor {
    pub fn new(coeff: ParamMonomial, vars: &[(&str, i32)], loc: Location) -> Self {
        let vars = vars.iter().filter(|(_, e)| *e != 0).map(|&(v, e)| (v.to_string(), e)).collect();
        Self { coeff, vars, loc }
    }

    pub fn numerator(coeff: ParamMonomial, vars: &[(&str, i32)]) -> Self {
        Self::new(coeff, vars, Location::Numerator)
    }

    pub fn denominator(coeff: ParamMonomial, vars: &[(&str, i32)]) -> Self {
        Self::new(coeff, vars, Location::Denominator)
    }

    pub fn var_exponent(&self, var: &str) -> i32 {
        self.vars.get(var).copied().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    /// Coefficient times the values of every variable bound in `a`; unbound
    /// variables are left to the caller.
    pub fn argument(&self, a: &Assignment) -> Result<Complex64> {
        let mut z = self.coeff.evaluate(a)?;
        for (v, &e) in &self.vars {
            z *= a.var(v)?.powi(e);
        }
        Ok(z)
    }

    pub fn rename_var(&mut self, from: &str, to: &str) {
        if let Some(e) = self.vars.remove(from) {
            *self.vars.entry(to.to_string()).or_insert(0) += e;
            self.vars.retain(|_, e| *e != 0);
        }
    }

    pub fn key(&self) -> FactorKey {
        let s = self.coeff.scale();
        (
            self.loc,
            self.coeff.exponents().iter().map(|(k, &e)| (k.clone(), e)).collect(),
            self.vars.iter().map(|(k, &e)| (k.clone(), e)).collect(),
            (s.re.to_bits(), s.im.to_bits()),
        )
    }

    /// Same factor moved to the other side of the fraction bar.
    pub fn flipped(&self) -> Self {
        let loc = match self.loc {
            Location::Numerator => Location::Denominator,
            Location::Denominator => Location::Numerator,
        };
        Self { loc, ..self.clone() }
    }
}

impl fmt::Display for GammaFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.loc == Location::Denominator {
            f.write_str("1/")?;
        }
        f.write_str("Γ(")?;
        let coeff_shown = !self.coeff.is_one() || self.vars.is_empty();
        if coeff_shown {
            write!(f, "{}", self.coeff)?;
        }
        for (i, (v, &e)) in self.vars.iter().enumerate() {
            if coeff_shown || i > 0 {
                f.write_str(" ")?;
            }
            write_power(f, v, e)?;
        }
        f.write_str(")")
    }
}

/// Values for parameters and for contour or external variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Assignment {
    pub params: BTreeMap<String, Complex64>,
    pub vars: BTreeMap<String, Complex64>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_param(mut self, name: &str, v: Complex64) -> Self {
        self.params.insert(name.to_string(), v);
        self
    }

    pub fn with_var(mut self, name: &str, v: Complex64) -> Self {
        self.vars.insert(name.to_string(), v);
        self
    }

    pub fn set_param(&mut self, name: &str, v: Complex64) {
        self.params.insert(name.to_string(), v);
    }

    pub fn set_var(&mut self, name: &str, v: Complex64) {
        self.vars.insert(name.to_string(), v);
    }

    pub fn param(&self, name: &str) -> Result<Complex64> {
        self.params.get(name).copied().ok_or_else(|| Error::Unbound(name.to_string()))
    }

    pub fn var(&self, name: &str) -> Result<Complex64> {
        self.vars.get(name).copied().ok_or_else(|| Error::Unbound(name.to_string()))
    }
}

/// Product of gamma factors with an ordered list of integration variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Integrand {
    pub factors: Vec<GammaFactor>,
    pub contour_vars: Vec<String>,
}

impl Integrand {
    pub fn new(factors: Vec<GammaFactor>, contour_vars: &[&str]) -> Self {
        Self { factors, contour_vars: contour_vars.iter().map(|v| v.to_string()).collect() }
    }

    /// Every variable referenced by a factor.
    pub fn vars(&self) -> BTreeSet<String> {
        self.factors.iter().flat_map(|f| f.vars.keys().cloned()).collect()
    }

    /// Variables that are not integrated over.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut v = self.vars();
        for c in &self.contour_vars {
            v.remove(c);
        }
        v
    }

    pub fn rename_var(&mut self, from: &str, to: &str) {
        for f in &mut self.factors {
            f.rename_var(from, to);
        }
        for c in &mut self.contour_vars {
            if c == from {
                *c = to.to_string();
            }
        }
    }

    /// Product of `Gamma` over numerator factors divided by `Gamma` over
    /// denominator factors. A denominator factor sitting on a pole of
    /// `Gamma` is reported as a pole even though the quotient is finite.
    pub fn evaluate(&self, a: &Assignment, base: &BaseParams, tol: &ToleranceSpec) -> Result<Complex64> {
        let mut v = Complex64::new(1.0, 0.0);
        for f in &self.factors {
            let z = f.argument(a)?;
            let g = elliptic_gamma(z, base, tol).map_err(|e| attach_factor(e, f))?;
            match f.loc {
                Location::Numerator => v *= g,
                Location::Denominator => v /= g,
            }
        }
        Ok(v)
    }

    /// Like [`Integrand::evaluate`] but denominators use the reciprocal
    /// gamma function, so `1/Gamma(z^{±2})` vanishes at `z = ±1` instead of
    /// failing. This is the pointwise value quadrature integrates.
    pub fn evaluate_regularized(&self, a: &Assignment, base: &BaseParams, tol: &ToleranceSpec) -> Result<Complex64> {
        let mut v = Complex64::new(1.0, 0.0);
        for f in &self.factors {
            v *= factor_value(f, f.argument(a)?, base, tol)?;
        }
        Ok(v)
    }

    /// Sorted factor keys, for multiset comparisons.
    pub fn multiset(&self) -> Vec<FactorKey> {
        let mut keys: Vec<_> = self.factors.iter().map(GammaFactor::key).collect();
        keys.sort();
        keys
    }

    /// Removes numerator/denominator pairs with identical arguments.
    pub fn cancel_common(&mut self) {
        let mut out: Vec<GammaFactor> = Vec::with_capacity(self.factors.len());
        for f in self.factors.drain(..) {
            let flipped = f.flipped();
            if let Some(i) = out.iter().position(|g| *g == flipped) {
                out.swap_remove(i);
            } else {
                out.push(f);
            }
        }
        self.factors = out;
    }
}

/// Contribution of one factor at argument `z`: `Gamma(z)` or `1/Gamma(z)`.
pub(crate) fn factor_value(f: &GammaFactor, z: Complex64, base: &BaseParams, tol: &ToleranceSpec) -> Result<Complex64> {
    let v = match f.loc {
        Location::Numerator => elliptic_gamma(z, base, tol),
        Location::Denominator => elliptic_gamma_recip(z, base, tol),
    };
    v.map_err(|e| attach_factor(e, f))
}

fn attach_factor(e: Error, f: &GammaFactor) -> Error {
    match e {
        Error::Pole { arg, .. } => Error::Pole { arg, factor: Some(f.to_string()) },
        other => other,
    }
}

/// Declared parameter and variable names for parsing shorthand.
#[derive(Debug, Clone, Default)]
pub struct SymbolTable {
    pub params: BTreeSet<String>,
    pub vars: BTreeSet<String>,
}

impl SymbolTable {
    pub fn new<'a>(params: impl IntoIterator<Item = &'a str>, vars: impl IntoIterator<Item = &'a str>) -> Self {
        Self {
            params: params.into_iter().map(String::from).collect(),
            vars: vars.into_iter().map(String::from).collect(),
        }
    }
}

/// One `name^exp` token of a shorthand descriptor; `pm` marks `name^{±exp}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmTerm {
    pub name: String,
    pub exp: i32,
    pub pm: bool,
}

/// Shorthand such as `Gamma(t w^± x^±)` or `Gamma(z^{±2})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PmSpec {
    pub terms: Vec<PmTerm>,
    pub loc: Location,
}

impl PmSpec {
    /// Parses whitespace- or `*`-separated tokens `name`, `name^k`,
    /// `name^±`, `name^±k` (`pm` and `+-` are accepted for `±`).
    pub fn parse(src: &str, loc: Location) -> Result<Self> {
        let mut terms = Vec::new();
        for tok in src.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => (n, Some(e.trim_matches(|c| c == '{' || c == '}'))),
                None => (tok, None),
            };
            let valid = name.chars().next().is_some_and(|c| c.is_alphabetic())
                && name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::Parse(format!("bad symbol `{name}` in `{src}`")));
            }
            let (pm, digits) = match exp {
                None => (false, "1"),
                Some(e) => match e.strip_prefix('±').or_else(|| e.strip_prefix("pm")).or_else(|| e.strip_prefix("+-")) {
                    Some(rest) => (true, if rest.is_empty() { "1" } else { rest }),
                    None => (false, e),
                },
            };
            let exp: i32 = digits.parse().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
            if pm && exp <= 0 {
                return Err(Error::Parse(format!("± exponent must be positive in `{tok}`")));
            }
            terms.push(PmTerm { name: name.to_string(), exp, pm });
        }
        if terms.is_empty() {
            return Err(Error::Parse("empty gamma argument".into()));
        }
        Ok(Self { terms, loc })
    }
}

/// Expands `±` markers into all `2^n` sign combinations.
pub fn expand_pm(spec: &PmSpec, symbols: &SymbolTable) -> Result<Vec<GammaFactor>> {
    let mut coeff = ParamMonomial::one();
    let mut fixed: Vec<(&str, i32)> = Vec::new();
    let mut pm: Vec<(&str, i32)> = Vec::new();
    for t in &spec.terms {
        if symbols.vars.contains(&t.name) {
            if t.pm {
                pm.push((&t.name, t.exp));
            } else {
                fixed.push((&t.name, t.exp));
            }
        } else if symbols.params.contains(&t.name) {
            if t.pm {
                return Err(Error::Shape(format!("± applies to variables, not parameter `{}`", t.name)));
            }
            coeff = coeff.times(&t.name, t.exp);
        } else {
            return Err(Error::UnknownSymbol(t.name.clone()));
        }
    }
    let mut out = pm_factors(&coeff, &pm, spec.loc);
    for f in &mut out {
        for &(v, e) in &fixed {
            *f.vars.entry(v.to_string()).or_insert(0) += e;
        }
        f.vars.retain(|_, e| *e != 0);
    }
    Ok(out)
}

/// `Gamma(coeff v_1^{±e_1} ... v_n^{±e_n})` as `2^n` factors; the all-plus
/// combination comes first.
pub fn pm_factors(coeff: &ParamMonomial, vars: &[(&str, i32)], loc: Location) -> Vec<GammaFactor> {
    let n = vars.len();
    (0..1u32 << n)
        .map(|mask| {
            let signed: Vec<(&str, i32)> = vars
                .iter()
                .enumerate()
                .map(|(i, &(v, e))| (v, if mask >> i & 1 == 1 { -e } else { e }))
                .collect();
            GammaFactor::new(coeff.clone(), &signed, loc)
        })
        .collect()
}

/// Distance from the unit circle to the nearest pole of `intg` in `var`.
///
/// Other variables take their values from `a`, or modulus 1 when unbound
/// (contour variables). Numerator factors `Gamma(c v^e)` have poles at
/// `c v^e = q^{-j} p^{-k}`, denominators at `c v^e = q^{j+1} p^{k+1}`.
pub fn pole_margin(intg: &Integrand, var: &str, a: &Assignment, base: &BaseParams) -> Result<f64> {
    let (qm, pm) = (base.q().norm(), base.p().norm());
    let jmax = lattice_extent(qm);
    let kmax = lattice_extent(pm);
    let mut margin = f64::INFINITY;
    for f in &intg.factors {
        let e = f.var_exponent(var);
        if e == 0 {
            continue;
        }
        let mut cm = f.coeff.evaluate(a)?.norm();
        for (v, &ev) in &f.vars {
            if v != var {
                if let Some(x) = a.vars.get(v) {
                    cm *= x.norm().powi(ev);
                }
            }
        }
        let inv_e = 1.0 / e as f64;
        for k in 0..kmax {
            for j in 0..jmax {
                let lattice = qm.powi(j as i32) * pm.powi(k as i32);
                let target = match f.loc {
                    Location::Numerator => 1.0 / (cm * lattice),
                    Location::Denominator => qm * pm * lattice / cm,
                };
                if target == 0.0 || !target.is_finite() {
                    continue;
                }
                let r = target.powf(inv_e);
                let d = (r - 1.0).abs();
                if d < 1e-14 {
                    return Err(Error::Degenerate(format!("{f} has a pole on |{var}| = 1")));
                }
                margin = margin.min(d);
            }
        }
    }
    Ok(margin)
}

fn lattice_extent(r: f64) -> usize {
    if r == 0.0 {
        1
    } else {
        ((1e-16f64).ln() / r.ln()).ceil().clamp(1.0, 400.0) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellgamma::BaseParams;
    use alloc::vec;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn beta_integrand() -> Integrand {
        let mut fs = Vec::new();
        let mut a = ParamMonomial::one();
        for m in 0..5 {
            let name = format!("t{m}");
            fs.extend(pm_factors(&ParamMonomial::param(&name), &[("z", 1)], Location::Numerator));
            a = a.times(&name, 1);
        }
        fs.extend(pm_factors(&ParamMonomial::one(), &[("z", 2)], Location::Denominator));
        fs.extend(pm_factors(&a, &[("z", 1)], Location::Denominator));
        Integrand::new(fs, &["z"])
    }

    fn beta_assignment(ts: [f64; 5]) -> Assignment {
        let mut a = Assignment::new();
        for (m, t) in ts.iter().enumerate() {
            a.set_param(&format!("t{m}"), c(*t));
        }
        a
    }

    #[test]
    fn expand_pm_examples() {
        let syms = SymbolTable::new(["t"], ["z", "w", "x"]);
        let f = expand_pm(&PmSpec::parse("t z^±", Location::Numerator).unwrap(), &syms).unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(f[0], GammaFactor::numerator(ParamMonomial::param("t"), &[("z", 1)]));
        assert_eq!(f[1], GammaFactor::numerator(ParamMonomial::param("t"), &[("z", -1)]));

        let f = expand_pm(&PmSpec::parse("z^{±2}", Location::Denominator).unwrap(), &syms).unwrap();
        let exps: Vec<i32> = f.iter().map(|g| g.var_exponent("z")).collect();
        assert_eq!(exps, [2, -2]);

        let f = expand_pm(&PmSpec::parse("t*w^pm*x^+-", Location::Numerator).unwrap(), &syms).unwrap();
        let mut pairs: Vec<(i32, i32)> = f.iter().map(|g| (g.var_exponent("w"), g.var_exponent("x"))).collect();
        pairs.sort();
        assert_eq!(pairs, [(-1, -1), (-1, 1), (1, -1), (1, 1)]);
    }

    #[test]
    fn expand_pm_errors() {
        let syms = SymbolTable::new(["t"], ["z"]);
        let spec = PmSpec::parse("s z^±", Location::Numerator).unwrap();
        assert_eq!(expand_pm(&spec, &syms), Err(Error::UnknownSymbol("s".into())));
        assert!(PmSpec::parse("", Location::Numerator).is_err());
        assert!(PmSpec::parse("z^x", Location::Numerator).is_err());
        assert!(matches!(expand_pm(&PmSpec::parse("t^± z", Location::Numerator).unwrap(), &syms), Err(Error::Shape(_))));
    }

    #[test]
    fn monomial_algebra() {
        let t = ParamMonomial::param("t");
        let s = ParamMonomial::param("s");
        let m = &(&t.pow(2) * &s.pow(2)) * &ParamMonomial::param("u");
        assert_eq!(m.exponent("t"), 2);
        assert!(m.divisible_by("s"));
        let d = &m / &s;
        assert_eq!(d.exponent("s"), 1);
        assert!((&d / &d).is_one());
        assert_eq!(m.to_string(), "s^2 t^2 u");
        let a = Assignment::new().with_param("t", c(0.5)).with_param("s", c(0.2)).with_param("u", c(2.0));
        assert!((m.evaluate(&a).unwrap() - c(0.02)).norm() < 1e-16);
        assert_eq!(ParamMonomial::param("x").evaluate(&a), Err(Error::Unbound("x".into())));
    }

    #[test]
    fn evaluate_examples() {
        let b = BaseParams::real(0.3, 0.2).unwrap();
        let tol = ToleranceSpec::default();
        let empty = Integrand::default();
        assert_eq!(empty.evaluate(&Assignment::new(), &b, &tol).unwrap(), c(1.0));

        let a = beta_assignment([0.7, 0.6, 0.5, 0.6, 0.7]).with_var("z", c(1.0));
        let err = beta_integrand().evaluate(&a, &b, &tol).unwrap_err();
        assert!(matches!(err, Error::Pole { factor: Some(_), .. }), "{err:?}");
        // regularized evaluation is finite (and zero) there
        assert_eq!(beta_integrand().evaluate_regularized(&a, &b, &tol).unwrap(), c(0.0));

        let single = Integrand::new(vec![GammaFactor::numerator(ParamMonomial::param("t"), &[("z", 1)])], &[]);
        let a = Assignment::new().with_param("t", c(0.5)).with_var("z", c(1.0));
        let v = single.evaluate(&a, &b, &tol).unwrap();
        assert_eq!(v, crate::ellgamma::elliptic_gamma(c(0.5), &b, &tol).unwrap());
    }

    #[test]
    fn beta_integrand_is_pm_symmetric() {
        let b = BaseParams::new(Complex64::new(0.2, 0.1), c(0.3)).unwrap();
        let tol = ToleranceSpec::default();
        let intg = beta_integrand();
        let z = Complex64::from_polar(1.0, 0.7);
        let a = beta_assignment([0.7, 0.6, 0.5, 0.6, 0.7]);
        let v1 = intg.evaluate(&a.clone().with_var("z", z), &b, &tol).unwrap();
        let v2 = intg.evaluate(&a.with_var("z", z.inv()), &b, &tol).unwrap();
        assert!((v1 / v2 - 1.0).norm() < 1e-13);
    }

    #[test]
    fn pole_margin_examples() {
        let b = BaseParams::real(0.3, 0.2).unwrap();
        let a = beta_assignment([0.6; 5]);
        let m = pole_margin(&beta_integrand(), "z", &a, &b).unwrap();
        // enumerate the candidate moduli by hand
        let big_a = 0.6f64.powi(5);
        let expect = [1.0 - 0.6, 1.0 / 0.6 - 1.0, 1.0 - 0.06 / big_a, 1.0 - 0.06f64.sqrt()]
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        assert!((m - expect).abs() < 1e-12, "{m} vs {expect}");

        let single = Integrand::new(vec![GammaFactor::numerator(ParamMonomial::param("t"), &[("z", 1)])], &["z"]);
        let a = Assignment::new().with_param("t", c(0.5));
        assert!((pole_margin(&single, "z", &a, &b).unwrap() - 1.0).abs() < 1e-14);

        // |pq / A| = 0.68
        let den = Integrand::new(vec![GammaFactor::denominator(ParamMonomial::param("A"), &[("z", 1)])], &["z"]);
        let a = Assignment::new().with_param("A", c(0.06 / 0.68));
        assert!((pole_margin(&den, "z", &a, &b).unwrap() - 0.32).abs() < 1e-12);

        let on_circle = Integrand::new(vec![GammaFactor::numerator(ParamMonomial::param("t"), &[("z", 1)])], &["z"]);
        let a = Assignment::new().with_param("t", c(1.0));
        assert!(matches!(pole_margin(&on_circle, "z", &a, &b), Err(Error::Degenerate(_))));
    }

    #[test]
    fn cancel_common_removes_pairs() {
        let g = GammaFactor::numerator(ParamMonomial::param("t"), &[("x", 1)]);
        let mut i = Integrand::new(vec![g.clone(), g.flipped(), g.clone()], &[]);
        i.cancel_common();
        assert_eq!(i.factors, vec![g]);
    }

    #[test]
    fn display_factor() {
        let f = GammaFactor::denominator(ParamMonomial::from_exponents([("t", 2), ("s", 1)]), &[("x", -1)]);
        assert_eq!(f.to_string(), "1/Γ(s t^2 x^-1)");
    }
}
