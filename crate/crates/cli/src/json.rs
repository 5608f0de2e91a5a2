//! JSON forms of reports, expression trees and pairs.
//!
//! Complex numbers are `[re, im]`. Gamma factors are
//! `{"coeff": {param: exp}, "scale": [re, im], "vars": {var: exp}, "loc": "num" | "den"}`;
//! expression nodes are `{"gamma": [...]}`, `{"scale": {...}}`,
//! `{"product": [...]}` and `{"int": var, "kappa": n, "body": node}`.

use std::collections::BTreeMap;

use elliptic_bailey::bailey::{BaileyExpr, BaileyPair, Prefactor};
use elliptic_bailey::expr::{Assignment, GammaFactor, Location, ParamMonomial};
use elliptic_bailey::verify::VerificationReport;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type JsonComplex = [f64; 2];

pub fn to_pair(z: Complex64) -> JsonComplex {
    [z.re, z.im]
}

pub fn from_pair(z: JsonComplex) -> Complex64 {
    Complex64::new(z[0], z[1])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentJson {
    pub params: BTreeMap<String, JsonComplex>,
    pub vars: BTreeMap<String, JsonComplex>,
}

impl From<&Assignment> for AssignmentJson {
    fn from(a: &Assignment) -> Self {
        let conv = |m: &BTreeMap<String, Complex64>| m.iter().map(|(k, v)| (k.clone(), to_pair(*v))).collect();
        Self { params: conv(&a.params), vars: conv(&a.vars) }
    }
}

impl From<&AssignmentJson> for Assignment {
    fn from(a: &AssignmentJson) -> Self {
        let conv = |m: &BTreeMap<String, JsonComplex>| m.iter().map(|(k, v)| (k.clone(), from_pair(*v))).collect();
        Assignment { params: conv(&a.params), vars: conv(&a.vars) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub identity_id: String,
    pub assignment: AssignmentJson,
    pub lhs: JsonComplex,
    pub rhs: JsonComplex,
    pub abs_err: f64,
    pub rel_err: f64,
    pub nodes_used: Vec<Vec<usize>>,
    pub converged: bool,
    pub runtime_ms: f64,
}

impl From<&VerificationReport> for ReportJson {
    fn from(r: &VerificationReport) -> Self {
        Self {
            identity_id: r.identity_id.clone(),
            assignment: (&r.assignment).into(),
            lhs: to_pair(r.lhs),
            rhs: to_pair(r.rhs),
            abs_err: r.abs_err,
            rel_err: r.rel_err,
            nodes_used: r.nodes_used.clone(),
            converged: r.converged,
            runtime_ms: r.runtime_ms,
        }
    }
}

impl From<&ReportJson> for VerificationReport {
    fn from(r: &ReportJson) -> Self {
        VerificationReport {
            identity_id: r.identity_id.clone(),
            assignment: (&r.assignment).into(),
            lhs: from_pair(r.lhs),
            rhs: from_pair(r.rhs),
            abs_err: r.abs_err,
            rel_err: r.rel_err,
            nodes_used: r.nodes_used.clone(),
            converged: r.converged,
            runtime_ms: r.runtime_ms,
        }
    }
}

/// A verification that stopped before producing values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FailureJson {
    pub identity_id: String,
    pub assignment: AssignmentJson,
    pub error: String,
}

/// A single function value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueJson {
    pub function: String,
    pub args: BTreeMap<String, JsonComplex>,
    pub value: JsonComplex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocJson {
    Num,
    Den,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactorJson {
    pub coeff: BTreeMap<String, i32>,
    pub scale: JsonComplex,
    pub vars: BTreeMap<String, i32>,
    pub loc: LocJson,
}

impl From<&GammaFactor> for FactorJson {
    fn from(f: &GammaFactor) -> Self {
        Self {
            coeff: f.coeff.exponents().clone(),
            scale: to_pair(f.coeff.scale()),
            vars: f.vars.clone(),
            loc: match f.loc {
                Location::Numerator => LocJson::Num,
                Location::Denominator => LocJson::Den,
            },
        }
    }
}

fn monomial(coeff: &BTreeMap<String, i32>, scale: JsonComplex) -> ParamMonomial {
    ParamMonomial::from_exponents(coeff.iter().map(|(k, &e)| (k.as_str(), e))).with_scale(from_pair(scale))
}

impl From<&FactorJson> for GammaFactor {
    fn from(f: &FactorJson) -> Self {
        let vars: Vec<(&str, i32)> = f.vars.iter().map(|(k, &e)| (k.as_str(), e)).collect();
        let loc = match f.loc {
            LocJson::Num => Location::Numerator,
            LocJson::Den => Location::Denominator,
        };
        GammaFactor::new(monomial(&f.coeff, f.scale), &vars, loc)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrefactorJson {
    pub coeff: BTreeMap<String, i32>,
    pub value: JsonComplex,
    pub qq: i32,
    pub pp: i32,
    pub two_pi_i: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExprJson {
    Gamma { gamma: Vec<FactorJson> },
    Scale { scale: PrefactorJson },
    Product { product: Vec<ExprJson> },
    Integral { int: String, kappa: u32, body: Box<ExprJson> },
}

impl From<&BaileyExpr> for ExprJson {
    fn from(e: &BaileyExpr) -> Self {
        match e {
            BaileyExpr::GammaProduct(fs) => ExprJson::Gamma { gamma: fs.iter().map(Into::into).collect() },
            BaileyExpr::Scale(p) => ExprJson::Scale {
                scale: PrefactorJson {
                    coeff: p.monomial.exponents().clone(),
                    value: to_pair(p.monomial.scale()),
                    qq: p.qq_power,
                    pp: p.pp_power,
                    two_pi_i: p.two_pi_i_power,
                },
            },
            BaileyExpr::Product(cs) => ExprJson::Product { product: cs.iter().map(Into::into).collect() },
            BaileyExpr::Integral { var, kappa_power, body } => {
                ExprJson::Integral { int: var.clone(), kappa: *kappa_power, body: Box::new(body.as_ref().into()) }
            }
        }
    }
}

impl From<&ExprJson> for BaileyExpr {
    fn from(e: &ExprJson) -> Self {
        match e {
            ExprJson::Gamma { gamma } => BaileyExpr::GammaProduct(gamma.iter().map(Into::into).collect()),
            ExprJson::Scale { scale } => BaileyExpr::Scale(Prefactor {
                monomial: monomial(&scale.coeff, scale.value),
                qq_power: scale.qq,
                pp_power: scale.pp,
                two_pi_i_power: scale.two_pi_i,
            }),
            ExprJson::Product { product } => BaileyExpr::Product(product.iter().map(Into::into).collect()),
            ExprJson::Integral { int, kappa, body } => BaileyExpr::integral(int, *kappa, body.as_ref().into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairJson {
    pub word: String,
    pub t_expr: BTreeMap<String, i32>,
    pub constraints: Vec<String>,
    pub alpha: ExprJson,
    pub beta: ExprJson,
}

impl PairJson {
    pub fn new(word: &str, pair: &BaileyPair) -> Self {
        Self {
            word: word.to_string(),
            t_expr: pair.t_expr.exponents().clone(),
            constraints: pair.constraints.records.iter().map(|c| c.to_string()).collect(),
            alpha: (&pair.alpha).into(),
            beta: (&pair.beta).into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use elliptic_bailey::bailey::{chain_step, dual_step, seed_pair_at};

    #[test]
    fn factor_form() {
        let f = GammaFactor::denominator(ParamMonomial::from_exponents([("t", 2), ("s", 1)]), &[("x", -1)]);
        let j = serde_json::to_string(&FactorJson::from(&f)).unwrap();
        assert_eq!(j, r#"{"coeff":{"s":1,"t":2},"scale":[1.0,0.0],"vars":{"x":-1},"loc":"den"}"#);
        let back: FactorJson = serde_json::from_str(&j).unwrap();
        assert_eq!(GammaFactor::from(&back), f);
    }

    #[test]
    fn expression_round_trip() {
        let seed = seed_pair_at("t0", "t1", "t2", ParamMonomial::from_exponents([("s1", 1), ("t", 1)]));
        let pair = chain_step(&dual_step(&seed, "s1", "u1").unwrap(), "s2", "u2");
        for e in [&pair.alpha, &pair.beta] {
            let text = serde_json::to_string(&ExprJson::from(e)).unwrap();
            let parsed: ExprJson = serde_json::from_str(&text).unwrap();
            assert_eq!(&BaileyExpr::from(&parsed), e);
            assert_eq!(serde_json::to_string(&parsed).unwrap(), text);
        }
        let text = serde_json::to_string(&ExprJson::from(&pair.beta)).unwrap();
        assert!(text.contains(r#""int":"x1","kappa":1,"body""#), "{text}");
    }

    #[test]
    fn scale_round_trip() {
        let e = BaileyExpr::Scale(Prefactor { qq_power: -1, pp_power: -1, ..Prefactor::numeric(2.0) });
        let j = ExprJson::from(&e);
        assert_eq!(BaileyExpr::from(&j), e);
    }

    #[test]
    fn report_round_trip() {
        let r = VerificationReport {
            identity_id: "beta".into(),
            assignment: Assignment::new().with_param("t0", Complex64::new(0.1, 1.0 / 3.0)).with_var("w", Complex64::new(0.6, 0.8)),
            lhs: Complex64::new(1.0 / 7.0, -2.5e-300),
            rhs: Complex64::new(0.142857142857, 0.0),
            abs_err: 1.4e-13,
            rel_err: 1e-12,
            nodes_used: vec![vec![64], vec![]],
            converged: true,
            runtime_ms: 12.5,
        };
        let text = serde_json::to_string(&ReportJson::from(&r)).unwrap();
        let parsed: ReportJson = serde_json::from_str(&text).unwrap();
        assert_eq!(VerificationReport::from(&parsed), r);
        assert_eq!(serde_json::to_string(&parsed).unwrap(), text);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(serde_json::from_str::<FactorJson>(r#"{"coeff":{},"scale":[1,0],"vars":{},"loc":"num","x":1}"#).is_err());
        assert!(serde_json::from_str::<FactorJson>(r#"{"coeff":{},"scale":[1,0],"vars":{},"loc":"up"}"#).is_err());
    }
}
