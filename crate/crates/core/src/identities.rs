//! Both sides of each integral identity, written out directly from the
//! closed formulas rather than through [`crate::bailey`].
//!
//! Parameter names are fixed: `t0..t4` for the beta integral, otherwise the
//! scalar `t`, the triple `t0, t1, t2`, and `s<k>`, `u<k>` for step
//! parameters. The external point is [`POINT`]; integration variables are
//! `z`, `x` and `x<k>`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::bailey::{mono, BaileyExpr, Factors, Prefactor, POINT};
use crate::constraints::{Constraint, ConstraintSet};
use crate::expr::ParamMonomial;
use crate::{Error, Result};

const TRIPLE: [&str; 3] = ["t0", "t1", "t2"];
const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Left and right sides of one identity with its validity region.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentitySides {
    pub id: String,
    pub lhs: BaileyExpr,
    pub rhs: BaileyExpr,
    pub constraints: ConstraintSet,
}

fn p(name: &str) -> ParamMonomial {
    ParamMonomial::param(name)
}

fn s(k: usize) -> String {
    format!("s{k}")
}

fn u(k: usize) -> String {
    format!("u{k}")
}

fn x(k: usize) -> String {
    format!("x{k}")
}

/// `prod_{k in ks} s_k^e`
fn s_prod(ks: impl IntoIterator<Item = usize>, e: i32) -> ParamMonomial {
    ks.into_iter().fold(ParamMonomial::one(), |m, k| m.times(&s(k), e))
}

fn triple_product() -> ParamMonomial {
    mono(&[(&p("t0"), 1), (&p("t1"), 1), (&p("t2"), 1)])
}

/// Nests `body` under integrals over `vars` (outermost first), attaching
/// one `kappa` to each of the first `kappas` nodes.
fn integrate(vars: &[String], kappas: usize, body: BaileyExpr) -> BaileyExpr {
    vars.iter()
        .enumerate()
        .rev()
        .fold(body, |acc, (i, v)| BaileyExpr::integral(v, (i < kappas) as u32, acc))
}

fn product(parts: Vec<BaileyExpr>) -> BaileyExpr {
    BaileyExpr::Product(parts)
}

/// `Gamma(t_r t_j) / Gamma(c t_r t_j)` over `r < j`, or the inverse.
fn pair_ratio(f: Factors, c: &ParamMonomial, invert: bool) -> Factors {
    PAIRS.iter().fold(f, |f, &(r, j)| {
        let rj = &p(TRIPLE[r]) * &p(TRIPLE[j]);
        let crj = c * &rj;
        if invert {
            f.num(crj, &[]).den(rj, &[])
        } else {
            f.num(rj, &[]).den(crj, &[])
        }
    })
}

/// `|t0..t4| < 1`, `|pq| < |A|`:
///
/// ```text
/// (1/2 pi i) \oint prod_m Gamma(t_m z^±) / Gamma(z^{±2}, A z^±) dz/z
///   = 2 prod_{m<s} Gamma(t_m t_s) / ((q;q)(p;p) prod_m Gamma(A / t_m))
/// ```
pub fn beta_integral() -> IdentitySides {
    let names = ["t0", "t1", "t2", "t3", "t4"];
    let a = names.iter().fold(ParamMonomial::one(), |m, n| m.times(n, 1));
    let z = [("z", 1)];

    let mut body = Factors::default();
    for n in names {
        body = body.num(p(n), &z);
    }
    let body = body.den(ParamMonomial::one(), &[("z", 2)]).den(a.clone(), &z);
    let lhs = product(vec![
        BaileyExpr::Scale(Prefactor { two_pi_i_power: -1, ..Prefactor::default() }),
        BaileyExpr::integral("z", 0, body.expr()),
    ]);

    let mut closed = Factors::default();
    for i in 0..5 {
        for j in i + 1..5 {
            closed = closed.num(&p(names[i]) * &p(names[j]), &[]);
        }
        closed = closed.den(&a / &p(names[i]), &[]);
    }
    let rhs = product(vec![
        BaileyExpr::Scale(Prefactor { qq_power: -1, pp_power: -1, ..Prefactor::numeric(2.0) }),
        closed.expr(),
    ]);

    let mut cs = ConstraintSet::new();
    cs.disk_params(&names);
    cs.push(Constraint::balancing(a));
    IdentitySides { id: "beta".to_string(), lhs, rhs, constraints: cs }
}

/// One side of the symmetric transformation with `(a_j)` outside and
/// `(b_j)` inside:
///
/// ```text
/// prod_j Gamma(A/a_j) / Gamma(t^2 A/a_j)
///   \oint prod_j Gamma(t a_j z^±, b_j z^±) / Gamma(z^{±2}, t^2 B z^±, t A z^±) dz/z
/// ```
fn transformation_side(a: [&str; 3], b: [&str; 3]) -> BaileyExpr {
    let t = p("t");
    let big_a = a.iter().fold(ParamMonomial::one(), |m, n| m.times(n, 1));
    let big_b = b.iter().fold(ParamMonomial::one(), |m, n| m.times(n, 1));
    let z = [("z", 1)];

    let mut pre = Factors::default();
    for n in a {
        let rest = &big_a / &p(n);
        pre = pre.num(rest.clone(), &[]).den(mono(&[(&t, 2), (&rest, 1)]), &[]);
    }
    let mut body = Factors::default();
    for (an, bn) in a.iter().zip(b) {
        body = body.num(&t * &p(an), &z).num(p(bn), &z);
    }
    let body = body
        .den(ParamMonomial::one(), &[("z", 2)])
        .den(mono(&[(&t, 2), (&big_b, 1)]), &z)
        .den(&t * &big_a, &z);
    product(vec![pre.expr(), BaileyExpr::integral("z", 0, body.expr())])
}

/// Symmetric transformation between two integrals with parameters
/// `t, t0, t1, t2, s0, s1, s2`; valid for `|pq| < |t^2 B|, |t^2 S|`.
pub fn transformation() -> IdentitySides {
    let ss = ["s0", "s1", "s2"];
    let t = p("t");
    let big_s = ss.iter().fold(ParamMonomial::one(), |m, n| m.times(n, 1));

    let mut cs = ConstraintSet::new();
    cs.disk_params(&["t", "t0", "t1", "t2", "s0", "s1", "s2"]);
    cs.push(Constraint::balancing(mono(&[(&t, 2), (&triple_product(), 1)])));
    cs.push(Constraint::balancing(mono(&[(&t, 2), (&big_s, 1)])));
    IdentitySides {
        id: "transformation".to_string(),
        lhs: transformation_side(TRIPLE, ss),
        rhs: transformation_side(ss, TRIPLE),
        constraints: cs,
    }
}

fn check_m(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("iteration depth m must be at least 1".to_string()));
    }
    Ok(())
}

/// Identity from `m` chain steps on the seed pair. Parameters `t, t0..t2,
/// s1..sm, u1..um`; the left side is `m`-dimensional, the right side
/// one-dimensional.
pub fn id_seq(m: usize) -> Result<IdentitySides> {
    check_m(m)?;
    let t = p("t");
    let b = triple_product();
    // t^2 prod_{l<=k} s_l^2
    let t2s2 = |k: usize| mono(&[(&t, 2), (&s_prod(1..=k, 2), 1)]);
    let xv: Vec<String> = (1..=m).map(x).chain([POINT.to_string()]).collect();

    let mut pre = Factors::default();
    for k in 1..=m {
        pre = pre.num(t2s2(k), &[]).den(p(&s(k)).pow(2), &[]).den(t2s2(k - 1), &[]);
    }
    let mut body = Factors::default();
    for r in TRIPLE {
        body = body.num(&t * &p(r), &[(&xv[0], 1)]);
    }
    body = body.den(&t * &b, &[(&xv[0], 1)]);
    for k in 1..=m {
        let (sk, uk) = (p(&s(k)), p(&u(k)));
        let (xk, xn) = (xv[k - 1].as_str(), xv[k].as_str());
        body = body
            .num(mono(&[(&t2s2(k - 1), 1), (&sk, 1), (&uk, 1)]), &[(xn, 1)])
            .num(sk.clone(), &[(xn, 1), (xk, 1)])
            .num(uk.clone(), &[(xk, 1)])
            .den(&sk * &uk, &[(xn, 1)])
            .den(ParamMonomial::one(), &[(xk, 2)])
            .den(&t2s2(k) * &uk, &[(xk, 1)]);
    }
    let lhs = product(vec![pre.expr(), integrate(&xv[..m], m - 1, body.expr())]);

    let big_t = &t * &s_prod(1..=m, 1);
    let pre = pair_ratio(Factors::default().den(t.pow(2), &[]), &t.pow(2), true);
    let mut body = Factors::default().num(big_t, &[(POINT, 1), ("x", 1)]);
    for r in TRIPLE {
        body = body.num(p(r), &[("x", 1)]);
    }
    body = body.den(ParamMonomial::one(), &[("x", 2)]).den(mono(&[(&t, 2), (&b, 1)]), &[("x", 1)]);
    for k in 1..=m {
        let tk = &t * &s_prod(1..k, 1);
        let uk = p(&u(k));
        body = body.num(&tk * &uk, &[("x", 1)]).den(mono(&[(&tk, 1), (&p(&s(k)), 2), (&uk, 1)]), &[("x", 1)]);
    }
    let rhs = product(vec![pre.expr(), BaileyExpr::integral("x", 0, body.expr())]);

    let mut cs = ConstraintSet::new();
    cs.disk_params(&["t", "t0", "t1", "t2"]);
    for k in 1..=m {
        cs.disk_params(&[&s(k), &u(k)]);
    }
    cs.push(Constraint::balancing(mono(&[(&t, 2), (&b, 1)])));
    for k in 1..=m {
        cs.push(Constraint::balancing(&t2s2(k) * &p(&u(k))));
    }
    cs.declare_point(POINT);
    Ok(IdentitySides { id: format!("id-seq:{m}"), lhs, rhs, constraints: cs })
}

/// Common prefactor relating the `m = 1` chain identity to
/// [`transformation`] under `s0 = u1, s1 = s1 w, s2 = s1 / w`: each side of
/// `id_seq(1)` equals this times the matching side of the transformation.
///
/// ```text
/// Gamma(t^2 s1^2, t^2 s1 u1 w^±) / Gamma(s1^2, t^2, s1 u1 w^±)
///   * prod_{r<j} Gamma(t^2 t_r t_j) / Gamma(t_r t_j)
/// ```
pub fn id_seq_transformation_ratio() -> BaileyExpr {
    let (t, s1, u1) = (p("t"), p("s1"), p("u1"));
    let f = Factors::default()
        .num(mono(&[(&t, 2), (&s1, 2)]), &[])
        .num(mono(&[(&t, 2), (&s1, 1), (&u1, 1)]), &[(POINT, 1)])
        .den(s1.pow(2), &[])
        .den(t.pow(2), &[])
        .den(&s1 * &u1, &[(POINT, 1)]);
    pair_ratio(f, &t.pow(2), true).expr()
}

/// The identity from one dual step followed by one chain step, with
/// parameters `t, t0..t2, s1, s2, u1, u2`. The left side is
/// one-dimensional, the right side two-dimensional.
pub fn ident1() -> IdentitySides {
    let (t, s1, s2, u1, u2) = (p("t"), p("s1"), p("s2"), p("u1"), p("u2"));
    let b = triple_product();
    let xx = [("x", 1)];

    let mut body = Factors::default()
        .num(s2.clone(), &[(POINT, 1), ("x", 1)])
        .num(&t * &u1, &xx)
        .num(u2.clone(), &xx);
    for r in TRIPLE {
        body = body.num(mono(&[(&t, 1), (&s1, 1), (&p(r), 1)]), &xx);
    }
    let body = body
        .den(ParamMonomial::one(), &[("x", 2)])
        .den(mono(&[(&t, 2), (&s2, 2), (&u2, 1)]), &xx)
        .den(mono(&[(&t, 1), (&s1, 2), (&u1, 1)]), &xx)
        .den(mono(&[(&t, 1), (&s1, 1), (&b, 1)]), &xx);
    let lhs = BaileyExpr::integral("x", 0, body.expr());

    let t2s12 = mono(&[(&t, 2), (&s1, 2)]);
    let pre = pair_ratio(Factors::default(), &t2s12, true)
        .num(s2.pow(2), &[])
        .num(&s2 * &u2, &[(POINT, 1)])
        .den(s1.pow(2), &[])
        .den(mono(&[(&t, 2), (&s2, 2)]), &[])
        .den(mono(&[(&t, 2), (&s2, 1), (&u2, 1)]), &[(POINT, 1)]);
    let (x1, x2) = ([("x1", 1)], [("x2", 1)]);
    let mut body = Factors::default()
        .num(s1.clone(), &[("x2", 1), ("x1", 1)])
        .num(&t * &s2, &[(POINT, 1), ("x2", 1)])
        .num(&t * &u2, &x2)
        .num(u1.clone(), &x2)
        .den(ParamMonomial::one(), &[("x2", 2)])
        .den(mono(&[(&t, 1), (&s2, 2), (&u2, 1)]), &x2)
        .den(&t2s12 * &u1, &x2)
        .num(mono(&[(&t, 2), (&s1, 1), (&u1, 1)]), &x1);
    for r in TRIPLE {
        body = body.num(p(r), &x1);
    }
    let body = body
        .den(ParamMonomial::one(), &[("x1", 2)])
        .den(&s1 * &u1, &x1)
        .den(&t2s12 * &b, &x1);
    let rhs = product(vec![pre.expr(), integrate(&[x(2), x(1)], 1, body.expr())]);

    let mut cs = ConstraintSet::new();
    cs.disk_params(&["t", "t0", "t1", "t2", "s1", "s2", "u1", "u2"]);
    cs.push(Constraint::balancing(&t2s12 * &b));
    cs.push(Constraint::balancing(&t2s12 * &u1));
    cs.push(Constraint::balancing(mono(&[(&t, 2), (&s2, 2), (&u2, 1)])));
    cs.declare_point(POINT);
    IdentitySides { id: "ident1".to_string(), lhs, rhs, constraints: cs }
}

/// The identity from `m` dual steps followed by one chain step, with
/// parameters `t, t0..t2, s1..s(m+1), u1..u(m+1)`. The left side is
/// one-dimensional, the right side `(m+1)`-dimensional.
pub fn identfin(m: usize) -> Result<IdentitySides> {
    check_m(m)?;
    let t = p("t");
    let b = triple_product();
    let (sl, ul) = (p(&s(m + 1)), p(&u(m + 1)));
    // t^2 prod_{l=k}^{m} s_l^2
    let tail2 = |k: usize| mono(&[(&t, 2), (&s_prod(k..=m, 2), 1)]);
    // t prod_{l=k}^{m} s_l
    let tail1 = |k: usize| &t * &s_prod(k..=m, 1);
    let xx = [("x", 1)];

    let mut body = Factors::default()
        .num(sl.clone(), &[(POINT, 1), ("x", 1)])
        .num(ul.clone(), &xx)
        .den(ParamMonomial::one(), &[("x", 2)])
        .den(mono(&[(&t, 2), (&sl, 2), (&ul, 1)]), &xx);
    for k in 1..=m {
        let (sk, uk) = (p(&s(k)), p(&u(k)));
        body = body
            .num(&tail1(k + 1) * &uk, &xx)
            .den(mono(&[(&tail1(k + 1), 1), (&sk, 2), (&uk, 1)]), &xx);
    }
    for r in TRIPLE {
        body = body.num(&tail1(1) * &p(r), &xx);
    }
    let body = body.den(&tail1(1) * &b, &xx);
    let lhs = BaileyExpr::integral("x", 0, body.expr());

    let mut pre = Factors::default()
        .num(sl.pow(2), &[])
        .num(t.pow(2), &[])
        .num(&sl * &ul, &[(POINT, 1)])
        .den(mono(&[(&t, 2), (&sl, 2)]), &[])
        .den(tail2(1), &[])
        .den(mono(&[(&t, 2), (&sl, 1), (&ul, 1)]), &[(POINT, 1)]);
    for k in 1..=m {
        pre = pre.num(tail2(k), &[]).den(p(&s(k)).pow(2), &[]).den(tail2(k + 1), &[]);
    }
    let pre = pair_ratio(pre, &tail2(1), true);

    let xv: Vec<String> = (1..=m + 1).map(x).collect();
    let (xl, x1) = ([(xv[m].as_str(), 1)], [(xv[0].as_str(), 1)]);
    let mut body = Factors::default()
        .num(&t * &sl, &[(POINT, 1), (xv[m].as_str(), 1)])
        .num(&t * &ul, &xl)
        .den(mono(&[(&t, 1), (&sl, 2), (&ul, 1)]), &xl)
        .den(ParamMonomial::one(), &[(xv[0].as_str(), 2)])
        .den(&tail2(1) * &b, &x1);
    for r in TRIPLE {
        body = body.num(p(r), &x1);
    }
    for k in 1..=m {
        let (sk, uk) = (p(&s(k)), p(&u(k)));
        let (xk, xn) = (xv[k - 1].as_str(), xv[k].as_str());
        body = body
            .num(uk.clone(), &[(xn, 1)])
            .num(mono(&[(&tail2(k + 1), 1), (&sk, 1), (&uk, 1)]), &[(xk, 1)])
            .num(sk.clone(), &[(xn, 1), (xk, 1)])
            .den(ParamMonomial::one(), &[(xn, 2)])
            .den(&tail2(k) * &uk, &[(xn, 1)])
            .den(&sk * &uk, &[(xk, 1)]);
    }
    let outer_first: Vec<String> = xv.iter().rev().cloned().collect();
    let rhs = product(vec![pre.expr(), integrate(&outer_first, m, body.expr())]);

    let mut cs = ConstraintSet::new();
    cs.disk_params(&["t", "t0", "t1", "t2"]);
    for k in 1..=m + 1 {
        cs.disk_params(&[&s(k), &u(k)]);
    }
    cs.push(Constraint::balancing(&tail2(1) * &b));
    for k in 1..=m {
        cs.push(Constraint::balancing(&tail2(k) * &p(&u(k))));
    }
    cs.push(Constraint::balancing(mono(&[(&t, 2), (&sl, 2), (&ul, 1)])));
    cs.declare_point(POINT);
    Ok(IdentitySides { id: format!("identfin:{m}"), lhs, rhs, constraints: cs })
}

/// Looks up an identity by id: `beta`, `transformation`, `id-seq:<m>`,
/// `ident1`, `identfin:<m>`.
pub fn by_id(id: &str) -> Result<IdentitySides> {
    let depth = |rest: &str| {
        rest.parse::<usize>().map_err(|_| Error::Parse(format!("bad iteration depth in `{id}`")))
    };
    match id.split_once(':') {
        None => match id {
            "beta" => Ok(beta_integral()),
            "transformation" => Ok(transformation()),
            "ident1" => Ok(ident1()),
            _ => Err(Error::Parse(format!("unknown identity `{id}`"))),
        },
        Some(("id-seq", m)) => id_seq(depth(m)?),
        Some(("identfin", m)) => identfin(depth(m)?),
        Some(_) => Err(Error::Parse(format!("unknown identity `{id}`"))),
    }
}
