//! Acceptance criteria, one line each. Exits non-zero if any fails.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use elliptic_bailey::bailey::{chain_step, dual_step, pair_residual, seed_pair, BaileyPair, EvalOptions};
use elliptic_bailey::ellgamma::{elliptic_gamma, qpochhammer_infinite, theta_p, BaseParams, ToleranceSpec};
use elliptic_bailey::expr::{Assignment, FactorKey};
use elliptic_bailey::identities;
use elliptic_bailey::quadrature::{grid_mean, GammaGrid};
use elliptic_bailey::verify::*;
use elliptic_bailey::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn base() -> BaseParams {
    BaseParams::real(0.3, 0.2).unwrap()
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

/// `(z, q, p)` with moduli in `[0.05, 0.8]` and uniform phases.
fn gamma_sample() -> Vec<(Complex64, Complex64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut draw = |lo: f64| Complex64::from_polar(rng.gen_range(lo..0.8), rng.gen_range(0.0..TAU));
    (0..100).map(|_| (draw(0.1), draw(0.05), draw(0.05))).collect()
}

fn gamma_reflection() -> Result<Outcome> {
    let tol = ToleranceSpec::default();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for (z, q, p) in gamma_sample() {
        let b = BaseParams::new(q, p)?;
        let prod = elliptic_gamma(z, &b, &tol)? * elliptic_gamma(b.pq() / z, &b, &tol)?;
        worst = worst.max((prod - 1.0).norm());
    }
    let t = secs(start.elapsed());
    Ok(outcome(worst < 1e-10 && t < 5.0, format!("max |G(z)G(pq/z) - 1| = {worst:.2e} over 100 draws, {t:.2}s")))
}

fn gamma_symmetries() -> Result<Outcome> {
    let tol = ToleranceSpec::default();
    let (mut sym, mut quasi, mut collapse): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (z, q, p) in gamma_sample() {
        let b = BaseParams::new(q, p)?;
        let g = elliptic_gamma(z, &b, &tol)?;
        sym = sym.max(rel_diff(elliptic_gamma(z, &b.swapped(), &tol)?, g));
        quasi = quasi.max(rel_diff(elliptic_gamma(q * z, &b, &tol)?, theta_p(z, p, &tol)? * g));
        quasi = quasi.max(rel_diff(elliptic_gamma(p * z, &b, &tol)?, theta_p(z, q, &tol)? * g));
        let b0 = BaseParams::new(q, Complex64::new(0.0, 0.0))?;
        let g0 = elliptic_gamma(z, &b0, &tol)? * qpochhammer_infinite(z, q, &tol)?;
        collapse = collapse.max((g0 - 1.0).norm());
    }
    Ok(outcome(
        sym < 1e-10 && quasi < 1e-10 && collapse < 1e-12,
        format!("base swap {sym:.2e}, quasi-period {quasi:.2e}, p=0 collapse {collapse:.2e}"),
    ))
}

fn quadrature_exactness() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in -32i32..=32 {
        let mean = grid_mean(&|z: &[Complex64]| Ok(z[0].powi(n)), 1, 64)?;
        let expect = if n == 0 { 1.0 } else { 0.0 };
        worst = worst.max((mean - expect).norm());
    }
    Ok(outcome(worst < 1e-13, format!("max deviation {worst:.2e} for |n| <= 32 at N=64")))
}

fn beta_integral() -> Result<Outcome> {
    let cs = identities::beta_integral().constraints;
    let opts = EvalOptions::default().with_n_max(512);
    let start = Instant::now();
    let (mut worst, mut max_n, mut all_conv): (f64, usize, bool) = (0.0, 0, true);
    for seed in 0..20 {
        let a = sample_params(&cs, &base(), seed, DEFAULT_MODULI)?;
        let r = verify_beta_integral(&a, &base(), &opts)?;
        worst = worst.max(r.rel_err);
        all_conv &= r.converged;
        max_n = max_n.max(r.nodes_used.iter().flatten().copied().max().unwrap_or(0));
    }
    let t = secs(start.elapsed());
    Ok(outcome(
        worst < 1e-8 && all_conv && max_n <= 512 && t < 30.0,
        format!("20 draws: max rel_err {worst:.2e}, converged {all_conv}, max N {max_n}, {t:.2}s"),
    ))
}

/// Largest `|residual|` and `|residual| / |beta|` over seeded draws.
fn residuals(pair: &BaileyPair, draws: u64, opts: &EvalOptions) -> Result<(f64, f64)> {
    let cs = pair_constraints(pair);
    let (mut abs, mut rel): (f64, f64) = (0.0, 0.0);
    for seed in 0..draws {
        let a = sample_params(&cs, &base(), 100 + seed, DEFAULT_MODULI)?;
        let r = pair_residual(pair, &a, &base(), opts)?.norm();
        let beta = pair.beta.evaluate(&a, &base(), opts)?.value.norm();
        abs = abs.max(r);
        rel = rel.max(r / beta);
    }
    Ok((abs, rel))
}

fn seed_pair_residual() -> Result<Outcome> {
    let (abs, rel) = residuals(&seed_pair("t0", "t1", "t2", "t"), 10, &EvalOptions::default())?;
    Ok(outcome(rel < 1e-8, format!("10 draws: max residual/|beta| {rel:.2e} (abs {abs:.2e})")))
}

fn chain_closure() -> Result<Outcome> {
    let pair = chain_step(&seed_pair("t0", "t1", "t2", "t"), "s", "u");
    let start = Instant::now();
    let (abs, rel) = residuals(&pair, 5, &EvalOptions::default())?;
    let t = secs(start.elapsed());
    Ok(outcome(
        abs < 1e-6 && rel < 1e-6 && t < 300.0,
        format!("5 draws: max residual {abs:.2e}, relative {rel:.2e}, {t:.2}s"),
    ))
}

fn dual_closure() -> Result<Outcome> {
    let chained = chain_step(&seed_pair("t0", "t1", "t2", "t"), "s", "u1");
    let pair = dual_step(&chained, "s", "u2")?;
    let (abs, rel) = residuals(&pair, 5, &EvalOptions::default().with_n_max(512))?;
    Ok(outcome(abs < 1e-6 && rel < 1e-6, format!("5 draws: max residual {abs:.2e}, relative {rel:.2e}")))
}

fn transformation() -> Result<Outcome> {
    let opts = EvalOptions::default();
    let cs = identities::transformation().constraints;
    let (mut worst, mut conv): (f64, bool) = (0.0, true);
    for seed in 0..10 {
        let r = verify_transformation(&sample_params(&cs, &base(), seed, DEFAULT_MODULI)?, &base(), &opts)?;
        worst = worst.max(r.rel_err);
        conv &= r.converged;
    }
    let cs = identities::id_seq(1)?.constraints;
    let mut cross: f64 = 0.0;
    for seed in 0..10 {
        let check = verify_id_seq_against_transformation(&sample_params(&cs, &base(), seed, DEFAULT_MODULI)?, &base(), &opts)?;
        cross = cross.max(check.max_rel_err()).max(check.id_seq.rel_err);
        conv &= check.id_seq.converged && check.transformation.converged;
    }
    Ok(outcome(
        worst < 1e-8 && cross < 1e-8 && conv,
        format!("10 draws: max rel_err {worst:.2e}; chain identity at m=1 vs mapped transformation {cross:.2e}"),
    ))
}

fn ident1() -> Result<Outcome> {
    let cs = identities::ident1().constraints;
    let opts = EvalOptions::default().with_n_max(128);
    let start = Instant::now();
    let (mut worst, mut conv): (f64, usize) = (0.0, 0);
    for seed in 0..3 {
        let r = verify_ident1(&sample_params(&cs, &base(), 11 + seed, DEFAULT_MODULI)?, &base(), &opts)?;
        worst = worst.max(r.rel_err);
        conv += r.converged as usize;
    }
    let t = secs(start.elapsed());
    Ok(outcome(
        worst < 1e-6 && t < 600.0,
        format!("3 draws at N=128: max rel_err {worst:.2e}, {conv}/3 met the two-pass rule, {t:.2}s"),
    ))
}

fn keys(e: &elliptic_bailey::bailey::BaileyExpr) -> (Vec<FactorKey>, Vec<String>, u32) {
    let flat = e.flatten().normalized();
    let mut k = flat.integrand.multiset();
    k.sort();
    (k, flat.integrand.contour_vars, e.kappa_total())
}

fn identfin_reduces() -> Result<Outcome> {
    let (fin, one) = (identities::identfin(1)?, identities::ident1());
    let structural = keys(&fin.lhs) == keys(&one.lhs) && keys(&fin.rhs) == keys(&one.rhs);
    let opts = EvalOptions::default().with_n_max(128);
    let (mut worst, mut agree): (f64, f64) = (0.0, 0.0);
    for seed in 0..3 {
        let a: Assignment = sample_params(&fin.constraints, &base(), 13 + seed, DEFAULT_MODULI)?;
        let f = verify_identfin(1, &a, &base(), &opts)?;
        let g = verify_ident1(&a, &base(), &opts)?;
        worst = worst.max(f.rel_err);
        agree = agree.max(rel_diff(f.lhs, g.lhs)).max(rel_diff(f.rhs, g.rhs));
    }
    Ok(outcome(
        structural && worst < 1e-6 && agree < 1e-6,
        format!("factor multisets equal: {structural}; 3 draws: max rel_err {worst:.2e}, vs two-step identity {agree:.2e}"),
    ))
}

fn table_speedup() -> Result<Outcome> {
    let sides = identities::ident1();
    let a = sample_params(&sides.constraints, &base(), 11, DEFAULT_MODULI)?;
    let flat = sides.rhs.flatten();
    let tol = ToleranceSpec::default();

    let start = Instant::now();
    let mut grid = GammaGrid::new(&flat.integrand, &a, &base(), &tol)?;
    let fast = grid.mean_at(128)?;
    let t_table = start.elapsed();

    let grid = GammaGrid::new(&flat.integrand, &a, &base(), &tol)?;
    let start = Instant::now();
    let slow = grid.naive_mean_at(128)?;
    let t_naive = start.elapsed();

    let diff = rel_diff(fast, slow);
    let speedup = secs(t_naive) / secs(t_table).max(1e-9);
    Ok(outcome(
        diff < 1e-12 && speedup >= 5.0,
        format!("relative difference {diff:.2e}; tables {:.1}ms vs naive {:.1}ms ({speedup:.0}x)", secs(t_table) * 1e3, secs(t_naive) * 1e3),
    ))
}

type Criterion = fn() -> Result<Outcome>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("gamma reflection", gamma_reflection),
        ("gamma base symmetry, quasi-periodicity, p=0 limit", gamma_symmetries),
        ("quadrature exactness on monomials", quadrature_exactness),
        ("elliptic beta integral", beta_integral),
        ("seed Bailey pair", seed_pair_residual),
        ("chain step closure", chain_closure),
        ("dual step closure", dual_closure),
        ("transformation and m=1 chain identity", transformation),
        ("one-dimensional vs two-dimensional integral identity", ident1),
        ("m=1 dual-chain identity reduces to the two-step identity", identfin_reduces),
        ("factor tables vs naive evaluation at N=128", table_speedup),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run().unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        failed += !o.pass as usize;
        println!("{} [{:>2}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
