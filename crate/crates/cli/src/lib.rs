//! Command-line front end for `elliptic-bailey`.
//!
//! ```text
//! ebailey gamma --q 0.3 --p 0.2 --z 0.5
//! ebailey verify beta --q 0.3 --p 0.2 --t 0.7,0.6,0.5,0.6,0.7 --tol 1e-8
//! ebailey verify ident1 --q 0.3 --p 0.2 --seed 11 --n-max 128 --json
//! ebailey tree --word "D(s1,u1);C(s2,u2)" --q 0.3 --p 0.2
//! ```
//!
//! Exit status: 0 on success, 1 when a verification fails its tolerance,
//! does not converge or violates its constraints (the record is still
//! printed), 2 on usage and input errors.

pub mod config;
pub mod json;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use elliptic_bailey::bailey::{tree_pair_from_seed, BaileyPair, EvalOptions, TreeWord, POINT};
use elliptic_bailey::constraints::ConstraintSet;
use elliptic_bailey::ellgamma::{elliptic_gamma, qpochhammer_infinite, BaseParams, ToleranceSpec};
use elliptic_bailey::expr::Assignment;
use elliptic_bailey::identities::{self, IdentitySides};
use elliptic_bailey::verify::{
    pair_constraints, sample_params, verify_id_seq_against_transformation, verify_identity, verify_pair,
    VerificationReport, DEFAULT_MODULI,
};
use num_complex::Complex64;
use serde::Serialize;

use config::{parse_complex, parse_list, parse_num, Settings};
use json::{to_pair, FailureJson, PairJson, ReportJson, ValueJson};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] elliptic_bailey::Error),
    #[error("output failed: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use elliptic_bailey::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Parse(_) | E::Config(_) | E::Domain(_) | E::UnknownSymbol(_) | E::Unbound(_)) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ebailey", version, about = "Elliptic gamma values and integral identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    p: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    z: Option<String>,
    /// External point on the unit circle
    #[arg(long, global = true, allow_hyphen_values = true)]
    w: Option<String>,
    /// Comma-separated; `t0..t4` for beta, otherwise `t,t0,t1,t2`
    #[arg(long, global = true, allow_hyphen_values = true)]
    t: Option<String>,
    /// Comma-separated step parameters
    #[arg(long, global = true, allow_hyphen_values = true)]
    s: Option<String>,
    /// Comma-separated step parameters
    #[arg(long, global = true, allow_hyphen_values = true)]
    u: Option<String>,
    /// Iteration depth for `id-seq` and `identfin`
    #[arg(long, global = true)]
    m: Option<String>,
    /// Tree word such as `C(s1,u1);D(s2,u2)`
    #[arg(long, global = true)]
    word: Option<String>,
    /// Sampler seed used when no parameters are given
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Node cap per dimension, a power of two
    #[arg(long = "n-max", global = true)]
    n_max: Option<String>,
    #[arg(long, global = true)]
    json: bool,
    /// JSON object with any of the flag values
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
enum Command {
    /// Elliptic gamma function at `z`
    Gamma,
    /// Infinite q-Pochhammer symbol `(z;q)_inf`
    Pochhammer,
    /// Closed-form value of the elliptic beta integral
    Beta,
    /// Check an identity: beta, transformation, id-seq:M, ident1, identfin:M
    Verify { identity: String },
    /// Build a Bailey pair from a tree word; with --q and --p also check it
    Tree,
}

/// Everything a command needs, after flags and config are merged.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub settings: Settings,
    pub json_out: bool,
}

impl RunConfig {
    fn base(&self) -> Result<BaseParams, CliError> {
        let q = self.settings.q.as_deref().ok_or_else(|| CliError::Usage("--q is required".into()))?;
        let p = self.settings.p.as_deref().ok_or_else(|| CliError::Usage("--p is required".into()))?;
        Ok(BaseParams::new(parse_complex(q)?, parse_complex(p)?)?)
    }

    fn complex(&self, name: &str, v: &Option<String>) -> Result<Complex64, CliError> {
        parse_complex(v.as_deref().ok_or_else(|| CliError::Usage(format!("--{name} is required")))?)
    }

    fn seed(&self) -> Result<u64, CliError> {
        self.settings.seed.as_deref().map_or(Ok(0), |s| parse_num("seed", s))
    }

    fn tol(&self) -> Result<Option<f64>, CliError> {
        let tol = self.settings.tol.as_deref().map(|s| parse_num::<f64>("tol", s)).transpose()?;
        if tol.is_some_and(|t| !(t > 0.0 && t < 1.0)) {
            return Err(CliError::Usage("--tol must lie in (0, 1)".into()));
        }
        Ok(tol)
    }

    fn eval_options(&self) -> Result<EvalOptions, CliError> {
        let opts = EvalOptions::default();
        match self.settings.n_max.as_deref() {
            None => Ok(opts),
            Some(s) => {
                let n: usize = parse_num("n-max", s)?;
                if n < 8 || !n.is_power_of_two() {
                    return Err(CliError::Usage(format!("--n-max must be a power of two >= 8, got {n}")));
                }
                Ok(opts.with_n_max(n))
            }
        }
    }

    fn explicit_params(&self) -> bool {
        let s = &self.settings;
        s.t.is_some() || s.s.is_some() || s.u.is_some() || s.w.is_some()
    }
}

/// Parameter names read from `--t`, `--s`, `--u` for one identity or word.
#[derive(Debug, Clone, Default)]
struct ParamLayout {
    t: Vec<String>,
    s: Vec<String>,
    u: Vec<String>,
    point: bool,
}

fn names(prefix: &str, range: impl IntoIterator<Item = usize>) -> Vec<String> {
    range.into_iter().map(|k| format!("{prefix}{k}")).collect()
}

fn triple_layout() -> Vec<String> {
    ["t", "t0", "t1", "t2"].map(String::from).to_vec()
}

fn identity_layout(id: &str) -> Result<ParamLayout, CliError> {
    let depth = |rest: &str| parse_num::<usize>("m", rest);
    Ok(match id.split_once(':') {
        None if id == "beta" => ParamLayout { t: names("t", 0..5), ..Default::default() },
        None if id == "transformation" => ParamLayout { t: triple_layout(), s: names("s", 0..3), ..Default::default() },
        None if id == "ident1" => ParamLayout { t: triple_layout(), s: names("s", 1..3), u: names("u", 1..3), point: true },
        Some(("id-seq", m)) => {
            let m = depth(m)?;
            ParamLayout { t: triple_layout(), s: names("s", 1..=m), u: names("u", 1..=m), point: true }
        }
        Some(("identfin", m)) => {
            let m = depth(m)? + 1;
            ParamLayout { t: triple_layout(), s: names("s", 1..=m), u: names("u", 1..=m), point: true }
        }
        _ => return Err(CliError::Usage(format!("unknown identity `{id}`"))),
    })
}

fn word_layout(word: &TreeWord) -> ParamLayout {
    let mut layout = ParamLayout { t: triple_layout(), point: true, ..Default::default() };
    for l in &word.letters {
        if !layout.s.contains(&l.s) {
            layout.s.push(l.s.clone());
        }
        if !layout.u.contains(&l.u) {
            layout.u.push(l.u.clone());
        }
    }
    layout
}

/// Explicit values from the flags, or a seeded draw from `cs`.
fn assignment(cfg: &RunConfig, layout: &ParamLayout, cs: &ConstraintSet, base: &BaseParams) -> Result<Assignment, CliError> {
    if !cfg.explicit_params() {
        return Ok(sample_params(cs, base, cfg.seed()?, DEFAULT_MODULI)?);
    }
    let mut a = Assignment::new();
    for (flag, list, want) in [("t", &cfg.settings.t, &layout.t), ("s", &cfg.settings.s, &layout.s), ("u", &cfg.settings.u, &layout.u)] {
        let values = match list {
            Some(src) => parse_list(src)?,
            None if want.is_empty() => Vec::new(),
            None => return Err(CliError::Usage(format!("--{flag} needs {} values ({})", want.len(), want.join(",")))),
        };
        if values.len() != want.len() {
            return Err(CliError::Usage(format!(
                "--{flag} needs {} values ({}), got {}",
                want.len(),
                want.join(","),
                values.len()
            )));
        }
        for (n, v) in want.iter().zip(values) {
            a.set_param(n, v);
        }
    }
    if layout.point {
        a.set_var(POINT, cfg.complex("w", &cfg.settings.w)?);
    }
    Ok(a)
}

/// Tolerance by the largest number of integrations on either side.
fn default_tol(dims: usize) -> f64 {
    match dims {
        0 | 1 => 1e-8,
        2 => 1e-6,
        _ => 1e-3,
    }
}

fn sides_dims(lhs: &elliptic_bailey::bailey::BaileyExpr, rhs: &elliptic_bailey::bailey::BaileyExpr) -> usize {
    let d = |e: &elliptic_bailey::bailey::BaileyExpr| e.flatten().integrand.contour_vars.len();
    d(lhs).max(d(rhs))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value).map_err(|e| CliError::Usage(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn fmt_c(z: Complex64) -> String {
    format!("{:.15e}{:+.15e}i", z.re, z.im)
}

fn write_assignment(out: &mut dyn Write, a: &Assignment) -> Result<(), CliError> {
    for (k, v) in a.params.iter().chain(a.vars.iter()) {
        writeln!(out, "  {k:<4} = {}", fmt_c(*v))?;
    }
    Ok(())
}

fn write_report(out: &mut dyn Write, r: &VerificationReport, tol: f64) -> Result<(), CliError> {
    writeln!(out, "identity   {}", r.identity_id)?;
    write_assignment(out, &r.assignment)?;
    writeln!(out, "lhs        {}", fmt_c(r.lhs))?;
    writeln!(out, "rhs        {}", fmt_c(r.rhs))?;
    writeln!(out, "abs_err    {:.3e}", r.abs_err)?;
    writeln!(out, "rel_err    {:.3e}", r.rel_err)?;
    writeln!(out, "nodes      {:?}", r.nodes_used)?;
    writeln!(out, "converged  {}", r.converged)?;
    writeln!(out, "runtime    {:.1} ms", r.runtime_ms)?;
    writeln!(out, "result     {} (tol {tol:.0e})", if r.passes(tol) { "PASS" } else { "FAIL" })?;
    Ok(())
}

fn timed(f: impl FnOnce() -> elliptic_bailey::Result<VerificationReport>) -> elliptic_bailey::Result<VerificationReport> {
    let start = Instant::now();
    let mut r = f()?;
    r.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}

/// Prints a report or, for constraint and other evaluation failures, a
/// failure record; returns the exit code.
fn finish(
    cfg: &RunConfig,
    out: &mut dyn Write,
    id: &str,
    a: &Assignment,
    result: elliptic_bailey::Result<VerificationReport>,
    tol: f64,
) -> Result<i32, CliError> {
    match result {
        Ok(r) => {
            if cfg.json_out {
                emit_json(out, &ReportJson::from(&r))?;
            } else {
                write_report(out, &r, tol)?;
            }
            Ok(if r.passes(tol) { 0 } else { 1 })
        }
        Err(e) => {
            let err = CliError::Core(e);
            if err.exit_code() == 2 {
                return Err(err);
            }
            if cfg.json_out {
                emit_json(out, &FailureJson { identity_id: id.to_string(), assignment: a.into(), error: err.to_string() })?;
            } else {
                writeln!(out, "identity   {id}")?;
                write_assignment(out, a)?;
                writeln!(out, "error      {err}")?;
            }
            Ok(1)
        }
    }
}

fn resolve_identity(cfg: &RunConfig, id: &str) -> Result<String, CliError> {
    let m = cfg.settings.m.as_deref();
    match (id, m) {
        ("id-seq" | "identfin", None) => Ok(format!("{id}:1")),
        ("id-seq" | "identfin", Some(m)) => Ok(format!("{id}:{}", parse_num::<usize>("m", m)?)),
        (_, Some(m)) => match id.split_once(':') {
            Some((_, k)) if k == m.trim() => Ok(id.to_string()),
            Some(_) => Err(CliError::Usage(format!("--m {m} conflicts with `{id}`"))),
            None => Err(CliError::Usage(format!("--m does not apply to `{id}`"))),
        },
        _ => Ok(id.to_string()),
    }
}

fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write, id: &str) -> Result<i32, CliError> {
    let id = resolve_identity(cfg, id)?;
    let layout = identity_layout(&id)?;
    let sides: IdentitySides = identities::by_id(&id)?;
    let base = cfg.base()?;
    let opts = cfg.eval_options()?;
    let tol = cfg.tol()?.unwrap_or_else(|| default_tol(sides_dims(&sides.lhs, &sides.rhs)));
    let a = assignment(cfg, &layout, &sides.constraints, &base)?;
    let result = timed(|| verify_identity(&sides, &a, &base, &opts));
    let code = finish(cfg, out, &id, &a, result, tol)?;
    if id == "id-seq:1" && code == 0 && !cfg.json_out {
        let check = verify_id_seq_against_transformation(&a, &base, &opts)?;
        writeln!(out, "vs transformation (s0 = u1, s1 = s1 w, s2 = s1/w): lhs {:.3e}, rhs {:.3e}", check.lhs_rel_err, check.rhs_rel_err)?;
        if check.max_rel_err() > tol {
            return Ok(1);
        }
    }
    Ok(code)
}

#[derive(Serialize)]
struct TreeJson {
    pair: PairJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ReportJson>,
}

fn cmd_tree(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let word: TreeWord = cfg.settings.word.as_deref().unwrap_or("").parse()?;
    let pair: BaileyPair = tree_pair_from_seed(&word, "t0", "t1", "t2", "t")?;
    let label = format!("pair:{word}");
    let checking = cfg.settings.q.is_some() || cfg.settings.p.is_some();

    if !cfg.json_out {
        writeln!(out, "word       {}", if word.letters.is_empty() { "(seed)".to_string() } else { word.to_string() })?;
        writeln!(out, "seed at    {}", word.seed_parameter("t"))?;
        writeln!(out, "t_expr     {}", pair.t_expr)?;
        writeln!(out, "alpha      {} integral(s)", pair.alpha.integral_count())?;
        writeln!(out, "beta       {} integral(s)", pair.beta.integral_count())?;
        for c in &pair.constraints.records {
            writeln!(out, "requires   {c}")?;
        }
    }
    if !checking {
        if cfg.json_out {
            emit_json(out, &TreeJson { pair: PairJson::new(&word.to_string(), &pair), report: None })?;
        }
        return Ok(0);
    }

    let base = cfg.base()?;
    let opts = cfg.eval_options()?;
    let cs = pair_constraints(&pair);
    let a = assignment(cfg, &word_layout(&word), &cs, &base)?;
    let dims = pair.alpha.integral_count().max(pair.beta.integral_count()) + 1;
    let tol = cfg.tol()?.unwrap_or_else(|| default_tol(dims));
    let result = timed(|| verify_pair(&label, &pair, &a, &base, &opts));
    if cfg.json_out {
        if let Ok(r) = &result {
            let code = if r.passes(tol) { 0 } else { 1 };
            emit_json(out, &TreeJson { pair: PairJson::new(&word.to_string(), &pair), report: Some(r.into()) })?;
            return Ok(code);
        }
    }
    finish(cfg, out, &label, &a, result, tol)
}

fn gamma_tolerance(cfg: &RunConfig) -> Result<ToleranceSpec, CliError> {
    match cfg.tol()? {
        None => Ok(ToleranceSpec::default()),
        Some(t) => Ok(ToleranceSpec::new(t, ToleranceSpec::default().truncation_cap)?),
    }
}

fn emit_value(cfg: &RunConfig, out: &mut dyn Write, function: &str, args: &[(&str, Complex64)], value: Complex64) -> Result<i32, CliError> {
    if cfg.json_out {
        let args: BTreeMap<String, [f64; 2]> = args.iter().map(|(k, v)| (k.to_string(), to_pair(*v))).collect();
        emit_json(out, &ValueJson { function: function.to_string(), args, value: to_pair(value) })?;
    } else {
        writeln!(out, "{}", fmt_c(value))?;
    }
    Ok(0)
}

fn dispatch(cmd: &Command, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Gamma => {
            let base = cfg.base()?;
            let z = cfg.complex("z", &cfg.settings.z)?;
            let v = elliptic_gamma(z, &base, &gamma_tolerance(cfg)?)?;
            emit_value(cfg, out, "gamma", &[("q", base.q()), ("p", base.p()), ("z", z)], v)
        }
        Command::Pochhammer => {
            let q = cfg.complex("q", &cfg.settings.q)?;
            if q.norm() >= 1.0 {
                return Err(CliError::Usage("--q must satisfy |q| < 1".into()));
            }
            let z = cfg.complex("z", &cfg.settings.z)?;
            let v = qpochhammer_infinite(z, q, &gamma_tolerance(cfg)?)?;
            emit_value(cfg, out, "pochhammer", &[("q", q), ("z", z)], v)
        }
        Command::Beta => {
            let base = cfg.base()?;
            let layout = identity_layout("beta")?;
            let sides = identities::beta_integral();
            if !cfg.explicit_params() {
                return Err(CliError::Usage("--t needs 5 values (t0,t1,t2,t3,t4)".into()));
            }
            let a = assignment(cfg, &layout, &sides.constraints, &base)?;
            let v = sides.rhs.evaluate(&a, &base, &EvalOptions::default())?.value;
            let args: Vec<(&str, Complex64)> =
                layout.t.iter().map(|n| (n.as_str(), a.params[n])).chain([("q", base.q()), ("p", base.p())]).collect();
            emit_value(cfg, out, "beta", &args, v)
        }
        Command::Verify { identity } => cmd_verify(cfg, out, identity),
        Command::Tree => cmd_tree(cfg, out),
    }
}

/// Runs the command line `argv` (including the program name), writing
/// results to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let mut settings = Settings {
        q: cli.q,
        p: cli.p,
        z: cli.z,
        w: cli.w,
        t: cli.t,
        s: cli.s,
        u: cli.u,
        m: cli.m,
        word: cli.word,
        seed: cli.seed,
        tol: cli.tol,
        n_max: cli.n_max,
    };
    let result = cli
        .config
        .as_deref()
        .map_or(Ok(()), |path| settings.merge_file(path))
        .and_then(|_| dispatch(&cli.command, &RunConfig { settings, json_out: cli.json }, out));
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
