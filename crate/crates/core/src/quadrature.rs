//! Trapezoidal rule on the unit torus `T^m`.
//!
//! `(2 pi i)^{-m} \oint ... \oint f dz_1/z_1 ... dz_m/z_m` is the mean of `f`
//! over the tensor grid of `N`-th roots of unity. The rule is exact for
//! Laurent polynomials of degree `< N` in every variable and converges
//! geometrically for integrands analytic in an annulus around `|z| = 1`.
//!
//! Grid sums are accumulated per outer index with compensated summation and
//! the partial sums are then combined in index order, so the result does not
//! depend on whether the `parallel` feature is enabled.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// std-linked builds resolve these calls to inherent f64 methods instead
#[allow(unused_imports)]
use num_traits::Float;

use crate::ellgamma::{BaseParams, ToleranceSpec};
use crate::expr::{factor_value, Assignment, GammaFactor, Integrand};
use crate::sum::CompensatedSum;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub n_start: usize,
    pub n_max: usize,
    pub target: f64,
}

impl QuadratureConfig {
    pub fn new(n_start: usize, n_max: usize, target: f64) -> Result<Self> {
        if n_start < 8 || !n_start.is_power_of_two() || !n_max.is_power_of_two() || n_start > n_max {
            return Err(Error::Config(format!(
                "need 8 <= n_start <= n_max, both powers of two (got {n_start}, {n_max})"
            )));
        }
        if !(target > 0.0) {
            return Err(Error::Config(format!("target {target} must be positive")));
        }
        Ok(Self { n_start, n_max, target })
    }

    /// Defaults by dimension: `n_start = 16`, `n_max` 1024 / 256 / 64 for
    /// `m = 1`, `m = 2`, `m >= 3`.
    pub fn for_dims(m: usize, target: f64) -> Self {
        let n_max = match m {
            0 | 1 => 1024,
            2 => 256,
            _ => 64,
        };
        Self { n_start: 16, n_max, target }
    }

    /// Default convergence target by dimension: `1e-13`, `1e-7`, `1e-4` for
    /// `m = 1`, `m = 2`, `m >= 3`, a decade below the identity tolerances.
    pub fn default_target(m: usize) -> f64 {
        match m {
            0 | 1 => 1e-13,
            2 => 1e-7,
            _ => 1e-4,
        }
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self.n_start = self.n_start.min(n_max);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Nodes per dimension at the returned estimate.
    pub nodes_used: Vec<usize>,
    pub est_error: f64,
    pub converged: bool,
}

/// `exp(2 pi i k / n)` for `k = 0..n`.
pub fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            // reduce by symmetry so that k = n/4, n/2, 3n/4 come out exact
            let (s, c) = (2.0 * PI * k as f64 / n as f64).sin_cos();
            match (4 * k) % n {
                0 => match (4 * k) / n {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                },
                _ => Complex64::new(c, s),
            }
        })
        .collect()
}

/// Sum over the `n^m` grid indices. `row(k0, out)` must add every node with
/// first index `k0` to `out`.
fn grid_sum<F>(n: usize, row: F) -> Result<Complex64>
where
    F: Fn(usize, &mut CompensatedSum) -> Result<()> + Sync,
{
    let one_row = |k0: usize| -> Result<Complex64> {
        let mut s = CompensatedSum::new();
        row(k0, &mut s)?;
        Ok(s.value())
    };
    #[cfg(feature = "parallel")]
    let partials: Vec<Result<Complex64>> = {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(one_row).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<Result<Complex64>> = (0..n).map(one_row).collect();
    let mut total = CompensatedSum::new();
    for p in partials {
        total.add(p?);
    }
    Ok(total.value())
}

/// Decodes the inner digits of a linear index (base `n`, least significant
/// digit last) into `digits[1..]`.
#[inline]
fn decode_inner(mut lin: usize, n: usize, digits: &mut [usize]) {
    for d in digits[1..].iter_mut().rev() {
        *d = lin % n;
        lin /= n;
    }
}

/// Trapezoidal mean of `f` over the `n^m` root-of-unity grid.
pub fn grid_mean<F>(f: &F, m: usize, n: usize) -> Result<Complex64>
where
    F: Fn(&[Complex64]) -> Result<Complex64> + Sync,
{
    if m == 0 {
        return f(&[]);
    }
    let roots = roots_of_unity(n);
    let inner = n.pow(m as u32 - 1);
    let sum = grid_sum(n, |k0, acc| {
        let mut digits = vec![0usize; m];
        let mut z = vec![Complex64::new(0.0, 0.0); m];
        digits[0] = k0;
        for lin in 0..inner {
            decode_inner(lin, n, &mut digits);
            for (zi, &d) in z.iter_mut().zip(&digits) {
                *zi = roots[d];
            }
            acc.add(f(&z)?);
        }
        Ok(())
    })?;
    Ok(sum / (n as f64).powi(m as i32))
}

/// Node doubling driver shared by every integrator.
fn adaptive<L>(m: usize, cfg: &QuadratureConfig, mut level: L) -> Result<QuadratureResult>
where
    L: FnMut(usize) -> Result<Complex64>,
{
    if m == 0 {
        return Ok(QuadratureResult { value: level(1)?, nodes_used: Vec::new(), est_error: 0.0, converged: true });
    }
    let needed_passes = if m >= 2 { 2 } else { 1 };
    let mut n = if cfg.n_start >= cfg.n_max { (cfg.n_max / 2).max(1) } else { cfg.n_start };
    let mut prev = level(n)?;
    let mut passes = 0;
    let mut est = f64::INFINITY;
    while n < cfg.n_max {
        n *= 2;
        let cur = level(n)?;
        est = (cur - prev).norm();
        if est <= cfg.target * cur.norm().max(1.0) {
            passes += 1;
        } else {
            passes = 0;
        }
        prev = cur;
        if passes >= needed_passes {
            return Ok(QuadratureResult { value: cur, nodes_used: vec![n; m], est_error: est, converged: true });
        }
    }
    Ok(QuadratureResult { value: prev, nodes_used: vec![n; m], est_error: est, converged: false })
}

/// Normalized contour integral of `f` over `T^m` with adaptive doubling.
///
/// Convergence is declared when `|I_2N - I_N| <= target * max(1, |I_2N|)`,
/// on two successive doublings when `m >= 2`. Hitting `n_max` returns the
/// best estimate with `converged = false`.
pub fn contour_mean<F>(f: F, m: usize, cfg: &QuadratureConfig) -> Result<QuadratureResult>
where
    F: Fn(&[Complex64]) -> Result<Complex64> + Sync,
{
    adaptive(m, cfg, |n| grid_mean(&f, m, n))
}

/// Values of one factor over the `n`-th roots of unity: entry `r` is the
/// factor's contribution at combined grid exponent `r`, i.e. `Gamma(c w^r)`
/// for numerators and `1/Gamma(c w^r)` for denominators, `w = e^{2 pi i/n}`.
///
/// Variables in `grid_vars` run over the grid; all others must be bound in
/// `a` and are folded into `c`. A node with grid indices `k_i` reads entry
/// `(sum_i e_i k_i) mod n`.
pub fn factor_table(
    factor: &GammaFactor,
    grid_vars: &[&str],
    a: &Assignment,
    base: &BaseParams,
    n: usize,
    tol: &ToleranceSpec,
) -> Result<Vec<Complex64>> {
    let resolved = ResolvedFactor::new(factor, grid_vars, a)?;
    resolved.table(base, n, tol, None)
}

#[derive(Debug, Clone)]
struct ResolvedFactor {
    source: GammaFactor,
    coeff: Complex64,
    /// (grid variable index, exponent), sorted by index
    exps: Vec<(usize, i32)>,
}

impl ResolvedFactor {
    fn new(f: &GammaFactor, grid_vars: &[&str], a: &Assignment) -> Result<Self> {
        let mut coeff = f.coeff.evaluate(a)?;
        let mut exps = Vec::new();
        for (v, &e) in &f.vars {
            match grid_vars.iter().position(|g| g == v) {
                Some(i) => exps.push((i, e)),
                None => coeff *= a.var(v)?.powi(e),
            }
        }
        exps.sort();
        Ok(Self { source: f.clone(), coeff, exps })
    }

    fn value_at(&self, z: Complex64, base: &BaseParams, tol: &ToleranceSpec) -> Result<Complex64> {
        factor_value(&self.source, z, base, tol)
    }

    /// Table at `n` nodes, reusing the even entries of a table at `n/2`.
    fn table(
        &self,
        base: &BaseParams,
        n: usize,
        tol: &ToleranceSpec,
        half: Option<&[Complex64]>,
    ) -> Result<Vec<Complex64>> {
        if self.exps.is_empty() {
            return Ok(vec![self.value_at(self.coeff, base, tol)?; n]);
        }
        let roots = roots_of_unity(n);
        let mut out = Vec::with_capacity(n);
        for (r, w) in roots.iter().enumerate() {
            match half {
                Some(h) if r % 2 == 0 && h.len() * 2 == n => out.push(h[r / 2]),
                _ => out.push(self.value_at(self.coeff * w, base, tol)?),
            }
        }
        Ok(out)
    }
}

/// Factors sharing one set of grid variables, multiplied into a single
/// `n^|vars|` array.
#[derive(Debug, Clone)]
struct Group {
    vars: Vec<usize>,
    members: Vec<usize>,
}

/// A gamma-product integrand prepared for table-driven quadrature.
///
/// Factor tables are cached across doublings; factors depending on the
/// same set of grid variables are pre-multiplied so a grid node costs one
/// lookup per group.
#[derive(Debug, Clone)]
pub struct GammaGrid {
    base: BaseParams,
    tol: ToleranceSpec,
    dims: usize,
    constant: Complex64,
    factors: Vec<ResolvedFactor>,
    groups: Vec<Group>,
    tables: Vec<Option<Vec<Complex64>>>,
}

impl GammaGrid {
    /// Grid variables are `intg.contour_vars`; every other variable must be
    /// bound in `a`.
    pub fn new(intg: &Integrand, a: &Assignment, base: &BaseParams, tol: &ToleranceSpec) -> Result<Self> {
        let grid_vars: Vec<&str> = intg.contour_vars.iter().map(|s| s.as_str()).collect();
        let mut constant = Complex64::new(1.0, 0.0);
        let mut factors = Vec::new();
        for f in &intg.factors {
            let r = ResolvedFactor::new(f, &grid_vars, a)?;
            if r.exps.is_empty() {
                constant *= r.value_at(r.coeff, base, tol)?;
            } else {
                factors.push(r);
            }
        }
        let mut by_vars: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for (i, f) in factors.iter().enumerate() {
            by_vars.entry(f.exps.iter().map(|&(v, _)| v).collect()).or_default().push(i);
        }
        let groups = by_vars.into_iter().map(|(vars, members)| Group { vars, members }).collect();
        let tables = vec![None; factors.len()];
        Ok(Self { base: *base, tol: *tol, dims: grid_vars.len(), constant, factors, groups, tables })
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    /// Product of the factors that do not depend on any grid variable.
    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    fn refresh_tables(&mut self, n: usize) -> Result<()> {
        for (f, slot) in self.factors.iter().zip(self.tables.iter_mut()) {
            if slot.as_ref().is_some_and(|t| t.len() == n) {
                continue;
            }
            let t = f.table(&self.base, n, &self.tol, slot.as_deref())?;
            *slot = Some(t);
        }
        Ok(())
    }

    fn group_array(&self, g: &Group, n: usize) -> Vec<Complex64> {
        let size = n.pow(g.vars.len() as u32);
        let mut out = vec![Complex64::new(1.0, 0.0); size];
        let mut digits = vec![0usize; g.vars.len()];
        for (lin, slot) in out.iter_mut().enumerate() {
            let mut rest = lin;
            for d in digits.iter_mut().rev() {
                *d = rest % n;
                rest /= n;
            }
            for &fi in &g.members {
                let f = &self.factors[fi];
                let mut r: i64 = 0;
                for &(v, e) in &f.exps {
                    let pos = g.vars.iter().position(|&x| x == v).unwrap_or_default();
                    r += e as i64 * digits[pos] as i64;
                }
                let table = self.tables[fi].as_deref().unwrap_or_default();
                *slot *= table[r.rem_euclid(n as i64) as usize];
            }
        }
        out
    }

    /// Table-driven grid mean at `n` nodes per dimension (constant factors
    /// included).
    pub fn mean_at(&mut self, n: usize) -> Result<Complex64> {
        if self.dims == 0 {
            return Ok(self.constant);
        }
        self.refresh_tables(n)?;
        let arrays: Vec<Vec<Complex64>> = self.groups.iter().map(|g| self.group_array(g, n)).collect();
        // strides of each group array with respect to the full grid digits
        let strides: Vec<Vec<(usize, usize)>> = self
            .groups
            .iter()
            .map(|g| {
                let k = g.vars.len();
                g.vars.iter().enumerate().map(|(i, &v)| (v, n.pow((k - 1 - i) as u32))).collect()
            })
            .collect();
        let m = self.dims;
        let inner = n.pow(m as u32 - 1);
        let sum = grid_sum(n, |k0, acc| {
            let mut digits = vec![0usize; m];
            digits[0] = k0;
            for lin in 0..inner {
                decode_inner(lin, n, &mut digits);
                let mut v = Complex64::new(1.0, 0.0);
                for (arr, st) in arrays.iter().zip(&strides) {
                    let idx: usize = st.iter().map(|&(var, s)| digits[var] * s).sum();
                    v *= arr[idx];
                }
                acc.add(v);
            }
            Ok(())
        })?;
        Ok(self.constant * sum / (n as f64).powi(m as i32))
    }

    /// Same mean with a fresh gamma evaluation for every factor at every
    /// node. Reference path for the tables.
    pub fn naive_mean_at(&self, n: usize) -> Result<Complex64> {
        let f = |z: &[Complex64]| -> Result<Complex64> {
            let mut v = self.constant;
            for fac in &self.factors {
                let mut arg = fac.coeff;
                for &(i, e) in &fac.exps {
                    arg *= z[i].powi(e);
                }
                v *= fac.value_at(arg, &self.base, &self.tol)?;
            }
            Ok(v)
        };
        grid_mean(&f, self.dims, n)
    }

    pub fn integrate(&mut self, cfg: &QuadratureConfig) -> Result<QuadratureResult> {
        let m = self.dims;
        adaptive(m, cfg, |n| self.mean_at(n))
    }
}

/// Normalized torus integral of a gamma-product integrand via tables.
pub fn integrate_integrand(
    intg: &Integrand,
    a: &Assignment,
    base: &BaseParams,
    cfg: &QuadratureConfig,
    tol: &ToleranceSpec,
) -> Result<QuadratureResult> {
    GammaGrid::new(intg, a, base, tol)?.integrate(cfg)
}
