//! Infinite q-Pochhammer products, the theta function and the elliptic gamma
//! function
//!
//! ```text
//! Gamma(z; q, p) = prod_{j,k >= 0} (1 - z^{-1} q^{j+1} p^{k+1}) / (1 - z q^j p^k)
//! ```
//!
//! All products are evaluated directly (no logarithms), truncated where a
//! geometric tail bound drops below `target / 100`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
// std-linked builds resolve these calls to inherent f64 methods instead
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Safety factor between the requested tolerance and the tail bound.
const TAIL_SAFETY: f64 = 100.0;

/// Relative tolerance and work cap for truncated products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSpec {
    pub target: f64,
    pub truncation_cap: usize,
    /// Arguments closer than this to a pole (or, for reciprocals, a zero)
    /// are rejected.
    pub pole_radius: f64,
}

impl ToleranceSpec {
    pub const DEFAULT_POLE_RADIUS: f64 = 1e-6;

    pub fn new(target: f64, truncation_cap: usize) -> Result<Self> {
        if !(target > 0.0 && target < 1.0) {
            return Err(Error::Config(alloc::format!("target {target} not in (0, 1)")));
        }
        if truncation_cap == 0 {
            return Err(Error::Config("truncation_cap must be at least 1".into()));
        }
        Ok(Self { target, truncation_cap, pole_radius: Self::DEFAULT_POLE_RADIUS })
    }

    pub fn with_pole_radius(mut self, radius: f64) -> Self {
        self.pole_radius = radius;
        self
    }

    fn tail(&self) -> f64 {
        self.target / TAIL_SAFETY
    }
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self { target: 1e-14, truncation_cap: 4_000_000, pole_radius: Self::DEFAULT_POLE_RADIUS }
    }
}

/// The two bases `q`, `p` together with `(q;q)_inf` and `(p;p)_inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseParams {
    q: Complex64,
    p: Complex64,
    qq: Complex64,
    pp: Complex64,
}

impl BaseParams {
    pub fn new(q: Complex64, p: Complex64) -> Result<Self> {
        Self::with_tolerance(q, p, &ToleranceSpec::default())
    }

    pub fn real(q: f64, p: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0), Complex64::new(p, 0.0))
    }

    pub fn with_tolerance(q: Complex64, p: Complex64, tol: &ToleranceSpec) -> Result<Self> {
        if !(q.norm() < 1.0 && p.norm() < 1.0) {
            return Err(Error::Domain(alloc::format!("|q| = {}, |p| = {} must be < 1", q.norm(), p.norm())));
        }
        let qq = qpochhammer_infinite(q, q, tol)?;
        let pp = qpochhammer_infinite(p, p, tol)?;
        Ok(Self { q, p, qq, pp })
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn p(&self) -> Complex64 {
        self.p
    }

    pub fn pq(&self) -> Complex64 {
        self.p * self.q
    }

    /// `(q;q)_inf`
    pub fn qq(&self) -> Complex64 {
        self.qq
    }

    /// `(p;p)_inf`
    pub fn pp(&self) -> Complex64 {
        self.pp
    }

    /// The same pair with `q` and `p` exchanged.
    pub fn swapped(&self) -> Self {
        Self { q: self.p, p: self.q, qq: self.pp, pp: self.qq }
    }
}

/// `(a; q)_inf = prod_{k >= 0} (1 - a q^k)`.
pub fn qpochhammer_infinite(a: Complex64, q: Complex64, tol: &ToleranceSpec) -> Result<Complex64> {
    let qm = q.norm();
    if !(qm < 1.0) {
        return Err(Error::Domain(alloc::format!("|q| = {qm} must be < 1")));
    }
    let terms = geometric_terms(a.norm(), qm, tol.tail());
    if terms > tol.truncation_cap {
        return Err(Error::NonConvergent { needed: terms, cap: tol.truncation_cap });
    }
    let mut acc = Complex64::new(1.0, 0.0);
    let mut x = a;
    for _ in 0..terms {
        acc *= Complex64::new(1.0, 0.0) - x;
        x *= q;
    }
    Ok(acc)
}

/// `theta(z; p) = (z; p)_inf (p/z; p)_inf`.
pub fn theta_p(z: Complex64, p: Complex64, tol: &ToleranceSpec) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("theta(z; p) undefined at z = 0".into()));
    }
    Ok(qpochhammer_infinite(z, p, tol)? * qpochhammer_infinite(p / z, p, tol)?)
}

/// `kappa = (p;p)_inf (q;q)_inf / (4 pi i)`.
pub fn kappa(base: &BaseParams) -> Complex64 {
    base.pp * base.qq / Complex64::new(0.0, 4.0 * PI)
}

/// Smallest `n >= 1` with `scale * r^n / (1 - r) < bound`.
fn geometric_terms(scale: f64, r: f64, bound: f64) -> usize {
    if scale == 0.0 || r == 0.0 {
        return 1;
    }
    let needed = (bound * (1.0 - r) / scale).ln() / r.ln();
    if needed <= 1.0 {
        1
    } else if needed.is_finite() {
        needed.ceil() as usize
    } else {
        usize::MAX
    }
}

/// Row lengths of a truncated double product: row `k` keeps `j < rows[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub rows: Vec<usize>,
}

impl Truncation {
    pub fn terms(&self) -> usize {
        self.rows.iter().sum()
    }

    /// Doubles the number of rows and every row length.
    pub fn doubled(&self) -> Self {
        let k = self.rows.len();
        let mut rows: Vec<usize> = self.rows.iter().map(|&j| 2 * j).collect();
        let last = rows.last().copied().unwrap_or(2);
        rows.extend(core::iter::repeat_n(last, k));
        Self { rows }
    }

    /// Truncation for `Gamma(z; q, p)` at the requested tolerance.
    ///
    /// With `M = |z| + |pq/z|`, rows `k >= K` are dropped once
    /// `M |p|^K / ((1-|p|)(1-|q|)) < eps/2`, and each kept row `k` is cut
    /// where `M |p|^k |q|^J / (1-|q|) < eps / (2K)`.
    pub fn for_gamma(z: Complex64, base: &BaseParams, tol: &ToleranceSpec) -> Result<Self> {
        let (qm, pm) = (base.q.norm(), base.p.norm());
        let m = z.norm() + (base.pq() / z).norm();
        let eps = tol.tail();
        let k_rows = if pm == 0.0 {
            1
        } else {
            geometric_terms(m / (1.0 - qm), pm, eps / 2.0)
        };
        if k_rows > tol.truncation_cap {
            return Err(Error::NonConvergent { needed: k_rows, cap: tol.truncation_cap });
        }
        let row_bound = eps / (2.0 * k_rows as f64);
        let mut rows = Vec::with_capacity(k_rows);
        let mut total = 0usize;
        let mut scale = m;
        for _ in 0..k_rows {
            let j = geometric_terms(scale, qm, row_bound);
            total = total.saturating_add(j);
            if total > tol.truncation_cap {
                return Err(Error::NonConvergent { needed: total, cap: tol.truncation_cap });
            }
            rows.push(j);
            scale *= pm;
        }
        Ok(Self { rows })
    }
}

/// Numerator and denominator of the truncated double product, plus the
/// smallest distance in argument space from `z` to a pole and to a zero.
struct GammaParts {
    num: Complex64,
    den: Complex64,
    pole_dist: f64,
    zero_dist: f64,
}

fn gamma_parts(z: Complex64, base: &BaseParams, trunc: &Truncation) -> GammaParts {
    let one = Complex64::new(1.0, 0.0);
    let zinv = z.inv();
    let mut num = one;
    let mut den = one;
    let mut pole_dist = f64::INFINITY;
    let mut zero_dist = f64::INFINITY;
    // lattice point p^k (times q^j inside the row)
    let mut pk = one;
    for &row in &trunc.rows {
        let mut lattice = pk;
        for _ in 0..row {
            // pole where z * lattice = 1, zero where z = q p * lattice
            let d = one - z * lattice;
            let n = one - zinv * lattice * base.q * base.p;
            let lm2 = lattice.norm_sqr();
            if lm2 > 0.0 {
                pole_dist = pole_dist.min(d.norm_sqr() / lm2);
                zero_dist = zero_dist.min(n.norm_sqr());
            }
            den *= d;
            num *= n;
            lattice *= base.q;
        }
        pk *= base.p;
    }
    GammaParts { num, den, pole_dist: pole_dist.sqrt(), zero_dist: zero_dist.sqrt() * z.norm() }
}

fn check_arg(z: Complex64) -> Result<()> {
    if z == Complex64::new(0.0, 0.0) || !z.is_finite() {
        return Err(Error::Domain(alloc::format!("elliptic gamma argument {z} must be finite and nonzero")));
    }
    Ok(())
}

/// `Gamma(z; q, p)` accurate to `tol.target` relative error away from poles.
pub fn elliptic_gamma(z: Complex64, base: &BaseParams, tol: &ToleranceSpec) -> Result<Complex64> {
    check_arg(z)?;
    let trunc = Truncation::for_gamma(z, base, tol)?;
    let parts = gamma_parts(z, base, &trunc);
    if parts.pole_dist < tol.pole_radius {
        return Err(Error::Pole { arg: z, factor: None });
    }
    Ok(parts.num / parts.den)
}

/// `1 / Gamma(z; q, p)`, which is finite on all of `C \ {0}`.
///
/// Rejects arguments near zeros of `Gamma` (the poles of the reciprocal).
/// At poles of `Gamma` it returns an exact or near zero.
pub fn elliptic_gamma_recip(z: Complex64, base: &BaseParams, tol: &ToleranceSpec) -> Result<Complex64> {
    check_arg(z)?;
    let trunc = Truncation::for_gamma(z, base, tol)?;
    let parts = gamma_parts(z, base, &trunc);
    if parts.zero_dist < tol.pole_radius {
        return Err(Error::Pole { arg: z, factor: None });
    }
    Ok(parts.den / parts.num)
}

/// `Gamma(z; q, p)` with an explicit truncation and no pole check.
pub fn elliptic_gamma_truncated(z: Complex64, base: &BaseParams, trunc: &Truncation) -> Complex64 {
    let parts = gamma_parts(z, base, trunc);
    parts.num / parts.den
}
