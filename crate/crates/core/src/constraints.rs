//! Parameter-region records: `|m| < 1` and the balancing form `|pq| < |m|`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::ellgamma::BaseParams;
use crate::expr::{Assignment, ParamMonomial};
use crate::{Error, Result};

/// Default slack for `|m| < 1` records.
pub const DISK_MARGIN: f64 = 0.05;
/// Default slack for balancing records: `|pq| <= 0.7 |m|`.
pub const BALANCING_MARGIN: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    /// `|m| < 1`
    InsideDisk,
    /// `|pq| < |m|`
    Balancing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub kind: ConstraintKind,
    pub monomial: ParamMonomial,
    /// Sampling slack in `(0, 1)`: the record must hold as `ratio <= 1 - margin`.
    pub margin: f64,
}

impl Constraint {
    pub fn inside_disk(monomial: ParamMonomial) -> Self {
        Self { kind: ConstraintKind::InsideDisk, monomial, margin: DISK_MARGIN }
    }

    pub fn balancing(monomial: ParamMonomial) -> Self {
        Self { kind: ConstraintKind::Balancing, monomial, margin: BALANCING_MARGIN }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin;
        self
    }

    /// `|m|` or `|pq| / |m|`; the record holds when this is below 1.
    pub fn ratio(&self, a: &Assignment, base: &BaseParams) -> Result<f64> {
        let m = self.monomial.evaluate(a)?.norm();
        Ok(match self.kind {
            ConstraintKind::InsideDisk => m,
            ConstraintKind::Balancing => base.pq().norm() / m,
        })
    }

    pub fn holds(&self, a: &Assignment, base: &BaseParams) -> Result<bool> {
        Ok(self.ratio(a, base)? < 1.0)
    }

    pub fn holds_with_margin(&self, a: &Assignment, base: &BaseParams) -> Result<bool> {
        Ok(self.ratio(a, base)? <= 1.0 - self.margin)
    }

    fn same_record(&self, other: &Self) -> bool {
        self.kind == other.kind && self.monomial == other.monomial
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ConstraintKind::InsideDisk => write!(f, "|{}| < 1", self.monomial),
            ConstraintKind::Balancing => write!(f, "|pq| < |{}|", self.monomial),
        }
    }
}

/// Constraint records plus the parameter and point names they govern.
///
/// `params` are sampled inside the disk, `points` on the unit circle.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConstraintSet {
    pub params: Vec<String>,
    pub points: Vec<String>,
    pub records: Vec<Constraint>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn declare_param(&mut self, name: &str) {
        if !self.params.iter().any(|p| p == name) {
            self.params.push(name.to_string());
        }
    }

    pub fn declare_point(&mut self, name: &str) {
        if !self.points.iter().any(|p| p == name) {
            self.points.push(name.to_string());
        }
    }

    /// Adds a record unless an identical one is present.
    pub fn push(&mut self, c: Constraint) {
        if !self.records.iter().any(|r| r.same_record(&c)) {
            self.records.push(c);
        }
    }

    /// Each named parameter inside the unit disk.
    pub fn disk_params(&mut self, names: &[&str]) {
        for n in names {
            self.declare_param(n);
            self.push(Constraint::inside_disk(ParamMonomial::param(n)));
        }
    }

    pub fn union(&mut self, other: &ConstraintSet) {
        for p in &other.params {
            self.declare_param(p);
        }
        for p in &other.points {
            self.declare_point(p);
        }
        for r in &other.records {
            self.push(r.clone());
        }
    }

    /// Fails with the first violated record.
    pub fn check(&self, a: &Assignment, base: &BaseParams) -> Result<()> {
        for r in &self.records {
            let ratio = r.ratio(a, base)?;
            if !(ratio < 1.0) {
                return Err(Error::ConstraintViolation(format!("{r} (ratio {ratio:.6})")));
            }
        }
        Ok(())
    }

    pub fn satisfied_with_margins(&self, a: &Assignment, base: &BaseParams) -> Result<bool> {
        for r in &self.records {
            if !r.holds_with_margin(a, base)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
