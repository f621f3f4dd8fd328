//! Circle-valued 2-cocycles on composable pairs.

mod cochain;
mod homotopy;
mod trivialize;

use num_integer::Integer;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

use crate::circle::CircleValue;
use crate::groupoid::FiniteGroupoid;
use crate::report::{ErrorCode, ValidationReport};

pub use cochain::{normalize_cocycle, raw_coboundary, Normalized, OneCochain};
pub use homotopy::{sample_homotopy, CocycleHomotopy, HomotopyKind, Lift, LiftValue};
pub use trivialize::{try_trivialize, Trivialization, TRIVIALIZE_LIMIT};

/// Default absolute tolerance for floating identity checks.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleViolation {
    pub triple: [String; 3],
    pub deviation: f64,
}

impl fmt::Display for TripleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.triple;
        write!(f, "({a}, {b}, {c}) deviation {:.3e}", self.deviation)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CocycleError {
    #[error("no value for composable pair ({0}, {1})")]
    MissingPair(String, String),
    #[error("value given for non-composable pair ({0}, {1})")]
    NotComposable(String, String),
    #[error("cocycle identity fails on {} triple(s); worst {worst}", violations.len())]
    IdentityViolation { worst: TripleViolation, violations: Vec<TripleViolation> },
    #[error("not normalized at {arrow}: value {value} on ({left}, {right})")]
    NormalizationViolation { arrow: String, left: String, right: String, value: String },
    #[error("cochains and cocycles live on different groupoids")]
    GroupoidMismatch,
    #[error("value {value} at {at} is not an exact {m}-th root of unity")]
    NotRootOfUnity { at: String, value: String, m: i64 },
    #[error("size cap exceeded: {size} unknowns > limit {limit}")]
    SizeCapExceeded { size: usize, limit: usize },
    #[error("1-cochain must be 1 on units; {0} has a different value")]
    NonTrivialOnUnit(String),
    #[error("lift violates the additive identity on ({}, {}, {}) by {deviation:.3e}", triple[0], triple[1], triple[2])]
    LiftViolation { triple: [String; 3], deviation: f64 },
    #[error("invalid homotopy: {0}")]
    InvalidHomotopy(String),
    #[error("sample at t = {t} is not a valid cocycle: {source}")]
    SampleInvalid { t: String, source: Box<CocycleError> },
}

impl ErrorCode for CocycleError {
    fn code(&self) -> &'static str {
        match self {
            CocycleError::MissingPair(..) => "MissingPair",
            CocycleError::NotComposable(..) => "NotComposable",
            CocycleError::IdentityViolation { .. } => "IdentityViolation",
            CocycleError::NormalizationViolation { .. } => "NormalizationViolation",
            CocycleError::GroupoidMismatch => "GroupoidMismatch",
            CocycleError::NotRootOfUnity { .. } => "NotRootOfUnity",
            CocycleError::SizeCapExceeded { .. } => "SizeCapExceeded",
            CocycleError::NonTrivialOnUnit(_) => "NonTrivialOnUnit",
            CocycleError::LiftViolation { .. } => "LiftViolation",
            CocycleError::InvalidHomotopy(_) => "InvalidHomotopy",
            CocycleError::SampleInvalid { .. } => "SampleInvalid",
        }
    }
}

pub(crate) fn same_groupoid(a: &Arc<FiniteGroupoid>, b: &Arc<FiniteGroupoid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A function on composable pairs with values in the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCocycle {
    groupoid: Arc<FiniteGroupoid>,
    values: Vec<Option<CircleValue>>,
}

impl TwoCocycle {
    /// The constant cocycle 1.
    pub fn trivial(groupoid: Arc<FiniteGroupoid>) -> Self {
        Self::from_fn(groupoid, |_, _| CircleValue::one())
    }

    /// Evaluates `f` on every composable pair.
    pub fn from_fn(groupoid: Arc<FiniteGroupoid>, f: impl Fn(usize, usize) -> CircleValue) -> Self {
        let n = groupoid.len();
        let mut values = vec![None; n * n];
        for (g, h) in groupoid.composable_pairs().pairs {
            values[g * n + h] = Some(f(g, h));
        }
        Self { groupoid, values }
    }

    /// Builds a possibly partial table; pairs not listed stay undefined.
    pub fn from_entries(
        groupoid: Arc<FiniteGroupoid>,
        entries: impl IntoIterator<Item = (usize, usize, CircleValue)>,
    ) -> Result<Self, CocycleError> {
        let n = groupoid.len();
        let mut values = vec![None; n * n];
        for (g, h, v) in entries {
            if groupoid.compose(g, h).is_none() {
                return Err(CocycleError::NotComposable(groupoid.name(g).into(), groupoid.name(h).into()));
            }
            values[g * n + h] = Some(v);
        }
        Ok(Self { groupoid, values })
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn get(&self, g: usize, h: usize) -> Option<CircleValue> {
        self.values[g * self.groupoid.len() + h]
    }

    /// The value on a composable pair.
    ///
    /// # Panics
    /// If the pair has no value; validated cocycles are total.
    pub fn at(&self, g: usize, h: usize) -> CircleValue {
        self.get(g, h).unwrap_or_else(|| {
            panic!("no cocycle value on ({}, {})", self.groupoid.name(g), self.groupoid.name(h))
        })
    }

    /// Replaces one value; the pair must be composable.
    pub fn with_value(mut self, g: usize, h: usize, v: CircleValue) -> Self {
        assert!(self.groupoid.compose(g, h).is_some(), "pair is not composable");
        let n = self.groupoid.len();
        self.values[g * n + h] = Some(v);
        self
    }

    /// Composable pairs with their values, ordered by `g` then `h`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, CircleValue)> + '_ {
        let n = self.groupoid.len();
        self.values.iter().enumerate().filter_map(move |(i, v)| v.map(|v| (i / n, i % n, v)))
    }

    pub fn conj(&self) -> Self {
        Self {
            groupoid: self.groupoid.clone(),
            values: self.values.iter().map(|v| v.map(CircleValue::conj)).collect(),
        }
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &Self) -> Result<Self, CocycleError> {
        if !same_groupoid(&self.groupoid, &other.groupoid) {
            return Err(CocycleError::GroupoidMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a.mul(*b)),
                _ => None,
            })
            .collect();
        Ok(Self { groupoid: self.groupoid.clone(), values })
    }

    /// Exact table equality. Floating entries compare by stored angle.
    pub fn table_eq(&self, other: &Self) -> bool {
        same_groupoid(&self.groupoid, &other.groupoid) && self.values == other.values
    }

    /// Largest pointwise deviation from `other`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .filter_map(|(a, b)| Some(a.as_ref()?.deviation(b.as_ref()?)))
            .fold(0.0, f64::max)
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().flatten().all(CircleValue::is_exact)
    }

    pub fn is_constant_one(&self) -> bool {
        self.values.iter().flatten().all(CircleValue::is_one)
    }

    /// Common denominator `L` and numerators in `0..L`, when every value is
    /// exact and `L` is small enough for overflow-free integer checks.
    pub(crate) fn exponent_table(&self) -> Option<(i64, Vec<i64>)> {
        let mut l = 1i64;
        for v in self.values.iter().flatten() {
            l = l.lcm(v.as_turns()?.denom());
            if l > 1 << 40 {
                return None;
            }
        }
        let table = self
            .values
            .iter()
            .map(|v| v.map_or(0, |v| v.exponent_mod(l).expect("denominator divides l")))
            .collect();
        Some((l, table))
    }

    fn names(&self, ids: [usize; 3]) -> [String; 3] {
        ids.map(|g| self.groupoid.name(g).to_string())
    }

    fn check_total(&self) -> Result<(), CocycleError> {
        for (g, h) in self.groupoid.composable_pairs().pairs {
            if self.get(g, h).is_none() {
                return Err(CocycleError::MissingPair(self.groupoid.name(g).into(), self.groupoid.name(h).into()));
            }
        }
        Ok(())
    }

    /// Checks the cocycle identity on every composable triple and returns the
    /// largest deviation seen.
    pub(crate) fn check_identity(&self, tol: f64) -> Result<f64, CocycleError> {
        self.check_total()?;
        let g = &*self.groupoid;
        let n = g.len();
        let mut violations = Vec::new();
        let mut max_dev = 0.0f64;
        if let Some((l, k)) = self.exponent_table() {
            for g1 in 0..n {
                for &g2 in g.arrows_to(g.src(g1)) {
                    let g12 = g.compose(g1, g2).unwrap();
                    for &g3 in g.arrows_to(g.src(g2)) {
                        let g23 = g.compose(g2, g3).unwrap();
                        let lhs = k[g1 * n + g2] + k[g12 * n + g3];
                        let rhs = k[g1 * n + g23] + k[g2 * n + g3];
                        if (lhs - rhs).rem_euclid(l) != 0 {
                            let d = CircleValue::turns(lhs - rhs, l).deviation(&CircleValue::one());
                            max_dev = max_dev.max(d);
                            violations.push(TripleViolation { triple: self.names([g1, g2, g3]), deviation: d });
                        }
                    }
                }
            }
        } else {
            for g1 in 0..n {
                for &g2 in g.arrows_to(g.src(g1)) {
                    let g12 = g.compose(g1, g2).unwrap();
                    for &g3 in g.arrows_to(g.src(g2)) {
                        let g23 = g.compose(g2, g3).unwrap();
                        let lhs = self.at(g1, g2).mul(self.at(g12, g3));
                        let rhs = self.at(g1, g23).mul(self.at(g2, g3));
                        let d = lhs.deviation(&rhs);
                        let exact = lhs.is_exact() && rhs.is_exact();
                        max_dev = max_dev.max(d);
                        if (exact && lhs != rhs) || (!exact && d > tol) {
                            violations.push(TripleViolation { triple: self.names([g1, g2, g3]), deviation: d });
                        }
                    }
                }
            }
        }
        if violations.is_empty() {
            return Ok(max_dev);
        }
        let worst = violations
            .iter()
            .max_by(|a, b| a.deviation.total_cmp(&b.deviation))
            .cloned()
            .unwrap();
        Err(CocycleError::IdentityViolation { worst, violations })
    }

    fn check_normalized(&self, tol: f64) -> Result<f64, CocycleError> {
        let g = &*self.groupoid;
        let mut max_dev = 0.0f64;
        for a in 0..g.len() {
            for (l, r) in [(a, g.src(a)), (g.dst(a), a)] {
                let v = self.at(l, r);
                let d = v.deviation(&CircleValue::one());
                let bad = if v.is_exact() { !v.is_one() } else { d > tol };
                if bad {
                    return Err(CocycleError::NormalizationViolation {
                        arrow: g.name(a).into(),
                        left: g.name(l).into(),
                        right: g.name(r).into(),
                        value: v.to_string(),
                    });
                }
                max_dev = max_dev.max(d);
            }
        }
        Ok(max_dev)
    }
}

/// Checks totality, the cocycle identity on every composable triple, and
/// normalization. Exact values are compared exactly; floating values within `tol`.
pub fn validate_cocycle(w: &TwoCocycle, tol: f64) -> Result<ValidationReport, CocycleError> {
    let mut report = ValidationReport::new("cocycle");
    w.check_total()?;
    report.passed("total_on_composable_pairs");
    let dev = w.check_identity(tol)?;
    report.passed_with(
        "cocycle_identity",
        if w.is_exact() { "exact".to_string() } else { format!("tolerance {tol:e}") },
    );
    let norm_dev = w.check_normalized(tol)?;
    report.passed("normalized");
    report.max_deviation = Some(dev.max(norm_dev));
    Ok(report)
}
