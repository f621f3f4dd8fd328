//! Paths of cocycles `t -> ω_t` on a fixed groupoid, given by samplers.

use num_rational::Ratio;
use num_traits::{One, Zero};
use std::sync::Arc;

use super::{same_groupoid, validate_cocycle, CocycleError, OneCochain, TwoCocycle};
use crate::circle::{rationalize, CircleValue};
use crate::groupoid::FiniteGroupoid;

/// A real angle on one composable pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LiftValue {
    /// `r·π` radians with `r` rational.
    PiMultiple(Ratio<i64>),
    Radians(f64),
}

impl LiftValue {
    fn is_exact(&self) -> bool {
        matches!(self, LiftValue::PiMultiple(_))
    }

    fn as_f64(&self) -> f64 {
        match *self {
            LiftValue::PiMultiple(r) => std::f64::consts::PI * (*r.numer() as f64) / (*r.denom() as f64),
            LiftValue::Radians(a) => a,
        }
    }

    /// `exp(i·t·c)`.
    fn exp_at(&self, t: Ratio<i64>) -> CircleValue {
        match *self {
            LiftValue::PiMultiple(r) => CircleValue::from_ratio(r * t / 2),
            LiftValue::Radians(a) => CircleValue::radians(a * (*t.numer() as f64) / (*t.denom() as f64)),
        }
    }

    fn exp_at_f64(&self, t: f64) -> CircleValue {
        CircleValue::radians(self.as_f64() * t)
    }
}

/// A real-valued 2-cochain satisfying the additive cocycle identity and
/// vanishing on unit pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Lift {
    groupoid: Arc<FiniteGroupoid>,
    values: Vec<Option<LiftValue>>,
}

/// Tolerance for the additive identity when some lift value is a float.
const LIFT_TOL: f64 = 1e-9;

impl Lift {
    /// Checks totality, the additive identity and normalization.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        entries: impl IntoIterator<Item = (usize, usize, LiftValue)>,
    ) -> Result<Self, CocycleError> {
        let n = groupoid.len();
        let mut values = vec![None; n * n];
        for (g, h, v) in entries {
            if groupoid.compose(g, h).is_none() {
                return Err(CocycleError::NotComposable(groupoid.name(g).into(), groupoid.name(h).into()));
            }
            values[g * n + h] = Some(v);
        }
        let lift = Self { groupoid, values };
        lift.check()?;
        Ok(lift)
    }

    fn at(&self, g: usize, h: usize) -> LiftValue {
        self.values[g * self.groupoid.len() + h].expect("checked total")
    }

    fn check(&self) -> Result<(), CocycleError> {
        let g = &*self.groupoid;
        let n = g.len();
        for (a, b) in g.composable_pairs().pairs {
            if self.values[a * n + b].is_none() {
                return Err(CocycleError::MissingPair(g.name(a).into(), g.name(b).into()));
            }
        }
        let exact = self.values.iter().flatten().all(LiftValue::is_exact);
        for g1 in 0..n {
            for &g2 in g.arrows_to(g.src(g1)) {
                let g12 = g.compose(g1, g2).unwrap();
                for &g3 in g.arrows_to(g.src(g2)) {
                    let g23 = g.compose(g2, g3).unwrap();
                    let terms = [self.at(g1, g2), self.at(g12, g3), self.at(g1, g23), self.at(g2, g3)];
                    let deviation = if exact {
                        let r = |v: LiftValue| match v {
                            LiftValue::PiMultiple(r) => r,
                            LiftValue::Radians(_) => unreachable!(),
                        };
                        let d = r(terms[0]) + r(terms[1]) - r(terms[2]) - r(terms[3]);
                        if d.is_zero() { 0.0 } else { LiftValue::PiMultiple(d).as_f64().abs() }
                    } else {
                        (terms[0].as_f64() + terms[1].as_f64() - terms[2].as_f64() - terms[3].as_f64()).abs()
                    };
                    if (exact && deviation != 0.0) || deviation > LIFT_TOL {
                        return Err(CocycleError::LiftViolation {
                            triple: [g1, g2, g3].map(|x| g.name(x).to_string()),
                            deviation,
                        });
                    }
                }
            }
        }
        for a in 0..n {
            for (l, r) in [(a, g.src(a)), (g.dst(a), a)] {
                let v = self.at(l, r);
                if v.as_f64() != 0.0 {
                    return Err(CocycleError::NormalizationViolation {
                        arrow: g.name(a).into(),
                        left: g.name(l).into(),
                        right: g.name(r).into(),
                        value: format!("{} rad", v.as_f64()),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    fn exp_at(&self, t: Ratio<i64>) -> TwoCocycle {
        let n = self.groupoid.len();
        TwoCocycle::from_fn(self.groupoid.clone(), |g, h| self.values[g * n + h].unwrap().exp_at(t))
    }

    fn exp_at_f64(&self, t: f64) -> TwoCocycle {
        let n = self.groupoid.len();
        TwoCocycle::from_fn(self.groupoid.clone(), |g, h| self.values[g * n + h].unwrap().exp_at_f64(t))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HomotopyKind {
    /// `ω_t = base · ∂(b^t)`.
    CoboundaryPath { b: OneCochain, base: Option<TwoCocycle> },
    /// `ω_t = base · exp(i t c)`.
    LinearLift { c: Lift, base: Option<TwoCocycle> },
    /// Step function through listed samples: `ω_t` is the sample with the
    /// largest listed time `≤ t`. The first listed time is 0.
    TableOfSamples(Vec<(Ratio<i64>, TwoCocycle)>),
}

/// A sampled path of 2-cocycles on one groupoid.
#[derive(Debug, Clone, PartialEq)]
pub struct CocycleHomotopy {
    groupoid: Arc<FiniteGroupoid>,
    kind: HomotopyKind,
}

fn check_base(g: &Arc<FiniteGroupoid>, base: &Option<TwoCocycle>) -> Result<(), CocycleError> {
    match base {
        Some(w) if !same_groupoid(g, w.groupoid()) => Err(CocycleError::GroupoidMismatch),
        _ => Ok(()),
    }
}

fn format_t(t: Ratio<i64>) -> String {
    if t.is_integer() {
        t.numer().to_string()
    } else {
        format!("{}/{}", t.numer(), t.denom())
    }
}

impl CocycleHomotopy {
    pub fn coboundary_path(b: OneCochain, base: Option<TwoCocycle>) -> Result<Self, CocycleError> {
        let groupoid = b.groupoid().clone();
        check_base(&groupoid, &base)?;
        Ok(Self { groupoid, kind: HomotopyKind::CoboundaryPath { b, base } })
    }

    pub fn linear_lift(c: Lift, base: Option<TwoCocycle>) -> Result<Self, CocycleError> {
        let groupoid = c.groupoid().clone();
        check_base(&groupoid, &base)?;
        Ok(Self { groupoid, kind: HomotopyKind::LinearLift { c, base } })
    }

    pub fn table_of_samples(
        groupoid: Arc<FiniteGroupoid>,
        samples: Vec<(Ratio<i64>, TwoCocycle)>,
    ) -> Result<Self, CocycleError> {
        let invalid = |m: &str| Err(CocycleError::InvalidHomotopy(m.into()));
        match samples.first() {
            None => return invalid("no samples"),
            Some((t, _)) if !t.is_zero() => return invalid("first sample must be at t = 0"),
            _ => {}
        }
        if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
            return invalid("sample times must increase strictly");
        }
        if samples.last().unwrap().0 > Ratio::one() {
            return invalid("sample times must lie in [0, 1]");
        }
        if samples.iter().any(|(_, w)| !same_groupoid(&groupoid, w.groupoid())) {
            return Err(CocycleError::GroupoidMismatch);
        }
        Ok(Self { groupoid, kind: HomotopyKind::TableOfSamples(samples) })
    }

    /// The constant path at `w`.
    pub fn constant(w: TwoCocycle) -> Self {
        let b = OneCochain::trivial(w.groupoid().clone());
        Self::coboundary_path(b, Some(w)).expect("same groupoid")
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn kind(&self) -> &HomotopyKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            HomotopyKind::CoboundaryPath { .. } => "coboundary_path",
            HomotopyKind::LinearLift { .. } => "linear_lift",
            HomotopyKind::TableOfSamples(_) => "table_of_samples",
        }
    }

    fn with_base(base: &Option<TwoCocycle>, w: TwoCocycle) -> TwoCocycle {
        match base {
            Some(b) => b.multiply(&w).expect("same groupoid"),
            None => w,
        }
    }

    /// `ω_t` at an exact time, without validation.
    pub fn evaluate(&self, t: Ratio<i64>) -> TwoCocycle {
        match &self.kind {
            HomotopyKind::CoboundaryPath { b, base } => Self::with_base(base, b.power(t).coboundary()),
            HomotopyKind::LinearLift { c, base } => Self::with_base(base, c.exp_at(t)),
            HomotopyKind::TableOfSamples(s) => {
                s.iter().rev().find(|(ti, _)| *ti <= t).map(|(_, w)| w.clone()).expect("first time is 0")
            }
        }
    }

    fn evaluate_f64(&self, t: f64) -> TwoCocycle {
        match &self.kind {
            HomotopyKind::CoboundaryPath { b, base } => {
                let scaled: Vec<CircleValue> = b.values().iter().map(|v| v.scale_f64(t)).collect();
                let scaled = OneCochain::new(self.groupoid.clone(), scaled).expect("units stay at zero angle");
                Self::with_base(base, scaled.coboundary())
            }
            HomotopyKind::LinearLift { c, base } => Self::with_base(base, c.exp_at_f64(t)),
            HomotopyKind::TableOfSamples(s) => s
                .iter()
                .rev()
                .find(|(ti, _)| (*ti.numer() as f64) / (*ti.denom() as f64) <= t)
                .map(|(_, w)| w.clone())
                .expect("first time is 0"),
        }
    }

    /// Validated `ω_t` at an exact time in `[0, 1]`.
    pub fn sample_at(&self, t: Ratio<i64>, tol: f64) -> Result<TwoCocycle, CocycleError> {
        if t < Ratio::zero() || t > Ratio::one() {
            return Err(CocycleError::InvalidHomotopy(format!("t = {} outside [0, 1]", format_t(t))));
        }
        let w = self.evaluate(t);
        validate_cocycle(&w, tol)
            .map_err(|e| CocycleError::SampleInvalid { t: format_t(t), source: Box::new(e) })?;
        Ok(w)
    }

    /// Validated `ω_t`; times with an exact small rational form use the exact path.
    pub fn sample(&self, t: f64, tol: f64) -> Result<TwoCocycle, CocycleError> {
        if let Some(r) = rationalize(t) {
            return self.sample_at(r, tol);
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(CocycleError::InvalidHomotopy(format!("t = {t} outside [0, 1]")));
        }
        let w = self.evaluate_f64(t);
        validate_cocycle(&w, tol).map_err(|e| CocycleError::SampleInvalid { t: t.to_string(), source: Box::new(e) })?;
        Ok(w)
    }
}

/// `ω_t` for a homotopy, validated.
pub fn sample_homotopy(h: &CocycleHomotopy, t: f64) -> Result<TwoCocycle, CocycleError> {
    h.sample(t, super::DEFAULT_TOL)
}
