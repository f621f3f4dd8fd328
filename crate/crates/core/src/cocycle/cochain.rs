//! 1-cochains, coboundaries and renormalization.

use std::sync::Arc;

use super::{same_groupoid, CocycleError, TwoCocycle};
use crate::circle::CircleValue;
use crate::groupoid::FiniteGroupoid;

/// A circle-valued function on arrows that is 1 on units.
#[derive(Debug, Clone, PartialEq)]
pub struct OneCochain {
    groupoid: Arc<FiniteGroupoid>,
    values: Vec<CircleValue>,
}

/// `∂b(g,h) = b(g) b(h) b(gh)^-1` for arbitrary values, including non-trivial
/// values on units.
pub fn raw_coboundary(groupoid: &Arc<FiniteGroupoid>, b: &[CircleValue]) -> TwoCocycle {
    assert_eq!(b.len(), groupoid.len(), "one value per arrow");
    let g = groupoid.clone();
    TwoCocycle::from_fn(groupoid.clone(), move |x, y| b[x].mul(b[y]).div(b[g.compose(x, y).unwrap()]))
}

impl OneCochain {
    pub fn new(groupoid: Arc<FiniteGroupoid>, values: Vec<CircleValue>) -> Result<Self, CocycleError> {
        assert_eq!(values.len(), groupoid.len(), "one value per arrow");
        if let Some(&u) = groupoid.units().iter().find(|&&u| !values[u].is_one()) {
            return Err(CocycleError::NonTrivialOnUnit(groupoid.name(u).into()));
        }
        Ok(Self { groupoid, values })
    }

    /// Evaluates `f` off the units and sets 1 on units.
    pub fn from_fn(groupoid: Arc<FiniteGroupoid>, f: impl Fn(usize) -> CircleValue) -> Self {
        let values = (0..groupoid.len())
            .map(|g| if groupoid.is_unit(g) { CircleValue::one() } else { f(g) })
            .collect();
        Self { groupoid, values }
    }

    pub fn trivial(groupoid: Arc<FiniteGroupoid>) -> Self {
        Self::from_fn(groupoid, |_| CircleValue::one())
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn get(&self, g: usize) -> CircleValue {
        self.values[g]
    }

    pub fn values(&self) -> &[CircleValue] {
        &self.values
    }

    /// `∂b(g,h) = b(g) b(h) b(gh)^-1`.
    pub fn coboundary(&self) -> TwoCocycle {
        raw_coboundary(&self.groupoid, &self.values)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, CocycleError> {
        if !same_groupoid(&self.groupoid, &other.groupoid) {
            return Err(CocycleError::GroupoidMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.mul(*b)).collect();
        Ok(Self { groupoid: self.groupoid.clone(), values })
    }

    pub fn conj(&self) -> Self {
        Self { groupoid: self.groupoid.clone(), values: self.values.iter().map(|v| v.conj()).collect() }
    }

    /// `b^t`: every angle scaled by `t`, exact angles through their `[0, 1)` representative.
    pub fn power(&self, t: num_rational::Ratio<i64>) -> Self {
        Self { groupoid: self.groupoid.clone(), values: self.values.iter().map(|v| v.scale(t)).collect() }
    }
}

/// A normalized cocycle together with the correction used to produce it.
#[derive(Debug, Clone, PartialEq)]
pub struct Normalized {
    pub cocycle: TwoCocycle,
    /// `b(g) = ω(r(g), g)`; the output is `ω · (∂b)^-1`.
    pub correction: Vec<CircleValue>,
}

/// Divides a cocycle by the coboundary of `b(g) = ω(r(g), g)`.
///
/// The identity on `(r(g), r(g), g)` gives `ω(r(g), r(g)) = ω(r(g), g)` and on
/// `(g, d(g), d(g))` gives `ω(g, d(g)) = ω(d(g), d(g))`, so the quotient is 1
/// on both kinds of unit pair.
pub fn normalize_cocycle(w: &TwoCocycle) -> Result<Normalized, CocycleError> {
    w.check_identity(super::DEFAULT_TOL)?;
    let g = w.groupoid();
    let correction: Vec<CircleValue> = (0..g.len()).map(|a| w.at(g.dst(a), a)).collect();
    let cocycle = w.multiply(&raw_coboundary(g, &correction).conj())?;
    Ok(Normalized { cocycle, correction })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{validate_cocycle, DEFAULT_TOL};
    use crate::groupoid::{make_group_groupoid, make_pair_groupoid, FiniteGroup};

    fn z2() -> Arc<FiniteGroupoid> {
        Arc::new(make_group_groupoid(&FiniteGroup::cyclic(2)))
    }

    #[test]
    fn coboundary_of_i_on_z2() {
        let g = z2();
        let a = g.index_of("1").unwrap();
        let b = OneCochain::from_fn(g.clone(), |_| CircleValue::turns(1, 4));
        let db = b.coboundary();
        assert_eq!(db.at(a, a), CircleValue::turns(1, 2));
        let report = validate_cocycle(&db, 0.0).unwrap();
        assert_eq!(report.max_deviation, Some(0.0));
    }

    #[test]
    fn trivial_cochain_gives_trivial_cocycle() {
        let g = Arc::new(make_pair_groupoid(3));
        assert!(OneCochain::trivial(g).coboundary().is_constant_one());
    }

    #[test]
    fn unit_values_are_enforced() {
        let g = z2();
        let e = g.units()[0];
        let mut v = vec![CircleValue::one(); 2];
        v[e] = CircleValue::turns(1, 2);
        assert_eq!(OneCochain::new(g, v), Err(CocycleError::NonTrivialOnUnit("0".into())));
    }

    #[test]
    fn coboundary_is_multiplicative() {
        let g = Arc::new(make_pair_groupoid(3));
        let b1 = OneCochain::from_fn(g.clone(), |x| CircleValue::turns(x as i64, 7));
        let b2 = OneCochain::from_fn(g.clone(), |x| CircleValue::turns(3 * x as i64 + 1, 8));
        let lhs = b1.coboundary().multiply(&b2.coboundary()).unwrap();
        assert!(lhs.table_eq(&b1.multiply(&b2).unwrap().coboundary()));
    }

    #[test]
    fn normalized_input_is_unchanged() {
        let g = Arc::new(make_pair_groupoid(2));
        let w = OneCochain::from_fn(g.clone(), |x| CircleValue::turns(x as i64, 5)).coboundary();
        let out = normalize_cocycle(&w).unwrap();
        assert!(out.cocycle.table_eq(&w));
        assert!(out.correction.iter().all(CircleValue::is_one));
    }

    #[test]
    fn perturbed_units_are_renormalized() {
        let g = z2();
        // coboundary of a cochain that is -1 on the identity: ω(e,e) = -1
        let raw: Vec<CircleValue> = (0..2)
            .map(|x| if g.is_unit(x) { CircleValue::turns(1, 2) } else { CircleValue::turns(1, 8) })
            .collect();
        let w = raw_coboundary(&g, &raw);
        let e = g.units()[0];
        assert_eq!(w.at(e, e), CircleValue::turns(1, 2));
        assert!(validate_cocycle(&w, DEFAULT_TOL).is_err());
        let out = normalize_cocycle(&w).unwrap();
        validate_cocycle(&out.cocycle, DEFAULT_TOL).unwrap();
        // output / input is the coboundary of the recorded correction, inverted
        let ratio = out.cocycle.multiply(&w.conj()).unwrap();
        assert!(ratio.table_eq(&raw_coboundary(&g, &out.correction).conj()));
    }

    #[test]
    fn normalize_rejects_non_cocycles() {
        let g = z2();
        let a = g.index_of("1").unwrap();
        // on Z_2 any value of ω(a,a) satisfies the identity
        let w = TwoCocycle::trivial(g).with_value(a, a, CircleValue::turns(1, 3));
        assert!(normalize_cocycle(&w).is_ok());
        let e = w.groupoid().units()[0];
        let bad = w.clone().with_value(e, a, CircleValue::turns(1, 3));
        assert!(matches!(normalize_cocycle(&bad), Err(CocycleError::IdentityViolation { .. })));
    }
}
