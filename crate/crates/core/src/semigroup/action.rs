//! Twisted actions of inverse semigroups on finite sets.
//!
//! `θ_s` is a partial bijection with domain `D_s` and range `D_{s*}`;
//! `ω(s,t)` is a function on `D_{st}`, evaluated at the point being moved.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{spectrum, FiniteInverseSemigroup, SemigroupError};
use crate::circle::CircleValue;
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupTwistedAction {
    semigroup: Arc<FiniteInverseSemigroup>,
    space: Vec<String>,
    /// `theta[s][x]`, `None` outside `D_s`.
    theta: Vec<Vec<Option<usize>>>,
    /// Values of `ω(s,t)(x)` that differ from 1.
    omega: HashMap<(usize, usize, usize), CircleValue>,
}

/// `{space, domains: {s: [x]}, theta: {s: {x: y}}, omega: {"(s,t)": {x: "p/q"}}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistedActionFile {
    pub space: Vec<String>,
    pub domains: BTreeMap<String, Vec<String>>,
    pub theta: BTreeMap<String, BTreeMap<String, String>>,
    #[serde(default)]
    pub omega: BTreeMap<String, BTreeMap<String, String>>,
}

impl SemigroupTwistedAction {
    /// An action with `ω ≡ 1`.
    pub fn new(
        semigroup: Arc<FiniteInverseSemigroup>,
        space: Vec<String>,
        theta: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, SemigroupError> {
        let k = space.len();
        if theta.len() != semigroup.len() || theta.iter().any(|r| r.len() != k || r.iter().flatten().any(|&y| y >= k)) {
            return Err(SemigroupError::MalformedAction("θ must map points to points for every element".into()));
        }
        Ok(Self { semigroup, space, theta, omega: HashMap::new() })
    }

    pub fn from_file(semigroup: Arc<FiniteInverseSemigroup>, file: &TwistedActionFile) -> Result<Self, SemigroupError> {
        let bad = |m: String| SemigroupError::MalformedAction(m);
        let points: HashMap<&str, usize> = file.space.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();
        if points.len() != file.space.len() {
            return Err(bad("duplicate point".into()));
        }
        let point = |x: &str| points.get(x).copied().ok_or_else(|| bad(format!("unknown point {x}")));
        let elem = |s: &str| semigroup.index_of(s).ok_or_else(|| bad(format!("unknown element {s}")));
        let mut theta = vec![vec![None; file.space.len()]; semigroup.len()];
        for (s, map) in &file.theta {
            let s = elem(s)?;
            for (x, y) in map {
                theta[s][point(x)?] = Some(point(y)?);
            }
        }
        for (s_name, dom) in &file.domains {
            let s = elem(s_name)?;
            let mut listed = vec![false; file.space.len()];
            for x in dom {
                listed[point(x)?] = true;
            }
            for (x, &l) in listed.iter().enumerate() {
                if l != theta[s][x].is_some() {
                    return Err(bad(format!("theta of {s_name} is not defined exactly on its domain (point {})", file.space[x])));
                }
            }
        }
        for (s, row) in theta.iter().enumerate() {
            if row.iter().any(Option::is_some) && !file.domains.contains_key(semigroup.name(s)) {
                return Err(bad(format!("theta of {} given without a domain", semigroup.name(s))));
            }
        }
        let mut out = Self::new(semigroup.clone(), file.space.clone(), theta)?;
        for (pair, values) in &file.omega {
            let inner = pair.trim().strip_prefix('(').and_then(|p| p.strip_suffix(')'));
            let (s, t) = inner
                .and_then(|p| split_pair(p, &semigroup))
                .ok_or_else(|| bad(format!("omega key {pair} is not (s,t)")))?;
            for (x, v) in values {
                let v: CircleValue = v.parse().map_err(bad)?;
                out.set_omega(s, t, point(x)?, v);
            }
        }
        Ok(out)
    }

    pub fn to_file(&self) -> TwistedActionFile {
        let s = &self.semigroup;
        let mut domains = BTreeMap::new();
        let mut theta = BTreeMap::new();
        for e in 0..s.len() {
            let dom = self.domain(e);
            if dom.is_empty() {
                continue;
            }
            domains.insert(s.name(e).to_string(), dom.iter().map(|&x| self.space[x].clone()).collect());
            theta.insert(
                s.name(e).to_string(),
                dom.iter().map(|&x| (self.space[x].clone(), self.space[self.theta[e][x].unwrap()].clone())).collect(),
            );
        }
        let mut omega: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        for (&(a, b, x), v) in &self.omega {
            omega
                .entry(format!("({},{})", s.name(a), s.name(b)))
                .or_default()
                .insert(self.space[x].clone(), v.to_string());
        }
        TwistedActionFile { space: self.space.clone(), domains, theta, omega }
    }

    pub fn semigroup(&self) -> &Arc<FiniteInverseSemigroup> {
        &self.semigroup
    }

    pub fn space(&self) -> &[String] {
        &self.space
    }

    pub fn point_name(&self, x: usize) -> &str {
        &self.space[x]
    }

    pub fn theta(&self, s: usize, x: usize) -> Option<usize> {
        self.theta[s][x]
    }

    pub fn in_domain(&self, s: usize, x: usize) -> bool {
        self.theta[s][x].is_some()
    }

    /// `D_s` in point order.
    pub fn domain(&self, s: usize) -> Vec<usize> {
        (0..self.space.len()).filter(|&x| self.in_domain(s, x)).collect()
    }

    /// `ω(s,t)(x)`, 1 unless set.
    pub fn omega(&self, s: usize, t: usize, x: usize) -> CircleValue {
        self.omega.get(&(s, t, x)).copied().unwrap_or_else(CircleValue::one)
    }

    pub fn set_omega(&mut self, s: usize, t: usize, x: usize, v: CircleValue) {
        if v.is_one() {
            self.omega.remove(&(s, t, x));
        } else {
            self.omega.insert((s, t, x), v);
        }
    }

    pub fn with_omega(mut self, s: usize, t: usize, x: usize, v: CircleValue) -> Self {
        self.set_omega(s, t, x, v);
        self
    }

    pub fn with_theta(mut self, s: usize, x: usize, y: Option<usize>) -> Self {
        self.theta[s][x] = y;
        self
    }

    /// `θ_r(θ_s(x))`, when defined.
    pub(crate) fn theta2(&self, r: usize, s: usize, x: usize) -> Option<usize> {
        self.theta(s, x).and_then(|y| self.theta(r, y))
    }
}

/// Splits `s,t` at the comma that leaves two element names.
fn split_pair(p: &str, s: &FiniteInverseSemigroup) -> Option<(usize, usize)> {
    p.match_indices(',').find_map(|(i, _)| {
        let (a, b) = (p[..i].trim(), p[i + 1..].trim());
        Some((s.index_of(a)?, s.index_of(b)?))
    })
}

/// The action on the spectrum: `D_s = {χ : χ(s*s) = 1}`, `θ_s(χ)(e) = χ(s* e s)`.
pub fn canonical_action(s: &Arc<FiniteInverseSemigroup>) -> Result<SemigroupTwistedAction, SemigroupError> {
    let chars = spectrum(s)?;
    let index: HashMap<&[usize], usize> = chars.iter().enumerate().map(|(i, c)| (c.filter.as_slice(), i)).collect();
    let mut theta = vec![vec![None; chars.len()]; s.len()];
    for (a, row) in theta.iter_mut().enumerate() {
        let sa = s.star(a);
        for (x, chi) in chars.iter().enumerate() {
            if !chi.value(s.mul(sa, a)) {
                continue;
            }
            let image: Vec<usize> = s.idempotents().iter().copied().filter(|&e| chi.value(s.mul(sa, s.mul(e, a)))).collect();
            let y = index.get(image.as_slice()).copied().ok_or_else(|| {
                SemigroupError::MalformedAction(format!("θ_{} does not map characters to characters", s.name(a)))
            })?;
            row[x] = Some(y);
        }
    }
    let space = chars.iter().map(|c| c.name(s)).collect();
    SemigroupTwistedAction::new(s.clone(), space, theta)
}

pub(crate) fn check_action(a: &SemigroupTwistedAction, report: &mut ValidationReport) -> Result<(), SemigroupError> {
    let s = a.semigroup();
    let n = s.len();
    let k = a.space().len();
    let witness = |elems: &[usize], x: usize| {
        let mut w: Vec<String> = elems.iter().map(|&e| s.name(e).to_string()).collect();
        w.push(a.point_name(x).to_string());
        w
    };
    if let Some(x) = (0..k).find(|&x| (0..n).all(|e| !a.in_domain(e, x))) {
        return Err(SemigroupError::ActionViolation { condition: "domains cover X", witness: witness(&[], x) });
    }
    report.passed("domains_cover");
    for e in 0..n {
        let mut hit = vec![false; k];
        for x in a.domain(e) {
            let y = a.theta(e, x).unwrap();
            if hit[y] || !a.in_domain(s.star(e), y) {
                return Err(SemigroupError::ActionViolation {
                    condition: "θ_s is a bijection D_s → D_s*",
                    witness: witness(&[e], x),
                });
            }
            hit[y] = true;
        }
        if let Some(y) = (0..k).find(|&y| a.in_domain(s.star(e), y) && !hit[y]) {
            return Err(SemigroupError::ActionViolation {
                condition: "θ_s is a bijection D_s → D_s*",
                witness: witness(&[e], y),
            });
        }
    }
    report.passed("partial_bijections");
    for r in 0..n {
        for t in 0..n {
            let rt = s.mul(r, t);
            for x in 0..k {
                if a.theta2(r, t, x) != a.theta(rt, x) {
                    return Err(SemigroupError::ActionViolation { condition: "θ_r ∘ θ_s = θ_rs", witness: witness(&[r, t], x) });
                }
            }
        }
    }
    report.passed("action_composition");
    Ok(())
}

/// Checks the action, the pointwise cocycle identity
/// `ω(r,s)(θ_t x) ω(rs,t)(x) = ω(r,st)(x) ω(s,t)(x)` on `D_{rst}` and the
/// normalization `ω(s,e) = ω(e,s) = 1` for idempotents `e`.
pub fn validate_twisted_action(a: &SemigroupTwistedAction, tol: f64) -> Result<ValidationReport, SemigroupError> {
    let s = a.semigroup();
    let n = s.len();
    let k = a.space().len();
    let mut report = ValidationReport::new("twisted action");
    check_action(a, &mut report)?;
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for u in 0..n {
            let ru = s.mul(r, u);
            for t in 0..n {
                let ut = s.mul(u, t);
                let rut = s.mul(ru, t);
                for x in 0..k {
                    let Some(y) = a.theta(t, x) else { continue };
                    if a.theta2(r, u, y).is_none() {
                        continue;
                    }
                    let lhs = a.omega(r, u, y).mul(a.omega(ru, t, x));
                    let rhs = a.omega(r, ut, x).mul(a.omega(u, t, x));
                    let d = lhs.deviation(&rhs);
                    worst = worst.max(d);
                    if d > tol {
                        let witness = vec![s.name(r).into(), s.name(u).into(), s.name(t).into(), a.point_name(x).into()];
                        return Err(SemigroupError::CocycleViolation { condition: 2, witness, deviation: d });
                    }
                    debug_assert!(a.in_domain(rut, x));
                }
            }
        }
    }
    report.passed("cocycle_identity");
    for &e in s.idempotents() {
        for t in 0..n {
            for (p, q) in [(t, e), (e, t)] {
                for x in a.domain(s.mul(p, q)) {
                    let d = a.omega(p, q, x).deviation(&CircleValue::one());
                    worst = worst.max(d);
                    if d > tol {
                        let witness = vec![s.name(p).into(), s.name(q).into(), a.point_name(x).into()];
                        return Err(SemigroupError::CocycleViolation { condition: 3, witness, deviation: d });
                    }
                }
            }
        }
    }
    report.passed("normalization");
    report.vacuous("amenability", "finite groupoids are amenable");
    report.max_deviation = Some(worst);
    Ok(report)
}
