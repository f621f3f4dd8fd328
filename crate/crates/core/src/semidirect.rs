//! Directed actions of subsemigroups `P ⊆ Γ` of finite groups, their
//! semidirect product groupoids `{(x, p⁻¹q, y) : T_p x = T_q y}` and cocycles
//! pulled back from `Γ` along the labeling `c(x, γ, y) = γ`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circle::CircleValue;
use crate::cocycle::{validate_cocycle, CocycleError, CocycleHomotopy, OneCochain, TwoCocycle, DEFAULT_TOL};
use crate::groupoid::group::decode_mixed_radix;
use crate::groupoid::{make_group_groupoid, FiniteGroup, FiniteGroupoid, GroupAction, GroupFile, GroupoidError, RawTables};
use crate::report::{ErrorCode, ValidationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemidirectError {
    #[error("malformed directed action: {0}")]
    Malformed(String),
    #[error("condition ({condition}) fails at {}", witness.join(", "))]
    ConditionViolation { condition: &'static str, witness: Vec<String> },
    #[error("action is not directed: {0} and {1} have no upper bound covering dom({0}) ∩ dom({1})")]
    NotDirected(String, String),
    #[error("bilinear form is not well defined on the quotient at Q[{0}][{1}]")]
    NotWellDefinedOnQuotient(usize, usize),
    #[error("labeling is not a homomorphism at ({0}, {1})")]
    LabelingNotHomomorphism(String, String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

impl ErrorCode for SemidirectError {
    fn code(&self) -> &'static str {
        match self {
            SemidirectError::Malformed(_) => "MalformedAction",
            SemidirectError::ConditionViolation { .. } => "ConditionViolation",
            SemidirectError::NotDirected(..) => "NotDirected",
            SemidirectError::NotWellDefinedOnQuotient(..) => "NotWellDefinedOnQuotient",
            SemidirectError::LabelingNotHomomorphism(..) => "LabelingNotHomomorphism",
            SemidirectError::Groupoid(e) => e.code(),
            SemidirectError::Cocycle(e) => e.code(),
        }
    }
}

/// Which divisibility defines `p ≤ r` when looking for upper bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundOrder {
    /// `p ≤ r` iff `r ∈ pP`.
    #[default]
    Right,
    /// `p ≤ r` iff `r ∈ Pp`.
    Left,
}

/// `{gamma: {elements, table}, P, X, dom: {p: [x]}, T: {p: {x: y}}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectedActionFile {
    pub gamma: GroupFile,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    #[serde(rename = "X")]
    pub x: Vec<String>,
    pub dom: BTreeMap<String, Vec<String>>,
    #[serde(rename = "T")]
    pub t: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectedAction {
    gamma: Arc<FiniteGroup>,
    /// Elements of `P`, in group order.
    p: Vec<usize>,
    points: Vec<String>,
    /// `t[i][x] = T_{p[i]}(x)`, `None` outside `dom(p[i])`.
    t: Vec<Vec<Option<usize>>>,
    pub order: BoundOrder,
}

impl DirectedAction {
    pub fn new(
        gamma: Arc<FiniteGroup>,
        p: Vec<usize>,
        points: Vec<String>,
        t: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, SemidirectError> {
        let k = points.len();
        let mut p_sorted = p.clone();
        p_sorted.sort_unstable();
        p_sorted.dedup();
        if p_sorted != p || p.iter().any(|&g| g >= gamma.order()) {
            return Err(SemidirectError::Malformed("P must list distinct group elements in group order".into()));
        }
        if t.len() != p.len() || t.iter().any(|r| r.len() != k || r.iter().flatten().any(|&y| y >= k)) {
            return Err(SemidirectError::Malformed("T must map points to points for each p".into()));
        }
        Ok(Self { gamma, p, points, t, order: BoundOrder::Right })
    }

    /// `P = Γ` acting globally.
    pub fn global(action: &GroupAction) -> Self {
        let gamma = Arc::new(action.group.clone());
        let p = (0..gamma.order()).collect();
        let t = action.act.iter().map(|row| row.iter().map(|&y| Some(y)).collect()).collect();
        Self { gamma, p, points: action.points.clone(), t, order: BoundOrder::Right }
    }

    pub fn from_file(file: &DirectedActionFile) -> Result<Self, SemidirectError> {
        let gamma = Arc::new(FiniteGroup::from_file(&file.gamma)?);
        let bad = |m: String| SemidirectError::Malformed(m);
        let points: HashMap<&str, usize> = file.x.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();
        if points.len() != file.x.len() {
            return Err(bad("duplicate point".into()));
        }
        let point = |x: &str| points.get(x).copied().ok_or_else(|| bad(format!("unknown point {x}")));
        let elem = |g: &str| gamma.index_of(g).ok_or_else(|| bad(format!("unknown group element {g}")));
        let mut p: Vec<usize> = file.p.iter().map(|g| elem(g)).collect::<Result<_, _>>()?;
        p.sort_unstable();
        p.dedup();
        let pos = |g: &str| {
            let g = elem(g)?;
            p.binary_search(&g).map_err(|_| bad(format!("{} is not in P", gamma.name(g))))
        };
        let mut t = vec![vec![None; file.x.len()]; p.len()];
        for (g, map) in &file.t {
            let i = pos(g)?;
            for (x, y) in map {
                t[i][point(x)?] = Some(point(y)?);
            }
        }
        for (g, dom) in &file.dom {
            let i = pos(g)?;
            let mut listed = vec![false; file.x.len()];
            for x in dom {
                listed[point(x)?] = true;
            }
            if listed.iter().zip(&t[i]).any(|(&l, y)| l != y.is_some()) {
                return Err(bad(format!("T_{g} is not defined exactly on dom({g})")));
            }
        }
        for (i, row) in t.iter().enumerate() {
            if row.iter().any(Option::is_some) && !file.dom.contains_key(gamma.name(p[i])) {
                return Err(bad(format!("T_{} given without dom", gamma.name(p[i]))));
            }
        }
        Self::new(gamma, p, file.x.clone(), t)
    }

    pub fn to_file(&self) -> DirectedActionFile {
        let name = |g: usize| self.gamma.name(g).to_string();
        let mut dom = BTreeMap::new();
        let mut t = BTreeMap::new();
        for (i, &g) in self.p.iter().enumerate() {
            let d = self.domain(i);
            dom.insert(name(g), d.iter().map(|&x| self.points[x].clone()).collect());
            t.insert(name(g), d.iter().map(|&x| (self.points[x].clone(), self.points[self.t[i][x].unwrap()].clone())).collect());
        }
        DirectedActionFile {
            gamma: self.gamma.to_file(),
            p: self.p.iter().map(|&g| name(g)).collect(),
            x: self.points.clone(),
            dom,
            t,
        }
    }

    pub fn gamma(&self) -> &Arc<FiniteGroup> {
        &self.gamma
    }

    pub fn semigroup(&self) -> &[usize] {
        &self.p
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    /// Position of `g` in `P`.
    pub fn position(&self, g: usize) -> Option<usize> {
        self.p.binary_search(&g).ok()
    }

    /// `T_{P[i]}(x)`.
    pub fn apply(&self, i: usize, x: usize) -> Option<usize> {
        self.t[i][x]
    }

    /// `dom(P[i])` in point order.
    pub fn domain(&self, i: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&x| self.t[i][x].is_some()).collect()
    }

    fn upper_bounds(&self, i: usize) -> Vec<usize> {
        let g = self.p[i];
        (0..self.p.len())
            .filter(|&j| {
                let r = self.p[j];
                let quotient = match self.order {
                    BoundOrder::Right => self.gamma.mul(self.gamma.inv(g), r),
                    BoundOrder::Left => self.gamma.mul(r, self.gamma.inv(g)),
                };
                self.position(quotient).is_some()
            })
            .collect()
    }
}

/// Checks that `P` is a submonoid, that each `T_p` is injective, conditions
/// (2) and (3) pointwise, and directedness by exhaustive search.
pub fn validate_directed_action(a: &DirectedAction) -> Result<ValidationReport, SemidirectError> {
    let g = &a.gamma;
    let np = a.p.len();
    let k = a.points.len();
    let name = |i: usize| g.name(a.p[i]).to_string();
    let fail = |condition, witness: Vec<String>| Err(SemidirectError::ConditionViolation { condition, witness });
    let mut report = ValidationReport::new("directed action");
    let e = match a.position(g.identity()) {
        Some(e) => e,
        None => return fail("P contains the identity", vec![g.name(g.identity()).into()]),
    };
    for i in 0..np {
        for j in 0..np {
            if a.position(g.mul(a.p[i], a.p[j])).is_none() {
                return fail("P is closed under multiplication", vec![name(i), name(j)]);
            }
        }
    }
    report.passed("submonoid");
    for i in 0..np {
        let mut seen: Vec<Option<usize>> = vec![None; k];
        for x in a.domain(i) {
            let y = a.t[i][x].unwrap();
            if let Some(x0) = seen[y] {
                return fail("T_p is injective", vec![name(i), a.points[x0].clone(), a.points[x].clone()]);
            }
            seen[y] = Some(x);
        }
    }
    report.passed("condition_1");
    if let Some(x) = (0..k).find(|&x| a.t[e][x] != Some(x)) {
        return fail("dom(e) = X and T_e = id", vec![name(e), a.points[x].clone()]);
    }
    report.passed("condition_2");
    for i in 0..np {
        for j in 0..np {
            let ij = a.position(g.mul(a.p[i], a.p[j])).unwrap();
            for x in 0..k {
                let composed = a.t[j][x].and_then(|y| a.t[i][y]);
                if composed != a.t[ij][x] {
                    return fail("T_pq = T_p ∘ T_q with matching domains", vec![name(i), name(j), a.points[x].clone()]);
                }
            }
        }
    }
    report.passed("condition_3");
    for i in 0..np {
        let ui = a.upper_bounds(i);
        for j in i + 1..np {
            let common: Vec<usize> = (0..k).filter(|&x| a.t[i][x].is_some() && a.t[j][x].is_some()).collect();
            if common.is_empty() {
                continue;
            }
            let uj = a.upper_bounds(j);
            let bounded = ui.iter().filter(|r| uj.contains(r)).any(|&r| common.iter().all(|&x| a.t[r][x].is_some()));
            if !bounded {
                return Err(SemidirectError::NotDirected(name(i), name(j)));
            }
        }
    }
    report.passed("directed");
    report.vacuous("basis_sets", "every subset of a finite discrete space is clopen");
    Ok(report)
}

/// The semidirect product groupoid with its labeling `c` (arrow to group element).
#[derive(Debug, Clone)]
pub struct SemidirectGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    pub gamma: Arc<FiniteGroup>,
    pub labeling: Vec<usize>,
}

/// Arrows `(x, p⁻¹q, y)` with `T_p x = T_q y`; `src = y`, `dst = x`.
pub fn build_semidirect_groupoid(a: &DirectedAction) -> Result<SemidirectGroupoid, SemidirectError> {
    validate_directed_action(a)?;
    let g = &a.gamma;
    let k = a.points.len();
    let mut triples = BTreeSet::new();
    for (i, &p) in a.p.iter().enumerate() {
        for (j, &q) in a.p.iter().enumerate() {
            let gamma = g.mul(g.inv(p), q);
            for x in a.domain(i) {
                for y in a.domain(j) {
                    if a.t[i][x] == a.t[j][y] {
                        triples.insert((x, gamma, y));
                    }
                }
            }
        }
    }
    let triples: Vec<(usize, usize, usize)> = triples.into_iter().collect();
    let index: HashMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let e = g.identity();
    let unit: Vec<usize> = (0..k).map(|x| index[&(x, e, x)]).collect();
    let names = triples
        .iter()
        .map(|&(x, c, y)| if c == e && x == y { a.points[x].clone() } else { format!("({},{},{})", a.points[x], g.name(c), a.points[y]) })
        .collect();
    let src = triples.iter().map(|&(_, _, y)| unit[y]).collect();
    let dst = triples.iter().map(|&(x, _, _)| unit[x]).collect();
    let mut raw = RawTables::new(names, unit.clone(), src, dst);
    for (i, &(x, c, y)) in triples.iter().enumerate() {
        for (j, &(y2, c2, z)) in triples.iter().enumerate() {
            if y == y2 {
                if let Some(&ij) = index.get(&(x, g.mul(c, c2), z)) {
                    raw.set(i, j, ij);
                }
            }
        }
        if let Some(&inv) = index.get(&(y, g.inv(c), x)) {
            raw.inv[i] = inv;
        }
    }
    raw.check_axioms()?;
    let groupoid = Arc::new(raw.into_groupoid());
    let labeling: Vec<usize> = triples.iter().map(|&(_, c, _)| c).collect();
    for (p, q) in groupoid.composable_pairs().pairs {
        if labeling[groupoid.compose(p, q).unwrap()] != g.mul(labeling[p], labeling[q]) {
            return Err(SemidirectError::LabelingNotHomomorphism(groupoid.name(p).into(), groupoid.name(q).into()));
        }
    }
    Ok(SemidirectGroupoid { groupoid, gamma: a.gamma.clone(), labeling })
}

/// A normalized 2-cocycle on a finite group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupCocycle {
    group: Arc<FiniteGroup>,
    /// `values[a * n + b] = ω(a, b)`.
    values: Vec<CircleValue>,
}

impl GroupCocycle {
    /// Validates the cocycle identity and normalization.
    pub fn new(group: Arc<FiniteGroup>, values: Vec<CircleValue>) -> Result<Self, SemidirectError> {
        let n = group.order();
        if values.len() != n * n {
            return Err(SemidirectError::Malformed(format!("group cocycle needs {} values", n * n)));
        }
        let out = Self { group, values };
        validate_cocycle(&out.on_group_groupoid(), DEFAULT_TOL)?;
        Ok(out)
    }

    pub fn from_fn(group: Arc<FiniteGroup>, f: impl Fn(usize, usize) -> CircleValue) -> Result<Self, SemidirectError> {
        let n = group.order();
        let values = (0..n * n).map(|i| f(i / n, i % n)).collect();
        Self::new(group, values)
    }

    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        Self { group, values: vec![CircleValue::one(); n * n] }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn at(&self, a: usize, b: usize) -> CircleValue {
        self.values[a * self.group.order() + b]
    }

    /// `ω · ∂b` with `∂b(a, b) = b(a) b(b) b(ab)⁻¹`.
    pub fn times_coboundary(&self, b: &[CircleValue]) -> Result<Self, SemidirectError> {
        let g = &self.group;
        let e = g.identity();
        let b1 = |x: usize| b[x].div(b[e]);
        Self::from_fn(g.clone(), |x, y| self.at(x, y).mul(b1(x)).mul(b1(y)).div(b1(g.mul(x, y))))
    }

    /// The same values as a cocycle on the one-unit groupoid of the group.
    pub fn on_group_groupoid(&self) -> TwoCocycle {
        let gg = Arc::new(make_group_groupoid(&self.group));
        TwoCocycle::from_fn(gg, |a, b| self.at(a, b))
    }
}

/// `ω̃(g₁, g₂) = ω(c(g₁), c(g₂))`.
pub fn induce_cocycle_from_group(gc: &GroupCocycle, sg: &SemidirectGroupoid) -> Result<TwoCocycle, SemidirectError> {
    if gc.group != sg.gamma {
        return Err(SemidirectError::Malformed("cocycle and labeling use different groups".into()));
    }
    let w = TwoCocycle::from_fn(sg.groupoid.clone(), |p, q| gc.at(sg.labeling[p], sg.labeling[q]));
    validate_cocycle(&w, DEFAULT_TOL)?;
    Ok(w)
}

/// `b ∘ c` for a 1-cochain `b` on the group.
pub fn induce_cochain_from_group(b: &[CircleValue], sg: &SemidirectGroupoid) -> Result<OneCochain, SemidirectError> {
    let e = sg.gamma.identity();
    let values = sg.labeling.iter().map(|&c| b[c].div(b[e])).collect();
    Ok(OneCochain::new(sg.groupoid.clone(), values)?)
}

/// A table-of-samples homotopy pulled back from group cocycles `ω_t`.
pub fn induce_homotopy(
    path: &[(Ratio<i64>, GroupCocycle)],
    sg: &SemidirectGroupoid,
) -> Result<CocycleHomotopy, SemidirectError> {
    let samples = path
        .iter()
        .map(|(t, gc)| Ok((*t, induce_cocycle_from_group(gc, sg)?)))
        .collect::<Result<Vec<_>, SemidirectError>>()?;
    Ok(CocycleHomotopy::table_of_samples(sg.groupoid.clone(), samples)?)
}

/// `ω(n, m) = exp(2πi Σ Q_ab n_a m_b / L)` on `Z_{m_1} × ... × Z_{m_k}`, `L = lcm(m_i)`.
///
/// The value depends only on residues iff `Q_ab m_a ≡ Q_ab m_b ≡ 0 (mod L)`.
pub fn bilinear_cocycle(moduli: &[usize], q: &[Vec<i64>]) -> Result<GroupCocycle, SemidirectError> {
    let k = moduli.len();
    if q.len() != k || q.iter().any(|r| r.len() != k) {
        return Err(SemidirectError::Malformed(format!("Q must be {k}×{k}")));
    }
    let group = Arc::new(FiniteGroup::abelian(moduli)?);
    let l = moduli.iter().fold(1i64, |acc, &m| acc.lcm(&(m as i64)));
    for a in 0..k {
        for b in 0..k {
            if (q[a][b] * moduli[a] as i64) % l != 0 || (q[a][b] * moduli[b] as i64) % l != 0 {
                return Err(SemidirectError::NotWellDefinedOnQuotient(a, b));
            }
        }
    }
    let coords: Vec<Vec<usize>> = (0..group.order()).map(|i| decode_mixed_radix(i, moduli)).collect();
    GroupCocycle::from_fn(group, |x, y| {
        let s: i64 = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .map(|(a, b)| q[a][b] * coords[x][a] as i64 * coords[y][b] as i64)
            .sum();
        CircleValue::turns(s.rem_euclid(l), l)
    })
}
