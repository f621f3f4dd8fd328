//! Finite groupoids as explicit composition tables.
//!
//! Arrows are addressed by dense indices `0..n`. Units are identity arrows and
//! also appear in the arrow list under their own name. Topology is discrete, so
//! the étale and ample conditions hold for every groupoid built here.

mod constructors;
pub mod group;
mod iso;

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use thiserror::Error;

use crate::report::{ErrorCode, ValidationReport};

pub use constructors::{
    make_group_groupoid, make_pair_groupoid, make_transformation_groupoid, GroupAction,
};
pub use group::{FiniteGroup, GroupFile};
pub use iso::{brute_force_isomorphic, is_isomorphism, Isomorphism, DEFAULT_ISO_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `gh` is defined only when `src(g) = dst(h)`.
    Composability,
    /// `gh` is defined for every pair with `src(g) = dst(h)`.
    Totality,
    /// `src(gh) = src(h)` and `dst(gh) = dst(g)`.
    SourceRange,
    /// Units are idempotent and act as identities.
    UnitLaw,
    /// `g g^-1 = dst(g)` and `g^-1 g = src(g)`.
    InverseLaw,
    /// `(g^-1)^-1 = g`.
    Involution,
    /// `g^-1 (gh) = h` and `(gh) h^-1 = g`.
    Cancellation,
    Associativity,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axiom::Composability => "composability",
            Axiom::Totality => "totality of composition",
            Axiom::SourceRange => "source/range of products",
            Axiom::UnitLaw => "unit law",
            Axiom::InverseLaw => "inverse law",
            Axiom::Involution => "involutive inverse",
            Axiom::Cancellation => "cancellation",
            Axiom::Associativity => "associativity",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupoidError {
    #[error("malformed table: {0}")]
    MalformedTable(String),
    #[error("axiom violated ({axiom}): witnesses {witnesses:?}")]
    AxiomViolation { axiom: Axiom, witnesses: Vec<String> },
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not a group action: {0}")]
    NotAnAction(String),
    #[error("size cap exceeded: {size} arrows > limit {limit}")]
    SizeCapExceeded { size: usize, limit: usize },
    #[error("unknown unit {0}")]
    UnknownUnit(String),
}

impl ErrorCode for GroupoidError {
    fn code(&self) -> &'static str {
        match self {
            GroupoidError::MalformedTable(_) => "MalformedTable",
            GroupoidError::AxiomViolation { .. } => "AxiomViolation",
            GroupoidError::NotAGroup(_) => "NotAGroup",
            GroupoidError::NotAnAction(_) => "NotAnAction",
            GroupoidError::SizeCapExceeded { .. } => "SizeCapExceeded",
            GroupoidError::UnknownUnit(_) => "UnknownUnit",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ArrowDecl {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// The groupoid file format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupoidFile {
    pub units: Vec<String>,
    pub arrows: Vec<ArrowDecl>,
    pub compose: Vec<[String; 3]>,
    pub inv: BTreeMap<String, String>,
}

const NONE: u32 = u32::MAX;

/// A validated finite groupoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    names: Vec<String>,
    index: HashMap<String, usize>,
    units: Vec<usize>,
    is_unit: Vec<bool>,
    src: Vec<usize>,
    dst: Vec<usize>,
    compose: Vec<u32>,
    inv: Vec<usize>,
    by_src: Vec<Vec<usize>>,
    by_dst: Vec<Vec<usize>>,
}

/// Index-resolved tables that have not yet been checked against the axioms.
#[derive(Debug, Clone)]
pub(crate) struct RawTables {
    pub names: Vec<String>,
    pub units: Vec<usize>,
    pub src: Vec<usize>,
    pub dst: Vec<usize>,
    pub compose: Vec<u32>,
    pub inv: Vec<usize>,
}

impl RawTables {
    pub(crate) fn new(names: Vec<String>, units: Vec<usize>, src: Vec<usize>, dst: Vec<usize>) -> Self {
        let n = names.len();
        Self { names, units, src, dst, compose: vec![NONE; n * n], inv: vec![usize::MAX; n] }
    }

    pub(crate) fn set(&mut self, g: usize, h: usize, gh: usize) {
        let n = self.names.len();
        self.compose[g * n + h] = gh as u32;
    }

    fn get(&self, g: usize, h: usize) -> Option<usize> {
        let v = self.compose[g * self.names.len() + h];
        (v != NONE).then_some(v as usize)
    }

    fn witness(&self, ids: &[usize]) -> Vec<String> {
        ids.iter().map(|&i| self.names[i].clone()).collect()
    }

    fn violation(&self, axiom: Axiom, ids: &[usize]) -> GroupoidError {
        GroupoidError::AxiomViolation { axiom, witnesses: self.witness(ids) }
    }

    /// Checks every groupoid axiom, returning the first violation.
    pub(crate) fn check_axioms(&self) -> Result<ValidationReport, GroupoidError> {
        let n = self.names.len();
        let mut report = ValidationReport::new("groupoid");
        for g in 0..n {
            for h in 0..n {
                if self.get(g, h).is_some() && self.src[g] != self.dst[h] {
                    return Err(self.violation(Axiom::Composability, &[g, h]));
                }
            }
        }
        report.passed("composability");
        for g in 0..n {
            for h in 0..n {
                if self.src[g] == self.dst[h] && self.get(g, h).is_none() {
                    return Err(self.violation(Axiom::Totality, &[g, h]));
                }
            }
        }
        report.passed("totality");
        for g in 0..n {
            for h in 0..n {
                if let Some(gh) = self.get(g, h) {
                    if self.src[gh] != self.src[h] || self.dst[gh] != self.dst[g] {
                        return Err(self.violation(Axiom::SourceRange, &[g, h, gh]));
                    }
                }
            }
        }
        report.passed("source_range");
        for &u in &self.units {
            if self.get(u, u) != Some(u) {
                return Err(self.violation(Axiom::UnitLaw, &[u]));
            }
        }
        for g in 0..n {
            if self.get(self.dst[g], g) != Some(g) || self.get(g, self.src[g]) != Some(g) {
                return Err(self.violation(Axiom::UnitLaw, &[g]));
            }
        }
        report.passed("unit_law");
        for g in 0..n {
            let gi = self.inv[g];
            let is_unit = self.units.contains(&g);
            if (is_unit && gi != g)
                || self.get(g, gi) != Some(self.dst[g])
                || self.get(gi, g) != Some(self.src[g])
            {
                return Err(self.violation(Axiom::InverseLaw, &[g]));
            }
        }
        report.passed("inverse_law");
        for g in 0..n {
            if self.inv[self.inv[g]] != g {
                return Err(self.violation(Axiom::Involution, &[g]));
            }
        }
        report.passed("involution");
        for g in 0..n {
            for h in 0..n {
                if let Some(gh) = self.get(g, h) {
                    if self.get(self.inv[g], gh) != Some(h) || self.get(gh, self.inv[h]) != Some(g) {
                        return Err(self.violation(Axiom::Cancellation, &[g, h]));
                    }
                }
            }
        }
        report.passed("cancellation");
        // arrows k with (gh)k = g(hk) for all composable g, h are closed under
        // composition, so checking k over a generating set suffices
        let mut by_src = vec![Vec::new(); n];
        for g in 0..n {
            by_src[self.src[g]].push(g);
        }
        for k in self.generating_set() {
            for &h in &by_src[self.dst[k]] {
                let hk = self.get(h, k).expect("totality checked");
                for &g in &by_src[self.dst[h]] {
                    let gh = self.get(g, h).expect("totality checked");
                    if self.get(gh, k) != self.get(g, hk) {
                        return Err(self.violation(Axiom::Associativity, &[g, h, k]));
                    }
                }
            }
        }
        report.passed("associativity");
        report.vacuous("etale", "finite discrete topology: range map is a local homeomorphism");
        report.vacuous("ample_hausdorff", "finite discrete topology: unit space is totally disconnected");
        Ok(report)
    }

    /// Greedy set whose composable products reach every arrow.
    fn generating_set(&self) -> Vec<usize> {
        let n = self.names.len();
        let mut gens: Vec<usize> = Vec::new();
        let mut reached = vec![false; n];
        let mut words: Vec<usize> = Vec::new();
        for a in 0..n {
            if reached[a] {
                continue;
            }
            gens.push(a);
            let mut queue: Vec<usize> = words.iter().filter_map(|&w| self.get(w, a)).collect();
            queue.push(a);
            while let Some(w) = queue.pop() {
                if reached[w] {
                    continue;
                }
                reached[w] = true;
                words.push(w);
                queue.extend(gens.iter().filter_map(|&t| self.get(w, t)).filter(|&x| !reached[x]));
            }
        }
        gens
    }

    pub(crate) fn into_groupoid(self) -> FiniteGroupoid {
        let n = self.names.len();
        let index = self.names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut is_unit = vec![false; n];
        for &u in &self.units {
            is_unit[u] = true;
        }
        let mut by_src = vec![Vec::new(); n];
        let mut by_dst = vec![Vec::new(); n];
        for g in 0..n {
            by_src[self.src[g]].push(g);
            by_dst[self.dst[g]].push(g);
        }
        FiniteGroupoid {
            names: self.names,
            index,
            units: self.units,
            is_unit,
            src: self.src,
            dst: self.dst,
            compose: self.compose,
            inv: self.inv,
            by_src,
            by_dst,
        }
    }
}

fn resolve(file: &GroupoidFile) -> Result<RawTables, GroupoidError> {
    let malformed = |m: String| GroupoidError::MalformedTable(m);
    let mut index = HashMap::new();
    for (i, a) in file.arrows.iter().enumerate() {
        if index.insert(a.id.clone(), i).is_some() {
            return Err(malformed(format!("duplicate arrow id {}", a.id)));
        }
    }
    let lookup = |name: &str, what: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| GroupoidError::MalformedTable(format!("{what} refers to unknown arrow {name}")))
    };
    let mut units = Vec::with_capacity(file.units.len());
    for u in &file.units {
        let i = lookup(u, "unit list")?;
        let decl = &file.arrows[i];
        if decl.src != *u || decl.dst != *u {
            return Err(malformed(format!("identity arrow {u} must have src = dst = {u}")));
        }
        if units.contains(&i) {
            return Err(malformed(format!("duplicate unit {u}")));
        }
        units.push(i);
    }
    let mut src = Vec::with_capacity(file.arrows.len());
    let mut dst = Vec::with_capacity(file.arrows.len());
    for a in &file.arrows {
        let s = lookup(&a.src, "src")?;
        let d = lookup(&a.dst, "dst")?;
        if !units.contains(&s) || !units.contains(&d) {
            return Err(malformed(format!("arrow {} has endpoints outside the unit list", a.id)));
        }
        src.push(s);
        dst.push(d);
    }
    let names = file.arrows.iter().map(|a| a.id.clone()).collect();
    let mut raw = RawTables::new(names, units, src, dst);
    for [g, h, gh] in &file.compose {
        let (g, h, gh) = (lookup(g, "compose")?, lookup(h, "compose")?, lookup(gh, "compose")?);
        match raw.get(g, h) {
            Some(prev) if prev != gh => {
                return Err(malformed(format!(
                    "conflicting products for ({}, {})",
                    raw.names[g], raw.names[h]
                )))
            }
            _ => raw.set(g, h, gh),
        }
    }
    for (g, gi) in &file.inv {
        let (g, gi) = (lookup(g, "inv")?, lookup(gi, "inv")?);
        raw.inv[g] = gi;
    }
    if let Some(g) = raw.inv.iter().position(|&x| x == usize::MAX) {
        return Err(malformed(format!("no inverse listed for {}", raw.names[g])));
    }
    Ok(raw)
}

/// Checks a groupoid file: ids must resolve, then every axiom must hold.
pub fn validate_groupoid(file: &GroupoidFile) -> Result<ValidationReport, GroupoidError> {
    resolve(file)?.check_axioms()
}

/// Sequence of composable pairs `(g, h)` with `src(g) = dst(h)`, ordered by `g` then `h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposablePairs {
    pub pairs: Vec<(usize, usize)>,
}

impl FiniteGroupoid {
    pub fn from_file(file: &GroupoidFile) -> Result<Self, GroupoidError> {
        let raw = resolve(file)?;
        raw.check_axioms()?;
        Ok(raw.into_groupoid())
    }

    pub fn to_file(&self) -> GroupoidFile {
        let n = self.len();
        let arrows = (0..n)
            .map(|g| ArrowDecl {
                id: self.names[g].clone(),
                src: self.names[self.src[g]].clone(),
                dst: self.names[self.dst[g]].clone(),
            })
            .collect();
        let compose = self
            .composable_pairs()
            .pairs
            .into_iter()
            .map(|(g, h)| {
                [self.names[g].clone(), self.names[h].clone(), self.names[self.compose(g, h).unwrap()].clone()]
            })
            .collect();
        let inv = (0..n).map(|g| (self.names[g].clone(), self.names[self.inv[g]].clone())).collect();
        GroupoidFile {
            units: self.units.iter().map(|&u| self.names[u].clone()).collect(),
            arrows,
            compose,
            inv,
        }
    }

    /// Number of arrows (units included).
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn is_unit(&self, g: usize) -> bool {
        self.is_unit[g]
    }

    pub fn src(&self, g: usize) -> usize {
        self.src[g]
    }

    pub fn dst(&self, g: usize) -> usize {
        self.dst[g]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        let v = self.compose[g * self.len() + h];
        (v != NONE).then_some(v as usize)
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// `G_u`: arrows with source `u`.
    pub fn arrows_from(&self, u: usize) -> &[usize] {
        &self.by_src[u]
    }

    /// `G^u`: arrows with range `u`.
    pub fn arrows_to(&self, u: usize) -> &[usize] {
        &self.by_dst[u]
    }

    pub fn composable_pairs(&self) -> ComposablePairs {
        let mut pairs = Vec::new();
        for g in 0..self.len() {
            for &h in self.arrows_to(self.src[g]) {
                pairs.push((g, h));
            }
        }
        ComposablePairs { pairs }
    }

    /// Isotropy group `G_u^u` at the unit `u`, with elements named as the arrows.
    pub fn isotropy(&self, u: usize) -> Result<FiniteGroup, GroupoidError> {
        if u >= self.len() || !self.is_unit[u] {
            return Err(GroupoidError::UnknownUnit(
                self.names.get(u).cloned().unwrap_or_else(|| u.to_string()),
            ));
        }
        let members: Vec<usize> = self.by_src[u].iter().copied().filter(|&g| self.dst[g] == u).collect();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let table = members
            .iter()
            .map(|&a| members.iter().map(|&b| pos[&self.compose(a, b).unwrap()]).collect())
            .collect();
        FiniteGroup::from_table(members.iter().map(|&g| self.names[g].clone()).collect(), table)
    }

    /// Orbit decomposition: one entry per transitive component, listing its
    /// arrows in increasing index order. Components are ordered by their
    /// smallest arrow index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut root: Vec<usize> = (0..n).collect();
        fn find(root: &mut [usize], mut x: usize) -> usize {
            while root[x] != x {
                root[x] = root[root[x]];
                x = root[x];
            }
            x
        }
        for g in 0..n {
            let a = find(&mut root, self.src[g]);
            let b = find(&mut root, self.dst[g]);
            if a != b {
                root[a.max(b)] = a.min(b);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for g in 0..n {
            let r = find(&mut root, self.src[g]);
            by_root.entry(r).or_default().push(g);
        }
        let mut comps: Vec<Vec<usize>> = by_root.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Disjoint union; arrow `x` of part `i` is renamed `i:x`.
    pub fn disjoint_union(parts: &[&FiniteGroupoid]) -> FiniteGroupoid {
        let total: usize = parts.iter().map(|p| p.len()).sum();
        let mut names = Vec::with_capacity(total);
        let (mut units, mut src, mut dst, mut inv) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
        let mut offset = 0;
        let mut products = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            for g in 0..p.len() {
                names.push(format!("{i}:{}", p.names[g]));
                src.push(p.src[g] + offset);
                dst.push(p.dst[g] + offset);
                inv.push(p.inv[g] + offset);
            }
            units.extend(p.units.iter().map(|&u| u + offset));
            for (g, h) in p.composable_pairs().pairs {
                products.push((g + offset, h + offset, p.compose(g, h).unwrap() + offset));
            }
            offset += p.len();
        }
        let mut raw = RawTables::new(names, units, src, dst);
        for (g, h, gh) in products {
            raw.set(g, h, gh);
        }
        raw.inv = inv;
        raw.into_groupoid()
    }

    /// The same groupoid with arrows listed in a different order: arrow `g`
    /// of `self` becomes arrow `perm[g]` of the result.
    pub fn relabeled(&self, perm: &[usize]) -> FiniteGroupoid {
        let n = self.len();
        assert_eq!(perm.len(), n, "permutation length must match arrow count");
        let mut names = vec![String::new(); n];
        let (mut src, mut dst, mut inv) = (vec![0; n], vec![0; n], vec![0; n]);
        for g in 0..n {
            names[perm[g]] = self.names[g].clone();
            src[perm[g]] = perm[self.src[g]];
            dst[perm[g]] = perm[self.dst[g]];
            inv[perm[g]] = perm[self.inv[g]];
        }
        let mut units: Vec<usize> = self.units.iter().map(|&u| perm[u]).collect();
        units.sort_unstable();
        let mut raw = RawTables::new(names, units, src, dst);
        for (g, h) in self.composable_pairs().pairs {
            raw.set(perm[g], perm[h], perm[self.compose(g, h).unwrap()]);
        }
        raw.inv = inv;
        raw.into_groupoid()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_file() -> GroupoidFile {
        make_group_groupoid(&FiniteGroup::cyclic(2)).to_file()
    }

    /// The Steiner loop of the affine plane over Z_3: `x·x = e`, `x·y = -x-y`.
    fn steiner_loop() -> RawTables {
        let pts: Vec<(usize, usize)> = (0..9).map(|i| (i / 3, i % 3)).collect();
        let mut names = vec!["e".to_string()];
        names.extend(pts.iter().map(|p| format!("{p:?}")));
        let mut raw = RawTables::new(names, vec![0], vec![0; 10], vec![0; 10]);
        for a in 0..10 {
            raw.inv[a] = a;
            raw.set(0, a, a);
            raw.set(a, 0, a);
        }
        for (i, &(x1, x2)) in pts.iter().enumerate() {
            for (j, &(y1, y2)) in pts.iter().enumerate() {
                let prod = if i == j { 0 } else { 1 + ((6 - x1 - y1) % 3) * 3 + (6 - x2 - y2) % 3 };
                raw.set(i + 1, j + 1, prod);
            }
        }
        raw
    }

    #[test]
    fn non_associative_inverse_property_loop_is_rejected() {
        match steiner_loop().check_axioms() {
            Err(GroupoidError::AxiomViolation { axiom: Axiom::Associativity, witnesses }) => {
                let raw = steiner_loop();
                let ix: Vec<usize> = witnesses.iter().map(|w| raw.names.iter().position(|n| n == w).unwrap()).collect();
                let gh = raw.get(ix[0], ix[1]).unwrap();
                let hk = raw.get(ix[1], ix[2]).unwrap();
                assert_ne!(raw.get(gh, ix[2]), raw.get(ix[0], hk));
            }
            other => panic!("expected an associativity violation, got {other:?}"),
        }
    }

    #[test]
    fn generating_sets_reach_every_arrow() {
        for g in [make_pair_groupoid(4), make_group_groupoid(&FiniteGroup::abelian(&[2, 6]).unwrap())] {
            let raw = RawTables {
                names: g.names.clone(),
                units: g.units.clone(),
                src: g.src.clone(),
                dst: g.dst.clone(),
                compose: g.compose.clone(),
                inv: g.inv.clone(),
            };
            let gens = raw.generating_set();
            assert!(gens.len() < g.len());
            let mut reached: Vec<usize> = gens.clone();
            let mut i = 0;
            while i < reached.len() {
                for &t in &gens {
                    if let Some(x) = g.compose(reached[i], t) {
                        if !reached.contains(&x) {
                            reached.push(x);
                        }
                    }
                }
                i += 1;
            }
            assert_eq!(reached.len(), g.len());
        }
    }

    #[test]
    fn pair_groupoid_on_three_points_validates() {
        let g = make_pair_groupoid(3);
        let report = validate_groupoid(&g.to_file()).unwrap();
        assert!(report.check("associativity").is_some());
        assert_eq!(report.check("etale").unwrap().outcome, crate::report::Outcome::Vacuous);
    }

    #[test]
    fn product_across_non_composable_pair_is_rejected() {
        let mut file = make_pair_groupoid(2).to_file();
        // (1,2) has src 2; (1,1) has dst 1, so they are not composable.
        file.compose.push(["(1,2)".into(), "1".into(), "(1,2)".into()]);
        let err = validate_groupoid(&file).unwrap_err();
        assert!(matches!(err, GroupoidError::AxiomViolation { axiom: Axiom::Composability, .. }), "{err}");
    }

    #[test]
    fn wrong_inverse_in_z2_names_the_arrow() {
        let mut file = z2_file();
        file.inv.insert("1".into(), "0".into());
        match validate_groupoid(&file).unwrap_err() {
            GroupoidError::AxiomViolation { axiom, witnesses } => {
                assert_eq!(axiom, Axiom::InverseLaw);
                assert_eq!(witnesses, vec!["1".to_string()]);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn dangling_ids_are_malformed() {
        let mut file = z2_file();
        file.compose.push(["1".into(), "x".into(), "1".into()]);
        assert!(matches!(validate_groupoid(&file), Err(GroupoidError::MalformedTable(_))));

        let mut file = z2_file();
        file.inv.remove("1");
        assert!(matches!(validate_groupoid(&file), Err(GroupoidError::MalformedTable(_))));
    }

    #[test]
    fn missing_product_violates_totality() {
        let mut file = z2_file();
        file.compose.retain(|t| !(t[0] == "1" && t[1] == "1"));
        assert!(matches!(
            validate_groupoid(&file),
            Err(GroupoidError::AxiomViolation { axiom: Axiom::Totality, .. })
        ));
    }

    #[test]
    fn composable_pair_counts() {
        let discrete = make_transformation_groupoid(&GroupAction::trivial(4)).unwrap();
        assert_eq!(discrete.composable_pairs().pairs.len(), 4);
        let z5 = make_group_groupoid(&FiniteGroup::cyclic(5));
        assert_eq!(z5.composable_pairs().pairs.len(), 25);
        // brute-force count of pairs for the pair groupoid on 3 points
        let g = make_pair_groupoid(3);
        let brute = (0..g.len())
            .flat_map(|a| (0..g.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| g.src(a) == g.dst(b))
            .count();
        assert_eq!(brute, 27);
        assert_eq!(g.composable_pairs().pairs.len(), brute);
    }

    #[test]
    fn isotropy_examples() {
        let pair = make_pair_groupoid(3);
        for &u in pair.units() {
            assert_eq!(pair.isotropy(u).unwrap().order(), 1);
        }
        let klein = FiniteGroup::abelian(&[2, 2]).unwrap();
        let gg = make_group_groupoid(&klein);
        assert_eq!(gg.isotropy(gg.units()[0]).unwrap().order(), 4);

        let swap = make_transformation_groupoid(&GroupAction::z2_swap()).unwrap();
        let u = swap.index_of("1").unwrap();
        let fixing: Vec<_> =
            (0..swap.len()).filter(|&g| swap.src(g) == u && swap.dst(g) == u).collect();
        assert_eq!(fixing, vec![u]);
        assert_eq!(swap.isotropy(u).unwrap().order(), 1);
        assert!(swap.isotropy(swap.index_of("(1,1)").unwrap()).is_err());
    }

    #[test]
    fn components_of_a_disjoint_union() {
        let a = make_pair_groupoid(2);
        let b = make_group_groupoid(&FiniteGroup::cyclic(3));
        let u = FiniteGroupoid::disjoint_union(&[&a, &b]);
        u.clone().to_file();
        validate_groupoid(&u.to_file()).unwrap();
        let comps = u.components();
        assert_eq!(comps.iter().map(Vec::len).collect::<Vec<_>>(), vec![4, 3]);
    }

    #[test]
    fn relabeling_preserves_validity() {
        let g = make_pair_groupoid(3);
        let n = g.len();
        let perm: Vec<usize> = (0..n).map(|i| (i * 4 + 1) % n).collect();
        let r = g.relabeled(&perm);
        validate_groupoid(&r.to_file()).unwrap();
        assert_eq!(r.name(perm[0]), g.name(0));
    }
}
