//! Groupoids of germs `[s, x]` and the cocycle they inherit from `ω`.

use std::sync::Arc;

use super::action::{check_action, SemigroupTwistedAction};
use super::{natural_order, SemigroupError};
use crate::circle::CircleValue;
use crate::cocycle::{validate_cocycle, TwoCocycle};
use crate::groupoid::{FiniteGroupoid, RawTables};
use crate::report::ValidationReport;

/// The groupoid of germs with the map `(s, x) ↦ [s, x]`.
#[derive(Debug, Clone)]
pub struct GermGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    /// `germ[s][x]`, defined for `x ∈ D_s`.
    germ: Vec<Vec<Option<usize>>>,
    /// Representatives `(s, x)` of each arrow.
    reps: Vec<Vec<(usize, usize)>>,
}

impl GermGroupoid {
    pub fn germ(&self, s: usize, x: usize) -> Option<usize> {
        self.germ[s][x]
    }

    pub fn representatives(&self, arrow: usize) -> &[(usize, usize)] {
        &self.reps[arrow]
    }

    /// `((s, x), arrow)` for every pair with `x ∈ D_s`, by element then point.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.germ
            .iter()
            .enumerate()
            .flat_map(|(s, row)| row.iter().enumerate().filter_map(move |(x, a)| a.map(|a| ((s, x), a))))
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Arrows `[s, x]` for `x ∈ D_s`, where `(s,x) ~ (t,x)` when `se = te` for
/// some idempotent `e` with `x ∈ D_e`; `src [s,x] = x`, `dst [s,x] = θ_s(x)`.
pub fn germ_groupoid(a: &SemigroupTwistedAction) -> Result<GermGroupoid, SemigroupError> {
    check_action(a, &mut ValidationReport::new("action"))?;
    let s = a.semigroup();
    let n = s.len();
    let k = a.space().len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|e| a.domain(e).into_iter().map(move |x| (e, x))).collect();
    let slot = |e: usize, x: usize| pairs.binary_search(&(e, x)).unwrap();
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    for x in 0..k {
        let elems: Vec<usize> = (0..n).filter(|&e| a.in_domain(e, x)).collect();
        let local: Vec<usize> = s.idempotents().iter().copied().filter(|&e| a.in_domain(e, x)).collect();
        for (i, &p) in elems.iter().enumerate() {
            for &q in &elems[i + 1..] {
                if local.iter().any(|&e| s.mul(p, e) == s.mul(q, e)) {
                    let (ra, rb) = (find(&mut parent, slot(p, x)), find(&mut parent, slot(q, x)));
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    // classes ordered by first representative; units are classes of idempotents
    let mut class_of = vec![usize::MAX; pairs.len()];
    let mut reps: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut root_class = vec![usize::MAX; pairs.len()];
    for i in 0..pairs.len() {
        let r = find(&mut parent, i);
        if root_class[r] == usize::MAX {
            root_class[r] = reps.len();
            reps.push(Vec::new());
        }
        class_of[i] = root_class[r];
        reps[root_class[r]].push(pairs[i]);
    }
    let m = reps.len();
    let mut unit_of = vec![usize::MAX; k];
    let mut names = Vec::with_capacity(m);
    for (c, rs) in reps.iter().enumerate() {
        let (e, x) = rs[0];
        if rs.iter().any(|&(e, _)| s.is_idempotent(e)) {
            unit_of[x] = c;
            names.push(a.point_name(x).to_string());
        } else {
            names.push(format!("[{},{}]", s.name(e), a.point_name(x)));
        }
    }
    if let Some(x) = unit_of.iter().position(|&u| u == usize::MAX) {
        return Err(SemigroupError::ActionViolation { condition: "every point has a unit germ", witness: vec![a.point_name(x).into()] });
    }
    let mut germ = vec![vec![None; k]; n];
    for (i, &(e, x)) in pairs.iter().enumerate() {
        germ[e][x] = Some(class_of[i]);
    }
    let src: Vec<usize> = reps.iter().map(|rs| unit_of[rs[0].1]).collect();
    let dst: Vec<usize> = reps.iter().map(|rs| unit_of[a.theta(rs[0].0, rs[0].1).unwrap()]).collect();
    let mut units: Vec<usize> = unit_of.clone();
    units.sort_unstable();
    let mut raw = RawTables::new(names, units, src.clone(), dst.clone());
    for g in 0..m {
        for h in 0..m {
            if src[g] != dst[h] {
                continue;
            }
            // [u, θ_t x]·[t, x] = [ut, x], the same class for every choice of representatives
            let mut product = None;
            for &(t, x) in &reps[h] {
                for &(u, _) in reps[g].iter().filter(|&&(_, p)| p == a.theta(t, x).unwrap()) {
                    let gh = germ[s.mul(u, t)][x];
                    if gh.is_none() || product.is_some_and(|p| Some(p) != gh) {
                        return Err(SemigroupError::ActionViolation {
                            condition: "products of germs are well defined",
                            witness: vec![s.name(u).into(), s.name(t).into(), a.point_name(x).into()],
                        });
                    }
                    product = gh;
                }
            }
            raw.set(g, h, product.expect("g has a representative at the range of h"));
        }
    }
    for (g, rs) in reps.iter().enumerate() {
        let (e, x) = rs[0];
        raw.inv[g] = germ[s.star(e)][a.theta(e, x).unwrap()].expect("θ_s(x) lies in D_s*");
    }
    raw.check_axioms()?;
    Ok(GermGroupoid { groupoid: Arc::new(raw.into_groupoid()), germ, reps })
}

/// `ω̂([s, θ_t x], [t, x]) = ω(s,t)(x)`, checked over every pair of representatives.
pub fn induced_cocycle_on_germs(a: &SemigroupTwistedAction, tol: f64) -> Result<(GermGroupoid, TwoCocycle), SemigroupError> {
    let gg = germ_groupoid(a)?;
    let g = gg.groupoid.clone();
    let sg = a.semigroup();
    let mut values = Vec::new();
    for (p, q) in g.composable_pairs().pairs {
        let mut first: Option<CircleValue> = None;
        for &(t, x) in gg.representatives(q) {
            let y = a.theta(t, x).unwrap();
            for &(s, _) in gg.representatives(p).iter().filter(|&&(_, z)| z == y) {
                let v = a.omega(s, t, x);
                match first {
                    None => first = Some(v),
                    Some(f) if f.deviation(&v) > tol => {
                        return Err(SemigroupError::IllDefinedGerm(
                            g.name(p).into(),
                            g.name(q).into(),
                            f.to_string(),
                            format!("{v} from ({}, {}) at {}", sg.name(s), sg.name(t), a.point_name(x)),
                        ));
                    }
                    Some(_) => {}
                }
            }
        }
        if let Some(v) = first {
            values.push((p, q, v));
        }
    }
    let w = TwoCocycle::from_entries(g.clone(), values)?;
    validate_cocycle(&w, tol)?;
    Ok((gg, w))
}

/// Lists `⋃ {D_e : e ∈ E, e ≤ s}` inside `D_{s*s}` for each `s`.
///
/// Every subset of a finite discrete space is closed, so each check passes.
pub fn hausdorff_check(a: &SemigroupTwistedAction) -> ValidationReport {
    let s = a.semigroup();
    let order = natural_order(s);
    let mut report = ValidationReport::new("hausdorff");
    let names = |xs: &[usize]| {
        let v: Vec<&str> = xs.iter().map(|&x| a.point_name(x)).collect();
        format!("{{{}}}", v.join(", "))
    };
    for e in 0..s.len() {
        let mut under: Vec<usize> = s
            .idempotents()
            .iter()
            .filter(|&&f| order.le(f, e))
            .flat_map(|&f| a.domain(f))
            .collect();
        under.sort_unstable();
        under.dedup();
        let ambient = a.domain(s.mul(s.star(e), e));
        report.passed_with(
            format!("closed[{}]", s.name(e)),
            format!("{} closed in {}", names(&under), names(&ambient)),
        );
    }
    report
}
