//! Central extensions `C_m -> Σ_ω -> G` built from `C_m`-valued cocycles.

use std::sync::Arc;
use thiserror::Error;

use crate::circle::CircleValue;
use crate::cocycle::{validate_cocycle, CocycleError, OneCochain, TwoCocycle, DEFAULT_TOL};
use crate::groupoid::{FiniteGroupoid, GroupoidError, RawTables};
use crate::report::{ErrorCode, ValidationReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TwistError {
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error("extension condition ({condition}) fails: {witness}")]
    ExtensionViolation { condition: u8, witness: String },
    #[error("section does not choose an element over {0}")]
    InvalidSection(String),
}

impl ErrorCode for TwistError {
    fn code(&self) -> &'static str {
        match self {
            TwistError::Cocycle(e) => e.code(),
            TwistError::Groupoid(e) => e.code(),
            TwistError::ExtensionViolation { .. } => "ExtensionViolation",
            TwistError::InvalidSection(_) => "InvalidSection",
        }
    }
}

/// A twist over `G` with fibres `C_m`, stored as the total groupoid with its
/// inclusion and projection maps.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTwist {
    base: Arc<FiniteGroupoid>,
    m: usize,
    total: Arc<FiniteGroupoid>,
    /// `inclusion[u][k]` is `i(u, exp(2πik/m))` for units `u` of the base; empty for other arrows.
    inclusion: Vec<Vec<usize>>,
    projection: Vec<usize>,
    /// The section `g -> (g, 0)`.
    section: Vec<usize>,
}

/// `Σ_ω` with arrows `(g,k)`, `k mod m`, and
/// `(g,k)(h,l) = (gh, k + l + ω(g,h))`, `(g,k)^-1 = (g^-1, -k - ω(g^-1,g))`.
/// The units `(u,0)` keep the base unit names.
pub fn build_sigma_omega(w: &TwoCocycle, m: usize) -> Result<FiniteTwist, TwistError> {
    assert!(m >= 1, "coefficient order must be positive");
    validate_cocycle(w, DEFAULT_TOL)?;
    let g = w.groupoid().clone();
    let n = g.len();
    let mi = m as i64;
    let mut k = vec![0i64; n * n];
    for (a, b, v) in w.entries() {
        k[a * n + b] = v.exponent_mod(mi).ok_or_else(|| CocycleError::NotRootOfUnity {
            at: format!("({}, {})", g.name(a), g.name(b)),
            value: v.to_string(),
            m: mi,
        })?;
    }
    let id = |a: usize, x: i64| a * m + x.rem_euclid(mi) as usize;
    let mut names = Vec::with_capacity(n * m);
    let (mut src, mut dst) = (Vec::with_capacity(n * m), Vec::with_capacity(n * m));
    for a in 0..n {
        for x in 0..mi {
            names.push(if g.is_unit(a) && x == 0 {
                g.name(a).to_string()
            } else {
                format!("({},{x})", g.name(a))
            });
            src.push(id(g.src(a), 0));
            dst.push(id(g.dst(a), 0));
        }
    }
    let units = g.units().iter().map(|&u| id(u, 0)).collect();
    let mut raw = RawTables::new(names, units, src, dst);
    for (a, b) in g.composable_pairs().pairs {
        let ab = g.compose(a, b).unwrap();
        for x in 0..mi {
            for y in 0..mi {
                raw.set(id(a, x), id(b, y), id(ab, x + y + k[a * n + b]));
            }
        }
    }
    for a in 0..n {
        let ai = g.inv(a);
        for x in 0..mi {
            raw.inv[id(a, x)] = id(ai, -x - k[ai * n + a]);
        }
    }
    raw.check_axioms()?;
    let total = Arc::new(raw.into_groupoid());
    let inclusion = (0..n)
        .map(|a| if g.is_unit(a) { (0..mi).map(|x| id(a, x)).collect() } else { Vec::new() })
        .collect();
    let projection = (0..n * m).map(|s| s / m).collect();
    let section = (0..n).map(|a| id(a, 0)).collect();
    Ok(FiniteTwist { base: g, m, total, inclusion, projection, section })
}

impl FiniteTwist {
    /// Assembles a twist from explicit maps without checking them; see [`validate_twist`].
    pub fn from_parts(
        base: Arc<FiniteGroupoid>,
        m: usize,
        total: Arc<FiniteGroupoid>,
        inclusion: Vec<Vec<usize>>,
        projection: Vec<usize>,
        section: Vec<usize>,
    ) -> Self {
        Self { base, m, total, inclusion, projection, section }
    }

    pub fn base(&self) -> &Arc<FiniteGroupoid> {
        &self.base
    }

    pub fn total(&self) -> &Arc<FiniteGroupoid> {
        &self.total
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `i(u, exp(2πik/m))` for a base unit `u`.
    pub fn include(&self, u: usize, k: i64) -> usize {
        self.inclusion[u][k.rem_euclid(self.m as i64) as usize]
    }

    pub fn inclusion(&self) -> &[Vec<usize>] {
        &self.inclusion
    }

    pub fn project(&self, s: usize) -> usize {
        self.projection[s]
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// `z·σ = i(r(σ), z)σ` for `z = exp(2πik/m)`.
    pub fn act(&self, k: i64, s: usize) -> usize {
        let u = self.projection[self.total.dst(s)];
        self.total.compose(self.include(u, k), s).expect("i(r(σ), z) is composable with σ")
    }

    /// `(u, k)` with `i(u, exp(2πik/m)) = s`, if `s` lies in the image of `i`.
    fn uninclude(&self, s: usize) -> Option<(usize, i64)> {
        let u = self.projection[s];
        let k = self.inclusion.get(u)?.iter().position(|&x| x == s)?;
        Some((u, k as i64))
    }

    /// The chosen section; `g -> (g, 0)` for twists from [`build_sigma_omega`].
    pub fn canonical_section(&self) -> &[usize] {
        &self.section
    }

    /// The section `s·b`: `g -> i(r(g), b(g)) s(g)`, for `b` valued in `C_m`.
    pub fn scaled_section(&self, section: &[usize], b: &OneCochain) -> Result<Vec<usize>, TwistError> {
        let m = self.m as i64;
        (0..self.base.len())
            .map(|g| {
                let v = b.get(g);
                let k = v.exponent_mod(m).ok_or_else(|| CocycleError::NotRootOfUnity {
                    at: self.base.name(g).into(),
                    value: v.to_string(),
                    m,
                })?;
                Ok(self.act(k, section[g]))
            })
            .collect()
    }
}

/// `ω(g,h) = i^-1(s(gh)^-1 s(g) s(h))`, after replacing `s` on units by the
/// unit of `Σ` above each unit.
pub fn section_cocycle(t: &FiniteTwist, section: &[usize]) -> Result<TwoCocycle, TwistError> {
    let (g, sigma) = (&t.base, &t.total);
    if section.len() != g.len() {
        return Err(TwistError::InvalidSection("section has the wrong length".into()));
    }
    let mut s = section.to_vec();
    for (a, &sa) in s.iter().enumerate() {
        if sa >= sigma.len() || t.projection[sa] != a {
            return Err(TwistError::InvalidSection(g.name(a).into()));
        }
    }
    for &u in g.units() {
        s[u] = sigma.dst(s[u]);
    }
    let m = t.m as i64;
    let entries = g
        .composable_pairs()
        .pairs
        .into_iter()
        .map(|(a, b)| {
            let ab = g.compose(a, b).unwrap();
            let prod = sigma.compose(s[a], s[b]).expect("sections of composable pairs compose");
            let q = sigma.compose(sigma.inv(s[ab]), prod).expect("same range");
            let (_, k) = t.uninclude(q).ok_or_else(|| TwistError::ExtensionViolation {
                condition: 1,
                witness: format!("{} is not in the image of i", sigma.name(q)),
            })?;
            Ok((a, b, CircleValue::turns(k, m)))
        })
        .collect::<Result<Vec<_>, TwistError>>()?;
    Ok(TwoCocycle::from_entries(g.clone(), entries)?)
}

/// The cocycle of the section `g -> (g, 0)`.
pub fn canonical_section_cocycle(t: &FiniteTwist) -> Result<TwoCocycle, TwistError> {
    section_cocycle(t, t.canonical_section())
}

/// Checks the three twist conditions: `i` is an injective homomorphism onto
/// `j^-1(G^0)`, `j` is a surjective homomorphism with fibres of size `m`, and
/// the image of `i` is central.
pub fn validate_twist(t: &FiniteTwist) -> Result<ValidationReport, TwistError> {
    let (g, sigma, m) = (&*t.base, &*t.total, t.m as i64);
    let violation = |condition: u8, witness: String| Err(TwistError::ExtensionViolation { condition, witness });
    let mut report = ValidationReport::new("twist");
    if t.projection.len() != sigma.len() || t.inclusion.len() != g.len() {
        return violation(2, "maps have the wrong domain size".into());
    }

    // condition (1)
    let mut hit = vec![false; sigma.len()];
    for a in 0..g.len() {
        let fibre = &t.inclusion[a];
        if !g.is_unit(a) {
            if !fibre.is_empty() {
                return violation(1, format!("i defined on non-unit {}", g.name(a)));
            }
            continue;
        }
        if fibre.len() != t.m {
            return violation(1, format!("i({}, ·) has {} values, expected {m}", g.name(a), fibre.len()));
        }
        for (k, &s) in fibre.iter().enumerate() {
            if s >= sigma.len() || std::mem::replace(&mut hit[s], true) {
                return violation(1, format!("i is not injective at ({}, {k})", g.name(a)));
            }
            if t.projection[s] != a {
                return violation(1, format!("j(i({}, {k})) != {}", g.name(a), g.name(a)));
            }
            for (l, &s2) in fibre.iter().enumerate() {
                if sigma.compose(s, s2) != Some(fibre[(k + l) % t.m]) {
                    return violation(1, format!("i is not multiplicative at ({}, {k}, {l})", g.name(a)));
                }
            }
        }
    }
    for (s, &reached) in hit.iter().enumerate() {
        if g.is_unit(t.projection[s]) && !reached {
            return violation(1, format!("{} lies over a unit but is not in the image of i", sigma.name(s)));
        }
    }
    report.passed("inclusion_injective_onto_unit_fibres");

    // condition (2)
    let mut fibre_size = vec![0usize; g.len()];
    for &p in &t.projection {
        if p >= g.len() {
            return violation(2, format!("projection value {p} out of range"));
        }
        fibre_size[p] += 1;
    }
    if let Some(a) = (0..g.len()).find(|&a| fibre_size[a] != t.m) {
        return violation(2, format!("fibre over {} has {} elements, expected {m}", g.name(a), fibre_size[a]));
    }
    for s in 0..sigma.len() {
        if sigma.is_unit(s) != g.is_unit(t.projection[s]) && sigma.is_unit(s) {
            return violation(2, format!("unit {} maps to a non-unit", sigma.name(s)));
        }
    }
    for s in 0..sigma.len() {
        for r in 0..sigma.len() {
            let composable = g.compose(t.projection[s], t.projection[r]).is_some();
            match sigma.compose(s, r) {
                Some(sr) if g.compose(t.projection[s], t.projection[r]) == Some(t.projection[sr]) => {}
                None if !composable => {}
                _ => return violation(2, format!("j is not a homomorphism at ({}, {})", sigma.name(s), sigma.name(r))),
            }
        }
    }
    report.passed("projection_surjective_homomorphism");
    report.vacuous("projection_open", "finite discrete topology: every map is open");

    // condition (3)
    for s in 0..sigma.len() {
        let (r, d) = (t.projection[sigma.dst(s)], t.projection[sigma.src(s)]);
        for k in 0..m {
            let left = sigma.compose(t.include(r, k), s);
            let right = sigma.compose(s, t.include(d, k));
            if left.is_none() || left != right {
                return violation(3, format!("i(r(σ), z)σ != σ i(d(σ), z) for σ = {}, k = {k}", sigma.name(s)));
            }
        }
    }
    report.passed_with("central", format!("{} pairs (σ, z)", sigma.len() * t.m));
    Ok(report)
}
