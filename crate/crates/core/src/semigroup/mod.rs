//! Finite inverse semigroups with zero, their idempotent spectra, twisted
//! actions and groupoids of germs.

mod action;
mod germ;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::CocycleError;
use crate::groupoid::{FiniteGroup, GroupoidError};
use crate::report::ErrorCode;

pub use action::{
    canonical_action, validate_twisted_action, SemigroupTwistedAction, TwistedActionFile,
};
pub use germ::{germ_groupoid, hausdorff_check, induced_cocycle_on_germs, GermGroupoid};

/// Largest idempotent set whose characters are enumerated.
pub const SPECTRUM_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemigroupError {
    #[error("malformed semigroup table: {0}")]
    Malformed(String),
    #[error("not an inverse semigroup ({reason}): {}", witness.join(", "))]
    NotInverseSemigroup { reason: &'static str, witness: Vec<String> },
    #[error("{count} idempotents exceed the spectrum limit {limit}")]
    SizeCapExceeded { count: usize, limit: usize },
    #[error("malformed twisted action: {0}")]
    MalformedAction(String),
    #[error("action condition ({condition}) fails at {}", witness.join(", "))]
    ActionViolation { condition: &'static str, witness: Vec<String> },
    #[error("cocycle condition ({condition}) fails at {} with deviation {deviation:.3e}", witness.join(", "))]
    CocycleViolation { condition: u8, witness: Vec<String>, deviation: f64 },
    #[error("germ cocycle is ill defined on ({0}, {1}): representatives give {2} and {3}")]
    IllDefinedGerm(String, String, String, String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

impl ErrorCode for SemigroupError {
    fn code(&self) -> &'static str {
        match self {
            SemigroupError::Malformed(_) => "MalformedTable",
            SemigroupError::NotInverseSemigroup { .. } => "NotInverseSemigroup",
            SemigroupError::SizeCapExceeded { .. } => "SizeCapExceeded",
            SemigroupError::MalformedAction(_) => "MalformedAction",
            SemigroupError::ActionViolation { .. } => "ActionViolation",
            SemigroupError::CocycleViolation { .. } => "CocycleViolation",
            SemigroupError::IllDefinedGerm(..) => "IllDefinedGerm",
            SemigroupError::Groupoid(e) => e.code(),
            SemigroupError::Cocycle(e) => e.code(),
        }
    }
}

/// `{elements, table, zero}` with `table[i][j]` the name of `elements[i] · elements[j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupFile {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
    pub zero: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteInverseSemigroup {
    names: Vec<String>,
    index: HashMap<String, usize>,
    table: Vec<usize>,
    zero: usize,
    star: Vec<usize>,
    idempotents: Vec<usize>,
}

/// Validates a table and computes `s ↦ s*`.
pub fn validate_inverse_semigroup(file: &SemigroupFile) -> Result<FiniteInverseSemigroup, SemigroupError> {
    let n = file.elements.len();
    let mut index = HashMap::new();
    for (i, s) in file.elements.iter().enumerate() {
        if index.insert(s.clone(), i).is_some() {
            return Err(SemigroupError::Malformed(format!("duplicate element {s}")));
        }
    }
    if file.table.len() != n || file.table.iter().any(|r| r.len() != n) {
        return Err(SemigroupError::Malformed(format!("table must be {n}×{n}")));
    }
    let lookup = |s: &str| index.get(s).copied().ok_or_else(|| SemigroupError::Malformed(format!("unknown element {s}")));
    let mut table = Vec::with_capacity(n * n);
    for row in &file.table {
        for x in row {
            table.push(lookup(x)?);
        }
    }
    let zero = lookup(&file.zero)?;
    FiniteInverseSemigroup::from_table(file.elements.clone(), table, zero)
}

impl FiniteInverseSemigroup {
    /// `table[a * n + b] = ab`.
    pub fn from_table(names: Vec<String>, table: Vec<usize>, zero: usize) -> Result<Self, SemigroupError> {
        let n = names.len();
        if table.len() != n * n || table.iter().any(|&x| x >= n) || zero >= n {
            return Err(SemigroupError::Malformed("table entries out of range".into()));
        }
        let index = names.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mul = |a: usize, b: usize| table[a * n + b];
        let witness = |ids: &[usize]| ids.iter().map(|&i| names[i].clone()).collect::<Vec<_>>();
        let fail = |reason, ids: &[usize]| SemigroupError::NotInverseSemigroup { reason, witness: witness(ids) };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(fail("associativity", &[a, b, c]));
                    }
                }
            }
        }
        for s in 0..n {
            if mul(zero, s) != zero || mul(s, zero) != zero {
                return Err(fail("zero is absorbing", &[s]));
            }
        }
        let mut star = Vec::with_capacity(n);
        for s in 0..n {
            let inverses: Vec<usize> = (0..n).filter(|&t| mul(mul(s, t), s) == s && mul(mul(t, s), t) == t).collect();
            match inverses.as_slice() {
                [t] => star.push(*t),
                [] => return Err(fail("no generalized inverse", &[s])),
                many => {
                    let mut ids = vec![s];
                    ids.extend_from_slice(many);
                    return Err(fail("generalized inverse is not unique", &ids));
                }
            }
        }
        let idempotents: Vec<usize> = (0..n).filter(|&e| mul(e, e) == e).collect();
        for &e in &idempotents {
            for &f in &idempotents {
                if mul(e, f) != mul(f, e) {
                    return Err(fail("idempotents commute", &[e, f]));
                }
            }
        }
        Ok(Self { names, index, table, zero, star, idempotents })
    }

    pub fn to_file(&self) -> SemigroupFile {
        let n = self.len();
        SemigroupFile {
            elements: self.names.clone(),
            table: (0..n).map(|a| (0..n).map(|b| self.names[self.mul(a, b)].clone()).collect()).collect(),
            zero: self.names[self.zero].clone(),
        }
    }

    /// `G ∪ {0}`, with the zero named `zero`.
    pub fn group_with_zero(g: &FiniteGroup) -> Result<Self, SemigroupError> {
        let n = g.order();
        if g.index_of("zero").is_some() {
            return Err(SemigroupError::Malformed("group already has an element named zero".into()));
        }
        let mut names = g.names().to_vec();
        names.push("zero".into());
        let table = (0..=n).flat_map(|a| (0..=n).map(move |b| if a == n || b == n { n } else { g.mul(a, b) })).collect();
        Self::from_table(names, table, n)
    }

    /// The chain semilattice `0 < e_1 < ... < 1` under meet, from bottom to top.
    pub fn chain(names: &[&str]) -> Result<Self, SemigroupError> {
        let n = names.len();
        let table = (0..n).flat_map(|a| (0..n).map(move |b| a.min(b))).collect();
        Self::from_table(names.iter().map(|s| s.to_string()).collect(), table, 0)
    }

    /// Partial bijections of `{1..n}` under composition `(st)(x) = s(t(x))`.
    ///
    /// Elements are named by their image lists, `-` marking points outside the
    /// domain; the empty map is the zero.
    pub fn symmetric_inverse_monoid(n: usize) -> Result<Self, SemigroupError> {
        let mut maps: Vec<Vec<Option<usize>>> = Vec::new();
        let mut current = vec![None; n];
        fn fill(i: usize, used: &mut Vec<bool>, cur: &mut Vec<Option<usize>>, out: &mut Vec<Vec<Option<usize>>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            cur[i] = None;
            fill(i + 1, used, cur, out);
            for y in 0..cur.len() {
                if !used[y] {
                    used[y] = true;
                    cur[i] = Some(y);
                    fill(i + 1, used, cur, out);
                    used[y] = false;
                }
            }
            cur[i] = None;
        }
        fill(0, &mut vec![false; n], &mut current, &mut maps);
        let name = |m: &Vec<Option<usize>>| {
            let parts: Vec<String> = m.iter().map(|y| y.map_or("-".to_string(), |y| (y + 1).to_string())).collect();
            format!("[{}]", parts.join(","))
        };
        let index: HashMap<Vec<Option<usize>>, usize> = maps.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let k = maps.len();
        let mut table = Vec::with_capacity(k * k);
        for s in &maps {
            for t in &maps {
                let st: Vec<Option<usize>> = t.iter().map(|y| y.and_then(|y| s[y])).collect();
                table.push(index[&st]);
            }
        }
        let zero = index[&vec![None; n]];
        Self::from_table(maps.iter().map(name).collect(), table, zero)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.len() + b]
    }

    pub fn star(&self, s: usize) -> usize {
        self.star[s]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn is_idempotent(&self, e: usize) -> bool {
        self.mul(e, e) == e
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// The natural partial order `s ≤ t ⇔ s = t s* s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalOrder {
    n: usize,
    le: Vec<bool>,
}

impl NaturalOrder {
    pub fn le(&self, s: usize, t: usize) -> bool {
        self.le[s * self.n + t]
    }

    /// Reflexivity, antisymmetry and transitivity.
    pub fn is_partial_order(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| self.le(a, a))
            && (0..n).all(|a| (0..n).all(|b| a == b || !(self.le(a, b) && self.le(b, a))))
            && (0..n).all(|a| (0..n).all(|b| !self.le(a, b) || (0..n).all(|c| !self.le(b, c) || self.le(a, c))))
    }
}

pub fn natural_order(s: &FiniteInverseSemigroup) -> NaturalOrder {
    let n = s.len();
    let le = (0..n).flat_map(|a| (0..n).map(move |b| a == s.mul(b, s.mul(s.star(a), a)))).collect();
    let order = NaturalOrder { n, le };
    debug_assert!(order.is_partial_order());
    order
}

/// A character `χ: E → {0,1}`, stored as its filter `{e : χ(e) = 1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    /// Idempotents with `χ(e) = 1`, in element order.
    pub filter: Vec<usize>,
}

impl Character {
    pub fn value(&self, e: usize) -> bool {
        self.filter.binary_search(&e).is_ok()
    }

    pub fn name(&self, s: &FiniteInverseSemigroup) -> String {
        let parts: Vec<&str> = self.filter.iter().map(|&e| s.name(e)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// All characters of the idempotent semilattice, by exhaustive enumeration of
/// subsets of `E ∖ {0}`, ordered by filter size.
pub fn spectrum(s: &FiniteInverseSemigroup) -> Result<Vec<Character>, SemigroupError> {
    let nonzero: Vec<usize> = s.idempotents().iter().copied().filter(|&e| e != s.zero()).collect();
    if nonzero.len() + 1 > SPECTRUM_LIMIT {
        return Err(SemigroupError::SizeCapExceeded { count: nonzero.len() + 1, limit: SPECTRUM_LIMIT });
    }
    let pos: HashMap<usize, usize> = nonzero.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let bit = |mask: u32, e: usize| pos.get(&e).is_some_and(|&i| mask >> i & 1 == 1);
    let mut out = Vec::new();
    for mask in 1u32..(1 << nonzero.len()) {
        let multiplicative = nonzero
            .iter()
            .all(|&e| nonzero.iter().all(|&f| bit(mask, s.mul(e, f)) == (bit(mask, e) && bit(mask, f))));
        if multiplicative {
            out.push(Character { filter: nonzero.iter().copied().filter(|&e| bit(mask, e)).collect() });
        }
    }
    out.sort_by(|a, b| (a.filter.len(), &a.filter).cmp(&(b.filter.len(), &b.filter)));
    Ok(out)
}

#[cfg(test)]
mod tests;
