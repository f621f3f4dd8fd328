//! Finite groups given by explicit multiplication tables.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;

use super::GroupoidError;

/// A finite group stored as a Cayley table over named elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// On-disk form of a group: `table[i][j]` is the name of `elements[i] * elements[j]`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupFile {
    pub elements: Vec<String>,
    pub table: Vec<Vec<String>>,
}

impl FiniteGroup {
    /// Checks the group axioms on an index table and builds the group.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, GroupoidError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupoidError::NotAGroup("empty element set".into()));
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(GroupoidError::NotAGroup(format!("table must be {n}x{n}")));
        }
        if let Some(bad) = table.iter().flatten().find(|&&x| x >= n) {
            return Err(GroupoidError::NotAGroup(format!("product index {bad} out of range")));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(GroupoidError::NotAGroup(format!(
                            "associativity fails on ({}, {}, {})",
                            names[a], names[b], names[c]
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a))
            .ok_or_else(|| GroupoidError::NotAGroup("no two-sided identity".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| GroupoidError::NotAGroup(format!("{} has no inverse", names[a])))?;
            inverse.push(inv);
        }
        Ok(Self { names, table, identity, inverse })
    }

    pub fn from_file(file: &GroupFile) -> Result<Self, GroupoidError> {
        let index: HashMap<&str, usize> =
            file.elements.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != file.elements.len() {
            return Err(GroupoidError::NotAGroup("duplicate element names".into()));
        }
        let mut table = Vec::with_capacity(file.table.len());
        for row in &file.table {
            let mut out = Vec::with_capacity(row.len());
            for name in row {
                let &i = index
                    .get(name.as_str())
                    .ok_or_else(|| GroupoidError::NotAGroup(format!("unknown element {name}")))?;
                out.push(i);
            }
            table.push(out);
        }
        Self::from_table(file.elements.clone(), table)
    }

    pub fn to_file(&self) -> GroupFile {
        GroupFile {
            elements: self.names.clone(),
            table: self
                .table
                .iter()
                .map(|row| row.iter().map(|&i| self.names[i].clone()).collect())
                .collect(),
        }
    }

    /// The trivial group `{e}`.
    pub fn trivial() -> Self {
        Self::abelian(&[1]).expect("trivial group")
    }

    /// The cyclic group `Z_n` with elements named `0..n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1, "cyclic group needs n >= 1");
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(names, table).expect("cyclic table is a group")
    }

    /// `Z_{m_1} x ... x Z_{m_k}` with elements named `(a_1,...,a_k)`, enumerated
    /// with the last coordinate varying fastest.
    pub fn abelian(moduli: &[usize]) -> Result<Self, GroupoidError> {
        if moduli.is_empty() || moduli.contains(&0) {
            return Err(GroupoidError::NotAGroup("moduli must be positive".into()));
        }
        let order: usize = moduli.iter().product();
        let tuples: Vec<Vec<usize>> = (0..order).map(|i| decode_mixed_radix(i, moduli)).collect();
        let names = tuples.iter().map(|t| tuple_name(t)).collect();
        let table = tuples
            .iter()
            .map(|a| {
                tuples
                    .iter()
                    .map(|b| {
                        let sum: Vec<usize> =
                            a.iter().zip(b).zip(moduli).map(|((x, y), m)| (x + y) % m).collect();
                        encode_mixed_radix(&sum, moduli)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(names, table)
    }

    /// Direct product, elements named `(a,b)`.
    pub fn product(a: &Self, b: &Self) -> Self {
        let nb = b.order();
        let names = (0..a.order() * nb)
            .map(|i| format!("({},{})", a.names[i / nb], b.names[i % nb]))
            .collect();
        let table = (0..a.order() * nb)
            .map(|x| {
                (0..a.order() * nb)
                    .map(|y| a.table[x / nb][y / nb] * nb + b.table[x % nb][y % nb])
                    .collect()
            })
            .collect();
        Self::from_table(names, table).expect("product of groups is a group")
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..self.order()).all(|b| self.table[a][b] == self.table[b][a]))
    }
}

pub(crate) fn decode_mixed_radix(mut i: usize, moduli: &[usize]) -> Vec<usize> {
    let mut out = vec![0; moduli.len()];
    for (slot, &m) in out.iter_mut().zip(moduli).rev() {
        *slot = i % m;
        i /= m;
    }
    out
}

pub(crate) fn encode_mixed_radix(t: &[usize], moduli: &[usize]) -> usize {
    t.iter().zip(moduli).fold(0, |acc, (&x, &m)| acc * m + x)
}

pub(crate) fn tuple_name(t: &[usize]) -> String {
    let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Parses `(a,b,...)` into integer coordinates.
pub fn parse_tuple(s: &str) -> Option<Vec<i64>> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    inner.split(',').map(|p| p.trim().parse::<i64>().ok()).collect()
}
