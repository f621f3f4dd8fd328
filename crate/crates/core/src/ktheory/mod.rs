//! Wedderburn decomposition of the twisted algebra and its K₀ data.
//!
//! A finite-dimensional C*-algebra `⊕ M_{n_i}` has `K₀ = Z^k` with unit
//! class `(n_1, ..., n_k)`; `K₁` vanishes.

mod center;
mod idempotents;

use std::sync::Arc;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{structure_constants, AlgebraError};
use crate::cocycle::{validate_cocycle, CocycleError, CocycleHomotopy, TwoCocycle};
use crate::groupoid::FiniteGroupoid;
use crate::report::ErrorCode;

pub use center::{center, CenterBasis, CENTER_RESIDUAL, RANK_AMBIGUITY, RANK_THRESHOLD};
pub use idempotents::{
    minimal_central_idempotents, separated_idempotents, CentralIdempotent, JOIN_GAP, PROJECTION_RESIDUAL, SEED_ATTEMPTS, SPLIT_GAP,
};

/// Distance from an integer tolerated when rounding a projection trace.
const TRACE_SLACK: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum KTheoryError {
    #[error("singular value ratio {ratio:.3e} in component {component} is too close to the rank threshold")]
    RankAmbiguous { component: usize, ratio: f64 },
    #[error("eigenvalue clusters not separated after {seeds} seeds: {detail}")]
    EigenGapAmbiguous { seeds: u64, detail: String },
    #[error("block size inconsistent: {0}")]
    BlockSizeInconsistent(String),
    #[error("{what}: residual {residual:.3e}")]
    CheckFailed { what: &'static str, residual: f64 },
    #[error("invalid sample(s) at t = {}", times.join(", "))]
    SampleInvalid { times: Vec<String>, report: Box<InvarianceReport>, first: Box<CocycleError> },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

impl ErrorCode for KTheoryError {
    fn code(&self) -> &'static str {
        match self {
            KTheoryError::RankAmbiguous { .. } => "RankAmbiguous",
            KTheoryError::EigenGapAmbiguous { .. } => "EigenGapAmbiguous",
            KTheoryError::BlockSizeInconsistent(_) => "BlockSizeInconsistent",
            KTheoryError::CheckFailed { .. } => "NumericalCheckFailed",
            KTheoryError::SampleInvalid { .. } => "SampleInvalid",
            KTheoryError::Algebra(e) => e.code(),
            KTheoryError::Cocycle(e) => e.code(),
        }
    }

    fn is_ambiguity(&self) -> bool {
        matches!(self, KTheoryError::RankAmbiguous { .. } | KTheoryError::EigenGapAmbiguous { .. })
    }
}

/// Block count, sorted block sizes and the class of the unit in `Z^k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Data {
    pub k: usize,
    pub block_sizes: Vec<usize>,
    pub unit_class: Vec<usize>,
}

impl K0Data {
    /// Builds the data from block sizes in block order.
    pub fn from_blocks(unit_class: Vec<usize>) -> Self {
        let mut block_sizes = unit_class.clone();
        block_sizes.sort_unstable();
        Self { k: unit_class.len(), block_sizes, unit_class }
    }

    /// `Σ n_i²`.
    pub fn dimension(&self) -> usize {
        self.block_sizes.iter().map(|n| n * n).sum()
    }
}

impl std::fmt::Display for K0Data {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sizes: Vec<String> = self.block_sizes.iter().map(|n| n.to_string()).collect();
        write!(f, "K0 = Z^{}, blocks [{}]", self.k, sizes.join(", "))
    }
}

/// Equality of `k`, block multisets and unit classes up to block permutation.
pub fn k0_equal(a: &K0Data, b: &K0Data) -> bool {
    let mut ua = a.unit_class.clone();
    let mut ub = b.unit_class.clone();
    ua.sort_unstable();
    ub.sort_unstable();
    let mut sa = a.block_sizes.clone();
    let mut sb = b.block_sizes.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    a.k == b.k && sa == sb && ua == ub
}

/// K₀ data of the twisted algebra, with the default seed.
pub fn k0(g: &Arc<FiniteGroupoid>, w: &TwoCocycle) -> Result<K0Data, KTheoryError> {
    k0_seeded(g, w, 0)
}

pub fn k0_seeded(g: &Arc<FiniteGroupoid>, w: &TwoCocycle, seed: u64) -> Result<K0Data, KTheoryError> {
    validate_cocycle(w, crate::cocycle::DEFAULT_TOL)?;
    decompose(g, w, seed)
}

fn decompose(g: &Arc<FiniteGroupoid>, w: &TwoCocycle, seed: u64) -> Result<K0Data, KTheoryError> {
    let alg = structure_constants(g, w)?;
    let c = center(&alg)?;
    let ps = minimal_central_idempotents(&c, seed)?;
    let mut blocks: Vec<(usize, usize)> = Vec::with_capacity(ps.len());
    for p in &ps {
        // the rank of left multiplication by a projection is its trace Σ_u |G^u| z(u)
        let trace: f64 = g.units().iter().map(|&u| g.arrows_to(u).len() as f64 * p.element.get(u).re).sum();
        let rank = trace.round();
        if (trace - rank).abs() > TRACE_SLACK {
            return Err(KTheoryError::BlockSizeInconsistent(format!("projection trace {trace} is not an integer")));
        }
        let rank = rank as usize;
        if rank != p.multiplicity {
            return Err(KTheoryError::BlockSizeInconsistent(format!(
                "rank {rank} differs from eigenvalue multiplicity {}",
                p.multiplicity
            )));
        }
        let n = p.block_size().ok_or_else(|| {
            KTheoryError::BlockSizeInconsistent(format!("rank {rank} is not a perfect square"))
        })?;
        blocks.push((p.component, n));
    }
    blocks.sort_unstable();
    let data = K0Data::from_blocks(blocks.into_iter().map(|(_, n)| n).collect());
    if data.dimension() != g.len() {
        return Err(KTheoryError::BlockSizeInconsistent(format!(
            "Σ n_i² = {} but the algebra has dimension {}",
            data.dimension(),
            g.len()
        )));
    }
    Ok(data)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

/// How much of the K₀ data stayed constant along the homotopy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InvarianceLevel {
    /// Block counts and block sizes agree.
    AlgebraData,
    /// Only the block counts agree.
    GroupIso,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub k0: Option<K0Data>,
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub samples: Vec<Sample>,
    pub verdict: Verdict,
    pub level: InvarianceLevel,
}

impl InvarianceReport {
    fn from_samples(samples: Vec<Sample>) -> Self {
        let data: Vec<&K0Data> = samples.iter().filter_map(|s| s.k0.as_ref()).collect();
        let all_valid = samples.iter().all(|s| s.valid);
        let same_k = data.windows(2).all(|p| p[0].k == p[1].k);
        let same_all = data.windows(2).all(|p| k0_equal(p[0], p[1]));
        let level = if !all_valid || !same_k {
            InvarianceLevel::None
        } else if same_all {
            InvarianceLevel::AlgebraData
        } else {
            InvarianceLevel::GroupIso
        };
        let verdict = if level == InvarianceLevel::AlgebraData { Verdict::Pass } else { Verdict::Fail };
        Self { samples, verdict, level }
    }
}

/// The grid `i/(N-1)`, `i = 0..N`.
pub fn sample_grid(samples: usize) -> Vec<Ratio<i64>> {
    let d = (samples.max(2) - 1) as i64;
    (0..=d).map(|i| Ratio::new(i, d)).collect()
}

/// Computes K₀ data of `ω_t` on a uniform grid and compares them.
///
/// Samples are evaluated in parallel and reported in grid order. An invalid
/// sample yields `SampleInvalid` carrying the partial report.
pub fn verify_homotopy_invariance(
    g: &Arc<FiniteGroupoid>,
    h: &CocycleHomotopy,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<InvarianceReport, KTheoryError> {
    if !crate::cocycle::same_groupoid(g, h.groupoid()) {
        return Err(AlgebraError::GroupoidMismatch.into());
    }
    let grid = sample_grid(samples);
    let results: Vec<Result<Result<K0Data, CocycleError>, KTheoryError>> = grid
        .par_iter()
        .map(|&t| match h.sample_at(t, tol) {
            Ok(w) => decompose(g, &w, seed).map(Ok),
            Err(e) => Ok(Err(e)),
        })
        .collect();
    let mut out = Vec::with_capacity(grid.len());
    let mut invalid = Vec::new();
    let mut first = None;
    for (t, r) in grid.iter().zip(results) {
        let tf = *t.numer() as f64 / *t.denom() as f64;
        match r? {
            Ok(k) => out.push(Sample { t: tf, k0: Some(k), valid: true }),
            Err(e) => {
                invalid.push(t.to_string());
                first.get_or_insert(e);
                out.push(Sample { t: tf, k0: None, valid: false });
            }
        }
    }
    let report = InvarianceReport::from_samples(out);
    match first {
        Some(e) => Err(KTheoryError::SampleInvalid { times: invalid, report: Box::new(report), first: Box::new(e) }),
        None => Ok(report),
    }
}
