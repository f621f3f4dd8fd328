//! Minimal central projections from a random self-adjoint central element.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::center::{commutator_residual, CenterBasis};
use super::KTheoryError;
use crate::algebra::{convolve, full_rep, involute, AlgebraElement, MatrixImage};

/// Eigenvalue gaps at most this (relative) are one cluster.
pub const JOIN_GAP: f64 = 1e-9;
/// Eigenvalue gaps at least this (relative) separate clusters.
pub const SPLIT_GAP: f64 = 1e-6;
/// Residual accepted for the projection identities.
pub const PROJECTION_RESIDUAL: f64 = 1e-9;
/// Seeds tried before giving up on separating the spectrum.
pub const SEED_ATTEMPTS: u64 = 5;

/// A minimal central projection `z_i`, supported on one component.
#[derive(Debug, Clone)]
pub struct CentralIdempotent {
    pub component: usize,
    pub element: AlgebraElement,
    /// Number of eigenvalues of the cluster in the full representation; equals `n_i²`.
    pub multiplicity: usize,
}

impl CentralIdempotent {
    pub fn image(&self, c: &CenterBasis) -> MatrixImage {
        full_rep(&self.element, c.algebra.cocycle()).expect("same groupoid")
    }

    /// `√multiplicity`, when it is a perfect square.
    pub fn block_size(&self) -> Option<usize> {
        let n = (self.multiplicity as f64).sqrt().round() as usize;
        (n * n == self.multiplicity).then_some(n)
    }
}

enum Attempt {
    /// Projections and the smallest relative gap between clusters.
    Done(Vec<CentralIdempotent>, f64),
    Retry(String),
}

/// Splits the unit into minimal central projections.
///
/// Seeds `seed, seed+1, ...` are tried until the spectrum of the random
/// central element separates into exactly as many clusters as the center has
/// dimensions.
pub fn minimal_central_idempotents(c: &CenterBasis, seed: u64) -> Result<Vec<CentralIdempotent>, KTheoryError> {
    separated_idempotents(c, seed).map(|(ps, _)| ps)
}

/// As [`minimal_central_idempotents`], also returning the smallest relative
/// eigenvalue gap between distinct clusters (infinite for a single cluster).
pub fn separated_idempotents(c: &CenterBasis, seed: u64) -> Result<(Vec<CentralIdempotent>, f64), KTheoryError> {
    let mut last = String::new();
    for s in seed..seed + SEED_ATTEMPTS {
        match attempt(c, s)? {
            Attempt::Done(out, gap) => return Ok((out, gap)),
            Attempt::Retry(why) => last = why,
        }
    }
    Err(KTheoryError::EigenGapAmbiguous { seeds: SEED_ATTEMPTS, detail: last })
}

fn attempt(c: &CenterBasis, seed: u64) -> Result<Attempt, KTheoryError> {
    let alg = &c.algebra;
    let g = alg.groupoid();
    let w = alg.cocycle();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut separation = f64::INFINITY;
    for (ci, comp) in c.components.iter().enumerate() {
        let mut z = AlgebraElement::zero(g.clone());
        for (b, _) in c.elements.iter().zip(&c.component_of).filter(|(_, &k)| k == ci) {
            let coef = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            z = z.add(&b.scale(coef));
        }
        let h = z.add(&involute(&z, w)?);
        let image = full_rep(&h, w)?;
        // (eigenvalue, block, eigenvector column)
        let mut spectrum: Vec<(f64, usize, usize)> = Vec::new();
        let mut eigvecs = Vec::new();
        for (bi, block) in image.blocks.iter().enumerate() {
            if !comp.contains(&block.unit) {
                eigvecs.push(None);
                continue;
            }
            let m = &block.matrix;
            let herm = (m + m.adjoint()).scale(0.5);
            let eig = SymmetricEigen::new(herm);
            for (j, &l) in eig.eigenvalues.iter().enumerate() {
                spectrum.push((l, bi, j));
            }
            eigvecs.push(Some(eig.eigenvectors));
        }
        spectrum.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut clusters: Vec<Vec<(usize, usize)>> = Vec::new();
        for (i, &(l, bi, j)) in spectrum.iter().enumerate() {
            if i > 0 {
                let prev = spectrum[i - 1].0;
                let gap = (l - prev) / l.abs().max(prev.abs()).max(1.0);
                if gap > JOIN_GAP && gap < SPLIT_GAP {
                    return Ok(Attempt::Retry(format!("relative gap {gap:.3e} in component {ci}")));
                }
                if gap >= SPLIT_GAP {
                    separation = separation.min(gap);
                    clusters.push(Vec::new());
                }
            } else {
                clusters.push(Vec::new());
            }
            clusters.last_mut().unwrap().push((bi, j));
        }
        let expected = c.component_dimension(ci);
        if clusters.len() != expected {
            return Ok(Attempt::Retry(format!(
                "{} eigenvalue clusters for a {expected}-dimensional center in component {ci}",
                clusters.len()
            )));
        }
        for cluster in clusters {
            // column u of the projection in block u gives the coefficients on G_u
            let mut coeffs = vec![Complex64::new(0.0, 0.0); g.len()];
            for (bi, block) in image.blocks.iter().enumerate() {
                let Some(v) = &eigvecs[bi] else { continue };
                let p = block.basis.iter().position(|&a| a == block.unit).unwrap();
                for &(_, j) in cluster.iter().filter(|&&(b, _)| b == bi) {
                    let col = v.column(j);
                    let s = col[p].conj();
                    for (r, &a) in block.basis.iter().enumerate() {
                        coeffs[a] += col[r] * s;
                    }
                }
            }
            out.push(CentralIdempotent {
                component: ci,
                element: AlgebraElement::new(g.clone(), coeffs),
                multiplicity: cluster.len(),
            });
        }
    }
    check_projections(c, &out)?;
    Ok(Attempt::Done(out, separation))
}

fn check_projections(c: &CenterBasis, ps: &[CentralIdempotent]) -> Result<(), KTheoryError> {
    let alg = &c.algebra;
    let g = alg.groupoid();
    let w = alg.cocycle();
    let fail = |what, residual: f64| {
        if residual > PROJECTION_RESIDUAL {
            Err(KTheoryError::CheckFailed { what, residual })
        } else {
            Ok(())
        }
    };
    let mut sum = AlgebraElement::zero(g.clone());
    for p in ps {
        let e = &p.element;
        fail("projection is idempotent", convolve(e, e, w)?.max_abs_diff(e))?;
        fail("projection is self-adjoint", involute(e, w)?.max_abs_diff(e))?;
        let comm = (0..g.len()).map(|s| commutator_residual(alg, e, s)).fold(0.0, f64::max);
        fail("projection is central", comm)?;
        sum = sum.add(e);
    }
    fail("projections sum to the unit", sum.max_abs_diff(&AlgebraElement::unit(g.clone())))
}
