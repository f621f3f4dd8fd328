//! The center of a twisted groupoid algebra.
//!
//! A central element commutes with every `δ_u`, so it is supported on
//! isotropy arrows; it is enough to impose commutation with a generating set
//! of each transitive component.

use nalgebra::SVD;
use num_complex::Complex64;

use super::KTheoryError;
use crate::algebra::{AlgebraElement, CMatrix, StructuredAlgebra};

/// Singular values below this fraction of the largest count as zero.
pub const RANK_THRESHOLD: f64 = 1e-8;
/// Singular values between the threshold and this fraction are ambiguous.
pub const RANK_AMBIGUITY: f64 = 1e-6;
/// Commutator residual accepted for center elements.
pub const CENTER_RESIDUAL: f64 = 1e-9;

/// An orthonormal basis of the center, grouped by transitive component.
#[derive(Debug, Clone)]
pub struct CenterBasis {
    pub algebra: StructuredAlgebra,
    /// Arrows of each component, as returned by `FiniteGroupoid::components`.
    pub components: Vec<Vec<usize>>,
    pub elements: Vec<AlgebraElement>,
    /// Component index of each basis element.
    pub component_of: Vec<usize>,
}

impl CenterBasis {
    pub fn dimension(&self) -> usize {
        self.elements.len()
    }

    /// Center dimension of one component.
    pub fn component_dimension(&self, c: usize) -> usize {
        self.component_of.iter().filter(|&&x| x == c).count()
    }
}

/// Arrows `S` such that words in `S ∪ S^-1` starting at units reach every arrow of the component.
pub(crate) fn generators(alg: &StructuredAlgebra, component: &[usize]) -> Vec<usize> {
    let g = alg.groupoid();
    let mut reached = vec![false; g.len()];
    let mut gens: Vec<usize> = Vec::new();
    for &a in component {
        if g.is_unit(a) {
            reached[a] = true;
        }
    }
    for &a in component {
        if reached[a] {
            continue;
        }
        gens.push(a);
        let moves: Vec<usize> = gens.iter().flat_map(|&s| [s, g.inv(s)]).collect();
        let mut stack: Vec<usize> = component.iter().copied().filter(|&x| reached[x]).collect();
        while let Some(x) = stack.pop() {
            for &s in &moves {
                if let Some(y) = g.compose(s, x) {
                    if !reached[y] {
                        reached[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
    }
    gens
}

/// `max_k |(x∗δ_s − δ_s∗x)(k)|`.
pub(crate) fn commutator_residual(alg: &StructuredAlgebra, x: &AlgebraElement, s: usize) -> f64 {
    let g = alg.groupoid();
    let w = alg.cocycle();
    let mut acc: Vec<(usize, Complex64)> = Vec::new();
    // (x∗δ_s)(hs) = x(h) ω(h, s)
    for &h in g.arrows_from(g.dst(s)) {
        acc.push((g.compose(h, s).unwrap(), x.get(h) * w.at(h, s).to_complex()));
    }
    // (δ_s∗x)(sh) = ω(s, h) x(h)
    for &h in g.arrows_to(g.src(s)) {
        acc.push((g.compose(s, h).unwrap(), -x.get(h) * w.at(s, h).to_complex()));
    }
    acc.sort_by_key(|&(k, _)| k);
    acc.chunk_by(|a, b| a.0 == b.0).map(|c| c.iter().map(|p| p.1).sum::<Complex64>().norm()).fold(0.0, f64::max)
}

/// Solves `x∗δ_s = δ_s∗x` for generators `s` of each component by SVD.
pub fn center(alg: &StructuredAlgebra) -> Result<CenterBasis, KTheoryError> {
    let g = alg.groupoid().clone();
    let w = alg.cocycle();
    let components = g.components();
    let mut elements = Vec::new();
    let mut component_of = Vec::new();
    for (ci, comp) in components.iter().enumerate() {
        let iso: Vec<usize> = comp.iter().copied().filter(|&a| g.src(a) == g.dst(a)).collect();
        let mut col = vec![usize::MAX; g.len()];
        for (j, &a) in iso.iter().enumerate() {
            col[a] = j;
        }
        let mut row_of = vec![usize::MAX; g.len()];
        for (i, &a) in comp.iter().enumerate() {
            row_of[a] = i;
        }
        let nc = iso.len();
        let mut rows: Vec<Vec<Complex64>> = Vec::new();
        for s0 in generators(alg, comp) {
            for s in [s0, g.inv(s0)] {
                let mut block = vec![vec![Complex64::new(0.0, 0.0); nc]; comp.len()];
                for &h in &iso {
                    if let Some(hs) = g.compose(h, s) {
                        block[row_of[hs]][col[h]] += w.at(h, s).to_complex();
                    }
                    if let Some(sh) = g.compose(s, h) {
                        block[row_of[sh]][col[h]] -= w.at(s, h).to_complex();
                    }
                }
                rows.extend(block.into_iter().filter(|r| r.iter().any(|z| z.norm() > 0.0)));
            }
        }
        let nr = rows.len().max(nc);
        let mut m = CMatrix::zeros(nr, nc);
        for (i, r) in rows.iter().enumerate() {
            for (j, z) in r.iter().enumerate() {
                m[(i, j)] = *z;
            }
        }
        let kernel: Vec<Vec<Complex64>> = if rows.is_empty() {
            (0..nc).map(|j| (0..nc).map(|k| Complex64::new(if j == k { 1.0 } else { 0.0 }, 0.0)).collect()).collect()
        } else {
            let svd = SVD::new(m, false, true);
            let v_t = svd.v_t.as_ref().expect("requested V^*");
            let smax = svd.singular_values.max();
            let mut kernel = Vec::new();
            for (j, &sv) in svd.singular_values.iter().enumerate() {
                let ratio = if smax > 0.0 { sv / smax } else { 0.0 };
                if ratio > RANK_THRESHOLD && ratio < RANK_AMBIGUITY {
                    return Err(KTheoryError::RankAmbiguous { component: ci, ratio });
                }
                if ratio <= RANK_THRESHOLD {
                    kernel.push(v_t.row(j).iter().map(|z| z.conj()).collect());
                }
            }
            kernel
        };
        for v in kernel {
            let mut coeffs = vec![Complex64::new(0.0, 0.0); g.len()];
            for (j, &a) in iso.iter().enumerate() {
                coeffs[a] = v[j];
            }
            let x = AlgebraElement::new(g.clone(), coeffs);
            for s in 0..g.len() {
                let r = commutator_residual(alg, &x, s);
                if r > CENTER_RESIDUAL {
                    return Err(KTheoryError::CheckFailed { what: "center element commutes", residual: r });
                }
            }
            elements.push(x);
            component_of.push(ci);
        }
    }
    Ok(CenterBasis { algebra: alg.clone(), components, elements, component_of })
}
