//! The twisted convolution *-algebra of a finite groupoid and its regular
//! representation.
//!
//! With `ω` normalized, `δ_g ∗ δ_h = ω(g,h) δ_{gh}` on composable pairs and
//! `δ_g^* = conj(ω(g^-1, g)) δ_{g^-1}`. The representation on `ℓ²(G_u)` is
//! `(π_u(f)ξ)(g) = Σ_{h ∈ G_u} f(gh^-1) ω(gh^-1, h) ξ(h)`. For a finite
//! groupoid the full and reduced norms coincide.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use std::sync::Arc;
use thiserror::Error;

use crate::circle::CircleValue;
use crate::cocycle::{same_groupoid, TwoCocycle};
use crate::groupoid::FiniteGroupoid;
use crate::report::ErrorCode;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("elements and cocycle live on different groupoids")]
    GroupoidMismatch,
    #[error("structure constants are not associative on ({0}, {1}, {2})")]
    NonAssociative(String, String, String),
    #[error("involution is not anti-multiplicative on ({0}, {1})")]
    NotAntiMultiplicative(String, String),
}

impl ErrorCode for AlgebraError {
    fn code(&self) -> &'static str {
        match self {
            AlgebraError::GroupoidMismatch => "GroupoidMismatch",
            AlgebraError::NonAssociative(..) => "NonAssociative",
            AlgebraError::NotAntiMultiplicative(..) => "NotAntiMultiplicative",
        }
    }
}

/// A function on arrows, i.e. `Σ_g f(g) δ_g`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    groupoid: Arc<FiniteGroupoid>,
    coeffs: Vec<Complex64>,
}

impl AlgebraElement {
    pub fn new(groupoid: Arc<FiniteGroupoid>, coeffs: Vec<Complex64>) -> Self {
        assert_eq!(coeffs.len(), groupoid.len(), "one coefficient per arrow");
        Self { groupoid, coeffs }
    }

    pub fn zero(groupoid: Arc<FiniteGroupoid>) -> Self {
        let n = groupoid.len();
        Self::new(groupoid, vec![Complex64::new(0.0, 0.0); n])
    }

    /// Point mass at an arrow.
    pub fn delta(groupoid: Arc<FiniteGroupoid>, g: usize) -> Self {
        let mut f = Self::zero(groupoid);
        f.coeffs[g] = Complex64::new(1.0, 0.0);
        f
    }

    /// `Σ_u δ_u`, the unit of the algebra.
    pub fn unit(groupoid: Arc<FiniteGroupoid>) -> Self {
        let mut f = Self::zero(groupoid.clone());
        for &u in groupoid.units() {
            f.coeffs[u] = Complex64::new(1.0, 0.0);
        }
        f
    }

    /// Coefficients with real and imaginary parts uniform in `[-1, 1]`.
    pub fn random(groupoid: Arc<FiniteGroupoid>, rng: &mut impl Rng) -> Self {
        let coeffs = (0..groupoid.len())
            .map(|_| Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0)))
            .collect();
        Self::new(groupoid, coeffs)
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn get(&self, g: usize) -> Complex64 {
        self.coeffs[g]
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Self::new(self.groupoid.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Self::new(self.groupoid.clone(), coeffs)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.groupoid.clone(), self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `max_g |f(g) - other(g)|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

fn check(f: &AlgebraElement, w: &TwoCocycle) -> Result<(), AlgebraError> {
    if same_groupoid(&f.groupoid, w.groupoid()) {
        Ok(())
    } else {
        Err(AlgebraError::GroupoidMismatch)
    }
}

/// `(f1 ∗ f2)(g) = Σ_{h ∈ G^{r(g)}} f1(h) f2(h^-1 g) ω(h, h^-1 g)`, summed
/// over composable pairs `(h, k)` with `hk = g`.
pub fn convolve(f1: &AlgebraElement, f2: &AlgebraElement, w: &TwoCocycle) -> Result<AlgebraElement, AlgebraError> {
    check(f1, w)?;
    check(f2, w)?;
    let g = &f1.groupoid;
    let mut out = AlgebraElement::zero(g.clone());
    for h in 0..g.len() {
        let a = f1.coeffs[h];
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        for &k in g.arrows_to(g.src(h)) {
            out.coeffs[g.compose(h, k).unwrap()] += a * f2.coeffs[k] * w.at(h, k).to_complex();
        }
    }
    Ok(out)
}

/// `f^*(g) = conj(f(g^-1) ω(g, g^-1))`.
pub fn involute(f: &AlgebraElement, w: &TwoCocycle) -> Result<AlgebraElement, AlgebraError> {
    check(f, w)?;
    let g = &f.groupoid;
    let coeffs = (0..g.len()).map(|x| (f.coeffs[g.inv(x)] * w.at(x, g.inv(x)).to_complex()).conj()).collect();
    Ok(AlgebraElement::new(g.clone(), coeffs))
}

/// One block `π_u(f)` on the basis `G_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub unit: usize,
    pub basis: Vec<usize>,
    pub matrix: CMatrix,
}

/// The block-diagonal image `⊕_u π_u(f)`, of total size `|arrows|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixImage {
    pub blocks: Vec<Block>,
}

impl MatrixImage {
    pub fn size(&self) -> usize {
        self.blocks.iter().map(|b| b.basis.len()).sum()
    }

    /// Block-diagonal dense matrix, blocks in unit order.
    pub fn to_dense(&self) -> CMatrix {
        let n = self.size();
        let mut out = CMatrix::zeros(n, n);
        let mut off = 0;
        for b in &self.blocks {
            let k = b.basis.len();
            out.view_mut((off, off), (k, k)).copy_from(&b.matrix);
            off += k;
        }
        out
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| Block { unit: a.unit, basis: a.basis.clone(), matrix: f(&a.matrix, &b.matrix) })
            .collect();
        Self { blocks }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn adjoint(&self) -> Self {
        self.zip_with(self, |a, _| a.adjoint())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.zip_with(self, |a, _| a * c)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().flat_map(|b| b.matrix.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Operator norm: the largest singular value over all blocks.
    pub fn spectral_norm(&self) -> f64 {
        self.blocks
            .iter()
            .filter(|b| !b.basis.is_empty())
            .map(|b| b.matrix.clone().singular_values().max())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.blocks.iter().map(|b| b.matrix.trace()).sum()
    }

    /// Entries of all blocks, concatenated in block order.
    pub fn flatten(&self) -> Vec<Complex64> {
        self.blocks.iter().flat_map(|b| b.matrix.iter().copied()).collect()
    }
}

/// `⊕_u π_u(f)` with `π_u(f)[g, h] = f(gh^-1) ω(gh^-1, h)` for `g, h ∈ G_u`.
pub fn full_rep(f: &AlgebraElement, w: &TwoCocycle) -> Result<MatrixImage, AlgebraError> {
    check(f, w)?;
    let g = &*f.groupoid;
    let blocks = g
        .units()
        .par_iter()
        .map(|&u| {
            let basis = g.arrows_from(u).to_vec();
            let k = basis.len();
            let matrix = CMatrix::from_fn(k, k, |i, j| {
                let (a, b) = (basis[i], basis[j]);
                let x = g.compose(a, g.inv(b)).expect("arrows with a common source");
                f.coeffs[x] * w.at(x, b).to_complex()
            });
            Block { unit: u, basis, matrix }
        })
        .collect();
    Ok(MatrixImage { blocks })
}

/// `‖f‖_r = max_u ‖π_u(f)‖`.
pub fn reduced_norm(f: &AlgebraElement, w: &TwoCocycle) -> Result<f64, AlgebraError> {
    Ok(full_rep(f, w)?.spectral_norm())
}

/// Exact structure constants `δ_g ∗ δ_h = ω(g,h) δ_{gh}` of the twisted algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredAlgebra {
    cocycle: TwoCocycle,
}

pub fn structure_constants(g: &Arc<FiniteGroupoid>, w: &TwoCocycle) -> Result<StructuredAlgebra, AlgebraError> {
    if !same_groupoid(g, w.groupoid()) {
        return Err(AlgebraError::GroupoidMismatch);
    }
    Ok(StructuredAlgebra { cocycle: w.clone() })
}

impl StructuredAlgebra {
    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        self.cocycle.groupoid()
    }

    pub fn cocycle(&self) -> &TwoCocycle {
        &self.cocycle
    }

    pub fn dimension(&self) -> usize {
        self.groupoid().len()
    }

    /// `δ_g ∗ δ_h` as `(coefficient, gh)`, or `None` when the product vanishes.
    pub fn product(&self, g: usize, h: usize) -> Option<(CircleValue, usize)> {
        let gh = self.groupoid().compose(g, h)?;
        Some((self.cocycle.at(g, h), gh))
    }

    /// `δ_g^*` as `(coefficient, g^-1)`.
    pub fn star(&self, g: usize) -> (CircleValue, usize) {
        let gi = self.groupoid().inv(g);
        (self.cocycle.at(gi, g).conj(), gi)
    }

    fn times(x: Option<(CircleValue, usize)>, h: usize, alg: &Self) -> Option<(CircleValue, usize)> {
        let (c, g) = x?;
        let (d, gh) = alg.product(g, h)?;
        Some((c.mul(d), gh))
    }

    /// `(δ_g δ_h) δ_k = δ_g (δ_h δ_k)` on all triples, compared exactly.
    pub fn check_associativity(&self) -> Result<(), AlgebraError> {
        let gr = self.groupoid();
        let n = gr.len();
        for g in 0..n {
            for h in 0..n {
                for k in 0..n {
                    let left = Self::times(self.product(g, h), k, self);
                    let right = self.product(h, k).and_then(|(c, hk)| {
                        let (d, ghk) = self.product(g, hk)?;
                        Some((c.mul(d), ghk))
                    });
                    let agree = match (left, right) {
                        (None, None) => true,
                        (Some((a, x)), Some((b, y))) => {
                            x == y && (a == b || (!(a.is_exact() && b.is_exact()) && a.deviation(&b) <= 1e-12))
                        }
                        _ => false,
                    };
                    if !agree {
                        let name = |x: usize| gr.name(x).to_string();
                        return Err(AlgebraError::NonAssociative(name(g), name(h), name(k)));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(δ_g δ_h)^* = δ_h^* δ_g^*` and `δ_g^{**} = δ_g`.
    pub fn check_involution(&self) -> Result<(), AlgebraError> {
        let gr = self.groupoid();
        let n = gr.len();
        let name = |x: usize| gr.name(x).to_string();
        for g in 0..n {
            let (c, gi) = self.star(g);
            let (d, gii) = self.star(gi);
            if gii != g || c.mul(d).deviation(&CircleValue::one()) > 1e-12 {
                return Err(AlgebraError::NotAntiMultiplicative(name(g), name(g)));
            }
            for h in 0..n {
                let left = self.product(g, h).map(|(c, gh)| {
                    let (d, x) = self.star(gh);
                    (c.conj().mul(d), x)
                });
                let (sh, hi) = self.star(h);
                let (sg, gi) = self.star(g);
                let right = self.product(hi, gi).map(|(c, x)| (sh.mul(sg).mul(c), x));
                let agree = match (left, right) {
                    (None, None) => true,
                    (Some((a, x)), Some((b, y))) => x == y && a.deviation(&b) <= 1e-12,
                    _ => false,
                };
                if !agree {
                    return Err(AlgebraError::NotAntiMultiplicative(name(g), name(h)));
                }
            }
        }
        Ok(())
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dimension();
        (0..n).all(|g| {
            (0..n).all(|h| match (self.product(g, h), self.product(h, g)) {
                (None, None) => true,
                (Some((a, x)), Some((b, y))) => x == y && a.deviation(&b) <= 1e-12,
                _ => false,
            })
        })
    }

    /// Left multiplication by `f` as a matrix on the basis `δ_g`.
    pub fn left_multiplication(&self, f: &AlgebraElement) -> CMatrix {
        let n = self.dimension();
        let mut m = CMatrix::zeros(n, n);
        for (g, &a) in f.coeffs().iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for h in 0..n {
                if let Some((c, gh)) = self.product(g, h) {
                    m[(gh, h)] += a * c.to_complex();
                }
            }
        }
        m
    }
}
