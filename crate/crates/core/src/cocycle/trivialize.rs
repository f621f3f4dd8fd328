//! Deciding whether a `C_m`-valued cocycle is a coboundary.
//!
//! Writing `ω(g,h) = exp(2πi k(g,h)/m)` and `b(g) = exp(2πi x_g/m)` with
//! `x_u = 0` on units, `∂b = ω` is the linear system
//! `x_g + x_h - x_{gh} = k(g,h)` over `Z/m`. It is diagonalized by unimodular
//! row and column operations, after which solvability is read off entrywise.

use num_integer::Integer;

use super::{CocycleError, OneCochain, TwoCocycle};
use crate::circle::CircleValue;

/// Largest number of unknowns (non-unit arrows) accepted.
pub const TRIVIALIZE_LIMIT: usize = 160;

#[derive(Debug, Clone, PartialEq)]
pub enum Trivialization {
    /// `∂b = ω`, re-verified by table equality.
    Coboundary(OneCochain),
    /// After diagonalization some equation reads `d·y = c (mod m)` with `gcd(d, m) ∤ c`.
    Nontrivial { pivot: i64, residue: i64, m: i64 },
}

impl Trivialization {
    pub fn is_coboundary(&self) -> bool {
        matches!(self, Trivialization::Coboundary(_))
    }
}

/// Dense matrix over `Z/m` with a right-hand side that follows the row operations.
struct System {
    m: i64,
    rows: Vec<Vec<i64>>,
    rhs: Vec<i64>,
    /// Accumulated column operations: the solution is `x = V y`.
    v: Vec<Vec<i64>>,
}

fn modmul(a: i64, b: i64, m: i64) -> i64 {
    ((a as i128 * b as i128).rem_euclid(m as i128)) as i64
}

/// Modular inverse of a unit.
fn inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}

impl System {
    fn cols(&self) -> usize {
        self.v.len()
    }

    /// `(row_a, row_b) <- (s·row_a + t·row_b, u·row_a + w·row_b)`.
    fn mix_rows(&mut self, a: usize, b: usize, [s, t, u, w]: [i64; 4]) {
        let m = self.m;
        for j in 0..self.cols() {
            let (x, y) = (self.rows[a][j], self.rows[b][j]);
            self.rows[a][j] = (modmul(s, x, m) + modmul(t, y, m)) % m;
            self.rows[b][j] = (modmul(u, x, m) + modmul(w, y, m)) % m;
        }
        let (x, y) = (self.rhs[a], self.rhs[b]);
        self.rhs[a] = (modmul(s, x, m) + modmul(t, y, m)) % m;
        self.rhs[b] = (modmul(u, x, m) + modmul(w, y, m)) % m;
    }

    /// `(col_a, col_b) <- (s·col_a + t·col_b, u·col_a + w·col_b)`, mirrored in `V`.
    fn mix_cols(&mut self, a: usize, b: usize, [s, t, u, w]: [i64; 4]) {
        let m = self.m;
        for row in self.rows.iter_mut().chain(self.v.iter_mut()) {
            let (x, y) = (row[a], row[b]);
            row[a] = (modmul(s, x, m) + modmul(t, y, m)) % m;
            row[b] = (modmul(u, x, m) + modmul(w, y, m)) % m;
        }
    }

    fn scale_row(&mut self, r: usize, c: i64) {
        let m = self.m;
        for x in &mut self.rows[r] {
            *x = modmul(*x, c, m);
        }
        self.rhs[r] = modmul(self.rhs[r], c, m);
    }

    /// Unimodular 2x2 transform sending `(d, a)` to `(gcd, 0)`.
    fn eliminator(&self, d: i64, a: i64) -> [i64; 4] {
        let m = self.m;
        if a % d == 0 {
            return [1, 0, (m - (a / d) % m) % m, 1];
        }
        let e = d.extended_gcd(&a);
        let g = e.gcd;
        [e.x.rem_euclid(m), e.y.rem_euclid(m), (m - (a / g) % m) % m, (d / g) % m]
    }

    /// Makes the pivot at `(t, t)` equal to `gcd(pivot, m)`, a divisor of `m`.
    fn normalize_pivot(&mut self, t: usize) {
        let (m, a) = (self.m, self.rows[t][t]);
        let d = a.gcd(&m);
        let md = m / d;
        // a = u·d with u a unit mod m
        let base = (a / d) % md;
        let u = (0..).map(|k| base + k * md).find(|u| u.gcd(&m) == 1).unwrap();
        self.scale_row(t, inverse(u % m, m));
        debug_assert_eq!(self.rows[t][t], d % m);
    }

    /// Diagonalizes the matrix and returns the diagonal.
    fn diagonalize(&mut self) -> Vec<i64> {
        let m = self.m;
        let (nr, nc) = (self.rows.len(), self.cols());
        let mut diag = Vec::new();
        for t in 0..nr.min(nc) {
            // pivot with the largest ideal, i.e. smallest gcd with m
            let mut best: Option<(i64, usize, usize)> = None;
            for i in t..nr {
                for j in t..nc {
                    let a = self.rows[i][j];
                    if a != 0 {
                        let g = a.gcd(&m);
                        if best.is_none_or(|(bg, _, _)| g < bg) {
                            best = Some((g, i, j));
                            if g == 1 {
                                break;
                            }
                        }
                    }
                }
                if best.is_some_and(|(g, _, _)| g == 1) {
                    break;
                }
            }
            let Some((_, i, j)) = best else { break };
            self.rows.swap(t, i);
            self.rhs.swap(t, i);
            if j != t {
                self.mix_cols(t, j, [0, 1, 1, 0]);
            }
            self.normalize_pivot(t);
            loop {
                let mut changed = false;
                for i in t + 1..nr {
                    let a = self.rows[i][t];
                    if a != 0 {
                        let d = self.rows[t][t];
                        let op = self.eliminator(d, a);
                        self.mix_rows(t, i, op);
                        changed |= a % d != 0;
                    }
                }
                for j in t + 1..nc {
                    let a = self.rows[t][j];
                    if a != 0 {
                        let d = self.rows[t][t];
                        let op = self.eliminator(d, a);
                        self.mix_cols(t, j, op);
                        changed |= a % d != 0;
                    }
                }
                self.normalize_pivot(t);
                let clean = (t + 1..nr).all(|i| self.rows[i][t] == 0) && (t + 1..nc).all(|j| self.rows[t][j] == 0);
                if clean && !changed {
                    break;
                }
            }
            diag.push(self.rows[t][t]);
        }
        diag
    }
}

/// Solves `∂b = ω` over `C_m`, or proves that no solution exists.
pub fn try_trivialize(w: &TwoCocycle, m: i64) -> Result<Trivialization, CocycleError> {
    assert!(m >= 1, "coefficient order must be positive");
    let g = w.groupoid();
    let unknowns: Vec<usize> = (0..g.len()).filter(|&x| !g.is_unit(x)).collect();
    if unknowns.len() > TRIVIALIZE_LIMIT {
        return Err(CocycleError::SizeCapExceeded { size: unknowns.len(), limit: TRIVIALIZE_LIMIT });
    }
    let mut col = vec![usize::MAX; g.len()];
    for (j, &x) in unknowns.iter().enumerate() {
        col[x] = j;
    }
    let nc = unknowns.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (a, b) in g.composable_pairs().pairs {
        let v = w
            .get(a, b)
            .ok_or_else(|| CocycleError::MissingPair(g.name(a).into(), g.name(b).into()))?;
        let k = v.exponent_mod(m).ok_or_else(|| CocycleError::NotRootOfUnity {
            at: format!("({}, {})", g.name(a), g.name(b)),
            value: v.to_string(),
            m,
        })?;
        let mut row = vec![0i64; nc];
        let ab = g.compose(a, b).unwrap();
        for (x, sign) in [(a, 1), (b, 1), (ab, -1)] {
            if col[x] != usize::MAX {
                row[col[x]] = (row[col[x]] + sign).rem_euclid(m);
            }
        }
        if row.iter().all(|&x| x == 0) && k == 0 {
            continue;
        }
        rows.push(row);
        rhs.push(k);
    }
    let mut v = vec![vec![0i64; nc]; nc];
    for (j, row) in v.iter_mut().enumerate() {
        row[j] = 1 % m;
    }
    let mut sys = System { m, rows, rhs, v };
    let diag = sys.diagonalize();
    let mut y = vec![0i64; nc];
    for (i, &c) in sys.rhs.iter().enumerate() {
        let d = diag.get(i).copied().unwrap_or(0);
        let gd = d.gcd(&m);
        if c % gd != 0 {
            return Ok(Trivialization::Nontrivial { pivot: d, residue: c, m });
        }
        if i < diag.len() {
            // d divides m after normalization, so c/d solves d·y = c
            y[i] = c / d;
        }
    }
    let mut values = vec![CircleValue::one(); g.len()];
    for (j, &x) in unknowns.iter().enumerate() {
        let xj = (0..nc).fold(0, |acc, k| (acc + modmul(sys.v[j][k], y[k], m)) % m);
        values[x] = CircleValue::turns(xj, m);
    }
    let b = OneCochain::new(g.clone(), values).expect("units carry 1");
    assert!(b.coboundary().table_eq(w), "solution of the linear system must reproduce the cocycle");
    Ok(Trivialization::Coboundary(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{group::parse_tuple, make_group_groupoid, make_pair_groupoid, FiniteGroup, FiniteGroupoid};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    #[test]
    fn constant_one_is_trivial() {
        let g = Arc::new(make_pair_groupoid(3));
        match try_trivialize(&TwoCocycle::trivial(g), 2).unwrap() {
            Trivialization::Coboundary(b) => assert!(b.values().iter().all(CircleValue::is_one)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn random_c4_coboundaries_are_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for g in [
            make_pair_groupoid(3),
            make_group_groupoid(&FiniteGroup::cyclic(6)),
            make_group_groupoid(&FiniteGroup::abelian(&[2, 4]).unwrap()),
        ] {
            let g = Arc::new(g);
            for _ in 0..10 {
                let draws: Vec<i64> = (0..g.len()).map(|_| rng.random_range(0..4)).collect();
                let b = OneCochain::from_fn(g.clone(), |x| CircleValue::turns(draws[x], 4));
                let w = b.coboundary();
                let Trivialization::Coboundary(found) = try_trivialize(&w, 4).unwrap() else {
                    panic!("coboundary reported nontrivial");
                };
                assert!(found.coboundary().table_eq(&w));
            }
        }
    }

    fn clock_shift(g: &Arc<FiniteGroupoid>, n: i64) -> TwoCocycle {
        let coord = |x: usize| parse_tuple(g.name(x)).unwrap();
        TwoCocycle::from_fn(g.clone(), |a, b| CircleValue::turns(coord(a)[1] * coord(b)[0], n))
    }

    #[test]
    fn clock_shift_is_nontrivial() {
        let g = Arc::new(make_group_groupoid(&FiniteGroup::abelian(&[2, 2]).unwrap()));
        let w = clock_shift(&g, 2);
        assert!(!try_trivialize(&w, 2).unwrap().is_coboundary());
        // still nontrivial when more roots of unity are allowed
        assert!(!try_trivialize(&w, 4).unwrap().is_coboundary());
        let g3 = Arc::new(make_group_groupoid(&FiniteGroup::abelian(&[3, 3]).unwrap()));
        assert!(!try_trivialize(&clock_shift(&g3, 3), 3).unwrap().is_coboundary());
    }

    #[test]
    fn symmetric_cocycle_on_cyclic_group_needs_larger_roots() {
        // ω(a,a) = -1 on Z_2 is ∂b for b(a) = i, which lives in C_4 but not C_2
        let g = Arc::new(make_group_groupoid(&FiniteGroup::cyclic(2)));
        let a = g.index_of("1").unwrap();
        let w = TwoCocycle::trivial(g).with_value(a, a, CircleValue::turns(1, 2));
        assert!(!try_trivialize(&w, 2).unwrap().is_coboundary());
        assert!(try_trivialize(&w, 4).unwrap().is_coboundary());
    }

    #[test]
    fn non_roots_are_rejected() {
        let g = Arc::new(make_group_groupoid(&FiniteGroup::cyclic(2)));
        let a = g.index_of("1").unwrap();
        let w = TwoCocycle::trivial(g).with_value(a, a, CircleValue::turns(1, 3));
        assert!(matches!(try_trivialize(&w, 2), Err(CocycleError::NotRootOfUnity { .. })));
    }
}
