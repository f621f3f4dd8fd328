//! Exhaustive isomorphism search for small groupoids.

use super::{FiniteGroupoid, GroupoidError};

pub const DEFAULT_ISO_LIMIT: usize = 24;

/// An arrow bijection `a -> b`: arrow `g` of `a` maps to `map[g]` of `b`.
pub type Isomorphism = Vec<usize>;

/// Degree signature of a unit: `(|G_u|, |G^u|, |G_u^u|)`.
fn signature(g: &FiniteGroupoid, u: usize) -> (usize, usize, usize) {
    let loops = g.arrows_from(u).iter().filter(|&&x| g.dst(x) == u).count();
    (g.arrows_from(u).len(), g.arrows_to(u).len(), loops)
}

struct Search<'a> {
    a: &'a FiniteGroupoid,
    b: &'a FiniteGroupoid,
    fwd: Vec<Option<usize>>,
    back: Vec<Option<usize>>,
    trail: Vec<usize>,
}

impl Search<'_> {
    /// Assigns `g -> h` and closes the assignment under products and inverses.
    /// On conflict the caller must undo to its trail mark.
    fn assign(&mut self, g: usize, h: usize) -> bool {
        let mut queue = vec![(g, h)];
        while let Some((g, h)) = queue.pop() {
            match (self.fwd[g], self.back[h]) {
                (Some(x), _) if x == h => continue,
                (Some(_), _) | (_, Some(_)) => return false,
                _ => {}
            }
            if self.a.is_unit(g) != self.b.is_unit(h) {
                return false;
            }
            self.fwd[g] = Some(h);
            self.back[h] = Some(g);
            self.trail.push(g);
            queue.push((self.a.inv(g), self.b.inv(h)));
            queue.push((self.a.src(g), self.b.src(h)));
            queue.push((self.a.dst(g), self.b.dst(h)));
            for &k in self.a.arrows_to(self.a.src(g)) {
                if let Some(kk) = self.fwd[k] {
                    let Some(prod) = self.b.compose(h, kk) else { return false };
                    queue.push((self.a.compose(g, k).unwrap(), prod));
                }
            }
            for &k in self.a.arrows_from(self.a.dst(g)) {
                if let Some(kk) = self.fwd[k] {
                    let Some(prod) = self.b.compose(kk, h) else { return false };
                    queue.push((self.a.compose(k, g).unwrap(), prod));
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let g = self.trail.pop().unwrap();
            let h = self.fwd[g].take().unwrap();
            self.back[h] = None;
        }
    }

    fn solve(&mut self) -> bool {
        let Some(g) = self.next_unassigned() else { return true };
        let candidates: Vec<usize> = if self.a.is_unit(g) {
            let sig = signature(self.a, g);
            self.b.units().iter().copied().filter(|&u| signature(self.b, u) == sig).collect()
        } else {
            // endpoints are assigned before any non-unit arrow is tried
            let (s, d) = (self.fwd[self.a.src(g)].unwrap(), self.fwd[self.a.dst(g)].unwrap());
            self.b.arrows_from(s).iter().copied().filter(|&h| self.b.dst(h) == d).collect()
        };
        for h in candidates {
            if self.back[h].is_some() {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(g, h) && self.solve() {
                return true;
            }
            self.undo(mark);
        }
        false
    }

    fn next_unassigned(&self) -> Option<usize> {
        let units = self.a.units().iter().copied();
        units.chain(0..self.a.len()).find(|&g| self.fwd[g].is_none())
    }
}

/// Decides whether `a` and `b` are isomorphic, returning an explicit arrow
/// bijection preserving units, composition and inverses when they are.
pub fn brute_force_isomorphic(
    a: &FiniteGroupoid,
    b: &FiniteGroupoid,
    limit: usize,
) -> Result<Option<Isomorphism>, GroupoidError> {
    for size in [a.len(), b.len()] {
        if size > limit {
            return Err(GroupoidError::SizeCapExceeded { size, limit });
        }
    }
    if a.len() != b.len() || a.units().len() != b.units().len() {
        return Ok(None);
    }
    let mut sa: Vec<_> = a.units().iter().map(|&u| signature(a, u)).collect();
    let mut sb: Vec<_> = b.units().iter().map(|&u| signature(b, u)).collect();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Ok(None);
    }
    let mut search = Search {
        a,
        b,
        fwd: vec![None; a.len()],
        back: vec![None; b.len()],
        trail: Vec::new(),
    };
    if !search.solve() {
        return Ok(None);
    }
    let map: Vec<usize> = search.fwd.into_iter().map(Option::unwrap).collect();
    debug_assert!(is_isomorphism(a, b, &map));
    Ok(Some(map))
}

/// Checks that `map` is a bijection `a -> b` preserving units, composition and inverses.
pub fn is_isomorphism(a: &FiniteGroupoid, b: &FiniteGroupoid, map: &[usize]) -> bool {
    if a.len() != b.len() || map.len() != a.len() {
        return false;
    }
    let mut seen = vec![false; b.len()];
    for &h in map {
        if h >= b.len() || std::mem::replace(&mut seen[h], true) {
            return false;
        }
    }
    (0..a.len()).all(|g| a.is_unit(g) == b.is_unit(map[g]) && map[a.inv(g)] == b.inv(map[g]))
        && (0..a.len()).all(|g| {
            (0..a.len()).all(|k| a.compose(g, k).map(|x| map[x]) == b.compose(map[g], map[k]))
        })
}
