//! Standard groupoids used as fixtures and as outputs of other builders.

use super::{FiniteGroup, FiniteGroupoid, GroupoidError, RawTables};

/// Pair groupoid on `n` points: arrows `(i,j)` from `j` to `i`, with the
/// diagonal arrow `(i,i)` named `i`.
pub fn make_pair_groupoid(n: usize) -> FiniteGroupoid {
    assert!(n >= 1, "pair groupoid needs n >= 1");
    let id = |i: usize, j: usize| i * n + j;
    let names = (0..n * n)
        .map(|a| {
            let (i, j) = (a / n + 1, a % n + 1);
            if i == j {
                i.to_string()
            } else {
                format!("({i},{j})")
            }
        })
        .collect();
    let units: Vec<usize> = (0..n).map(|i| id(i, i)).collect();
    let src = (0..n * n).map(|a| id(a % n, a % n)).collect();
    let dst = (0..n * n).map(|a| id(a / n, a / n)).collect();
    let mut raw = RawTables::new(names, units, src, dst);
    for i in 0..n {
        for j in 0..n {
            raw.inv[id(i, j)] = id(j, i);
            for k in 0..n {
                raw.set(id(i, j), id(j, k), id(i, k));
            }
        }
    }
    raw.into_groupoid()
}

/// One-unit groupoid whose arrows are the elements of `group`.
pub fn make_group_groupoid(group: &FiniteGroup) -> FiniteGroupoid {
    let n = group.order();
    let e = group.identity();
    let mut raw = RawTables::new(group.names().to_vec(), vec![e], vec![e; n], vec![e; n]);
    for a in 0..n {
        raw.inv[a] = group.inv(a);
        for b in 0..n {
            raw.set(a, b, group.mul(a, b));
        }
    }
    raw.into_groupoid()
}

/// A left action of a finite group on a finite set: `act[γ][x]` is `γ·x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    pub group: FiniteGroup,
    pub points: Vec<String>,
    pub act: Vec<Vec<usize>>,
}

impl GroupAction {
    /// The trivial group acting on points `1..=n`.
    pub fn trivial(n: usize) -> Self {
        Self {
            group: FiniteGroup::trivial(),
            points: (1..=n).map(|i| i.to_string()).collect(),
            act: vec![(0..n).collect()],
        }
    }

    /// `Z_2` swapping the points `1` and `2`.
    pub fn z2_swap() -> Self {
        Self::rotation(2)
    }

    /// `Z_n` rotating the points `1..=n`.
    pub fn rotation(n: usize) -> Self {
        Self {
            group: FiniteGroup::cyclic(n),
            points: (1..=n).map(|i| i.to_string()).collect(),
            act: (0..n).map(|g| (0..n).map(|x| (x + g) % n).collect()).collect(),
        }
    }

    /// Checks that the identity acts trivially and `(γδ)·x = γ·(δ·x)`.
    pub fn check(&self) -> Result<(), GroupoidError> {
        let (ng, nx) = (self.group.order(), self.points.len());
        if self.act.len() != ng || self.act.iter().any(|row| row.len() != nx || row.iter().any(|&y| y >= nx)) {
            return Err(GroupoidError::NotAnAction("action table has the wrong shape".into()));
        }
        let e = self.group.identity();
        if let Some(x) = (0..nx).find(|&x| self.act[e][x] != x) {
            return Err(GroupoidError::NotAnAction(format!(
                "identity moves {}",
                self.points[x]
            )));
        }
        for g in 0..ng {
            for h in 0..ng {
                for x in 0..nx {
                    if self.act[self.group.mul(g, h)][x] != self.act[g][self.act[h][x]] {
                        return Err(GroupoidError::NotAnAction(format!(
                            "({},{}) at {}",
                            self.group.name(g),
                            self.group.name(h),
                            self.points[x]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Transformation groupoid `X ⋊ Γ`: arrows `(x,γ)` from `x` to `γ·x`, with
/// `(x,e)` named `x`.
pub fn make_transformation_groupoid(action: &GroupAction) -> Result<FiniteGroupoid, GroupoidError> {
    action.check()?;
    let group = &action.group;
    let (ng, nx) = (group.order(), action.points.len());
    let e = group.identity();
    let id = |x: usize, g: usize| x * ng + g;
    let mut names = Vec::with_capacity(nx * ng);
    let (mut src, mut dst) = (Vec::new(), Vec::new());
    for x in 0..nx {
        for g in 0..ng {
            names.push(if g == e {
                action.points[x].clone()
            } else {
                format!("({},{})", action.points[x], group.name(g))
            });
            src.push(id(x, e));
            dst.push(id(action.act[g][x], e));
        }
    }
    let units = (0..nx).map(|x| id(x, e)).collect();
    let mut raw = RawTables::new(names, units, src, dst);
    for x in 0..nx {
        for g in 0..ng {
            let gx = action.act[g][x];
            raw.inv[id(x, g)] = id(gx, group.inv(g));
            for d in 0..ng {
                raw.set(id(gx, d), id(x, g), id(x, group.mul(d, g)));
            }
        }
    }
    Ok(raw.into_groupoid())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::validate_groupoid;

    #[test]
    fn pair_groupoid_counts() {
        let one = make_pair_groupoid(1);
        assert_eq!((one.units().len(), one.len()), (1, 1));
        let two = make_pair_groupoid(2);
        assert_eq!((two.units().len(), two.len()), (2, 4));
        let four = make_pair_groupoid(4);
        let brute = (0..16)
            .flat_map(|g| (0..16).map(move |h| (g, h)))
            .filter(|&(g, h)| four.src(g) == four.dst(h))
            .count();
        assert_eq!(brute, 64);
        assert_eq!(four.composable_pairs().pairs.len(), 64);
        let g = four.index_of("(1,2)").unwrap();
        let h = four.index_of("(2,3)").unwrap();
        assert_eq!(four.name(four.compose(g, h).unwrap()), "(1,3)");
    }

    #[test]
    fn constructors_produce_valid_groupoids() {
        for g in [
            make_pair_groupoid(3),
            make_group_groupoid(&FiniteGroup::abelian(&[2, 2]).unwrap()),
            make_transformation_groupoid(&GroupAction::rotation(3)).unwrap(),
        ] {
            validate_groupoid(&g.to_file()).unwrap();
        }
    }

    #[test]
    fn klein_four_groupoid_is_fully_composable() {
        let g = make_group_groupoid(&FiniteGroup::abelian(&[2, 2]).unwrap());
        assert_eq!((g.units().len(), g.len()), (1, 4));
        assert_eq!(g.composable_pairs().pairs.len(), 16);
    }

    #[test]
    fn swap_and_trivial_actions() {
        let swap = make_transformation_groupoid(&GroupAction::z2_swap()).unwrap();
        assert_eq!((swap.units().len(), swap.len()), (2, 4));
        let discrete = make_transformation_groupoid(&GroupAction::trivial(5)).unwrap();
        assert_eq!(discrete.len(), 5);
        assert!((0..5).all(|g| discrete.is_unit(g)));
    }

    #[test]
    fn rotation_orbit_by_brute_force() {
        let g = make_transformation_groupoid(&GroupAction::rotation(3)).unwrap();
        let one = g.index_of("1").unwrap();
        let mut orbit: Vec<&str> = (0..g.len()).filter(|&a| g.src(a) == one).map(|a| g.name(g.dst(a))).collect();
        orbit.sort();
        orbit.dedup();
        assert_eq!(orbit, vec!["1", "2", "3"]);
    }

    #[test]
    fn broken_action_is_rejected() {
        let mut a = GroupAction::rotation(3);
        a.act[1][0] = 0;
        assert!(matches!(make_transformation_groupoid(&a), Err(GroupoidError::NotAnAction(_))));
    }
}
