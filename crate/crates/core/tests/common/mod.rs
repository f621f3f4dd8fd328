#![allow(dead_code)]

use std::sync::Arc;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use etale_twist::circle::CircleValue;
use etale_twist::cocycle::{OneCochain, TwoCocycle};
use etale_twist::groupoid::group::parse_tuple;
use etale_twist::groupoid::{
    make_group_groupoid, make_pair_groupoid, make_transformation_groupoid, FiniteGroup, FiniteGroupoid, GroupAction,
};
use etale_twist::semidirect::{build_semidirect_groupoid, DirectedAction};
use etale_twist::semigroup::{canonical_action, germ_groupoid, FiniteInverseSemigroup};

pub const FIXTURES: usize = 9;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn group(moduli: &[usize]) -> Arc<FiniteGroupoid> {
    Arc::new(make_group_groupoid(&FiniteGroup::abelian(moduli).unwrap()))
}

/// `ω(x, y) = exp(2πi · x₁y₀ / n)` on `Z_n × Z_n`.
pub fn clock_shift(n: usize) -> (Arc<FiniteGroupoid>, TwoCocycle) {
    let g = group(&[n, n]);
    let t: Vec<Vec<i64>> = (0..g.len()).map(|a| parse_tuple(g.name(a)).unwrap()).collect();
    let w = TwoCocycle::from_fn(g.clone(), |a, b| CircleValue::turns(t[a][1] * t[b][0], n as i64));
    (g, w)
}

/// A small groupoid with a cocycle of finite order dividing 12.
pub fn fixture(i: usize) -> (Arc<FiniteGroupoid>, TwoCocycle) {
    let trivial = |g: FiniteGroupoid| {
        let g = Arc::new(g);
        (g.clone(), TwoCocycle::trivial(g))
    };
    match i % FIXTURES {
        0 => trivial(make_pair_groupoid(3)),
        1 => clock_shift(2),
        2 => clock_shift(3),
        3 => trivial(make_group_groupoid(&FiniteGroup::cyclic(6))),
        4 => trivial(make_transformation_groupoid(&GroupAction::rotation(4)).unwrap()),
        5 => trivial(FiniteGroupoid::disjoint_union(&[&make_pair_groupoid(2), &make_group_groupoid(&FiniteGroup::cyclic(3))])),
        6 => {
            let s = Arc::new(FiniteInverseSemigroup::symmetric_inverse_monoid(2).unwrap());
            let g = germ_groupoid(&canonical_action(&s).unwrap()).unwrap().groupoid;
            (g.clone(), TwoCocycle::trivial(g))
        }
        7 => trivial(build_semidirect_groupoid(&DirectedAction::global(&GroupAction::z2_swap())).unwrap().groupoid.as_ref().clone()),
        _ => {
            let (g, w) = clock_shift(2);
            let both = Arc::new(FiniteGroupoid::disjoint_union(&[&g, &make_pair_groupoid(2)]));
            let n = g.len();
            let w = TwoCocycle::from_fn(both.clone(), |a, b| if a < n && b < n { w.at(a, b) } else { CircleValue::one() });
            (both, w)
        }
    }
}

/// A 1-cochain with values `k/den` turns, trivial on units.
pub fn cochain(g: &Arc<FiniteGroupoid>, rng: &mut impl Rng, den: i64) -> OneCochain {
    let values = (0..g.len())
        .map(|a| if g.is_unit(a) { CircleValue::one() } else { CircleValue::turns(rng.random_range(0..den), den) })
        .collect();
    OneCochain::new(g.clone(), values).unwrap()
}

pub fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// `ω` transported along `perm`: arrow `g` becomes `perm[g]`.
pub fn transport(w: &TwoCocycle, target: &Arc<FiniteGroupoid>, perm: &[usize]) -> TwoCocycle {
    let n = perm.len();
    let mut back = vec![0; n];
    for (g, &p) in perm.iter().enumerate() {
        back[p] = g;
    }
    TwoCocycle::from_fn(target.clone(), |a, b| w.at(back[a], back[b]))
}

pub fn rational_turns(rng: &mut impl Rng) -> Ratio<i64> {
    Ratio::new(rng.random_range(0..24), 24)
}
