use std::sync::Arc;

use super::*;
use crate::circle::CircleValue;
use crate::cocycle::{try_trivialize, validate_cocycle, TwoCocycle};
use crate::groupoid::{brute_force_isomorphic, group::parse_tuple, make_group_groupoid, DEFAULT_ISO_LIMIT};
use crate::ktheory::{k0, K0Data};

fn klein_zero() -> Arc<FiniteInverseSemigroup> {
    Arc::new(FiniteInverseSemigroup::group_with_zero(&FiniteGroup::abelian(&[2, 2]).unwrap()).unwrap())
}

fn diamond() -> FiniteInverseSemigroup {
    // {0, e, f, 1} with ef = 0
    let meet = [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]];
    let names = ["0", "e", "f", "1"].map(String::from).to_vec();
    FiniteInverseSemigroup::from_table(names, meet.iter().flatten().copied().collect(), 0).unwrap()
}

/// Clock-shift values on the group part of `G⁰`, at the single character.
fn bilinear_action(s: &Arc<FiniteInverseSemigroup>) -> SemigroupTwistedAction {
    let mut a = canonical_action(s).unwrap();
    for p in 0..s.len() {
        for q in 0..s.len() {
            if p == s.zero() || q == s.zero() {
                continue;
            }
            let (u, v) = (parse_tuple(s.name(p)).unwrap(), parse_tuple(s.name(q)).unwrap());
            a.set_omega(p, q, 0, CircleValue::turns(u[1] * v[0], 2));
        }
    }
    a
}

#[test]
fn group_with_zero_is_inverse() {
    let g = FiniteGroup::abelian(&[2, 2]).unwrap();
    let s = FiniteInverseSemigroup::group_with_zero(&g).unwrap();
    for x in 0..g.order() {
        assert_eq!(s.star(x), g.inv(x));
    }
    assert_eq!(s.star(s.zero()), s.zero());
    let again = validate_inverse_semigroup(&s.to_file()).unwrap();
    assert_eq!(again, s);
}

#[test]
fn chain_star_is_identity() {
    let s = FiniteInverseSemigroup::chain(&["0", "e", "1"]).unwrap();
    assert!((0..3).all(|x| s.star(x) == x));
}

#[test]
fn two_inverses_rejected() {
    // left-zero band {a, b} with an adjoined zero
    let file = SemigroupFile {
        elements: vec!["0".into(), "a".into(), "b".into()],
        table: vec![
            vec!["0".into(), "0".into(), "0".into()],
            vec!["0".into(), "a".into(), "a".into()],
            vec!["0".into(), "b".into(), "b".into()],
        ],
        zero: "0".into(),
    };
    match validate_inverse_semigroup(&file) {
        Err(SemigroupError::NotInverseSemigroup { reason, witness }) => {
            assert_eq!(reason, "generalized inverse is not unique");
            assert_eq!(witness, vec!["a", "a", "b"]);
        }
        other => panic!("expected NotInverseSemigroup, got {other:?}"),
    }
}

#[test]
fn natural_orders() {
    let s = klein_zero();
    let o = natural_order(&s);
    assert!(o.is_partial_order());
    for a in 0..s.len() {
        assert!(o.le(s.zero(), a));
        for b in 0..s.len() {
            if a != b && a != s.zero() && b != s.zero() {
                assert!(!o.le(a, b));
            }
        }
    }
    let c = FiniteInverseSemigroup::chain(&["0", "e", "1"]).unwrap();
    let o = natural_order(&c);
    assert!(o.le(0, 1) && o.le(1, 2) && o.le(0, 2) && !o.le(2, 1));
    let d = diamond();
    let o = natural_order(&d);
    assert!(!o.le(1, 2) && !o.le(2, 1) && o.le(1, 3));
}

#[test]
fn spectra() {
    let two = FiniteInverseSemigroup::chain(&["0", "1"]).unwrap();
    assert_eq!(spectrum(&two).unwrap().len(), 1);
    let chain = FiniteInverseSemigroup::chain(&["0", "e", "1"]).unwrap();
    let names: Vec<String> = spectrum(&chain).unwrap().iter().map(|c| c.name(&chain)).collect();
    assert_eq!(names, vec!["{1}", "{e,1}"]);
    assert_eq!(spectrum(&diamond()).unwrap().len(), 3);
}

#[test]
fn canonical_action_of_group_with_zero() {
    let s = klein_zero();
    let a = canonical_action(&s).unwrap();
    assert_eq!(a.space().len(), 1);
    for g in 0..s.len() {
        if g == s.zero() {
            assert!(a.domain(g).is_empty());
        } else {
            assert_eq!(a.theta(g, 0), Some(0));
        }
    }
    validate_twisted_action(&a, 1e-9).unwrap();
}

#[test]
fn symmetric_inverse_monoid_domains() {
    let s = Arc::new(FiniteInverseSemigroup::symmetric_inverse_monoid(2).unwrap());
    assert_eq!(s.len(), 7);
    let a = canonical_action(&s).unwrap();
    validate_twisted_action(&a, 1e-9).unwrap();
    assert_eq!(a.space().len(), 3);
    let size = |name: &str| a.domain(s.index_of(name).unwrap()).len();
    assert_eq!(size("[-,-]"), 0);
    assert_eq!(size("[1,2]"), 3);
    assert_eq!(size("[2,1]"), 3);
    for name in ["[1,-]", "[-,2]", "[2,-]", "[-,1]"] {
        assert_eq!(size(name), 1);
    }
    let gg = germ_groupoid(&a).unwrap();
    let g = &gg.groupoid;
    assert_eq!(g.units().len(), 3);
    assert_eq!(g.len(), 6);
    let top = g.index_of("{[1,2]}").unwrap();
    assert_eq!(g.isotropy(top).unwrap().order(), 2);
    assert_eq!(k0(g, &TwoCocycle::trivial(g.clone())).unwrap().block_sizes, vec![1, 1, 2]);
}

#[test]
fn germs_of_group_with_zero_form_the_group() {
    let s = klein_zero();
    let gg = germ_groupoid(&canonical_action(&s).unwrap()).unwrap();
    let group = make_group_groupoid(&FiniteGroup::abelian(&[2, 2]).unwrap());
    assert!(brute_force_isomorphic(&gg.groupoid, &group, DEFAULT_ISO_LIMIT).unwrap().is_some());
    // germ(s, θ_t x)·germ(t, x) = germ(st, x)
    let a = canonical_action(&s).unwrap();
    for p in 0..s.len() {
        for q in 0..s.len() {
            let (Some(gq), Some(y)) = (gg.germ(q, 0), a.theta(q, 0)) else { continue };
            let Some(gp) = gg.germ(p, y) else { continue };
            assert_eq!(gg.groupoid.compose(gp, gq), gg.germ(s.mul(p, q), 0));
        }
    }
}

#[test]
fn germs_of_semilattice_are_units() {
    let s = Arc::new(FiniteInverseSemigroup::chain(&["0", "e", "1"]).unwrap());
    let gg = germ_groupoid(&canonical_action(&s).unwrap()).unwrap();
    assert_eq!(gg.groupoid.len(), 2);
    assert_eq!(gg.groupoid.units().len(), 2);
}

#[test]
fn induced_bilinear_cocycle_is_m2() {
    let s = klein_zero();
    let a = bilinear_action(&s);
    validate_twisted_action(&a, 1e-9).unwrap();
    let (gg, w) = induced_cocycle_on_germs(&a, 1e-9).unwrap();
    validate_cocycle(&w, 1e-9).unwrap();
    for p in 0..4 {
        for q in 0..4 {
            let (gp, gq) = (gg.germ(p, 0).unwrap(), gg.germ(q, 0).unwrap());
            assert_eq!(w.at(gp, gq), a.omega(p, q, 0));
        }
    }
    assert_eq!(k0(&gg.groupoid, &w).unwrap(), K0Data::from_blocks(vec![2]));
}

#[test]
fn trivial_omega_induces_one() {
    let s = Arc::new(FiniteInverseSemigroup::symmetric_inverse_monoid(2).unwrap());
    let (_, w) = induced_cocycle_on_germs(&canonical_action(&s).unwrap(), 1e-9).unwrap();
    assert!(w.is_constant_one());
}

#[test]
fn coboundary_action_induces_coboundary() {
    let s = klein_zero();
    let b = |p: usize| if p == 0 { CircleValue::one() } else { CircleValue::turns(p as i64, 6) };
    let mut a = canonical_action(&s).unwrap();
    for p in 0..4 {
        for q in 0..4 {
            a.set_omega(p, q, 0, b(p).mul(b(q)).div(b(s.mul(p, q))));
        }
    }
    validate_twisted_action(&a, 1e-9).unwrap();
    let (_, w) = induced_cocycle_on_germs(&a, 1e-9).unwrap();
    assert!(!w.is_constant_one());
    assert!(try_trivialize(&w, 6).unwrap().is_coboundary());
}

#[test]
fn perturbed_omega_names_quadruple() {
    let s = klein_zero();
    let (p, q) = (s.index_of("(0,1)").unwrap(), s.index_of("(1,0)").unwrap());
    let a = bilinear_action(&s);
    let bad = a.clone().with_omega(p, q, 0, a.omega(p, q, 0).mul(CircleValue::turns(1, 4)));
    match validate_twisted_action(&bad, 1e-9) {
        Err(SemigroupError::CocycleViolation { condition: 2, witness, deviation }) => {
            assert_eq!(witness.len(), 4);
            assert!(deviation > 0.1);
        }
        other => panic!("expected CocycleViolation, got {other:?}"),
    }
}

#[test]
fn broken_composition_is_action_violation() {
    let s = Arc::new(FiniteInverseSemigroup::symmetric_inverse_monoid(2).unwrap());
    let a = canonical_action(&s).unwrap();
    let swap = s.index_of("[2,1]").unwrap();
    let y = a.theta(swap, 0).unwrap();
    let bad = a.with_theta(swap, 0, Some((y + 1) % 3));
    assert!(matches!(validate_twisted_action(&bad, 1e-9), Err(SemigroupError::ActionViolation { .. })));
}

#[test]
fn ill_defined_germ_is_reported() {
    // on the chain, [1,χ] = [e,χ] at the top character, but ω can tell them apart
    let s = Arc::new(FiniteInverseSemigroup::chain(&["0", "e", "1"]).unwrap());
    let a = canonical_action(&s).unwrap();
    let x = a.space().iter().position(|p| p == "{e,1}").unwrap();
    let a = a.with_omega(1, 1, x, CircleValue::turns(1, 2));
    assert!(matches!(induced_cocycle_on_germs(&a, 1e-9), Err(SemigroupError::IllDefinedGerm(..))));
}

#[test]
fn hausdorff_listing() {
    let s = klein_zero();
    let r = hausdorff_check(&canonical_action(&s).unwrap());
    let c = r.check("closed[(0,1)]").unwrap();
    assert_eq!(c.detail.as_deref(), Some("{} closed in {{(0,0)}}"));
    let chain = Arc::new(FiniteInverseSemigroup::chain(&["0", "e", "1"]).unwrap());
    let r = hausdorff_check(&canonical_action(&chain).unwrap());
    assert_eq!(r.check("closed[e]").unwrap().detail.as_deref(), Some("{{e,1}} closed in {{e,1}}"));
}

#[test]
fn action_file_round_trip() {
    let s = klein_zero();
    let a = bilinear_action(&s);
    let f = a.to_file();
    let json = serde_json::to_string(&f).unwrap();
    let back: TwistedActionFile = serde_json::from_str(&json).unwrap();
    assert_eq!(SemigroupTwistedAction::from_file(s, &back).unwrap(), a);
}
