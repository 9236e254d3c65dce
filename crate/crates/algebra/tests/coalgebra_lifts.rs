//! Lifts to coalgebra morphisms and coderivations, corestriction round trips,
//! exponentials, and the structure-equation checkers, at truncation N = 5.

mod common;

use common::{random_multimap, random_space, rng};
use plectra_algebra::coalgebra::{
    basis_words, coder_exponential, invert_morphism_words, is_coalgebra_morphism, is_coderivation,
    lift_to_coderivation, lift_to_morphism, CoderSpec, WordMap,
};
use plectra_algebra::{MultiMap, Rat, Symmetry};
use rand::Rng;
use std::collections::BTreeMap;

const TRUNC: usize = 5;

#[test]
fn coderivation_lift_round_trips_and_checks() {
    let mut r = rng(201);
    for _ in 0..10 {
        let space = random_space(&mut r, 3);
        let deg = r.gen_range(-1..=1);
        let mut comps = BTreeMap::new();
        for arity in 1..=3usize {
            let m = random_multimap(&mut r, &space, arity, deg, Symmetry::Symmetric);
            if !m.is_zero() {
                comps.insert(arity, m);
            }
        }
        let Ok(q) = CoderSpec::new(comps) else { continue };
        if q.is_zero() {
            continue;
        }
        let lifted = lift_to_coderivation(&space, &q, TRUNC);
        assert!(
            is_coderivation(&lifted, q.degree).passed(),
            "lift fails the coderivation equation"
        );
        // corestriction returns the input components
        let back = lifted.corestrict(q.degree).unwrap();
        for arity in 1..=3usize {
            match (q.component(arity), back.component(arity)) {
                (Some(a), Some(b)) => assert_eq!(a, b),
                (Some(a), None) => assert!(a.is_zero()),
                (None, Some(b)) => assert!(b.is_zero()),
                (None, None) => {}
            }
        }
    }
}

#[test]
fn leibniz_expansion_of_unary_lift() {
    // q = (d, 0, ...) on a 2-word expands by the Leibniz rule with Koszul sign
    let space = plectra_algebra::GradedSpace::new(vec![("a", 1), ("b", 0)]).unwrap();
    let mut d = MultiMap::zero(&space, 1, 1, Symmetry::Symmetric);
    // d b = a
    d.insert(&[1], plectra_algebra::Element::basis_vec(&space, 0)).unwrap();
    let q = CoderSpec::new(BTreeMap::from([(1, d)])).unwrap();
    let lifted = lift_to_coderivation(&space, &q, 3);
    // on b . b : d(b) . b + b . d(b) = 2 a . b
    let img = lifted.apply_word(&[1, 1]);
    assert_eq!(img.get(&vec![0, 1]), Some(&Rat::from_int(2)));
    // on a . b : d(b) lands on the odd slot: a . a vanishes, d(a) = 0
    let img = lifted.apply_word(&[0, 1]);
    assert!(img.is_empty());
}

#[test]
fn binary_lift_on_short_words_is_the_component() {
    let mut r = rng(202);
    let space = random_space(&mut r, 3);
    let q2 = random_multimap(&mut r, &space, 2, 0, Symmetry::Symmetric);
    let spec = CoderSpec::new(BTreeMap::from([(2, q2.clone())])).unwrap();
    let lifted = lift_to_coderivation(&space, &spec, 4);
    for w in basis_words(&space, 2) {
        if w.len() != 2 {
            continue;
        }
        let img = lifted.apply_word(&w);
        let expect = q2.eval_basis(&w);
        for (word, c) in img {
            assert_eq!(word.len(), 1);
            assert_eq!(expect.coeff(word[0]), c);
        }
    }
}

#[test]
fn morphism_lift_checks_and_corrupted_lift_fails() {
    let mut r = rng(203);
    let space = random_space(&mut r, 3);
    let id = MultiMap::identity(&space).symmetrize();
    let f2 = random_multimap(&mut r, &space, 2, 0, Symmetry::Symmetric);
    let comps = BTreeMap::from([(1, id), (2, f2)]);
    let lifted = lift_to_morphism(&space, &comps, TRUNC).unwrap();
    assert!(is_coalgebra_morphism(&lifted).passed());

    // corrupt one sign in the image of one word
    let mut broken = lifted.clone();
    let mut found = None;
    for w in basis_words(&space, TRUNC) {
        let img = broken.apply_word(&w);
        if w.len() >= 2 && !img.is_empty() {
            found = Some(w);
            break;
        }
    }
    let w = found.expect("nontrivial word image");
    let mut img = broken.apply_word(&w);
    let (first, c) = img.iter().next().map(|(k, v)| (k.clone(), v.clone())).unwrap();
    img.insert(first, c.signed(-1));
    broken.set(w.clone(), img);
    match is_coalgebra_morphism(&broken) {
        plectra_algebra::coalgebra::CheckReport::Pass => panic!("corruption not detected"),
        plectra_algebra::coalgebra::CheckReport::Fail { word, .. } => {
            assert!(word.len() >= 2, "witness should be a composite word");
        }
    }
}

#[test]
fn strict_lift_of_invertible_component_is_wordwise() {
    // f = (f1, 0, ...) with f1 invertible acts factorwise on words
    let space = plectra_algebra::GradedSpace::new(vec![("a", 0), ("b", 0)]).unwrap();
    let mut f1 = MultiMap::zero(&space, 1, 0, Symmetry::Symmetric);
    // f1 = [[1,1],[0,1]] in the (a, b) basis
    f1.insert(&[0], plectra_algebra::Element::basis_vec(&space, 0)).unwrap();
    let b_img = plectra_algebra::Element::from_terms(
        &space,
        [(0, Rat::one()), (1, Rat::one())],
    );
    f1.insert(&[1], b_img).unwrap();
    let lifted = lift_to_morphism(&space, &BTreeMap::from([(1, f1.clone())]), 3).unwrap();
    // on the word b . b : (a + b)(a + b) = a.a + 2 a.b + b.b
    let img = lifted.apply_word(&[1, 1]);
    assert_eq!(img.get(&vec![0, 0]), Some(&Rat::one()));
    assert_eq!(img.get(&vec![0, 1]), Some(&Rat::from_int(2)));
    assert_eq!(img.get(&vec![1, 1]), Some(&Rat::one()));
}

#[test]
fn iterative_inverse_composes_to_identity() {
    let mut r = rng(204);
    for _ in 0..6 {
        let space = random_space(&mut r, 3);
        // invertible f1 = identity + nilpotent-ish random degree 0 part is
        // risky to build randomly; use identity to keep it exactly invertible
        let id = MultiMap::identity(&space).symmetrize();
        let f2 = random_multimap(&mut r, &space, 2, 0, Symmetry::Symmetric);
        let f3 = random_multimap(&mut r, &space, 3, 0, Symmetry::Symmetric);
        let comps = BTreeMap::from([(1, id.clone()), (2, f2), (3, f3)]);
        let f = lift_to_morphism(&space, &comps, 4).unwrap();
        let g = invert_morphism_words(&f, &id).unwrap();
        assert!(is_coalgebra_morphism(&g).passed());
        assert_eq!(g.compose(&f), WordMap::identity(&space, 4), "g . f != id");
        assert_eq!(f.compose(&g), WordMap::identity(&space, 4), "f . g != id");
    }
}

#[test]
fn exponential_of_zero_and_inverse_pair() {
    let mut r = rng(205);
    let space = random_space(&mut r, 3);
    let zero = CoderSpec::new(BTreeMap::new()).unwrap();
    assert_eq!(
        coder_exponential(&space, &zero, TRUNC).unwrap(),
        WordMap::identity(&space, TRUNC)
    );

    let p2 = random_multimap(&mut r, &space, 2, 0, Symmetry::Symmetric);
    let p3 = random_multimap(&mut r, &space, 3, 0, Symmetry::Symmetric);
    let p = CoderSpec::new(BTreeMap::from([(2, p2.clone()), (3, p3.clone())])).unwrap();
    let minus = CoderSpec::new(BTreeMap::from([
        (2, p2.scale(&Rat::from_int(-1))),
        (3, p3.scale(&Rat::from_int(-1))),
    ]))
    .unwrap();
    let e = coder_exponential(&space, &p, TRUNC).unwrap();
    let e_inv = coder_exponential(&space, &minus, TRUNC).unwrap();
    assert!(is_coalgebra_morphism(&e).passed());
    assert_eq!(e.compose(&e_inv), WordMap::identity(&space, TRUNC));
    assert_eq!(e_inv.compose(&e), WordMap::identity(&space, TRUNC));
    // with p1 = 0 the first corestriction of e^{C_p} is the projection
    let spec = e.corestrict(0).unwrap();
    assert_eq!(spec.component(1), Some(&MultiMap::identity(&space).symmetrize()));
}

#[test]
fn exponential_rejects_nonzero_arity_one() {
    let mut r = rng(206);
    let space = random_space(&mut r, 3);
    let mut p1 = random_multimap(&mut r, &space, 1, 0, Symmetry::Symmetric);
    while p1.is_zero() {
        p1 = random_multimap(&mut r, &space, 1, 0, Symmetry::Symmetric);
    }
    let p = CoderSpec::new(BTreeMap::from([(1, p1)])).unwrap();
    assert!(coder_exponential(&space, &p, TRUNC).is_err());
}
