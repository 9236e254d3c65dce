//! Deterministic random generators shared by the integration tests.

use plectra_algebra::graded::Element;
use plectra_algebra::multimap::canonical_tuples;
use plectra_algebra::{GradedSpace, MultiMap, Rat, Symmetry};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::Arc;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// A random space with `dim` basis vectors and degrees in `-2..=2`.
pub fn random_space(r: &mut StdRng, dim: usize) -> Arc<GradedSpace> {
    let basis: Vec<(String, i64)> = (0..dim)
        .map(|i| (format!("e{i}"), r.gen_range(-1..=1)))
        .collect();
    GradedSpace::new(basis).unwrap()
}

/// A random homogeneous element of the requested degree (zero if the space
/// has no basis vectors there).
pub fn random_element(r: &mut StdRng, space: &Arc<GradedSpace>, degree: i64) -> Element {
    let mut el = Element::zero(space);
    for i in 0..space.dim() {
        if space.degree(i) == degree {
            el.add_term(i, Rat::from_int(r.gen_range(-3..=3)));
        }
    }
    el
}

/// A random multimap with the given shape; roughly half of the canonical
/// tuples receive a nonzero value when the target degree is populated.
pub fn random_multimap(
    r: &mut StdRng,
    space: &Arc<GradedSpace>,
    arity: usize,
    degree: i64,
    symmetry: Symmetry,
) -> MultiMap {
    let mut m = MultiMap::zero(space, arity, degree, symmetry);
    for tuple in canonical_tuples(space, arity, symmetry) {
        if r.gen_bool(0.8) {
            let target: i64 = degree + tuple.iter().map(|&i| space.degree(i)).sum::<i64>();
            let v = random_element(r, space, target);
            if !v.is_zero() {
                m.insert(&tuple, v).unwrap();
            }
        }
    }
    m
}
