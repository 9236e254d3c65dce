//! Truncated symmetric tensor coalgebras.
//!
//! Words are multisets of basis vectors, canonically sorted with the Koszul
//! sign of the sorting permutation absorbed into the coefficient; a repeated
//! odd-degree factor kills a word. Everything is truncated at word length `N`:
//! identities asserted by the checkers hold up to that length.

use crate::graded::{Element, GradedSpace};
use crate::multimap::{canonical_tuples, MultiMap, MultiMapError};
use crate::ops::Symmetry;
use crate::perm::{sorting_permutation, unshuffles, Permutation};
use crate::rat::{factorial, Rat};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoalgebraError {
    #[error("all components must be symmetric multimaps of a common degree")]
    MixedComponents,
    #[error("morphism components must have degree 0, found {0}")]
    NonzeroDegree(i64),
    #[error("exponential needs a degree 0 coderivation with vanishing arity-1 part")]
    NotFiltrationLowering,
    #[error(transparent)]
    MultiMap(#[from] MultiMapError),
}

/// A canonically sorted word `x_{i_1} (.) ... (.) x_{i_k}`, `i_1 <= ... <= i_k`.
pub type Word = Vec<usize>;

/// A sparse rational combination of words.
pub type WordSum = BTreeMap<Word, Rat>;

/// A sparse combination of word pairs, the shape of coproduct values.
pub type PairSum = BTreeMap<(Word, Word), Rat>;

fn bump<K: Ord>(sum: &mut BTreeMap<K, Rat>, key: K, c: Rat) {
    if c.is_zero() {
        return;
    }
    let entry = sum.entry(key).or_insert_with(Rat::zero);
    *entry += &c;
}

fn prune<K: Ord>(sum: &mut BTreeMap<K, Rat>) {
    sum.retain(|_, c| !c.is_zero());
}

/// Sort a raw factor sequence into a canonical word, returning the Koszul
/// sign, or `None` when a repeated odd factor forces the word to vanish.
pub fn canonical_word(space: &GradedSpace, factors: &[usize]) -> Option<(Word, i64)> {
    let degs = space.degrees_of(factors);
    let (sorted, sigma) = sorting_permutation(factors);
    for w in sorted.windows(2) {
        if w[0] == w[1] && space.degree(w[0]).rem_euclid(2) == 1 {
            return None;
        }
    }
    let sign = sigma.koszul_sign(&degs).unwrap();
    Some((sorted, sign))
}

pub fn word_degree(space: &GradedSpace, word: &[usize]) -> i64 {
    word.iter().map(|&i| space.degree(i)).sum()
}

/// All canonical words of length `1..=max_len`.
pub fn basis_words(space: &GradedSpace, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        out.extend(canonical_tuples(space, len, Symmetry::Symmetric));
    }
    out
}

/// The reduced unshuffle coproduct of a single word:
/// `Xi(x_1 ... x_n) = sum_{i=1}^{n-1} sum_{sigma in ush(i, n-i)} eps(sigma)
/// (left block) (x) (right block)`. Length-1 words map to zero.
pub fn unshuffle_coproduct(space: &GradedSpace, word: &[usize]) -> PairSum {
    let mut out = PairSum::new();
    let n = word.len();
    if n < 2 {
        return out;
    }
    let degs = space.degrees_of(word);
    for i in 1..n {
        for sigma in unshuffles(&[i, n - i]).unwrap() {
            let sign = sigma.koszul_sign(&degs).unwrap();
            let permuted = sigma.apply(word);
            let Some((left, sl)) = canonical_word(space, &permuted[..i]) else {
                continue;
            };
            let Some((right, sr)) = canonical_word(space, &permuted[i..]) else {
                continue;
            };
            bump(&mut out, (left, right), Rat::from_int(sign * sl * sr));
        }
    }
    prune(&mut out);
    out
}

/// Arity-indexed symmetric components of a common degree; the corestrictions
/// of a coderivation.
#[derive(Debug, Clone)]
pub struct CoderSpec {
    pub degree: i64,
    pub components: BTreeMap<usize, MultiMap>,
}

impl CoderSpec {
    pub fn new(components: BTreeMap<usize, MultiMap>) -> Result<Self, CoalgebraError> {
        let mut degree = None;
        for (arity, m) in &components {
            if m.arity() != *arity || m.symmetry() != Symmetry::Symmetric {
                return Err(CoalgebraError::MixedComponents);
            }
            if m.is_zero() {
                continue;
            }
            match degree {
                None => degree = Some(m.degree()),
                Some(d) if d != m.degree() => return Err(CoalgebraError::MixedComponents),
                _ => {}
            }
        }
        Ok(CoderSpec {
            degree: degree.unwrap_or(0),
            components,
        })
    }

    pub fn component(&self, arity: usize) -> Option<&MultiMap> {
        self.components.get(&arity)
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(|m| m.is_zero())
    }
}

/// A linear map on the truncated coalgebra, stored as a table over all basis
/// words up to the truncation length.
#[derive(Debug, Clone, PartialEq)]
pub struct WordMap {
    space: Arc<GradedSpace>,
    trunc: usize,
    table: BTreeMap<Word, WordSum>,
}

impl WordMap {
    pub fn zero(space: &Arc<GradedSpace>, trunc: usize) -> Self {
        WordMap {
            space: space.clone(),
            trunc,
            table: BTreeMap::new(),
        }
    }

    pub fn identity(space: &Arc<GradedSpace>, trunc: usize) -> Self {
        let mut m = WordMap::zero(space, trunc);
        for w in basis_words(space, trunc) {
            m.table.insert(w.clone(), BTreeMap::from([(w, Rat::one())]));
        }
        m
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn set(&mut self, word: Word, value: WordSum) {
        let value: WordSum = value.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if value.is_empty() {
            self.table.remove(&word);
        } else {
            self.table.insert(word, value);
        }
    }

    pub fn apply_word(&self, word: &[usize]) -> WordSum {
        self.table.get(word).cloned().unwrap_or_default()
    }

    pub fn apply(&self, sum: &WordSum) -> WordSum {
        let mut out = WordSum::new();
        for (w, c) in sum {
            for (w2, c2) in self.apply_word(w) {
                bump(&mut out, w2, c * &c2);
            }
        }
        prune(&mut out);
        out
    }

    /// `self . inner` as word maps.
    pub fn compose(&self, inner: &WordMap) -> WordMap {
        let mut out = WordMap::zero(&self.space, self.trunc);
        for (w, sum) in &inner.table {
            out.set(w.clone(), self.apply(sum));
        }
        out
    }

    pub fn add(&self, other: &WordMap) -> WordMap {
        let mut out = self.clone();
        for (w, sum) in &other.table {
            let mut acc = out.apply_word(w);
            for (w2, c) in sum {
                bump(&mut acc, w2.clone(), c.clone());
            }
            out.set(w.clone(), acc);
        }
        out
    }

    pub fn sub(&self, other: &WordMap) -> WordMap {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> WordMap {
        let mut out = WordMap::zero(&self.space, self.trunc);
        if c.is_zero() {
            return out;
        }
        for (w, sum) in &self.table {
            out.set(w.clone(), sum.iter().map(|(k, v)| (k.clone(), v * c)).collect());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.table.values().all(|s| s.is_empty())
    }

    /// Collect the arity-indexed corestrictions (the length-1 parts of each
    /// image) as multimaps of the given homogeneous degree.
    pub fn corestrict(&self, degree: i64) -> Result<CoderSpec, CoalgebraError> {
        let mut components = BTreeMap::new();
        for arity in 1..=self.trunc {
            let mut m = MultiMap::zero(&self.space, arity, degree, Symmetry::Symmetric);
            for w in canonical_tuples(&self.space, arity, Symmetry::Symmetric) {
                let image = self.apply_word(&w);
                let mut el = Element::zero(&self.space);
                for (w2, c) in image {
                    if w2.len() == 1 {
                        el.add_term(w2[0], c);
                    }
                }
                if !el.is_zero() {
                    m.insert(&w, el)?;
                }
            }
            if !m.is_zero() {
                components.insert(arity, m);
            }
        }
        CoderSpec::new(components)
    }
}

/// Prepend an element factor onto a residual word, canonicalizing each term.
fn element_times_word(space: &GradedSpace, el: &Element, rest: &[usize], coeff: &Rat, out: &mut WordSum) {
    for (i, c) in el.terms() {
        let mut raw = Vec::with_capacity(rest.len() + 1);
        raw.push(i);
        raw.extend_from_slice(rest);
        if let Some((word, sign)) = canonical_word(space, &raw) {
            bump(out, word, (coeff * c).signed(sign));
        }
    }
}

fn partitions_sorted(m: usize, l: usize) -> Vec<Vec<usize>> {
    fn rec(m: usize, l: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if l == 0 {
            if m == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in min..=m {
            if m < k * l {
                break;
            }
            cur.push(k);
            rec(m - k, l - 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, l, 1, &mut Vec::new(), &mut out);
    out
}

// Expand a product of degree 0 element factors into canonical words.
fn expand_product(space: &GradedSpace, factors: &[Element], coeff: &Rat, out: &mut WordSum) {
    fn rec(
        space: &GradedSpace,
        factors: &[Element],
        pos: usize,
        raw: &mut Vec<usize>,
        coeff: &Rat,
        out: &mut WordSum,
    ) {
        if pos == factors.len() {
            if let Some((word, sign)) = canonical_word(space, raw) {
                bump(out, word, coeff.signed(sign));
            }
            return;
        }
        for (i, c) in factors[pos].terms() {
            raw.push(i);
            rec(space, factors, pos + 1, raw, &(coeff * c), out);
            raw.pop();
        }
    }
    rec(space, factors, 0, &mut Vec::new(), coeff, out);
}

/// Unique lift of symmetric degree 0 components to a coalgebra morphism, as a
/// table up to the truncation: on a word of length `m`, the length-`l` part of
/// the image sums `f_{k_1}(block) (.) ... (.) f_{k_l}(block)` over sorted
/// partitions and ordered unshuffles.
pub fn lift_to_morphism(
    space: &Arc<GradedSpace>,
    components: &BTreeMap<usize, MultiMap>,
    trunc: usize,
) -> Result<WordMap, CoalgebraError> {
    for m in components.values() {
        if m.degree() != 0 {
            return Err(CoalgebraError::NonzeroDegree(m.degree()));
        }
        if m.symmetry() != Symmetry::Symmetric {
            return Err(CoalgebraError::MixedComponents);
        }
    }
    let mut out = WordMap::zero(space, trunc);
    for word in basis_words(space, trunc) {
        let degs = space.degrees_of(&word);
        let n = word.len();
        let mut image = WordSum::new();
        for l in 1..=n {
            for part in partitions_sorted(n, l) {
                if part.iter().any(|k| !components.contains_key(k)) {
                    continue;
                }
                for sigma in crate::perm::ordered_unshuffles(&part).unwrap() {
                    let sign = sigma.koszul_sign(&degs).unwrap();
                    let permuted = sigma.apply(&word);
                    let mut factors: Vec<Element> = Vec::with_capacity(l);
                    let mut start = 0;
                    let mut dead = false;
                    for &k in &part {
                        let v = components[&k].eval_basis(&permuted[start..start + k]);
                        if v.is_zero() {
                            dead = true;
                            break;
                        }
                        factors.push(v);
                        start += k;
                    }
                    if !dead {
                        expand_product(space, &factors, &Rat::from_int(sign), &mut image);
                    }
                }
            }
        }
        prune(&mut image);
        out.set(word, image);
    }
    Ok(out)
}

/// Unique lift of a `CoderSpec` to a coderivation:
/// `L(q)(x_1 ... x_n) = sum_i sum_{sigma in ush(i, n-i)} eps(sigma)
/// q_i(x_{sigma_1}, ..., x_{sigma_i}) (.) x_{sigma_{i+1}} (.) ...`.
pub fn lift_to_coderivation(space: &Arc<GradedSpace>, q: &CoderSpec, trunc: usize) -> WordMap {
    let mut out = WordMap::zero(space, trunc);
    for word in basis_words(space, trunc) {
        let degs = space.degrees_of(&word);
        let n = word.len();
        let mut image = WordSum::new();
        for i in 1..=n {
            let Some(qi) = q.component(i) else { continue };
            let sigmas = if i == n {
                vec![Permutation::identity(n)]
            } else {
                unshuffles(&[i, n - i]).unwrap()
            };
            for sigma in sigmas {
                let sign = sigma.koszul_sign(&degs).unwrap();
                let permuted = sigma.apply(&word);
                let v = qi.eval_basis(&permuted[..i]);
                if v.is_zero() {
                    continue;
                }
                element_times_word(space, &v, &permuted[i..], &Rat::from_int(sign), &mut image);
            }
        }
        prune(&mut image);
        out.set(word, image);
    }
    out
}

/// `e^{C} = sum_k C^k / k!` for the lift `C` of a degree 0 spec with vanishing
/// arity-1 part. The filtration drop makes the series finite word by word.
pub fn coder_exponential(
    space: &Arc<GradedSpace>,
    p: &CoderSpec,
    trunc: usize,
) -> Result<WordMap, CoalgebraError> {
    if p.degree != 0 || p.component(1).map_or(false, |m| !m.is_zero()) {
        return Err(CoalgebraError::NotFiltrationLowering);
    }
    let c = lift_to_coderivation(space, p, trunc);
    let mut result = WordMap::identity(space, trunc);
    let mut power = WordMap::identity(space, trunc);
    for k in 1..=trunc {
        power = c.compose(&power);
        if power.is_zero() {
            break;
        }
        result = result.add(&power.scale(&factorial(k as u64).recip()));
    }
    Ok(result)
}

/// Outcome of a structure-equation check: a pass, or the first counterexample
/// word with its residual.
#[derive(Debug, Clone)]
pub enum CheckReport {
    Pass,
    Fail { word: Word, residual: PairSum },
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        matches!(self, CheckReport::Pass)
    }
}

fn coproduct_of_sum(space: &GradedSpace, sum: &WordSum) -> PairSum {
    let mut out = PairSum::new();
    for (w, c) in sum {
        for ((l, r), c2) in unshuffle_coproduct(space, w) {
            bump(&mut out, (l, r), c * &c2);
        }
    }
    prune(&mut out);
    out
}

// (L (x) R) applied to word pairs, with the Koszul sign of moving R (of the
// given degree) across the left word.
fn pair_map(
    space: &GradedSpace,
    pairs: &PairSum,
    left: &WordMap,
    right: &WordMap,
    right_degree: i64,
) -> PairSum {
    let mut out = PairSum::new();
    for ((wl, wr), c) in pairs {
        let sign = if right_degree.rem_euclid(2) == 1 && word_degree(space, wl).rem_euclid(2) == 1 {
            -1
        } else {
            1
        };
        for (il, cl) in left.apply_word(wl) {
            for (ir, cr) in right.apply_word(wr) {
                bump(&mut out, (il.clone(), ir), (&(c * &cl) * &cr).signed(sign));
            }
        }
    }
    prune(&mut out);
    out
}

fn pair_sub(a: &PairSum, b: &PairSum) -> PairSum {
    let mut out = a.clone();
    for (k, c) in b {
        let entry = out.entry(k.clone()).or_insert_with(Rat::zero);
        *entry -= c;
    }
    prune(&mut out);
    out
}

fn pair_add(a: &PairSum, b: &PairSum) -> PairSum {
    let mut out = a.clone();
    for (k, c) in b {
        bump(&mut out, k.clone(), c.clone());
    }
    prune(&mut out);
    out
}

/// Check `Xi . F = (F (x) F) . Xi` on all basis words up to the truncation.
pub fn is_coalgebra_morphism(f: &WordMap) -> CheckReport {
    let space = f.space().clone();
    for word in basis_words(&space, f.trunc()) {
        let lhs = coproduct_of_sum(&space, &f.apply_word(&word));
        let rhs = pair_map(&space, &unshuffle_coproduct(&space, &word), f, f, 0);
        let residual = pair_sub(&lhs, &rhs);
        if !residual.is_empty() {
            return CheckReport::Fail { word, residual };
        }
    }
    CheckReport::Pass
}

/// Check the coderivation equation `Xi . Q = (Q (x) 1 + 1 (x) Q) . Xi` on all
/// basis words up to the truncation; `degree` is the degree of `Q`.
pub fn is_coderivation(q: &WordMap, degree: i64) -> CheckReport {
    let space = q.space().clone();
    let id = WordMap::identity(&space, q.trunc());
    for word in basis_words(&space, q.trunc()) {
        let lhs = coproduct_of_sum(&space, &q.apply_word(&word));
        let cop = unshuffle_coproduct(&space, &word);
        let rhs = pair_add(
            &pair_map(&space, &cop, q, &id, 0),
            &pair_map(&space, &cop, &id, q, degree),
        );
        let residual = pair_sub(&lhs, &rhs);
        if !residual.is_empty() {
            return CheckReport::Fail { word, residual };
        }
    }
    CheckReport::Pass
}

/// Iterative inverse of an invertible coalgebra morphism, built from the
/// corestriction components; composes with `f` to the identity up to the
/// truncation.
pub fn invert_morphism_words(
    f: &WordMap,
    f1_inverse: &MultiMap,
) -> Result<WordMap, CoalgebraError> {
    let space = f.space().clone();
    let trunc = f.trunc();
    let mut g: BTreeMap<usize, MultiMap> = BTreeMap::from([(1, f1_inverse.clone())]);
    for m in 2..=trunc {
        // Solve (g . f)_m = 0 for g_m:
        //   g_m = -( sum_{l=1}^{m-1} g_l . S_{l,m}(f) ) . (f1^{-1})^{(x) m}
        let partial = lift_to_morphism(&space, &g, trunc)?;
        let mut gm = MultiMap::zero(&space, m, 0, Symmetry::Symmetric);
        for w in canonical_tuples(&space, m, Symmetry::Symmetric) {
            // pre-apply f1^{-1} factorwise, then the partial composite with f
            let inv_factors: Vec<Element> = w
                .iter()
                .map(|&i| f1_inverse.eval_basis(&[i]))
                .collect();
            let mut pre = WordSum::new();
            expand_product(&space, &inv_factors, &Rat::one(), &mut pre);
            let mut val = Element::zero(&space);
            for (word2, c) in partial.apply(&f.apply(&pre)) {
                if word2.len() == 1 {
                    val.add_term(word2[0], c);
                }
            }
            if !val.is_zero() {
                gm.insert(&w, val.scale(&Rat::from_int(-1)))?;
            }
        }
        if !gm.is_zero() {
            g.insert(m, gm);
        }
    }
    lift_to_morphism(&space, &g, trunc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> Arc<GradedSpace> {
        // two even and one odd generator
        GradedSpace::new(vec![("x", 0), ("y", 0), ("t", 1)]).unwrap()
    }

    #[test]
    fn coproduct_of_singletons_and_pairs() {
        let v = space();
        assert!(unshuffle_coproduct(&v, &[0]).is_empty());
        // x . y with both even: x (x) y + y (x) x
        let cop = unshuffle_coproduct(&v, &[0, 1]);
        assert_eq!(cop.get(&(vec![0], vec![1])), Some(&Rat::one()));
        assert_eq!(cop.get(&(vec![1], vec![0])), Some(&Rat::one()));
    }

    #[test]
    fn coproduct_signs_on_odd_factors() {
        // two odd generators: Xi(s . t) = s (x) t - t (x) s
        let v = GradedSpace::new(vec![("s", 1), ("t", 1)]).unwrap();
        let cop = unshuffle_coproduct(&v, &[0, 1]);
        assert_eq!(cop.get(&(vec![0], vec![1])), Some(&Rat::one()));
        assert_eq!(cop.get(&(vec![1], vec![0])), Some(&Rat::from_int(-1)));
    }

    #[test]
    fn identity_lift_is_identity() {
        let v = space();
        let id = MultiMap::identity(&v).symmetrize();
        let lift = lift_to_morphism(&v, &BTreeMap::from([(1, id)]), 4).unwrap();
        assert_eq!(lift, WordMap::identity(&v, 4));
    }

    #[test]
    fn coassociativity_and_cocommutativity() {
        let v = space();
        for word in basis_words(&v, 5) {
            let cop = unshuffle_coproduct(&v, &word);
            // cocommutativity: B . Xi = Xi
            let mut swapped = PairSum::new();
            for ((l, r), c) in &cop {
                let sign = if word_degree(&v, l).rem_euclid(2) == 1
                    && word_degree(&v, r).rem_euclid(2) == 1
                {
                    -1
                } else {
                    1
                };
                bump(&mut swapped, (r.clone(), l.clone()), c.signed(sign));
            }
            prune(&mut swapped);
            assert_eq!(swapped, cop, "cocommutativity fails on {word:?}");
            // coassociativity: (Xi (x) 1) Xi = (1 (x) Xi) Xi as triple sums
            let mut lhs: BTreeMap<(Word, Word, Word), Rat> = BTreeMap::new();
            for ((l, r), c) in &cop {
                for ((a, b), c2) in unshuffle_coproduct(&v, l) {
                    bump(&mut lhs, (a, b, r.clone()), c * &c2);
                }
            }
            prune(&mut lhs);
            let mut rhs: BTreeMap<(Word, Word, Word), Rat> = BTreeMap::new();
            for ((l, r), c) in &cop {
                for ((b, d), c2) in unshuffle_coproduct(&v, r) {
                    bump(&mut rhs, (l.clone(), b, d), c * &c2);
                }
            }
            prune(&mut rhs);
            assert_eq!(lhs, rhs, "coassociativity fails on {word:?}");
        }
    }
}
