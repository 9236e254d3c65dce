//! Sparse basis-indexed multilinear maps on a finite graded space.
//!
//! A `MultiMap` stores its values on canonical basis tuples only: sorted
//! tuples for symmetric and skew maps, arbitrary tuples otherwise. Lookups on
//! permuted tuples apply the (odd) Koszul sign on the fly, so declared
//! symmetry holds by construction. Graded parity kills some squares outright:
//! a symmetric map vanishes on a repeated odd-degree label, a skew map on a
//! repeated even-degree label.

use crate::graded::{Element, GradedSpace};
use crate::ops::{MultiOp, Product, Symmetry};
use crate::perm::{sorting_permutation, Sign};
use crate::rat::Rat;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MultiMapError {
    #[error("maps live on different spaces")]
    SpaceMismatch,
    #[error("input tuple has length {got}, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("insertion slot {0} out of range 1..={1}")]
    SlotOutOfRange(usize, usize),
    #[error("output of degree {got:?} breaks homogeneity: expected {expected}")]
    InhomogeneousOutput { expected: i64, got: Option<i64> },
    #[error("symmetry sectors {0:?} and {1:?} cannot be multiplied")]
    SectorMismatch(Symmetry, Symmetry),
    #[error("operation requires {expected:?} maps, found {got:?}")]
    WrongSector { expected: Symmetry, got: Symmetry },
    #[error(transparent)]
    Graded(#[from] crate::graded::GradedError),
    #[error("bad multimap JSON: {0}")]
    BadJson(String),
}

/// A homogeneous multilinear map `V^{x arity} -> V` of fixed degree.
#[derive(Clone, PartialEq)]
pub struct MultiMap {
    space: Arc<GradedSpace>,
    arity: usize,
    degree: i64,
    symmetry: Symmetry,
    table: BTreeMap<Vec<usize>, Element>,
}

/// Result of canonicalizing a basis tuple against a symmetry sector.
enum Canonical {
    Vanishes,
    Tuple(Vec<usize>, Sign),
}

fn canonicalize(space: &GradedSpace, symmetry: Symmetry, tuple: &[usize]) -> Canonical {
    match symmetry {
        Symmetry::None => Canonical::Tuple(tuple.to_vec(), 1),
        Symmetry::Symmetric | Symmetry::Skew => {
            let degs = space.degrees_of(tuple);
            let (sorted, sigma) = sorting_permutation(tuple);
            // A repeat with the wrong parity forces the value to vanish.
            let bad_parity = if symmetry == Symmetry::Symmetric { 1 } else { 0 };
            for w in sorted.windows(2) {
                if w[0] == w[1] && space.degree(w[0]).rem_euclid(2) == bad_parity {
                    return Canonical::Vanishes;
                }
            }
            let sign = match symmetry {
                Symmetry::Symmetric => sigma.koszul_sign(&degs).unwrap(),
                _ => sigma.odd_koszul_sign(&degs).unwrap(),
            };
            Canonical::Tuple(sorted, sign)
        }
    }
}

impl MultiMap {
    pub fn zero(space: &Arc<GradedSpace>, arity: usize, degree: i64, symmetry: Symmetry) -> Self {
        MultiMap {
            space: space.clone(),
            arity,
            degree,
            symmetry,
            table: BTreeMap::new(),
        }
    }

    /// The identity map, arity 1 and degree 0.
    pub fn identity(space: &Arc<GradedSpace>) -> Self {
        let mut m = MultiMap::zero(space, 1, 0, Symmetry::None);
        for i in 0..space.dim() {
            m.insert(&[i], Element::basis_vec(space, i)).unwrap();
        }
        m
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Element)> {
        self.table.iter()
    }

    /// Add `value` at the given basis tuple, canonicalizing first. Values on
    /// tuples whose symmetry forces vanishing must themselves be zero.
    pub fn insert(&mut self, tuple: &[usize], value: Element) -> Result<(), MultiMapError> {
        if tuple.len() != self.arity {
            return Err(MultiMapError::ArityMismatch {
                expected: self.arity,
                got: tuple.len(),
            });
        }
        if value.is_zero() {
            return Ok(());
        }
        let expected: i64 =
            self.degree + tuple.iter().map(|&i| self.space.degree(i)).sum::<i64>();
        if value.homogeneous_degree() != Some(expected) {
            return Err(MultiMapError::InhomogeneousOutput {
                expected,
                got: value.homogeneous_degree(),
            });
        }
        match canonicalize(&self.space, self.symmetry, tuple) {
            Canonical::Vanishes => Err(MultiMapError::InhomogeneousOutput {
                expected,
                got: None,
            }),
            Canonical::Tuple(key, sign) => {
                let signed = value.scale(&Rat::from_int(sign));
                let entry = self
                    .table
                    .entry(key.clone())
                    .or_insert_with(|| Element::zero(&self.space));
                *entry = entry.add(&signed);
                if entry.is_zero() {
                    self.table.remove(&key);
                }
                Ok(())
            }
        }
    }

    /// Value on a basis tuple, with the symmetry sign applied.
    pub fn eval_basis(&self, tuple: &[usize]) -> Element {
        assert_eq!(tuple.len(), self.arity, "arity mismatch");
        match canonicalize(&self.space, self.symmetry, tuple) {
            Canonical::Vanishes => Element::zero(&self.space),
            Canonical::Tuple(key, sign) => match self.table.get(&key) {
                Some(v) => v.scale(&Rat::from_int(sign)),
                None => Element::zero(&self.space),
            },
        }
    }

    /// Multilinear evaluation on arbitrary elements.
    pub fn eval(&self, args: &[Element]) -> Element {
        assert_eq!(args.len(), self.arity, "arity mismatch");
        let mut out = Element::zero(&self.space);
        let mut tuple = vec![0usize; self.arity];
        self.eval_rec(args, 0, &mut tuple, &Rat::one(), &mut out);
        out
    }

    fn eval_rec(&self, args: &[Element], pos: usize, tuple: &mut Vec<usize>, coeff: &Rat, out: &mut Element) {
        if pos == self.arity {
            let v = self.eval_basis(tuple);
            for (i, c) in v.terms() {
                out.add_term(i, c * coeff);
            }
            return;
        }
        for (i, c) in args[pos].terms() {
            tuple[pos] = i;
            self.eval_rec(args, pos + 1, tuple, &(coeff * c), out);
        }
    }

    pub fn add(&self, other: &MultiMap) -> Result<MultiMap, MultiMapError> {
        if self.space != other.space {
            return Err(MultiMapError::SpaceMismatch);
        }
        if self.symmetry == other.symmetry {
            let mut out = MultiMap::zero(&self.space, self.arity, self.degree, self.symmetry);
            for (k, v) in self.table.iter().chain(other.table.iter()) {
                out.insert(k, v.clone())?;
            }
            return Ok(out);
        }
        // Mixing sectors: canonical tables are not compatible, so evaluate
        // both sides on every tuple.
        let mut out = MultiMap::zero(&self.space, self.arity, self.degree, Symmetry::None);
        for tuple in canonical_tuples(&self.space, self.arity, Symmetry::None) {
            let v = self.eval_basis(&tuple).add(&other.eval_basis(&tuple));
            if !v.is_zero() {
                out.insert(&tuple, v)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> MultiMap {
        let mut out = MultiMap::zero(&self.space, self.arity, self.degree, self.symmetry);
        if c.is_zero() {
            return out;
        }
        out.table = self.table.iter().map(|(k, v)| (k.clone(), v.scale(c))).collect();
        out
    }

    /// View as an engine operator.
    pub fn to_op(&self) -> MultiOp<Element> {
        let m = self.clone();
        MultiOp::new(self.arity, self.degree, self.symmetry, move |xs: &[Element]| {
            let v = m.eval(xs);
            if v.is_zero() {
                None
            } else {
                Some(v)
            }
        })
    }

    /// Materialize an engine operator into a table by evaluating it on every
    /// canonical basis tuple of the target space.
    pub fn from_op(space: &Arc<GradedSpace>, op: &MultiOp<Element>) -> Result<MultiMap, MultiMapError> {
        let mut out = MultiMap::zero(space, op.arity(), op.degree(), op.symmetry());
        for tuple in canonical_tuples(space, op.arity(), op.symmetry()) {
            let args: Vec<Element> = tuple.iter().map(|&i| Element::basis_vec(space, i)).collect();
            if let Some(v) = op.eval(&args) {
                out.insert(&tuple, v)?;
            }
        }
        Ok(out)
    }

    fn same_space(&self, other: &MultiMap) -> Result<(), MultiMapError> {
        if self.space != other.space {
            return Err(MultiMapError::SpaceMismatch);
        }
        Ok(())
    }

    // Products in a fixed symmetry sector reject explicitly contradictory
    // operands instead of silently symmetrizing them.
    fn check_sector(&self, other: &MultiMap, forbidden: Symmetry) -> Result<(), MultiMapError> {
        if self.symmetry == forbidden || other.symmetry == forbidden {
            return Err(MultiMapError::SectorMismatch(self.symmetry, other.symmetry));
        }
        Ok(())
    }

    pub fn gerstenhaber_i(&self, g: &MultiMap, i: usize) -> Result<MultiMap, MultiMapError> {
        self.same_space(g)?;
        if i < 1 || i > self.arity {
            return Err(MultiMapError::SlotOutOfRange(i, self.arity));
        }
        MultiMap::from_op(&self.space, &self.to_op().gerstenhaber_i(&g.to_op(), i))
    }

    pub fn gerstenhaber(&self, g: &MultiMap) -> Result<MultiMap, MultiMapError> {
        self.same_space(g)?;
        MultiMap::from_op(&self.space, &self.to_op().gerstenhaber(&g.to_op()))
    }

    pub fn nr_sym(&self, g: &MultiMap) -> Result<MultiMap, MultiMapError> {
        self.same_space(g)?;
        self.check_sector(g, Symmetry::Skew)?;
        MultiMap::from_op(&self.space, &self.to_op().nr_sym(&g.to_op()))
    }

    pub fn nr_skew(&self, g: &MultiMap) -> Result<MultiMap, MultiMapError> {
        self.same_space(g)?;
        self.check_sector(g, Symmetry::Symmetric)?;
        MultiMap::from_op(&self.space, &self.to_op().nr_skew(&g.to_op()))
    }

    pub fn commutator(&self, g: &MultiMap, product: Product) -> Result<MultiMap, MultiMapError> {
        self.same_space(g)?;
        match product {
            Product::Sym => self.check_sector(g, Symmetry::Skew)?,
            Product::Skew => self.check_sector(g, Symmetry::Symmetric)?,
            Product::Gerstenhaber => {}
        }
        MultiMap::from_op(&self.space, &self.to_op().commutator(&g.to_op(), product))
    }

    pub fn associator(f: &MultiMap, g: &MultiMap, h: &MultiMap, product: Product) -> Result<MultiMap, MultiMapError> {
        f.same_space(g)?;
        f.same_space(h)?;
        let bad = match product {
            Product::Sym => Some(Symmetry::Skew),
            Product::Skew => Some(Symmetry::Symmetric),
            Product::Gerstenhaber => None,
        };
        if let Some(bad) = bad {
            f.check_sector(g, bad)?;
            f.check_sector(h, bad)?;
        }
        MultiMap::from_op(
            &f.space,
            &MultiOp::associator(&f.to_op(), &g.to_op(), &h.to_op(), product),
        )
    }

    pub fn symmetrize(&self) -> MultiMap {
        MultiMap::from_op(&self.space, &self.to_op().symmetrize()).expect("projector output")
    }

    pub fn antisymmetrize(&self) -> MultiMap {
        MultiMap::from_op(&self.space, &self.to_op().antisymmetrize()).expect("projector output")
    }

    /// Decalage transport to the shifted space `V[1]`: arity unchanged, degree
    /// `|f| + n - 1`, symmetry flipped, entries twisted by the decalage sign
    /// of the unshifted degrees.
    pub fn dec_map(&self) -> MultiMap {
        let shifted = self.space.shift(1);
        let mut out = MultiMap::zero(
            &shifted,
            self.arity,
            self.degree + self.arity as i64 - 1,
            self.symmetry.flipped(),
        );
        for (tuple, value) in &self.table {
            let sign = crate::perm::dec_sign(&self.space.degrees_of(tuple));
            let moved = Element::from_terms(
                &shifted,
                value.terms().map(|(i, c)| (i, c.signed(sign))),
            );
            out.insert(tuple, moved).expect("decalage preserves homogeneity");
        }
        out
    }

    /// Inverse decalage, from a map on `V[1]` back to `V = (V[1])[-1]`.
    pub fn dec_map_inv(&self) -> MultiMap {
        let unshifted = self.space.shift(-1);
        let mut out = MultiMap::zero(
            &unshifted,
            self.arity,
            self.degree - (self.arity as i64 - 1),
            self.symmetry.flipped(),
        );
        for (tuple, value) in &self.table {
            let sign = crate::perm::dec_sign(&unshifted.degrees_of(tuple));
            let moved = Element::from_terms(
                &unshifted,
                value.terms().map(|(i, c)| (i, c.signed(sign))),
            );
            out.insert(tuple, moved).expect("decalage preserves homogeneity");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .table
            .iter()
            .map(|(k, v)| {
                serde_json::json!({
                    "in": k.iter().map(|&i| self.space.label(i)).collect::<Vec<_>>(),
                    "out": v.to_json(),
                })
            })
            .collect();
        serde_json::json!({
            "arity": self.arity,
            "degree": self.degree,
            "symmetry": self.symmetry,
            "entries": entries,
        })
    }

    pub fn from_json(space: &Arc<GradedSpace>, v: &serde_json::Value) -> Result<MultiMap, MultiMapError> {
        #[derive(Deserialize)]
        struct Entry {
            #[serde(rename = "in")]
            input: Vec<String>,
            out: serde_json::Value,
        }
        #[derive(Deserialize)]
        struct Repr {
            arity: usize,
            degree: i64,
            symmetry: Symmetry,
            entries: Vec<Entry>,
        }
        let repr: Repr =
            serde_json::from_value(v.clone()).map_err(|e| MultiMapError::BadJson(e.to_string()))?;
        let mut out = MultiMap::zero(space, repr.arity, repr.degree, repr.symmetry);
        for e in repr.entries {
            let tuple: Vec<usize> = e
                .input
                .iter()
                .map(|l| space.index_of(l))
                .collect::<Result<_, _>>()?;
            out.insert(&tuple, Element::from_json(space, &e.out)?)?;
        }
        Ok(out)
    }
}

impl std::fmt::Debug for MultiMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "MultiMap(arity={}, degree={}, {:?}, {} entries)",
            self.arity,
            self.degree,
            self.symmetry,
            self.table.len()
        )
    }
}

/// Canonical basis tuples for a given sector: sorted tuples without
/// parity-forbidden repeats for symmetric/skew maps, all tuples otherwise.
pub fn canonical_tuples(space: &GradedSpace, arity: usize, symmetry: Symmetry) -> Vec<Vec<usize>> {
    let dim = space.dim();
    let mut out = Vec::new();
    match symmetry {
        Symmetry::None => {
            let mut tuple = vec![0usize; arity];
            loop {
                out.push(tuple.clone());
                let mut pos = arity;
                loop {
                    if pos == 0 {
                        return out;
                    }
                    pos -= 1;
                    tuple[pos] += 1;
                    if tuple[pos] < dim {
                        break;
                    }
                    tuple[pos] = 0;
                }
            }
        }
        Symmetry::Symmetric | Symmetry::Skew => {
            let bad_parity = if symmetry == Symmetry::Symmetric { 1 } else { 0 };
            fn rec(
                space: &GradedSpace,
                arity: usize,
                bad_parity: i64,
                start: usize,
                cur: &mut Vec<usize>,
                out: &mut Vec<Vec<usize>>,
            ) {
                if cur.len() == arity {
                    out.push(cur.clone());
                    return;
                }
                for i in start..space.dim() {
                    if let Some(&last) = cur.last() {
                        if last == i && space.degree(i).rem_euclid(2) == bad_parity {
                            continue;
                        }
                    }
                    cur.push(i);
                    rec(space, arity, bad_parity, i, cur, out);
                    cur.pop();
                }
            }
            rec(space, arity, bad_parity, 0, &mut Vec::new(), &mut out);
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> Arc<GradedSpace> {
        GradedSpace::new(vec![("a", 0), ("b", 1), ("c", 1)]).unwrap()
    }

    fn basis(v: &Arc<GradedSpace>, i: usize) -> Element {
        Element::basis_vec(v, i)
    }

    #[test]
    fn skew_storage_signs() {
        let v = space();
        let mut m = MultiMap::zero(&v, 2, -2, Symmetry::Skew);
        // m(b, c) = a, so m(c, b) = -(-1)^{|b||c|} a = a ... chi of the swap on
        // two odd entries is +1.
        m.insert(&[1, 2], basis(&v, 0)).unwrap();
        assert_eq!(m.eval_basis(&[2, 1]), basis(&v, 0));
        // skew map on a repeated even-degree label vanishes
        assert!(m.eval_basis(&[0, 0]).is_zero());
    }

    #[test]
    fn sym_storage_signs() {
        let v = space();
        let mut m = MultiMap::zero(&v, 2, -2, Symmetry::Symmetric);
        m.insert(&[1, 2], basis(&v, 0)).unwrap();
        // epsilon of the swap on two odd entries is -1
        assert_eq!(m.eval_basis(&[2, 1]), basis(&v, 0).scale(&Rat::from_int(-1)));
        // symmetric map on a repeated odd label vanishes
        assert!(m.eval_basis(&[1, 1]).is_zero());
    }

    #[test]
    fn homogeneity_enforced() {
        let v = space();
        let mut m = MultiMap::zero(&v, 1, 0, Symmetry::None);
        assert!(m.insert(&[0], basis(&v, 1)).is_err());
        assert!(m.insert(&[1], basis(&v, 2)).is_ok());
    }

    #[test]
    fn gerstenhaber_unit() {
        let v = space();
        let id = MultiMap::identity(&v);
        let mut f = MultiMap::zero(&v, 2, -1, Symmetry::None);
        f.insert(&[1, 2], basis(&v, 1)).unwrap();
        assert_eq!(f.gerstenhaber_i(&id, 1).unwrap(), f);
        assert_eq!(f.gerstenhaber(&id).unwrap(), f.scale(&Rat::from_int(2)));
        assert_eq!(id.gerstenhaber(&id).unwrap(), id);
    }

    #[test]
    fn mixed_sectors_rejected() {
        let v = space();
        let sym = MultiMap::zero(&v, 2, 0, Symmetry::Symmetric);
        let skew = MultiMap::zero(&v, 2, 0, Symmetry::Skew);
        assert!(sym.nr_sym(&skew).is_err());
        assert!(skew.nr_skew(&sym).is_err());
        assert!(sym.nr_sym(&sym).is_ok());
    }

    #[test]
    fn dec_round_trip() {
        let v = space();
        let mut f = MultiMap::zero(&v, 2, -1, Symmetry::Skew);
        f.insert(&[0, 1], basis(&v, 0)).unwrap();
        f.insert(&[1, 2], basis(&v, 1)).unwrap();
        let d = f.dec_map();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.symmetry(), Symmetry::Symmetric);
        assert_eq!(d.dec_map_inv(), f);
    }

    #[test]
    fn arity_one_dec_is_regrading() {
        let v = space();
        let mut f = MultiMap::zero(&v, 1, 1, Symmetry::None);
        f.insert(&[0], basis(&v, 1)).unwrap();
        let d = f.dec_map();
        assert_eq!(d.degree(), 1);
        for (k, val) in f.entries() {
            let got = d.eval_basis(k);
            let want: Vec<(usize, Rat)> = val.terms().map(|(i, c)| (i, c.clone())).collect();
            let gotv: Vec<(usize, Rat)> = got.terms().map(|(i, c)| (i, c.clone())).collect();
            assert_eq!(want, gotv);
        }
    }
}
