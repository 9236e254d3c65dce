//! Finite graded vector spaces over the rationals and their elements.

use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GradedError {
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("elements live on different spaces")]
    SpaceMismatch,
}

/// One basis vector: a label and an integer degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisVec {
    pub id: String,
    pub deg: i64,
}

/// A finite-dimensional graded vector space given by an ordered basis.
///
/// Degrees are fixed at construction; shifts produce new spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedSpace {
    basis: Vec<BasisVec>,
}

impl GradedSpace {
    pub fn new(basis: Vec<(impl Into<String>, i64)>) -> Result<Arc<Self>, GradedError> {
        let basis: Vec<BasisVec> = basis
            .into_iter()
            .map(|(id, deg)| BasisVec { id: id.into(), deg })
            .collect();
        let mut seen = std::collections::BTreeSet::new();
        for b in &basis {
            if !seen.insert(b.id.clone()) {
                return Err(GradedError::DuplicateLabel(b.id.clone()));
            }
        }
        Ok(Arc::new(GradedSpace { basis }))
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVec] {
        &self.basis
    }

    pub fn degree(&self, idx: usize) -> i64 {
        self.basis[idx].deg
    }

    pub fn label(&self, idx: usize) -> &str {
        &self.basis[idx].id
    }

    pub fn index_of(&self, label: &str) -> Result<usize, GradedError> {
        self.basis
            .iter()
            .position(|b| b.id == label)
            .ok_or_else(|| GradedError::UnknownLabel(label.to_string()))
    }

    pub fn degrees_of(&self, idxs: &[usize]) -> Vec<i64> {
        idxs.iter().map(|&i| self.degree(i)).collect()
    }

    /// The shifted space `V[k]`: same labels, degrees lowered by `k`.
    pub fn shift(self: &Arc<Self>, k: i64) -> Arc<Self> {
        Arc::new(GradedSpace {
            basis: self
                .basis
                .iter()
                .map(|b| BasisVec {
                    id: b.id.clone(),
                    deg: b.deg - k,
                })
                .collect(),
        })
    }
}

/// A vector in a [`GradedSpace`], as a sparse rational combination of basis
/// vectors. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    space: Arc<GradedSpace>,
    terms: BTreeMap<usize, Rat>,
}

impl Element {
    pub fn zero(space: &Arc<GradedSpace>) -> Self {
        Element {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn basis_vec(space: &Arc<GradedSpace>, idx: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(idx, Rat::one());
        Element {
            space: space.clone(),
            terms,
        }
    }

    pub fn from_terms(space: &Arc<GradedSpace>, terms: impl IntoIterator<Item = (usize, Rat)>) -> Self {
        let mut el = Element::zero(space);
        for (i, c) in terms {
            el.add_term(i, c);
        }
        el
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.terms.iter().map(|(&i, c)| (i, c))
    }

    pub fn coeff(&self, idx: usize) -> Rat {
        self.terms.get(&idx).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, idx: usize, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(idx).or_insert_with(Rat::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&idx);
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        debug_assert_eq!(self.space, other.space, "space mismatch");
        let mut out = self.clone();
        for (i, c) in other.terms() {
            out.add_term(i, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Element {
        if c.is_zero() {
            return Element::zero(&self.space);
        }
        Element {
            space: self.space.clone(),
            terms: self.terms.iter().map(|(&i, v)| (i, v * c)).collect(),
        }
    }

    /// The common degree of all terms, if homogeneous; `None` for zero or
    /// mixed-degree elements.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut deg = None;
        for (i, _) in self.terms() {
            let d = self.space.degree(i);
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Serialize as `{"label": "coeff", ...}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, String> = self
            .terms()
            .map(|(i, c)| (self.space.label(i).to_string(), c.to_string()))
            .collect();
        serde_json::to_value(map).unwrap()
    }

    pub fn from_json(space: &Arc<GradedSpace>, v: &serde_json::Value) -> Result<Self, GradedError> {
        let map: BTreeMap<String, String> = serde_json::from_value(v.clone())
            .map_err(|_| GradedError::UnknownLabel(v.to_string()))?;
        let mut el = Element::zero(space);
        for (label, c) in map {
            let idx = space.index_of(&label)?;
            let c: Rat = c.parse().map_err(|_| GradedError::UnknownLabel(label.clone()))?;
            el.add_term(idx, c);
        }
        Ok(el)
    }
}

impl crate::ops::GradedVector for Element {
    fn is_zero(&self) -> bool {
        Element::is_zero(self)
    }
    fn degree(&self) -> Option<i64> {
        self.homogeneous_degree()
    }
    fn add(&self, other: &Self) -> Self {
        Element::add(self, other)
    }
    fn scale(&self, c: &Rat) -> Self {
        Element::scale(self, c)
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(i, c)| format!("{}*{}", c, self.space.label(i)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
