//! L-infinity structures and morphisms on finite graded spaces.
//!
//! Both presentations are supported: skew multibrackets `mu_k` of degree
//! `2 - k`, and shifted-symmetric brackets of degree 1 on `V[1]`. The two are
//! exchanged by the decalage transport, which is also how the skew-side
//! morphism machinery is evaluated: shift, work with degree 0 symmetric
//! components, shift back.

use crate::coalgebra::{self, CoderSpec};
use crate::graded::{Element, GradedSpace};
use crate::multimap::{canonical_tuples, MultiMap, MultiMapError};
use crate::ops::{self, BracketFamily, Product, SymComponents, Symmetry};
use crate::rat::Rat;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinftyError {
    #[error("bracket of arity {arity} must have degree {expected}, found {got}")]
    BadBracketDegree { arity: usize, expected: i64, got: i64 },
    #[error("bracket of arity {0} must be {1:?}")]
    BadBracketSymmetry(usize, Symmetry),
    #[error("component of arity {arity} must have degree {expected}, found {got}")]
    BadComponentDegree { arity: usize, expected: i64, got: i64 },
    #[error("presentations do not match")]
    PresentationMismatch,
    #[error("structures live on different spaces")]
    SpaceMismatch,
    #[error("morphism chain mismatch: target of the first is not the source of the second")]
    ChainMismatch,
    #[error("first component is not invertible")]
    SingularFirstComponent,
    #[error("input is not a differential graded Lie algebra: {0}")]
    NotDgla(String),
    #[error("pushforward needs a degree 0 spec with vanishing arity-1 part")]
    NotFiltrationLowering,
    #[error(transparent)]
    MultiMap(#[from] MultiMapError),
    #[error(transparent)]
    Coalgebra(#[from] coalgebra::CoalgebraError),
    #[error("bad JSON: {0}")]
    BadJson(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Presentation {
    Skew,
    SymShifted,
}

impl Presentation {
    pub fn bracket_degree(self, arity: usize) -> i64 {
        match self {
            Presentation::Skew => 2 - arity as i64,
            Presentation::SymShifted => 1,
        }
    }

    pub fn bracket_symmetry(self) -> Symmetry {
        match self {
            Presentation::Skew => Symmetry::Skew,
            Presentation::SymShifted => Symmetry::Symmetric,
        }
    }

    pub fn component_degree(self, arity: usize) -> i64 {
        match self {
            Presentation::Skew => 1 - arity as i64,
            Presentation::SymShifted => 0,
        }
    }

    fn product(self) -> Product {
        match self {
            Presentation::Skew => Product::Skew,
            Presentation::SymShifted => Product::Sym,
        }
    }
}

/// An arity-indexed family of multibrackets on a finite graded space,
/// a candidate L-infinity structure to be tested against higher Jacobi.
#[derive(Debug, Clone, PartialEq)]
pub struct LInftyStructure {
    space: Arc<GradedSpace>,
    presentation: Presentation,
    brackets: BTreeMap<usize, MultiMap>,
    max_arity: usize,
}

impl LInftyStructure {
    pub fn new(
        space: Arc<GradedSpace>,
        presentation: Presentation,
        brackets: BTreeMap<usize, MultiMap>,
        max_arity: usize,
    ) -> Result<Self, LinftyError> {
        for (&arity, m) in &brackets {
            let expected = presentation.bracket_degree(arity);
            if m.degree() != expected {
                return Err(LinftyError::BadBracketDegree {
                    arity,
                    expected,
                    got: m.degree(),
                });
            }
            if arity > 1 && m.symmetry() != presentation.bracket_symmetry() {
                return Err(LinftyError::BadBracketSymmetry(arity, presentation.bracket_symmetry()));
            }
        }
        Ok(LInftyStructure {
            space,
            presentation,
            brackets,
            max_arity,
        })
    }

    pub fn abelian(space: Arc<GradedSpace>, presentation: Presentation, max_arity: usize) -> Self {
        LInftyStructure {
            space,
            presentation,
            brackets: BTreeMap::new(),
            max_arity,
        }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn presentation(&self) -> Presentation {
        self.presentation
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn bracket(&self, arity: usize) -> Option<&MultiMap> {
        self.brackets.get(&arity)
    }

    pub fn brackets(&self) -> &BTreeMap<usize, MultiMap> {
        &self.brackets
    }

    fn bracket_ops(&self) -> BracketFamily<Element> {
        self.brackets.iter().map(|(&k, m)| (k, m.to_op())).collect()
    }

    /// The `n`-th higher-Jacobi operator `J_n = sum_{a+b=n+1} mu_a o mu_b`
    /// in the product of the presentation.
    pub fn jacobiator(&self, n: usize) -> MultiMap {
        let op = ops::jacobiator(&self.bracket_ops(), n, self.presentation.product());
        MultiMap::from_op(&self.space, &op).expect("jacobiator stays homogeneous")
    }

    /// Check all higher Jacobi identities up to the given arity.
    pub fn check_linfty(&self, up_to_arity: usize) -> StructureReport {
        for n in 1..=up_to_arity {
            let j = self.jacobiator(n);
            let witness = j
                .entries()
                .next()
                .map(|(tuple, value)| (tuple.clone(), value.to_json()));
            if let Some((tuple, residual)) = witness {
                return StructureReport {
                    checked_arities: up_to_arity,
                    failure: Some(JacobiFailure {
                        arity: n,
                        tuple: tuple.iter().map(|&i| self.space.label(i).to_string()).collect(),
                        residual,
                    }),
                };
            }
        }
        StructureReport {
            checked_arities: up_to_arity,
            failure: None,
        }
    }

    /// Transport along the decalage: skew structures on `V` become
    /// shifted-symmetric structures on `V[1]` and conversely.
    pub fn dec(&self) -> LInftyStructure {
        let (presentation, brackets): (Presentation, BTreeMap<usize, MultiMap>) =
            match self.presentation {
                Presentation::Skew => (
                    Presentation::SymShifted,
                    self.brackets.iter().map(|(&k, m)| (k, m.dec_map())).collect(),
                ),
                Presentation::SymShifted => (
                    Presentation::Skew,
                    self.brackets.iter().map(|(&k, m)| (k, m.dec_map_inv())).collect(),
                ),
            };
        let space = match self.presentation {
            Presentation::Skew => self.space.shift(1),
            Presentation::SymShifted => self.space.shift(-1),
        };
        LInftyStructure {
            space,
            presentation,
            brackets,
            max_arity: self.max_arity,
        }
    }

    /// Componentwise direct sum; labels are prefixed to keep them unique.
    pub fn direct_sum(&self, other: &LInftyStructure) -> Result<LInftyStructure, LinftyError> {
        if self.presentation != other.presentation {
            return Err(LinftyError::PresentationMismatch);
        }
        let mut basis: Vec<(String, i64)> = Vec::new();
        for b in self.space.basis() {
            basis.push((format!("l:{}", b.id), b.deg));
        }
        for b in other.space.basis() {
            basis.push((format!("r:{}", b.id), b.deg));
        }
        let space = GradedSpace::new(basis).map_err(|e| LinftyError::BadJson(e.to_string()))?;
        let offset = self.space.dim();
        let mut brackets = BTreeMap::new();
        let arities: std::collections::BTreeSet<usize> = self
            .brackets
            .keys()
            .chain(other.brackets.keys())
            .copied()
            .collect();
        for arity in arities {
            let mut m = MultiMap::zero(
                &space,
                arity,
                self.presentation.bracket_degree(arity),
                self.presentation.bracket_symmetry(),
            );
            if let Some(left) = self.brackets.get(&arity) {
                for (tuple, v) in left.entries() {
                    let moved = Element::from_terms(&space, v.terms().map(|(i, c)| (i, c.clone())));
                    m.insert(tuple, moved)?;
                }
            }
            if let Some(right) = other.brackets.get(&arity) {
                for (tuple, v) in right.entries() {
                    let shifted_tuple: Vec<usize> = tuple.iter().map(|&i| i + offset).collect();
                    let moved =
                        Element::from_terms(&space, v.terms().map(|(i, c)| (i + offset, c.clone())));
                    m.insert(&shifted_tuple, moved)?;
                }
            }
            if !m.is_zero() {
                brackets.insert(arity, m);
            }
        }
        LInftyStructure::new(space, self.presentation, brackets, self.max_arity.max(other.max_arity))
    }

    /// The brackets as a coderivation spec (shifted-symmetric presentation
    /// only), ready for lifting.
    pub fn coder_spec(&self) -> Result<CoderSpec, LinftyError> {
        if self.presentation != Presentation::SymShifted {
            return Err(LinftyError::PresentationMismatch);
        }
        let mut comps = self.brackets.clone();
        for m in comps.values_mut() {
            *m = m.clone().into_symmetric();
        }
        Ok(CoderSpec::new(comps)?)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let brackets: BTreeMap<String, serde_json::Value> = self
            .brackets
            .iter()
            .map(|(k, m)| (k.to_string(), m.to_json()))
            .collect();
        serde_json::json!({
            "space": { "basis": self.space.basis() },
            "presentation": self.presentation,
            "max_arity": self.max_arity,
            "brackets": brackets,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, LinftyError> {
        #[derive(Deserialize)]
        struct SpaceRepr {
            basis: Vec<crate::graded::BasisVec>,
        }
        #[derive(Deserialize)]
        struct Repr {
            space: SpaceRepr,
            presentation: Presentation,
            #[serde(default)]
            max_arity: Option<usize>,
            brackets: BTreeMap<String, serde_json::Value>,
        }
        let repr: Repr =
            serde_json::from_value(v.clone()).map_err(|e| LinftyError::BadJson(e.to_string()))?;
        let space = GradedSpace::new(
            repr.space
                .basis
                .into_iter()
                .map(|b| (b.id, b.deg))
                .collect::<Vec<_>>(),
        )
        .map_err(|e| LinftyError::BadJson(e.to_string()))?;
        let mut brackets = BTreeMap::new();
        let mut max_seen = 1;
        for (k, mv) in repr.brackets {
            let arity: usize = k.parse().map_err(|_| LinftyError::BadJson(format!("bad arity key {k}")))?;
            max_seen = max_seen.max(arity);
            let m = MultiMap::from_json(&space, &mv)?;
            brackets.insert(arity, m);
        }
        let max_arity = repr.max_arity.unwrap_or(max_seen.max(4));
        LInftyStructure::new(space, repr.presentation, brackets, max_arity)
    }
}

/// Report of a higher-Jacobi check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct StructureReport {
    pub checked_arities: usize,
    pub failure: Option<JacobiFailure>,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct JacobiFailure {
    pub arity: usize,
    pub tuple: Vec<String>,
    pub residual: serde_json::Value,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// A candidate morphism between two structures in the same presentation:
/// skew components `f_k` of degree `1 - k`, or symmetric of degree 0.
#[derive(Debug, Clone)]
pub struct LInftyMorphism {
    source: LInftyStructure,
    target: LInftyStructure,
    components: BTreeMap<usize, MultiMap>,
}

impl LInftyMorphism {
    pub fn new(
        source: LInftyStructure,
        target: LInftyStructure,
        components: BTreeMap<usize, MultiMap>,
    ) -> Result<Self, LinftyError> {
        if source.presentation != target.presentation {
            return Err(LinftyError::PresentationMismatch);
        }
        let presentation = source.presentation;
        for (&arity, m) in &components {
            let expected = presentation.component_degree(arity);
            if m.degree() != expected {
                return Err(LinftyError::BadComponentDegree {
                    arity,
                    expected,
                    got: m.degree(),
                });
            }
        }
        Ok(LInftyMorphism {
            source,
            target,
            components,
        })
    }

    pub fn identity(structure: &LInftyStructure) -> Self {
        let id = MultiMap::identity(&structure.space).into_symmetric_tag(structure.presentation);
        LInftyMorphism {
            source: structure.clone(),
            target: structure.clone(),
            components: BTreeMap::from([(1, id)]),
        }
    }

    pub fn source(&self) -> &LInftyStructure {
        &self.source
    }

    pub fn target(&self) -> &LInftyStructure {
        &self.target
    }

    pub fn component(&self, arity: usize) -> Option<&MultiMap> {
        self.components.get(&arity)
    }

    pub fn components(&self) -> &BTreeMap<usize, MultiMap> {
        &self.components
    }

    /// Shifted-symmetric view of the morphism data: the structures transported
    /// by decalage and the components as degree 0 symmetric maps.
    fn sym_view(&self) -> (LInftyStructure, LInftyStructure, SymComponents<Element, Element>) {
        match self.source.presentation {
            Presentation::SymShifted => (
                self.source.clone(),
                self.target.clone(),
                self.components
                    .iter()
                    .map(|(&k, m)| (k, m.clone().into_symmetric().to_op()))
                    .collect(),
            ),
            Presentation::Skew => (
                self.source.dec(),
                self.target.dec(),
                self.components
                    .iter()
                    .map(|(&k, m)| (k, m.dec_map().into_symmetric().to_op()))
                    .collect(),
            ),
        }
    }

    /// The `m`-th defect `K_m`; the morphism is genuine iff all defects up to
    /// the structure's max arity vanish. In the skew presentation the defect
    /// is computed through decalage and transported back.
    pub fn defect(&self, m: usize) -> MultiMap {
        let (src, tgt, comps) = self.sym_view();
        let mu = src.bracket_ops();
        let mu_p = tgt.bracket_ops();
        let op = ops::sym_morphism_defect(&mu, &mu_p, &comps, m);
        let table = MultiMap::from_op(&src.space, &op).expect("defect stays homogeneous");
        match self.source.presentation {
            Presentation::SymShifted => table,
            Presentation::Skew => table.dec_map_inv(),
        }
    }

    pub fn is_morphism(&self, up_to_arity: usize) -> bool {
        (1..=up_to_arity).all(|m| self.defect(m).is_zero())
    }

    /// Composition `g . f` via `(g . f)_m = sum_l g_l . S_{l,m}(f)`.
    pub fn compose(g: &LInftyMorphism, f: &LInftyMorphism) -> Result<LInftyMorphism, LinftyError> {
        if f.target.space != g.source.space || f.target.presentation != g.source.presentation {
            return Err(LinftyError::ChainMismatch);
        }
        let (fsrc, _, fcomps) = f.sym_view();
        let (_, _, gcomps) = g.sym_view();
        let max = f.source.max_arity.max(g.source.max_arity);
        let mut components = BTreeMap::new();
        for m in 1..=max {
            let op = ops::compose_sym_components(&gcomps, &fcomps, m);
            let table = MultiMap::from_op(&fsrc.space, &op)?;
            if !table.is_zero() {
                let table = match f.source.presentation {
                    Presentation::SymShifted => table,
                    Presentation::Skew => table.dec_map_inv(),
                };
                components.insert(m, table);
            }
        }
        LInftyMorphism::new(f.source.clone(), g.target.clone(), components)
    }

    /// Iterative inverse: exists iff the first component is invertible as a
    /// graded map. The result satisfies `g . f = id` up to the max arity.
    pub fn invert(&self) -> Result<LInftyMorphism, LinftyError> {
        let (src, tgt, comps) = self.sym_view();
        let f1 = comps.get(&1).ok_or(LinftyError::SingularFirstComponent)?;
        let f1_table = match self.source.presentation {
            Presentation::SymShifted => self.components[&1].clone().into_symmetric(),
            Presentation::Skew => self.components[&1].dec_map().into_symmetric(),
        };
        let f1_inv = invert_linear(&f1_table).ok_or(LinftyError::SingularFirstComponent)?;
        let _ = f1;
        let trunc = self.source.max_arity;
        let fw = coalgebra::lift_to_morphism(
            &src.space,
            &comps
                .keys()
                .map(|&k| {
                    let m = match self.source.presentation {
                        Presentation::SymShifted => self.components[&k].clone().into_symmetric(),
                        Presentation::Skew => self.components[&k].dec_map().into_symmetric(),
                    };
                    (k, m)
                })
                .collect(),
            trunc,
        )?;
        let gw = coalgebra::invert_morphism_words(&fw, &f1_inv)?;
        let spec = gw.corestrict(0)?;
        let mut components = BTreeMap::new();
        for (k, m) in spec.components {
            if m.is_zero() {
                continue;
            }
            let table = match self.source.presentation {
                Presentation::SymShifted => m,
                Presentation::Skew => m.dec_map_inv(),
            };
            components.insert(k, table);
        }
        let _ = tgt;
        LInftyMorphism::new(self.target.clone(), self.source.clone(), components)
    }
}

/// Invert an arity-1 degree 0 map by exact Gaussian elimination; `None` when
/// singular.
pub fn invert_linear(m: &MultiMap) -> Option<MultiMap> {
    assert_eq!(m.arity(), 1);
    assert_eq!(m.degree(), 0);
    let space = m.space().clone();
    let dim = space.dim();
    // columns of the matrix are the images of basis vectors
    let mut a = vec![vec![Rat::zero(); dim]; dim];
    for j in 0..dim {
        let img = m.eval_basis(&[j]);
        for (i, c) in img.terms() {
            a[i][j] = c.clone();
        }
    }
    let mut inv: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        })
        .collect();
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..dim {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..dim {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for j in 0..dim {
                a[r][j] = &a[r][j] - &(&factor * &a[col][j]);
                inv[r][j] = &inv[r][j] - &(&factor * &inv[col][j]);
            }
        }
    }
    let mut out = MultiMap::zero(&space, 1, 0, Symmetry::Symmetric);
    for j in 0..dim {
        let col = Element::from_terms(&space, (0..dim).map(|i| (i, inv[i][j].clone())));
        if !col.is_zero() {
            out.insert(&[j], col).ok()?;
        }
    }
    Some(out)
}

impl MultiMap {
    /// Retag an arity-1 map as symmetric (vacuously true).
    pub(crate) fn into_symmetric(self) -> MultiMap {
        if self.arity() == 1 {
            let space = self.space().clone();
            let mut out = MultiMap::zero(&space, 1, self.degree(), Symmetry::Symmetric);
            for (k, v) in self.entries() {
                out.insert(k, v.clone()).expect("retag preserves content");
            }
            out
        } else {
            self
        }
    }

    fn into_symmetric_tag(self, presentation: Presentation) -> MultiMap {
        match presentation {
            Presentation::SymShifted => self.into_symmetric(),
            Presentation::Skew => {
                let space = self.space().clone();
                let mut out = MultiMap::zero(&space, 1, self.degree(), Symmetry::Skew);
                for (k, v) in self.entries() {
                    out.insert(k, v.clone()).expect("retag preserves content");
                }
                out
            }
        }
    }
}

/// Getzler's construction: the negative-degree truncation of a differential
/// graded Lie algebra carries a shifted-symmetric L-infinity structure with
/// `{a}_1 = d a` (when it stays in negative degrees) and
/// `{a_0, ..., a_n} = b_n sum_{sigma} eps(sigma)
/// [[...[D a_{sigma_0}, a_{sigma_1}], ...], a_{sigma_n}]`,
/// where `D = d . (projection on degree -1)` and `b_n = (-1)^n B_n / n!`.
pub fn getzler_truncate(dgla: &LInftyStructure, max_arity: usize) -> Result<LInftyStructure, LinftyError> {
    if dgla.presentation != Presentation::Skew {
        return Err(LinftyError::NotDgla("expected the skew presentation".into()));
    }
    if dgla.brackets.keys().any(|&k| k > 2) {
        return Err(LinftyError::NotDgla("brackets above arity 2 present".into()));
    }
    let report = dgla.check_linfty(3);
    if !report.passed() {
        return Err(LinftyError::NotDgla(format!(
            "higher Jacobi fails: {:?}",
            report.failure
        )));
    }
    let space = dgla.space.clone();
    let d = dgla.bracket(1).cloned();
    let bracket = dgla.bracket(2).cloned();

    // the negative-degree truncation, with its own indexing
    let neg: Vec<usize> = (0..space.dim()).filter(|&i| space.degree(i) < 0).collect();
    let tspace = GradedSpace::new(
        neg.iter()
            .map(|&i| (space.label(i).to_string(), space.degree(i)))
            .collect::<Vec<_>>(),
    )
    .map_err(|e| LinftyError::BadJson(e.to_string()))?;

    let project = |el: &Element| -> Element {
        let mut out = Element::zero(&tspace);
        for (i, c) in el.terms() {
            if space.degree(i) < 0 {
                let local = neg.iter().position(|&j| j == i).unwrap();
                out.add_term(local, c.clone());
            }
        }
        out
    };
    let embed = |el: &Element| -> Element {
        Element::from_terms(&space, el.terms().map(|(i, c)| (neg[i], c.clone())))
    };
    // D = d on degree -1, zero elsewhere
    let big_d = |el: &Element| -> Element {
        match &d {
            None => Element::zero(&space),
            Some(d) => {
                let graded: Vec<(usize, Rat)> = el
                    .terms()
                    .filter(|(i, _)| space.degree(*i) == -1)
                    .map(|(i, c)| (i, c.clone()))
                    .collect();
                d.eval(&[Element::from_terms(&space, graded)])
            }
        }
    };

    let mut brackets = BTreeMap::new();
    // unary: d restricted to outputs of negative degree
    if let Some(d) = &d {
        let mut l1 = MultiMap::zero(&tspace, 1, 1, Symmetry::Symmetric);
        for (local, &i) in neg.iter().enumerate() {
            let img = project(&d.eval_basis(&[i]));
            if !img.is_zero() {
                l1.insert(&[local], img)?;
            }
        }
        if !l1.is_zero() {
            brackets.insert(1, l1);
        }
    }
    if let Some(br) = &bracket {
        for arity in 2..=max_arity {
            let n = arity - 1; // number of bracket applications
            let bn = crate::bernoulli::bernoulli(n)
                .signed(if n % 2 == 0 { 1 } else { -1 })
                / crate::rat::factorial(n as u64);
            if bn.is_zero() {
                continue;
            }
            let mut lk = MultiMap::zero(&tspace, arity, 1, Symmetry::Symmetric);
            for tuple in canonical_tuples(&tspace, arity, Symmetry::Symmetric) {
                let degs = tspace.degrees_of(&tuple);
                let args: Vec<Element> = tuple.iter().map(|&i| Element::basis_vec(&tspace, i)).collect();
                let mut acc = Element::zero(&space);
                for sigma in crate::perm::unshuffles(&vec![1; arity]).unwrap() {
                    let sign = sigma.koszul_sign(&degs).unwrap();
                    let permuted = sigma.apply(&args);
                    let mut cur = big_d(&embed(&permuted[0]));
                    for item in &permuted[1..] {
                        if cur.is_zero() {
                            break;
                        }
                        cur = br.eval(&[cur, embed(item)]);
                    }
                    acc = acc.add(&cur.scale(&Rat::from_int(sign)));
                }
                let val = project(&acc).scale(&bn);
                if !val.is_zero() {
                    lk.insert(&tuple, val)?;
                }
            }
            if !lk.is_zero() {
                brackets.insert(arity, lk);
            }
        }
    }
    LInftyStructure::new(tspace, Presentation::SymShifted, brackets, max_arity)
}

/// Pushforward of a shifted-symmetric structure along `e^{C_p}` for a degree 0
/// spec `p` with `p_1 = 0`: returns the transported structure
/// `mu' = corestriction(e^{C_p} . Q_mu . e^{-C_p})` and the connecting
/// morphism with components `corestriction(e^{C_p})`.
pub fn pushforward_structure(
    mu: &LInftyStructure,
    p: &CoderSpec,
) -> Result<(LInftyStructure, LInftyMorphism), LinftyError> {
    if mu.presentation != Presentation::SymShifted {
        return Err(LinftyError::PresentationMismatch);
    }
    if p.degree != 0 || p.component(1).map_or(false, |m| !m.is_zero()) {
        return Err(LinftyError::NotFiltrationLowering);
    }
    let trunc = mu.max_arity;
    let space = mu.space.clone();
    let q = coalgebra::lift_to_coderivation(&space, &mu.coder_spec()?, trunc);
    let e = coalgebra::coder_exponential(&space, p, trunc)?;
    let minus_p = CoderSpec::new(
        p.components
            .iter()
            .map(|(&k, m)| (k, m.scale(&Rat::from_int(-1))))
            .collect(),
    )?;
    let e_inv = coalgebra::coder_exponential(&space, &minus_p, trunc)?;
    let q_prime = e.compose(&q).compose(&e_inv);
    let mu_prime_spec = q_prime.corestrict(1)?;
    let structure = LInftyStructure::new(
        space.clone(),
        Presentation::SymShifted,
        mu_prime_spec.components.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
        trunc,
    )?;
    let f_spec = e.corestrict(0)?;
    let morphism = LInftyMorphism::new(
        mu.clone(),
        structure.clone(),
        f_spec.components.into_iter().filter(|(_, m)| !m.is_zero()).collect(),
    )?;
    Ok((structure, morphism))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebraData;

    fn so3() -> LieAlgebraData {
        LieAlgebraData::new(
            vec!["x".into(), "y".into(), "z".into()],
            [
                ((0, 1), vec![(2, Rat::one())]),
                ((1, 2), vec![(0, Rat::one())]),
                ((0, 2), vec![(1, Rat::from_int(-1))]),
            ],
        )
        .unwrap()
    }

    fn so3_linfty() -> LInftyStructure {
        let g = so3();
        let space = g.to_graded_space();
        LInftyStructure::new(
            space,
            Presentation::Skew,
            BTreeMap::from([(2, g.bracket_map())]),
            4,
        )
        .unwrap()
    }

    #[test]
    fn abelian_passes() {
        let space = GradedSpace::new(vec![("a", 0), ("b", -1)]).unwrap();
        let s = LInftyStructure::abelian(space, Presentation::Skew, 4);
        assert!(s.check_linfty(4).passed());
    }

    #[test]
    fn so3_is_linfty_and_jacobiator_vanishes() {
        let s = so3_linfty();
        assert!(s.jacobiator(3).is_zero());
        assert!(s.check_linfty(4).passed());
    }

    #[test]
    fn corrupted_bracket_fails_with_witness() {
        let g = so3();
        let space = g.to_graded_space();
        let mut bad = MultiMap::zero(&space, 2, 0, Symmetry::Skew);
        for (tuple, v) in g.bracket_map().entries() {
            // replace [x, y] = z with [x, y] = x, which breaks Jacobi
            let v = if tuple == &vec![0, 1] {
                Element::basis_vec(&space, 0)
            } else {
                v.clone()
            };
            bad.insert(tuple, v).unwrap();
        }
        let s = LInftyStructure::new(space, Presentation::Skew, BTreeMap::from([(2, bad)]), 4).unwrap();
        let report = s.check_linfty(3);
        assert!(!report.passed());
        assert_eq!(report.failure.unwrap().arity, 3);
    }

    #[test]
    fn dec_of_valid_structure_is_valid() {
        let s = so3_linfty();
        let d = s.dec();
        assert_eq!(d.presentation(), Presentation::SymShifted);
        assert!(d.check_linfty(4).passed());
        // and back
        let back = d.dec();
        assert_eq!(back, s);
    }

    #[test]
    fn identity_morphism_has_no_defect() {
        let s = so3_linfty();
        let id = LInftyMorphism::identity(&s);
        for m in 1..=4 {
            assert!(id.defect(m).is_zero(), "defect at arity {m}");
        }
    }

    #[test]
    fn direct_sum_is_valid() {
        let s = so3_linfty();
        let sum = s.direct_sum(&s).unwrap();
        assert!(sum.check_linfty(3).passed());
        assert_eq!(sum.space().dim(), 6);
    }

    #[test]
    fn json_round_trip() {
        let s = so3_linfty();
        let j = s.to_json();
        let back = LInftyStructure::from_json(&j).unwrap();
        assert_eq!(back, s);
    }
}
