//! Exhaustive and deterministic verification drivers for the geometric
//! L-infinity structures: higher Jacobi on the section corpus, embedding
//! defects, and bracket identities. Used by the test suites and the CLI.

use crate::mss::MssSpace;
use crate::vino::{
    phi_components, rogers_brackets, section_corpus, vinogradov_brackets, SectionCorpus,
    VinElement,
};
use plectra_algebra::ops::{self, BracketFamily, SymComponents};
use plectra_algebra::{GradedVector, MultiOp, Shifted};
use serde_json::json;

/// A witness of a nonzero evaluation: a description of the tuple and the
/// residual section.
#[derive(Debug, Clone)]
pub struct Witness {
    pub arity: usize,
    pub tuple: Vec<String>,
    pub residual: String,
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "arity": self.arity,
            "tuple": self.tuple,
            "residual": self.residual,
        })
    }
}

fn describe(corpus: &SectionCorpus, idx: &TupleIdx) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(l) = idx.lower {
        out.push(format!("lower[{l}]"));
    }
    out.extend(idx.pairs.iter().map(|&p| format!("pair[{p}]")));
    let _ = corpus;
    out
}

struct TupleIdx {
    lower: Option<usize>,
    pairs: Vec<usize>,
}

/// Deterministic evaluation tuples of the given arity: every strictly
/// increasing tuple of Hamiltonian pairs, plus one lower form combined with
/// increasing pair tuples, subsampled by stride to at most `lower_budget`
/// combinations.
fn tuples(corpus: &SectionCorpus, arity: usize, lower_budget: usize, seed: u64) -> Vec<TupleIdx> {
    let mut out = Vec::new();
    for pairs in crate::mss::index_sets(corpus.pairs.len(), arity) {
        out.push(TupleIdx {
            lower: None,
            pairs,
        });
    }
    if arity >= 1 && !corpus.lowers.is_empty() {
        let pair_sets = crate::mss::index_sets(corpus.pairs.len(), arity - 1);
        let total = corpus.lowers.len() * pair_sets.len();
        let stride = total.div_ceil(lower_budget.max(1)).max(1);
        let phase = (seed as usize) % stride;
        let mut count = 0usize;
        for l in 0..corpus.lowers.len() {
            for ps in &pair_sets {
                if count % stride == phase {
                    out.push(TupleIdx {
                        lower: Some(l),
                        pairs: ps.clone(),
                    });
                }
                count += 1;
            }
        }
    }
    out
}

fn materialize(corpus: &SectionCorpus, idx: &TupleIdx) -> Vec<VinElement> {
    let mut out = Vec::new();
    if let Some(l) = idx.lower {
        out.push(corpus.lowers[l].clone());
    }
    out.extend(idx.pairs.iter().map(|&p| corpus.pairs[p].clone()));
    out
}

/// Check all higher Jacobi operators of a skew bracket family on the corpus.
pub fn check_family_linfty(
    family: &BracketFamily<VinElement>,
    corpus: &SectionCorpus,
    up_to_arity: usize,
    lower_budget: usize,
    seed: u64,
) -> Option<Witness> {
    for m in 1..=up_to_arity {
        let jac = ops::jacobiator(family, m, plectra_algebra::Product::Skew);
        for idx in tuples(corpus, m, lower_budget, seed) {
            let args = materialize(corpus, &idx);
            if let Some(v) = jac.eval(&args) {
                return Some(Witness {
                    arity: m,
                    tuple: describe(corpus, &idx),
                    residual: format!("{v:?}"),
                });
            }
        }
    }
    None
}

/// Higher Jacobi for the Rogers structure on the instance's corpus.
pub fn check_rogers_linfty(
    m: &MssSpace,
    up_to_arity: usize,
    lower_budget: usize,
    seed: u64,
) -> Option<Witness> {
    let corpus = section_corpus(m);
    check_family_linfty(&rogers_brackets(m), &corpus, up_to_arity, lower_budget, seed)
}

/// Higher Jacobi for the Vinogradov structure restricted to the corpus.
pub fn check_vinogradov_linfty(
    m: &MssSpace,
    up_to_arity: usize,
    lower_budget: usize,
    seed: u64,
) -> Option<Witness> {
    let corpus = section_corpus(m);
    check_family_linfty(
        &vinogradov_brackets(m, up_to_arity),
        &corpus,
        up_to_arity,
        lower_budget,
        seed,
    )
}

/// The defect of a candidate morphism between the shifted structures,
/// evaluated on corpus tuples. `components` are degree 0 maps on the shifted
/// sections.
pub fn morphism_defect_on_corpus(
    source: &BracketFamily<VinElement>,
    target: &BracketFamily<VinElement>,
    components: &SymComponents<Shifted<VinElement>, Shifted<VinElement>>,
    corpus: &SectionCorpus,
    arity: usize,
    lower_budget: usize,
    seed: u64,
) -> Option<Witness> {
    let src: BracketFamily<Shifted<VinElement>> =
        source.iter().map(|(&k, op)| (k, op.dec())).collect();
    let tgt: BracketFamily<Shifted<VinElement>> =
        target.iter().map(|(&k, op)| (k, op.dec())).collect();
    let defect = ops::sym_morphism_defect(&src, &tgt, components, arity);
    for idx in tuples(corpus, arity, lower_budget, seed) {
        let args: Vec<Shifted<VinElement>> = materialize(corpus, &idx)
            .into_iter()
            .map(Shifted)
            .collect();
        if let Some(v) = defect.eval(&args) {
            return Some(Witness {
                arity,
                tuple: describe(corpus, &idx),
                residual: format!("{:?}", v.0),
            });
        }
    }
    None
}

/// The embedding components, shifted, ready for defect evaluation.
pub fn phi_shifted(
    m: &MssSpace,
    up_to: usize,
) -> SymComponents<Shifted<VinElement>, Shifted<VinElement>> {
    phi_components(m, up_to)
        .iter()
        .map(|(&k, op)| (k, op.dec()))
        .collect()
}

/// Defect of the embedding of the Rogers structure into the Vinogradov one,
/// for every arity up to the bound. `None` means the embedding is a morphism
/// on the corpus.
pub fn check_phi_morphism(
    m: &MssSpace,
    up_to_arity: usize,
    lower_budget: usize,
    seed: u64,
) -> Option<Witness> {
    let corpus = section_corpus(m);
    let rogers = rogers_brackets(m);
    let vino = vinogradov_brackets(m, up_to_arity + 1);
    let phi = phi_shifted(m, up_to_arity);
    for arity in 1..=up_to_arity {
        if let Some(w) =
            morphism_defect_on_corpus(&rogers, &vino, &phi, &corpus, arity, lower_budget, seed)
        {
            return Some(w);
        }
    }
    None
}

/// Same defect with one embedding component replaced, to exhibit
/// falsifiability of the coefficient table.
pub fn check_phi_morphism_perturbed(
    m: &MssSpace,
    up_to_arity: usize,
    replaced_arity: usize,
    replacement: MultiOp<VinElement>,
    lower_budget: usize,
    seed: u64,
) -> Option<Witness> {
    let corpus = section_corpus(m);
    let rogers = rogers_brackets(m);
    let vino = vinogradov_brackets(m, up_to_arity + 1);
    let mut phi = phi_components(m, up_to_arity);
    phi.insert(replaced_arity, replacement);
    let shifted: SymComponents<Shifted<VinElement>, Shifted<VinElement>> =
        phi.iter().map(|(&k, op)| (k, op.dec())).collect();
    for arity in 1..=up_to_arity {
        if let Some(w) =
            morphism_defect_on_corpus(&rogers, &vino, &shifted, &corpus, arity, lower_budget, seed)
        {
            return Some(w);
        }
    }
    None
}

/// Compare two skew operators of equal arity on the corpus.
pub fn compare_ops_on_corpus(
    a: &MultiOp<VinElement>,
    b: &MultiOp<VinElement>,
    corpus: &SectionCorpus,
    lower_budget: usize,
) -> Option<Witness> {
    assert_eq!(a.arity(), b.arity());
    for idx in tuples(corpus, a.arity(), lower_budget, 0) {
        let args = materialize(corpus, &idx);
        let va = a.eval(&args);
        let vb = b.eval(&args);
        let residual = match (va, vb) {
            (None, None) => None,
            (Some(x), None) => Some(x),
            (None, Some(y)) => Some(y.scale(&plectra_algebra::Rat::from_int(-1))),
            (Some(x), Some(y)) => {
                let d = x.add(&y.scale(&plectra_algebra::Rat::from_int(-1)));
                if d.is_zero() {
                    None
                } else {
                    Some(d)
                }
            }
        };
        if let Some(v) = residual {
            return Some(Witness {
                arity: a.arity(),
                tuple: describe(corpus, &idx),
                residual: format!("{v:?}"),
            });
        }
    }
    None
}
