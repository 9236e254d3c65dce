//! Lie algebra actions by polynomial vector fields and their homotopy
//! comoment maps.
//!
//! A comoment candidate is a family `f_k : Lambda^k g -> Omega^{n-k}(M)`,
//! `1 <= k <= n`, stored on increasing generator tuples; it is a genuine
//! comoment when `-f_{k-1}(dp) = d f_k(p) + varsigma(k) iota(v_p) omega`
//! holds for `1 <= k <= n+1` with `f_0 = f_{n+1} = 0`.

use crate::cartan::{iota, lie};
use crate::form::{wedge_fields, PolyField, PolyForm};
use crate::mss::{MssSpace, MssError};
use crate::poly::Poly;
use crate::vino::{gauge_tau, phi_components, VinElement};
use plectra_algebra::lie::{LieAlgebraData, WedgeSum};
use plectra_algebra::ops::{self, BracketFamily, SymComponents};
use plectra_algebra::{varsigma, GradedVector, MultiOp, Rat, Shifted, Symmetry};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComomentError {
    #[error("fundamental fields do not represent the bracket on generators ({0}, {1})")]
    NotAnAction(usize, usize),
    #[error("the action does not preserve the structure form (generator {0})")]
    NotMultisymplectic(usize),
    #[error("the form is not invariant under generator {0}")]
    NotInvariant(usize),
    #[error("the form is not a potential of the structure form")]
    NotAPotential,
    #[error("generator subset is not closed under the bracket")]
    NotASubalgebra,
    #[error("submanifold is not invariant under the action (generator {0})")]
    NotInvariantSubmanifold(usize),
    #[error("the wedge element is not a cycle")]
    NotACycle,
    #[error("generator {0} does not stabilize the cycle")]
    NotInStabilizer(usize),
    #[error(transparent)]
    Mss(#[from] MssError),
    #[error(transparent)]
    Lie(#[from] plectra_algebra::lie::LieError),
}

/// A Lie algebra acting by polynomial vector fields, validated as a morphism
/// into vector fields at construction.
#[derive(Debug, Clone)]
pub struct ActionData {
    algebra: LieAlgebraData,
    fields: Vec<PolyField>,
}

impl ActionData {
    pub fn new(algebra: LieAlgebraData, fields: Vec<PolyField>) -> Result<Self, ComomentError> {
        assert_eq!(fields.len(), algebra.dim());
        for i in 0..algebra.dim() {
            for j in i + 1..algebra.dim() {
                let lhs = fields[i].lie_bracket(&fields[j]);
                let mut rhs = PolyField::zero(fields[i].n_vars(), 1);
                for (k, c) in algebra.bracket_basis(i, j).iter().enumerate() {
                    if !c.is_zero() {
                        rhs = rhs.add(&fields[k].scale(c));
                    }
                }
                if lhs != rhs {
                    return Err(ComomentError::NotAnAction(i, j));
                }
            }
        }
        Ok(ActionData { algebra, fields })
    }

    pub fn algebra(&self) -> &LieAlgebraData {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn field(&self, i: usize) -> &PolyField {
        &self.fields[i]
    }

    /// The fundamental multivector `v_{x_{i_1}} ^ ... ^ v_{x_{i_k}}`.
    pub fn fundamental(&self, tuple: &[usize]) -> PolyField {
        let fields: Vec<PolyField> = tuple.iter().map(|&i| self.fields[i].clone()).collect();
        wedge_fields(&fields)
    }

    /// Check that every fundamental field preserves the structure form.
    pub fn check_preserves(&self, m: &MssSpace) -> Result<(), ComomentError> {
        for (i, f) in self.fields.iter().enumerate() {
            if !lie(f, m.omega()).is_zero() {
                return Err(ComomentError::NotMultisymplectic(i));
            }
        }
        Ok(())
    }

    /// Check that a form is strictly conserved along the action.
    pub fn check_conserves(&self, form: &PolyForm) -> Result<(), ComomentError> {
        for (i, f) in self.fields.iter().enumerate() {
            if !lie(f, form).is_zero() {
                return Err(ComomentError::NotInvariant(i));
            }
        }
        Ok(())
    }

    /// Adjoint action `[xi_g, p]` on a wedge word, extended as a derivation.
    pub fn adjoint_on_word(&self, g: usize, word: &[usize]) -> WedgeSum {
        let mut out = WedgeSum::new();
        for (slot, &x) in word.iter().enumerate() {
            for (k, c) in self.algebra.bracket_basis(g, x).iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let mut raw = word.to_vec();
                raw[slot] = k;
                if let Some((w, parity)) = plectra_algebra::lie::wedge_word(&raw) {
                    plectra_algebra::lie::wedge_bump(&mut out, w, c.signed(parity));
                }
            }
        }
        plectra_algebra::lie::wedge_prune(&mut out);
        out
    }
}

/// The defining action of `so(n)` on `R^n`, with the standard basis
/// `A_{ab} = (-1)^{1+a+b} (E_{ab} - E_{ba})` for `1 <= a < b <= n`,
/// fundamental fields `v_{A_{ab}} = (-1)^{1+a+b} (x^a d_b - x^b d_a)`, and
/// structure constants computed from the matrix commutators.
pub fn so_n_action(n: usize) -> ActionData {
    assert!(n >= 2);
    let gens: Vec<(usize, usize)> = {
        let mut v = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                v.push((a, b));
            }
        }
        v
    };
    let matrix = |a: usize, b: usize| -> Vec<Vec<Rat>> {
        // (-1)^{1+a+b} (E_{ab} - E_{ba}), 1-based indices
        let sign = if (1 + a + b) % 2 == 0 { 1 } else { -1 };
        let mut m = vec![vec![Rat::zero(); n]; n];
        m[a - 1][b - 1] = Rat::from_int(sign);
        m[b - 1][a - 1] = Rat::from_int(-sign);
        m
    };
    let commute = |x: &Vec<Vec<Rat>>, y: &Vec<Vec<Rat>>| -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rat::zero();
                for k in 0..n {
                    acc += &(&x[i][k] * &y[k][j]);
                    acc -= &(&y[i][k] * &x[k][j]);
                }
                out[i][j] = acc;
            }
        }
        out
    };
    let mut brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
    for (p, &(a, b)) in gens.iter().enumerate() {
        for (q, &(c, d)) in gens.iter().enumerate().skip(p + 1) {
            let comm = commute(&matrix(a, b), &matrix(c, d));
            let mut row = Vec::new();
            for (r, &(e, f)) in gens.iter().enumerate() {
                // coefficient of A_{ef}: entry (e-1, f-1) divided by its sign
                let sign = if (1 + e + f) % 2 == 0 { 1 } else { -1 };
                let coeff = comm[e - 1][f - 1].signed(sign);
                if !coeff.is_zero() {
                    row.push((r, coeff));
                }
            }
            if !row.is_empty() {
                brackets.insert((p, q), row);
            }
        }
    }
    let labels: Vec<String> = gens.iter().map(|&(a, b)| format!("A{a}{b}")).collect();
    let algebra = LieAlgebraData::new(labels, brackets).expect("so(n) satisfies Jacobi");
    let fields: Vec<PolyField> = gens
        .iter()
        .map(|&(a, b)| {
            let sign = Rat::from_int(if (1 + a + b) % 2 == 0 { 1 } else { -1 });
            let mut comps = vec![Poly::zero(n); n];
            comps[b - 1] = Poly::var(n, a - 1).scale(&sign);
            comps[a - 1] = Poly::var(n, b - 1).scale(&-sign);
            PolyField::vector(n, comps)
        })
        .collect();
    ActionData::new(algebra, fields).expect("so(n) fields represent the bracket")
}

/// Candidate comoment components on increasing generator tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct ComomentCandidate {
    // components[k-1] holds f_k
    components: Vec<BTreeMap<Vec<usize>, PolyForm>>,
}

impl ComomentCandidate {
    pub fn new(components: Vec<BTreeMap<Vec<usize>, PolyForm>>) -> Self {
        ComomentCandidate { components }
    }

    pub fn depth(&self) -> usize {
        self.components.len()
    }

    pub fn table(&self, k: usize) -> Option<&BTreeMap<Vec<usize>, PolyForm>> {
        self.components.get(k - 1)
    }

    /// `f_k` on an arbitrary generator tuple, alternating with the parity of
    /// the sorting permutation; zero outside `1 <= k <= depth` or on repeats.
    pub fn eval(&self, n_vars: usize, plectic: usize, k: usize, tuple: &[usize]) -> PolyForm {
        let blank = PolyForm::zero(n_vars, (plectic + 1).saturating_sub(k + 1));
        if k == 0 || k > self.components.len() {
            return blank;
        }
        let Some((word, parity)) = plectra_algebra::lie::wedge_word(tuple) else {
            return blank;
        };
        match self.components[k - 1].get(&word) {
            Some(form) => form.scale(&Rat::from_int(parity)),
            None => blank,
        }
    }

    /// Linear extension to wedge sums.
    pub fn eval_sum(&self, n_vars: usize, plectic: usize, k: usize, sum: &WedgeSum) -> PolyForm {
        let mut out = PolyForm::zero(n_vars, (plectic + 1).saturating_sub(k + 1));
        for (word, c) in sum {
            out = out.add(&self.eval(n_vars, plectic, k, word).scale(c));
        }
        out
    }

    pub fn to_json(&self, labels: &[String]) -> serde_json::Value {
        let comps: Vec<serde_json::Value> = self
            .components
            .iter()
            .map(|table| {
                let entries: Vec<serde_json::Value> = table
                    .iter()
                    .map(|(tuple, form)| {
                        serde_json::json!({
                            "gens": tuple.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>(),
                            "form": form.to_json(),
                        })
                    })
                    .collect();
                serde_json::Value::Array(entries)
            })
            .collect();
        serde_json::json!({ "components": comps })
    }

    pub fn from_json(labels: &[String], v: &serde_json::Value) -> Option<ComomentCandidate> {
        let comps = v.get("components")?.as_array()?;
        let mut components = Vec::new();
        for table in comps {
            let mut map = BTreeMap::new();
            for e in table.as_array()? {
                let gens: Vec<String> = serde_json::from_value(e.get("gens")?.clone()).ok()?;
                let tuple: Option<Vec<usize>> = gens
                    .iter()
                    .map(|g| labels.iter().position(|l| l == g))
                    .collect();
                let form = PolyForm::from_json(e.get("form")?)?;
                map.insert(tuple?, form);
            }
            components.push(map);
        }
        Some(ComomentCandidate::new(components))
    }
}

/// One failed comoment equation.
#[derive(Debug, Clone)]
pub struct ComomentFailure {
    pub arity: usize,
    pub tuple: Vec<usize>,
    pub residual: PolyForm,
}

/// Check the comoment equations for all increasing tuples at arities
/// `1..=n+1`; empty result means the candidate is a homotopy comoment map.
pub fn verify_comoment(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
) -> Result<Vec<ComomentFailure>, ComomentError> {
    action.check_preserves(m)?;
    let n = m.plectic();
    let mut failures = Vec::new();
    for k in 1..=n + 1 {
        for tuple in crate::mss::index_sets(action.dim(), k) {
            let residual = comoment_residual(f, action, m, k, &tuple);
            if !residual.is_zero() {
                failures.push(ComomentFailure {
                    arity: k,
                    tuple,
                    residual,
                });
            }
        }
    }
    Ok(failures)
}

/// The residual `d f_k(p) + varsigma(k) iota(v_p) omega + f_{k-1}(dp)` of one
/// comoment equation.
pub fn comoment_residual(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
    k: usize,
    tuple: &[usize],
) -> PolyForm {
    let contracted = iota(&action.fundamental(tuple), m.omega()).scale(&Rat::from_int(varsigma(k)));
    let mut residual = f
        .eval(m.n_vars(), m.plectic(), k, tuple)
        .d()
        .add(&contracted);
    if k >= 2 {
        let boundary = action.algebra().ce_boundary_word(tuple);
        residual = residual.add(&f.eval_sum(m.n_vars(), m.plectic(), k - 1, &boundary));
    }
    residual
}

/// The auxiliary closed form `mu_k(p) = f_{k-1}(dp) + varsigma(k) iota(v_p) omega`
/// whose exactness the `k`-th comoment equation expresses. Closedness is
/// checked and returned alongside.
pub fn mu_aux(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
    k: usize,
    tuple: &[usize],
) -> (PolyForm, bool) {
    assert!(k >= 2);
    let boundary = action.algebra().ce_boundary_word(tuple);
    let out = f
        .eval_sum(m.n_vars(), m.plectic(), k - 1, &boundary)
        .add(&iota(&action.fundamental(tuple), m.omega()).scale(&Rat::from_int(varsigma(k))));
    let closed = out.d().is_zero();
    (out, closed)
}

/// The comoment induced by an invariant potential `alpha` of the structure
/// form: `f_k(q) = (-1)^{k-1} varsigma(k) iota(v_q) alpha`.
pub fn comoment_from_potential(
    alpha: &PolyForm,
    action: &ActionData,
    m: &MssSpace,
) -> Result<ComomentCandidate, ComomentError> {
    action.check_conserves(alpha)?;
    if &alpha.d() != m.omega() {
        return Err(ComomentError::NotAPotential);
    }
    let n = m.plectic();
    let mut components = Vec::new();
    for k in 1..=n {
        let sign = Rat::from_int(varsigma(k)).signed(if (k - 1) % 2 == 0 { 1 } else { -1 });
        let mut table = BTreeMap::new();
        for tuple in crate::mss::index_sets(action.dim(), k) {
            let value = iota(&action.fundamental(&tuple), alpha).scale(&sign);
            if !value.is_zero() {
                table.insert(tuple, value);
            }
        }
        components.push(table);
    }
    Ok(ComomentCandidate::new(components))
}

/// Gauge shift of a comoment: for a strictly conserved `B`, the candidate
/// `f~_k = f_k + varsigma(k+1) iota(v_p) B` is a comoment for `omega + dB`.
/// The sign is pinned by the comoment equation for the twisted form together
/// with the multi-Cartan formula: `c_k (-1)^k = -varsigma(k)`.
pub fn gauge_shift_comoment(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
    b: &PolyForm,
) -> Result<(ComomentCandidate, MssSpace), ComomentError> {
    action.check_conserves(b)?;
    let twisted = MssSpace::new(
        m.omega().add(&b.d()),
        m.plectic(),
        m.degree_bound(),
    )?;
    let n = m.plectic();
    let mut components = Vec::new();
    for k in 1..=n {
        let mut table = f.table(k).cloned().unwrap_or_default();
        for tuple in crate::mss::index_sets(action.dim(), k) {
            let shift = iota(&action.fundamental(&tuple), b)
                .scale(&Rat::from_int(varsigma(k + 1)));
            if shift.is_zero() {
                continue;
            }
            let entry = table
                .entry(tuple)
                .or_insert_with(|| PolyForm::zero(m.n_vars(), n - k));
            *entry = entry.add(&shift);
        }
        table.retain(|_, v| !v.is_zero());
        components.push(table);
    }
    Ok((ComomentCandidate::new(components), twisted))
}

/// Equivariance failures: tuples where `L_{v_xi} f_k(p)` differs from
/// `f_k([xi, p])`.
pub fn equivariance_failures(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
) -> Vec<(usize, usize, Vec<usize>)> {
    let mut out = Vec::new();
    for k in 1..=f.depth() {
        for tuple in crate::mss::index_sets(action.dim(), k) {
            for g in 0..action.dim() {
                let lhs = lie(action.field(g), &f.eval(m.n_vars(), m.plectic(), k, &tuple));
                let rhs = f.eval_sum(m.n_vars(), m.plectic(), k, &action.adjoint_on_word(g, &tuple));
                if lhs != rhs {
                    out.push((g, k, tuple.clone()));
                }
            }
        }
    }
    out
}

/// Induced-comoment constructions.
pub enum InducedMode<'a> {
    /// Restrict to the subalgebra spanned by the listed generators.
    Subalgebra(&'a [usize]),
    /// Pull back along the linear inclusion `u -> A u` of an invariant
    /// coordinate subspace; the matrix has one row per ambient coordinate.
    Submanifold(&'a [Vec<Rat>]),
    /// Contract with a cycle of the Lie algebra homology and restrict to the
    /// listed stabilizer generators.
    LieKernel {
        cycle: &'a WedgeSum,
        stabilizer: &'a [usize],
    },
}

/// The induced data: a new action, structure and comoment candidate.
pub struct InducedComoment {
    pub action: ActionData,
    pub space: MssSpace,
    pub candidate: ComomentCandidate,
}

pub fn induced_comoment(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
    mode: InducedMode<'_>,
) -> Result<InducedComoment, ComomentError> {
    match mode {
        InducedMode::Subalgebra(gens) => {
            let sub = restrict_algebra(action, gens)?;
            let n = m.plectic();
            let mut components = Vec::new();
            for k in 1..=n {
                let mut table = BTreeMap::new();
                for tuple in crate::mss::index_sets(gens.len(), k) {
                    let ambient: Vec<usize> = tuple.iter().map(|&i| gens[i]).collect();
                    let v = f.eval(m.n_vars(), m.plectic(), k, &ambient);
                    if !v.is_zero() {
                        table.insert(tuple, v);
                    }
                }
                components.push(table);
            }
            Ok(InducedComoment {
                action: sub,
                space: m.clone(),
                candidate: ComomentCandidate::new(components),
            })
        }
        InducedMode::Submanifold(matrix) => {
            let (sub_action, sub_space) = restrict_to_subspace(action, m, matrix)?;
            let n = m.plectic();
            let mut components = Vec::new();
            for k in 1..=n {
                let mut table = BTreeMap::new();
                for tuple in crate::mss::index_sets(action.dim(), k) {
                    let v = f.eval(m.n_vars(), m.plectic(), k, &tuple).pullback(matrix);
                    if !v.is_zero() {
                        table.insert(tuple, v);
                    }
                }
                components.push(table);
            }
            Ok(InducedComoment {
                action: sub_action,
                space: sub_space,
                candidate: ComomentCandidate::new(components),
            })
        }
        InducedMode::LieKernel { cycle, stabilizer } => {
            if !action.algebra().ce_boundary(cycle).is_empty() {
                return Err(ComomentError::NotACycle);
            }
            let k = cycle.keys().next().map(|w| w.len()).unwrap_or(0);
            for &g in stabilizer {
                let mut moved = WedgeSum::new();
                for (word, c) in cycle {
                    for (w2, c2) in action.adjoint_on_word(g, word) {
                        plectra_algebra::lie::wedge_bump(&mut moved, w2, c * &c2);
                    }
                }
                plectra_algebra::lie::wedge_prune(&mut moved);
                if !moved.is_empty() {
                    return Err(ComomentError::NotInStabilizer(g));
                }
            }
            let sub = restrict_algebra(action, stabilizer)?;
            // contracted structure form
            let mut vp = PolyForm::zero(m.n_vars(), m.plectic() + 1 - k);
            for (word, c) in cycle {
                vp = vp.add(&iota(&action.fundamental(word), m.omega()).scale(c));
            }
            let space = MssSpace::pre(vp, m.plectic() - k, m.degree_bound())?;
            let n_new = space.plectic();
            // the coefficient is pinned by feeding f^p_i = c f_{i+k}(q ^ p)
            // into the comoment equation for iota(v_p) omega: the consistency
            // conditions read c varsigma(i+k) = varsigma(i) (-1)^{ik}, whose
            // unique arity-independent solution is c = -varsigma(k)
            let sign = Rat::from_int(-varsigma(k));
            let mut components = Vec::new();
            for i in 1..=n_new {
                let mut table = BTreeMap::new();
                for tuple in crate::mss::index_sets(stabilizer.len(), i) {
                    let ambient: Vec<usize> = tuple.iter().map(|&t| stabilizer[t]).collect();
                    let mut acc = PolyForm::zero(m.n_vars(), m.plectic() - k - i);
                    for (word, c) in cycle {
                        let mut glued = ambient.clone();
                        glued.extend_from_slice(word);
                        acc = acc.add(
                            &f.eval(m.n_vars(), m.plectic(), i + k, &glued).scale(c),
                        );
                    }
                    let acc = acc.scale(&sign);
                    if !acc.is_zero() {
                        table.insert(tuple, acc);
                    }
                }
                components.push(table);
            }
            Ok(InducedComoment {
                action: sub,
                space,
                candidate: ComomentCandidate::new(components),
            })
        }
    }
}

/// The alternative induced comoment of the equivariant variant: components
/// `f^p_i(q) = (-1)^i varsigma(i) varsigma(k) iota(v_q)(f_k(p))`, valid when
/// the ambient comoment is equivariant. May differ from the lie-kernel
/// construction of [`induced_comoment`]; both verify, and callers can diff
/// the candidates directly.
pub fn induced_comoment_equivariant(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
    cycle: &WedgeSum,
    stabilizer: &[usize],
) -> Result<InducedComoment, ComomentError> {
    if !action.algebra().ce_boundary(cycle).is_empty() {
        return Err(ComomentError::NotACycle);
    }
    let k = cycle.keys().next().map(|w| w.len()).unwrap_or(0);
    let sub = restrict_algebra(action, stabilizer)?;
    let mut beta = PolyForm::zero(m.n_vars(), m.plectic() - k);
    let mut vp = PolyForm::zero(m.n_vars(), m.plectic() + 1 - k);
    for (word, c) in cycle {
        beta = beta.add(&f.eval(m.n_vars(), m.plectic(), k, word).scale(c));
        vp = vp.add(&iota(&action.fundamental(word), m.omega()).scale(c));
    }
    let space = MssSpace::pre(vp, m.plectic() - k, m.degree_bound())?;
    let n_new = space.plectic();
    let mut components = Vec::new();
    for i in 1..=n_new {
        let coeff = Rat::from_int(varsigma(i) * varsigma(k)).signed(if i % 2 == 0 { 1 } else { -1 });
        let mut table = BTreeMap::new();
        for tuple in crate::mss::index_sets(stabilizer.len(), i) {
            let ambient: Vec<usize> = tuple.iter().map(|&t| stabilizer[t]).collect();
            let fields: Vec<PolyField> =
                ambient.iter().map(|&g| action.field(g).clone()).collect();
            let value = iota(&wedge_fields(&fields), &beta).scale(&coeff);
            if !value.is_zero() {
                table.insert(tuple, value);
            }
        }
        components.push(table);
    }
    Ok(InducedComoment {
        action: sub,
        space,
        candidate: ComomentCandidate::new(components),
    })
}

fn restrict_algebra(action: &ActionData, gens: &[usize]) -> Result<ActionData, ComomentError> {
    let dim = gens.len();
    let mut brackets: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
    for a in 0..dim {
        for b in a + 1..dim {
            let row = action.algebra().bracket_basis(gens[a], gens[b]);
            let mut sub_row = Vec::new();
            for (k, c) in row.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                match gens.iter().position(|&g| g == k) {
                    Some(local) => sub_row.push((local, c.clone())),
                    None => return Err(ComomentError::NotASubalgebra),
                }
            }
            if !sub_row.is_empty() {
                brackets.insert((a, b), sub_row);
            }
        }
    }
    let labels: Vec<String> = gens
        .iter()
        .map(|&g| action.algebra().labels()[g].clone())
        .collect();
    let algebra = LieAlgebraData::new(labels, brackets)?;
    let fields: Vec<PolyField> = gens.iter().map(|&g| action.field(g).clone()).collect();
    ActionData::new(algebra, fields)
}

/// Restrict the action to the linear subspace `u -> A u`, solving
/// `A w(u) = v(A u)` exactly for the induced fields.
fn restrict_to_subspace(
    action: &ActionData,
    m: &MssSpace,
    matrix: &[Vec<Rat>],
) -> Result<(ActionData, MssSpace), ComomentError> {
    let ambient = matrix.len();
    assert_eq!(ambient, m.n_vars());
    let sub_dim = if ambient == 0 { 0 } else { matrix[0].len() };
    let mut new_fields = Vec::new();
    for (g, field) in (0..action.dim()).map(|g| (g, action.field(g))) {
        // components of v(A u) as polynomials in u
        let pulled: Vec<Poly> = (0..ambient)
            .map(|i| field.vector_comp(i).substitute_linear(matrix))
            .collect();
        // solve A w = pulled for w, coefficientwise
        let mut comps = vec![Poly::zero(sub_dim); sub_dim];
        let mut monos: std::collections::BTreeSet<Vec<u32>> = Default::default();
        for p in &pulled {
            for (e, _) in p.terms() {
                monos.insert(e.clone());
            }
        }
        for e in monos {
            let rhs: Vec<Rat> = pulled
                .iter()
                .map(|p| {
                    p.terms()
                        .find(|(ee, _)| **ee == e)
                        .map(|(_, c)| c.clone())
                        .unwrap_or_else(Rat::zero)
                })
                .collect();
            let sol = solve_dense(matrix, &rhs)
                .ok_or(ComomentError::NotInvariantSubmanifold(g))?;
            for (j, c) in sol.into_iter().enumerate() {
                if !c.is_zero() {
                    comps[j] = comps[j].add(&Poly::monomial(sub_dim, e.clone(), c));
                }
            }
        }
        new_fields.push(PolyField::vector(sub_dim, comps));
    }
    let sub_space = MssSpace::pre(
        m.omega().pullback(matrix),
        m.plectic(),
        m.degree_bound(),
    )?;
    let sub_action = ActionData::new(action.algebra().clone(), new_fields)?;
    Ok((sub_action, sub_space))
}

/// Solve the dense rational system `A x = b`, `None` when inconsistent.
fn solve_dense(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row = a[i].clone();
            row.push(b[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for j in c..=cols {
            m[r][j] = &m[r][j] / &pv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=cols {
                    m[i][j] = &m[i][j] - &(&f * &m[r][j]);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    for i in r..rows {
        if !m[i][cols].is_zero() {
            return None;
        }
    }
    let mut out = vec![Rat::zero(); cols];
    for (r, c) in pivots {
        out[c] = m[r][cols].clone();
    }
    Some(out)
}

/// The pointwise obstruction cocycle `c_p(x_1 ^ ... ^ x_{n+1}) =
/// (iota(v_1 ^ ... ^ v_{n+1}) omega)|_p` on increasing generator tuples.
pub fn obstruction_cocycle(
    action: &ActionData,
    m: &MssSpace,
    point: &[Rat],
) -> BTreeMap<Vec<usize>, Rat> {
    let mut out = BTreeMap::new();
    for tuple in crate::mss::index_sets(action.dim(), m.plectic() + 1) {
        let contracted = iota(&action.fundamental(&tuple), m.omega());
        let value = contracted.comp(&[]).eval(point);
        if !value.is_zero() {
            out.insert(tuple, value);
        }
    }
    out
}

/// The Chevalley-Eilenberg coboundary of the obstruction cocycle, evaluated
/// on `Lambda^{n+2}`: `delta c (w) = c(dw)`, expected to vanish.
pub fn obstruction_coboundary(
    action: &ActionData,
    m: &MssSpace,
    point: &[Rat],
) -> BTreeMap<Vec<usize>, Rat> {
    let c = obstruction_cocycle(action, m, point);
    let mut out = BTreeMap::new();
    for tuple in crate::mss::index_sets(action.dim(), m.plectic() + 2) {
        let mut acc = Rat::zero();
        for (word, coeff) in action.algebra().ce_boundary_word(&tuple) {
            if let Some(v) = c.get(&word) {
                acc += &(&coeff * v);
            }
        }
        if !acc.is_zero() {
            out.insert(tuple, acc);
        }
    }
    out
}

// ---- The comoment as an L-infinity morphism ----

/// An element of the acting Lie algebra, concentrated in degree 0.
#[derive(Clone, PartialEq, Debug)]
pub struct LieElt(pub BTreeMap<usize, Rat>);

impl LieElt {
    pub fn generator(i: usize) -> Self {
        LieElt(BTreeMap::from([(i, Rat::one())]))
    }
}

impl GradedVector for LieElt {
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(0)
        }
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.0.clone();
        for (i, c) in &other.0 {
            let e = out.entry(*i).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                out.remove(i);
            }
        }
        LieElt(out)
    }
    fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return LieElt(BTreeMap::new());
        }
        LieElt(self.0.iter().map(|(i, v)| (*i, v * c)).collect())
    }
}

/// The Lie bracket as a shifted-symmetric binary bracket on `g[1]`.
pub fn lie_bracket_family(action: &ActionData) -> BracketFamily<Shifted<LieElt>> {
    let algebra = action.algebra().clone();
    let op = MultiOp::new(2, 1, Symmetry::Symmetric, move |es: &[Shifted<LieElt>]| {
        let mut out = LieElt(BTreeMap::new());
        for (i, ci) in &es[0].0 .0 {
            for (j, cj) in &es[1].0 .0 {
                for (k, c) in algebra.bracket_basis(*i, *j).iter().enumerate() {
                    if !c.is_zero() {
                        out = out.add(&LieElt::generator(k).scale(&(&(ci * cj) * c)));
                    }
                }
            }
        }
        if out.is_zero() {
            None
        } else {
            Some(Shifted(out))
        }
    });
    BracketFamily::from([(2, op)])
}

/// The comoment components as degree 0 symmetric maps `g[1]^k -> A[1]`:
/// `f_1(xi) = (v_xi, f_1(xi))` in degree 0, higher components pure forms.
pub fn comoment_sym_components(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
) -> SymComponents<Shifted<LieElt>, Shifted<VinElement>> {
    let mut out = SymComponents::new();
    let n_vars = m.n_vars();
    let plectic = m.plectic();
    for k in 1..=f.depth() {
        let f = f.clone();
        let action = action.clone();
        out.insert(
            k,
            MultiOp::new(k, 0, Symmetry::Symmetric, move |es: &[Shifted<LieElt>]| {
                let mut acc: Option<VinElement> = None;
                let mut tuple = vec![0usize; k];
                expand(
                    &f, &action, n_vars, plectic, k, es, 0, &mut tuple, &Rat::one(), &mut acc,
                );
                acc.filter(|v| !v.is_zero()).map(Shifted)
            }),
        );
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn expand(
    f: &ComomentCandidate,
    action: &ActionData,
    n_vars: usize,
    plectic: usize,
    k: usize,
    es: &[Shifted<LieElt>],
    pos: usize,
    tuple: &mut Vec<usize>,
    coeff: &Rat,
    acc: &mut Option<VinElement>,
) {
    if pos == k {
        let form = f.eval(n_vars, plectic, k, tuple);
        let value = if k == 1 {
            let field = action.field(tuple[0]).clone();
            if field.is_zero() && form.is_zero() {
                return;
            }
            VinElement::new(n_vars, plectic, field, form).scale(coeff)
        } else {
            if form.is_zero() {
                return;
            }
            VinElement::from_form(plectic, form).scale(coeff)
        };
        *acc = Some(match acc.take() {
            None => value,
            Some(a) => a.add(&value),
        });
        return;
    }
    for (i, c) in &es[pos].0 .0 {
        tuple[pos] = *i;
        expand(f, action, n_vars, plectic, k, es, pos + 1, tuple, &(coeff * c), acc);
    }
}

/// The defect of the comoment viewed as a candidate morphism from `g` into
/// the higher observables, computed in the shifted-symmetric picture on all
/// increasing generator tuples. Empty iff the morphism condition holds at the
/// given arity.
pub fn comoment_morphism_defect(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
    arity: usize,
) -> Vec<(Vec<usize>, VinElement)> {
    let source = lie_bracket_family(action);
    let target: BracketFamily<Shifted<VinElement>> = crate::vino::rogers_brackets(m)
        .iter()
        .map(|(&k, op)| (k, op.dec()))
        .collect();
    let comps = comoment_sym_components(f, action, m);
    let defect = ops::sym_morphism_defect(&source, &target, &comps, arity);
    let mut out = Vec::new();
    for tuple in crate::mss::index_sets(action.dim(), arity) {
        let args: Vec<Shifted<LieElt>> = tuple
            .iter()
            .map(|&i| Shifted(LieElt::generator(i)))
            .collect();
        if let Some(v) = defect.eval(&args) {
            out.push((tuple, v.0));
        }
    }
    out
}

/// The pentagon defect `(tau_B . Phi . f)_m - (Phi . f~)_m` on increasing
/// generator tuples, where `f~` is the gauge-shifted comoment for
/// `omega + dB`. Vanishes for all `m` precisely because the embedding
/// coefficients are the Bernoulli weights.
pub fn pentagon_defect(
    f: &ComomentCandidate,
    action: &ActionData,
    m: &MssSpace,
    b: &PolyForm,
    arity: usize,
) -> Result<Vec<(Vec<usize>, VinElement)>, ComomentError> {
    let failures = verify_comoment(f, action, m)?;
    if !failures.is_empty() {
        return Err(ComomentError::NotAPotential);
    }
    let (f_twisted, m_twisted) = gauge_shift_comoment(f, action, m, b)?;
    let phi: SymComponents<Shifted<VinElement>, Shifted<VinElement>> = phi_components(m, arity)
        .iter()
        .map(|(&k, op)| (k, op.dec()))
        .collect();
    let tau = gauge_tau(b).dec();
    let f_comps = comoment_sym_components(f, action, m);
    let ft_comps = comoment_sym_components(&f_twisted, action, &m_twisted);
    let mut out = Vec::new();
    for tuple in crate::mss::index_sets(action.dim(), arity) {
        let args: Vec<Shifted<LieElt>> = tuple
            .iter()
            .map(|&i| Shifted(LieElt::generator(i)))
            .collect();
        let lhs = ops::compose_sym_components(&phi, &f_comps, arity)
            .postcompose_linear(&tau)
            .eval(&args);
        let rhs = ops::compose_sym_components(&phi, &ft_comps, arity).eval(&args);
        let defect = match (lhs, rhs) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b.scale(&Rat::from_int(-1))),
            (Some(a), Some(b)) => {
                let d = a.add(&b.scale(&Rat::from_int(-1)));
                if d.is_zero() {
                    None
                } else {
                    Some(d)
                }
            }
        };
        if let Some(v) = defect {
            out.push((tuple, v.0));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so_n_basics() {
        let so3 = so_n_action(3);
        assert_eq!(so3.dim(), 3);
        assert_eq!(so_n_action(4).dim(), 6);
        // [A12, A13] = A23 (reduction formula with k = 1)
        let a12 = so3.algebra().labels().iter().position(|l| l == "A12").unwrap();
        let a13 = so3.algebra().labels().iter().position(|l| l == "A13").unwrap();
        let a23 = so3.algebra().labels().iter().position(|l| l == "A23").unwrap();
        let row = so3.algebra().bracket_basis(a12, a13);
        assert_eq!(row[a23], Rat::one());
        assert!(row.iter().enumerate().all(|(i, c)| i == a23 || c.is_zero()));
        // rotations preserve the volume
        let m = MssSpace::volume(3, 2);
        so3.check_preserves(&m).unwrap();
    }

    #[test]
    fn so2_comoment_on_symplectic_plane() {
        // f_1(A12) = (x^2 + y^2)/2 solves the comoment equation for dx ^ dy
        let action = so_n_action(2);
        let m = MssSpace::symplectic_plane(2);
        let alpha = {
            // invariant potential: (x dy - y dx)/2 = iota_E vol / 2
            let e = PolyField::euler(2);
            iota(&e, m.omega()).scale(&Rat::new(1, 2))
        };
        let f = comoment_from_potential(&alpha, &action, &m).unwrap();
        let got = f.eval(2, 1, 1, &[0]);
        let x2 = Poly::var(2, 0).mul(&Poly::var(2, 0));
        let y2 = Poly::var(2, 1).mul(&Poly::var(2, 1));
        assert_eq!(got.comp(&[]), x2.add(&y2).scale(&Rat::new(1, 2)));
        assert!(verify_comoment(&f, &action, &m).unwrap().is_empty());
    }

    #[test]
    fn zero_candidate_fails_with_witness() {
        let action = so_n_action(3);
        let m = MssSpace::volume(3, 2);
        let zero = ComomentCandidate::new(vec![BTreeMap::new(), BTreeMap::new()]);
        let failures = verify_comoment(&zero, &action, &m).unwrap();
        assert!(!failures.is_empty());
        assert_eq!(failures[0].arity, 1);
    }
}
