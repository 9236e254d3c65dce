//! Sections of the twisted Vinogradov (higher Courant) algebroid, the pairing
//! operators, the Rogers and Vinogradov bracket families, gauge
//! transformations, and the Bernoulli-weighted embedding between the two
//! L-infinity structures.
//!
//! Elements pair a polynomial vector field with a differential form. The
//! grading places `X(M) + Omega^{n-1}` in degree 0 and a pure `p`-form in
//! degree `p - (n - 1)`, so lower forms sit in negative degrees and an
//! `n`-form used as a gauge potential sits in degree 1.

use crate::cartan::{iota, lie};
use crate::form::{wedge_fields, PolyField, PolyForm};
use crate::mss::{HamPair, MssSpace};
use plectra_algebra::ops::BracketFamily;
use plectra_algebra::{bernoulli, phi_coeff, varsigma, GradedVector, MultiOp, Rat, Symmetry};

/// A section `(X, form)` of `TM + Lambda T^*M` over `R^N`, graded against a
/// fixed plectic order.
#[derive(Clone, PartialEq)]
pub struct VinElement {
    n_vars: usize,
    plectic: usize,
    x: PolyField,
    form: PolyForm,
}

impl VinElement {
    pub fn new(n_vars: usize, plectic: usize, x: PolyField, form: PolyForm) -> Self {
        assert_eq!(x.degree(), 1, "field part must be a vector field");
        assert_eq!(x.n_vars(), n_vars);
        assert_eq!(form.n_vars(), n_vars);
        if !x.is_zero() && !form.is_zero() {
            assert_eq!(form.degree(), plectic - 1, "a pair's form part is an (n-1)-form");
        }
        VinElement {
            n_vars,
            plectic,
            x,
            form,
        }
    }

    pub fn zero(n_vars: usize, plectic: usize) -> Self {
        VinElement {
            n_vars,
            plectic,
            x: PolyField::zero(n_vars, 1),
            form: PolyForm::zero(n_vars, plectic - 1),
        }
    }

    /// A degree 0 section from a Hamiltonian pair.
    pub fn from_pair(plectic: usize, pair: &HamPair) -> Self {
        VinElement::new(pair.field.n_vars(), plectic, pair.field.clone(), pair.alpha.clone())
    }

    /// A pure form placed by its form degree.
    pub fn from_form(plectic: usize, form: PolyForm) -> Self {
        VinElement {
            n_vars: form.n_vars(),
            plectic,
            x: PolyField::zero(form.n_vars(), 1),
            form,
        }
    }

    /// A pure vector field in degree 0.
    pub fn from_field(plectic: usize, x: PolyField) -> Self {
        let n_vars = x.n_vars();
        VinElement {
            n_vars,
            plectic,
            x,
            form: PolyForm::zero(n_vars, plectic - 1),
        }
    }

    pub fn field(&self) -> &PolyField {
        &self.x
    }

    pub fn form(&self) -> &PolyForm {
        &self.form
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn plectic(&self) -> usize {
        self.plectic
    }
}

impl std::fmt::Debug for VinElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.form)
    }
}

impl GradedVector for VinElement {
    fn is_zero(&self) -> bool {
        self.x.is_zero() && self.form.is_zero()
    }

    fn degree(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        if !self.x.is_zero() {
            return Some(0);
        }
        Some(self.form.degree() as i64 - (self.plectic as i64 - 1))
    }

    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n_vars, other.n_vars);
        assert_eq!(self.plectic, other.plectic);
        let x = if other.x.is_zero() {
            self.x.clone()
        } else if self.x.is_zero() {
            other.x.clone()
        } else {
            self.x.add(&other.x)
        };
        let form = if other.form.is_zero() {
            self.form.clone()
        } else if self.form.is_zero() {
            other.form.clone()
        } else {
            self.form.add(&other.form)
        };
        VinElement {
            n_vars: self.n_vars,
            plectic: self.plectic,
            x,
            form,
        }
    }

    fn scale(&self, c: &Rat) -> Self {
        VinElement {
            n_vars: self.n_vars,
            plectic: self.plectic,
            x: self.x.scale(c),
            form: self.form.scale(c),
        }
    }
}

fn form_element(plectic: usize, form: PolyForm) -> Option<VinElement> {
    if form.is_zero() {
        None
    } else {
        Some(VinElement::from_form(plectic, form))
    }
}

/// The skew pairing `<e_1, e_2>_- = (iota_{X_1} form_2 - iota_{X_2} form_1)/2`,
/// valued in pure forms; arity 2, degree -1.
pub fn pairing_minus(n_vars: usize, plectic: usize) -> MultiOp<VinElement> {
    pairing(n_vars, plectic, -1, Symmetry::Skew)
}

/// The symmetric pairing `<e_1, e_2>_+ = (iota_{X_1} form_2 + iota_{X_2} form_1)/2`.
pub fn pairing_plus(n_vars: usize, plectic: usize) -> MultiOp<VinElement> {
    pairing(n_vars, plectic, 1, Symmetry::Symmetric)
}

fn pairing(_n_vars: usize, plectic: usize, sign: i64, symmetry: Symmetry) -> MultiOp<VinElement> {
    let _ = plectic;
    MultiOp::new(2, -1, symmetry, move |es: &[VinElement]| {
        let t1 = iota(es[0].field(), es[1].form());
        let t2 = iota(es[1].field(), es[0].form());
        let half = Rat::new(1, 2);
        let combined = t1.scale(&half).add(&t2.scale(&half.signed(sign)));
        form_element(es[0].plectic, combined)
    })
}

/// The Rogers observables brackets transported to sections: the unary bracket
/// is `d` on negative degrees; the `k`-ary bracket for `2 <= k <= n+1` is
/// `varsigma(k) iota(X_1 ^ ... ^ X_k) omega` on degree 0 entries and zero
/// otherwise.
pub fn rogers_brackets(m: &MssSpace) -> BracketFamily<VinElement> {
    let mut out = BracketFamily::new();
    let plectic = m.plectic();
    out.insert(
        1,
        MultiOp::new(1, 1, Symmetry::Skew, move |es: &[VinElement]| {
            if es[0].degree() == Some(0) {
                return None;
            }
            form_element(plectic, es[0].form().d())
        }),
    );
    for k in 2..=m.plectic() + 1 {
        let omega = m.omega().clone();
        out.insert(
            k,
            MultiOp::new(k, 2 - k as i64, Symmetry::Skew, move |es: &[VinElement]| {
                if es.iter().any(|e| e.degree() != Some(0)) {
                    return None;
                }
                let fields: Vec<PolyField> = es.iter().map(|e| e.field().clone()).collect();
                let contracted = iota(&wedge_fields(&fields), &omega)
                    .scale(&Rat::from_int(varsigma(k)));
                if k == 2 {
                    // the binary bracket lands back in degree 0; its value is
                    // the Hamiltonian pair of the contracted form, whose field
                    // is the commutator
                    let x = es[0].field().lie_bracket(es[1].field());
                    if x.is_zero() && contracted.is_zero() {
                        return None;
                    }
                    return Some(VinElement::new(es[0].n_vars, es[0].plectic, x, contracted));
                }
                form_element(es[0].plectic, contracted)
            }),
        );
    }
    out
}

/// The binary bracket of the `omega`-twisted Vinogradov algebroid. Pass the
/// zero form as `omega` for the untwisted higher Courant bracket.
pub fn vinogradov_mu2(omega: &PolyForm, plectic: usize) -> MultiOp<VinElement> {
    let omega = omega.clone();
    let pair_minus = pairing_minus(omega.n_vars(), plectic);
    MultiOp::new(2, 0, Symmetry::Skew, move |es: &[VinElement]| {
        let (a, b) = (&es[0], &es[1]);
        match (a.degree(), b.degree()) {
            (Some(0), Some(0)) => {
                let x = a.field().lie_bracket(b.field());
                let mut form = iota(a.field(), &b.form().d()).sub(&iota(b.field(), &a.form().d()));
                if !omega.is_zero() {
                    form = form.add(&iota(b.field(), &iota(a.field(), &omega)).scale(&Rat::from_int(-1)));
                }
                if let Some(p) = pair_minus.eval(&[a.clone(), b.clone()]) {
                    form = form.add(&p.form().d());
                }
                Some(VinElement::new(a.n_vars, a.plectic, x, form))
            }
            // [e, f] = L_X f / 2 on a lower (or higher) pure form
            (Some(0), _) => form_element(a.plectic, lie(a.field(), b.form()).scale(&Rat::new(1, 2))),
            (_, Some(0)) => {
                form_element(a.plectic, lie(b.field(), a.form()).scale(&Rat::new(-1, 2)))
            }
            _ => None,
        }
    })
}

/// The ternary operator `T_omega(a, b, c) = (<[a,b], c>_+ + cyc) / 3`
/// measuring the Jacobi defect of the twisted binary bracket.
pub fn vinogradov_ternary(omega: &PolyForm, plectic: usize) -> MultiOp<VinElement> {
    let mu2 = vinogradov_mu2(omega, plectic);
    let pair_plus = pairing_plus(omega.n_vars(), plectic);
    MultiOp::new(3, -1, Symmetry::Skew, move |es: &[VinElement]| {
        let third = Rat::new(1, 3);
        let mut acc: Option<VinElement> = None;
        for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let Some(inner) = mu2.eval(&[es[i].clone(), es[j].clone()]) else {
                continue;
            };
            if let Some(p) = pair_plus.eval(&[inner, es[k].clone()]) {
                acc = Some(match acc {
                    None => p.scale(&third),
                    Some(a) => a.add(&p.scale(&third)),
                });
            }
        }
        acc
    })
}

/// The full family of Vinogradov L-infinity brackets on sections, with
/// `mu_1 = d` on lower forms, `mu_2` the twisted bracket, `mu_3 = -T_omega`,
/// even brackets above 2 vanishing, and odd `k >= 5` given by the
/// Bernoulli-weighted formula
/// `mu_k = (sum_i (-1)^{i-1} mu_k(form_i; X_0..no i..X_{k-1}))
///  + (-1)^{(k+1)/2} k B_{k-1} iota_{X_{k-1}} ... iota_{X_0} omega`
/// with
/// `mu_k(beta; Y_1..Y_{k-1}) = c_k sum_{i<j} (-1)^{i+j+1}
///  iota_{Y_{k-1}} ..hat j.. hat i.. iota_{Y_1} [beta, Y_i, Y_j]_3`,
/// `[.,.,.]_3 = -T_0` the untwisted ternary and
/// `c_k = (-1)^{(k+1)/2} 12 B_{k-1} / ((k-1)(k-2))`.
pub fn vinogradov_brackets(m: &MssSpace, max_arity: usize) -> BracketFamily<VinElement> {
    let plectic = m.plectic();
    let n_vars = m.n_vars();
    let mut out = BracketFamily::new();
    out.insert(
        1,
        MultiOp::new(1, 1, Symmetry::Skew, move |es: &[VinElement]| {
            if es[0].degree() == Some(0) {
                return None;
            }
            form_element(plectic, es[0].form().d())
        }),
    );
    out.insert(2, vinogradov_mu2(m.omega(), plectic));
    if max_arity >= 3 {
        out.insert(
            3,
            vinogradov_ternary(m.omega(), plectic).scale(&Rat::from_int(-1)),
        );
    }
    for k in (5..=max_arity).step_by(2) {
        let omega = m.omega().clone();
        let half_sign = if ((k + 1) / 2) % 2 == 0 { 1i64 } else { -1 };
        let ck = bernoulli(k - 1).signed(half_sign) * Rat::from_int(12)
            / Rat::from_int(((k - 1) * (k - 2)) as i64);
        let omega_coeff = bernoulli(k - 1).signed(half_sign) * Rat::from_int(k as i64);
        let untwisted_ternary =
            vinogradov_ternary(&PolyForm::zero(n_vars, plectic + 1), plectic).scale(&Rat::from_int(-1));
        out.insert(
            k,
            MultiOp::new(k, 2 - k as i64, Symmetry::Skew, move |es: &[VinElement]| {
                // at most one entry may sit off degree 0
                if es.iter().filter(|e| e.degree() != Some(0)).count() > 1 {
                    return None;
                }
                let mut acc = PolyForm::zero(es[0].n_vars, plectic + 1 - k);
                // form contributions, one slot at a time
                for i in 0..k {
                    if es[i].form().is_zero() {
                        continue;
                    }
                    let beta = VinElement::from_form(plectic, es[i].form().clone());
                    let others: Vec<&VinElement> =
                        es.iter().enumerate().filter(|(p, _)| *p != i).map(|(_, e)| e).collect();
                    let sign = if (i + 1) % 2 == 0 { 1i64 } else { -1 };
                    let mut inner_acc = PolyForm::zero(es[0].n_vars, plectic + 1 - k);
                    for a in 0..k - 1 {
                        for b in a + 1..k - 1 {
                            let absign = if (a + b + 3) % 2 == 0 { 1i64 } else { -1 };
                            let t3 = untwisted_ternary.eval(&[
                                beta.clone(),
                                VinElement::from_field(plectic, others[a].field().clone()),
                                VinElement::from_field(plectic, others[b].field().clone()),
                            ]);
                            let Some(t3) = t3 else { continue };
                            let mut cur = t3.form().clone();
                            for (p, other) in others.iter().enumerate() {
                                if p == a || p == b {
                                    continue;
                                }
                                cur = iota(other.field(), &cur);
                            }
                            inner_acc = inner_acc.add(&cur.scale(&Rat::from_int(absign)));
                        }
                    }
                    acc = acc.add(&inner_acc.scale(&ck.signed(sign)));
                }
                // the omega term, contracting X_0 innermost
                let mut omega_term = omega.clone();
                for e in es.iter() {
                    omega_term = iota(e.field(), &omega_term);
                }
                acc = acc.add(&omega_term.scale(&omega_coeff));
                form_element(plectic, acc)
            }),
        );
    }
    out
}

/// The strict gauge transformation `tau_B : (X, alpha) -> (X, alpha + iota_X B)`,
/// the identity on pure forms.
pub fn gauge_tau(b: &PolyForm) -> MultiOp<VinElement> {
    let b = b.clone();
    MultiOp::new(1, 0, Symmetry::None, move |es: &[VinElement]| {
        let e = &es[0];
        if e.field().is_zero() {
            return Some(e.clone());
        }
        let shifted = e.form().add(&iota(e.field(), &b));
        Some(VinElement::new(
            e.n_vars,
            e.plectic,
            e.field().clone(),
            shifted,
        ))
    })
}

/// Component `Phi_k` of the embedding of the Rogers structure into the
/// Vinogradov one: `Phi_1 = id` and
/// `Phi_k = (2^{k-1} B_{k-1} / (k-1)!) <,>_-^{nr_skew (k-1)}` for `k >= 2`.
/// The arities `2 <= k <= 4` carry the proven coefficients `-1, 1/3, 0`;
/// higher odd arities extend the same Bernoulli pattern.
pub fn phi_component(m: &MssSpace, k: usize) -> MultiOp<VinElement> {
    assert!(k >= 1);
    if k == 1 {
        return MultiOp::identity().with_symmetry(Symmetry::Skew);
    }
    let coeff = phi_coeff(k);
    pairing_minus(m.n_vars(), m.plectic())
        .nr_power_skew(k - 1)
        .scale(&coeff)
        .with_symmetry(Symmetry::Skew)
}

/// All embedding components up to the given arity, as morphism data.
pub fn phi_components(
    m: &MssSpace,
    up_to: usize,
) -> std::collections::BTreeMap<usize, MultiOp<VinElement>> {
    (1..=up_to).map(|k| (k, phi_component(m, k))).collect()
}

/// The test corpus of sections: Hamiltonian pairs and monomial lower forms.
pub struct SectionCorpus {
    pub pairs: Vec<VinElement>,
    pub lowers: Vec<VinElement>,
}

pub fn section_corpus(m: &MssSpace) -> SectionCorpus {
    let plectic = m.plectic();
    SectionCorpus {
        pairs: m
            .hamiltonian_corpus()
            .iter()
            .map(|p| VinElement::from_pair(plectic, p))
            .collect(),
        lowers: m
            .lower_form_corpus()
            .into_iter()
            .map(|f| VinElement::from_form(plectic, f))
            .collect(),
    }
}

/// Strictly increasing index tuples of size `k` from `0..n`.
pub fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    crate::mss::index_sets(n, k)
}
