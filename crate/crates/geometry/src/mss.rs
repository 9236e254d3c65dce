//! Multisymplectic structures on `R^N` and their Hamiltonian data.
//!
//! An `MssSpace` is a closed nondegenerate `(n+1)`-form with polynomial
//! coefficients. Nondegeneracy of the flat map on constant fields is
//! certified exactly at the origin and at ten deterministic rational sample
//! points; for constant-coefficient forms the origin check is complete.

use crate::cartan::{iota, poincare_primitive};
use crate::form::{PolyField, PolyForm};
use crate::poly::Poly;
use plectra_algebra::{varsigma, Rat};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MssError {
    #[error("the structure form must be closed")]
    NotClosed,
    #[error("the flat map is degenerate at sample point {0:?}")]
    Degenerate(Vec<Rat>),
    #[error("form degree {got} does not fit a {n}-plectic structure on R^{dim}")]
    BadDegree { got: usize, n: usize, dim: usize },
    #[error("no Hamiltonian field within polynomial degree bound {0}")]
    NotHamiltonian(u32),
    #[error("bad instance JSON: {0}")]
    BadJson(String),
}

/// An `n`-plectic space: `R^N` with a closed nondegenerate `(n+1)`-form and a
/// polynomial degree bound for generated test data.
#[derive(Debug, Clone)]
pub struct MssSpace {
    n_vars: usize,
    plectic: usize,
    omega: PolyForm,
    degree_bound: u32,
}

impl MssSpace {
    pub fn new(omega: PolyForm, plectic: usize, degree_bound: u32) -> Result<Self, MssError> {
        let n_vars = omega.n_vars();
        if omega.degree() != plectic + 1 || plectic + 1 > n_vars {
            return Err(MssError::BadDegree {
                got: omega.degree(),
                n: plectic,
                dim: n_vars,
            });
        }
        if !omega.d().is_zero() {
            return Err(MssError::NotClosed);
        }
        let space = MssSpace {
            n_vars,
            plectic,
            omega,
            degree_bound,
        };
        for point in space.sample_points() {
            if !space.flat_injective_at(&point) {
                return Err(MssError::Degenerate(point));
            }
        }
        Ok(space)
    }

    /// A pre-plectic space: closed but possibly degenerate, the setting for
    /// induced comoment data obtained by contraction or pullback.
    pub fn pre(omega: PolyForm, plectic: usize, degree_bound: u32) -> Result<Self, MssError> {
        let n_vars = omega.n_vars();
        if plectic + 1 > n_vars || (!omega.is_zero() && omega.degree() != plectic + 1) {
            return Err(MssError::BadDegree {
                got: omega.degree(),
                n: plectic,
                dim: n_vars,
            });
        }
        if !omega.d().is_zero() {
            return Err(MssError::NotClosed);
        }
        Ok(MssSpace {
            n_vars,
            plectic,
            omega,
            degree_bound,
        })
    }

    /// The volume form instance: `R^N` is `(N-1)`-plectic.
    pub fn volume(n_vars: usize, degree_bound: u32) -> MssSpace {
        MssSpace::new(PolyForm::volume(n_vars), n_vars - 1, degree_bound).expect("volume is plectic")
    }

    /// The standard symplectic plane `dx ^ dy`.
    pub fn symplectic_plane(degree_bound: u32) -> MssSpace {
        MssSpace::new(PolyForm::coordinate(2, &[0, 1]), 1, degree_bound).expect("symplectic")
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn plectic(&self) -> usize {
        self.plectic
    }

    pub fn omega(&self) -> &PolyForm {
        &self.omega
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    fn sample_points(&self) -> Vec<Vec<Rat>> {
        let mut out = vec![vec![Rat::zero(); self.n_vars]];
        for k in 1..=10i64 {
            out.push(
                (0..self.n_vars)
                    .map(|i| Rat::new(k + i as i64, 1 + (k * i as i64).rem_euclid(3)))
                    .collect(),
            );
        }
        out
    }

    fn flat_injective_at(&self, point: &[Rat]) -> bool {
        // rows: the n-form iota_{d/dx_i} omega evaluated at the point
        let mut rows: Vec<BTreeMap<Vec<usize>, Rat>> = Vec::with_capacity(self.n_vars);
        for i in 0..self.n_vars {
            let contracted = iota(&PolyField::coordinate_vector(self.n_vars, i), &self.omega);
            rows.push(contracted.eval_coeffs(point));
        }
        rank_of(&rows) == self.n_vars
    }

    /// Solve the Hamilton-DeDonder-Weyl equation `d alpha = -iota_X omega`
    /// for a polynomial vector field `X`, coefficientwise and exactly. The
    /// candidate degree is bounded by the instance bound and the degree of
    /// `d alpha`.
    pub fn hamiltonian_field(&self, alpha: &PolyForm) -> Result<PolyField, MssError> {
        assert_eq!(alpha.degree() + 2, self.omega.degree(), "form degree must be n-1");
        let target = alpha.d().scale(&Rat::from_int(-1));
        let bound = self
            .degree_bound
            .max(target.poly_degree().unwrap_or(0));
        // unknowns: coefficient of each monomial (degree <= bound) of each
        // component X^i
        let monos = monomials_up_to(self.n_vars, bound);
        let mut columns: Vec<PolyForm> = Vec::new();
        for i in 0..self.n_vars {
            for e in &monos {
                let field = PolyField::vector(
                    self.n_vars,
                    (0..self.n_vars)
                        .map(|j| {
                            if j == i {
                                Poly::monomial(self.n_vars, e.clone(), Rat::one())
                            } else {
                                Poly::zero(self.n_vars)
                            }
                        })
                        .collect(),
                );
                columns.push(iota(&field, &self.omega));
            }
        }
        let solution =
            solve_form_system(&columns, &target).ok_or(MssError::NotHamiltonian(bound))?;
        let mut comps = vec![Poly::zero(self.n_vars); self.n_vars];
        for (col, c) in solution.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = col / monos.len();
            let e = &monos[col % monos.len()];
            comps[i] = comps[i].add(&Poly::monomial(self.n_vars, e.clone(), c.clone()));
        }
        Ok(PolyField::vector(self.n_vars, comps))
    }

    /// The Rogers multibracket of arity `k >= 2` on Hamiltonian pairs:
    /// `varsigma(k) iota(X_1 ^ ... ^ X_k) omega`.
    pub fn rogers_contraction(&self, fields: &[PolyField]) -> PolyForm {
        let k = fields.len();
        let wedge = crate::form::wedge_fields(fields);
        iota(&wedge, &self.omega).scale(&Rat::from_int(varsigma(k)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "N": self.n_vars,
            "n": self.plectic,
            "omega": self.omega.to_json(),
            "D": self.degree_bound,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MssSpace, MssError> {
        let n = v
            .get("n")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| MssError::BadJson("missing plectic order n".into()))? as usize;
        let d = v.get("D").and_then(|x| x.as_u64()).unwrap_or(2) as u32;
        let omega = v
            .get("omega")
            .and_then(PolyForm::from_json)
            .ok_or_else(|| MssError::BadJson("missing or malformed omega".into()))?;
        MssSpace::new(omega, n, d)
    }
}

/// A Hamiltonian pair `(X, alpha)` with `d alpha = -iota_X omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct HamPair {
    pub field: PolyField,
    pub alpha: PolyForm,
}

impl MssSpace {
    /// Check the HDDW equation for a candidate pair.
    pub fn is_hamiltonian_pair(&self, pair: &HamPair) -> bool {
        pair.alpha
            .d()
            .add(&iota(&pair.field, &self.omega))
            .is_zero()
    }

    /// A deterministic generating family of Hamiltonian pairs: all constant
    /// and linear vector fields whose contraction with omega is exact, with
    /// primitives from the radial homotopy.
    pub fn hamiltonian_corpus(&self) -> Vec<HamPair> {
        let mut fields: Vec<PolyField> = Vec::new();
        for i in 0..self.n_vars {
            fields.push(PolyField::coordinate_vector(self.n_vars, i));
        }
        for i in 0..self.n_vars {
            for j in 0..self.n_vars {
                // x_j d/dx_i
                let mut comps = vec![Poly::zero(self.n_vars); self.n_vars];
                comps[i] = Poly::var(self.n_vars, j);
                fields.push(PolyField::vector(self.n_vars, comps));
            }
        }
        // traceless diagonal combinations x_i d/dx_i - x_{i+1} d/dx_{i+1}
        for i in 0..self.n_vars.saturating_sub(1) {
            let mut comps = vec![Poly::zero(self.n_vars); self.n_vars];
            comps[i] = Poly::var(self.n_vars, i);
            comps[i + 1] = Poly::var(self.n_vars, i + 1).scale(&Rat::from_int(-1));
            fields.push(PolyField::vector(self.n_vars, comps));
        }
        let mut out = Vec::new();
        for field in fields {
            let contracted = iota(&field, &self.omega);
            if !contracted.d().is_zero() {
                continue;
            }
            if contracted.is_zero() {
                out.push(HamPair {
                    field,
                    alpha: PolyForm::zero(self.n_vars, self.plectic - 1),
                });
                continue;
            }
            let primitive = poincare_primitive(&contracted).expect("closed by construction");
            out.push(HamPair {
                field,
                alpha: primitive.scale(&Rat::from_int(-1)),
            });
        }
        out
    }

    /// Monomial lower forms up to the degree bound, for each form degree
    /// `0 <= p <= plectic - 2`.
    pub fn lower_form_corpus(&self) -> Vec<PolyForm> {
        let mut out = Vec::new();
        if self.plectic < 2 {
            return out;
        }
        for p in 0..=self.plectic - 2 {
            for idx in index_sets(self.n_vars, p) {
                for e in monomials_up_to(self.n_vars, self.degree_bound) {
                    let mut form = PolyForm::zero(self.n_vars, p);
                    form.add_comp(idx.clone(), Poly::monomial(self.n_vars, e, Rat::one()));
                    out.push(form);
                }
            }
        }
        out
    }
}

pub fn monomials_up_to(n_vars: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    rec(n_vars, bound, &mut Vec::new(), &mut out);
    out.sort();
    out
}

pub fn index_sets(n_vars: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(n: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, len, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n_vars, len, 0, &mut Vec::new(), &mut out);
    out
}

/// Rank of a sparse rational matrix given as rows keyed by arbitrary ordered
/// column labels.
fn rank_of(rows: &[BTreeMap<Vec<usize>, Rat>]) -> usize {
    let mut work: Vec<BTreeMap<Vec<usize>, Rat>> =
        rows.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut rank = 0;
    while let Some(pos) = work.iter().position(|r| !r.is_empty()) {
        let pivot_row = work.remove(pos);
        let (pivot_col, pivot_val) = pivot_row.iter().next().map(|(k, v)| (k.clone(), v.clone())).unwrap();
        rank += 1;
        for row in &mut work {
            if let Some(c) = row.get(&pivot_col).cloned() {
                let factor = &c / &pivot_val;
                for (col, v) in &pivot_row {
                    let entry = row.entry(col.clone()).or_insert_with(Rat::zero);
                    *entry -= &(&factor * v);
                }
                row.retain(|_, v| !v.is_zero());
            }
        }
    }
    rank
}

/// Solve `sum_j u_j columns[j] = target` for rational `u`, where both sides
/// are forms compared coefficientwise; `None` when inconsistent.
fn solve_form_system(columns: &[PolyForm], target: &PolyForm) -> Option<Vec<Rat>> {
    // collect all (index set, monomial) coordinates
    let mut coords: std::collections::BTreeSet<(Vec<usize>, Vec<u32>)> = Default::default();
    for form in columns.iter().chain(std::iter::once(target)) {
        for (idx, p) in form.comps() {
            for (e, _) in p.terms() {
                coords.insert((idx.clone(), e.clone()));
            }
        }
    }
    let coords: Vec<_> = coords.into_iter().collect();
    let n_rows = coords.len();
    let n_cols = columns.len();
    let mut a: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n_cols + 1]; n_rows];
    for (r, (idx, e)) in coords.iter().enumerate() {
        for (c, form) in columns.iter().enumerate() {
            let coeff = form
                .comps()
                .find(|(i, _)| *i == idx)
                .and_then(|(_, p)| p.terms().find(|(ee, _)| *ee == e).map(|(_, v)| v.clone()))
                .unwrap_or_else(Rat::zero);
            a[r][c] = coeff;
        }
        let t = target
            .comps()
            .find(|(i, _)| *i == idx)
            .and_then(|(_, p)| p.terms().find(|(ee, _)| *ee == e).map(|(_, v)| v.clone()))
            .unwrap_or_else(Rat::zero);
        a[r][n_cols] = t;
    }
    // Gaussian elimination with the augmented column
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n_cols {
        let Some(p) = (row..n_rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pv = a[row][col].clone();
        for j in col..=n_cols {
            a[row][j] = &a[row][j] / &pv;
        }
        for r in 0..n_rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=n_cols {
                    a[r][j] = &a[r][j] - &(&f * &a[row][j]);
                }
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == n_rows {
            break;
        }
    }
    // inconsistent rows?
    for r in row..n_rows {
        if !a[r][n_cols].is_zero() {
            return None;
        }
    }
    let mut out = vec![Rat::zero(); n_cols];
    for (r, c) in pivots {
        out[c] = a[r][n_cols].clone();
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_and_symplectic_validate() {
        assert!(MssSpace::volume(3, 2).omega().degree() == 3);
        assert!(MssSpace::symplectic_plane(2).plectic() == 1);
        // a degenerate 2-form on R^3 is rejected
        let degenerate = PolyForm::coordinate(3, &[0, 1]);
        assert!(MssSpace::new(degenerate, 1, 2).is_err());
    }

    #[test]
    fn hamiltonian_field_on_volume() {
        let m = MssSpace::volume(3, 2);
        // alpha = -y dz has X = d/dx : d(-y dz) = -dy^dz = -iota_{d/dx} vol
        let alpha = PolyForm::coordinate(3, &[2]).scale_poly(&Poly::var(3, 1)).scale(&Rat::from_int(-1));
        let x = m.hamiltonian_field(&alpha).unwrap();
        assert_eq!(x, PolyField::coordinate_vector(3, 0));
        // closed forms have zero Hamiltonian field
        let closed = PolyForm::coordinate(3, &[0]).wedge(&PolyForm::zero(3, 0).add(&{
            let mut one = PolyForm::zero(3, 0);
            one.add_comp(vec![], Poly::one(3));
            one
        }));
        let x = m.hamiltonian_field(&closed).unwrap();
        assert!(x.is_zero());
    }

    #[test]
    fn hamiltonian_field_on_symplectic_plane() {
        let m = MssSpace::symplectic_plane(2);
        // alpha = (x^2 + y^2)/2 gives the rotation field x d/dy - y d/dx
        let mut alpha = PolyForm::zero(2, 0);
        let x2 = Poly::var(2, 0).mul(&Poly::var(2, 0));
        let y2 = Poly::var(2, 1).mul(&Poly::var(2, 1));
        alpha.add_comp(vec![], x2.add(&y2).scale(&Rat::new(1, 2)));
        let field = m.hamiltonian_field(&alpha).unwrap();
        assert_eq!(field.vector_comp(0), Poly::var(2, 1).scale(&Rat::from_int(-1)));
        assert_eq!(field.vector_comp(1), Poly::var(2, 0));
    }

    #[test]
    fn corpus_pairs_satisfy_hddw() {
        for m in [MssSpace::volume(3, 2), MssSpace::symplectic_plane(2)] {
            let corpus = m.hamiltonian_corpus();
            assert!(!corpus.is_empty());
            for pair in &corpus {
                assert!(m.is_hamiltonian_pair(pair));
            }
        }
        // traceless linear plus constant fields on the 3-volume: 3 + 8
        assert_eq!(MssSpace::volume(3, 2).hamiltonian_corpus().len(), 11);
    }

    #[test]
    fn rogers_contraction_examples() {
        let m = MssSpace::volume(3, 2);
        let dx = PolyField::coordinate_vector(3, 0);
        let dy = PolyField::coordinate_vector(3, 1);
        let dz = PolyField::coordinate_vector(3, 2);
        // pi_2(d/dx, d/dy) = varsigma(2) iota_{dy} iota_{dx} vol = dz
        assert_eq!(
            m.rogers_contraction(&[dx.clone(), dy.clone()]),
            PolyForm::coordinate(3, &[2])
        );
        // pi_3(d/dx, d/dy, d/dz) = varsigma(3) = -1 as a function
        let f = m.rogers_contraction(&[dx, dy, dz]);
        assert_eq!(f.comp(&[]), Poly::constant(3, Rat::from_int(-1)));
    }
}
