//! Differential forms and multivector fields on `R^N` with polynomial
//! coefficients.
//!
//! Both are stored sparsely on strictly increasing index sets. Forms carry a
//! fixed form degree `p`, fields a fixed multivector degree `q`; a zero form
//! still remembers its degree slot.

use crate::poly::Poly;
use plectra_algebra::Rat;
use std::collections::BTreeMap;
use std::fmt;

/// Sign for merging two sorted index sets into one, `None` on a collision:
/// the parity of moving each element of `b` left past the larger tail of `a`.
pub(crate) fn merge_indices(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut out: Vec<usize> = a.to_vec();
    let mut sign = 1i64;
    for &j in b {
        match out.binary_search(&j) {
            Ok(_) => return None,
            Err(pos) => {
                if (out.len() - pos) % 2 == 1 {
                    sign = -sign;
                }
                out.insert(pos, j);
            }
        }
    }
    Some((out, sign))
}

macro_rules! exterior_object {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone)]
        pub struct $name {
            n_vars: usize,
            degree: usize,
            comps: BTreeMap<Vec<usize>, Poly>,
        }

        // zero objects are equal regardless of their declared degree slot
        impl PartialEq for $name {
            fn eq(&self, other: &Self) -> bool {
                if self.n_vars != other.n_vars {
                    return false;
                }
                if self.is_zero() || other.is_zero() {
                    return self.is_zero() && other.is_zero();
                }
                self.degree == other.degree && self.comps == other.comps
            }
        }

        impl Eq for $name {}

        impl $name {
            pub fn zero(n_vars: usize, degree: usize) -> Self {
                Self {
                    n_vars,
                    degree,
                    comps: BTreeMap::new(),
                }
            }

            pub fn n_vars(&self) -> usize {
                self.n_vars
            }

            pub fn degree(&self) -> usize {
                self.degree
            }

            pub fn is_zero(&self) -> bool {
                self.comps.is_empty()
            }

            pub fn comps(&self) -> impl Iterator<Item = (&Vec<usize>, &Poly)> {
                self.comps.iter()
            }

            pub fn comp(&self, idx: &[usize]) -> Poly {
                self.comps
                    .get(idx)
                    .cloned()
                    .unwrap_or_else(|| Poly::zero(self.n_vars))
            }

            /// Add `p` at a strictly increasing index set.
            pub fn add_comp(&mut self, idx: Vec<usize>, p: Poly) {
                assert_eq!(idx.len(), self.degree, "index set has wrong size");
                debug_assert!(idx.windows(2).all(|w| w[0] < w[1]), "indices must increase");
                debug_assert!(idx.iter().all(|&i| i < self.n_vars));
                if p.is_zero() {
                    return;
                }
                let entry = self
                    .comps
                    .entry(idx)
                    .or_insert_with(|| Poly::zero(self.n_vars));
                *entry = entry.add(&p);
                if entry.is_zero() {
                    self.comps.retain(|_, v| !v.is_zero());
                }
            }

            /// Add at an arbitrary index sequence, sorting with the sign of
            /// the permutation; repeated indices drop the term.
            pub fn add_comp_unsorted(&mut self, idx: &[usize], p: Poly) {
                if let Some((sorted, sign)) = sort_indices(idx) {
                    self.add_comp(sorted, p.scale(&Rat::from_int(sign)));
                }
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.n_vars, other.n_vars, "dimension mismatch");
                // a zero object is a universal zero regardless of its slot
                if self.is_zero() {
                    return other.clone();
                }
                if other.is_zero() {
                    return self.clone();
                }
                assert_eq!(self.degree, other.degree, "degree mismatch");
                let mut out = self.clone();
                for (idx, p) in &other.comps {
                    out.add_comp(idx.clone(), p.clone());
                }
                out
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.scale(&Rat::from_int(-1)))
            }

            pub fn scale(&self, c: &Rat) -> Self {
                if c.is_zero() {
                    return Self::zero(self.n_vars, self.degree);
                }
                Self {
                    n_vars: self.n_vars,
                    degree: self.degree,
                    comps: self
                        .comps
                        .iter()
                        .map(|(i, p)| (i.clone(), p.scale(c)))
                        .collect(),
                }
            }

            pub fn scale_poly(&self, f: &Poly) -> Self {
                if f.is_zero() {
                    return Self::zero(self.n_vars, self.degree);
                }
                let mut out = Self::zero(self.n_vars, self.degree);
                for (i, p) in &self.comps {
                    out.add_comp(i.clone(), p.mul(f));
                }
                out
            }

            /// Exterior product.
            pub fn wedge(&self, other: &Self) -> Self {
                assert_eq!(self.n_vars, other.n_vars, "dimension mismatch");
                let mut out = Self::zero(self.n_vars, self.degree + other.degree);
                for (i1, p1) in &self.comps {
                    for (i2, p2) in &other.comps {
                        if let Some((idx, sign)) = merge_indices(i1, i2) {
                            out.add_comp(idx, p1.mul(p2).scale(&Rat::from_int(sign)));
                        }
                    }
                }
                out
            }

            /// Highest coefficient degree, `None` when zero.
            pub fn poly_degree(&self) -> Option<u32> {
                self.comps.values().filter_map(|p| p.degree()).max()
            }

            pub fn to_json(&self) -> serde_json::Value {
                let terms: Vec<serde_json::Value> = self
                    .comps
                    .iter()
                    .map(|(i, p)| serde_json::json!({ "idx": i, "poly": p.to_json() }))
                    .collect();
                serde_json::json!({
                    "N": self.n_vars,
                    "p": self.degree,
                    "terms": terms,
                })
            }

            pub fn from_json(v: &serde_json::Value) -> Option<Self> {
                let n_vars = v.get("N")?.as_u64()? as usize;
                let degree = v.get("p")?.as_u64()? as usize;
                let mut out = Self::zero(n_vars, degree);
                for t in v.get("terms")?.as_array()? {
                    let idx: Vec<usize> = serde_json::from_value(t.get("idx")?.clone()).ok()?;
                    let p = Poly::from_json(n_vars, t.get("poly")?)?;
                    if idx.len() != degree {
                        return None;
                    }
                    out.add_comp(idx, p);
                }
                Some(out)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.is_zero() {
                    return write!(f, "0@{}", self.degree);
                }
                let parts: Vec<String> = self
                    .comps
                    .iter()
                    .map(|(i, p)| format!("({:?})*{}{:?}", p, stringify!($name), i))
                    .collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    };
}

exterior_object!(
    PolyForm,
    "A differential `p`-form with polynomial coefficients on increasing index sets."
);
exterior_object!(
    PolyField,
    "A multivector field of fixed arity with polynomial coefficients."
);

/// Sort an index sequence, returning the permutation parity; `None` when an
/// index repeats.
pub(crate) fn sort_indices(idx: &[usize]) -> Option<(Vec<usize>, i64)> {
    let mut v: Vec<usize> = idx.to_vec();
    let mut sign = 1i64;
    for i in 0..v.len() {
        for j in (i + 1..v.len()).rev() {
            if v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

impl PolyForm {
    /// The constant coordinate form `dx_{i_1} ^ ... ^ dx_{i_p}`.
    pub fn coordinate(n_vars: usize, idx: &[usize]) -> PolyForm {
        let mut out = PolyForm::zero(n_vars, idx.len());
        let (sorted, sign) = sort_indices(idx).expect("repeated index in coordinate form");
        out.add_comp(sorted, Poly::constant(n_vars, Rat::from_int(sign)));
        out
    }

    /// The standard volume form `dx_1 ^ ... ^ dx_N`.
    pub fn volume(n_vars: usize) -> PolyForm {
        PolyForm::coordinate(n_vars, &(0..n_vars).collect::<Vec<_>>())
    }

    /// Exterior derivative.
    pub fn d(&self) -> PolyForm {
        let mut out = PolyForm::zero(self.n_vars(), self.degree() + 1);
        for (idx, p) in self.comps() {
            for i in 0..self.n_vars() {
                let dp = p.partial(i);
                if dp.is_zero() {
                    continue;
                }
                if let Some((merged, sign)) = merge_indices(&[i], idx) {
                    out.add_comp(merged, dp.scale(&Rat::from_int(sign)));
                }
            }
        }
        out
    }

    /// Pullback along the linear map `x -> A x`, where `self` lives on the
    /// target `R^{rows(A)}` and the result on `R^{cols(A)}`.
    pub fn pullback(&self, a: &[Vec<Rat>]) -> PolyForm {
        let rows = a.len();
        assert_eq!(rows, self.n_vars(), "matrix rows must match the form's dimension");
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut out = PolyForm::zero(cols, self.degree());
        for (idx, p) in self.comps() {
            let coeff = p.substitute_linear(a);
            if coeff.is_zero() {
                continue;
            }
            // expand dy_{i} = sum_j a[i][j] dx_j over the index set
            let mut stack: Vec<(Vec<usize>, Rat)> = vec![(Vec::new(), Rat::one())];
            for &i in idx {
                let mut next = Vec::new();
                for (prefix, c) in &stack {
                    for (j, aij) in a[i].iter().enumerate() {
                        if aij.is_zero() {
                            continue;
                        }
                        let mut pre = prefix.clone();
                        pre.push(j);
                        next.push((pre, c * aij));
                    }
                }
                stack = next;
            }
            for (seq, c) in stack {
                if let Some((sorted, sign)) = sort_indices(&seq) {
                    out.add_comp(sorted, coeff.scale(&c.signed(sign)));
                }
            }
        }
        out
    }

    /// Evaluate all coefficients at a rational point.
    pub fn eval_coeffs(&self, point: &[Rat]) -> BTreeMap<Vec<usize>, Rat> {
        self.comps()
            .map(|(i, p)| (i.clone(), p.eval(point)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

impl PolyField {
    /// The constant coordinate field `d/dx_i`.
    pub fn coordinate_vector(n_vars: usize, i: usize) -> PolyField {
        let mut out = PolyField::zero(n_vars, 1);
        out.add_comp(vec![i], Poly::one(n_vars));
        out
    }

    /// A vector field from its component polynomials.
    pub fn vector(n_vars: usize, comps: Vec<Poly>) -> PolyField {
        assert_eq!(comps.len(), n_vars);
        let mut out = PolyField::zero(n_vars, 1);
        for (i, p) in comps.into_iter().enumerate() {
            out.add_comp(vec![i], p);
        }
        out
    }

    /// The Euler field `sum_i x_i d/dx_i`.
    pub fn euler(n_vars: usize) -> PolyField {
        let mut out = PolyField::zero(n_vars, 1);
        for i in 0..n_vars {
            out.add_comp(vec![i], Poly::var(n_vars, i));
        }
        out
    }

    /// Component `i` of a vector field (degree 1).
    pub fn vector_comp(&self, i: usize) -> Poly {
        assert_eq!(self.degree(), 1);
        self.comp(&[i])
    }

    /// Lie bracket of two vector fields.
    pub fn lie_bracket(&self, other: &PolyField) -> PolyField {
        assert_eq!(self.degree(), 1);
        assert_eq!(other.degree(), 1);
        let n = self.n_vars();
        let mut comps = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = Poly::zero(n);
            for i in 0..n {
                let xi = self.vector_comp(i);
                let yi = other.vector_comp(i);
                if !xi.is_zero() {
                    acc = acc.add(&xi.mul(&other.vector_comp(k).partial(i)));
                }
                if !yi.is_zero() {
                    acc = acc.sub(&yi.mul(&self.vector_comp(k).partial(i)));
                }
            }
            comps.push(acc);
        }
        PolyField::vector(n, comps)
    }
}

/// Wedge a list of vector fields into a decomposable multivector.
pub fn wedge_fields(fields: &[PolyField]) -> PolyField {
    assert!(!fields.is_empty());
    let mut acc = fields[0].clone();
    for f in &fields[1..] {
        acc = acc.wedge(f);
    }
    acc
}

/// The Schouten boundary of a decomposable multivector given by its factors:
/// `sum_{i<j} (-1)^{i+j} [x_i, x_j] ^ x_1 ^ ... (omitting i, j) ... ^ x_m`,
/// with 1-based positions in the sign.
pub fn schouten_boundary(fields: &[PolyField]) -> PolyField {
    let n = fields[0].n_vars();
    let m = fields.len();
    let mut out = PolyField::zero(n, m.saturating_sub(1));
    for a in 0..m {
        for b in a + 1..m {
            let sign = if (a + b) % 2 == 0 { 1i64 } else { -1 };
            let bracket = fields[a].lie_bracket(&fields[b]);
            let mut factors = vec![bracket];
            for (p, f) in fields.iter().enumerate() {
                if p != a && p != b {
                    factors.push(f.clone());
                }
            }
            out = out.add(&wedge_fields(&factors).scale(&Rat::from_int(sign)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wedge_is_graded_commutative() {
        let dx = PolyForm::coordinate(3, &[0]);
        let dy = PolyForm::coordinate(3, &[1]);
        assert_eq!(dx.wedge(&dy), dy.wedge(&dx).scale(&Rat::from_int(-1)));
        assert!(dx.wedge(&dx).is_zero());
        let x_dy = dy.scale_poly(&Poly::var(3, 0));
        let dz = PolyForm::coordinate(3, &[2]);
        assert_eq!(
            x_dy.wedge(&dz),
            PolyForm::coordinate(3, &[1, 2]).scale_poly(&Poly::var(3, 0))
        );
    }

    #[test]
    fn exterior_derivative() {
        // d(x dy) = dx ^ dy
        let x_dy = PolyForm::coordinate(3, &[1]).scale_poly(&Poly::var(3, 0));
        assert_eq!(x_dy.d(), PolyForm::coordinate(3, &[0, 1]));
        // top forms are closed
        assert!(PolyForm::volume(3).scale_poly(&Poly::var(3, 2)).d().is_zero());
    }

    #[test]
    fn d_squared_vanishes() {
        let mut a = PolyForm::zero(4, 1);
        a.add_comp(vec![0], Poly::var(4, 1).mul(&Poly::var(4, 2)));
        a.add_comp(vec![2], Poly::var(4, 3).mul(&Poly::var(4, 3)));
        a.add_comp(vec![3], Poly::var(4, 0));
        assert!(a.d().d().is_zero());
    }

    #[test]
    fn rotation_bracket() {
        // [d/dx, x d/dy - y d/dx] = d/dy
        let n = 2;
        let rot = PolyField::vector(
            n,
            vec![Poly::var(n, 1).scale(&Rat::from_int(-1)), Poly::var(n, 0)],
        );
        let dx = PolyField::coordinate_vector(n, 0);
        assert_eq!(dx.lie_bracket(&rot), PolyField::coordinate_vector(n, 1));
        assert_eq!(
            rot.lie_bracket(&dx),
            PolyField::coordinate_vector(n, 1).scale(&Rat::from_int(-1))
        );
    }

    #[test]
    fn pullback_functorial_and_kills_complement() {
        // inclusion R^2 -> R^3 as (u, v) -> (u, v, 0)
        let inc = vec![
            vec![Rat::one(), Rat::zero()],
            vec![Rat::zero(), Rat::one()],
            vec![Rat::zero(), Rat::zero()],
        ];
        let dz = PolyForm::coordinate(3, &[2]);
        assert!(dz.pullback(&inc).is_zero());
        let dx_dy = PolyForm::coordinate(3, &[0, 1]);
        assert_eq!(dx_dy.pullback(&inc), PolyForm::coordinate(2, &[0, 1]));
        // pullback commutes with d
        let form = PolyForm::coordinate(3, &[1]).scale_poly(&Poly::var(3, 0).mul(&Poly::var(3, 2)));
        assert_eq!(form.d().pullback(&inc), form.pullback(&inc).d());
    }
}
