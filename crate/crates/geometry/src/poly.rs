//! Multivariate polynomials with rational coefficients.
//!
//! Exponent vectors have fixed length (the ambient dimension); zero
//! coefficients are never stored.

use plectra_algebra::Rat;
use std::collections::BTreeMap;
use std::fmt;

/// A polynomial in `n_vars` variables over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    n_vars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl Poly {
    pub fn zero(n_vars: usize) -> Self {
        Poly {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Rat) -> Self {
        let mut p = Poly::zero(n_vars);
        p.add_term(vec![0; n_vars], c);
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Poly::constant(n_vars, Rat::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars);
        let mut e = vec![0; n_vars];
        e[i] = 1;
        let mut p = Poly::zero(n_vars);
        p.add_term(e, Rat::one());
        p
    }

    pub fn monomial(n_vars: usize, exps: Vec<u32>, c: Rat) -> Self {
        assert_eq!(exps.len(), n_vars);
        let mut p = Poly::zero(n_vars);
        p.add_term(exps, c);
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.n_vars);
        let entry = self.terms.entry(exps).or_insert_with(Rat::zero);
        *entry += &c;
        if entry.is_zero() {
            // re-borrow to remove; find the key again cheaply
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&Rat::from_int(-1)))
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n_vars);
        }
        Poly {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.n_vars, other.n_vars);
        let mut out = Poly::zero(self.n_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exps: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(exps, c1 * c2);
            }
        }
        out
    }

    /// Partial derivative with respect to `x_i`.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.n_vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut exps = e.clone();
            exps[i] -= 1;
            out.add_term(exps, c * &Rat::from_int(e[i] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.n_vars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term * point[i].clone();
                }
            }
            acc += &term;
        }
        acc
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Substitute `x_i = sum_j a[i][j] y_j`, producing a polynomial in
    /// `a[0].len()` new variables. Used by linear pullbacks.
    pub fn substitute_linear(&self, a: &[Vec<Rat>]) -> Poly {
        assert_eq!(a.len(), self.n_vars);
        let m = if a.is_empty() { 0 } else { a[0].len() };
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut acc = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let mut lin = Poly::zero(m);
                for (j, coeff) in a[i].iter().enumerate() {
                    if !coeff.is_zero() {
                        let mut exps = vec![0; m];
                        exps[j] = 1;
                        lin.add_term(exps, coeff.clone());
                    }
                }
                for _ in 0..k {
                    acc = acc.mul(&lin);
                }
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|(e, c)| serde_json::json!({ "exp": e, "c": c.to_string() }))
            .collect();
        serde_json::Value::Array(terms)
    }

    pub fn from_json(n_vars: usize, v: &serde_json::Value) -> Option<Poly> {
        let arr = v.as_array()?;
        let mut out = Poly::zero(n_vars);
        for t in arr {
            let exps: Vec<u32> = serde_json::from_value(t.get("exp")?.clone()).ok()?;
            if exps.len() != n_vars {
                return None;
            }
            let c: Rat = t.get("c")?.as_str()?.parse().ok()?;
            out.add_term(exps, c);
        }
        Some(out)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let vars: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        if k == 1 {
                            format!("x{i}")
                        } else {
                            format!("x{i}^{k}")
                        }
                    })
                    .collect();
                if vars.is_empty() {
                    format!("{c}")
                } else if c.is_one() {
                    vars.join("*")
                } else {
                    format!("{c}*{}", vars.join("*"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_operations() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.mul(&x).add(&y.scale(&Rat::from_int(3)));
        assert_eq!(p.eval(&[Rat::from_int(2), Rat::from_int(1)]), Rat::from_int(7));
        assert_eq!(p.partial(0), x.scale(&Rat::from_int(2)));
        assert_eq!(p.partial(1), Poly::constant(2, Rat::from_int(3)));
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn substitution() {
        // p(x0, x1) = x0 * x1 with x0 = u + v, x1 = u - v gives u^2 - v^2
        let p = Poly::var(2, 0).mul(&Poly::var(2, 1));
        let a = vec![
            vec![Rat::one(), Rat::one()],
            vec![Rat::one(), Rat::from_int(-1)],
        ];
        let q = p.substitute_linear(&a);
        let u2 = Poly::var(2, 0).mul(&Poly::var(2, 0));
        let v2 = Poly::var(2, 1).mul(&Poly::var(2, 1));
        assert_eq!(q, u2.sub(&v2));
    }
}
