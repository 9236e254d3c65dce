//! Finite-dimensional Lie algebras by structure constants, and their
//! Chevalley-Eilenberg chain complex.

use crate::graded::{Element, GradedSpace};
use crate::multimap::MultiMap;
use crate::ops::Symmetry;
use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("structure constant index out of range: ({0}, {1}) -> {2}")]
    IndexOutOfRange(usize, usize, usize),
    #[error("Jacobi identity fails on generators ({0}, {1}, {2})")]
    JacobiFails(usize, usize, usize),
    #[error("bad Lie algebra JSON: {0}")]
    BadJson(String),
}

/// A Lie algebra on generators `x_1, ..., x_dim` with rational structure
/// constants, validated for antisymmetry and Jacobi at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraData {
    labels: Vec<String>,
    // brackets[i][j] = [x_i, x_j] as a coefficient row, stored for i < j
    table: BTreeMap<(usize, usize), Vec<Rat>>,
}

/// An element of the exterior algebra over the generators: a rational
/// combination of strictly increasing index words.
pub type WedgeSum = BTreeMap<Vec<usize>, Rat>;

/// Canonicalize a wedge word; repeated generators kill it, sorting costs the
/// permutation parity (generators are ungraded).
pub fn wedge_word(indices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let (sorted, sigma) = crate::perm::sorting_permutation(indices);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sorted, sigma.parity()))
}

pub fn wedge_bump(sum: &mut WedgeSum, word: Vec<usize>, c: Rat) {
    if c.is_zero() {
        return;
    }
    let entry = sum.entry(word).or_insert_with(Rat::zero);
    *entry += &c;
}

pub fn wedge_prune(sum: &mut WedgeSum) {
    sum.retain(|_, c| !c.is_zero());
}

impl LieAlgebraData {
    /// Construct from `[x_i, x_j] = sum_k c_{ij}^k x_k`, given for `i < j`
    /// (0-based). Jacobi is checked exhaustively.
    pub fn new(
        labels: Vec<String>,
        brackets: impl IntoIterator<Item = ((usize, usize), Vec<(usize, Rat)>)>,
    ) -> Result<Self, LieError> {
        let dim = labels.len();
        let mut table = BTreeMap::new();
        for ((i, j), row) in brackets {
            let mut coeffs = vec![Rat::zero(); dim];
            for (k, v) in row {
                if i >= dim || j >= dim || k >= dim {
                    return Err(LieError::IndexOutOfRange(i, j, k));
                }
                coeffs[k] = &coeffs[k] + &v;
            }
            if i < j {
                table.insert((i, j), coeffs);
            } else if j < i {
                let coeffs: Vec<Rat> = coeffs.iter().map(|c| -c).collect();
                table.insert((j, i), coeffs);
            }
            // (i, i) rows must vanish; nothing to store
        }
        let out = LieAlgebraData { labels, table };
        out.check_jacobi()?;
        Ok(out)
    }

    fn check_jacobi(&self) -> Result<(), LieError> {
        let dim = self.dim();
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let mut acc = vec![Rat::zero(); dim];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket_basis(a, b);
                        for (m, cm) in inner.iter().enumerate() {
                            if cm.is_zero() {
                                continue;
                            }
                            let outer = self.bracket_basis(m, c);
                            for (l, cl) in outer.iter().enumerate() {
                                acc[l] = &acc[l] + &(cm * cl);
                            }
                        }
                    }
                    if acc.iter().any(|c| !c.is_zero()) {
                        return Err(LieError::JacobiFails(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[x_i, x_j]` as a coefficient row.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<Rat> {
        let dim = self.dim();
        if i == j {
            return vec![Rat::zero(); dim];
        }
        if i < j {
            self.table.get(&(i, j)).cloned().unwrap_or_else(|| vec![Rat::zero(); dim])
        } else {
            self.bracket_basis(j, i).into_iter().map(|c| -c).collect()
        }
    }

    /// The Chevalley-Eilenberg boundary of a single wedge word:
    /// `d(x_1 ^ ... ^ x_k) = sum_{i<j} (-1)^{i+j} [x_i, x_j] ^ ... ^ (hats) ...`
    /// with 1-based positions in the sign; zero on words of length < 2.
    pub fn ce_boundary_word(&self, word: &[usize]) -> WedgeSum {
        let mut out = WedgeSum::new();
        let k = word.len();
        for a in 0..k {
            for b in a + 1..k {
                // (-1)^{i+j} with 1-based positions i = a+1, j = b+1
                let sign = if (a + b) % 2 == 0 { 1 } else { -1 };
                let bracket = self.bracket_basis(word[a], word[b]);
                let rest: Vec<usize> = word
                    .iter()
                    .enumerate()
                    .filter(|(p, _)| *p != a && *p != b)
                    .map(|(_, &x)| x)
                    .collect();
                for (m, cm) in bracket.iter().enumerate() {
                    if cm.is_zero() {
                        continue;
                    }
                    let mut raw = Vec::with_capacity(k - 1);
                    raw.push(m);
                    raw.extend_from_slice(&rest);
                    if let Some((w, parity)) = wedge_word(&raw) {
                        wedge_bump(&mut out, w, cm.signed(sign * parity));
                    }
                }
            }
        }
        wedge_prune(&mut out);
        out
    }

    /// Linear extension of [`Self::ce_boundary_word`].
    pub fn ce_boundary(&self, sum: &WedgeSum) -> WedgeSum {
        let mut out = WedgeSum::new();
        for (w, c) in sum {
            for (w2, c2) in self.ce_boundary_word(w) {
                wedge_bump(&mut out, w2, c * &c2);
            }
        }
        wedge_prune(&mut out);
        out
    }

    /// All strictly increasing index words of the given length.
    pub fn wedge_basis(&self, len: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        fn rec(dim: usize, len: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for i in start..dim {
                cur.push(i);
                rec(dim, len, i + 1, cur, out);
                cur.pop();
            }
        }
        rec(self.dim(), len, 0, &mut Vec::new(), &mut out);
        out
    }

    /// The Lie algebra as a graded space concentrated in degree 0.
    pub fn to_graded_space(&self) -> Arc<GradedSpace> {
        GradedSpace::new(self.labels.iter().map(|l| (l.clone(), 0)).collect()).unwrap()
    }

    /// The bracket as a skew arity-2 multimap on the degree 0 space.
    pub fn bracket_map(&self) -> MultiMap {
        let space = self.to_graded_space();
        let mut m = MultiMap::zero(&space, 2, 0, Symmetry::Skew);
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let row = self.bracket_basis(i, j);
                let el = Element::from_terms(&space, row.into_iter().enumerate());
                m.insert(&[i, j], el).unwrap();
            }
        }
        m
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut cs = Vec::new();
        for ((i, j), row) in &self.table {
            for (k, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    cs.push(serde_json::json!({
                        "i": i + 1, "j": j + 1, "k": k + 1, "v": v.to_string(),
                    }));
                }
            }
        }
        serde_json::json!({
            "dim": self.dim(),
            "labels": self.labels,
            "c": cs,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, LieError> {
        #[derive(Serialize, Deserialize)]
        struct Entry {
            i: usize,
            j: usize,
            k: usize,
            v: String,
        }
        #[derive(Serialize, Deserialize)]
        struct Repr {
            dim: usize,
            #[serde(default)]
            labels: Option<Vec<String>>,
            c: Vec<Entry>,
        }
        let repr: Repr =
            serde_json::from_value(v.clone()).map_err(|e| LieError::BadJson(e.to_string()))?;
        let labels = repr
            .labels
            .unwrap_or_else(|| (1..=repr.dim).map(|i| format!("x{i}")).collect());
        if labels.len() != repr.dim {
            return Err(LieError::BadJson("label count differs from dim".into()));
        }
        let mut rows: BTreeMap<(usize, usize), Vec<(usize, Rat)>> = BTreeMap::new();
        for e in repr.c {
            if e.i == 0 || e.j == 0 || e.k == 0 {
                return Err(LieError::BadJson("indices are 1-based".into()));
            }
            let val: Rat = e
                .v
                .parse()
                .map_err(|_| LieError::BadJson(format!("bad coefficient {}", e.v)))?;
            rows.entry((e.i - 1, e.j - 1)).or_default().push((e.k - 1, val));
        }
        LieAlgebraData::new(labels, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// so(3) with [x, y] = z, [y, z] = x, [z, x] = y.
    pub fn so3() -> LieAlgebraData {
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

    #[test]
    fn jacobi_validation_rejects_garbage() {
        // [a,b] = c, [a,c] = c, [b,c] = a breaks Jacobi: the cyclic sum on
        // (a,b,c) is [[c,a],b] = -[c,b] = [b,c] = a.
        let bad = LieAlgebraData::new(
            vec!["a".into(), "b".into(), "c".into()],
            [
                ((0, 1), vec![(2, Rat::one())]),
                ((0, 2), vec![(2, Rat::one())]),
                ((1, 2), vec![(0, Rat::one())]),
            ],
        );
        assert!(bad.is_err());
    }

    #[test]
    fn ce_boundary_on_so3() {
        let g = so3();
        // d(x ^ y) = -[x, y] = -z
        let d = g.ce_boundary_word(&[0, 1]);
        assert_eq!(d.get(&vec![2]), Some(&Rat::from_int(-1)));
        // d of a generator is zero
        assert!(g.ce_boundary_word(&[0]).is_empty());
        // d(x ^ y ^ z) = -[x,y]^z + [x,z]^y - [y,z]^x = -z^z - y^y - x^x = 0
        assert!(g.ce_boundary_word(&[0, 1, 2]).is_empty());
    }

    #[test]
    fn boundary_squares_to_zero() {
        let g = so3();
        for w in g.wedge_basis(3) {
            let d1 = g.ce_boundary_word(&w);
            assert!(g.ce_boundary(&d1).is_empty());
        }
    }

    #[test]
    fn json_round_trip() {
        let g = so3();
        let j = g.to_json();
        assert_eq!(LieAlgebraData::from_json(&j).unwrap(), g);
    }
}
