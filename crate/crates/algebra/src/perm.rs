//! Permutations, Koszul signs and unshuffle enumeration.
//!
//! Permutations are stored with 1-based images, following the Cauchy two-line
//! notation: `sigma.image(i)` is the bottom-row entry under `i`. A permutation
//! acts on a tuple by pulling entries, `(sigma . x)_i = x_{sigma(i)}`, so an
//! unshuffle is a permutation whose image sequence increases inside each block.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Sign = i64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("images {0:?} are not a bijection of 1..={1}")]
    NotBijective(Vec<usize>, usize),
    #[error("degree list has length {got}, permutation acts on {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("empty block list")]
    EmptyBlocks,
    #[error("block sizes must be positive")]
    ZeroBlock,
}

/// A permutation of `{1, ..., n}` in one-line (image) notation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for &i in &images {
            if i == 0 || i > n || seen[i] {
                return Err(PermError::NotBijective(images.clone(), n));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// The image `sigma(i)`, 1-based.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img - 1] = i + 1;
        }
        Permutation { images: inv }
    }

    /// Composite acting as `self` after `other`: pulling a tuple by the result
    /// equals pulling by `other`, then by `self`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "size mismatch in composition");
        let images = (1..=self.len()).map(|i| other.image(self.image(i))).collect();
        Permutation { images }
    }

    /// Pull a slice into permuted order: result `i` holds `x[sigma(i+1) - 1]`.
    pub fn apply<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        assert_eq!(xs.len(), self.len());
        self.images.iter().map(|&i| xs[i - 1].clone()).collect()
    }

    /// Parity of the permutation as `+1` or `-1`.
    pub fn parity(&self) -> Sign {
        parity_of(&self.images)
    }

    /// Koszul sign `epsilon(sigma; x)`: the parity of the subpermutation of the
    /// image sequence restricted to slots holding odd-degree entries.
    pub fn koszul_sign(&self, degrees: &[i64]) -> Result<Sign, PermError> {
        if degrees.len() != self.len() {
            return Err(PermError::LengthMismatch {
                expected: self.len(),
                got: degrees.len(),
            });
        }
        let odd: Vec<usize> = self
            .images
            .iter()
            .copied()
            .filter(|&i| degrees[i - 1].rem_euclid(2) == 1)
            .collect();
        Ok(parity_of(&odd))
    }

    /// Odd Koszul sign `chi(sigma; x) = (-1)^sigma * epsilon(sigma; x)`.
    pub fn odd_koszul_sign(&self, degrees: &[i64]) -> Result<Sign, PermError> {
        Ok(self.parity() * self.koszul_sign(degrees)?)
    }
}

fn parity_of(seq: &[usize]) -> Sign {
    let mut inversions = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Stable-sort a key slice ascending and return (sorted keys, sorting
/// permutation `sigma`) with `sorted[i] = keys[sigma(i)]`. The permutation can
/// then be fed to [`Permutation::koszul_sign`] against the original degrees.
pub fn sorting_permutation<K: Ord + Clone>(keys: &[K]) -> (Vec<K>, Permutation) {
    let mut order: Vec<usize> = (1..=keys.len()).collect();
    order.sort_by_key(|&i| keys[i - 1].clone());
    let sorted = order.iter().map(|&i| keys[i - 1].clone()).collect();
    (sorted, Permutation { images: order })
}

/// All `(k_1, ..., k_l)`-unshuffles: permutations increasing inside each block,
/// sorted lexicographically by image sequence. There are `n!/(k_1!...k_l!)`.
pub fn unshuffles(blocks: &[usize]) -> Result<Vec<Permutation>, PermError> {
    if blocks.is_empty() {
        return Err(PermError::EmptyBlocks);
    }
    if blocks.iter().any(|&k| k == 0) {
        return Err(PermError::ZeroBlock);
    }
    let n: usize = blocks.iter().sum();
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    distribute(&mut prefix, &(1..=n).collect::<Vec<_>>(), blocks, &mut out);
    out.sort();
    Ok(out)
}

// Choose which of the remaining indices fill the first block (kept in order),
// then recurse on the rest.
fn distribute(prefix: &mut Vec<usize>, remaining: &[usize], blocks: &[usize], out: &mut Vec<Permutation>) {
    if blocks.is_empty() {
        out.push(Permutation {
            images: prefix.clone(),
        });
        return;
    }
    let k = blocks[0];
    for picks in combinations(remaining.len(), k) {
        let chosen: Vec<usize> = picks.iter().map(|&i| remaining[i]).collect();
        let rest: Vec<usize> = remaining
            .iter()
            .enumerate()
            .filter(|(i, _)| !picks.contains(i))
            .map(|(_, &v)| v)
            .collect();
        let old_len = prefix.len();
        prefix.extend_from_slice(&chosen);
        distribute(prefix, &rest, &blocks[1..], out);
        prefix.truncate(old_len);
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Ordered unshuffles: the subset of [`unshuffles`] where the first entries of
/// consecutive equal-size blocks increase. The condition is vacuous between
/// blocks of different sizes, so unequal neighbours pass through untouched.
pub fn ordered_unshuffles(blocks: &[usize]) -> Result<Vec<Permutation>, PermError> {
    let all = unshuffles(blocks)?;
    let starts: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, &k| {
            let s = *acc;
            *acc += k;
            Some(s)
        })
        .collect();
    Ok(all
        .into_iter()
        .filter(|sigma| {
            blocks.windows(2).enumerate().all(|(j, w)| {
                w[0] != w[1] || sigma.image(starts[j] + 1) < sigma.image(starts[j + 1] + 1)
            })
        })
        .collect())
}

/// The total Koszul sign `varsigma(k) = -(-1)^{k(k+1)/2}`.
pub fn varsigma(k: usize) -> Sign {
    let e = (k * (k + 1) / 2) % 2;
    if e == 0 {
        -1
    } else {
        1
    }
}

/// Sign of the decalage isomorphism on a tuple of the given (unshifted)
/// degrees: `(-1)^{sum_i (n-i) d_i}`.
pub fn dec_sign(degrees: &[i64]) -> Sign {
    let n = degrees.len() as i64;
    let mut e: i64 = 0;
    for (i, d) in degrees.iter().enumerate() {
        e += (n - 1 - i as i64) * d;
    }
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
