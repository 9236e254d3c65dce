//! Bernoulli numbers and the embedding coefficients derived from them.
//!
//! The convention here is `B_0 = 1`, `B_1 = -1/2`, fixed by the recurrence
//! `sum_{j=0}^{m-1} C(m,j) B_j = 0` for `m >= 2`.

use crate::rat::{binomial, factorial, pow2, Rat};
use std::sync::Mutex;
use std::sync::OnceLock;

fn cache() -> &'static Mutex<Vec<Rat>> {
    static CACHE: OnceLock<Mutex<Vec<Rat>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![Rat::one()]))
}

/// The `m`-th Bernoulli number, memoized.
pub fn bernoulli(m: usize) -> Rat {
    let mut table = cache().lock().unwrap();
    while table.len() <= m {
        let k = table.len();
        // sum_{j=0}^{k} C(k+1, j) B_j = 0, solved for B_k.
        let mut acc = Rat::zero();
        for (j, b) in table.iter().enumerate() {
            acc += &(binomial((k + 1) as u64, j as u64) * b.clone());
        }
        let bk = -acc / binomial((k + 1) as u64, k as u64);
        table.push(bk);
    }
    table[m].clone()
}

/// Coefficient of the pairing-power embedding: `phi_k = 2^{k-1} B_{k-1} / (k-1)!`.
///
/// In particular `phi_1 = 1`, `phi_2 = -1`, `phi_3 = 1/3` and `phi_{2k} = 0`
/// for `k >= 2` since the odd Bernoulli numbers past `B_1` vanish.
pub fn phi_coeff(k: usize) -> Rat {
    assert!(k >= 1, "phi_coeff needs k >= 1");
    pow2((k - 1) as i64) * bernoulli(k - 1) / factorial((k - 1) as u64)
}
