//! Exact graded multilinear algebra over the rationals.
//!
//! The crate provides the layers needed to state and verify homotopy Lie
//! structures symbolically: arbitrary-precision rationals and Bernoulli
//! numbers, Koszul signs and unshuffles, sparse multilinear maps with the
//! Gerstenhaber and Nijenhuis-Richardson products, truncated symmetric tensor
//! coalgebras with lifts and exponentials, and L-infinity structures and
//! morphisms in both the skew and shifted-symmetric presentations.

pub mod bernoulli;
pub mod coalgebra;
pub mod graded;
pub mod lie;
pub mod linfty;
pub mod multimap;
pub mod ops;
pub mod perm;
pub mod rat;

pub use bernoulli::{bernoulli, phi_coeff};
pub use graded::{Element, GradedSpace};
pub use multimap::MultiMap;
pub use ops::{GradedVector, MultiOp, Product, Shifted, Symmetry};
pub use perm::{dec_sign, ordered_unshuffles, unshuffles, varsigma, Permutation};
pub use rat::Rat;
