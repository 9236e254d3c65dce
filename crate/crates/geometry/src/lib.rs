//! Exact multisymplectic geometry on `R^N` with rational polynomial
//! coefficients: Cartan calculus, multisymplectic structures, the higher
//! observables algebra, twisted Vinogradov brackets with their
//! Bernoulli-weighted embedding, gauge transformations, and homotopy comoment
//! maps for Lie algebra actions.

pub mod cartan;
pub mod comoment;
pub mod form;
pub mod mss;
pub mod poly;
pub mod verify;
pub mod vino;

pub use cartan::{iota, lie, multicartan_defect, poincare_primitive};
pub use form::{PolyField, PolyForm};
pub use mss::{HamPair, MssSpace};

pub use poly::Poly;
pub use vino::VinElement;
