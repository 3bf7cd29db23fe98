//! Exact computation of classical and weighted Hurwitz numbers and of the
//! hypergeometric τ-functions that generate them.
//!
//! Everything here is exact rational arithmetic. The crate is organised
//! bottom-up:
//!
//! - [`algebra`]: rationals, truncated series in β, multivariate polynomials,
//!   exact determinants.
//! - [`partitions`]: integer partitions and their invariants (z_μ, hooks,
//!   contents).
//! - [`characters`]: irreducible S_N characters by Murnaghan–Nakayama, with an
//!   independent bialternant oracle.
//! - [`hurwitz`]: the Frobenius–Schur character sum and a brute-force
//!   factorization count.
//! - [`weights`]: weight generating functions, weight factors and weighted
//!   Hurwitz numbers.
//! - [`tau_series`]: content products and the Schur / power-sum expansions of
//!   the τ-function.
//! - [`analytic`]: the adapted basis φ_k, its recursion and spectral-curve
//!   identities, and determinantal / Wronskian evaluation of τ([X]).

pub mod algebra;
pub mod analytic;
pub mod characters;
mod error;
pub mod hurwitz;
pub mod partitions;
pub mod tau_series;
pub mod weights;

pub use algebra::{BetaSeries, Rational};
pub use error::{Error, Result};
pub use partitions::Partition;
pub use weights::WeightGen;
