//! Exact arithmetic for multiple harmonic sums and congruences of the
//! binomial coefficients `C(kp-1, p-1)` modulo prime powers.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: rationals, `Z/p^m`, valuations, integer/rational polynomials,
//!   polynomial CRT and unimodular integer matrices.
//! * [`mhs`]: multiple harmonic sums `H(λ; n)`, the elementary-symmetric sums
//!   `H({1}^j; n)` (exactly and modulo `p^m`) and the generating polynomial
//!   `f_n(T)`.
//! * [`extremal`]: generalized Wolstenholme coefficients and the extremal
//!   polynomials `b_{j,n}(T)`, built both by a matrix recipe and by CRT.
//! * [`bernoulli`]: exact Bernoulli numbers and residues mod `p` by two
//!   independent methods.
//! * [`congruence`]: the verification engine producing [`congruence::CongruenceReport`]s.
//! * [`cli`]: table emission, prime-range scans with checkpoints, report IO.
//!
//! With the default `parallel` feature, batch verification and scans run on
//! rayon; without it the same APIs run sequentially.

pub mod arith;
pub mod bernoulli;
pub mod cli;
pub mod congruence;
mod error;
pub mod extremal;
pub mod mhs;
pub mod parallel;

pub use error::{Error, Result};
