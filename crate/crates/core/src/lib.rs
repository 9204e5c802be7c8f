//! Finite-size secret-key-rate bounds for discrete-modulation continuous-variable
//! QKD (BPSK with homodyne decoding, QPSK with heterodyne decoding) under a
//! passive eavesdropper on a pure-loss channel.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: small dense complex Hermitian matrices, Jacobi eigensolver,
//!   support-restricted matrix functions and partial traces.
//! - [`special`]: the error function.
//! - [`states`]: conditional probability tables `p(y|x)` and Eve's
//!   classical-quantum ensembles in the orthonormal `psi` bases.
//! - [`entropy`]: Petz and sandwiched Renyi conditional entropies (both the
//!   symmetry-reduced CQ forms and the general bipartite definitions), the von
//!   Neumann entropy, the entropy variance and the second-order bound `B_a`.
//! - [`rates`]: the three finite-size key-rate estimators and their optimisation
//!   over the amplitude and the Renyi order.
//! - [`verify`]: independent oracles (Monte-Carlo samplers, a series `erf`,
//!   unreduced entropy evaluation, duality identities).
//! - [`cli`]: the `probs`/`entropies`/`rate`/`sweep`/`verify` front end.
//!
//! All entropies are in bits; rates are in bits per channel use.

#![forbid(unsafe_code)]

pub mod cli;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod optim;
pub mod rates;
pub mod rng;
pub mod special;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
