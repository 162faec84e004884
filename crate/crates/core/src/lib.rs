//! Exact analysis of the multipartite entanglement of the register states
//! produced by the Deutsch-Jozsa, Grover and Simon algorithms.
//!
//! States are integer amplitude vectors with implicit normalization, so every
//! separability decision is exact. The crate is organised bottom-up:
//!
//! * [`function`] and [`state`]: Boolean functions, sign vectors and general
//!   integer states, with tensor products and local bit flips.
//! * [`oracle`]: the Hadamard layer, phase oracle and Simon's two-register
//!   pipeline, so the analysed states come out of a simulation.
//! * [`separability`]: bipartition tests, finest factorization, the
//!   Walsh-Hadamard fast path and the balancedness lemma.
//! * [`census`]: closed-form counts with big integers, log-space fractions and
//!   exhaustive enumeration oracles that reconcile against them.
//! * [`verify`]: the property suites driven by the `eqw verify` command.

pub mod census;
pub mod error;
pub mod function;
pub mod oracle;
pub mod render;
pub mod separability;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
pub use function::{BooleanFunction, LinearForm};
pub use state::StateVector;
