//! Certification of nonclassical quantum resources through Kirkwood-Dirac
//! type quasiprobability distributions.
//!
//! The pipeline: pick a classical-set model, build a resource witness
//! (geometric or PPT-based), extend it with an ancilla qubit and rescale,
//! factorize it into an ordered projector chain, and evaluate the resulting
//! quasiprobability distribution. Negativity of the witness event certifies
//! resourcefulness; with the geometric witness its magnitude recovers the
//! Frobenius distance to the closest classical state. Weak-value and
//! informationally complete decompositions expose the same negativity
//! through experimentally meaningful quantities.

pub mod chain;
pub mod error;
pub mod qcore;
pub mod quasiprob;
pub mod report;
pub mod resources;
pub mod statefile;
pub mod weakval;
pub mod witness;

pub use error::{QkdError, Result};
