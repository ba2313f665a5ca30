//! Dense complex linear algebra and state/projector constructors on small
//! Hilbert spaces (dimension ≤ 64 after ancilla extension).

pub mod eig;
pub mod matrix;
pub mod states;

pub use eig::eig_hermitian;
pub use matrix::{frobenius_distance, tensor, CMatrix, Ket, DIM_CAP};
pub use states::{
    bloch_state, computational_basis, dephase, sic_qubit, DensityMatrix, Projector,
};
