//! Exact multiphoton simulation in the occupation-number picture.

mod basis;
mod channel;
mod conditional;
mod density;
mod evolve;
mod vector;

pub use basis::{
    binomial, check_mode_set, compositions, loss_vectors_up_to, FockBasis, FockState, MultiBasis,
};
pub use channel::{apply_output_loss_kraus, input_loss_mixture};
pub use conditional::{
    conditional_state, conditional_state_difference, oracle_conditional_state_dilated,
    ConditionalState, HeraldSpec, MAX_ORACLE_MODES, MAX_ORACLE_PHOTONS, MAX_PIPELINE_PHOTONS,
};
pub use density::{partial_trace, DensityMatrix};
pub use evolve::{evolve_basis_state, evolve_pure, transition_amplitude};
pub use vector::FockVector;
