//! Study drivers assembling the simulator into reproducible experiments.

mod boson;
mod distill;
mod ghz;

pub use boson::{
    postselected_sweep, preimage_sweep, ExperimentSweep, PostselectedRecord, PreimageRecord,
    SweepMeta,
};
pub use distill::{
    distill_simulate, lambda_rect_closed, lambda_tri_closed, p0_lossless, ps_rect_closed,
    DistillationOutcome, DistillationSpec, MAX_DISTILL_PHOTONS,
};
pub use ghz::{
    code_amplitudes, ghz_column_residual, ghz_full_matrix, ghz_infidelity_sweep, ghz_pipeline,
    ghz_submatrix, search_input_assignments, AssignmentCandidate, GhzReport, GhzSpec,
    MatrixVariant, GHZ_DEFAULT_INPUT_PORTS, GHZ_HERALD_MODES, GHZ_MODES, GHZ_QUBIT_PAIRS,
    GHZ_SPECTATOR_MODE, GHZ_U_SUB,
};
