use thiserror::Error;

/// Errors produced by construction and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("permanent size {side} exceeds supported maximum {max}")]
    PermanentTooLarge { side: usize, max: usize },

    #[error("matrix is not unitary (max deviation {deviation:.3e} > tol {tol:.3e})")]
    NotUnitary { deviation: f64, tol: f64 },

    #[error("transmission efficiency {eta} outside [0, 1]")]
    InvalidEta { eta: f64 },

    #[error("loss {db} dB is negative")]
    NegativeLossDb { db: f64 },

    #[error("mode count {m} below minimum {min}")]
    TooFewModes { m: usize, min: usize },

    #[error("loss matrix is not separable (worst factor residual {residual:.3e}); \
             only rank-one nonnegative loss matrices admit a beamsplitter dilation")]
    NonSeparableLoss { residual: f64 },

    #[error("photon number mismatch: input carries {input}, output carries {output}")]
    PhotonMismatch { input: usize, output: usize },

    #[error("photon count {photons} exceeds supported maximum {max}")]
    TooManyPhotons { photons: usize, max: usize },

    #[error("dilated system of {modes} modes exceeds oracle limit {max}")]
    DilationTooLarge { modes: usize, max: usize },

    #[error("mode index {mode} out of range for {m} modes")]
    ModeOutOfRange { mode: usize, m: usize },

    #[error("duplicate measured mode {mode}")]
    DuplicateMode { mode: usize },

    #[error("partial trace requires a nonempty set of kept modes")]
    EmptyKeepSet,

    #[error("state is degenerate: herald probability is zero")]
    DegenerateHerald,

    #[error("dual-rail post-selection probability is zero")]
    DegeneratePostselection,

    #[error("transformation is identically zero")]
    ZeroTransform,

    #[error("qubit count mismatch: state has {state} qubits, operator has {operator}")]
    QubitCountMismatch { state: usize, operator: usize },

    #[error("fit needs at least {needed} points, got {got}")]
    NotEnoughPoints { needed: usize, got: usize },

    #[error("fit requires strictly positive abscissae and ordinates")]
    NonPositiveFitData,
}

pub type Result<T> = std::result::Result<T, Error>;
