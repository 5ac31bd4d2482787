//! Complex dense linear algebra, matrix permanents, and unitary generation.

mod matrix;
mod permanent;
mod unitary;

pub use matrix::{largest_hermitian_eigenvalue, ComplexMatrix};
pub use permanent::{permanent, MAX_PERMANENT_SIDE};
pub use unitary::{fourier_unitary, haar_unitary, householder_qr, UnitaryKind, RNG_ALGORITHM};

pub(crate) use permanent::permanent_unchecked;

/// Default tolerance for unitarity checks; double-precision accumulation
/// over the mode counts used here (≤ 30) stays well inside it.
pub const UNITARY_TOL: f64 = 1e-10;
