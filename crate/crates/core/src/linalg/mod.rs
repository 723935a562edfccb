//! Dense symmetric linear algebra at desk scale.

mod eig;
mod inequalities;
mod matrix;
mod orthogonal;

pub use eig::{mat_power, sym_eig, SymEig, CLAMP_FRACTION, OFF_DIAGONAL_TOLERANCE, ROTATION_CAP_FACTOR};
pub use inequalities::{
    trace_rotation_check, weyl_check, TraceOutcome, WeylOutcome, TRACE_TOLERANCE, WEYL_TOLERANCE,
};
pub use matrix::{dot, norm2, rank1_update, SquareMatrix, SymMatrix};
pub use orthogonal::{random_orthogonal, OrthogonalMatrix, ORTHOGONALITY_TOLERANCE};
