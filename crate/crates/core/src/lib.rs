//! Decay of Werner and Werner-like two-qubit states under independent
//! amplitude-damping reservoirs.
//!
//! The crate is organised bottom-up:
//!
//! * [`matkit`]: small dense complex matrices and a Jacobi eigensolver;
//! * [`states`]: Bell states, the X/Y/Z Werner families, Pauli decomposition;
//! * [`dynamics`]: the exact damping channel and an RK4 master-equation oracle;
//! * [`measures`]: Bell-violation degree, concurrence, entanglement of
//!   formation, negativity;
//! * [`closedform`]: the analytic decay laws as plain scalar functions;
//! * [`analysis`]: time scans, sudden-death and crossing times, orderings;
//! * [`selfcheck`]: the invariant suite behind `werner validate`.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is on and plain iterators otherwise.

use thiserror::Error;

pub mod analysis;
pub mod closedform;
pub mod dynamics;
pub mod matkit;
pub mod measures;
pub mod numfmt;
pub mod par;
pub mod random;
pub mod selfcheck;
pub mod states;
pub mod tolerance;

pub use analysis::{AnalysisError, CrossingEvent, EventKind, ScanTable};
pub use closedform::{ClosedFormError, ClosedFormInputs};
pub use dynamics::{ChannelFactors, DampingProfile, DynamicsError};
pub use matkit::{ComplexMatrix, MatError};
pub use measures::{Measure, MeasureSet};
pub use par::Execution;
pub use states::{DensityMatrix, Family, StateError, WernerSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Matrix(#[from] MatError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    ClosedForm(#[from] ClosedFormError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}
