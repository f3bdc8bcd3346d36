//! Magic monotones for odd-prime qudit systems: discrete Wigner functions,
//! mana, the thauma family, hypothesis-testing quantities and the
//! distillation bounds derived from them, with a dense cone-program solver.

pub mod bounds;
pub mod error;
pub mod io;
pub mod measures;
pub mod operator;
pub mod phase_space;
pub mod sdp;
pub mod stabilizer;
pub mod state;

pub use bounds::{SweepRow, TargetState};
pub use error::{Error, Result};
pub use measures::MeasureResult;
pub use operator::{CMatrix, CVector, HermitianOperator};
pub use phase_space::{DimensionSpec, PhasePoint, PhaseSpace, WignerRep};
pub use stabilizer::{named_state, NamedState, StabilizerSet};
pub use state::PureState;
