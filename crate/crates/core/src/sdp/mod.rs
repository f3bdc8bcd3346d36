//! Dense cone-program solver for PSD, nonnegative and free variable blocks.

pub mod embed;
pub mod program;
pub mod solver;

pub use embed::{embed, embed_hermitian, hermitian_basis, unembed};
pub use program::{BlockKind, ConeProgram, HermVar, LinExpr, PsdVar, ScalarVar};
pub use solver::{solve, solve_with, BlockValue, ConeSolution, SolverOptions, Status};
