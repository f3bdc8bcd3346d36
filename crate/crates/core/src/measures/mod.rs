//! Magic monotones: mana, min-/max-thauma, relative-entropy thauma and the
//! hypothesis-testing quantities. All values are in bits.

mod constraints;
pub mod entropy;
pub mod frank_wolfe;
pub mod hypothesis;
pub mod thauma;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::phase_space::PhaseSpace;
use crate::sdp::{solve, ConeProgram, ConeSolution, Status};
use crate::state::validate_state;

pub use entropy::{relative_entropy, relative_entropy_variance};
pub use frank_wolfe::{theta, theta_with, ThetaOptions};
pub use hypothesis::{dh_epsilon, min_dh_over_w, DhResult};
pub use thauma::{theta_max, theta_max_appendix_form, theta_min};

/// Relative eigenvalue cutoff for support projectors.
pub const SUPPORT_CUTOFF: f64 = 1e-9;
/// Largest tolerated disagreement between primal and dual optima, in bits.
pub const DUALITY_TOL: f64 = 1e-6;

/// Value of a measure with optional optimization certificates.
#[derive(Debug, Clone, Serialize)]
pub struct MeasureResult {
    pub value: f64,
    #[serde(skip)]
    pub primal_witness: Option<HermitianOperator>,
    #[serde(skip)]
    pub dual_witness: Option<HermitianOperator>,
    /// Primal/dual disagreement for SDP measures; Frank–Wolfe gap for `θ`.
    pub gap: f64,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// `log₂ ‖ρ‖_{W,1}`.
pub fn mana(ps: &PhaseSpace, rho: &HermitianOperator) -> Result<f64> {
    let norm = ps.wigner_trace_norm(rho)?;
    validate_state(rho)?;
    Ok(norm.log2())
}

pub(crate) fn check_state(ps: &PhaseSpace, rho: &HermitianOperator) -> Result<()> {
    if rho.dim() != ps.dim() {
        return Err(Error::DimensionMismatch {
            expected: ps.dim(),
            found: rho.dim(),
        });
    }
    validate_state(rho)
}

pub(crate) fn solve_optimal(prog: &ConeProgram) -> Result<ConeSolution> {
    let sol = solve(prog);
    match sol.status {
        Status::Optimal => Ok(sol),
        other => Err(Error::Solver {
            program: prog.description.clone(),
            status: other.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::named_state;

    #[test]
    fn strange_and_norrell_mana() {
        let ps = PhaseSpace::build(&[3]).unwrap();
        for name in ["Strange", "Norrell"] {
            let m = mana(&ps, &named_state(name).unwrap().density()).unwrap();
            assert!((m - (5.0f64 / 3.0).log2()).abs() < 1e-10, "{name}");
        }
    }

    #[test]
    fn mana_rejects_non_states() {
        let ps = PhaseSpace::build(&[3]).unwrap();
        assert!(mana(&ps, &HermitianOperator::identity(3)).is_err());
    }
}
