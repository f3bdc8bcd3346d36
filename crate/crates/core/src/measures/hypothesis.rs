//! Hypothesis-testing relative entropy and its minimum over `W`.

use super::constraints::{add_wigner_linf_ball, Radius};
use super::{check_state, solve_optimal, MeasureResult, SUPPORT_CUTOFF};
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::phase_space::PhaseSpace;
use crate::sdp::{ConeProgram, HermVar, LinExpr};

/// Optimal type-II error below this is reported as `D_H = +∞`.
pub const ZERO_ERROR_TOL: f64 = 1e-9;

/// `D_H^ε` together with the optimal test `M`.
#[derive(Debug, Clone)]
pub struct DhResult {
    /// Bits; `+∞` when the optimal type-II error vanishes.
    pub value: f64,
    /// `min tr[M σ]`.
    pub type_two_error: f64,
    pub test: HermitianOperator,
    pub iterations: usize,
}

fn check_eps(eps: f64) -> Result<()> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::InvalidArgument(format!("ε = {eps} must lie in [0, 1)")));
    }
    Ok(())
}

/// Adds a test `0 ⪯ M ⪯ I` with `tr[M ρ] ≥ 1 − ε`.
fn add_test(prog: &mut ConeProgram, rho: &HermitianOperator, eps: f64) -> HermVar {
    let d = rho.dim();
    let m = prog.add_hermitian_psd(d);
    let complement = prog.add_hermitian_psd(d);
    prog.add_hermitian_eq(&[(m, 1.0), (complement, 1.0)], &HermitianOperator::identity(d));
    let excess = prog.add_nonneg(1);
    prog.add_eq(LinExpr::new().hermitian(m, rho, 1.0).scalar(excess, 0, -1.0), 1.0 - eps);
    m
}

/// `D_H^ε(ρ‖σ) = −log₂ min{tr[M σ] : 0 ⪯ M ⪯ I, tr[M ρ] ≥ 1 − ε}`.
pub fn dh_epsilon(rho: &HermitianOperator, sigma: &HermitianOperator, eps: f64) -> Result<DhResult> {
    check_eps(eps)?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    crate::state::validate_state(rho)?;
    if !sigma.is_psd(crate::state::PSD_TOL) {
        return Err(Error::InvalidArgument("σ must be positive semidefinite".into()));
    }
    if eps == 0.0 {
        // The constraint forces M = P_ρ + K with K on ker ρ, and K = 0 is optimal.
        let test = rho.support_projector(SUPPORT_CUTOFF);
        let err = test.inner(sigma);
        return Ok(DhResult {
            value: if err <= ZERO_ERROR_TOL { f64::INFINITY } else { -err.log2() },
            type_two_error: err.max(0.0),
            test,
            iterations: 0,
        });
    }
    let mut prog = ConeProgram::new("hypothesis testing");
    let m = add_test(&mut prog, rho, eps);
    prog.minimize(LinExpr::new().hermitian(m, sigma, 1.0));
    let sol = solve_optimal(&prog)?;
    let err = sol.primal_value;
    Ok(DhResult {
        value: if err <= ZERO_ERROR_TOL { f64::INFINITY } else { -err.log2() },
        type_two_error: err.max(0.0),
        test: sol.hermitian(m),
        iterations: sol.iterations,
    })
}

/// `min_{σ∈W} D_H^ε(ρ‖σ)`, computed through the single program
/// `−log₂ min{‖Q‖_{W,∞} : Q ⪰ M, 0 ⪯ M ⪯ I, tr[M ρ] ≥ 1 − ε}`.
///
/// The primal witness is the test `M`, the dual witness is `Q`.
pub fn min_dh_over_w(ps: &PhaseSpace, rho: &HermitianOperator, eps: f64) -> Result<MeasureResult> {
    check_eps(eps)?;
    check_state(ps, rho)?;
    let mut prog = ConeProgram::new("W-minimized hypothesis testing");
    let z = prog.add_hermitian_psd(ps.dim());
    let t = prog.add_nonneg(1);
    // At ε = 0 the test is pinned to P_ρ (see `dh_epsilon`); keeping it as a
    // variable leaves the program without a strictly feasible point.
    let (test_var, fixed) = if eps == 0.0 {
        let proj = rho.support_projector(SUPPORT_CUTOFF);
        add_wigner_linf_ball(&mut prog, ps, &[(z, 1.0)], Some(&proj), Radius::Var(t));
        (None, Some(proj))
    } else {
        let m = add_test(&mut prog, rho, eps);
        add_wigner_linf_ball(&mut prog, ps, &[(m, 1.0), (z, 1.0)], None, Radius::Var(t));
        (Some(m), None)
    };
    prog.minimize(LinExpr::new().scalar(t, 0, 1.0));
    let sol = solve_optimal(&prog)?;
    let test = match (test_var, fixed) {
        (Some(m), _) => sol.hermitian(m),
        (None, Some(proj)) => proj,
        (None, None) => unreachable!(),
    };
    let q = &test + &sol.hermitian(z);
    Ok(MeasureResult {
        value: -sol.primal_value.log2(),
        primal_witness: Some(test),
        dual_witness: Some(q),
        gap: sol.gap,
        iterations: sol.iterations,
        diagnostics: Vec::new(),
    })
}
