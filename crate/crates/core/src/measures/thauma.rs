//! Min- and max-thauma as pairs of semidefinite programs.
//!
//! ```text
//! θ_min(ρ) = −log₂ max{tr[P_ρ σ] : σ ⪰ 0, ‖σ‖_{W,1} ≤ 1}
//!          = −log₂ min{‖Q‖_{W,∞} : Q ⪰ P_ρ}
//! θ_max(ρ) =  log₂ max{tr[ρ G] : G ⪰ 0, ‖G‖_{W,∞} ≤ 1}
//!          =  log₂ min{‖V‖_{W,1} : V ⪰ ρ}
//! ```
//!
//! Each side is solved as its own program and the two optima must agree.

use super::constraints::{add_wigner_l1_ball, add_wigner_linf_ball, Radius};
use super::{check_state, solve_optimal, MeasureResult, DUALITY_TOL, SUPPORT_CUTOFF};
use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::phase_space::PhaseSpace;
use crate::sdp::{solve, ConeProgram, LinExpr, Status};

fn agree(name: &str, primal: f64, dual: f64) -> Result<f64> {
    let gap = (primal - dual).abs();
    if gap > DUALITY_TOL {
        return Err(Error::Solver {
            program: name.to_string(),
            status: format!("primal {primal:.9} and dual {dual:.9} disagree by {gap:.3e}"),
        });
    }
    Ok(gap)
}

pub fn theta_min(ps: &PhaseSpace, rho: &HermitianOperator) -> Result<MeasureResult> {
    check_state(ps, rho)?;
    let d = ps.dim();
    let proj = rho.support_projector(SUPPORT_CUTOFF);

    let mut primal = ConeProgram::new("min-thauma primal");
    let sigma = primal.add_hermitian_psd(d);
    add_wigner_l1_ball(&mut primal, ps, &[(sigma, 1.0)], 1.0);
    primal.minimize(LinExpr::new().hermitian(sigma, &proj, -1.0));
    let ps_sol = solve_optimal(&primal)?;
    let overlap = -ps_sol.primal_value;

    let mut dual = ConeProgram::new("min-thauma dual");
    let z = dual.add_hermitian_psd(d);
    let t = dual.add_nonneg(1);
    add_wigner_linf_ball(&mut dual, ps, &[(z, 1.0)], Some(&proj), Radius::Var(t));
    dual.minimize(LinExpr::new().scalar(t, 0, 1.0));
    let ds_sol = solve_optimal(&dual)?;
    let norm = ds_sol.primal_value;

    let value = -overlap.log2();
    let gap = agree("min-thauma", value, -norm.log2())?;
    Ok(MeasureResult {
        value,
        primal_witness: Some(ps_sol.hermitian(sigma)),
        dual_witness: Some(&proj + &ds_sol.hermitian(z)),
        gap,
        iterations: ps_sol.iterations + ds_sol.iterations,
        diagnostics: Vec::new(),
    })
}

pub fn theta_max(ps: &PhaseSpace, rho: &HermitianOperator) -> Result<MeasureResult> {
    check_state(ps, rho)?;
    let d = ps.dim();
    let n = ps.num_points();

    let mut primal = ConeProgram::new("max-thauma primal");
    let g = primal.add_hermitian_psd(d);
    add_wigner_linf_ball(&mut primal, ps, &[(g, 1.0)], None, Radius::Fixed(1.0));
    primal.minimize(LinExpr::new().hermitian(g, rho, -1.0));
    let ps_sol = solve_optimal(&primal)?;
    let overlap = -ps_sol.primal_value;

    // V = ρ + Z with W_V(u) = p_u − m_u; minimize Σ (p + m).
    let mut dual = ConeProgram::new("max-thauma dual");
    let z = dual.add_hermitian_psd(d);
    let p = dual.add_nonneg(n);
    let m = dual.add_nonneg(n);
    let df = d as f64;
    for (u, a) in ps.point_operators().iter().enumerate() {
        let expr = LinExpr::new()
            .hermitian(z, a, 1.0 / df)
            .scalar(p, u, -1.0)
            .scalar(m, u, 1.0);
        dual.add_eq(expr, -a.inner(rho) / df);
    }
    dual.minimize(LinExpr::new().sum(p, 1.0).sum(m, 1.0));
    let ds_sol = solve_optimal(&dual)?;
    let norm = ds_sol.primal_value;

    let value = overlap.log2();
    let gap = agree("max-thauma", value, norm.log2())?;
    Ok(MeasureResult {
        value,
        primal_witness: Some(ps_sol.hermitian(g)),
        dual_witness: Some(rho + &ds_sol.hermitian(z)),
        gap,
        iterations: ps_sol.iterations + ds_sol.iterations,
        diagnostics: Vec::new(),
    })
}

/// The alternative dual form `log₂ min{tr V : V ⪰ ρ, ‖V‖_{W,1} ≤ 1}`.
///
/// `‖V‖_{W,1} ≥ tr V ≥ tr ρ = 1` forces `V = ρ`, so this program is feasible
/// only for states with non-negative Wigner function (where it returns 0).
/// Returns the solver status alongside the value when optimal.
pub fn theta_max_appendix_form(ps: &PhaseSpace, rho: &HermitianOperator) -> Result<(Status, Option<f64>)> {
    check_state(ps, rho)?;
    let mut prog = ConeProgram::new("max-thauma trace form");
    let z = prog.add_hermitian_psd(ps.dim());
    // ‖ρ + Z‖_{W,1} ≤ 1, written with ρ moved into the right-hand side.
    let n = ps.num_points();
    let df = ps.dim() as f64;
    let p = prog.add_nonneg(n);
    let m = prog.add_nonneg(n);
    let slack = prog.add_nonneg(1);
    for (u, a) in ps.point_operators().iter().enumerate() {
        let expr = LinExpr::new()
            .hermitian(z, a, 1.0 / df)
            .scalar(p, u, -1.0)
            .scalar(m, u, 1.0);
        prog.add_eq(expr, -a.inner(rho) / df);
    }
    prog.add_eq(LinExpr::new().sum(p, 1.0).sum(m, 1.0).scalar(slack, 0, 1.0), 1.0);
    prog.minimize(LinExpr::new().hermitian_trace(z, 1.0));
    prog.set_offset(rho.trace());
    let sol = solve(&prog);
    let value = (sol.status == Status::Optimal).then(|| sol.primal_value.log2());
    Ok((sol.status, value))
}
