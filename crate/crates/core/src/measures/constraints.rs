//! Wigner-norm constraints shared by the thauma programs.

use crate::operator::HermitianOperator;
use crate::phase_space::PhaseSpace;
use crate::sdp::{ConeProgram, HermVar, LinExpr, ScalarVar};

/// Right-hand side of a norm-ball constraint.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Radius {
    Fixed(f64),
    Var(ScalarVar),
}

/// Adds `‖Σ_k c_k X_k‖_{W,1} ≤ bound` through the split `W(u) = p_u − m_u`
/// with `p, m ≥ 0` and a slack on `Σ (p + m)`.
pub(crate) fn add_wigner_l1_ball(prog: &mut ConeProgram, ps: &PhaseSpace, terms: &[(HermVar, f64)], bound: f64) {
    let n = ps.num_points();
    let d = ps.dim() as f64;
    let p = prog.add_nonneg(n);
    let m = prog.add_nonneg(n);
    let slack = prog.add_nonneg(1);
    for (u, a) in ps.point_operators().iter().enumerate() {
        let expr = terms
            .iter()
            .fold(LinExpr::new(), |acc, &(x, c)| acc.hermitian(x, a, c / d))
            .scalar(p, u, -1.0)
            .scalar(m, u, 1.0);
        prog.add_eq(expr, 0.0);
    }
    prog.add_eq(LinExpr::new().sum(p, 1.0).sum(m, 1.0).scalar(slack, 0, 1.0), bound);
}

/// Adds `|tr[A_u (Σ_k c_k X_k + offset)]| ≤ radius` at every point, i.e.
/// `‖·‖_{W,∞} ≤ radius`.
pub(crate) fn add_wigner_linf_ball(
    prog: &mut ConeProgram,
    ps: &PhaseSpace,
    terms: &[(HermVar, f64)],
    offset: Option<&HermitianOperator>,
    radius: Radius,
) {
    let n = ps.num_points();
    let upper = prog.add_nonneg(n);
    let lower = prog.add_nonneg(n);
    for (u, a) in ps.point_operators().iter().enumerate() {
        let shift = offset.map_or(0.0, |o| a.inner(o));
        let body = |sign: f64| {
            terms
                .iter()
                .fold(LinExpr::new(), |acc, &(x, c)| acc.hermitian(x, a, sign * c))
        };
        let mut hi = body(1.0).scalar(upper, u, 1.0);
        let mut lo = body(-1.0).scalar(lower, u, 1.0);
        let (rhs_hi, rhs_lo) = match radius {
            Radius::Fixed(b) => (b - shift, b + shift),
            Radius::Var(t) => {
                hi = hi.scalar(t, 0, -1.0);
                lo = lo.scalar(t, 0, -1.0);
                (-shift, shift)
            }
        };
        prog.add_eq(hi, rhs_hi);
        prog.add_eq(lo, rhs_lo);
    }
}
