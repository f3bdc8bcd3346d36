//! Relative-entropy thauma `θ(ρ) = min_{σ∈W} D(ρ‖σ)` by away-step Frank–Wolfe.
//!
//! Every iterate is a convex combination of atoms returned by the linear
//! minimization oracle `argmin_{σ∈W} tr[G σ]`, itself a small SDP. The
//! Frank–Wolfe gap `tr[G (σ_k − s_k)]` bounds `f(σ_k) − θ` from above and is
//! the stopping certificate.

use super::constraints::add_wigner_l1_ball;
use super::entropy::{relative_entropy, relative_entropy_gradient};
use super::{check_state, solve_optimal, MeasureResult, SUPPORT_CUTOFF};
use crate::error::Result;
use crate::operator::HermitianOperator;
use crate::phase_space::PhaseSpace;
use crate::sdp::{ConeProgram, LinExpr};

#[derive(Debug, Clone)]
pub struct ThetaOptions {
    /// Target Frank–Wolfe gap in bits.
    pub tol: f64,
    pub max_iter: usize,
    /// Weight of `I/d` mixed into rank-deficient states.
    pub support_floor: f64,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            max_iter: 5000,
            support_floor: 1e-9,
        }
    }
}

pub fn theta(ps: &PhaseSpace, rho: &HermitianOperator, tol: f64) -> Result<MeasureResult> {
    theta_with(
        ps,
        rho,
        &ThetaOptions {
            tol,
            ..ThetaOptions::default()
        },
    )
}

/// `argmin_{σ∈W} tr[G σ]`.
fn linear_oracle(ps: &PhaseSpace, grad: &HermitianOperator) -> Result<HermitianOperator> {
    let scale = grad.matrix().iter().fold(0.0f64, |m, z| m.max(z.norm())).max(f64::MIN_POSITIVE);
    let mut prog = ConeProgram::new("relative-entropy thauma oracle");
    let sigma = prog.add_hermitian_psd(ps.dim());
    add_wigner_l1_ball(&mut prog, ps, &[(sigma, 1.0)], 1.0);
    prog.minimize(LinExpr::new().hermitian(sigma, grad, 1.0 / scale));
    let sol = solve_optimal(&prog)?;
    Ok(sol.hermitian(sigma))
}

/// Minimizes the convex `γ ↦ D(ρ‖σ + γ·dir)` on `[0, γ_max]` by a
/// safeguarded Illinois iteration on its increasing derivative.
fn line_search(rho: &HermitianOperator, sigma: &HermitianOperator, dir: &HermitianOperator, gamma_max: f64) -> f64 {
    let slope = |g: f64| {
        let point = sigma + &dir.scale(g);
        if point.min_eigenvalue() <= 0.0 {
            return f64::INFINITY;
        }
        relative_entropy_gradient(rho, &point).inner(dir)
    };
    let (mut lo, mut hi) = (0.0, gamma_max);
    let mut f_lo = slope(lo);
    if f_lo >= 0.0 {
        return 0.0;
    }
    let mut f_hi = slope(hi);
    if f_hi <= 0.0 {
        return gamma_max;
    }
    let mut side = 0i8;
    for _ in 0..100 {
        if hi - lo <= 1e-13 * gamma_max {
            break;
        }
        let mid = if f_hi.is_finite() {
            let x = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if x > lo && x < hi { x } else { 0.5 * (lo + hi) }
        } else {
            0.5 * (lo + hi)
        };
        let f_mid = slope(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid > 0.0 {
            hi = mid;
            f_hi = f_mid;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = mid;
            f_lo = f_mid;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        }
        if f_lo.abs().min(f_hi.abs()) <= 1e-14 {
            break;
        }
    }
    if f_lo.abs() <= f_hi.abs() { lo } else { hi }
}

/// Upper bound on oracle-free pairwise steps between two oracle calls.
const MAX_LOCAL_STEPS: usize = 200;

struct Atom {
    op: HermitianOperator,
    weight: f64,
}

/// Pairwise steps inside the active set, moving weight from the atom with the
/// largest gradient pairing to the one with the smallest, until that local gap
/// drops below `threshold`. Needs no oracle calls.
fn local_steps(
    target: &HermitianOperator,
    atoms: &mut Vec<Atom>,
    mut sigma: HermitianOperator,
    threshold: f64,
) -> HermitianOperator {
    for _ in 0..MAX_LOCAL_STEPS {
        if atoms.len() < 2 {
            break;
        }
        let grad = relative_entropy_gradient(target, &sigma);
        let scores: Vec<f64> = atoms.iter().map(|a| grad.inner(&a.op)).collect();
        let by_score = |a: &(usize, &f64), b: &(usize, &f64)| a.1.total_cmp(b.1);
        let (worst, &hi) = scores.iter().enumerate().max_by(by_score).expect("non-empty");
        let (best, &lo) = scores.iter().enumerate().min_by(by_score).expect("non-empty");
        if hi - lo <= threshold {
            break;
        }
        let dir = &atoms[best].op - &atoms[worst].op;
        let step = line_search(target, &sigma, &dir, atoms[worst].weight);
        atoms[worst].weight -= step;
        atoms[best].weight += step;
        sigma = &sigma + &dir.scale(step);
        atoms.retain(|a| a.weight > 1e-14);
    }
    sigma
}

pub fn theta_with(ps: &PhaseSpace, rho: &HermitianOperator, opts: &ThetaOptions) -> Result<MeasureResult> {
    check_state(ps, rho)?;
    let d = ps.dim();
    let mut diagnostics = Vec::new();
    let identity = HermitianOperator::identity(d);
    let target = if rho.min_eigenvalue() <= SUPPORT_CUTOFF * rho.eigenvalues()[d - 1] {
        let delta = opts.support_floor;
        diagnostics.push(format!("rank-deficient input mixed with I/d at weight {delta:e}"));
        &rho.scale(1.0 - delta) + &identity.scale(delta / d as f64)
    } else {
        rho.clone()
    };

    // I/d has unit Wigner norm; I/d² lies strictly inside W.
    let start = identity.scale(1.0 / (d * d) as f64);
    let mut atoms = vec![Atom {
        op: start.clone(),
        weight: 1.0,
    }];
    let mut sigma = start;
    let mut iterations = 0;
    let mut gap = f64::INFINITY;

    for _ in 0..opts.max_iter {
        let grad = relative_entropy_gradient(&target, &sigma);
        let fw_atom = linear_oracle(ps, &grad)?;
        iterations += 1;
        gap = grad.inner(&sigma) - grad.inner(&fw_atom);
        if gap <= opts.tol {
            break;
        }
        let dir = &fw_atom - &sigma;
        let step = line_search(&target, &sigma, &dir, 1.0);
        for a in &mut atoms {
            a.weight *= 1.0 - step;
        }
        atoms.push(Atom {
            op: fw_atom,
            weight: step,
        });
        sigma = &sigma + &dir.scale(step);
        sigma = local_steps(&target, &mut atoms, sigma, 0.5 * gap);
    }

    let value = relative_entropy(&target, &sigma);
    if gap > opts.tol {
        diagnostics.push(format!("iteration cap reached with gap {gap:.3e}"));
    }
    Ok(MeasureResult {
        value,
        primal_witness: Some(sigma),
        dual_witness: None,
        gap,
        iterations,
        diagnostics,
    })
}
