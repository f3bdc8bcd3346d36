//! Pure stabilizer states, the stabilizer polytope and the Wigner-positive
//! sets `W₊ ⊂ W`.

pub mod clifford;
pub mod named;

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::operator::HermitianOperator;
use crate::phase_space::{DimensionSpec, PhaseSpace};
use crate::sdp::{hermitian_basis, solve, ConeProgram, LinExpr, Status};
use crate::state::{validate_state, PureState, PSD_TOL};

pub use clifford::{clifford_generators, Gate};
pub use named::{named_state, NamedState};

/// Largest total dimension for which the orbit is enumerated.
pub const MAX_ENUMERATION_DIM: usize = 9;
/// Tolerance for Wigner non-negativity and the unit ball of `‖·‖_{W,1}`.
pub const WIGNER_TOL: f64 = 1e-9;
/// Default tolerance for stabilizer-hull membership.
pub const HULL_TOL: f64 = 1e-7;

const DEDUP_SCALE: f64 = 1e8;

/// The pure stabilizer states of a register, in discovery order.
#[derive(Debug, Clone)]
pub struct StabilizerSet {
    spec: DimensionSpec,
    states: Vec<PureState>,
}

fn dedup_key(s: &PureState) -> Vec<(i64, i64)> {
    s.amplitudes()
        .iter()
        .map(|z| {
            (
                (z.re * DEDUP_SCALE).round() as i64,
                (z.im * DEDUP_SCALE).round() as i64,
            )
        })
        .collect()
}

/// Breadth-first orbit of `|0…0⟩` under the Clifford generators.
pub fn enumerate_pure_stabilizer_states(spec: &DimensionSpec) -> Result<StabilizerSet> {
    let dim = spec.total_dim();
    if dim > MAX_ENUMERATION_DIM {
        return Err(Error::UnsupportedDimension {
            dim,
            reason: format!("stabilizer enumeration is limited to total dimension ≤ {MAX_ENUMERATION_DIM}"),
        });
    }
    let gens = clifford_generators(spec);
    let start = PureState::basis(dim, 0);
    let mut seen = HashSet::from([dedup_key(&start)]);
    let mut states = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for g in &gens {
            let next = s.apply(&g.matrix)?;
            if seen.insert(dedup_key(&next)) {
                states.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(StabilizerSet {
        spec: spec.clone(),
        states,
    })
}

/// Outcome of the stabilizer-hull linear program.
#[derive(Debug, Clone)]
pub enum HullMembership {
    /// Convex weights over [`StabilizerSet::states`] reproducing `ρ`.
    Member { weights: Vec<f64> },
    /// `witness` satisfies `tr[Z s] ≥ 0` for every stabilizer state and
    /// `tr Z = 1`, while `tr[Z ρ] = −violation < 0`.
    NonMember {
        witness: HermitianOperator,
        violation: f64,
    },
}

impl HullMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, HullMembership::Member { .. })
    }
}

impl StabilizerSet {
    pub fn spec(&self) -> &DimensionSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.total_dim()
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Index of the state equal to `psi` up to global phase, if any.
    pub fn position(&self, psi: &PureState) -> Option<usize> {
        let key = dedup_key(&PureState::new(psi.amplitudes().clone()).ok()?);
        self.states.iter().position(|s| dedup_key(s) == key)
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            });
        }
        Ok(())
    }

    /// `max_s |⟨s|ψ⟩|²`.
    pub fn stabilizer_fidelity(&self, psi: &PureState) -> Result<f64> {
        self.check_dim(psi.dim())?;
        Ok(self
            .states
            .iter()
            .map(|s| s.overlap(psi))
            .fold(0.0, f64::max))
    }

    /// Decides `ρ ∈ conv{S_j}` by solving
    /// `max λ s.t. Σ_j p_j S_j + λ I = ρ, p ≥ 0`; membership holds iff `λ* ≥ −tol`.
    pub fn in_stab_hull(&self, rho: &HermitianOperator, tol: f64) -> Result<HullMembership> {
        self.check_dim(rho.dim())?;
        validate_state(rho)?;
        let d = self.dim();
        let n = self.len();
        let projectors: Vec<HermitianOperator> = self.states.iter().map(PureState::density).collect();

        let mut prog = ConeProgram::new("stabilizer hull");
        let p = prog.add_nonneg(n);
        let lam = prog.add_free(1);
        prog.minimize(LinExpr::new().scalar(lam, 0, -1.0));
        let basis = hermitian_basis(d);
        for e in &basis {
            let expr = projectors
                .iter()
                .enumerate()
                .fold(LinExpr::new(), |acc, (j, s)| acc.scalar(p, j, e.inner(s)))
                .scalar(lam, 0, e.trace());
            prog.add_eq(expr, e.inner(rho));
        }
        let sol = solve(&prog);
        if sol.status != Status::Optimal {
            return Err(Error::Solver {
                program: prog.description,
                status: sol.status.to_string(),
            });
        }
        let lambda = sol.scalar(lam, 0);
        if lambda >= -tol {
            // Σ_j S_j = (N/d) I for a complete orbit, so λI spreads evenly.
            let spread = lambda * d as f64 / n as f64;
            let mut weights: Vec<f64> = sol.scalars(p).iter().map(|&x| (x + spread).max(0.0)).collect();
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            Ok(HullMembership::Member { weights })
        } else {
            let y = sol.multipliers();
            let witness = basis
                .iter()
                .zip(y)
                .fold(HermitianOperator::zeros(d), |acc, (e, &yk)| &acc - &e.scale(yk));
            Ok(HullMembership::NonMember {
                witness,
                violation: -lambda,
            })
        }
    }

    /// Amplitude vectors as a JSON array of `[[re, im], …]` lists.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.states
                .iter()
                .map(|s| serde_json::to_value(s.to_pairs()).expect("finite amplitudes"))
                .collect(),
        )
    }
}

/// `ρ` is a state with non-negative Wigner function.
pub fn in_w_plus(ps: &PhaseSpace, rho: &HermitianOperator) -> Result<bool> {
    let w = ps.wigner_rep(rho)?;
    Ok(validate_state(rho).is_ok() && w.min() >= -WIGNER_TOL)
}

/// `σ ⪰ 0` with `‖σ‖_{W,1} ≤ 1`.
pub fn in_w(ps: &PhaseSpace, sigma: &HermitianOperator) -> Result<bool> {
    let norm = ps.wigner_trace_norm(sigma)?;
    Ok(sigma.min_eigenvalue() >= -PSD_TOL && norm <= 1.0 + WIGNER_TOL)
}
