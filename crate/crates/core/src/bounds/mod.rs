//! Distillation, efficiency and interconversion bounds built on the measures.

pub mod normal;
pub mod sweep;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{
    mana, min_dh_over_w, relative_entropy_variance, theta_max, theta_min, theta_with, ThetaOptions,
};
use crate::operator::HermitianOperator;
use crate::phase_space::PhaseSpace;

pub use normal::inverse_normal_cdf;
pub use sweep::{figure1_input, figure1_sweep, sweep_csv, default_p1_grid, SweepRow};

/// Monotone values at or below this count as zero when used as a divisor.
pub const FREE_TOL: f64 = 1e-7;
/// `θ_min` and `θ_max` closer than this count as a collapsed bracket.
pub const BRACKET_TOL: f64 = 1e-6;

/// Distillation target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TargetState {
    Hplus,
    T,
}

impl TargetState {
    /// `θ_min = θ_max` of the target: `log₂(3−√3)` or `log₂(1+2 sin(π/18))`.
    pub fn denominator(self) -> f64 {
        match self {
            TargetState::Hplus => (3.0 - 3f64.sqrt()).log2(),
            TargetState::T => (1.0 + 2.0 * (PI / 18.0).sin()).log2(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TargetState::Hplus => "Hplus",
            TargetState::T => "T",
        }
    }
}

impl fmt::Display for TargetState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TargetState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Hplus" | "H+" | "hplus" => Ok(TargetState::Hplus),
            "T" | "t" => Ok(TargetState::T),
            other => Err(Error::InvalidArgument(format!("unknown target `{other}` (expected Hplus or T)"))),
        }
    }
}

fn ratio_or_inf(num: f64, den: f64) -> f64 {
    if den <= FREE_TOL {
        f64::INFINITY
    } else {
        num / den
    }
}

/// `min_{σ∈W} D_H^ε(ρ‖σ) / denominator`, an upper bound on one-shot
/// distillable magic.
pub fn one_shot_bound(ps: &PhaseSpace, rho: &HermitianOperator, eps: f64, target: TargetState) -> Result<f64> {
    Ok(min_dh_over_w(ps, rho, eps)?.value / target.denominator())
}

/// `θ(ρ) / denominator`, an upper bound on the asymptotic distillation rate.
pub fn asymptotic_bound(ps: &PhaseSpace, rho: &HermitianOperator, target: TargetState, tol: f64) -> Result<f64> {
    let opts = ThetaOptions {
        tol,
        ..ThetaOptions::default()
    };
    Ok(theta_with(ps, rho, &opts)?.value / target.denominator())
}

/// Second-order expansion of the `n`-copy bound with its `O(log n)` term
/// dropped.
#[derive(Debug, Clone, Serialize)]
pub struct SecondOrderBound {
    pub value: f64,
    pub theta: f64,
    /// `V(ρ‖σ)` at the Frank–Wolfe minimizer `σ`.
    pub variance: f64,
    pub quantile: f64,
    pub note: &'static str,
}

/// `(n θ(ρ) + √(n V(ρ‖σ)) Φ⁻¹(ε)) / denominator` with `σ` the minimizer
/// returned by Frank–Wolfe.
pub fn second_order_bound(
    ps: &PhaseSpace,
    rho: &HermitianOperator,
    n: u64,
    eps: f64,
    target: TargetState,
    tol: f64,
) -> Result<SecondOrderBound> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!("ε = {eps} must lie in (0, 1)")));
    }
    let opts = ThetaOptions {
        tol,
        ..ThetaOptions::default()
    };
    let fw = theta_with(ps, rho, &opts)?;
    let sigma = fw.primal_witness.expect("Frank–Wolfe returns its iterate");
    let variance = relative_entropy_variance(rho, &sigma);
    let quantile = inverse_normal_cdf(eps);
    let n = n as f64;
    let spread = if quantile == 0.0 { 0.0 } else { (n * variance).sqrt() * quantile };
    Ok(SecondOrderBound {
        value: (n * fw.value + spread) / target.denominator(),
        theta: fw.value,
        variance,
        quantile,
        note: "asymptotic, up to O(log n)",
    })
}

/// `𝓜(ξ) / 𝓜(ρ)`; `+∞` when `ρ` has no mana.
pub fn efficiency_bound_mana(ps: &PhaseSpace, rho: &HermitianOperator, xi: &HermitianOperator) -> Result<f64> {
    let m_xi = mana(ps, xi)?;
    let m_rho = mana(ps, rho)?;
    Ok(ratio_or_inf(m_xi, m_rho))
}

/// `θ_max(ξ) / θ_max(ρ)`; `+∞` when `θ_max(ρ)` vanishes.
pub fn efficiency_bound_thauma(ps: &PhaseSpace, rho: &HermitianOperator, xi: &HermitianOperator) -> Result<f64> {
    let t_xi = theta_max(ps, xi)?.value;
    let t_rho = theta_max(ps, rho)?.value;
    Ok(ratio_or_inf(t_xi, t_rho))
}

/// Reciprocal of [`one_shot_bound`]; `+∞` when that bound vanishes.
pub fn overhead_bound(ps: &PhaseSpace, rho: &HermitianOperator, eps: f64, target: TargetState) -> Result<f64> {
    let rate = one_shot_bound(ps, rho, eps, target)?;
    Ok(ratio_or_inf(1.0, rate))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// Both `[θ_min, θ_max]` brackets collapse, so the ratio is the regularized one.
    Exact,
    Interval,
}

#[derive(Debug, Clone, Serialize)]
pub struct InterconversionBound {
    /// `θ_max(ρ) / θ_min(ξ)`.
    pub upper: f64,
    pub kind: BoundKind,
    pub strictly_below_one: bool,
    pub bracket_rho: [f64; 2],
    pub bracket_xi: [f64; 2],
}

/// Upper bound on the asymptotic conversion rate `ρ → ξ`.
pub fn interconversion_bound(ps: &PhaseSpace, rho: &HermitianOperator, xi: &HermitianOperator) -> Result<InterconversionBound> {
    let bracket = |s: &HermitianOperator| -> Result<[f64; 2]> {
        Ok([theta_min(ps, s)?.value, theta_max(ps, s)?.value])
    };
    let br = bracket(rho)?;
    let bx = bracket(xi)?;
    let collapsed = |b: [f64; 2]| (b[1] - b[0]).abs() <= BRACKET_TOL;
    let upper = ratio_or_inf(br[1], bx[0]);
    Ok(InterconversionBound {
        upper,
        kind: if collapsed(br) && collapsed(bx) {
            BoundKind::Exact
        } else {
            BoundKind::Interval
        },
        strictly_below_one: upper < 1.0,
        bracket_rho: br,
        bracket_xi: bx,
    })
}
