//! Efficiency bounds along the noisy-`H₊` family
//! `ρ_in = (1−p₁−p₂)|H₊⟩⟨H₊| + p₁|H₋⟩⟨H₋| + p₂|H_i⟩⟨H_i|`, target `H₊`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::io::fmt_sig;
use crate::measures::{mana, theta_max};
use crate::operator::HermitianOperator;
use crate::phase_space::PhaseSpace;
use crate::stabilizer::named_state;

use super::ratio_or_inf;

pub const CSV_HEADER: &str = "p1,p2,n_mana,n_thauma_max";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    pub n_mana: f64,
    pub n_thauma_max: f64,
}

/// `p₁ ∈ {0, 0.01, …, 0.90}`.
pub fn default_p1_grid() -> Vec<f64> {
    (0..=90).map(|k| k as f64 / 100.0).collect()
}

pub fn figure1_input(p1: f64, p2: f64) -> Result<HermitianOperator> {
    if !(p1 >= 0.0 && p2 >= 0.0 && p1 + p2 <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "need p1, p2 ≥ 0 and p1 + p2 ≤ 1 (got p1 = {p1}, p2 = {p2})"
        )));
    }
    let h = |name: &str| named_state(name).map(|s| s.density());
    let p0 = (1.0 - p1 - p2).max(0.0);
    Ok(&(&h("Hplus")?.scale(p0) + &h("Hminus")?.scale(p1)) + &h("Hi")?.scale(p2))
}

/// One row per grid point, in grid order; rows are evaluated in parallel.
pub fn figure1_sweep(ps: &PhaseSpace, p2: f64, p1_grid: &[f64]) -> Result<Vec<SweepRow>> {
    if ps.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: ps.dim(),
        });
    }
    let target = named_state("Hplus")?.density();
    let mana_target = mana(ps, &target)?;
    let thauma_target = theta_max(ps, &target)?.value;
    p1_grid
        .par_iter()
        .map(|&p1| {
            let rho = figure1_input(p1, p2)?;
            Ok(SweepRow {
                p1,
                p2,
                n_mana: ratio_or_inf(mana_target, mana(ps, &rho)?),
                n_thauma_max: ratio_or_inf(thauma_target, theta_max(ps, &rho)?.value),
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let cells = [r.p1, r.p2, r.n_mana, r.n_thauma_max].map(fmt_sig);
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = default_p1_grid();
        assert_eq!(g.len(), 91);
        assert_eq!(g[0], 0.0);
        assert!((g[90] - 0.9).abs() < 1e-15);
    }

    #[test]
    fn pure_target_row_is_one() {
        let ps = PhaseSpace::build(&[3]).unwrap();
        let rows = figure1_sweep(&ps, 0.0, &[0.0]).unwrap();
        assert!((rows[0].n_mana - 1.0).abs() < 1e-9);
        assert!((rows[0].n_thauma_max - 1.0).abs() < 1e-6);
    }

    #[test]
    fn csv_layout() {
        let rows = vec![SweepRow {
            p1: 0.01,
            p2: 0.1,
            n_mana: 1.5,
            n_thauma_max: f64::INFINITY,
        }];
        assert_eq!(sweep_csv(&rows), "p1,p2,n_mana,n_thauma_max\n0.0100000000,0.100000000,1.50000000,inf\n");
    }

    #[test]
    fn invalid_mixture_rejected() {
        assert!(figure1_input(0.95, 0.1).is_err());
        assert!(figure1_input(-0.1, 0.1).is_err());
    }
}
