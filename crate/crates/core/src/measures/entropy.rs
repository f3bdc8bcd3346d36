//! Umegaki relative entropy, its variance and the gradient of `σ ↦ D(ρ‖σ)`.

use std::f64::consts::LN_2;

use super::SUPPORT_CUTOFF;
use crate::operator::{CMatrix, HermitianOperator};

/// Largest weight of `ρ` outside `supp σ` still treated as zero.
const LEAKAGE_TOL: f64 = 1e-10;

struct Spectral {
    values: Vec<f64>,
    vectors: CMatrix,
    /// `log₂ λ` on the support, `None` off it.
    logs: Vec<Option<f64>>,
}

fn spectral(h: &HermitianOperator) -> Spectral {
    let (values, vectors) = h.eigh();
    let top = values.last().copied().unwrap_or(0.0).max(0.0);
    let logs = values
        .iter()
        .map(|&x| (top > 0.0 && x > SUPPORT_CUTOFF * top).then(|| x.log2()))
        .collect();
    Spectral { values, vectors, logs }
}

/// Weighted log-ratio samples `(r_i |⟨s_j|r_i⟩|², log₂ r_i − log₂ s_j)` over
/// the supports of `ρ` and `σ`; `None` if `supp ρ ⊄ supp σ`.
fn log_ratio_samples(rho: &HermitianOperator, sigma: &HermitianOperator) -> Option<Vec<(f64, f64)>> {
    assert_eq!(rho.dim(), sigma.dim(), "relative entropy of mismatched operators");
    let r = spectral(rho);
    let s = spectral(sigma);
    let overlaps = s.vectors.adjoint() * &r.vectors;
    let mut samples = Vec::new();
    let mut leakage = 0.0;
    for (i, log_r) in r.logs.iter().enumerate() {
        let Some(log_r) = *log_r else { continue };
        for (j, log_s) in s.logs.iter().enumerate() {
            let w = r.values[i] * overlaps[(j, i)].norm_sqr();
            match log_s {
                Some(log_s) => samples.push((w, log_r - log_s)),
                None => leakage += w,
            }
        }
    }
    (leakage <= LEAKAGE_TOL).then_some(samples)
}

/// `D(ρ‖σ) = tr ρ (log₂ ρ − log₂ σ)`; `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy(rho: &HermitianOperator, sigma: &HermitianOperator) -> f64 {
    match log_ratio_samples(rho, sigma) {
        Some(samples) => samples.iter().map(|(w, x)| w * x).sum(),
        None => f64::INFINITY,
    }
}

/// `V(ρ‖σ) = tr ρ (log₂ ρ − log₂ σ)² − D(ρ‖σ)²`; `+∞` when the support
/// condition fails.
pub fn relative_entropy_variance(rho: &HermitianOperator, sigma: &HermitianOperator) -> f64 {
    let Some(samples) = log_ratio_samples(rho, sigma) else {
        return f64::INFINITY;
    };
    let mean: f64 = samples.iter().map(|(w, x)| w * x).sum();
    let second: f64 = samples.iter().map(|(w, x)| w * x * x).sum();
    (second - mean * mean).max(0.0)
}

/// Gradient of `σ ↦ D(ρ‖σ)` (bits) at a positive definite `σ`:
/// `−(1/ln 2) U (Γ ∘ U†ρU) U†` with `Γ` the divided differences of `ln`.
pub fn relative_entropy_gradient(rho: &HermitianOperator, sigma: &HermitianOperator) -> HermitianOperator {
    let (lam, u) = sigma.eigh();
    let n = lam.len();
    let rot = u.adjoint() * rho.matrix() * &u;
    let gamma = |i: usize, j: usize| {
        let (a, b) = (lam[i], lam[j]);
        if (a - b).abs() <= 1e-12 * a.abs().max(b.abs()) {
            2.0 / (a + b)
        } else {
            (a.ln() - b.ln()) / (a - b)
        }
    };
    let inner = CMatrix::from_fn(n, n, |i, j| rot[(i, j)] * (-gamma(i, j) / LN_2));
    HermitianOperator::hermitian_part(&(&u * inner * u.adjoint()))
}
