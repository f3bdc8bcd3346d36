//! Pure states and state validation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{CMatrix, CVector, HermitianOperator};

/// Amplitudes below this modulus are ignored when fixing the global phase.
const PHASE_ANCHOR_TOL: f64 = 1e-8;

/// Unit vector with canonical global phase (first non-negligible amplitude
/// real and positive).
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
}

impl PureState {
    /// Normalizes and fixes the global phase.
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotAState {
                reason: "zero or non-finite amplitude vector".into(),
            });
        }
        let mut v = amplitudes / Complex64::new(norm, 0.0);
        if let Some(anchor) = v.iter().find(|z| z.norm() > PHASE_ANCHOR_TOL).copied() {
            let phase = anchor.conj() / anchor.norm();
            v *= phase;
        }
        Ok(Self { amplitudes: v })
    }

    pub fn from_slice(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amplitudes))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(CVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|&x| Complex64::new(x, 0.0)),
        ))
    }

    /// Computational basis state `|j⟩`.
    pub fn basis(dim: usize, j: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[j] = Complex64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> HermitianOperator {
        HermitianOperator::outer(&self.amplitudes)
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm_sqr()
    }

    pub fn apply(&self, u: &CMatrix) -> Result<Self> {
        Self::new(u * &self.amplitudes)
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    /// Amplitudes as `[[re, im], ...]` for JSON export.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.amplitudes.iter().map(|z| [z.re, z.im]).collect()
    }
}

/// Serialized pure state: list of `[re, im]` amplitude pairs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudesJson(pub Vec<[f64; 2]>);

/// Trace within this distance of one counts as unit trace.
pub const TRACE_TOL: f64 = 1e-9;
/// Smallest eigenvalue tolerated for a PSD check.
pub const PSD_TOL: f64 = 1e-9;

/// Checks that `rho` is a unit-trace PSD operator.
pub fn validate_state(rho: &HermitianOperator) -> Result<()> {
    let tr = rho.trace();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::NotAState {
            reason: format!("trace {tr:.12} differs from 1"),
        });
    }
    let min = rho.min_eigenvalue();
    if min < -PSD_TOL {
        return Err(Error::NotAState {
            reason: format!("minimum eigenvalue {min:.3e} is negative"),
        });
    }
    Ok(())
}
