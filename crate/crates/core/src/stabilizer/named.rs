//! Registry of named qutrit states.
//!
//! | name      | state                                                        |
//! |-----------|--------------------------------------------------------------|
//! | `Strange` | `(|1⟩ − |2⟩)/√2`                                              |
//! | `Norrell` | `(−|0⟩ + 2|1⟩ − |2⟩)/√6`                                      |
//! | `Hplus`   | `((1+√3)|0⟩ + |1⟩ + |2⟩)/√(2(3+√3))`, the +1 eigenvector of H |
//! | `Hminus`  | −1 eigenvector of H                                          |
//! | `Hi`      | +i eigenvector of H                                          |
//! | `T`       | `(ξ|0⟩ + |1⟩ + ξ⁻¹|2⟩)/√3`, `ξ = e^(2πi/9)`                     |
//! | `phi`     | `(e^(−2πi/9)|0⟩ + e^(8πi/9)|1⟩ + |2⟩)/√3`                      |
//! | `u0..u2`  | `|1⟩`, `(|0⟩ + ω|1⟩ + |2⟩)/√3`, `(|0⟩ + ω²|1⟩ + |2⟩)/√3`        |
//! | `v0, v1`  | `|0⟩`, `(|0⟩ + |1⟩ + |2⟩)/√3`                                  |
//! | `tau_T`   | mixed state with non-negative Wigner function dominating `T` |

use std::f64::consts::PI;

use num_complex::Complex64;

use super::clifford::hadamard;
use crate::error::{Error, Result};
use crate::operator::{CMatrix, CVector, HermitianOperator};
use crate::state::PureState;

pub const NAMES: &[&str] = &[
    "Strange", "Norrell", "Hplus", "Hminus", "Hi", "T", "phi", "u0", "u1", "u2", "v0", "v1",
    "tau_T",
];

#[derive(Debug, Clone)]
pub enum NamedState {
    Pure(PureState),
    Mixed(HermitianOperator),
}

impl NamedState {
    pub fn density(&self) -> HermitianOperator {
        match self {
            NamedState::Pure(p) => p.density(),
            NamedState::Mixed(m) => m.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            NamedState::Pure(p) => Some(p),
            NamedState::Mixed(_) => None,
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Null vector of a rank-two 3×3 matrix: cross product of two independent rows.
fn null_vector_3x3(m: &CMatrix) -> CVector {
    let rows = [m.row(0), m.row(1), m.row(2)];
    let cross = |a: usize, b: usize| {
        let (r, s) = (&rows[a], &rows[b]);
        CVector::from_vec(vec![
            r[1] * s[2] - r[2] * s[1],
            r[2] * s[0] - r[0] * s[2],
            r[0] * s[1] - r[1] * s[0],
        ])
    };
    [cross(0, 1), cross(0, 2), cross(1, 2)]
        .into_iter()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .expect("three candidates")
}

fn hadamard_eigenstate(eigenvalue: Complex64) -> PureState {
    let shifted = hadamard(3) - CMatrix::identity(3, 3) * eigenvalue;
    PureState::new(null_vector_3x3(&shifted)).expect("H eigenvalues are simple")
}

/// Mixed state with non-negative Wigner function used to bound the T-state
/// max-thauma: unit diagonal/3, off-diagonals `r1 = e^(iπ/9)/(6 cos 2π/9)` and
/// `r2 = e^(5iπ/9)/(6 cos 2π/9)`.
pub fn tau_t() -> HermitianOperator {
    let k = 1.0 / (6.0 * (2.0 * PI / 9.0).cos());
    let r1 = cis(PI / 9.0) * k;
    let r2 = cis(5.0 * PI / 9.0) * k;
    let third = c(1.0 / 3.0, 0.0);
    let m = CMatrix::from_row_slice(
        3,
        3,
        &[third, r1, r2, r1.conj(), third, r1, r2.conj(), r1.conj(), third],
    );
    HermitianOperator::new(m).expect("tau_T is Hermitian by construction")
}

pub fn named_state(name: &str) -> Result<NamedState> {
    let s3 = 1.0 / 3f64.sqrt();
    let omega = cis(2.0 * PI / 3.0);
    let pure = |v: Vec<Complex64>| -> Result<NamedState> { Ok(NamedState::Pure(PureState::from_slice(&v)?)) };
    match name {
        "Strange" => pure(vec![c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)]),
        "Norrell" => pure(vec![c(-1.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0)]),
        "Hplus" => {
            let r3 = 3f64.sqrt();
            pure(vec![c(1.0 + r3, 0.0), c(1.0, 0.0), c(1.0, 0.0)])
        }
        "Hminus" => Ok(NamedState::Pure(hadamard_eigenstate(c(-1.0, 0.0)))),
        "Hi" => Ok(NamedState::Pure(hadamard_eigenstate(c(0.0, 1.0)))),
        "T" => {
            let xi = cis(2.0 * PI / 9.0);
            pure(vec![xi * s3, c(s3, 0.0), xi.conj() * s3])
        }
        "phi" => pure(vec![cis(-2.0 * PI / 9.0), cis(8.0 * PI / 9.0), c(1.0, 0.0)]),
        "u0" => Ok(NamedState::Pure(PureState::basis(3, 1))),
        "u1" => pure(vec![c(1.0, 0.0), omega, c(1.0, 0.0)]),
        "u2" => pure(vec![c(1.0, 0.0), omega * omega, c(1.0, 0.0)]),
        "v0" => Ok(NamedState::Pure(PureState::basis(3, 0))),
        "v1" => pure(vec![c(1.0, 0.0); 3]),
        "tau_T" => Ok(NamedState::Mixed(tau_t())),
        other => Err(Error::UnknownState(other.to_string())),
    }
}
