//! Clifford generators: Fourier (H), phase (S) and shift (X) per factor, and
//! SUM on adjacent equal-dimension factor pairs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::operator::{kron, CMatrix};
use crate::phase_space::DimensionSpec;

/// A named unitary acting on the full register.
#[derive(Debug, Clone)]
pub struct Gate {
    pub name: String,
    pub matrix: CMatrix,
}

fn omega_pow(p: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % p) as f64 / p as f64)
}

/// Qudit Fourier gate `H_{jk} = ω^{jk} / √p`.
pub fn hadamard(p: usize) -> CMatrix {
    let norm = 1.0 / (p as f64).sqrt();
    CMatrix::from_fn(p, p, |j, k| omega_pow(p, j * k) * norm)
}

/// Phase gate `diag(ω^{j(j−1)/2})`; for qutrits this is `diag(1, 1, ω)`.
pub fn phase(p: usize) -> CMatrix {
    CMatrix::from_fn(p, p, |j, k| {
        if j == k {
            omega_pow(p, j * j.saturating_sub(1) / 2)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Shift `|j⟩ → |j+1⟩`.
pub fn shift(p: usize) -> CMatrix {
    CMatrix::from_fn(p, p, |i, j| {
        if i == (j + 1) % p {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// `|a, b⟩ → |a, a+b⟩` on two qudits of dimension `p`.
pub fn sum_gate(p: usize) -> CMatrix {
    let n = p * p;
    CMatrix::from_fn(n, n, |row, col| {
        let (a, b) = (col / p, col % p);
        if row == a * p + (a + b) % p {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Lifts `gate` acting on factors `first..first+span` to the full register.
fn lift(spec: &DimensionSpec, first: usize, span: usize, gate: &CMatrix) -> CMatrix {
    let f = spec.factors();
    let left: usize = f[..first].iter().product();
    let right: usize = f[first + span..].iter().product();
    kron(
        &kron(&CMatrix::identity(left, left), gate),
        &CMatrix::identity(right, right),
    )
}

pub fn clifford_generators(spec: &DimensionSpec) -> Vec<Gate> {
    let mut out = Vec::new();
    for (k, &p) in spec.factors().iter().enumerate() {
        for (name, m) in [("H", hadamard(p)), ("S", phase(p)), ("X", shift(p))] {
            out.push(Gate {
                name: format!("{name}{k}"),
                matrix: lift(spec, k, 1, &m),
            });
        }
    }
    for (k, w) in spec.factors().windows(2).enumerate() {
        if w[0] == w[1] {
            out.push(Gate {
                name: format!("SUM{k},{}", k + 1),
                matrix: lift(spec, k, 2, &sum_gate(w[0])),
            });
        }
    }
    out
}
