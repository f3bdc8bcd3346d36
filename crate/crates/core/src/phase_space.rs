//! Discrete phase space for odd-prime and composite odd qudit dimensions.
//!
//! For a prime `p` the Heisenberg–Weyl operators are
//! `T_(a1,a2) = τ^(-a1·a2) Z^a1 X^a2` with `ω = e^(2πi/p)` and
//! `τ = e^((p+1)πi/p)`. Phase-point operators are `A_u = T_u A_0 T_u†` where
//! `A_0 = (1/p) Σ_u T_u`. Composite spaces tensor the per-factor operators, so
//! `A_(uA ⊕ uB) = A_uA ⊗ A_uB`.
//!
//! Points are ordered lexicographically over the factor-wise `(a1, a2)` tuples,
//! first factor most significant. Every index-based API in the crate uses this
//! order.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{conjugate, kron, CMatrix, HermitianOperator};

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= n {
        if n % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

/// Ordered list of odd prime factors; the Hilbert space is their tensor product.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DimensionSpec {
    factors: Vec<usize>,
}

impl DimensionSpec {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptySpec);
        }
        if let Some(&bad) = factors.iter().find(|&&p| p < 3 || !is_prime(p)) {
            return Err(Error::InvalidFactor { factor: bad });
        }
        Ok(Self { factors })
    }

    /// A single qudit of prime dimension `p`.
    pub fn qudit(p: usize) -> Result<Self> {
        Self::new(vec![p])
    }

    /// `n` qutrits.
    pub fn qutrits(n: usize) -> Self {
        Self {
            factors: vec![3; n.max(1)],
        }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().product()
    }

    pub fn num_points(&self) -> usize {
        self.total_dim() * self.total_dim()
    }

    /// Spec of the tensor product `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Self { factors }
    }
}

/// A phase-space point: one `(a1, a2)` pair per prime factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PhasePoint {
    pub coords: Vec<(usize, usize)>,
}

/// Phase-space operators for a fixed [`DimensionSpec`], precomputed once.
#[derive(Debug, Clone)]
pub struct PhaseSpace {
    spec: DimensionSpec,
    weyl: Vec<CMatrix>,
    points: Vec<HermitianOperator>,
}

/// Per-factor `(T_u, A_u)` lists in lexicographic point order.
fn prime_operators(p: usize) -> (Vec<CMatrix>, Vec<CMatrix>) {
    let phase = |num: i64, den: i64| -> Complex64 {
        // e^(iπ·num/den) with num reduced mod 2·den before the float conversion
        let r = num.rem_euclid(2 * den);
        Complex64::from_polar(1.0, PI * r as f64 / den as f64)
    };
    let pi = p as i64;
    let one = Complex64::new(1.0, 0.0);

    let z_pow = |a: usize| {
        CMatrix::from_fn(p, p, |i, j| {
            if i == j {
                phase(2 * ((a * j) % p) as i64, pi)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    };
    let x_pow = |a: usize| {
        CMatrix::from_fn(p, p, |i, j| if i == (j + a) % p { one } else { Complex64::new(0.0, 0.0) })
    };

    let mut weyl = Vec::with_capacity(p * p);
    for a1 in 0..p {
        for a2 in 0..p {
            let tau_pow = phase(-((pi + 1) * (a1 * a2) as i64), pi);
            weyl.push(z_pow(a1) * x_pow(a2) * tau_pow);
        }
    }
    let mut a0 = CMatrix::zeros(p, p);
    for t in &weyl {
        a0 += t;
    }
    a0 /= Complex64::new(p as f64, 0.0);
    let points = weyl.iter().map(|t| conjugate(t, &a0)).collect();
    (weyl, points)
}

impl PhaseSpace {
    pub fn new(spec: DimensionSpec) -> Self {
        let mut weyl: Vec<CMatrix> = vec![CMatrix::identity(1, 1)];
        let mut points: Vec<CMatrix> = vec![CMatrix::identity(1, 1)];
        for &p in spec.factors() {
            let (w, a) = prime_operators(p);
            weyl = weyl
                .iter()
                .flat_map(|left| w.iter().map(move |right| kron(left, right)))
                .collect();
            points = points
                .iter()
                .flat_map(|left| a.iter().map(move |right| kron(left, right)))
                .collect();
        }
        let points = points.iter().map(HermitianOperator::hermitian_part).collect();
        Self {
            spec,
            weyl,
            points,
        }
    }

    /// Builds the phase space for a list of odd prime factors.
    pub fn build(factors: &[usize]) -> Result<Self> {
        Ok(Self::new(DimensionSpec::new(factors.to_vec())?))
    }

    pub fn spec(&self) -> &DimensionSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.spec.total_dim()
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Phase-point operator `A_u` by lexicographic index.
    pub fn point_operator(&self, index: usize) -> &HermitianOperator {
        &self.points[index]
    }

    pub fn point_operators(&self) -> &[HermitianOperator] {
        &self.points
    }

    /// Heisenberg–Weyl operator `T_u` by lexicographic index (unitary, not Hermitian).
    pub fn weyl_operator(&self, index: usize) -> &CMatrix {
        &self.weyl[index]
    }

    pub fn point(&self, index: usize) -> PhasePoint {
        let mut rem = index;
        let mut coords = Vec::with_capacity(self.spec.factors().len());
        for &p in self.spec.factors().iter().rev() {
            let a2 = rem % p;
            rem /= p;
            let a1 = rem % p;
            rem /= p;
            coords.push((a1, a2));
        }
        coords.reverse();
        PhasePoint { coords }
    }

    pub fn index_of(&self, point: &PhasePoint) -> Result<usize> {
        if point.coords.len() != self.spec.factors().len() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.factors().len(),
                found: point.coords.len(),
            });
        }
        let mut index = 0;
        for (&(a1, a2), &p) in point.coords.iter().zip(self.spec.factors()) {
            if a1 >= p || a2 >= p {
                return Err(Error::InvalidArgument(format!(
                    "coordinate ({a1},{a2}) out of range for factor {p}"
                )));
            }
            index = (index * p + a1) * p + a2;
        }
        Ok(index)
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

    /// `W_V(u) = tr[A_u V] / d` at every point.
    pub fn wigner_rep(&self, v: &HermitianOperator) -> Result<WignerRep> {
        self.check_dim(v.dim())?;
        let d = self.dim() as f64;
        let values = self.points.iter().map(|a| a.inner(v) / d).collect();
        Ok(WignerRep {
            spec: self.spec.clone(),
            values,
        })
    }

    /// `V = Σ_u W(u) A_u`.
    pub fn reconstruct(&self, w: &WignerRep) -> Result<HermitianOperator> {
        if w.spec != self.spec {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: w.spec.total_dim(),
            });
        }
        let d = self.dim();
        let mut mat = CMatrix::zeros(d, d);
        for (a, &x) in self.points.iter().zip(&w.values) {
            if x != 0.0 {
                mat += a.matrix() * Complex64::new(x, 0.0);
            }
        }
        Ok(HermitianOperator::hermitian_part(&mat))
    }

    /// `‖V‖_{W,1} = Σ_u |W_V(u)|`.
    pub fn wigner_trace_norm(&self, v: &HermitianOperator) -> Result<f64> {
        Ok(self.wigner_rep(v)?.l1())
    }

    /// `‖V‖_{W,∞} = d · max_u |W_V(u)|`.
    pub fn wigner_spectral_norm(&self, v: &HermitianOperator) -> Result<f64> {
        Ok(self.dim() as f64 * self.wigner_rep(v)?.max_abs())
    }
}

/// Wigner function values in lexicographic point order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WignerRep {
    pub spec: DimensionSpec,
    pub values: Vec<f64>,
}

impl WignerRep {
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn l1(&self) -> f64 {
        self.values.iter().map(|x| x.abs()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// CSV with header `a1,a2,...,w`; one row per point in lexicographic order.
    pub fn to_csv(&self, ps: &PhaseSpace) -> String {
        let ncoords = 2 * self.spec.factors().len();
        let mut out = String::new();
        for k in 1..=ncoords {
            let _ = write!(out, "a{k},");
        }
        out.push_str("w\n");
        for (i, &w) in self.values.iter().enumerate() {
            for (a1, a2) in ps.point(i).coords {
                let _ = write!(out, "{a1},{a2},");
            }
            let _ = writeln!(out, "{}", crate::io::fmt_sig(w));
        }
        out
    }
}
