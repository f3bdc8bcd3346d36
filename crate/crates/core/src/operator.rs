//! Dense complex operators.
//!
//! [`HermitianOperator`] carries states, witnesses and feasible points of the
//! cone programs. Non-Hermitian matrices (Weyl operators, Clifford unitaries)
//! are plain [`CMatrix`] values.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Asymmetry above which construction is rejected rather than symmetrized.
pub const HERMITIAN_REJECT_TOL: f64 = 1e-9;

/// Kronecker product of two complex matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `U A U†`.
pub fn conjugate(u: &CMatrix, a: &CMatrix) -> CMatrix {
    u * a * u.adjoint()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Dense complex Hermitian matrix.
#[derive(Clone, PartialEq)]
pub struct HermitianOperator {
    mat: CMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity and symmetrizes away rounding-level asymmetry.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        let adj = mat.adjoint();
        let asymmetry = max_abs_diff(&mat, &adj);
        if !asymmetry.is_finite() || asymmetry > HERMITIAN_REJECT_TOL {
            return Err(Error::NotHermitian { asymmetry });
        }
        Ok(Self::from_hermitian_unchecked((mat + adj) * Complex64::new(0.5, 0.0)))
    }

    pub(crate) fn from_hermitian_unchecked(mat: CMatrix) -> Self {
        Self { mat }
    }

    /// Hermitian part `(M + M†)/2` of an arbitrary square matrix.
    pub fn hermitian_part(mat: &CMatrix) -> Self {
        Self {
            mat: (mat + mat.adjoint()) * Complex64::new(0.5, 0.0),
        }
    }

    pub fn from_real(mat: DMatrix<f64>) -> Result<Self> {
        Self::new(mat.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMatrix::identity(dim, dim),
        }
    }

    /// `|v⟩⟨v|` (no normalization).
    pub fn outer(v: &CVector) -> Self {
        Self {
            mat: v * v.adjoint(),
        }
    }

    /// `|j⟩⟨k| + |k⟩⟨j|` style basis projector `|j⟩⟨j|`.
    pub fn basis_projector(dim: usize, j: usize) -> Self {
        let mut mat = CMatrix::zeros(dim, dim);
        mat[(j, j)] = Complex64::new(1.0, 0.0);
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.diagonal().iter().map(|z| z.re).sum()
    }

    /// `tr[self · other]`, real for Hermitian arguments.
    pub fn inner(&self, other: &Self) -> f64 {
        // tr(AB) = Σ_ij A_ij B_ji = Σ_ij A_ij conj(B_ij)
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            mat: &self.mat * Complex64::new(c, 0.0),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            mat: kron(&self.mat, &other.mat),
        }
    }

    /// `U self U†` for any square `U` of matching size.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::hermitian_part(&conjugate(u, &self.mat))
    }

    /// Eigenvalues in ascending order with matching eigenvector columns.
    pub fn eigh(&self) -> (Vec<f64>, CMatrix) {
        let eig = self.mat.clone().symmetric_eigen();
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            vectors.set_column(col, &eig.eigenvectors.column(i));
        }
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().0
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// Applies `f` to the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        let (values, vectors) = self.eigh();
        from_spectrum(&values.iter().map(|&x| f(x)).collect::<Vec<_>>(), &vectors)
    }

    /// Projector onto eigenvectors whose eigenvalue exceeds
    /// `rel_cutoff · λ_max`.
    pub fn support_projector(&self, rel_cutoff: f64) -> Self {
        let (values, vectors) = self.eigh();
        let top = values.last().copied().unwrap_or(0.0).max(0.0);
        let kept: Vec<f64> = values
            .iter()
            .map(|&x| if top > 0.0 && x > rel_cutoff * top { 1.0 } else { 0.0 })
            .collect();
        from_spectrum(&kept, &vectors)
    }

    /// Largest entrywise asymmetry of the stored matrix (zero after construction).
    pub fn asymmetry(&self) -> f64 {
        max_abs_diff(&self.mat, &self.mat.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs_diff(&self.mat, &other.mat)
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson::from(self)
    }
}

/// `V diag(values) V†`.
pub fn from_spectrum(values: &[f64], vectors: &CMatrix) -> HermitianOperator {
    let n = vectors.nrows();
    let mut mat = CMatrix::zeros(n, n);
    for (k, &lam) in values.iter().enumerate() {
        if lam == 0.0 {
            continue;
        }
        let v = vectors.column(k);
        mat += (v * v.adjoint()) * Complex64::new(lam, 0.0);
    }
    HermitianOperator::hermitian_part(&mat)
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HermitianOperator(dim={}) {:.6}", self.dim(), self.mat)
    }
}

impl Add for &HermitianOperator {
    type Output = HermitianOperator;
    fn add(self, rhs: Self) -> HermitianOperator {
        HermitianOperator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub for &HermitianOperator {
    type Output = HermitianOperator;
    fn sub(self, rhs: Self) -> HermitianOperator {
        HermitianOperator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul<f64> for &HermitianOperator {
    type Output = HermitianOperator;
    fn mul(self, rhs: f64) -> HermitianOperator {
        self.scale(rhs)
    }
}

/// JSON form `{"dim": n, "re": [[...]], "im": [[...]]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OperatorJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl From<&HermitianOperator> for OperatorJson {
    fn from(op: &HermitianOperator) -> Self {
        let n = op.dim();
        let row = |i: usize, part: fn(&Complex64) -> f64| -> Vec<f64> {
            (0..n).map(|j| part(&op.mat[(i, j)])).collect()
        };
        Self {
            dim: n,
            re: (0..n).map(|i| row(i, |z| z.re)).collect(),
            im: (0..n).map(|i| row(i, |z| z.im)).collect(),
        }
    }
}

impl TryFrom<OperatorJson> for HermitianOperator {
    type Error = Error;

    fn try_from(json: OperatorJson) -> Result<Self> {
        let n = json.dim;
        if n == 0 {
            return Err(Error::Parse("field `dim` must be positive".into()));
        }
        for (name, rows) in [("re", &json.re), ("im", &json.im)] {
            if rows.len() != n {
                return Err(Error::Parse(format!(
                    "field `{name}` has {} rows, expected {n}",
                    rows.len()
                )));
            }
            if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                return Err(Error::Parse(format!(
                    "field `{name}` row {i} has {} entries, expected {n}",
                    r.len()
                )));
            }
            if rows.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Parse(format!("field `{name}` has non-finite entries")));
            }
        }
        let mat = CMatrix::from_fn(n, n, |i, j| Complex64::new(json.re[i][j], json.im[i][j]));
        HermitianOperator::new(mat)
    }
}

impl HermitianOperator {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: OperatorJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::try_from(json)
    }
}
