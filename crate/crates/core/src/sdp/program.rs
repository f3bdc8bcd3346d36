//! Standard-form cone programs.
//!
//! ```text
//! minimize    ⟨c, x⟩ + offset
//! subject to  ⟨a_i, x⟩ = b_i        i = 1..m
//!             x ∈ K = PSD(n₁) × … × R₊^k × … × R^f
//! ```
//!
//! Complex Hermitian variables are stored as real symmetric PSD blocks through
//! [`embed`](super::embed::embed); [`LinExpr::hermitian`] takes care of the
//! factor of two in the pairing.

use std::fmt;

use nalgebra::DMatrix;

use super::embed::{embed, hermitian_basis};
use crate::operator::HermitianOperator;

/// Cone of a variable block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// Real symmetric PSD matrix of the given order.
    Psd(usize),
    Nonneg(usize),
    Free(usize),
}

impl BlockKind {
    pub fn len(&self) -> usize {
        match *self {
            BlockKind::Psd(n) => n * n,
            BlockKind::Nonneg(n) | BlockKind::Free(n) => n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Handle to a real symmetric PSD block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PsdVar {
    pub(crate) block: usize,
    pub(crate) order: usize,
}

/// Handle to a complex Hermitian PSD variable (embedded as a real block of
/// twice the order).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HermVar {
    pub(crate) block: usize,
    pub(crate) dim: usize,
}

impl HermVar {
    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Handle to a block of scalar variables (nonnegative or free).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarVar {
    pub(crate) block: usize,
    pub(crate) len: usize,
}

impl ScalarVar {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

/// Linear functional over the program's blocks.
#[derive(Debug, Clone, Default)]
pub struct LinExpr {
    pub(crate) matrix_terms: Vec<(usize, DMatrix<f64>)>,
    pub(crate) scalar_terms: Vec<(usize, usize, f64)>,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    /// `+ coef · ⟨c, X⟩` for a real symmetric block.
    pub fn psd(mut self, var: PsdVar, c: &DMatrix<f64>, coef: f64) -> Self {
        assert_eq!(c.nrows(), var.order, "coefficient order mismatch");
        self.matrix_terms.push((var.block, c * coef));
        self
    }

    /// `+ coef · tr[C X]` for a Hermitian variable.
    pub fn hermitian(mut self, var: HermVar, c: &HermitianOperator, coef: f64) -> Self {
        assert_eq!(c.dim(), var.dim, "coefficient dimension mismatch");
        self.matrix_terms.push((var.block, embed(c) * (0.5 * coef)));
        self
    }

    /// `+ coef · tr[X]` for a Hermitian variable.
    pub fn hermitian_trace(self, var: HermVar, coef: f64) -> Self {
        let id = HermitianOperator::identity(var.dim);
        self.hermitian(var, &id, coef)
    }

    /// `+ coef · x[index]`.
    pub fn scalar(mut self, var: ScalarVar, index: usize, coef: f64) -> Self {
        assert!(index < var.len, "scalar index out of range");
        self.scalar_terms.push((var.block, index, coef));
        self
    }

    /// `+ coef · Σ_k x[k]`.
    pub fn sum(mut self, var: ScalarVar, coef: f64) -> Self {
        for k in 0..var.len {
            self.scalar_terms.push((var.block, k, coef));
        }
        self
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Constraint {
    pub(crate) expr: LinExpr,
    pub(crate) rhs: f64,
}

/// A cone program under construction or ready to solve.
#[derive(Debug, Clone)]
pub struct ConeProgram {
    pub description: String,
    pub(crate) blocks: Vec<BlockKind>,
    pub(crate) objective: LinExpr,
    pub(crate) offset: f64,
    pub(crate) constraints: Vec<Constraint>,
}

impl ConeProgram {
    pub fn new(description: impl Into<String>) -> Self {
        Self {
            description: description.into(),
            blocks: Vec::new(),
            objective: LinExpr::new(),
            offset: 0.0,
            constraints: Vec::new(),
        }
    }

    pub fn blocks(&self) -> &[BlockKind] {
        &self.blocks
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn add_psd(&mut self, order: usize) -> PsdVar {
        self.blocks.push(BlockKind::Psd(order));
        PsdVar {
            block: self.blocks.len() - 1,
            order,
        }
    }

    pub fn add_hermitian_psd(&mut self, dim: usize) -> HermVar {
        self.blocks.push(BlockKind::Psd(2 * dim));
        HermVar {
            block: self.blocks.len() - 1,
            dim,
        }
    }

    pub fn add_nonneg(&mut self, len: usize) -> ScalarVar {
        self.blocks.push(BlockKind::Nonneg(len));
        ScalarVar {
            block: self.blocks.len() - 1,
            len,
        }
    }

    pub fn add_free(&mut self, len: usize) -> ScalarVar {
        self.blocks.push(BlockKind::Free(len));
        ScalarVar {
            block: self.blocks.len() - 1,
            len,
        }
    }

    /// Sets the objective to minimize (replacing any previous one).
    pub fn minimize(&mut self, expr: LinExpr) {
        self.objective = expr;
    }

    /// Constant added to the reported primal and dual values.
    pub fn set_offset(&mut self, offset: f64) {
        self.offset = offset;
    }

    /// `expr = rhs`.
    pub fn add_eq(&mut self, expr: LinExpr, rhs: f64) {
        assert!(rhs.is_finite(), "non-finite right-hand side");
        self.constraints.push(Constraint { expr, rhs });
    }

    /// `Σ_k coef_k · X_k = rhs` as an equality of Hermitian operators, imposed
    /// component-wise over an orthonormal Hermitian basis.
    pub fn add_hermitian_eq(&mut self, terms: &[(HermVar, f64)], rhs: &HermitianOperator) {
        for e in hermitian_basis(rhs.dim()) {
            let expr = terms
                .iter()
                .fold(LinExpr::new(), |acc, &(var, coef)| acc.hermitian(var, &e, coef));
            self.add_eq(expr, e.inner(rhs));
        }
    }
}

impl fmt::Display for ConeProgram {
    /// Human-readable dump for debugging; not a stable interchange format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "program: {}", self.description)?;
        writeln!(f, "blocks:")?;
        for (i, b) in self.blocks.iter().enumerate() {
            writeln!(f, "  [{i}] {b:?}")?;
        }
        let write_expr = |f: &mut fmt::Formatter<'_>, e: &LinExpr| -> fmt::Result {
            for (b, m) in &e.matrix_terms {
                let nnz = m.iter().filter(|x| **x != 0.0).count();
                write!(f, " + <C{b}[nnz={nnz}], X{b}>")?;
            }
            for (b, k, c) in &e.scalar_terms {
                write!(f, " + {c:+.6e}·x{b}[{k}]")?;
            }
            Ok(())
        };
        write!(f, "minimize:")?;
        write_expr(f, &self.objective)?;
        writeln!(f, " + {:.6e}", self.offset)?;
        writeln!(f, "subject to ({} equalities):", self.constraints.len())?;
        for (i, c) in self.constraints.iter().enumerate() {
            write!(f, "  ({i})")?;
            write_expr(f, &c.expr)?;
            writeln!(f, " = {:.6e}", c.rhs)?;
        }
        Ok(())
    }
}
