//! Complex sparse linear algebra: CSR storage, sparse LU, ILU(0),
//! BiCGStab and condition estimation.

mod bicgstab;
mod condest;
mod dense;
mod ilu;
mod lu;
mod ordering;
mod sparse;

pub use bicgstab::{bicgstab, BicgstabOutcome};
pub use condest::{
    condest, condest_inf, condest_inf_operator, condest_operator, condition_number, condition_number_inf,
    norm_estimate, norm_inf_estimate, onenormest, CondestOptions,
};
pub use dense::{dense_cond_exact, dense_inverse, dense_solve, DENSE_ORACLE_MAX};
pub use ilu::{ilu0, Ilu0Preconditioner};
pub use lu::{default_pivot_tol, lu_factor, lu_factor_with, LuFactorization, LuOptions};
pub use ordering::{reverse_cuthill_mckee, ColumnOrdering};
pub use sparse::{norm2, relative_residual, CsrMatrix};

pub use num_complex::Complex64 as C64;

use thiserror::Error;

/// Matrix norm used for condition numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Norm {
    #[default]
    One,
    Inf,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("entry ({row}, {col}) outside a {nrows}x{ncols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        nrows: usize,
        ncols: usize,
    },
    #[error("invalid CSR structure: {0}")]
    InvalidStructure(String),
    #[error("matrix must be square, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("singular matrix: pivot {pivot:e} in column {column} is below tolerance {tolerance:e}")]
    SingularMatrix {
        column: usize,
        pivot: f64,
        tolerance: f64,
    },
    #[error("zero diagonal entry in row {row}")]
    ZeroDiagonal { row: usize },
    #[error("zero pivot in row {row} during incomplete factorization")]
    ZeroPivot { row: usize },
    #[error("no convergence after {iterations} iterations (relative residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<C64>,
    },
    #[error("dense oracle limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
}

/// A square linear map that can also be applied transposed.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Vec<C64>;
    /// `Bᵀ x` (plain transpose, not conjugated).
    fn apply_transpose(&self, x: &[C64]) -> Vec<C64>;
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        self.nrows()
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.mul_vec(x)
    }

    fn apply_transpose(&self, x: &[C64]) -> Vec<C64> {
        self.mul_vec_transpose(x)
    }
}

/// Approximate inverse application `z ≈ M⁻¹ r`.
pub trait Preconditioner {
    fn precondition(&self, r: &[C64]) -> Vec<C64>;
}

impl Preconditioner for LuFactorization {
    fn precondition(&self, r: &[C64]) -> Vec<C64> {
        self.solve(r)
    }
}

impl Preconditioner for Ilu0Preconditioner {
    fn precondition(&self, r: &[C64]) -> Vec<C64> {
        self.solve(r)
    }
}
