use super::{Domain, ScalingVariant, StabilizeError};
use crate::blocks::TwoBlockSystem;
use crate::numkit::{
    default_pivot_tol, ilu0, lu_factor, CsrMatrix, Ilu0Preconditioner, LinearOperator,
    LuFactorization, Preconditioner, SolverError, C64,
};

/// How the diagonal blocks of the block preconditioner are inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockSolver {
    #[default]
    Ilu,
    Lu,
}

#[derive(Debug, Clone)]
enum BlockInverse {
    Empty,
    Lu {
        matrix: CsrMatrix,
        lu: LuFactorization,
    },
    Ilu(Ilu0Preconditioner),
}

impl BlockInverse {
    fn new(matrix: CsrMatrix, kind: BlockSolver, block: &'static str) -> Result<Self, StabilizeError> {
        if matrix.nrows() == 0 {
            return Ok(Self::Empty);
        }
        let tol = default_pivot_tol(&matrix);
        let singular = |source| StabilizeError::SingularBlock { block, source };
        match kind {
            BlockSolver::Lu => {
                let lu = lu_factor(&matrix, tol).map_err(singular)?;
                Ok(Self::Lu { matrix, lu })
            }
            BlockSolver::Ilu => {
                let f = ilu0(&matrix).map_err(singular)?;
                let (column, pivot) = f
                    .u_factor()
                    .diagonal()
                    .iter()
                    .map(|d| d.norm())
                    .enumerate()
                    .fold((0, f64::INFINITY), |acc, (i, p)| if p < acc.1 { (i, p) } else { acc });
                if pivot < tol {
                    return Err(singular(SolverError::SingularMatrix {
                        column,
                        pivot,
                        tolerance: tol,
                    }));
                }
                Ok(Self::Ilu(f))
            }
        }
    }

    fn solve(&self, r: &[C64]) -> Vec<C64> {
        match self {
            Self::Empty => Vec::new(),
            Self::Lu { lu, .. } => lu.solve(r),
            Self::Ilu(f) => f.solve(r),
        }
    }

    fn solve_transpose(&self, r: &[C64]) -> Vec<C64> {
        match self {
            Self::Empty => Vec::new(),
            Self::Lu { lu, .. } => lu.solve_transpose(r),
            Self::Ilu(f) => f.solve_transpose(r),
        }
    }

    fn multiply(&self, x: &[C64]) -> Vec<C64> {
        match self {
            Self::Empty => Vec::new(),
            Self::Lu { matrix, .. } => matrix.mul_vec(x),
            Self::Ilu(f) => f.multiply(x),
        }
    }

    fn multiply_transpose(&self, x: &[C64]) -> Vec<C64> {
        match self {
            Self::Empty => Vec::new(),
            Self::Lu { matrix, .. } => matrix.mul_vec_transpose(x),
            Self::Ilu(f) => f.multiply_transpose(x),
        }
    }
}

/// Left preconditioner `Q⁻¹` with `Q = blockdiag(K11 + s̃·M11, λ·M22)` for the
/// `NonSymII` matrix, whose second block row is `λ·[M12ᵀ, M22]`.
#[derive(Debug, Clone)]
pub struct BlockPreconditioner {
    n1: usize,
    upper: BlockInverse,
    lower: BlockInverse,
    /// Shift `s̃` used in the conductor block.
    pub shift: C64,
    pub solver: BlockSolver,
}

pub fn build_block_preconditioner(
    sys: &TwoBlockSystem,
    variant: ScalingVariant,
    domain: Domain,
    solver: BlockSolver,
) -> Result<BlockPreconditioner, StabilizeError> {
    let (u, lam) = domain.parts()?;
    let shift = match variant {
        ScalingVariant::BlockFreqDepV => lam * u,
        ScalingVariant::BlockFixedVI { omega0 } => {
            variant.validate()?;
            lam * omega0
        }
        other => {
            return Err(StabilizeError::InvalidParameter(format!(
                "variant {} has no block preconditioner",
                other.name()
            )))
        }
    };
    let upper = CsrMatrix::lincomb(C64::new(1.0, 0.0), &sys.k11, shift, &sys.m11);
    Ok(BlockPreconditioner {
        n1: sys.n1(),
        upper: BlockInverse::new(upper, solver, "conductor")?,
        lower: BlockInverse::new(sys.m22.scaled(lam), solver, "insulator")?,
        shift,
        solver,
    })
}

impl BlockPreconditioner {
    fn split<'a>(&self, x: &'a [C64]) -> (&'a [C64], &'a [C64]) {
        x.split_at(self.n1)
    }

    fn join(mut a: Vec<C64>, b: Vec<C64>) -> Vec<C64> {
        a.extend(b);
        a
    }

    /// `Q⁻¹ r`.
    pub fn apply_inverse(&self, r: &[C64]) -> Vec<C64> {
        let (a, b) = self.split(r);
        Self::join(self.upper.solve(a), self.lower.solve(b))
    }

    /// `Q⁻ᵀ r`.
    pub fn apply_inverse_transpose(&self, r: &[C64]) -> Vec<C64> {
        let (a, b) = self.split(r);
        Self::join(self.upper.solve_transpose(a), self.lower.solve_transpose(b))
    }

    /// `Q x` for the approximation actually inverted.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let (a, b) = self.split(x);
        Self::join(self.upper.multiply(a), self.lower.multiply(b))
    }

    pub fn apply_transpose(&self, x: &[C64]) -> Vec<C64> {
        let (a, b) = self.split(x);
        Self::join(self.upper.multiply_transpose(a), self.lower.multiply_transpose(b))
    }
}

impl Preconditioner for BlockPreconditioner {
    fn precondition(&self, r: &[C64]) -> Vec<C64> {
        self.apply_inverse(r)
    }
}

/// `Q⁻¹A`.
pub(crate) struct PreconditionedOperator<'a> {
    pub a: &'a CsrMatrix,
    pub q: &'a BlockPreconditioner,
}

impl LinearOperator for PreconditionedOperator<'_> {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.q.apply_inverse(&self.a.mul_vec(x))
    }

    fn apply_transpose(&self, x: &[C64]) -> Vec<C64> {
        self.a.mul_vec_transpose(&self.q.apply_inverse_transpose(x))
    }
}

/// `A⁻¹Q` through a factorization of `A`.
pub(crate) struct PreconditionedInverse<'a> {
    pub lu: &'a LuFactorization,
    pub q: &'a BlockPreconditioner,
}

impl LinearOperator for PreconditionedInverse<'_> {
    fn dim(&self) -> usize {
        self.lu.dim()
    }

    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.lu.solve(&self.q.apply(x))
    }

    fn apply_transpose(&self, x: &[C64]) -> Vec<C64> {
        self.q.apply_transpose(&self.lu.solve_transpose(x))
    }
}
