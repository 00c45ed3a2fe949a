use super::block::{PreconditionedInverse, PreconditionedOperator};
use super::{
    build_block_preconditioner, effective_coefficients, BlockPreconditioner, BlockSolver, Domain,
    EffectiveCoefficients, ScalingVariant, StabilizeError,
};
use crate::blocks::{BlockCoefficients, TwoBlockSystem};
use crate::numkit::{
    bicgstab, condest_operator, condition_number, ilu0, lu_factor, norm2, relative_residual, CsrMatrix,
    LuFactorization, Norm, Preconditioner, SolverError, C64,
};

#[derive(Debug, Clone)]
enum Weights {
    None,
    /// Row `i` is divided by `d[i]`.
    Left(Vec<C64>),
    /// Entry `(i, j)` is multiplied by `w[i]·w[j]`.
    Sym(Vec<C64>),
}

/// A variant evaluated at one frequency or time step, ready to scale any
/// operator or right-hand side with the block structure of `sys`.
#[derive(Debug, Clone)]
pub struct Scaling {
    pub variant: ScalingVariant,
    pub domain: Domain,
    pub coefficients: EffectiveCoefficients,
    weights: Weights,
    n1: usize,
}

fn checked_diagonal(a: &CsrMatrix) -> Result<Vec<C64>, StabilizeError> {
    let d = a.diagonal();
    match d.iter().position(|v| *v == C64::new(0.0, 0.0)) {
        Some(row) => Err(StabilizeError::ZeroDiagonal { row }),
        None => Ok(d),
    }
}

impl Scaling {
    pub fn new(
        sys: &TwoBlockSystem,
        variant: ScalingVariant,
        domain: Domain,
    ) -> Result<Self, StabilizeError> {
        let coefficients = effective_coefficients(variant, domain)?;
        let weights = match variant {
            ScalingVariant::JacobiLeft => Weights::Left(checked_diagonal(&sys.matrix(&coefficients.blocks))?),
            ScalingVariant::JacobiSym => Weights::Sym(
                checked_diagonal(&sys.matrix(&coefficients.blocks))?
                    .iter()
                    .map(|d| d.sqrt().inv())
                    .collect(),
            ),
            _ => Weights::None,
        };
        Ok(Self {
            variant,
            domain,
            coefficients,
            weights,
            n1: sys.n1(),
        })
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    fn weighted(&self, a: CsrMatrix) -> CsrMatrix {
        match &self.weights {
            Weights::None => a,
            Weights::Left(d) => a.map_entries(|i, _, v| v / d[i]),
            Weights::Sym(w) => a.map_entries(|i, j, v| v * (w[i] * w[j])),
        }
    }

    /// Scaled system matrix.
    pub fn matrix(&self, sys: &TwoBlockSystem) -> CsrMatrix {
        self.weighted(sys.matrix(&self.coefficients.blocks))
    }

    /// The scaled matrix with the conductivity block removed: the scaled `s·M`.
    pub fn prev_matrix(&self, sys: &TwoBlockSystem) -> CsrMatrix {
        let c = self.coefficients.blocks;
        self.weighted(sys.matrix(&BlockCoefficients {
            k11: C64::new(0.0, 0.0),
            ..c
        }))
    }

    /// Scales block-ordered `r0 + s·rs`.
    pub fn rhs(&self, r0: &[C64], rs: &[C64]) -> Result<Vec<C64>, StabilizeError> {
        let c = &self.coefficients;
        let n1 = self.n1;
        let mut out: Vec<C64> = r0[..n1]
            .iter()
            .zip(&rs[..n1])
            .map(|(a, b)| c.r1 * a + c.r1_s * b)
            .collect();
        match c.r2 {
            Some(a2) => out.extend(r0[n1..].iter().zip(&rs[n1..]).map(|(a, b)| a2 * a + c.r2_s * b)),
            None => {
                let norm = norm2(&r0[n1..]);
                if norm > 0.0 {
                    return Err(StabilizeError::IncompatibleSource { norm });
                }
                out.extend(rs[n1..].iter().map(|b| c.r2_s * b));
            }
        }
        match &self.weights {
            Weights::None => {}
            Weights::Left(d) => out.iter_mut().zip(d).for_each(|(v, d)| *v /= d),
            Weights::Sym(w) => out.iter_mut().zip(w).for_each(|(v, w)| *v *= w),
        }
        Ok(out)
    }

    /// Scaled right-hand side of the stored sources of `sys`.
    pub fn system_rhs(&self, sys: &TwoBlockSystem) -> Result<Vec<C64>, StabilizeError> {
        let r0: Vec<C64> = sys.r1.iter().chain(&sys.r2).copied().collect();
        let rs: Vec<C64> = sys.r1_s.iter().chain(&sys.r2_s).copied().collect();
        self.rhs(&r0, &rs)
    }

    pub fn recovery(&self) -> Recovery {
        let c = &self.coefficients;
        let n = match &self.weights {
            Weights::None => None,
            Weights::Left(d) => Some(d.len()),
            Weights::Sym(w) => Some(w.len()),
        };
        let w = |i: usize| match &self.weights {
            Weights::Sym(w) => w[i],
            _ => C64::new(1.0, 0.0),
        };
        let (b1, b2) = match n {
            None => (vec![c.b1], c.b2.map(|b| vec![b])),
            Some(n) => (
                (0..self.n1).map(|i| c.b1 * w(i)).collect(),
                c.b2.map(|b| (self.n1..n).map(|i| b * w(i)).collect()),
            ),
        };
        Recovery {
            b1,
            b2,
            recoverable_at_zero: self.variant.recoverable_at_zero(),
            n1: self.n1,
        }
    }
}

/// Multipliers `φ_k = b_k·ξ_k`; a single entry applies to the whole block.
#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    pub b1: Vec<C64>,
    /// `None` when block 2 cannot be reconstructed (static limit of variants with `b₂ ~ u^(-p)`).
    pub b2: Option<Vec<C64>>,
    /// Whether this variant can reconstruct block 2 at zero frequency at all.
    pub recoverable_at_zero: bool,
    n1: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Block2 {
    Values(Vec<C64>),
    Undefined,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredSolution {
    pub phi1: Vec<C64>,
    pub phi2: Block2,
}

impl RecoveredSolution {
    /// Block-ordered potentials, `None` if block 2 is undefined.
    pub fn block_ordered(&self) -> Option<Vec<C64>> {
        match &self.phi2 {
            Block2::Values(v) => Some(self.phi1.iter().chain(v).copied().collect()),
            Block2::Undefined => None,
        }
    }
}

fn multiply(b: &[C64], x: &[C64]) -> Vec<C64> {
    if b.len() == 1 {
        x.iter().map(|v| b[0] * v).collect()
    } else {
        x.iter().zip(b).map(|(v, b)| b * v).collect()
    }
}

impl Recovery {
    /// Inverse of the recovery: `ξ_k = φ_k / b_k`, `None` if block 2 is undefined.
    pub fn scale_unknowns(&self, phi: &[C64]) -> Option<Vec<C64>> {
        let b2 = self.b2.as_ref()?;
        let (p1, p2) = phi.split_at(self.n1);
        let inv = |b: &[C64]| b.iter().map(|v| v.inv()).collect::<Vec<_>>();
        let mut out = multiply(&inv(&self.b1), p1);
        out.extend(multiply(&inv(b2), p2));
        Some(out)
    }
}

pub fn recover_solution(xi: &[C64], recovery: &Recovery) -> RecoveredSolution {
    let (x1, x2) = xi.split_at(recovery.n1);
    RecoveredSolution {
        phi1: multiply(&recovery.b1, x1),
        phi2: match &recovery.b2 {
            Some(b) => Block2::Values(multiply(b, x2)),
            None => Block2::Undefined,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolveMethod {
    /// Sparse LU; only exactly zero pivots are treated as singular.
    Lu,
    /// BiCGStab, preconditioned by the block preconditioner when the variant
    /// has one, otherwise by ILU(0) of the whole matrix if `ilu` is set.
    Bicgstab { tol: f64, maxit: usize, ilu: bool },
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub xi: Vec<C64>,
    pub iterations: Option<usize>,
    /// `‖A ξ − b‖₂ / ‖b‖₂` for the scaled system.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ScaledSystem {
    pub scaling: Scaling,
    pub matrix: CsrMatrix,
    pub rhs: Vec<C64>,
    pub recovery: Recovery,
    pub preconditioner: Option<BlockPreconditioner>,
}

/// Scales `sys`; block preconditioners use ILU(0) blocks.
pub fn scale_system(
    sys: &TwoBlockSystem,
    variant: ScalingVariant,
    domain: Domain,
) -> Result<ScaledSystem, StabilizeError> {
    scale_system_with(sys, variant, domain, BlockSolver::Ilu)
}

pub fn scale_system_with(
    sys: &TwoBlockSystem,
    variant: ScalingVariant,
    domain: Domain,
    block_solver: BlockSolver,
) -> Result<ScaledSystem, StabilizeError> {
    let scaling = Scaling::new(sys, variant, domain)?;
    let preconditioner = if variant.has_block_preconditioner() {
        Some(build_block_preconditioner(sys, variant, domain, block_solver)?)
    } else {
        None
    };
    Ok(ScaledSystem {
        matrix: scaling.matrix(sys),
        rhs: scaling.system_rhs(sys)?,
        recovery: scaling.recovery(),
        preconditioner,
        scaling,
    })
}

/// `κ∞` of the scaled matrix (or of `Q⁻¹A` for the block preconditioned
/// variants) without forming a right-hand side; `+∞` if singular.
pub fn scaled_condition(
    sys: &TwoBlockSystem,
    variant: ScalingVariant,
    domain: Domain,
    block_solver: BlockSolver,
) -> Result<f64, StabilizeError> {
    scaled_condition_in(sys, variant, domain, block_solver, Norm::Inf)
}

/// [`scaled_condition`] in the requested norm.
pub fn scaled_condition_in(
    sys: &TwoBlockSystem,
    variant: ScalingVariant,
    domain: Domain,
    block_solver: BlockSolver,
    norm: Norm,
) -> Result<f64, StabilizeError> {
    let matrix = Scaling::new(sys, variant, domain)?.matrix(sys);
    let q = if variant.has_block_preconditioner() {
        Some(build_block_preconditioner(sys, variant, domain, block_solver)?)
    } else {
        None
    };
    condition_of(&matrix, q.as_ref(), norm)
}

fn condition_of(matrix: &CsrMatrix, q: Option<&BlockPreconditioner>, norm: Norm) -> Result<f64, StabilizeError> {
    match q {
        None => Ok(condition_number(matrix, norm)?),
        Some(q) => match lu_factor(matrix, 0.0) {
            Ok(lu) => Ok(condest_operator(
                &PreconditionedOperator { a: matrix, q },
                &PreconditionedInverse { lu: &lu, q },
                norm,
            )),
            Err(SolverError::SingularMatrix { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e.into()),
        },
    }
}

impl ScaledSystem {
    pub fn variant(&self) -> ScalingVariant {
        self.scaling.variant
    }

    pub fn recoverable_at_zero(&self) -> bool {
        self.recovery.recoverable_at_zero
    }

    pub fn factor(&self) -> Result<LuFactorization, SolverError> {
        lu_factor(&self.matrix, 0.0)
    }

    /// `κ` of the matrix, or of `Q⁻¹A` for the block preconditioned
    /// variants; `+∞` if the matrix is singular.
    pub fn condition_estimate(&self, norm: Norm) -> Result<f64, StabilizeError> {
        condition_of(&self.matrix, self.preconditioner.as_ref(), norm)
    }

    pub fn solve(&self, method: SolveMethod) -> Result<SolveReport, StabilizeError> {
        match method {
            SolveMethod::Lu => {
                let xi = self.factor()?.solve(&self.rhs);
                Ok(SolveReport {
                    residual: relative_residual(&self.matrix, &xi, &self.rhs),
                    xi,
                    iterations: None,
                })
            }
            SolveMethod::Bicgstab { tol, maxit, ilu } => {
                let whole;
                let precond: Option<&dyn Preconditioner> = match (&self.preconditioner, ilu) {
                    (Some(q), _) => Some(q),
                    (None, true) => {
                        whole = ilu0(&self.matrix)?;
                        Some(&whole)
                    }
                    (None, false) => None,
                };
                let out = bicgstab(&self.matrix, &self.rhs, tol, maxit, precond)?;
                Ok(SolveReport {
                    xi: out.x,
                    iterations: Some(out.iterations),
                    residual: out.residual,
                })
            }
        }
    }

    pub fn recover(&self, xi: &[C64]) -> RecoveredSolution {
        recover_solution(xi, &self.recovery)
    }
}
