//! Low-frequency stable scalings of the two-block system.
//!
//! Every variant rescales the block rows (and possibly the unknowns) of
//! `(K + s·M) x = r0 + s·rs` by powers of the frequency or by material
//! factors so that no equation degenerates as `s → 0`. All powers of the
//! frequency are combined symbolically before any matrix is formed.

mod block;
mod coefficients;
mod scaled;

pub use block::{build_block_preconditioner, BlockPreconditioner, BlockSolver};
pub use coefficients::{effective_coefficients, EffectiveCoefficients};
pub use scaled::{
    recover_solution, scale_system, scale_system_with, scaled_condition, scaled_condition_in, Block2, RecoveredSolution, Recovery,
    ScaledSystem, Scaling, SolveMethod, SolveReport,
};

use crate::numkit::{SolverError, C64};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StabilizeError {
    #[error("invalid scaling parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown variant `{0}` (expected one of orig, i, ii, iii, iv, v, vi, jacobi-l, jacobi-s)")]
    UnknownVariant(String),
    #[error(
        "the insulator block carries a frequency independent source (norm {norm:e}); \
         it has no static limit, so the scaled right-hand side is undefined at zero frequency"
    )]
    IncompatibleSource { norm: f64 },
    #[error("zero diagonal entry in row {row}; Jacobi scaling is undefined")]
    ZeroDiagonal { row: usize },
    #[error("{block} block of the block preconditioner is singular ({source}); every conductor must touch a Dirichlet boundary")]
    SingularBlock {
        block: &'static str,
        source: SolverError,
    },
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Where the operator `K + s·M` comes from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// Time-harmonic at angular frequency `ω` (rad/s), `s = jω`.
    Frequency(f64),
    /// One implicit Euler step of size `δt` (s), `s = 1/δt`; `δt = ∞` is the static limit.
    TimeStep(f64),
    /// `ω = 0` with the frequency-domain phase convention.
    Static,
}

impl Domain {
    /// Magnitude `u ≥ 0` and phase factor `λ` with `s = λ·u`.
    pub fn parts(self) -> Result<(f64, C64), StabilizeError> {
        match self {
            Domain::Frequency(w) if w >= 0.0 && w.is_finite() => Ok((w, C64::new(0.0, 1.0))),
            Domain::Frequency(w) => Err(StabilizeError::InvalidParameter(format!(
                "angular frequency must be finite and non-negative, got {w}"
            ))),
            Domain::TimeStep(dt) if dt > 0.0 => Ok((1.0 / dt, C64::new(1.0, 0.0))),
            Domain::TimeStep(dt) => Err(StabilizeError::InvalidParameter(format!(
                "time step must be positive, got {dt}"
            ))),
            Domain::Static => Ok((0.0, C64::new(0.0, 1.0))),
        }
    }

    pub fn s(self) -> Result<C64, StabilizeError> {
        let (u, lam) = self.parts()?;
        Ok(lam * u)
    }

    pub fn is_static(self) -> bool {
        matches!(self.parts(), Ok((u, _)) if u == 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalingVariant {
    Original,
    /// Insulator rows and unknowns scaled by `u^(-1/2)`.
    SymI,
    /// Insulator rows scaled by `u^(-1)`.
    NonSymII,
    /// Rows and unknowns scaled by the inverse square root of the block admittances.
    SymMatIII { sigma1: f64, eps1: f64, eps2: f64 },
    /// Rows scaled by the inverse block admittances.
    NonSymMatIV { sigma1: f64, eps1: f64, eps2: f64 },
    /// Variant `NonSymII` with a block-diagonal preconditioner built at the working frequency.
    BlockFreqDepV,
    /// Variant `NonSymII` with a block-diagonal preconditioner built at a fixed `ω₀`.
    BlockFixedVI { omega0: f64 },
    /// Rows divided by the diagonal of the `NonSymII` matrix.
    JacobiLeft,
    /// Symmetric two-sided diagonal scaling.
    JacobiSym,
}

/// Values needed to build any variant from its command-line name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariantParams {
    pub sigma1: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub omega0: f64,
}

impl ScalingVariant {
    pub const NAMES: [&'static str; 9] = ["orig", "i", "ii", "iii", "iv", "v", "vi", "jacobi-l", "jacobi-s"];

    pub fn from_name(name: &str, p: &VariantParams) -> Result<Self, StabilizeError> {
        let v = match name {
            "orig" => Self::Original,
            "i" => Self::SymI,
            "ii" => Self::NonSymII,
            "iii" => Self::SymMatIII {
                sigma1: p.sigma1,
                eps1: p.eps1,
                eps2: p.eps2,
            },
            "iv" => Self::NonSymMatIV {
                sigma1: p.sigma1,
                eps1: p.eps1,
                eps2: p.eps2,
            },
            "v" => Self::BlockFreqDepV,
            "vi" => Self::BlockFixedVI { omega0: p.omega0 },
            "jacobi-l" => Self::JacobiLeft,
            "jacobi-s" => Self::JacobiSym,
            _ => return Err(StabilizeError::UnknownVariant(name.to_string())),
        };
        v.validate()?;
        Ok(v)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Original => "orig",
            Self::SymI => "i",
            Self::NonSymII => "ii",
            Self::SymMatIII { .. } => "iii",
            Self::NonSymMatIV { .. } => "iv",
            Self::BlockFreqDepV => "v",
            Self::BlockFixedVI { .. } => "vi",
            Self::JacobiLeft => "jacobi-l",
            Self::JacobiSym => "jacobi-s",
        }
    }

    pub fn validate(&self) -> Result<(), StabilizeError> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(StabilizeError::InvalidParameter(format!("{name} must be positive, got {x}")))
            }
        };
        match *self {
            Self::SymMatIII { sigma1, eps1, eps2 } | Self::NonSymMatIV { sigma1, eps1, eps2 } => {
                positive("sigma1", sigma1)?;
                positive("eps1", eps1)?;
                positive("eps2", eps2)
            }
            Self::BlockFixedVI { omega0 } if !(omega0 >= 0.0 && omega0.is_finite()) => Err(
                StabilizeError::InvalidParameter(format!("omega0 must be non-negative, got {omega0}")),
            ),
            _ => Ok(()),
        }
    }

    /// False for the variants whose unknown scaling of block 2 diverges at `u = 0`.
    pub fn recoverable_at_zero(&self) -> bool {
        !matches!(self, Self::SymI | Self::SymMatIII { .. } | Self::JacobiSym)
    }

    pub fn has_block_preconditioner(&self) -> bool {
        matches!(self, Self::BlockFreqDepV | Self::BlockFixedVI { .. })
    }
}

/// The toolkit's numerical breakdown criterion: `κ` infinite or above `1/ε_mach`.
pub fn is_breakdown(kappa: f64) -> bool {
    !kappa.is_finite() || kappa > 1.0 / f64::EPSILON
}
