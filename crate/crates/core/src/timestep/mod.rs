//! Scaled implicit Euler stepping with a constant step size.
//!
//! One step of `K φ + M φ' = r(t)` reads
//! `(K + M/δt) φ^{l+1} = (M/δt) φ^l + r0^{l+1} + rs^{l+1}/δt`, which is the
//! two-block system with the real shift `s = 1/δt` plus a previous-state
//! term. Each variant scales it with its time-domain coefficient table.

use crate::blocks::TwoBlockSystem;
use crate::fem::{displacement_field, FemError, FemSystem};
use crate::numkit::{lu_factor, CsrMatrix, LuFactorization, C64};
use crate::stabilize::{
    recover_solution, scaled_condition, BlockSolver, Domain, RecoveredSolution, Scaling,
    ScalingVariant, StabilizeError,
};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TimestepError {
    #[error("invalid transient configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Stabilize(#[from] StabilizeError),
    #[error(transparent)]
    Fem(#[from] FemError),
}

impl From<crate::numkit::SolverError> for TimestepError {
    fn from(e: crate::numkit::SolverError) -> Self {
        Self::Stabilize(e.into())
    }
}

/// Scaled step operators for one `δt`.
#[derive(Debug, Clone)]
pub struct EulerSystem {
    pub dt: f64,
    pub scaling: Scaling,
    /// Left-hand matrix of the step.
    pub step_matrix: CsrMatrix,
    /// Multiplier of the previous scaled state.
    pub prev_matrix: CsrMatrix,
}

pub fn euler_system(
    sys: &TwoBlockSystem,
    variant: ScalingVariant,
    dt: f64,
) -> Result<EulerSystem, TimestepError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(TimestepError::InvalidConfig(format!("time step must be positive and finite, got {dt}")));
    }
    let scaling = Scaling::new(sys, variant, Domain::TimeStep(dt))?;
    Ok(EulerSystem {
        dt,
        step_matrix: scaling.matrix(sys),
        prev_matrix: scaling.prev_matrix(sys),
        scaling,
    })
}

impl EulerSystem {
    /// Right-hand side of a step from the previous scaled state `xi_prev`
    /// with block-ordered `r0 = r(t_{l+1})` and `rs = −M_fd (g^{l+1} − g^l)`.
    pub fn rhs(&self, xi_prev: &[C64], r0: &[C64], rs: &[C64]) -> Result<Vec<C64>, TimestepError> {
        let mut b = self.scaling.rhs(r0, rs)?;
        for (v, p) in b.iter_mut().zip(self.prev_matrix.mul_vec(xi_prev)) {
            *v += p;
        }
        Ok(b)
    }

    /// Scaled unknowns of block-ordered potentials.
    pub fn to_scaled(&self, phi: &[C64]) -> Vec<C64> {
        self.scaling
            .recovery()
            .scale_unknowns(phi)
            .expect("finite time steps always have a block-2 scaling")
    }

    pub fn to_potential(&self, xi: &[C64]) -> RecoveredSolution {
        recover_solution(xi, &self.scaling.recovery())
    }
}

/// An [`EulerSystem`] with its step matrix factored once for the whole run.
#[derive(Debug, Clone)]
pub struct EulerStepper {
    pub system: EulerSystem,
    lu: LuFactorization,
}

impl EulerStepper {
    pub fn new(sys: &TwoBlockSystem, variant: ScalingVariant, dt: f64) -> Result<Self, TimestepError> {
        let system = euler_system(sys, variant, dt)?;
        let lu = lu_factor(&system.step_matrix, 0.0)?;
        Ok(Self { system, lu })
    }

    pub fn step(&self, xi_prev: &[C64], r0: &[C64], rs: &[C64]) -> Result<Vec<C64>, TimestepError> {
        Ok(self.lu.solve(&self.system.rhs(xi_prev, r0, rs)?))
    }
}

/// `κ∞` of the step matrix for every variant (columns) and step size (rows);
/// `+∞` marks singular steps, `NaN` any other failure.
pub fn condition_vs_dt(
    sys: &TwoBlockSystem,
    variants: &[ScalingVariant],
    dt_grid: &[f64],
    block_solver: BlockSolver,
) -> Vec<Vec<f64>> {
    dt_grid
        .iter()
        .map(|&dt| {
            variants
                .iter()
                .map(|&v| scaled_condition(sys, v, Domain::TimeStep(dt), block_solver).unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    /// Static solve with the excitation at `t0`.
    Static,
    Zero,
    /// Free-unknown potentials in the unpartitioned numbering.
    Potential(Vec<C64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransientConfig {
    pub dt: f64,
    pub t0: f64,
    pub t_end: f64,
    pub variant: ScalingVariant,
    pub initial: InitialState,
    /// Mesh nodes whose potential is recorded.
    pub probes: Vec<usize>,
    /// Record every `stride`-th step (and the initial state).
    pub stride: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransientState {
    pub t: f64,
    /// Waveform value at `t`.
    pub level: f64,
    /// Scaled unknowns in block order.
    pub xi: Vec<C64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub probes: Vec<f64>,
    pub max_d: f64,
    pub min_d: f64,
}

/// Transient field model with all excitations (sources and Dirichlet data)
/// following a scalar waveform.
pub struct FieldTransient<'a> {
    pub fem: &'a FemSystem,
    pub blocks: TwoBlockSystem,
    pub stepper: EulerStepper,
    r0_ref: Vec<C64>,
    rs_ref: Vec<C64>,
}

impl<'a> FieldTransient<'a> {
    pub fn new(fem: &'a FemSystem, variant: ScalingVariant, dt: f64) -> Result<Self, TimestepError> {
        let blocks = fem.partition();
        let stepper = EulerStepper::new(&blocks, variant, dt)?;
        let r0_ref = blocks.r1.iter().chain(&blocks.r2).copied().collect();
        let rs_ref = blocks.r1_s.iter().chain(&blocks.r2_s).copied().collect();
        Ok(Self {
            fem,
            blocks,
            stepper,
            r0_ref,
            rs_ref,
        })
    }

    fn scaled_ref(v: &[C64], w: f64) -> Vec<C64> {
        v.iter().map(|x| x * w).collect()
    }

    /// Static potentials (block order) for waveform value `level`.
    pub fn static_potential(&self, level: f64) -> Result<Vec<C64>, TimestepError> {
        let scaling = Scaling::new(&self.blocks, ScalingVariant::NonSymII, Domain::TimeStep(f64::INFINITY))?;
        let a = scaling.matrix(&self.blocks);
        let b = scaling.rhs(&Self::scaled_ref(&self.r0_ref, level), &Self::scaled_ref(&self.rs_ref, level))?;
        Ok(lu_factor(&a, 0.0)?.solve(&b))
    }

    pub fn initial_state(&self, t0: f64, level: f64, init: &InitialState) -> Result<TransientState, TimestepError> {
        let phi = match init {
            InitialState::Static => self.static_potential(level)?,
            InitialState::Zero => vec![C64::new(0.0, 0.0); self.blocks.dim()],
            InitialState::Potential(p) => {
                if p.len() != self.blocks.dim() {
                    return Err(TimestepError::InvalidConfig(format!(
                        "initial potential has {} entries, expected {}",
                        p.len(),
                        self.blocks.dim()
                    )));
                }
                self.blocks.to_block_order(p)
            }
        };
        Ok(TransientState {
            t: t0,
            level,
            xi: self.stepper.system.to_scaled(&phi),
        })
    }

    /// Advances by one step to waveform value `level`.
    pub fn step(&self, state: &TransientState, level: f64) -> Result<TransientState, TimestepError> {
        let r0 = Self::scaled_ref(&self.r0_ref, level);
        let rs = Self::scaled_ref(&self.rs_ref, level - state.level);
        Ok(TransientState {
            t: state.t + self.stepper.system.dt,
            level,
            xi: self.stepper.step(&state.xi, &r0, &rs)?,
        })
    }

    /// Free-unknown potentials in the unpartitioned numbering.
    pub fn free_potential(&self, state: &TransientState) -> Vec<C64> {
        let phi = self
            .stepper
            .system
            .to_potential(&state.xi)
            .block_ordered()
            .expect("finite time steps always recover block 2");
        self.blocks.from_block_order(&phi)
    }

    /// Real nodal potentials including Dirichlet values.
    pub fn node_potential(&self, state: &TransientState) -> Vec<f64> {
        self.fem
            .node_values(&self.free_potential(state), C64::new(state.level, 0.0))
            .iter()
            .map(|v| v.re)
            .collect()
    }

    pub fn sample(&self, state: &TransientState, probes: &[usize]) -> Result<Sample, TimestepError> {
        let phi = self.node_potential(state);
        let d = displacement_field(&self.fem.mesh, &self.fem.materials, &phi)?;
        let probes = probes
            .iter()
            .map(|&n| {
                phi.get(n).copied().ok_or_else(|| {
                    TimestepError::InvalidConfig(format!("probe node {n} outside mesh"))
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Sample {
            t: state.t,
            probes,
            max_d: d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            min_d: d.iter().copied().fold(f64::INFINITY, f64::min),
        })
    }
}

/// Output of [`run_transient`].
#[derive(Debug, Clone)]
pub struct TransientRun {
    pub history: Vec<Sample>,
    pub final_state: TransientState,
}

/// Runs from `t0` to `t_end`; `on_step` sees every state including the initial one.
pub fn run_transient(
    fem: &FemSystem,
    cfg: &TransientConfig,
    waveform: &dyn Fn(f64) -> f64,
    mut on_step: impl FnMut(&FieldTransient, &TransientState) -> Result<(), TimestepError>,
) -> Result<TransientRun, TimestepError> {
    if !(cfg.t_end >= cfg.t0) || cfg.stride == 0 {
        return Err(TimestepError::InvalidConfig(
            "t_end must not precede t0 and stride must be positive".into(),
        ));
    }
    let model = FieldTransient::new(fem, cfg.variant, cfg.dt)?;
    let mut state = model.initial_state(cfg.t0, waveform(cfg.t0), &cfg.initial)?;
    let n_steps = ((cfg.t_end - cfg.t0) / cfg.dt + 1e-9).floor() as usize;
    let mut history = vec![model.sample(&state, &cfg.probes)?];
    on_step(&model, &state)?;
    for l in 1..=n_steps {
        let t = cfg.t0 + l as f64 * cfg.dt;
        state = model.step(&state, waveform(t))?;
        state.t = t;
        if l % cfg.stride == 0 {
            history.push(model.sample(&state, &cfg.probes)?);
        }
        on_step(&model, &state)?;
    }
    Ok(TransientRun {
        history,
        final_state: state,
    })
}
