//! Modified nodal analysis for resistive-capacitive circuits in the frequency domain.

mod closed_form;
mod netlist;
mod parse;

pub use crate::numkit::Norm;
pub use closed_form::{rc_condition_closed_form, rc_scaled_matrix, RcCondition, RcVariant};
pub use netlist::{rc_benchmark, validate_netlist, CircuitNetlist, Incidence, NetlistWarning};
pub use parse::parse_netlist;

use thiserror::Error;

use crate::blocks::TwoBlockSystem;
use crate::numkit::{CsrMatrix, C64};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("incidence matrix {name} has {found} node rows, expected {expected}")]
    DimensionMismatch {
        name: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{name} has {branches} branches but {values} values")]
    ValueCount {
        name: &'static str,
        branches: usize,
        values: usize,
    },
    #[error("branch {branch} of {name} is not a two-terminal element")]
    NotTwoTerminal { name: &'static str, branch: usize },
    #[error("{name} value {value} of branch {branch} must be positive")]
    NonPositive {
        name: &'static str,
        branch: usize,
        value: f64,
    },
    #[error("negative angular frequency {0}")]
    NegativeFrequency(f64),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Frequency independent MNA operators: `A(ω) = K + jω·M`.
///
/// Unknowns are the node potentials followed by the voltage-source currents.
#[derive(Debug, Clone)]
pub struct MnaOperators {
    pub k: CsrMatrix,
    pub m: CsrMatrix,
    pub rhs: Vec<C64>,
    pub n_nodes: usize,
    pub n_vsrc: usize,
}

/// MNA matrix and right-hand side at one angular frequency.
#[derive(Debug, Clone)]
pub struct MnaSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<C64>,
    pub n_nodes: usize,
    pub n_vsrc: usize,
}

impl MnaSystem {
    pub fn dim(&self) -> usize {
        self.n_nodes + self.n_vsrc
    }
}

fn weighted_laplacian(inc: &Incidence, weights: &[f64], n: usize) -> Vec<(usize, usize, C64)> {
    let mut trip = Vec::new();
    for (b, &w) in weights.iter().enumerate() {
        let terms = inc.column(b);
        for &(i, si) in &terms {
            for &(j, sj) in &terms {
                trip.push((i, j, C64::new(w * f64::from(si * sj), 0.0)));
            }
        }
    }
    debug_assert!(trip.iter().all(|&(i, j, _)| i < n && j < n));
    trip
}

impl MnaOperators {
    pub fn new(net: &CircuitNetlist) -> Result<Self, CircuitError> {
        net.check()?;
        let nn = net.n_nodes();
        let nv = net.a_v.n_branches();
        let n = nn + nv;

        let mut k = weighted_laplacian(&net.a_r, &net.g, n);
        for b in 0..nv {
            for (i, s) in net.a_v.column(b) {
                let v = C64::new(f64::from(s), 0.0);
                k.push((i, nn + b, v));
                k.push((nn + b, i, v));
            }
        }
        let m = weighted_laplacian(&net.a_c, &net.c, n);

        let mut rhs = vec![C64::new(0.0, 0.0); n];
        for (b, &cur) in net.i_src.iter().enumerate() {
            for (i, s) in net.a_i.column(b) {
                rhs[i] -= f64::from(s) * cur;
            }
        }
        for (b, &v) in net.v_src.iter().enumerate() {
            rhs[nn + b] = v;
        }
        Ok(Self {
            k: CsrMatrix::from_triplets(n, n, &k).expect("incidence rows validated"),
            m: CsrMatrix::from_triplets(n, n, &m).expect("incidence rows validated"),
            rhs,
            n_nodes: nn,
            n_vsrc: nv,
        })
    }

    pub fn at(&self, omega: f64) -> MnaSystem {
        MnaSystem {
            matrix: CsrMatrix::lincomb(
                C64::new(1.0, 0.0),
                &self.k,
                C64::new(0.0, omega),
                &self.m,
            ),
            rhs: self.rhs.clone(),
            n_nodes: self.n_nodes,
            n_vsrc: self.n_vsrc,
        }
    }

    /// Partition into resistively controlled and purely capacitive unknowns.
    pub fn two_block(&self) -> TwoBlockSystem {
        let zeros = vec![C64::new(0.0, 0.0); self.rhs.len()];
        TwoBlockSystem::split_by_conductivity(&self.k, &self.m, &self.rhs, &zeros)
    }
}

/// `A(ω) = A_R G A_Rᵀ + jω A_C C A_Cᵀ` with voltage-source coupling, rhs `[−A_I i; v]`.
pub fn assemble_mna(net: &CircuitNetlist, omega: f64) -> Result<MnaSystem, CircuitError> {
    if omega < 0.0 {
        return Err(CircuitError::NegativeFrequency(omega));
    }
    Ok(MnaOperators::new(net)?.at(omega))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{dense_solve, lu_factor, SolverError};

    #[test]
    fn rc_matrix_matches_nodal_equations() {
        let net = rc_benchmark(1.0, 1.0).unwrap();
        let sys = assemble_mna(&net, 1.0).unwrap();
        let c = |re, im| C64::new(re, im);
        assert_eq!(sys.matrix.get(0, 0), c(1.0, 1.0));
        assert_eq!(sys.matrix.get(0, 1), c(0.0, -1.0));
        assert_eq!(sys.matrix.get(1, 0), c(0.0, -1.0));
        assert_eq!(sys.matrix.get(1, 1), c(0.0, 2.0));
        assert_eq!(sys.rhs, vec![c(-1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn static_rc_is_singular() {
        let net = rc_benchmark(2.0, 1e-6).unwrap();
        let sys = assemble_mna(&net, 0.0).unwrap();
        assert_eq!(sys.matrix.get(0, 0), C64::new(0.5, 0.0));
        assert!(sys.matrix.row_is_zero(1));
        assert!(matches!(
            lu_factor(&sys.matrix, 0.0),
            Err(SolverError::SingularMatrix { .. })
        ));
    }

    #[test]
    fn voltage_source_across_resistor() {
        let net = parse_netlist("V V1 1 0 3.0\nR R1 1 0 2.0\n").unwrap();
        let sys = assemble_mna(&net, 0.0).unwrap();
        let x = dense_solve(&sys.matrix.to_dense(), &sys.rhs).unwrap();
        assert!((x[0] - C64::new(3.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - C64::new(-1.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rc_two_block_puts_capacitive_node_last() {
        let net = rc_benchmark(1.0, 1e-3).unwrap();
        let sys = MnaOperators::new(&net).unwrap().two_block();
        assert_eq!(sys.i1, vec![0]);
        assert_eq!(sys.i2, vec![1]);
    }

    #[test]
    fn negative_frequency_rejected() {
        let net = rc_benchmark(1.0, 1.0).unwrap();
        assert!(matches!(
            assemble_mna(&net, -1.0),
            Err(CircuitError::NegativeFrequency(_))
        ));
    }
}
