//! Exact condition numbers of the two-node RC benchmark from the 2×2 inverse.

use crate::numkit::{Norm, C64};

/// Formulations with a closed form on the RC benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RcVariant {
    Original,
    /// `a₂ = b₂ = ω^(−1/2)`.
    SymI,
    /// `a₁ = b₁ = (R⁻¹ + jωC)^(−1/2)`, `a₂ = b₂ = (2jωC)^(−1/2)`.
    SymMatIII,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RcCondition {
    /// `‖A‖·‖A⁻¹‖`, `+∞` for a singular matrix.
    pub kappa: f64,
    /// Leading-order low-frequency expansion.
    pub asymptote: f64,
    /// Whether `R⁻¹ > 2ωC`, the regime in which the expansion holds.
    pub low_frequency_regime: bool,
}

/// System matrix of the benchmark for the given formulation.
pub fn rc_scaled_matrix(r: f64, c: f64, omega: f64, variant: RcVariant) -> [[C64; 2]; 2] {
    let j = C64::new(0.0, 1.0);
    let g = C64::new(1.0 / r, 0.0);
    match variant {
        RcVariant::Original => {
            let y = j * omega * c;
            [[g + y, -y], [-y, 2.0 * y]]
        }
        RcVariant::SymI => {
            let off = -j * omega.sqrt() * c;
            [[g + j * omega * c, off], [off, j * 2.0 * c]]
        }
        RcVariant::SymMatIII => {
            let ratio = C64::new(omega * c, 0.0) / (g + j * omega * c);
            let off = (C64::new(1.0, 1.0) / -2.0) * ratio.sqrt();
            let one = C64::new(1.0, 0.0);
            [[one, off], [off, one]]
        }
    }
}

fn norm2x2(a: &[[C64; 2]; 2], norm: Norm) -> f64 {
    match norm {
        Norm::One => (0..2)
            .map(|j| a[0][j].norm() + a[1][j].norm())
            .fold(0.0, f64::max),
        Norm::Inf => (0..2)
            .map(|i| a[i][0].norm() + a[i][1].norm())
            .fold(0.0, f64::max),
    }
}

fn kappa2x2(a: &[[C64; 2]; 2], norm: Norm) -> f64 {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if det.norm() == 0.0 {
        return f64::INFINITY;
    }
    let adj = [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]];
    norm2x2(a, norm) * norm2x2(&adj, norm) / det.norm()
}

pub fn rc_condition_closed_form(
    r: f64,
    c: f64,
    omega: f64,
    variant: RcVariant,
    norm: Norm,
) -> RcCondition {
    let a = rc_scaled_matrix(r, c, omega, variant);
    let asymptote = match variant {
        RcVariant::Original if omega == 0.0 => f64::INFINITY,
        RcVariant::Original => 1.0 + 1.0 / (2.0 * omega * r * c),
        RcVariant::SymI => 1.0 / (2.0 * r * c),
        RcVariant::SymMatIII => 1.0,
    };
    RcCondition {
        kappa: kappa2x2(&a, norm),
        asymptote,
        low_frequency_regime: 1.0 / r > 2.0 * omega * c,
    }
}
