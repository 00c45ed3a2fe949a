use super::{Domain, ScalingVariant, StabilizeError};
use crate::blocks::BlockCoefficients;
use crate::numkit::C64;

/// Block multipliers after all powers of `u` have been cancelled.
///
/// Scaled right-hand side: block `k` is `r_k·r0_k + r_k_s·rs_k`. Recovery of
/// the original unknowns is `φ_k = b_k·ξ_k`. For the Jacobi variants this is
/// the table before the diagonal weights are applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoefficients {
    pub blocks: BlockCoefficients,
    pub r1: C64,
    pub r1_s: C64,
    /// `None` where the multiplier of the frequency independent source is unbounded (`u = 0`).
    pub r2: Option<C64>,
    pub r2_s: C64,
    pub b1: C64,
    /// `None` where the unknown scaling is unbounded (`u = 0`).
    pub b2: Option<C64>,
}

pub fn effective_coefficients(
    variant: ScalingVariant,
    domain: Domain,
) -> Result<EffectiveCoefficients, StabilizeError> {
    variant.validate()?;
    let (u, lam) = domain.parts()?;
    let s = lam * u;
    let one = C64::new(1.0, 0.0);
    let at_zero = u == 0.0;
    let finite = |f: &dyn Fn() -> C64| if at_zero { None } else { Some(f()) };
    use ScalingVariant::*;
    let c = match variant {
        Original => EffectiveCoefficients {
            blocks: BlockCoefficients {
                k11: one,
                m11: s,
                m12: s,
                m21: s,
                m22: s,
            },
            r1: one,
            r1_s: s,
            r2: Some(one),
            r2_s: s,
            b1: one,
            b2: Some(one),
        },
        SymI => {
            let off = lam * u.sqrt();
            let a2 = finite(&|| C64::new(1.0 / u.sqrt(), 0.0));
            EffectiveCoefficients {
                blocks: BlockCoefficients {
                    k11: one,
                    m11: s,
                    m12: off,
                    m21: off,
                    m22: lam,
                },
                r1: one,
                r1_s: s,
                r2: a2,
                r2_s: off,
                b1: one,
                b2: a2,
            }
        }
        NonSymII | BlockFreqDepV | BlockFixedVI { .. } | JacobiLeft => EffectiveCoefficients {
            blocks: BlockCoefficients {
                k11: one,
                m11: s,
                m12: s,
                m21: lam,
                m22: lam,
            },
            r1: one,
            r1_s: s,
            r2: finite(&|| C64::new(1.0 / u, 0.0)),
            r2_s: lam,
            b1: one,
            b2: Some(one),
        },
        SymMatIII { sigma1, eps1, eps2 } => {
            let y = s * eps1 + sigma1;
            let a1 = one / y.sqrt();
            let root_s = s.sqrt();
            let off = root_s / (y.sqrt() * eps2.sqrt());
            let a2 = finite(&|| one / (s * eps2).sqrt());
            EffectiveCoefficients {
                blocks: BlockCoefficients {
                    k11: one / y,
                    m11: s / y,
                    m12: off,
                    m21: off,
                    m22: C64::new(1.0 / eps2, 0.0),
                },
                r1: a1,
                r1_s: a1 * s,
                r2: a2,
                r2_s: root_s / eps2.sqrt(),
                b1: a1,
                b2: a2,
            }
        }
        NonSymMatIV { sigma1, eps1, eps2 } => {
            let y = s * eps1 + sigma1;
            let a1 = one / y;
            let lower = C64::new(1.0 / eps2, 0.0);
            EffectiveCoefficients {
                blocks: BlockCoefficients {
                    k11: a1,
                    m11: s / y,
                    m12: s / y,
                    m21: lower,
                    m22: lower,
                },
                r1: a1,
                r1_s: s / y,
                r2: finite(&|| one / (s * eps2)),
                r2_s: lower,
                b1: one,
                b2: Some(one),
            }
        }
        JacobiSym => {
            let root_s = s.sqrt();
            let a2 = finite(&|| one / root_s);
            EffectiveCoefficients {
                blocks: BlockCoefficients {
                    k11: one,
                    m11: s,
                    m12: root_s,
                    m21: root_s,
                    m22: one,
                },
                r1: one,
                r1_s: s,
                r2: a2,
                r2_s: root_s,
                b1: one,
                b2: a2,
            }
        }
    };
    Ok(c)
}
