//! Hager–Higham 1-norm estimation and condition estimates in the 1- and ∞-norms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{lu_factor, CsrMatrix, LinearOperator, LuFactorization, Norm, SolverError, C64};

#[derive(Debug, Clone, Copy)]
pub struct CondestOptions {
    /// Power-iteration sweeps per start vector.
    pub max_iter: usize,
    /// Extra starts from random sign vectors.
    pub restarts: usize,
    pub seed: u64,
    /// Below this dimension the norm is computed exactly column by column.
    pub exact_below: usize,
}

impl Default for CondestOptions {
    fn default() -> Self {
        Self {
            max_iter: 5,
            restarts: 2,
            seed: 0x5eed_c0de,
            exact_below: 9,
        }
    }
}

struct Transposed<'a>(&'a dyn LinearOperator);

impl LinearOperator for Transposed<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.0.apply_transpose(x)
    }
    fn apply_transpose(&self, x: &[C64]) -> Vec<C64> {
        self.0.apply(x)
    }
}

struct Inverse<'a>(&'a LuFactorization);

impl LinearOperator for Inverse<'_> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.0.solve(x)
    }
    fn apply_transpose(&self, x: &[C64]) -> Vec<C64> {
        self.0.solve_transpose(x)
    }
}

fn norm1(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).sum()
}

fn conj(x: &[C64]) -> Vec<C64> {
    x.iter().map(|v| v.conj()).collect()
}

/// `B^H y = conj(Bᵀ conj(y))`.
fn apply_adjoint(op: &dyn LinearOperator, y: &[C64]) -> Vec<C64> {
    conj(&op.apply_transpose(&conj(y)))
}

fn hager_from(op: &dyn LinearOperator, mut x: Vec<C64>, max_iter: usize) -> f64 {
    let n = op.dim();
    let mut est = 0.0f64;
    let mut last_j = usize::MAX;
    for k in 0..max_iter {
        let y = op.apply(&x);
        let e = norm1(&y);
        if k > 0 && e <= est {
            break;
        }
        est = est.max(e);
        let xi: Vec<C64> = y
            .iter()
            .map(|v| {
                let a = v.norm();
                if a == 0.0 {
                    C64::new(1.0, 0.0)
                } else {
                    v / a
                }
            })
            .collect();
        let z = apply_adjoint(op, &xi);
        let (j, zmax) = z
            .iter()
            .enumerate()
            .map(|(i, v)| (i, v.norm()))
            .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        let zx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
        if k > 0 && (zmax <= zx || j == last_j) {
            break;
        }
        last_j = j;
        x = vec![C64::new(0.0, 0.0); n];
        x[j] = C64::new(1.0, 0.0);
    }
    est
}

/// Lower-bound estimate of `‖B‖₁` using products with `B` and `Bᵀ`.
pub fn onenormest(op: &dyn LinearOperator, opts: &CondestOptions) -> f64 {
    let n = op.dim();
    if n == 0 {
        return 0.0;
    }
    if n < opts.exact_below {
        return (0..n)
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); n];
                e[j] = C64::new(1.0, 0.0);
                norm1(&op.apply(&e))
            })
            .fold(0.0, f64::max);
    }
    let inv_n = 1.0 / n as f64;
    let mut est = hager_from(op, vec![C64::new(inv_n, 0.0); n], opts.max_iter);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.restarts {
        let x: Vec<C64> = (0..n)
            .map(|_| C64::new(if rng.gen::<bool>() { inv_n } else { -inv_n }, 0.0))
            .collect();
        est = est.max(hager_from(op, x, opts.max_iter));
    }

    // alternating test vector guards against cancellation-driven underestimates
    let alt: Vec<C64> = (0..n)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            C64::new(sign * (1.0 + i as f64 / (n as f64 - 1.0).max(1.0)), 0.0)
        })
        .collect();
    let alt_est = 2.0 * norm1(&op.apply(&alt)) / (3.0 * n as f64);
    est.max(alt_est)
}

/// Estimate of `‖B‖∞ = ‖Bᵀ‖₁`.
pub fn norm_inf_estimate(op: &dyn LinearOperator, opts: &CondestOptions) -> f64 {
    onenormest(&Transposed(op), opts)
}

/// `‖A‖∞ · est‖A⁻¹‖∞` given a factorization of `A`.
pub fn condest_inf(a: &CsrMatrix, lu: &LuFactorization) -> f64 {
    a.norm_inf() * norm_inf_estimate(&Inverse(lu), &CondestOptions::default())
}

/// Condition estimate of an implicit operator given an operator for its inverse.
pub fn condest_inf_operator(op: &dyn LinearOperator, inverse: &dyn LinearOperator) -> f64 {
    let opts = CondestOptions::default();
    norm_inf_estimate(op, &opts) * norm_inf_estimate(inverse, &opts)
}

/// Estimate of `‖B‖` in the requested norm.
pub fn norm_estimate(op: &dyn LinearOperator, norm: Norm, opts: &CondestOptions) -> f64 {
    match norm {
        Norm::One => onenormest(op, opts),
        Norm::Inf => norm_inf_estimate(op, opts),
    }
}

/// `‖A‖ · est‖A⁻¹‖` given a factorization of `A`.
pub fn condest(a: &CsrMatrix, lu: &LuFactorization, norm: Norm) -> f64 {
    let exact = match norm {
        Norm::One => a.norm_one(),
        Norm::Inf => a.norm_inf(),
    };
    exact * norm_estimate(&Inverse(lu), norm, &CondestOptions::default())
}

/// Condition estimate of an implicit operator in the requested norm.
pub fn condest_operator(op: &dyn LinearOperator, inverse: &dyn LinearOperator, norm: Norm) -> f64 {
    let opts = CondestOptions::default();
    norm_estimate(op, norm, &opts) * norm_estimate(inverse, norm, &opts)
}

/// Factors `A` and estimates `κ∞`; a singular factorization yields `+∞`.
pub fn condition_number_inf(a: &CsrMatrix) -> Result<f64, SolverError> {
    condition_number(a, Norm::Inf)
}

/// Factors `A` and estimates its condition number; a singular factorization yields `+∞`.
pub fn condition_number(a: &CsrMatrix, norm: Norm) -> Result<f64, SolverError> {
    match lu_factor(a, 0.0) {
        Ok(lu) => Ok(condest(a, &lu, norm)),
        Err(SolverError::SingularMatrix { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}
