//! Dense reference routines, used as oracles for the sparse path.

use nalgebra::{DMatrix, DVector};

use super::{SolverError, C64};

/// Largest dimension accepted by the dense routines.
pub const DENSE_ORACLE_MAX: usize = 2000;

fn to_nalgebra(a: &[Vec<C64>]) -> Result<DMatrix<C64>, SolverError> {
    let n = a.len();
    if n > DENSE_ORACLE_MAX {
        return Err(SolverError::TooLarge {
            n,
            max: DENSE_ORACLE_MAX,
        });
    }
    for row in a {
        if row.len() != n {
            return Err(SolverError::NotSquare {
                nrows: n,
                ncols: row.len(),
            });
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| a[i][j]))
}

fn norm_inf(m: &DMatrix<C64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn dense_inverse(a: &[Vec<C64>]) -> Result<Vec<Vec<C64>>, SolverError> {
    let m = to_nalgebra(a)?;
    let n = m.nrows();
    let inv = m.lu().try_inverse().ok_or(SolverError::SingularMatrix {
        column: 0,
        pivot: 0.0,
        tolerance: 0.0,
    })?;
    if inv.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(SolverError::SingularMatrix {
            column: 0,
            pivot: 0.0,
            tolerance: 0.0,
        });
    }
    Ok((0..n).map(|i| (0..n).map(|j| inv[(i, j)]).collect()).collect())
}

/// Gaussian elimination with partial pivoting on a dense copy.
pub fn dense_solve(a: &[Vec<C64>], b: &[C64]) -> Result<Vec<C64>, SolverError> {
    let m = to_nalgebra(a)?;
    let rhs = DVector::from_column_slice(b);
    let x = m.lu().solve(&rhs).ok_or(SolverError::SingularMatrix {
        column: 0,
        pivot: 0.0,
        tolerance: 0.0,
    })?;
    Ok(x.iter().copied().collect())
}

/// Exact `‖A‖∞ ‖A⁻¹‖∞` through a dense inverse.
pub fn dense_cond_exact(a: &[Vec<C64>]) -> Result<f64, SolverError> {
    let m = to_nalgebra(a)?;
    let na = norm_inf(&m);
    let inv = dense_inverse(a)?;
    let ni = inv
        .iter()
        .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    Ok(na * ni)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn diagonal_two_by_two() {
        let k = dense_cond_exact(&[vec![c(2.0), c(0.0)], vec![c(0.0), c(1.0)]]).unwrap();
        assert!((k - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hilbert_is_ill_conditioned() {
        let h: Vec<Vec<C64>> = (0..8)
            .map(|i| (0..8).map(|j| c(1.0 / (i + j + 1) as f64)).collect())
            .collect();
        assert!(dense_cond_exact(&h).unwrap() > 1e8);
    }

    #[test]
    fn singular_is_reported() {
        let r = dense_cond_exact(&[vec![c(1.0), c(0.0)], vec![c(0.0), c(0.0)]]);
        assert!(matches!(r, Err(SolverError::SingularMatrix { .. })));
    }
}
