//! Left-looking sparse LU with threshold partial pivoting.
//!
//! Column `k` of the factors is obtained from a sparse triangular solve
//! `L \ A(:, q[k])` whose nonzero pattern is the reach of the column's
//! pattern in the graph of `L`. The diagonal entry is kept as pivot when
//! its magnitude is at least `diag_threshold` times the column maximum,
//! otherwise the largest candidate wins. Rows are equilibrated to unit
//! maximum magnitude first, so pivot choices do not depend on how the
//! equations happen to be scaled. The singularity test compares pivots of
//! the unscaled matrix against `pivot_tol`.

use super::{ColumnOrdering, CsrMatrix, SolverError, C64};

const UNSET: usize = usize::MAX;

/// Singularity threshold used when the caller does not choose one: `1e-13·‖A‖∞`.
pub fn default_pivot_tol(a: &CsrMatrix) -> f64 {
    1e-13 * a.norm_inf()
}

#[derive(Debug, Clone, Copy)]
pub struct LuOptions {
    /// A column whose largest candidate pivot is below this magnitude (or exactly zero)
    /// is reported as [`SolverError::SingularMatrix`].
    pub pivot_tol: f64,
    pub diag_threshold: f64,
    pub ordering: ColumnOrdering,
    /// Factor `R·A` with `R` scaling every row to unit maximum magnitude.
    pub row_scaling: bool,
}

impl LuOptions {
    pub fn new(pivot_tol: f64) -> Self {
        Self {
            pivot_tol,
            diag_threshold: 0.1,
            ordering: ColumnOrdering::Rcm,
            row_scaling: true,
        }
    }
}

/// Factors with `P·A·Q = L·U`.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    n: usize,
    l_ptr: Vec<usize>,
    l_idx: Vec<usize>,
    l_val: Vec<C64>,
    u_ptr: Vec<usize>,
    u_idx: Vec<usize>,
    u_val: Vec<C64>,
    /// original row -> pivot position
    pinv: Vec<usize>,
    /// factor column k -> original column
    q: Vec<usize>,
    row_scale: Vec<f64>,
    min_pivot: f64,
}

pub fn lu_factor(a: &CsrMatrix, pivot_tol: f64) -> Result<LuFactorization, SolverError> {
    lu_factor_with(a, &LuOptions::new(pivot_tol))
}

pub fn lu_factor_with(a: &CsrMatrix, opts: &LuOptions) -> Result<LuFactorization, SolverError> {
    if !a.is_square() {
        return Err(SolverError::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
    }
    let n = a.nrows();
    let q = opts.ordering.permutation(a);
    // rows of Aᵀ are columns of A
    let cols = a.transpose();
    let row_scale: Vec<f64> = (0..n)
        .map(|i| {
            let m = a.row(i).1.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if opts.row_scaling && m > 0.0 && m.is_finite() {
                1.0 / m
            } else {
                1.0
            }
        })
        .collect();

    let zero = C64::new(0.0, 0.0);
    let mut pinv = vec![UNSET; n];
    let mut x = vec![zero; n];
    let mut xi = vec![0usize; n];
    let mut stack = vec![0usize; n];
    let mut pstack = vec![0usize; n];
    let mut mark = vec![0usize; n];
    let mut stamp = 0usize;

    let mut l_ptr = Vec::with_capacity(n + 1);
    let mut u_ptr = Vec::with_capacity(n + 1);
    let mut l_idx = Vec::with_capacity(4 * a.nnz());
    let mut l_val = Vec::with_capacity(4 * a.nnz());
    let mut u_idx = Vec::with_capacity(4 * a.nnz());
    let mut u_val = Vec::with_capacity(4 * a.nnz());
    let mut min_pivot = f64::INFINITY;

    for k in 0..n {
        let col = q[k];
        l_ptr.push(l_idx.len());
        u_ptr.push(u_idx.len());
        let (arows, avals) = cols.row(col);

        // symbolic: reach of A(:, col) in the graph of L
        stamp += 1;
        let mut top = n;
        for &start in arows {
            if mark[start] == stamp {
                continue;
            }
            let mut head = 0usize;
            stack[0] = start;
            loop {
                let j = stack[head];
                let jnew = pinv[j];
                if mark[j] != stamp {
                    mark[j] = stamp;
                    pstack[head] = if jnew == UNSET { 0 } else { l_ptr[jnew] };
                }
                let end = if jnew == UNSET { 0 } else { l_ptr[jnew + 1] };
                let mut descended = false;
                let mut p = pstack[head];
                while p < end {
                    let i = l_idx[p];
                    p += 1;
                    if mark[i] == stamp {
                        continue;
                    }
                    pstack[head] = p;
                    head += 1;
                    stack[head] = i;
                    descended = true;
                    break;
                }
                if !descended {
                    top -= 1;
                    xi[top] = j;
                    if head == 0 {
                        break;
                    }
                    head -= 1;
                }
            }
        }

        // numeric: x = L \ A(:, col)
        for &i in &xi[top..n] {
            x[i] = zero;
        }
        for (&i, &v) in arows.iter().zip(avals) {
            x[i] = v * row_scale[i];
        }
        for px in top..n {
            let j = xi[px];
            let jnew = pinv[j];
            if jnew == UNSET {
                continue;
            }
            let xj = x[j];
            if xj == zero {
                continue;
            }
            for p in (l_ptr[jnew] + 1)..l_ptr[jnew + 1] {
                x[l_idx[p]] -= l_val[p] * xj;
            }
        }

        // pivot selection
        let mut ipiv = UNSET;
        let mut amax = -1.0f64;
        let mut unscaled_max = 0.0f64;
        for &i in &xi[top..n] {
            if pinv[i] == UNSET {
                let t = x[i].norm();
                unscaled_max = unscaled_max.max(t / row_scale[i]);
                if t > amax {
                    amax = t;
                    ipiv = i;
                }
            } else {
                u_idx.push(pinv[i]);
                u_val.push(x[i]);
            }
        }
        if ipiv == UNSET || amax <= 0.0 || unscaled_max < opts.pivot_tol {
            return Err(SolverError::SingularMatrix {
                column: col,
                pivot: unscaled_max,
                tolerance: opts.pivot_tol,
            });
        }
        if pinv[col] == UNSET && x[col].norm() >= opts.diag_threshold * amax {
            ipiv = col;
        }
        let pivot = x[ipiv];
        min_pivot = min_pivot.min(pivot.norm() / row_scale[ipiv]);
        u_idx.push(k);
        u_val.push(pivot);
        pinv[ipiv] = k;
        l_idx.push(ipiv);
        l_val.push(C64::new(1.0, 0.0));
        for &i in &xi[top..n] {
            if pinv[i] == UNSET {
                l_idx.push(i);
                l_val.push(x[i] / pivot);
            }
            x[i] = zero;
        }
    }
    l_ptr.push(l_idx.len());
    u_ptr.push(u_idx.len());
    for i in &mut l_idx {
        *i = pinv[*i];
    }

    Ok(LuFactorization {
        n,
        l_ptr,
        l_idx,
        l_val,
        u_ptr,
        u_idx,
        u_val,
        pinv,
        q,
        row_scale,
        min_pivot,
    })
}

impl LuFactorization {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored entries of `L` plus `U`.
    pub fn nnz(&self) -> usize {
        self.l_idx.len() + self.u_idx.len()
    }

    /// Smallest pivot magnitude encountered.
    pub fn min_pivot(&self) -> f64 {
        self.min_pivot
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        assert_eq!(b.len(), self.n, "lu solve: rhs has wrong length");
        let mut y = vec![C64::new(0.0, 0.0); self.n];
        for (i, &bi) in b.iter().enumerate() {
            y[self.pinv[i]] = bi * self.row_scale[i];
        }
        for j in 0..self.n {
            let yj = y[j];
            for p in (self.l_ptr[j] + 1)..self.l_ptr[j + 1] {
                y[self.l_idx[p]] -= self.l_val[p] * yj;
            }
        }
        for j in (0..self.n).rev() {
            let diag = self.u_ptr[j + 1] - 1;
            y[j] /= self.u_val[diag];
            let yj = y[j];
            for p in self.u_ptr[j]..diag {
                y[self.u_idx[p]] -= self.u_val[p] * yj;
            }
        }
        let mut x = vec![C64::new(0.0, 0.0); self.n];
        for (k, &col) in self.q.iter().enumerate() {
            x[col] = y[k];
        }
        x
    }

    /// Solves `Aᵀ x = b` (plain transpose).
    pub fn solve_transpose(&self, b: &[C64]) -> Vec<C64> {
        assert_eq!(b.len(), self.n, "lu solve_transpose: rhs has wrong length");
        let mut w: Vec<C64> = self.q.iter().map(|&c| b[c]).collect();
        for j in 0..self.n {
            let diag = self.u_ptr[j + 1] - 1;
            let mut acc = w[j];
            for p in self.u_ptr[j]..diag {
                acc -= self.u_val[p] * w[self.u_idx[p]];
            }
            w[j] = acc / self.u_val[diag];
        }
        for j in (0..self.n).rev() {
            let mut acc = w[j];
            for p in (self.l_ptr[j] + 1)..self.l_ptr[j + 1] {
                acc -= self.l_val[p] * w[self.l_idx[p]];
            }
            w[j] = acc;
        }
        self.pinv
            .iter()
            .zip(&self.row_scale)
            .map(|(&p, &r)| w[p] * r)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{relative_residual, LinearOperator};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_solves_to_rhs() {
        let a = CsrMatrix::identity(3);
        let lu = lu_factor(&a, default_pivot_tol(&a)).unwrap();
        let e1 = vec![c(1.0), c(0.0), c(0.0)];
        assert_eq!(lu.solve(&e1), e1);
    }

    #[test]
    fn exact_zero_pivot_is_singular() {
        let a = CsrMatrix::from_dense(&[vec![c(1.0), c(0.0)], vec![c(0.0), c(0.0)]]);
        let err = lu_factor(&a, 0.0).unwrap_err();
        assert!(matches!(err, SolverError::SingularMatrix { .. }));
        let err = lu_factor(&a, default_pivot_tol(&a)).unwrap_err();
        assert!(matches!(err, SolverError::SingularMatrix { .. }));
    }

    #[test]
    fn relative_tolerance_flags_tiny_pivot() {
        let a = CsrMatrix::from_dense(&[vec![c(1.0), c(0.0)], vec![c(0.0), c(1e-20)]]);
        assert!(lu_factor(&a, default_pivot_tol(&a)).is_err());
        assert!(lu_factor(&a, 0.0).is_ok());
    }

    #[test]
    fn needs_row_interchange() {
        let a = CsrMatrix::from_dense(&[
            vec![c(0.0), c(1.0), c(2.0)],
            vec![c(3.0), c(0.0), c(1.0)],
            vec![c(1.0), c(4.0), c(0.0)],
        ]);
        for ordering in [ColumnOrdering::Natural, ColumnOrdering::Rcm] {
            let opts = LuOptions {
                ordering,
                ..LuOptions::new(0.0)
            };
            let lu = lu_factor_with(&a, &opts).unwrap();
            let b = vec![c(1.0), C64::new(2.0, -1.0), c(3.0)];
            let x = lu.solve(&b);
            assert!(relative_residual(&a, &x, &b) < 1e-14);
            let xt = lu.solve_transpose(&b);
            let r = a.apply_transpose(&xt);
            let err: f64 = r.iter().zip(&b).map(|(p, q)| (p - q).norm()).sum();
            assert!(err < 1e-13);
        }
    }

    #[test]
    fn not_square_is_rejected() {
        let a = CsrMatrix::zeros(2, 3);
        assert!(matches!(
            lu_factor(&a, 0.0),
            Err(SolverError::NotSquare { .. })
        ));
    }
}
