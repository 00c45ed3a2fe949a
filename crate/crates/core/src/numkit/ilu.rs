use super::{CsrMatrix, SolverError, C64};

/// ILU(0) factors stored in one CSR array with the pattern of the input:
/// strictly lower entries belong to the unit lower factor `L`, the diagonal
/// and upper entries to `U`.
#[derive(Debug, Clone)]
pub struct Ilu0Preconditioner {
    factors: CsrMatrix,
    diag_pos: Vec<usize>,
}

/// Incomplete LU without fill-in.
pub fn ilu0(a: &CsrMatrix) -> Result<Ilu0Preconditioner, SolverError> {
    if !a.is_square() {
        return Err(SolverError::NotSquare {
            nrows: a.nrows(),
            ncols: a.ncols(),
        });
    }
    let n = a.nrows();
    let zero = C64::new(0.0, 0.0);
    let offsets = a.row_offsets().to_vec();
    let cols = a.col_indices().to_vec();
    let mut vals = a.values().to_vec();

    let mut diag_pos = Vec::with_capacity(n);
    for i in 0..n {
        let row = &cols[offsets[i]..offsets[i + 1]];
        match row.binary_search(&i) {
            Ok(k) if vals[offsets[i] + k] != zero => diag_pos.push(offsets[i] + k),
            _ => return Err(SolverError::ZeroDiagonal { row: i }),
        }
    }

    let mut pos = vec![usize::MAX; n];
    for i in 0..n {
        for k in offsets[i]..offsets[i + 1] {
            pos[cols[k]] = k;
        }
        for kk in offsets[i]..diag_pos[i] {
            let k = cols[kk];
            let pivot = vals[diag_pos[k]];
            if pivot == zero {
                return Err(SolverError::ZeroPivot { row: k });
            }
            let lik = vals[kk] / pivot;
            vals[kk] = lik;
            for kj in (diag_pos[k] + 1)..offsets[k + 1] {
                let p = pos[cols[kj]];
                if p != usize::MAX {
                    let ukj = vals[kj];
                    vals[p] -= lik * ukj;
                }
            }
        }
        if vals[diag_pos[i]] == zero {
            return Err(SolverError::ZeroPivot { row: i });
        }
        for k in offsets[i]..offsets[i + 1] {
            pos[cols[k]] = usize::MAX;
        }
    }

    let factors = CsrMatrix::from_raw(n, n, offsets, cols, vals)?;
    Ok(Ilu0Preconditioner { factors, diag_pos })
}

impl Ilu0Preconditioner {
    pub fn dim(&self) -> usize {
        self.factors.nrows()
    }

    /// Combined factor storage (strict lower part is `L`, the rest is `U`).
    pub fn factors(&self) -> &CsrMatrix {
        &self.factors
    }

    /// Unit lower factor as a standalone matrix.
    pub fn l_factor(&self) -> CsrMatrix {
        let n = self.dim();
        let mut trip = Vec::new();
        for (i, j, v) in self.factors.triplets() {
            if j < i {
                trip.push((i, j, v));
            }
        }
        trip.extend((0..n).map(|i| (i, i, C64::new(1.0, 0.0))));
        CsrMatrix::from_triplets(n, n, &trip).expect("indices in range")
    }

    pub fn u_factor(&self) -> CsrMatrix {
        let n = self.dim();
        let trip: Vec<_> = self.factors.triplets().filter(|&(i, j, _)| j >= i).collect();
        CsrMatrix::from_triplets(n, n, &trip).expect("indices in range")
    }

    /// Solves `L U z = r`.
    pub fn solve(&self, r: &[C64]) -> Vec<C64> {
        let n = self.dim();
        assert_eq!(r.len(), n);
        let off = self.factors.row_offsets();
        let cols = self.factors.col_indices();
        let vals = self.factors.values();
        let mut z = r.to_vec();
        for i in 0..n {
            let mut acc = z[i];
            for k in off[i]..self.diag_pos[i] {
                acc -= vals[k] * z[cols[k]];
            }
            z[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = z[i];
            for k in (self.diag_pos[i] + 1)..off[i + 1] {
                acc -= vals[k] * z[cols[k]];
            }
            z[i] = acc / vals[self.diag_pos[i]];
        }
        z
    }

    /// Solves `(L U)ᵀ z = r`.
    pub fn solve_transpose(&self, r: &[C64]) -> Vec<C64> {
        let n = self.dim();
        assert_eq!(r.len(), n);
        let off = self.factors.row_offsets();
        let cols = self.factors.col_indices();
        let vals = self.factors.values();
        let mut w = r.to_vec();
        // Uᵀ is lower triangular: column sweep over rows of U
        for i in 0..n {
            w[i] /= vals[self.diag_pos[i]];
            let wi = w[i];
            for k in (self.diag_pos[i] + 1)..off[i + 1] {
                w[cols[k]] -= vals[k] * wi;
            }
        }
        for i in (0..n).rev() {
            let wi = w[i];
            for k in off[i]..self.diag_pos[i] {
                w[cols[k]] -= vals[k] * wi;
            }
        }
        w
    }

    /// `(L U) x`, the matrix the preconditioner approximates.
    pub fn multiply(&self, x: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let off = self.factors.row_offsets();
        let cols = self.factors.col_indices();
        let vals = self.factors.values();
        let mut y = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.diag_pos[i]..off[i + 1] {
                acc += vals[k] * x[cols[k]];
            }
            y[i] = acc;
        }
        let mut z = y.clone();
        for i in 0..n {
            for k in off[i]..self.diag_pos[i] {
                z[i] += vals[k] * y[cols[k]];
            }
        }
        z
    }

    /// `(L U)ᵀ x`.
    pub fn multiply_transpose(&self, x: &[C64]) -> Vec<C64> {
        let n = self.dim();
        let off = self.factors.row_offsets();
        let cols = self.factors.col_indices();
        let vals = self.factors.values();
        // Lᵀ x
        let mut y = x.to_vec();
        for i in 0..n {
            for k in off[i]..self.diag_pos[i] {
                y[cols[k]] += vals[k] * x[i];
            }
        }
        // Uᵀ y
        let mut z = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            for k in self.diag_pos[i]..off[i + 1] {
                z[cols[k]] += vals[k] * y[i];
            }
        }
        z
    }
}
