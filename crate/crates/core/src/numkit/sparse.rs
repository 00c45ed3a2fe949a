//! Compressed sparse row storage for complex matrices.

use num_complex::Complex64 as C64;

use super::SolverError;

/// Complex CSR matrix.
///
/// Column indices are strictly increasing within each row, so every
/// `(row, col)` position appears at most once. Explicit zeros are allowed
/// and are kept by every structural operation.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<C64>,
}

impl CsrMatrix {
    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        entries: &[(usize, usize, C64)],
    ) -> Result<Self, SolverError> {
        for &(r, c, _) in entries {
            if r >= nrows || c >= ncols {
                return Err(SolverError::IndexOutOfRange {
                    row: r,
                    col: c,
                    nrows,
                    ncols,
                });
            }
        }
        let mut counts = vec![0usize; nrows + 1];
        for &(r, _, _) in entries {
            counts[r + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; entries.len()];
        let mut vals = vec![C64::new(0.0, 0.0); entries.len()];
        for &(r, c, v) in entries {
            let k = next[r];
            cols[k] = c;
            vals[k] = v;
            next[r] += 1;
        }

        let mut row_offsets = Vec::with_capacity(nrows + 1);
        let mut col_indices = Vec::with_capacity(entries.len());
        let mut values = Vec::with_capacity(entries.len());
        row_offsets.push(0);
        let mut scratch: Vec<(usize, C64)> = Vec::new();
        for i in 0..nrows {
            scratch.clear();
            scratch.extend((counts[i]..counts[i + 1]).map(|k| (cols[k], vals[k])));
            // stable sort keeps insertion order of duplicates, so summation order is fixed
            scratch.sort_by_key(|&(c, _)| c);
            let mut iter = scratch.iter();
            if let Some(&(c0, v0)) = iter.next() {
                let mut cur_c = c0;
                let mut cur_v = v0;
                for &(c, v) in iter {
                    if c == cur_c {
                        cur_v += v;
                    } else {
                        col_indices.push(cur_c);
                        values.push(cur_v);
                        cur_c = c;
                        cur_v = v;
                    }
                }
                col_indices.push(cur_c);
                values.push(cur_v);
            }
            row_offsets.push(col_indices.len());
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Builds a matrix from raw CSR arrays, checking every structural invariant.
    pub fn from_raw(
        nrows: usize,
        ncols: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<C64>,
    ) -> Result<Self, SolverError> {
        let bad = |what: &str| SolverError::InvalidStructure(what.to_string());
        if row_offsets.len() != nrows + 1 || row_offsets[0] != 0 {
            return Err(bad("row_offsets must have length nrows + 1 and start at 0"));
        }
        if *row_offsets.last().unwrap() != col_indices.len() || col_indices.len() != values.len() {
            return Err(bad("row_offsets, col_indices and values disagree in length"));
        }
        for i in 0..nrows {
            if row_offsets[i] > row_offsets[i + 1] {
                return Err(bad("row_offsets must be monotone"));
            }
            let cols = &col_indices[row_offsets[i]..row_offsets[i + 1]];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(bad("column indices must be strictly increasing within a row"));
            }
            if let Some(&c) = cols.last() {
                if c >= ncols {
                    return Err(SolverError::IndexOutOfRange {
                        row: i,
                        col: c,
                        nrows,
                        ncols,
                    });
                }
            }
        }
        Ok(Self {
            nrows,
            ncols,
            row_offsets,
            col_indices,
            values,
        })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            row_offsets: vec![0; nrows + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self {
            nrows: n,
            ncols: n,
            row_offsets: (0..=n).collect(),
            col_indices: (0..n).collect(),
            values: diag.to_vec(),
        }
    }

    /// Builds a matrix from dense rows, storing every nonzero entry.
    pub fn from_dense(rows: &[Vec<C64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut trip = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            for (j, &v) in row.iter().enumerate() {
                if v != C64::new(0.0, 0.0) {
                    trip.push((i, j, v));
                }
            }
        }
        Self::from_triplets(nrows, ncols, &trip).expect("indices in range by construction")
    }

    pub fn to_dense(&self) -> Vec<Vec<C64>> {
        let mut out = vec![vec![C64::new(0.0, 0.0); self.ncols]; self.nrows];
        for (i, row) in out.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                row[c] = v;
            }
        }
        out
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[C64]) {
        let (s, e) = (self.row_offsets[i], self.row_offsets[i + 1]);
        (&self.col_indices[s..e], &self.values[s..e])
    }

    /// Iterates all stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&c, &v)| (i, c, v))
        })
    }

    /// Stored value at `(i, j)`, zero when the position is not stored.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.nrows];
        self.mul_vec_into(x, &mut y);
        y
    }

    pub fn mul_vec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.ncols, "mul_vec: x has wrong length");
        assert_eq!(y.len(), self.nrows, "mul_vec: y has wrong length");
        for (i, yi) in y.iter_mut().enumerate() {
            let (cols, vals) = self.row(i);
            let mut acc = C64::new(0.0, 0.0);
            for (&c, &v) in cols.iter().zip(vals) {
                acc += v * x[c];
            }
            *yi = acc;
        }
    }

    /// `Aᵀ x` without materializing the transpose.
    pub fn mul_vec_transpose(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.nrows, "mul_vec_transpose: x has wrong length");
        let mut y = vec![C64::new(0.0, 0.0); self.ncols];
        for (i, &xi) in x.iter().enumerate() {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                y[c] += v * xi;
            }
        }
        y
    }

    /// Materialized transpose (not conjugated).
    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.col_indices {
            counts[c + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let mut next = counts.clone();
        let mut col_indices = vec![0usize; self.nnz()];
        let mut values = vec![C64::new(0.0, 0.0); self.nnz()];
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (&c, &v) in cols.iter().zip(vals) {
                let k = next[c];
                col_indices[k] = i;
                values[k] = v;
                next[c] += 1;
            }
        }
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            row_offsets: counts,
            col_indices,
            values,
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|i| self.row(i).1.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        let mut sums = vec![0.0; self.ncols];
        for (&c, v) in self.col_indices.iter().zip(&self.values) {
            sums[c] += v.norm();
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Absolute sum of row `i`.
    pub fn row_abs_sum(&self, i: usize) -> f64 {
        self.row(i).1.iter().map(|v| v.norm()).sum()
    }

    /// Extracts `A[rows, cols]`; `cols` must not contain duplicates.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut col_map = vec![usize::MAX; self.ncols];
        for (k, &c) in cols.iter().enumerate() {
            col_map[c] = k;
        }
        let mut row_offsets = Vec::with_capacity(rows.len() + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        let mut scratch: Vec<(usize, C64)> = Vec::new();
        for &r in rows {
            scratch.clear();
            let (rc, rv) = self.row(r);
            for (&c, &v) in rc.iter().zip(rv) {
                let m = col_map[c];
                if m != usize::MAX {
                    scratch.push((m, v));
                }
            }
            scratch.sort_by_key(|&(c, _)| c);
            for &(c, v) in &scratch {
                col_indices.push(c);
                values.push(v);
            }
            row_offsets.push(col_indices.len());
        }
        Self {
            nrows: rows.len(),
            ncols: cols.len(),
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Symmetric permutation `B[i, j] = A[perm[i], perm[j]]`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Self {
        assert!(self.is_square());
        self.submatrix(perm, perm)
    }

    /// Applies `f(row, col, value)` to every stored entry.
    pub fn map_entries(&self, mut f: impl FnMut(usize, usize, C64) -> C64) -> Self {
        let mut out = self.clone();
        for i in 0..self.nrows {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                out.values[k] = f(i, self.col_indices[k], self.values[k]);
            }
        }
        out
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        self.map_entries(|_, _, v| v * alpha)
    }

    /// `alpha·A + beta·B` on the union pattern.
    pub fn lincomb(alpha: C64, a: &Self, beta: C64, b: &Self) -> Self {
        assert_eq!((a.nrows, a.ncols), (b.nrows, b.ncols), "lincomb: shape mismatch");
        let mut row_offsets = Vec::with_capacity(a.nrows + 1);
        let mut col_indices = Vec::with_capacity(a.nnz().max(b.nnz()));
        let mut values = Vec::with_capacity(a.nnz().max(b.nnz()));
        row_offsets.push(0);
        for i in 0..a.nrows {
            let (ac, av) = a.row(i);
            let (bc, bv) = b.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ac.len() || q < bc.len() {
                let ca = ac.get(p).copied().unwrap_or(usize::MAX);
                let cb = bc.get(q).copied().unwrap_or(usize::MAX);
                if ca < cb {
                    col_indices.push(ca);
                    values.push(alpha * av[p]);
                    p += 1;
                } else if cb < ca {
                    col_indices.push(cb);
                    values.push(beta * bv[q]);
                    q += 1;
                } else {
                    col_indices.push(ca);
                    values.push(alpha * av[p] + beta * bv[q]);
                    p += 1;
                    q += 1;
                }
            }
            row_offsets.push(col_indices.len());
        }
        Self {
            nrows: a.nrows,
            ncols: a.ncols,
            row_offsets,
            col_indices,
            values,
        }
    }

    /// Bitwise check `A == Aᵀ` (complex symmetric, not Hermitian).
    pub fn is_symmetric_exact(&self) -> bool {
        self.is_square() && self.triplets().all(|(i, j, v)| self.get(j, i) == v)
    }

    /// `max |A - Aᵀ|` entrywise.
    pub fn asymmetry(&self) -> f64 {
        self.triplets()
            .map(|(i, j, v)| (v - self.get(j, i)).norm())
            .fold(0.0, f64::max)
    }

    /// True when all stored values of row `i` are exactly zero.
    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).1.iter().all(|v| *v == C64::new(0.0, 0.0))
    }

    /// Drops entries that are exactly zero.
    pub fn pruned(&self) -> Self {
        let trip: Vec<_> = self
            .triplets()
            .filter(|&(_, _, v)| v != C64::new(0.0, 0.0))
            .collect();
        Self::from_triplets(self.nrows, self.ncols, &trip).expect("indices already valid")
    }
}

/// Euclidean norm of a complex vector.
pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Relative residual `‖Ax − b‖₂ / ‖b‖₂` (absolute when `b = 0`).
pub fn relative_residual(a: &CsrMatrix, x: &[C64], b: &[C64]) -> f64 {
    let ax = a.mul_vec(x);
    let r: Vec<C64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    let nb = norm2(b);
    if nb == 0.0 {
        norm2(&r)
    } else {
        norm2(&r) / nb
    }
}
