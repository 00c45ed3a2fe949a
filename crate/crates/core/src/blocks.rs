//! Conductor/insulator two-block form shared by the circuit and field models.
//!
//! Both models reduce to `(K + s·M) x = r0 + s·rs` where `s = jω` in the
//! frequency domain and `s = 1/δt` for an implicit Euler step. After
//! reordering the unknowns into a conducting set `I1` and a purely capacitive
//! set `I2` the conductivity operator only has a `K11` block.

use crate::numkit::{CsrMatrix, C64};

/// Multipliers for the blocks of the partitioned operator.
///
/// The assembled matrix is
/// `[[k11·K11 + m11·M11, m12·M12], [m21·M12ᵀ, m22·M22]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockCoefficients {
    pub k11: C64,
    pub m11: C64,
    pub m12: C64,
    pub m21: C64,
    pub m22: C64,
}

#[derive(Debug, Clone)]
pub struct TwoBlockSystem {
    pub k11: CsrMatrix,
    pub m11: CsrMatrix,
    pub m12: CsrMatrix,
    pub m22: CsrMatrix,
    /// Frequency independent part of the right-hand side, block 1.
    pub r1: Vec<C64>,
    pub r2: Vec<C64>,
    /// Part of the right-hand side proportional to `s`, block 1.
    pub r1_s: Vec<C64>,
    pub r2_s: Vec<C64>,
    /// Positions of the block-1 unknowns in the unpartitioned numbering.
    pub i1: Vec<usize>,
    pub i2: Vec<usize>,
}

fn gather(v: &[C64], idx: &[usize]) -> Vec<C64> {
    idx.iter().map(|&i| v[i]).collect()
}

impl TwoBlockSystem {
    /// Extracts the blocks of `K`, `M`, `r0`, `rs` for the given index sets.
    ///
    /// Entries of `K` coupling to `i2` are discarded; callers choose `i2` so
    /// that they are exactly zero.
    pub fn from_operators(
        k: &CsrMatrix,
        m: &CsrMatrix,
        r0: &[C64],
        rs: &[C64],
        i1: Vec<usize>,
        i2: Vec<usize>,
    ) -> Self {
        let n = k.nrows();
        assert_eq!(i1.len() + i2.len(), n, "index sets must cover every unknown");
        Self {
            k11: k.submatrix(&i1, &i1),
            m11: m.submatrix(&i1, &i1),
            m12: m.submatrix(&i1, &i2),
            m22: m.submatrix(&i2, &i2),
            r1: gather(r0, &i1),
            r2: gather(r0, &i2),
            r1_s: gather(rs, &i1),
            r2_s: gather(rs, &i2),
            i1,
            i2,
        }
    }

    /// Puts every unknown whose row and column of `K` hold only zeros into `I2`.
    pub fn split_by_conductivity(k: &CsrMatrix, m: &CsrMatrix, r0: &[C64], rs: &[C64]) -> Self {
        let n = k.nrows();
        let mut active = vec![false; n];
        for (i, j, v) in k.triplets() {
            if v != C64::new(0.0, 0.0) {
                active[i] = true;
                active[j] = true;
            }
        }
        let i1 = (0..n).filter(|&i| active[i]).collect();
        let i2 = (0..n).filter(|&i| !active[i]).collect();
        Self::from_operators(k, m, r0, rs, i1, i2)
    }

    pub fn n1(&self) -> usize {
        self.i1.len()
    }

    pub fn n2(&self) -> usize {
        self.i2.len()
    }

    pub fn dim(&self) -> usize {
        self.n1() + self.n2()
    }

    /// Block-ordered copy of a vector in the unpartitioned numbering.
    pub fn to_block_order(&self, v: &[C64]) -> Vec<C64> {
        let mut out = gather(v, &self.i1);
        out.extend(gather(v, &self.i2));
        out
    }

    /// Inverse of [`Self::to_block_order`].
    pub fn from_block_order(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (p, &i) in self.i1.iter().chain(&self.i2).enumerate() {
            out[i] = v[p];
        }
        out
    }

    /// Assembles the block matrix for the given multipliers.
    pub fn matrix(&self, c: &BlockCoefficients) -> CsrMatrix {
        let n1 = self.n1();
        let n = self.dim();
        let zero = C64::new(0.0, 0.0);
        let mut trip = Vec::with_capacity(
            self.k11.nnz() + self.m11.nnz() + 2 * self.m12.nnz() + self.m22.nnz(),
        );
        let upper = CsrMatrix::lincomb(c.k11, &self.k11, c.m11, &self.m11);
        trip.extend(upper.triplets());
        if c.m12 != zero {
            trip.extend(self.m12.triplets().map(|(i, j, v)| (i, n1 + j, c.m12 * v)));
        }
        if c.m21 != zero {
            trip.extend(self.m12.triplets().map(|(i, j, v)| (n1 + j, i, c.m21 * v)));
        }
        trip.extend(self.m22.triplets().map(|(i, j, v)| (n1 + i, n1 + j, c.m22 * v)));
        CsrMatrix::from_triplets(n, n, &trip).expect("block indices in range")
    }

    /// Unscaled operator `K + s·M` in block order.
    pub fn original_matrix(&self, s: C64) -> CsrMatrix {
        let one = C64::new(1.0, 0.0);
        self.matrix(&BlockCoefficients {
            k11: one,
            m11: s,
            m12: s,
            m21: s,
            m22: s,
        })
    }

    /// Unscaled right-hand side `r0 + s·rs` in block order.
    pub fn original_rhs(&self, s: C64) -> Vec<C64> {
        let mut out: Vec<C64> = self.r1.iter().zip(&self.r1_s).map(|(a, b)| a + s * b).collect();
        out.extend(self.r2.iter().zip(&self.r2_s).map(|(a, b)| a + s * b));
        out
    }
}
