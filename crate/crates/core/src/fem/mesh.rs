use super::FemError;

/// Corner offsets of the local node ordering.
pub const LOCAL_CORNERS: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

/// Axis-aligned structured grid of bricks with one region tag per element.
///
/// Nodes are numbered with `x` running fastest, then `y`, then `z`.
#[derive(Debug, Clone)]
pub struct HexMesh {
    axes: [Vec<f64>; 3],
    regions: Vec<usize>,
}

fn check_axis(axis: &[f64]) -> Result<(), FemError> {
    if axis.len() < 2 {
        return Err(FemError::InvalidMesh("each axis needs at least one division".into()));
    }
    if axis.iter().any(|v| !v.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FemError::InvalidMesh("grid coordinates must increase strictly".into()));
    }
    Ok(())
}

impl HexMesh {
    /// Grid from explicit coordinates per axis. Each element receives the tag
    /// of its centroid; elements whose interior is not uniformly tagged are
    /// rejected.
    pub fn from_axes(
        axes: [Vec<f64>; 3],
        region_rule: impl Fn([f64; 3]) -> usize,
    ) -> Result<Self, FemError> {
        for a in &axes {
            check_axis(a)?;
        }
        let mut mesh = Self {
            axes,
            regions: Vec::new(),
        };
        let ne = mesh.n_elements();
        let mut regions = Vec::with_capacity(ne);
        for e in 0..ne {
            let [i, j, k] = mesh.element_ijk(e);
            let lo = [mesh.axes[0][i], mesh.axes[1][j], mesh.axes[2][k]];
            let hi = [mesh.axes[0][i + 1], mesh.axes[1][j + 1], mesh.axes[2][k + 1]];
            let at = |t: [f64; 3]| -> [f64; 3] {
                [0, 1, 2].map(|d| lo[d] + t[d] * (hi[d] - lo[d]))
            };
            let tag = region_rule(at([0.5; 3]));
            for c in LOCAL_CORNERS {
                let t = c.map(|b| if b == 0 { 0.25 } else { 0.75 });
                if region_rule(at(t)) != tag {
                    return Err(FemError::MisalignedInterface { element: e });
                }
            }
            regions.push(tag);
        }
        mesh.regions = regions;
        Ok(mesh)
    }

    pub fn divisions(&self) -> [usize; 3] {
        [0, 1, 2].map(|d| self.axes[d].len() - 1)
    }

    pub fn axis(&self, d: usize) -> &[f64] {
        &self.axes[d]
    }

    pub fn n_nodes(&self) -> usize {
        self.axes.iter().map(Vec::len).product()
    }

    pub fn n_elements(&self) -> usize {
        self.divisions().iter().product()
    }

    pub fn node_index(&self, i: usize, j: usize, k: usize) -> usize {
        let nx = self.axes[0].len();
        let ny = self.axes[1].len();
        i + nx * (j + ny * k)
    }

    pub fn node_ijk(&self, n: usize) -> [usize; 3] {
        let nx = self.axes[0].len();
        let ny = self.axes[1].len();
        [n % nx, (n / nx) % ny, n / (nx * ny)]
    }

    pub fn node_coords(&self, n: usize) -> [f64; 3] {
        let [i, j, k] = self.node_ijk(n);
        [self.axes[0][i], self.axes[1][j], self.axes[2][k]]
    }

    pub fn element_ijk(&self, e: usize) -> [usize; 3] {
        let [ex, ey, _] = self.divisions();
        [e % ex, (e / ex) % ey, e / (ex * ey)]
    }

    pub fn element_nodes(&self, e: usize) -> [usize; 8] {
        let [i, j, k] = self.element_ijk(e);
        LOCAL_CORNERS.map(|c| self.node_index(i + c[0], j + c[1], k + c[2]))
    }

    pub fn element_sizes(&self, e: usize) -> [f64; 3] {
        let ijk = self.element_ijk(e);
        [0, 1, 2].map(|d| self.axes[d][ijk[d] + 1] - self.axes[d][ijk[d]])
    }

    pub fn element_centroid(&self, e: usize) -> [f64; 3] {
        let ijk = self.element_ijk(e);
        [0, 1, 2].map(|d| 0.5 * (self.axes[d][ijk[d] + 1] + self.axes[d][ijk[d]]))
    }

    /// Product of the half edge lengths, the Jacobian determinant of the brick map.
    pub fn jacobian_det(&self, e: usize) -> f64 {
        self.element_sizes(e).iter().map(|h| 0.5 * h).product()
    }

    pub fn region(&self, e: usize) -> usize {
        self.regions[e]
    }

    pub fn regions(&self) -> &[usize] {
        &self.regions
    }

    /// Elements sharing node `n`.
    pub fn node_elements(&self, n: usize) -> Vec<usize> {
        let [ex, ey, ez] = self.divisions();
        let ijk = self.node_ijk(n);
        let mut out = Vec::with_capacity(8);
        let range = |c: usize, max: usize| c.saturating_sub(1)..c.min(max - 1) + 1;
        for k in range(ijk[2], ez) {
            for j in range(ijk[1], ey) {
                for i in range(ijk[0], ex) {
                    out.push(i + ex * (j + ey * k));
                }
            }
        }
        out
    }

    /// Nodes whose coordinates satisfy `pred`.
    pub fn nodes_where(&self, pred: impl Fn([f64; 3]) -> bool) -> Vec<usize> {
        (0..self.n_nodes()).filter(|&n| pred(self.node_coords(n))).collect()
    }

    /// Nodes on the lower (`upper = false`) or upper face normal to `axis`.
    pub fn face_nodes(&self, axis: usize, upper: bool) -> Vec<usize> {
        let target = if upper { self.axes[axis].len() - 1 } else { 0 };
        (0..self.n_nodes())
            .filter(|&n| self.node_ijk(n)[axis] == target)
            .collect()
    }
}

/// Uniform grid on `[0, lx] × [0, ly] × [0, lz]`.
pub fn build_box_mesh(
    lengths: [f64; 3],
    divisions: [usize; 3],
    region_rule: impl Fn([f64; 3]) -> usize,
) -> Result<HexMesh, FemError> {
    if lengths.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
        return Err(FemError::InvalidMesh("box lengths must be positive".into()));
    }
    if divisions.contains(&0) {
        return Err(FemError::InvalidMesh("divisions must be at least 1".into()));
    }
    let axes = [0, 1, 2].map(|d| {
        (0..=divisions[d])
            .map(|i| lengths[d] * i as f64 / divisions[d] as f64)
            .collect::<Vec<_>>()
    });
    HexMesh::from_axes(axes, region_rule)
}
