//! Dirichlet elimination, floating-potential gluing and the conductor/insulator split.

use super::assembly::{assemble_km, assemble_source, MaterialMap};
use super::{FemError, HexMesh};
use crate::blocks::TwoBlockSystem;
use crate::numkit::{CsrMatrix, C64};

/// Dirichlet nodes with phasor (or amplitude) values and floating electrode groups.
///
/// All remaining boundary nodes carry homogeneous Neumann conditions.
#[derive(Debug, Clone, Default)]
pub struct BoundaryConditions {
    pub dirichlet: Vec<(usize, C64)>,
    pub floating: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeDof {
    Free(usize),
    Fixed(usize),
}

/// Map from mesh nodes to free unknowns and Dirichlet slots.
#[derive(Debug, Clone)]
pub struct DofMap {
    node_dof: Vec<NodeDof>,
    dof_nodes: Vec<Vec<usize>>,
    fixed_nodes: Vec<usize>,
    fixed_values: Vec<C64>,
}

impl DofMap {
    pub fn new(n_nodes: usize, bc: &BoundaryConditions) -> Result<Self, FemError> {
        const UNSET: usize = usize::MAX;
        let mut owner = vec![UNSET; n_nodes];
        let mut fixed_nodes = Vec::with_capacity(bc.dirichlet.len());
        let mut fixed_values = Vec::with_capacity(bc.dirichlet.len());
        let mut node_dof = vec![NodeDof::Free(UNSET); n_nodes];
        for &(node, value) in &bc.dirichlet {
            if node >= n_nodes {
                return Err(FemError::NodeOutOfRange { node, n_nodes });
            }
            if owner[node] != UNSET {
                return Err(FemError::DuplicateDirichlet { node });
            }
            owner[node] = 0;
            node_dof[node] = NodeDof::Fixed(fixed_nodes.len());
            fixed_nodes.push(node);
            fixed_values.push(value);
        }
        for (g, group) in bc.floating.iter().enumerate() {
            if group.is_empty() {
                return Err(FemError::EmptyGroup { group: g });
            }
            for &node in group {
                if node >= n_nodes {
                    return Err(FemError::NodeOutOfRange { node, n_nodes });
                }
                match owner[node] {
                    UNSET => owner[node] = g + 1,
                    0 => return Err(FemError::FloatingTouchesDirichlet { group: g, node }),
                    _ => return Err(FemError::OverlappingGroups { node }),
                }
            }
        }

        let mut dof_nodes: Vec<Vec<usize>> = Vec::new();
        let mut group_dof = vec![UNSET; bc.floating.len()];
        for node in 0..n_nodes {
            match owner[node] {
                0 => {}
                UNSET => {
                    node_dof[node] = NodeDof::Free(dof_nodes.len());
                    dof_nodes.push(vec![node]);
                }
                g1 => {
                    let g = g1 - 1;
                    if group_dof[g] == UNSET {
                        group_dof[g] = dof_nodes.len();
                        dof_nodes.push(Vec::new());
                    }
                    node_dof[node] = NodeDof::Free(group_dof[g]);
                    dof_nodes[group_dof[g]].push(node);
                }
            }
        }
        Ok(Self {
            node_dof,
            dof_nodes,
            fixed_nodes,
            fixed_values,
        })
    }

    pub fn n_free(&self) -> usize {
        self.dof_nodes.len()
    }

    pub fn n_fixed(&self) -> usize {
        self.fixed_nodes.len()
    }

    pub fn node_dof(&self, node: usize) -> NodeDof {
        self.node_dof[node]
    }

    /// Nodes represented by free unknown `dof`.
    pub fn dof_nodes(&self, dof: usize) -> &[usize] {
        &self.dof_nodes[dof]
    }

    pub fn fixed_nodes(&self) -> &[usize] {
        &self.fixed_nodes
    }

    pub fn fixed_values(&self) -> &[C64] {
        &self.fixed_values
    }

    /// Node values from free unknowns and Dirichlet values multiplied by `scale`.
    pub fn expand(&self, free: &[C64], scale: C64) -> Vec<C64> {
        self.node_dof
            .iter()
            .map(|d| match *d {
                NodeDof::Free(i) => free[i],
                NodeDof::Fixed(k) => self.fixed_values[k] * scale,
            })
            .collect()
    }

    /// Sums node-level vector entries into free unknowns.
    pub fn restrict(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.n_free()];
        for (node, d) in self.node_dof.iter().enumerate() {
            if let NodeDof::Free(i) = *d {
                out[i] += v[node];
            }
        }
        out
    }

    /// Splits a node-level matrix into the free/free and free/fixed blocks.
    pub fn reduce(&self, a: &CsrMatrix) -> (CsrMatrix, CsrMatrix) {
        let nf = self.n_free();
        let mut ff = Vec::with_capacity(a.nnz());
        let mut fd = Vec::new();
        for (i, j, v) in a.triplets() {
            if let NodeDof::Free(r) = self.node_dof[i] {
                match self.node_dof[j] {
                    NodeDof::Free(c) => ff.push((r, c, v)),
                    NodeDof::Fixed(c) => fd.push((r, c, v)),
                }
            }
        }
        let ff = CsrMatrix::from_triplets(nf, nf, &ff).expect("dof indices in range");
        let fd = CsrMatrix::from_triplets(nf, self.n_fixed(), &fd).expect("dof indices in range");
        (symmetrize(&ff), fd)
    }
}

/// Averages `A` and `Aᵀ` entrywise so that gluing does not leave round-off asymmetry.
fn symmetrize(a: &CsrMatrix) -> CsrMatrix {
    let at = a.transpose();
    a.map_entries(|i, j, v| (v + at.get(i, j)) * 0.5)
}

/// Result of gluing floating electrode groups.
#[derive(Debug, Clone)]
pub struct GluedSystem {
    pub k: CsrMatrix,
    pub m: CsrMatrix,
    pub r: Vec<C64>,
    pub map: DofMap,
}

/// Sums the rows and columns of each group into one unknown.
pub fn apply_floating_potentials(
    k: &CsrMatrix,
    m: &CsrMatrix,
    r: &[C64],
    groups: &[Vec<usize>],
) -> Result<GluedSystem, FemError> {
    let bc = BoundaryConditions {
        dirichlet: Vec::new(),
        floating: groups.to_vec(),
    };
    let map = DofMap::new(k.nrows(), &bc)?;
    Ok(GluedSystem {
        k: map.reduce(k).0,
        m: map.reduce(m).0,
        r: map.restrict(r),
        map,
    })
}

/// Assembled field model reduced to free unknowns.
#[derive(Debug, Clone)]
pub struct FemSystem {
    pub mesh: HexMesh,
    pub materials: MaterialMap,
    pub dofs: DofMap,
    pub k: CsrMatrix,
    pub m: CsrMatrix,
    pub k_fd: CsrMatrix,
    pub m_fd: CsrMatrix,
    /// Impressed-current contribution on the free unknowns.
    pub r_src: Vec<C64>,
}

impl FemSystem {
    pub fn new(
        mesh: HexMesh,
        materials: MaterialMap,
        bc: &BoundaryConditions,
        j_src: Option<&[[f64; 3]]>,
    ) -> Result<Self, FemError> {
        let (k_full, m_full) = assemble_km(&mesh, &materials)?;
        let dofs = DofMap::new(mesh.n_nodes(), bc)?;
        let (k, k_fd) = dofs.reduce(&k_full);
        let (m, m_fd) = dofs.reduce(&m_full);
        let r_src = match j_src {
            Some(j) => dofs.restrict(&assemble_source(&mesh, j)?),
            None => vec![C64::new(0.0, 0.0); dofs.n_free()],
        };
        Ok(Self {
            mesh,
            materials,
            dofs,
            k,
            m,
            k_fd,
            m_fd,
            r_src,
        })
    }

    /// Right-hand side split as `r0 + s·rs` for Dirichlet data `g`.
    ///
    /// `r0 = r_src − K_fd g`, `rs = −M_fd g`.
    pub fn rhs_parts(&self, g: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let kg = self.k_fd.mul_vec(g);
        let mg = self.m_fd.mul_vec(g);
        let r0 = self.r_src.iter().zip(&kg).map(|(a, b)| a - b).collect();
        let rs = mg.iter().map(|v| -v).collect();
        (r0, rs)
    }

    /// Full right-hand side `r_src − (K_fd + s·M_fd) g` at the stored Dirichlet values.
    pub fn assemble_rhs(&self, s: C64) -> Vec<C64> {
        let (r0, rs) = self.rhs_parts(self.dofs.fixed_values());
        r0.iter().zip(&rs).map(|(a, b)| a + s * b).collect()
    }

    /// Free unknowns whose basis support touches a conducting element.
    pub fn conducting_dofs(&self) -> Vec<bool> {
        let mut out = vec![false; self.dofs.n_free()];
        for (dof, flag) in out.iter_mut().enumerate() {
            *flag = self.dofs.dof_nodes(dof).iter().any(|&n| {
                self.mesh
                    .node_elements(n)
                    .into_iter()
                    .any(|e| self.materials.conducts(&self.mesh, e))
            });
        }
        out
    }

    /// `I2` holds unknowns supported entirely in insulators, `I1` the rest
    /// (interface unknowns included).
    pub fn partition(&self) -> TwoBlockSystem {
        let cond = self.conducting_dofs();
        let i1 = (0..cond.len()).filter(|&i| cond[i]).collect();
        let i2 = (0..cond.len()).filter(|&i| !cond[i]).collect();
        let (r0, rs) = self.rhs_parts(self.dofs.fixed_values());
        TwoBlockSystem::from_operators(&self.k, &self.m, &r0, &rs, i1, i2)
    }

    /// Node values from a free-unknown vector, Dirichlet values scaled by `scale`.
    pub fn node_values(&self, free: &[C64], scale: C64) -> Vec<C64> {
        self.dofs.expand(free, scale)
    }
}
