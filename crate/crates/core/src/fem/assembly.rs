use std::collections::HashMap;

use super::element::{element_gradient_integrals, element_gradient_matrix};
use super::{FemError, HexMesh};
use crate::numkit::{CsrMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    /// Conductivity in S/m.
    pub sigma: f64,
    /// Permittivity in F/m.
    pub eps: f64,
}

/// Material parameters indexed by region tag.
#[derive(Debug, Clone)]
pub struct MaterialMap {
    regions: Vec<Material>,
}

impl MaterialMap {
    pub fn new(regions: Vec<Material>) -> Result<Self, FemError> {
        for (tag, m) in regions.iter().enumerate() {
            if !(m.eps > 0.0 && m.eps.is_finite()) || !(m.sigma >= 0.0 && m.sigma.is_finite()) {
                return Err(FemError::InvalidMaterial { region: tag });
            }
        }
        Ok(Self { regions })
    }

    pub fn get(&self, tag: usize) -> Option<&Material> {
        self.regions.get(tag)
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub(crate) fn of_element(&self, mesh: &HexMesh, e: usize) -> Result<Material, FemError> {
        let tag = mesh.region(e);
        self.get(tag)
            .copied()
            .ok_or(FemError::MaterialMismatch { region: tag })
    }

    /// True when element `e` conducts.
    pub fn conducts(&self, mesh: &HexMesh, e: usize) -> bool {
        self.get(mesh.region(e)).is_some_and(|m| m.sigma > 0.0)
    }
}

fn size_key(h: [f64; 3]) -> [u64; 3] {
    h.map(f64::to_bits)
}

/// Node-level conductivity and permittivity matrices.
///
/// Insulating elements contribute nothing to `K`, so its entries on purely
/// insulating supports are structural zeros.
pub fn assemble_km(mesh: &HexMesh, materials: &MaterialMap) -> Result<(CsrMatrix, CsrMatrix), FemError> {
    let n = mesh.n_nodes();
    let mut cache: HashMap<[u64; 3], [[f64; 8]; 8]> = HashMap::new();
    let mut kt = Vec::new();
    let mut mt = Vec::with_capacity(64 * mesh.n_elements());
    for e in 0..mesh.n_elements() {
        let mat = materials.of_element(mesh, e)?;
        let h = mesh.element_sizes(e);
        let g = cache
            .entry(size_key(h))
            .or_insert_with(|| element_gradient_matrix(h, 2));
        let nodes = mesh.element_nodes(e);
        for a in 0..8 {
            for b in 0..8 {
                mt.push((nodes[a], nodes[b], C64::new(mat.eps * g[a][b], 0.0)));
                if mat.sigma > 0.0 {
                    kt.push((nodes[a], nodes[b], C64::new(mat.sigma * g[a][b], 0.0)));
                }
            }
        }
    }
    let k = CsrMatrix::from_triplets(n, n, &kt).expect("element nodes in range");
    let m = CsrMatrix::from_triplets(n, n, &mt).expect("element nodes in range");
    Ok((k, m))
}

/// Node-level source vector `r_m = −∫ ∇v_m · J_src` for element-wise constant `J_src`.
pub fn assemble_source(mesh: &HexMesh, j_src: &[[f64; 3]]) -> Result<Vec<C64>, FemError> {
    if j_src.len() != mesh.n_elements() {
        return Err(FemError::SizeMismatch {
            what: "source current density",
            expected: mesh.n_elements(),
            found: j_src.len(),
        });
    }
    let mut r = vec![C64::new(0.0, 0.0); mesh.n_nodes()];
    for (e, j) in j_src.iter().enumerate() {
        if j.iter().all(|&v| v == 0.0) {
            continue;
        }
        let gi = element_gradient_integrals(mesh.element_sizes(e));
        for (a, &node) in mesh.element_nodes(e).iter().enumerate() {
            let dot: f64 = (0..3).map(|d| gi[a][d] * j[d]).sum();
            r[node] -= dot;
        }
    }
    Ok(r)
}
