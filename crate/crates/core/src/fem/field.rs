use super::element::shape_gradients;
use super::{FemError, HexMesh, MaterialMap};

/// `D = −ε∇φ` at the centroid of every element.
pub fn displacement_vectors(
    mesh: &HexMesh,
    materials: &MaterialMap,
    phi: &[f64],
) -> Result<Vec<[f64; 3]>, FemError> {
    if phi.len() != mesh.n_nodes() {
        return Err(FemError::SizeMismatch {
            what: "nodal potential",
            expected: mesh.n_nodes(),
            found: phi.len(),
        });
    }
    let mut out = Vec::with_capacity(mesh.n_elements());
    for e in 0..mesh.n_elements() {
        let eps = materials.of_element(mesh, e)?.eps;
        let grads = shape_gradients(mesh.element_sizes(e), [0.0; 3]);
        let mut d = [0.0; 3];
        for (a, &node) in mesh.element_nodes(e).iter().enumerate() {
            for k in 0..3 {
                d[k] -= eps * grads[a][k] * phi[node];
            }
        }
        out.push(d);
    }
    Ok(out)
}

/// Per-element magnitude `|D|` in As/m².
pub fn displacement_field(
    mesh: &HexMesh,
    materials: &MaterialMap,
    phi: &[f64],
) -> Result<Vec<f64>, FemError> {
    Ok(displacement_vectors(mesh, materials, phi)?
        .iter()
        .map(|d| (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt())
        .collect())
}
