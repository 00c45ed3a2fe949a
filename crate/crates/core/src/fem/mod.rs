//! Lowest-order hexahedral discretization of the electroquasistatic weak form.

mod assembly;
mod dofs;
pub mod element;
mod field;
mod mesh;
pub mod presets;
mod vtk;

pub use assembly::{assemble_km, assemble_source, Material, MaterialMap};
pub use dofs::{
    apply_floating_potentials, BoundaryConditions, DofMap, FemSystem, GluedSystem, NodeDof,
};
pub use field::{displacement_field, displacement_vectors};
pub use mesh::{build_box_mesh, HexMesh, LOCAL_CORNERS};
pub use presets::{floating_box, CapacitorConfig, EPS0};
pub use vtk::write_vtk;

pub use crate::blocks::TwoBlockSystem;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FemError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("element {element} straddles a material interface")]
    MisalignedInterface { element: usize },
    #[error("region {region} has invalid material parameters")]
    InvalidMaterial { region: usize },
    #[error("no material given for region {region}")]
    MaterialMismatch { region: usize },
    #[error("{what} has {found} entries, expected {expected}")]
    SizeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("node {node} outside mesh with {n_nodes} nodes")]
    NodeOutOfRange { node: usize, n_nodes: usize },
    #[error("node {node} has more than one Dirichlet value")]
    DuplicateDirichlet { node: usize },
    #[error("floating group {group} is empty")]
    EmptyGroup { group: usize },
    #[error("node {node} belongs to more than one floating group")]
    OverlappingGroups { node: usize },
    #[error("floating group {group} contains Dirichlet node {node}")]
    FloatingTouchesDirichlet { group: usize, node: usize },
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
}
