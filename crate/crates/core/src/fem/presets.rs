//! Benchmark geometries.

use super::{
    build_box_mesh, BoundaryConditions, FemError, FemSystem, HexMesh, Material, MaterialMap,
};
use crate::numkit::C64;

/// Vacuum permittivity in F/m.
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Region tags of the layered capacitor.
pub mod region {
    pub const OUTER_INSULATOR: usize = 0;
    pub const INNER_INSULATOR: usize = 1;
    pub const OUTER_CONDUCTOR: usize = 2;
    pub const INNER_CONDUCTOR: usize = 3;
}

/// Layered plate capacitor whose plates are joined by a conducting bar.
///
/// The cube `[0, d]³` has plates at `x = 0` (grounded) and `x = d` (driven).
/// Along `x` it is layered as outer (`d_o`), inner (`d_i`), outer (`d_o`).
/// A bar of square cross-section `d_i` through the centre of the `y`-`z`
/// plane runs from plate to plate and conducts with the conductivity of the
/// layer it crosses; everything else is insulating.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacitorConfig {
    pub d: f64,
    pub d_i: f64,
    pub d_o: f64,
    pub eps_i: f64,
    pub eps_o: f64,
    pub sigma_i: f64,
    pub sigma_o: f64,
    /// Excitation frequency in Hz.
    pub freq: f64,
    /// Peak voltage of the driven plate in V.
    pub amplitude: f64,
    pub divisions: [usize; 3],
}

impl Default for CapacitorConfig {
    fn default() -> Self {
        Self {
            d: 0.22,
            d_i: 0.02,
            d_o: 0.10,
            eps_i: EPS0,
            eps_o: 2.0 * EPS0,
            sigma_i: 2.98e7,
            sigma_o: 5.96e7,
            freq: 50.0,
            amplitude: 1.0,
            divisions: [11, 11, 11],
        }
    }
}

fn parse_mesh(value: &str) -> Option<[usize; 3]> {
    let parts: Vec<usize> = value
        .split(['x', 'X'])
        .map(|p| p.trim().parse().ok())
        .collect::<Option<_>>()?;
    match parts.as_slice() {
        [n] => Some([*n; 3]),
        [a, b, c] => Some([*a, *b, *c]),
        _ => None,
    }
}

impl CapacitorConfig {
    /// 22 divisions per axis, which leaves 11109 free unknowns.
    pub fn fine() -> Self {
        Self {
            divisions: [22, 22, 22],
            ..Self::default()
        }
    }

    /// Named preset: `toy-capacitor` or `fine-capacitor`.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "toy-capacitor" => Some(Self::default()),
            "fine-capacitor" => Some(Self::fine()),
            _ => None,
        }
    }

    /// Reads flat `key = value` text on top of a preset (`preset = <name>`, default `toy-capacitor`).
    pub fn parse(text: &str) -> Result<Self, FemError> {
        let mut entries = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| FemError::Config {
                line: ln + 1,
                message: format!("expected key = value, got `{line}`"),
            })?;
            entries.push((ln + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let mut cfg = Self::default();
        for (line, k, v) in &entries {
            if k == "preset" {
                cfg = Self::preset(v).ok_or_else(|| FemError::Config {
                    line: *line,
                    message: format!("unknown preset `{v}`"),
                })?;
            }
        }
        for (line, k, v) in entries {
            let bad = |message: String| FemError::Config { line, message };
            if k == "preset" {
                continue;
            }
            if k == "mesh" {
                cfg.divisions =
                    parse_mesh(&v).ok_or_else(|| bad(format!("mesh must be N or NxNxN, got `{v}`")))?;
                continue;
            }
            let x: f64 = v
                .parse()
                .ok()
                .filter(|x: &f64| x.is_finite())
                .ok_or_else(|| bad(format!("invalid number `{v}` for {k}")))?;
            match k.as_str() {
                "d" => cfg.d = x,
                "d_i" => cfg.d_i = x,
                "d_o" => cfg.d_o = x,
                "eps_i" => cfg.eps_i = x,
                "eps_o" => cfg.eps_o = x,
                "sigma_i" => cfg.sigma_i = x,
                "sigma_o" => cfg.sigma_o = x,
                "freq" => cfg.freq = x,
                "amplitude" => cfg.amplitude = x,
                _ => return Err(bad(format!("unknown key `{k}`"))),
            }
        }
        Ok(cfg)
    }

    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.freq
    }

    pub fn region_at(&self, p: [f64; 3]) -> usize {
        let lo = self.d_o;
        let hi = self.d_o + self.d_i;
        let inner_layer = p[0] > lo && p[0] < hi;
        let in_bar = p[1] > lo && p[1] < hi && p[2] > lo && p[2] < hi;
        match (in_bar, inner_layer) {
            (false, false) => region::OUTER_INSULATOR,
            (false, true) => region::INNER_INSULATOR,
            (true, false) => region::OUTER_CONDUCTOR,
            (true, true) => region::INNER_CONDUCTOR,
        }
    }

    pub fn materials(&self) -> Result<MaterialMap, FemError> {
        MaterialMap::new(vec![
            Material { sigma: 0.0, eps: self.eps_o },
            Material { sigma: 0.0, eps: self.eps_i },
            Material { sigma: self.sigma_o, eps: self.eps_o },
            Material { sigma: self.sigma_i, eps: self.eps_i },
        ])
    }

    pub fn mesh(&self) -> Result<HexMesh, FemError> {
        if (2.0 * self.d_o + self.d_i - self.d).abs() > 1e-12 * self.d {
            return Err(FemError::InvalidMesh(format!(
                "layer widths 2·{} + {} do not add up to {}",
                self.d_o, self.d_i, self.d
            )));
        }
        build_box_mesh([self.d; 3], self.divisions, |p| self.region_at(p))
    }

    /// Grounded plate at `x = 0`, plate at `x = d` driven with the peak voltage.
    pub fn boundary(&self, mesh: &HexMesh) -> BoundaryConditions {
        let mut dirichlet: Vec<(usize, C64)> = mesh
            .face_nodes(0, false)
            .into_iter()
            .map(|n| (n, C64::new(0.0, 0.0)))
            .collect();
        dirichlet.extend(
            mesh.face_nodes(0, true)
                .into_iter()
                .map(|n| (n, C64::new(self.amplitude, 0.0))),
        );
        BoundaryConditions {
            dirichlet,
            floating: Vec::new(),
        }
    }

    pub fn build(&self) -> Result<FemSystem, FemError> {
        let mesh = self.mesh()?;
        let bc = self.boundary(&mesh);
        FemSystem::new(mesh, self.materials()?, &bc, None)
    }

    /// Series-capacitor value `V / (d_i/ε_i + 2 d_o/ε_o)` of `|D|` at peak voltage.
    pub fn analytic_displacement(&self) -> f64 {
        self.amplitude / (self.d_i / self.eps_i + 2.0 * self.d_o / self.eps_o)
    }

    /// Region values `(σ₁, ε₁, ε₂)` used by the material-weighted scalings:
    /// those of the outer layer, which holds most of the volume.
    pub fn scaling_materials(&self) -> (f64, f64, f64) {
        (self.sigma_o, self.eps_o, self.eps_o)
    }
}

/// Insulating unit cube between grounded (`x = 0`) and 1 V (`x = 1`) plates
/// with a perfectly conducting cube `[1/3, 2/3]³` modelled as a floating
/// electrode. `divisions` must be a positive multiple of 3.
pub fn floating_box(divisions: usize) -> Result<(FemSystem, Vec<usize>), FemError> {
    if divisions == 0 || divisions % 3 != 0 {
        return Err(FemError::InvalidMesh("divisions must be a multiple of 3".into()));
    }
    let mesh = build_box_mesh([1.0; 3], [divisions; 3], |_| 0)?;
    let tol = 1e-9;
    let group = mesh.nodes_where(|p| {
        p.iter()
            .all(|&c| c > 1.0 / 3.0 - tol && c < 2.0 / 3.0 + tol)
    });
    let mut dirichlet: Vec<(usize, C64)> = mesh
        .face_nodes(0, false)
        .into_iter()
        .map(|n| (n, C64::new(0.0, 0.0)))
        .collect();
    dirichlet.extend(
        mesh.face_nodes(0, true)
            .into_iter()
            .map(|n| (n, C64::new(1.0, 0.0))),
    );
    let bc = BoundaryConditions {
        dirichlet,
        floating: vec![group.clone()],
    };
    let mats = MaterialMap::new(vec![Material { sigma: 0.0, eps: EPS0 }])?;
    Ok((FemSystem::new(mesh, mats, &bc, None)?, group))
}
