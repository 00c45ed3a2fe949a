//! Legacy ASCII VTK output on the structured grid.

use std::io::{self, Write};

use super::HexMesh;

/// Writes the grid with nodal (`POINT_DATA`) and element (`CELL_DATA`) scalars.
pub fn write_vtk(
    out: &mut impl Write,
    title: &str,
    mesh: &HexMesh,
    point_data: &[(&str, &[f64])],
    cell_data: &[(&str, &[f64])],
) -> io::Result<()> {
    let [nx, ny, nz] = mesh.divisions();
    writeln!(out, "# vtk DataFile Version 3.0")?;
    writeln!(out, "{}", title.lines().next().unwrap_or(""))?;
    writeln!(out, "ASCII")?;
    writeln!(out, "DATASET STRUCTURED_GRID")?;
    writeln!(out, "DIMENSIONS {} {} {}", nx + 1, ny + 1, nz + 1)?;
    writeln!(out, "POINTS {} double", mesh.n_nodes())?;
    for n in 0..mesh.n_nodes() {
        let [x, y, z] = mesh.node_coords(n);
        writeln!(out, "{x:e} {y:e} {z:e}")?;
    }
    write_block(out, "POINT_DATA", mesh.n_nodes(), point_data)?;
    write_block(out, "CELL_DATA", mesh.n_elements(), cell_data)
}

fn write_block(
    out: &mut impl Write,
    kind: &str,
    count: usize,
    fields: &[(&str, &[f64])],
) -> io::Result<()> {
    if fields.is_empty() {
        return Ok(());
    }
    writeln!(out, "{kind} {count}")?;
    for (name, values) in fields {
        if values.len() != count {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("field {name} has {} values, expected {count}", values.len()),
            ));
        }
        writeln!(out, "SCALARS {name} double 1")?;
        writeln!(out, "LOOKUP_TABLE default")?;
        for v in *values {
            writeln!(out, "{v:e}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::build_box_mesh;

    #[test]
    fn header_and_counts() {
        let mesh = build_box_mesh([1.0; 3], [2, 1, 1], |_| 0).unwrap();
        let phi: Vec<f64> = (0..12).map(f64::from).collect();
        let d = vec![1.5, 2.5];
        let mut buf = Vec::new();
        write_vtk(&mut buf, "test", &mesh, &[("phi", &phi)], &[("D", &d)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# vtk DataFile Version 3.0");
        assert_eq!(lines[4], "DIMENSIONS 3 2 2");
        assert_eq!(lines[5], "POINTS 12 double");
        assert!(text.contains("POINT_DATA 12\nSCALARS phi double 1"));
        assert!(text.contains("CELL_DATA 2\nSCALARS D double 1\nLOOKUP_TABLE default\n1.5e0\n2.5e0"));
        let mut bad = Vec::new();
        assert!(write_vtk(&mut bad, "x", &mesh, &[("phi", &d)], &[]).is_err());
    }
}
