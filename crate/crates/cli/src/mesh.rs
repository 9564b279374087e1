//! Lattice meshes and their OBJ and CSV encodings.

use std::io::{self, Write};

use casurf::lorentz::det;
use casurf::surface::unit_normal;
use casurf::{AmbientVector, ParametricSurface};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Vertices on an `nu × nv` parameter lattice (row-major in `u`) and
/// quads as 1-based vertex indices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshBuffer {
    pub nu: usize,
    pub nv: usize,
    pub params: Vec<(f64, f64)>,
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 4]>,
}

impl MeshBuffer {
    /// Samples `surf` on the full lattice. Quads are wound counterclockwise
    /// seen from the side the future-directed normal points to. If the
    /// lattice crosses a singular curve the orientation of the majority wins.
    pub fn from_surface(surf: &ParametricSurface, nu: usize, nv: usize) -> Result<Self, CliError> {
        if nu < 2 || nv < 2 {
            return Err(CliError::Usage(format!(
                "mesh needs nu, nv >= 2, got {nu}x{nv}"
            )));
        }
        let us = surf.u_domain().linspace(nu);
        let vs = surf.v_domain().linspace(nv);
        let mut params = Vec::with_capacity(nu * nv);
        let mut vertices = Vec::with_capacity(nu * nv);
        for &u in &us {
            for &v in &vs {
                let x = surf.eval(u, v);
                if !x.is_finite() {
                    return Err(CliError::Geometry(casurf::GeometryError::SingularPoint {
                        u,
                        v,
                    }));
                }
                params.push((u, v));
                vertices.push(x.to_array());
            }
        }
        let flip = lattice_orientation(surf, nu, nv) < 0.0;
        let mut faces = Vec::with_capacity((nu - 1) * (nv - 1));
        for i in 0..nu - 1 {
            for j in 0..nv - 1 {
                let a = i * nv + j + 1;
                let (b, c, d) = (a + nv, a + nv + 1, a + 1);
                faces.push(if flip { [a, d, c, b] } else { [a, b, c, d] });
            }
        }
        Ok(Self {
            nu,
            nv,
            params,
            vertices,
            faces,
        })
    }

    pub fn vertex(&self, index: usize) -> AmbientVector {
        AmbientVector::from_array(self.vertices[index - 1])
    }

    /// `det(b − a, d − a, ξ)` at the first corner of each face; positive
    /// for counterclockwise winding seen from `ξ`. `None` where `ξ` is undefined.
    pub fn face_orientations(&self, surf: &ParametricSurface) -> Vec<Option<f64>> {
        self.faces
            .iter()
            .map(|f| {
                let a = self.vertex(f[0]);
                let xi = unit_normal(surf, self.params[f[0] - 1]).ok()?;
                Some(det(self.vertex(f[1]) - a, self.vertex(f[3]) - a, xi))
            })
            .collect()
    }

    pub fn write_obj<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# {} x {} lattice", self.nu, self.nv)?;
        for [x, y, z] in &self.vertices {
            writeln!(w, "v {x} {y} {z}")?;
        }
        for [a, b, c, d] in &self.faces {
            writeln!(w, "f {a} {b} {c} {d}")?;
        }
        Ok(())
    }

    /// Rows `u,v,x1,x2,x3`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), CliError> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["u", "v", "x1", "x2", "x3"])
            .map_err(csv_error)?;
        for (&(u, v), [x1, x2, x3]) in self.params.iter().zip(&self.vertices) {
            wtr.serialize((u, v, x1, x2, x3)).map_err(csv_error)?;
        }
        wtr.flush().map_err(|e| CliError::Io(e.to_string()))
    }
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Majority sign of `det(x_u, x_v, ξ)` over the regular lattice points.
fn lattice_orientation(surf: &ParametricSurface, nu: usize, nv: usize) -> f64 {
    surf.grid(nu, nv)
        .into_iter()
        .filter_map(|p| {
            let xi = unit_normal(surf, p).ok()?;
            let d = surf.partials(p.0, p.1);
            Some(det(d.xu, d.xv, xi).signum())
        })
        .sum()
}

/// Vertices and polygon faces of an OBJ file.
pub type ObjContents = (Vec<[f64; 3]>, Vec<Vec<usize>>);

/// Parses the `v`/`f` records of an OBJ file into vertices and faces.
pub fn parse_obj(text: &str) -> Result<ObjContents, String> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            None => {}
            Some(tag) if tag.starts_with('#') => {}
            Some("v") => {
                let xs: Vec<f64> = parts
                    .map(|p| p.parse::<f64>().map_err(|e| format!("line {}: {e}", n + 1)))
                    .collect::<Result<_, _>>()?;
                if xs.len() != 3 {
                    return Err(format!("line {}: vertex needs 3 coordinates", n + 1));
                }
                vertices.push([xs[0], xs[1], xs[2]]);
            }
            Some("f") => {
                let idx: Vec<usize> = parts
                    .map(|p| {
                        p.parse::<usize>()
                            .map_err(|e| format!("line {}: {e}", n + 1))
                    })
                    .collect::<Result<_, _>>()?;
                if idx.len() < 3 {
                    return Err(format!("line {}: face needs at least 3 vertices", n + 1));
                }
                faces.push(idx);
            }
            Some(other) => return Err(format!("line {}: unexpected record {other:?}", n + 1)),
        }
    }
    if let Some(bad) = faces
        .iter()
        .flatten()
        .find(|&&i| i == 0 || i > vertices.len())
    {
        return Err(format!(
            "face index {bad} out of range 1..={}",
            vertices.len()
        ));
    }
    Ok((vertices, faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use casurf::generators::{constant_angle_surface, tilted_plane, AlphaSpec, GeneratorConfig};
    use casurf::Interval;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn lattice_mesh_has_consistent_winding() {
        for u in [iv(0.1, 2.0), iv(-2.0, -0.1)] {
            let cfg = GeneratorConfig::new(1.0, u, iv(0.0, 6.0), 8, 12).unwrap();
            let surf = constant_angle_surface(&cfg, &AlphaSpec::zero()).unwrap();
            let mesh = MeshBuffer::from_surface(&surf, 8, 12).unwrap();
            assert_eq!(mesh.vertices.len(), 96);
            assert_eq!(mesh.faces.len(), 7 * 11);
            assert!(mesh
                .face_orientations(&surf)
                .iter()
                .all(|o| o.unwrap() > 0.0));
        }
    }

    #[test]
    fn obj_round_trip() {
        let surf = tilted_plane(0.3, iv(0.0, 1.0), iv(0.0, 1.0)).unwrap();
        let mesh = MeshBuffer::from_surface(&surf, 3, 4).unwrap();
        let mut buf = Vec::new();
        mesh.write_obj(&mut buf).unwrap();
        let (v, f) = parse_obj(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(v, mesh.vertices);
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|q| q.len() == 4));
    }

    #[test]
    fn obj_parser_rejects_dangling_faces() {
        assert!(parse_obj("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n").is_err());
        assert!(parse_obj("v 0 0\n").is_err());
        assert!(parse_obj("vn 0 0 1\n").is_err());
    }

    #[test]
    fn csv_has_one_row_per_vertex() {
        let surf = tilted_plane(0.0, iv(0.0, 1.0), iv(0.0, 1.0)).unwrap();
        let mesh = MeshBuffer::from_surface(&surf, 2, 3).unwrap();
        let mut buf = Vec::new();
        mesh.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 7);
        assert!(text.starts_with("u,v,x1,x2,x3\n"));
    }
}
