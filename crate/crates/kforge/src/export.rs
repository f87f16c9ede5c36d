//! CSV profiles, OBJ meshes and per-vertex curvature fields.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! identical runs produce identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use kforge_core::immersion::scan_values;
use kforge_core::profile::PROFILE_COLUMNS;
use kforge_core::{ChartPoint, GridSpec, ImmersionMap, ProfileSolution};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Fixed-width float formatting used by every text export.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
    }
    Ok(BufWriter::new(File::create(path).map_err(Error::io(path))?))
}

/// `samples` rows at `r = i/samples`, `i = 0..samples`.
pub fn write_profile_csv(sol: &ProfileSolution, samples: usize, path: &Path) -> Result<usize> {
    if samples < 2 {
        return Err(Error::Config(format!("profile CSV needs ≥ 2 samples, got {samples}")));
    }
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(PROFILE_COLUMNS)?;
    for i in 0..samples {
        let row = sol.sample_row(i as f64 / samples as f64)?;
        w.write_record(row.iter().map(|x| fmt_f64(*x)))?;
    }
    w.flush().map_err(Error::io(path))?;
    Ok(samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshStats {
    pub vertices: usize,
    pub faces: usize,
    pub min_h: f64,
    pub max_h: f64,
}

/// Quad faces of a grid, 1-based, wrapping in `u` when the grid is periodic.
pub fn grid_faces(grid: &GridSpec) -> Vec<[usize; 4]> {
    let (nu, nv) = (grid.nu, grid.nv);
    let columns = if grid.periodic() { nu } else { nu - 1 };
    let idx = |i: usize, j: usize| (i % nu) * nv + j + 1;
    let mut out = Vec::with_capacity(columns * (nv - 1));
    for i in 0..columns {
        for j in 0..(nv - 1) {
            out.push([idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]);
        }
    }
    out
}

/// Writes the image of `grid` under `m` as an ASCII OBJ and `H_n` per vertex as CSV.
pub fn export_obj(m: &ImmersionMap, grid: &GridSpec, obj: &Path, curvature_csv: &Path) -> Result<MeshStats> {
    grid.validate()?;
    if m.n() != 2 {
        return Err(Error::Config(format!("meshes need a surface in R³, got n = {}", m.n())));
    }
    let nodes = grid.nodes();
    let points: Vec<_> = nodes
        .par_iter()
        .map(|nd| m.evaluate(&ChartPoint::uv(nd.u, nd.v)))
        .collect::<std::result::Result<_, _>>()?;
    let hs = scan_values(m, grid)?;
    let faces = grid_faces(grid);

    let mut w = create(obj)?;
    let io = Error::io(obj);
    let write = |w: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(w, "# kforge immersion, {}x{} grid", grid.nu, grid.nv)?;
        for p in &points {
            writeln!(w, "v {} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(p[2]))?;
        }
        for f in &faces {
            writeln!(w, "f {} {} {} {}", f[0], f[1], f[2], f[3])?;
        }
        w.flush()
    };
    write(&mut w).map_err(io)?;

    let mut c = csv::Writer::from_writer(create(curvature_csv)?);
    c.write_record(["vertex", "u", "v", "h"])?;
    for (i, (nd, h)) in nodes.iter().zip(&hs).enumerate() {
        c.write_record([(i + 1).to_string(), fmt_f64(nd.u), fmt_f64(nd.v), fmt_f64(*h)])?;
    }
    c.flush().map_err(Error::io(curvature_csv))?;

    let min_h = hs.iter().copied().fold(f64::INFINITY, f64::min);
    let max_h = hs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(MeshStats {
        vertices: points.len(),
        faces: faces.len(),
        min_h,
        max_h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use kforge_core::Region;

    #[test]
    fn face_counts() {
        assert_eq!(grid_faces(&GridSpec::whole(64, 32)).len(), 64 * 31);
        let window = GridSpec::new(
            10,
            12,
            Region::Window {
                u0: 0.0,
                u1: 1.0,
                v0: -0.5,
                v1: 0.5,
            },
        );
        let faces = grid_faces(&window);
        assert_eq!(faces.len(), 9 * 11);
        assert!(faces.iter().flatten().all(|&i| (1..=120).contains(&i)));
    }

    #[test]
    fn float_format_is_seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
    }
}
