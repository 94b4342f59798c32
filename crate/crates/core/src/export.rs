//! OBJ meshes and CSV node tables.

use std::fmt::Write as _;
use std::path::Path;

use crate::charts::{GeometryField, Vec3};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::spinor::SpinorFieldGrid;

/// Wavefront OBJ text for node positions on `grid`.
///
/// Vertices follow node order (`u` fastest). Each cell becomes the two
/// triangles `(i,j) (i+1,j) (i+1,j+1)` and `(i,j) (i+1,j+1) (i,j+1)`,
/// counter-clockwise about `N = x_u x x_v`. A periodic direction is closed
/// by faces that reuse the first row or column; no vertex is duplicated.
pub fn obj_string(name: &str, grid: &Grid, points: &[Vec3]) -> String {
    assert_eq!(points.len(), grid.len(), "one point per node");
    let (cu, cv) = grid.cells();
    let mut out = String::new();
    let seam = match (grid.periodic_u, grid.periodic_v) {
        (false, false) => "open chart, no seam",
        (true, false) => "u periodic, closed by wrap-around faces, no duplicated vertices",
        (false, true) => "v periodic, closed by wrap-around faces, no duplicated vertices",
        (true, true) => "u and v periodic, closed by wrap-around faces, no duplicated vertices",
    };
    let _ = writeln!(out, "# spinorsurf {name}");
    let _ = writeln!(out, "# grid {}x{}, vertices row-major with u fastest", grid.n_u, grid.n_v);
    let _ = writeln!(out, "# seam: {seam}");
    let _ = writeln!(out, "# {} vertices, {} faces", points.len(), 2 * cu * cv);
    for p in points {
        let _ = writeln!(out, "v {} {} {}", p.x, p.y, p.z);
    }
    for cj in 0..cv {
        for ci in 0..cu {
            let ([a, b, c, d], _, _) = grid.cell_corners(ci, cj);
            let _ = writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1);
            let _ = writeln!(out, "f {} {} {}", a + 1, c + 1, d + 1);
        }
    }
    out
}

pub fn write_obj(path: &Path, name: &str, grid: &Grid, points: &[Vec3]) -> Result<()> {
    std::fs::write(path, obj_string(name, grid, points)).map_err(|e| Error::io(path, e))
}

/// Named per-node columns.
pub type Columns = Vec<(String, Vec<f64>)>;

/// CSV with `node, u, v` followed by `columns`.
pub fn write_csv(path: &Path, grid: &Grid, columns: &Columns) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(std::io::BufWriter::new(file));
    let mut header = vec!["node".to_owned(), "u".to_owned(), "v".to_owned()];
    header.extend(columns.iter().map(|(name, _)| name.clone()));
    w.write_record(&header)?;
    for n in 0..grid.len() {
        let (u, v) = grid.coords(n);
        let mut row = vec![n.to_string(), u.to_string(), v.to_string()];
        row.extend(columns.iter().map(|(_, c)| c[n].to_string()));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Components of `phi` and `phi*` in frame gauge, their lengths, `H`, `G`.
pub fn spinor_columns(phi: &SpinorFieldGrid, geom: &GeometryField) -> Columns {
    let star = phi.star();
    let mut cols = Columns::new();
    for (prefix, f) in [("phi", phi), ("star", &star)] {
        let v = &f.values.data;
        cols.push((format!("{prefix}_c1_re"), v.iter().map(|p| p.c1.re).collect()));
        cols.push((format!("{prefix}_c1_im"), v.iter().map(|p| p.c1.im).collect()));
        cols.push((format!("{prefix}_c2_re"), v.iter().map(|p| p.c2.re).collect()));
        cols.push((format!("{prefix}_c2_im"), v.iter().map(|p| p.c2.im).collect()));
    }
    let (lp, lm) = phi.lengths();
    cols.push(("len_plus_sq".into(), lp.data));
    cols.push(("len_minus_sq".into(), lm.data));
    cols.push(("mean_curvature".into(), geom.mean_curvature().data));
    cols.push(("gauss_curvature".into(), geom.gauss_curvature().data));
    cols
}
