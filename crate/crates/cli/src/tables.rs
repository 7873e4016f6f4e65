//! CSV readers for tabulated geometry, boundary data and evaluation points.
//!
//! Every file has a header row naming its columns; column order is free.
//! Lattice tables must list every `(s, t)` (or `(r, phi)`) pair exactly once.

use std::collections::BTreeMap;
use std::path::Path;

use singular_bie_core::geometry::SurfaceTable;
use singular_bie_core::potentials::{ParamTable, PolarTable};
use singular_bie_core::Vec3;

use crate::error::{CliError, CliResult};

/// Rows of `path` restricted to the named columns, in that order.
pub fn read_columns(path: &Path, columns: &[&str]) -> CliResult<Vec<Vec<f64>>> {
    let bad = |msg: String| CliError::config(format!("{}: {msg}", path.display()));
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let headers = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let idx: Vec<usize> = columns
        .iter()
        .map(|c| headers.iter().position(|h| h == *c).ok_or_else(|| bad(format!("missing column `{c}`"))))
        .collect::<CliResult<_>>()?;
    let mut rows = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let row = idx
            .iter()
            .map(|&i| {
                let field = rec.get(i).unwrap_or("");
                field
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad(format!("row {}: `{field}` is not a finite number", n + 1)))
            })
            .collect::<CliResult<Vec<f64>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(rows)
}

/// Sorts `(u, v, payload)` rows onto a complete `u × v` lattice, `v` fastest.
fn lattice<T: Copy>(path: &Path, rows: Vec<(f64, f64, T)>) -> CliResult<(Vec<f64>, Vec<f64>, Vec<T>)> {
    let bad = |msg: String| CliError::config(format!("{}: {msg}", path.display()));
    let mut u: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let mut v: Vec<f64> = rows.iter().map(|r| r.1).collect();
    for axis in [&mut u, &mut v] {
        axis.sort_by(f64::total_cmp);
        axis.dedup();
    }
    if rows.len() != u.len() * v.len() {
        return Err(bad(format!("{} rows do not form a complete {} x {} lattice", rows.len(), u.len(), v.len())));
    }
    let mut cells: BTreeMap<(usize, usize), T> = BTreeMap::new();
    for (a, b, payload) in rows {
        let i = u.binary_search_by(|x| x.total_cmp(&a)).unwrap();
        let j = v.binary_search_by(|x| x.total_cmp(&b)).unwrap();
        if cells.insert((i, j), payload).is_some() {
            return Err(bad(format!("duplicate lattice entry at ({a}, {b})")));
        }
    }
    let values = cells.into_values().collect();
    Ok((u, v, values))
}

/// Surface geometry: columns `s,t,x,y,z`.
pub fn read_surface_table(path: &Path) -> CliResult<SurfaceTable> {
    let rows = read_columns(path, &["s", "t", "x", "y", "z"])?;
    let (s, t, points) = lattice(path, rows.iter().map(|r| (r[0], r[1], Vec3::new(r[2], r[3], r[4]))).collect())?;
    Ok(SurfaceTable::new(s, t, points)?)
}

/// Boundary values on `Γ`: columns `s,t,value`.
pub fn read_param_table(path: &Path) -> CliResult<ParamTable> {
    let rows = read_columns(path, &["s", "t", "value"])?;
    let (s, t, values) = lattice(path, rows.iter().map(|r| (r[0], r[1], r[2])).collect())?;
    Ok(ParamTable::new(s, t, values)?)
}

/// Plane data in polar coordinates about `center`: columns `r,phi,value`.
pub fn read_polar_table(path: &Path, center: (f64, f64)) -> CliResult<PolarTable> {
    let rows = read_columns(path, &["r", "phi", "value"])?;
    let (r, phi, values) = lattice(path, rows.iter().map(|r| (r[0], r[1], r[2])).collect())?;
    Ok(PolarTable::new(center, r, phi, values)?)
}

/// Evaluation points: columns `x,y,z`.
pub fn read_points(path: &Path) -> CliResult<Vec<[f64; 3]>> {
    Ok(read_columns(path, &["x", "y", "z"])?.into_iter().map(|r| [r[0], r[1], r[2]]).collect())
}
