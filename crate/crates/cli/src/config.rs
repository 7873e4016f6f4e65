//! Run configuration: a flat text file of `section.key = value` lines.
//!
//! Blank lines and lines starting with `#` are ignored; keys may not repeat
//! and unknown keys are rejected. Relative paths are resolved against the
//! directory of the configuration file.
//!
//! | key | value | default |
//! |---|---|---|
//! | `problem.kind` | `dirichlet` or `holmgren` | required |
//! | `problem.alpha` | `α` with `0 < 2α < 1` | required |
//! | `domain.shape` | `hemisphere` or `table` | `hemisphere` |
//! | `domain.radius` | half-ball radius | `1` |
//! | `domain.surface_table` | CSV `s,t,x,y,z` (for `table`) | |
//! | `grid.ns`, `grid.nt` | surface grid size, `>= 4` | `32` |
//! | `grid.nr`, `grid.nphi` | planar grid size, `>= 4` | `24`, `32` |
//! | `data.surface` | builtin name or `table:<csv s,t,value>` | required |
//! | `data.plane` | builtin name or `table:<csv r,phi,value>` | the surface builtin |
//! | `eval.points` | `x y z; x y z; ...` | |
//! | `eval.points_file` | CSV `x,y,z` | |
//! | `eval.lattice` | points per axis of a uniform lattice | |
//! | `output.path` | result CSV | required for `solve` |
//! | `output.convergence` | convergence CSV | `convergence.csv` beside `output.path` |
//!
//! Exactly one of the `eval.*` keys must be given.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use singular_bie_core::bvp::ProblemKind;

use crate::builtin::Builtin;
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq)]
pub enum DomainSpec {
    Hemisphere { radius: f64 },
    Table { path: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub ns: usize,
    pub nt: usize,
    pub nr: usize,
    pub nphi: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DataSpec {
    Builtin(Builtin),
    Table(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub enum EvalSpec {
    Points(Vec<[f64; 3]>),
    PointsFile(PathBuf),
    Lattice(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub alpha: f64,
    pub kind: ProblemKind,
    pub domain: DomainSpec,
    pub grid: GridSpec,
    pub surface_data: DataSpec,
    pub plane_data: DataSpec,
    pub evaluation: EvalSpec,
    pub output: Option<PathBuf>,
    pub convergence_output: Option<PathBuf>,
}

const KEYS: &[&str] = &[
    "problem.kind",
    "problem.alpha",
    "domain.shape",
    "domain.radius",
    "domain.surface_table",
    "grid.ns",
    "grid.nt",
    "grid.nr",
    "grid.nphi",
    "data.surface",
    "data.plane",
    "eval.points",
    "eval.points_file",
    "eval.lattice",
    "output.path",
    "output.convergence",
];

/// Split the file into a key/value map, rejecting malformed lines.
pub fn parse_entries(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::config(format!("line {}: expected `section.key = value`", lineno + 1)));
        };
        let (key, value) = (key.trim(), value.trim());
        match key.split_once('.') {
            Some((sec, k)) if !sec.is_empty() && !k.is_empty() && !k.contains('.') => {}
            _ => {
                return Err(CliError::config(format!(
                    "line {}: key `{key}` is not of the form section.key",
                    lineno + 1
                )))
            }
        }
        if !KEYS.contains(&key) {
            return Err(CliError::config(format!("line {}: unknown key `{key}`", lineno + 1)));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(CliError::config(format!("line {}: duplicate key `{key}`", lineno + 1)));
        }
    }
    Ok(map)
}

fn get<'a>(map: &'a BTreeMap<String, String>, key: &str) -> Option<&'a str> {
    map.get(key).map(String::as_str)
}

fn require<'a>(map: &'a BTreeMap<String, String>, key: &str) -> CliResult<&'a str> {
    get(map, key).ok_or_else(|| CliError::config(format!("missing required key `{key}`")))
}

fn parse_f64(key: &str, v: &str) -> CliResult<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| CliError::config(format!("`{key}`: expected a finite number, got `{v}`")))
}

fn parse_size(key: &str, v: &str, min: usize) -> CliResult<usize> {
    let n: usize = v.parse().map_err(|_| CliError::config(format!("`{key}`: expected an integer, got `{v}`")))?;
    if n < min {
        return Err(CliError::config(format!("`{key}` must be >= {min}, got {n}")));
    }
    Ok(n)
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base)
    }

    /// Parse configuration text; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> CliResult<Self> {
        let map = parse_entries(text)?;
        let resolve = |p: &str| {
            let p = PathBuf::from(p);
            if p.is_absolute() {
                p
            } else {
                base.join(p)
            }
        };

        let kind = match require(&map, "problem.kind")? {
            "dirichlet" => ProblemKind::Dirichlet,
            "holmgren" => ProblemKind::Holmgren,
            other => {
                return Err(CliError::config(format!(
                    "`problem.kind`: expected `dirichlet` or `holmgren`, got `{other}`"
                )))
            }
        };
        let alpha = parse_f64("problem.alpha", require(&map, "problem.alpha")?)?;
        if !(alpha > 0.0 && 2.0 * alpha < 1.0) {
            return Err(CliError::config(format!(
                "`problem.alpha`: the bound 0 < 2*alpha < 1 is violated (2*alpha = {})",
                2.0 * alpha
            )));
        }

        let domain = match get(&map, "domain.shape").unwrap_or("hemisphere") {
            "hemisphere" => {
                let radius =
                    get(&map, "domain.radius").map(|v| parse_f64("domain.radius", v)).transpose()?.unwrap_or(1.0);
                if !(radius > 0.0) {
                    return Err(CliError::config(format!("`domain.radius` must be positive, got {radius}")));
                }
                DomainSpec::Hemisphere { radius }
            }
            "table" => DomainSpec::Table { path: resolve(require(&map, "domain.surface_table")?) },
            other => {
                return Err(CliError::config(format!(
                    "`domain.shape`: expected `hemisphere` or `table`, got `{other}`"
                )))
            }
        };

        let size = |key: &str, default: usize| -> CliResult<usize> {
            get(&map, key).map(|v| parse_size(key, v, 4)).transpose().map(|v| v.unwrap_or(default))
        };
        let grid = GridSpec {
            ns: size("grid.ns", 32)?,
            nt: size("grid.nt", 32)?,
            nr: size("grid.nr", 24)?,
            nphi: size("grid.nphi", 32)?,
        };

        let data = |key: &str, v: &str| -> CliResult<DataSpec> {
            match v.strip_prefix("table:") {
                Some(p) => Ok(DataSpec::Table(resolve(p.trim()))),
                None => Builtin::parse(v).map(DataSpec::Builtin).map_err(|m| CliError::config(format!("`{key}`: {m}"))),
            }
        };
        let surface_data = data("data.surface", require(&map, "data.surface")?)?;
        let plane_data = match get(&map, "data.plane") {
            Some(v) => data("data.plane", v)?,
            None => match &surface_data {
                DataSpec::Builtin(b) => DataSpec::Builtin(b.clone()),
                DataSpec::Table(_) => {
                    return Err(CliError::config("`data.plane` is required when `data.surface` is a table"))
                }
            },
        };

        let eval_keys: Vec<&str> =
            ["eval.points", "eval.points_file", "eval.lattice"].into_iter().filter(|k| map.contains_key(*k)).collect();
        if eval_keys.len() != 1 {
            return Err(CliError::config(format!(
                "exactly one of `eval.points`, `eval.points_file`, `eval.lattice` is required, got {}",
                eval_keys.len()
            )));
        }
        let evaluation = match eval_keys[0] {
            "eval.points" => EvalSpec::Points(parse_points(require(&map, "eval.points")?)?),
            "eval.points_file" => EvalSpec::PointsFile(resolve(require(&map, "eval.points_file")?)),
            _ => EvalSpec::Lattice(parse_size("eval.lattice", require(&map, "eval.lattice")?, 1)?),
        };

        Ok(RunConfig {
            alpha,
            kind,
            domain,
            grid,
            surface_data,
            plane_data,
            evaluation,
            output: get(&map, "output.path").map(resolve),
            convergence_output: get(&map, "output.convergence").map(resolve),
        })
    }
}

/// `x y z; x y z; ...` (commas are accepted as separators within a point).
pub fn parse_points(v: &str) -> CliResult<Vec<[f64; 3]>> {
    let mut out = Vec::new();
    for (k, chunk) in v.split(';').map(str::trim).filter(|c| !c.is_empty()).enumerate() {
        let nums: Vec<&str> = chunk.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
        if nums.len() != 3 {
            return Err(CliError::config(format!("`eval.points`: point {} needs 3 coordinates, got `{chunk}`", k + 1)));
        }
        let mut p = [0.0; 3];
        for (slot, s) in p.iter_mut().zip(&nums) {
            *slot = parse_f64("eval.points", s)?;
        }
        out.push(p);
    }
    if out.is_empty() {
        return Err(CliError::config("`eval.points` is empty"));
    }
    Ok(out)
}
