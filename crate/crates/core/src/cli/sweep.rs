//! Parameter sweeps: range parsing, row evaluation and CSV rendering.

use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::config::Tolerances;
use crate::error::Result;
use crate::exact::{constraint_b, constraint_violation};
use crate::model::{dimension_reduce, effective_potential, PhysicalParams, PotentialParams};
use crate::numerics::{build_grid, eigen_lowest, EigenOptions, GridOverrides};
use crate::report::format_real;
use crate::verify::{level_rows, Problem};

use super::CliError;

pub const CSV_HEADER: &str = "a,b,c,N,l,n,E_closed,E_numeric,abs_err,constraint_residual";

const SWEEP_KEYS: &[&str] = &["a", "b", "c", "N", "l"];

#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub key: String,
    pub values: Vec<f64>,
}

/// `KEY=v1,v2,...`, `KEY=start:stop:count` (inclusive) or `KEY=` (empty).
pub fn parse_range(spec: &str) -> std::result::Result<Range, CliError> {
    let bad = |why: &str| CliError::Usage(format!("range `{spec}`: {why}"));
    let (key, body) = spec
        .split_once('=')
        .ok_or_else(|| bad("expected KEY=VALUES"))?;
    let key = key.trim();
    if !SWEEP_KEYS.contains(&key) {
        return Err(bad("key must be one of a, b, c, N, l"));
    }
    let body = body.trim();
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let values = if body.is_empty() {
        Vec::new()
    } else if body.contains(':') {
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(bad("expected start:stop:count"));
        }
        let (start, stop) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| bad("count must be an integer"))?;
        match count {
            0 => Vec::new(),
            1 => vec![start],
            _ => (0..count)
                .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
                .collect(),
        }
    } else {
        body.split(',')
            .map(num)
            .collect::<std::result::Result<_, _>>()?
    };
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad("values must be finite"));
    }
    if matches!(key, "N" | "l") && values.iter().any(|v| v.fract() != 0.0) {
        return Err(bad("N and l take integer values"));
    }
    Ok(Range {
        key: key.to_string(),
        values,
    })
}

/// Values not being swept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepBase {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n: i64,
    pub l: i64,
    pub derive_b: bool,
    pub n_max: u32,
    pub phys: PhysicalParams,
    pub tol: Tolerances,
    pub grid: GridOverrides,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub n_dim: u32,
    pub l: u32,
    pub level: u32,
    pub e_closed: f64,
    pub e_numeric: f64,
    pub constraint_residual: f64,
}

impl SweepRow {
    pub fn abs_err(&self) -> f64 {
        (self.e_numeric - self.e_closed).abs()
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            format_real(self.a),
            format_real(self.b),
            format_real(self.c),
            self.n_dim,
            self.l,
            self.level,
            format_real(self.e_closed),
            format_real(self.e_numeric),
            format_real(self.abs_err()),
            format_real(self.constraint_residual)
        )
    }
}

impl Serialize for SweepRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::report::Real;
        let mut m = s.serialize_map(Some(10))?;
        m.serialize_entry("a", &Real(self.a))?;
        m.serialize_entry("b", &Real(self.b))?;
        m.serialize_entry("c", &Real(self.c))?;
        m.serialize_entry("N", &self.n_dim)?;
        m.serialize_entry("l", &self.l)?;
        m.serialize_entry("n", &self.level)?;
        m.serialize_entry("E_closed", &Real(self.e_closed))?;
        m.serialize_entry("E_numeric", &Real(self.e_numeric))?;
        m.serialize_entry("abs_err", &Real(self.abs_err()))?;
        m.serialize_entry("constraint_residual", &Real(self.constraint_residual))?;
        m.end()
    }
}

/// Cartesian product, first range varying slowest.
fn grid_points(ranges: &[Range]) -> Vec<Vec<(String, f64)>> {
    let mut points = vec![Vec::new()];
    for r in ranges {
        points = points
            .into_iter()
            .flat_map(|p| {
                r.values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push((r.key.clone(), *v));
                    q
                })
            })
            .collect();
    }
    points
}

fn evaluate(base: &SweepBase, point: &[(String, f64)]) -> Result<Vec<SweepRow>> {
    let mut s = *base;
    for (k, v) in point {
        match k.as_str() {
            "a" => s.a = *v,
            "b" => s.b = *v,
            "c" => s.c = *v,
            "N" => s.n = *v as i64,
            _ => s.l = *v as i64,
        }
    }
    let dim = dimension_reduce(s.n, s.l)?;
    if s.derive_b {
        s.b = constraint_b(s.a, s.c, &dim, &s.phys)?;
    }
    let params = PotentialParams::new(s.a, s.b, s.c)?;
    let mut problem = Problem::new(params, dim, s.phys);
    problem.tol = s.tol;
    problem.grid = s.grid;
    problem.n_max = s.n_max;
    // closed form requires the constraint
    crate::exact::ground_state(&params, &dim, &s.phys, s.tol.constraint)?;
    let closed = level_rows(&problem)?;
    let grid = build_grid(&params, &dim, &s.phys, s.grid, s.tol.grid_points)?;
    let v = effective_potential(&params, &dim, &s.phys);
    let numeric = eigen_lowest(
        &v,
        &grid,
        &s.phys,
        closed.len(),
        s.tol.eigen_bisection,
        EigenOptions::default(),
    )?
    .values;
    let residual = constraint_violation(&params, &dim, &s.phys);
    Ok(closed
        .iter()
        .zip(numeric)
        .map(|(row, e)| SweepRow {
            a: s.a,
            b: s.b,
            c: s.c,
            n_dim: dim.n(),
            l: dim.l(),
            level: row.n,
            e_closed: row.energy,
            e_numeric: e,
            constraint_residual: residual,
        })
        .collect())
}

/// Evaluates every point in parallel; rows keep sweep order.
pub fn run_sweep(base: &SweepBase, ranges: &[Range]) -> Result<Vec<SweepRow>> {
    let points = grid_points(ranges);
    if ranges.iter().any(|r| r.values.is_empty()) {
        return Ok(Vec::new());
    }
    let per_point: Vec<Result<Vec<SweepRow>>> =
        points.par_iter().map(|p| evaluate(base, p)).collect();
    let mut rows = Vec::new();
    for r in per_point {
        rows.extend(r?);
    }
    Ok(rows)
}

pub fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}
