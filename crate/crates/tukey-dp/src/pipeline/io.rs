//! Point-set ingestion (CSV with d numeric columns, or a JSON array of
//! d-arrays) and report emission. Values must lie in `[0,1]` on the
//! `2^-upsilon` grid; offending rows are listed in the error.

use std::path::Path;

use crate::error::{Error, Result};
use crate::geo::point::Point;
use crate::tukey::PointSet;

pub fn load_points(path: &Path, dim: usize, upsilon: u32) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)?;
    let rows = if path.extension().and_then(|e| e.to_str()) == Some("json") {
        parse_json(&text)?
    } else {
        parse_csv(&text, dim)?
    };
    let points = rows
        .into_iter()
        .map(|r| {
            if r.len() != dim {
                Err(Error::InvalidParam(format!(
                    "row has {} columns, expected {dim}",
                    r.len()
                )))
            } else {
                Ok(Point::new(r))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(points, dim, upsilon)
}

fn parse_json(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows: Vec<Vec<f64>> = serde_json::from_str(text)?;
    Ok(rows)
}

fn parse_csv(text: &str, dim: usize) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if line_no == 0 => continue, // optional header
            Err(e) => {
                return Err(Error::Parse {
                    line: line_no + 1,
                    msg: e.to_string(),
                })
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no data rows".into(),
        });
    }
    if rows[0].len() != dim {
        return Err(Error::Parse {
            line: 1,
            msg: format!("{} columns, expected {dim}", rows[0].len()),
        });
    }
    Ok(rows)
}

pub fn save_points_csv(ps: &PointSet, path: &Path) -> Result<()> {
    let mut out = String::new();
    for p in ps.points() {
        let row: Vec<String> = p.coords().iter().map(|c| format!("{c}")).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn save_points_json(ps: &PointSet, path: &Path) -> Result<()> {
    let rows: Vec<&[f64]> = ps.points().iter().map(|p| p.coords()).collect();
    std::fs::write(path, serde_json::to_string_pretty(&rows)?)?;
    Ok(())
}

/// Serializes any report deterministically (struct field order) so equal
/// runs emit byte-identical files.
pub fn emit_report<T: serde::Serialize>(report: &T, path: &Path) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(report)?;
    bytes.push(b'\n');
    std::fs::write(path, bytes)?;
    Ok(())
}
