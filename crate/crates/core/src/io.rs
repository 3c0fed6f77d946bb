//! Tab-separated text formats. Lines starting with `#` carry metadata;
//! numbers are written with 17 significant digits so they read back exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::evolution::{ProbabilityField, TimeGrid};
use crate::fractal::{DimensionEstimate, ScalingFit};

const LABEL_KEY: &str = "label: ";

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn fmt_num(v: f64) -> String {
    format!("{v:.16e}")
}

fn header_block(header: &[String]) -> String {
    let mut out = String::new();
    for line in header.iter().flat_map(|h| h.lines()) {
        let _ = writeln!(out, "# {line}");
    }
    out
}

/// A parsed table: `#` lines (without the marker) and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_table(path: &Path, columns: usize) -> Result<Table> {
    let text = read_text(path)?;
    let mut comments = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let parse_err = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        if let Some(c) = line.strip_prefix('#') {
            comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split('\t')
            .map(|f| f.trim().parse::<f64>().map_err(|e| parse_err(format!("'{f}': {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != columns {
            return Err(parse_err(format!("expected {columns} columns, found {}", row.len())));
        }
        rows.push(row);
    }
    Ok(Table { comments, rows })
}

fn column(rows: &[Vec<f64>], c: usize) -> Vec<f64> {
    rows.iter().map(|r| r[c]).collect()
}

pub fn curve_to_tsv(curve: &Curve, header: &[String], names: (&str, &str)) -> String {
    let mut out = header_block(header);
    let _ = writeln!(out, "# {LABEL_KEY}{}", curve.label());
    let _ = writeln!(out, "# {}\t{}", names.0, names.1);
    for (x, y) in curve.points() {
        let _ = writeln!(out, "{}\t{}", fmt_num(x), fmt_num(y));
    }
    out
}

pub fn write_curve_tsv(curve: &Curve, path: &Path, header: &[String], names: (&str, &str)) -> Result<()> {
    write_bytes(path, curve_to_tsv(curve, header, names).as_bytes())
}

pub fn read_curve_tsv(path: &Path) -> Result<Curve> {
    let table = read_table(path, 2)?;
    let label = table
        .comments
        .iter()
        .find_map(|c| c.strip_prefix(LABEL_KEY))
        .unwrap_or_default()
        .to_string();
    Curve::new(column(&table.rows, 0), column(&table.rows, 1), label).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: e.to_string(),
    })
}

/// One row per `(t, x)` pair, time-major.
pub fn write_field_tsv(field: &ProbabilityField, path: &Path, header: &[String]) -> Result<()> {
    let mut out = header_block(header);
    let _ = writeln!(out, "# sites: {}", field.n_sites());
    let _ = writeln!(out, "# t\tx\tP");
    for (k, &t) in field.grid().samples().iter().enumerate() {
        let tt = fmt_num(t);
        for (x, p) in field.slice(k).iter().enumerate() {
            let _ = writeln!(out, "{tt}\t{}\t{}", x + 1, fmt_num(*p));
        }
    }
    write_bytes(path, out.as_bytes())
}

/// The grid is rebuilt from the sample times as an explicit grid.
pub fn read_field_tsv(path: &Path) -> Result<ProbabilityField> {
    let table = read_table(path, 3)?;
    let bad = |message: String| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message,
    };
    let n = table
        .comments
        .iter()
        .find_map(|c| c.strip_prefix("sites: "))
        .and_then(|v| v.trim().parse::<usize>().ok())
        .ok_or_else(|| bad("missing '# sites:' header".into()))?;
    if n == 0 || table.rows.len() % n != 0 {
        return Err(bad(format!("{} rows do not tile {n} sites", table.rows.len())));
    }
    let times: Vec<f64> = table.rows.chunks(n).map(|c| c[0][0]).collect();
    for (k, chunk) in table.rows.chunks(n).enumerate() {
        for (x, row) in chunk.iter().enumerate() {
            if row[0] != times[k] || row[1] != (x + 1) as f64 {
                return Err(bad(format!("row for sample {k}, site {} is out of order", x + 1)));
            }
        }
    }
    let grid = TimeGrid::explicit(times).map_err(|e| bad(e.to_string()))?;
    ProbabilityField::from_values(n, grid, column(&table.rows, 2)).map_err(|e| bad(e.to_string()))
}

pub fn write_potential_tsv(potential: &[f64], path: &Path, header: &[String]) -> Result<()> {
    let mut out = header_block(header);
    let _ = writeln!(out, "# x\teps");
    for (x, e) in potential.iter().enumerate() {
        let _ = writeln!(out, "{}\t{}", x + 1, fmt_num(*e));
    }
    write_bytes(path, out.as_bytes())
}

/// Sites must be listed as `1, 2, ..., N`.
pub fn read_potential_tsv(path: &Path) -> Result<Vec<f64>> {
    let table = read_table(path, 2)?;
    for (i, row) in table.rows.iter().enumerate() {
        if row[0] != (i + 1) as f64 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: 0,
                message: format!("site column must run 1..N, found {} at row {}", row[0], i + 1),
            });
        }
    }
    Ok(column(&table.rows, 1))
}

pub fn counts_to_tsv(est: &DimensionEstimate, header: &[String]) -> String {
    let mut out = header_block(header);
    let _ = writeln!(out, "# b\tN(b,a)");
    for (b, n) in &est.counts {
        let _ = writeln!(out, "{b}\t{n}");
    }
    out
}

/// Flat `key=value` block.
pub fn dimension_report(est: &DimensionEstimate) -> String {
    let bs: Vec<String> = est.params.b_values.iter().map(u64::to_string).collect();
    let local: Vec<String> = est
        .local_slopes
        .iter()
        .map(|(b, s)| format!("{b:.1}:{s:.4}"))
        .collect();
    format!(
        "dimension={}\nstderr={}\nr2={}\na={}\ntau={}\nb={}\nlocal_slopes={}\nin_range={}\n",
        est.dimension,
        est.slope_stderr,
        est.r_squared,
        est.params.a,
        est.params.tau,
        bs.join(","),
        local.join(","),
        est.in_range()
    )
}

pub fn scaling_report(fit: &ScalingFit) -> String {
    let pts: Vec<String> = fit.points.iter().map(|(n, v)| format!("{n}:{v:.6}")).collect();
    format!(
        "kind={}\ndimension={}\nstderr={}\nr2={}\npoints={}\n",
        fit.kind,
        fit.dimension,
        fit.slope_stderr,
        fit.r_squared,
        pts.join(",")
    )
}
