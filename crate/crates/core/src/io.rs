//! Text formats shared by the CLI and the harness: points CSV, region and
//! structure arguments, and number formatting.

use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use crate::areal::{build_grid, load_structure, load_structure_file, AdjacencyRule, ArealStructure};
use crate::error::{Error, Result};
use crate::geometry::{Point, Rect, Region};
use crate::theory::LatticeCount;

/// Format with 6 significant digits in the style of C's `%g`: trailing zeros
/// are trimmed and very large or small magnitudes use an exponent.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // let the formatter do the rounding, then read back the exponent
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        return format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
    }
    let decimals = (5 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Deserialize)]
struct XY {
    x: f64,
    y: f64,
}

/// Points from CSV text with a header containing `x` and `y`.
pub fn read_points_csv<R: Read>(reader: R) -> Result<Vec<Point>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let XY { x, y } = row?;
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::Domain(format!("non-finite coordinate ({x}, {y})")));
        }
        out.push(Point::new(x, y));
    }
    Ok(out)
}

pub fn read_points_file(path: impl AsRef<Path>) -> Result<Vec<Point>> {
    read_points_csv(std::fs::File::open(path)?)
}

fn parse_floats(s: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|e| Error::Config(format!("{what}: {e}")))?;
    if v.len() != expected {
        return Err(Error::Config(format!(
            "{what}: expected {expected} numbers, got {}",
            v.len()
        )));
    }
    Ok(v)
}

/// `rect:x0,y0,x1,y1` or a path to a GeoJSON FeatureCollection whose union
/// is the region.
pub fn parse_region_arg(arg: &str) -> Result<Region> {
    if let Some(spec) = arg.strip_prefix("rect:") {
        let v = parse_floats(spec, 4, "rect")?;
        return Region::from_rect(Rect::new(v[0], v[1], v[2], v[3]));
    }
    let path = arg.strip_prefix("file:").unwrap_or(arg);
    Ok(load_structure_file(path, AdjacencyRule::Rook)?.region().clone())
}

/// `grid:R,C,S` or `file:path` (GeoJSON).
pub fn parse_structure_arg(arg: &str, rule: AdjacencyRule) -> Result<ArealStructure> {
    if let Some(spec) = arg.strip_prefix("grid:") {
        let v = parse_floats(spec, 3, "grid")?;
        let (rows, cols) = (v[0], v[1]);
        if rows.fract() != 0.0 || cols.fract() != 0.0 || rows < 1.0 || cols < 1.0 {
            return Err(Error::Config(format!(
                "grid rows/cols must be positive integers: {spec}"
            )));
        }
        return build_grid(rows as usize, cols as usize, v[2]);
    }
    if let Some(path) = arg.strip_prefix("file:") {
        let text = std::fs::read_to_string(path)?;
        return load_structure(&text, rule);
    }
    Err(Error::Config(format!(
        "structure must be grid:R,C,S or file:PATH, got `{arg}`"
    )))
}

/// Comma-separated radii.
pub fn parse_radii_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("radii: {e}")))
        })
        .collect()
}

/// CSV of the divergence table: `t,n_of_t,k_csr,error,scaled_error`.
pub fn theory_csv(rows: &[LatticeCount]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "n_of_t", "k_csr", "error", "abs_error_over_sqrt_t"])?;
    for r in rows {
        w.write_record([
            fmt_sig6(r.t),
            r.n_of_t.to_string(),
            fmt_sig6(r.k_csr),
            fmt_sig6(r.error),
            fmt_sig6(r.scaled_error),
        ])?;
    }
    into_string(w)
}

pub(crate) fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
