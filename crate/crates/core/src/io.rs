//! CSV and JSON formats for points, values and matrices.
//!
//! Point files carry a header whose first field is the domain tag
//! (`real-line`, `unit-interval`, `complex-disk`, `complex-vector(k)`,
//! `interval-set`); each following row is one point:
//!
//! | tag                 | columns                      |
//! |---------------------|------------------------------|
//! | `real-line`         | `x`                          |
//! | `unit-interval`     | `x`                          |
//! | `complex-disk`      | `re, im` (`im` optional)     |
//! | `complex-vector(k)` | `re1, im1, …, rek, imk`      |
//! | `interval-set`      | `a1, b1, a2, b2, …`          |
//!
//! A chain file puts `level` in front of the tag and gives, per row, the
//! chain level at which the point joins. Raw matrices are headerless CSV
//! with entries written as `re` or `re+imi`. Lines starting with `#` are
//! comments.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kernels::{DomainTag, GramMatrix, IntervalSet, Point};
use crate::matrix::{CMatrix, Matrix};
use crate::rkhs::SampleSet;

fn reader(text: &str, headers: bool) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(headers)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    })
}

fn number(field: &str, line: u64) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: '{field}' is not a number")))
}

/// `1.5`, `-2`, `0.3+0.4i`, `0.5i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t = s.trim();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(Complex64::new(x, 0.0));
    }
    t.parse::<Complex64>()
        .map_err(|_| Error::Parse(format!("'{t}' is not a real or complex number")))
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

fn point_from_fields(tag: DomainTag, fields: &[f64], line: u64) -> Result<Point> {
    let arity = |n: usize| -> Result<()> {
        if fields.len() == n {
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "line {line}: {tag} point needs {n} columns, got {}",
                fields.len()
            )))
        }
    };
    match tag {
        DomainTag::RealLine => {
            arity(1)?;
            Ok(Point::Real(fields[0]))
        }
        DomainTag::UnitInterval => {
            arity(1)?;
            Ok(Point::Unit(fields[0]))
        }
        DomainTag::ComplexDisk => match fields.len() {
            1 => Ok(Point::Disk(Complex64::new(fields[0], 0.0))),
            _ => {
                arity(2)?;
                Ok(Point::Disk(Complex64::new(fields[0], fields[1])))
            }
        },
        DomainTag::ComplexVector(k) => {
            arity(2 * k)?;
            Ok(Point::Vector(
                fields.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect(),
            ))
        }
        DomainTag::IntervalSet => {
            if fields.is_empty() || !fields.len().is_multiple_of(2) {
                return Err(Error::Parse(format!(
                    "line {line}: interval-set needs an even, non-zero number of columns"
                )));
            }
            Ok(Point::Sets(IntervalSet::new(
                fields.chunks(2).map(|c| (c[0], c[1])).collect(),
            )?))
        }
    }
}

/// Points, and the chain level of each point when the file has a `level`
/// column.
fn parse_point_rows(text: &str) -> Result<(Vec<Point>, Option<Vec<usize>>)> {
    let mut rdr = reader(text, true);
    let header = rdr.headers()?.clone();
    let first = header.get(0).unwrap_or("");
    let (leveled, tag_field) = if first == "level" {
        (true, header.get(1).unwrap_or(""))
    } else {
        (false, first)
    };
    let tag: DomainTag = tag_field.parse()?;
    let mut points = Vec::new();
    let mut levels = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut fields: Vec<&str> = rec.iter().filter(|f| !f.is_empty()).collect();
        if fields.is_empty() {
            continue;
        }
        if leveled {
            let lv = fields.remove(0);
            levels.push(
                lv.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("line {line}: level '{lv}' is not an integer")))?,
            );
        }
        let nums = fields.iter().map(|f| number(f, line)).collect::<Result<Vec<_>>>()?;
        points.push(point_from_fields(tag, &nums, line)?);
    }
    Ok((points, leveled.then_some(levels)))
}

pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    Ok(parse_point_rows(text)?.0)
}

pub fn read_points(path: &Path) -> Result<Vec<Point>> {
    parse_points(&read_text(path)?)
}

/// Builds a chain from a leveled point file: level `k` holds every point
/// whose level is at most `k`.
pub fn parse_chain(text: &str) -> Result<SampleSet> {
    let (points, levels) = parse_point_rows(text)?;
    let Some(levels) = levels else {
        return SampleSet::new(points);
    };
    let Some(&top) = levels.iter().max() else {
        return Err(Error::InvalidInput("chain file has no points".into()));
    };
    let chain = (0..=top)
        .filter(|k| levels.contains(k))
        .map(|k| {
            points
                .iter()
                .zip(&levels)
                .filter(|(_, &l)| l <= k)
                .map(|(p, _)| p.clone())
                .collect()
        })
        .collect();
    SampleSet::from_chain(chain)
}

pub fn read_chain(path: &Path) -> Result<SampleSet> {
    parse_chain(&read_text(path)?)
}

/// One value per row under a header: a single column (`value`) holds real
/// or `a+bi` entries; two columns are read as real and imaginary parts.
pub fn parse_values(text: &str) -> Result<Vec<Complex64>> {
    let mut rdr = reader(text, true);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let fields: Vec<&str> = rec.iter().filter(|f| !f.is_empty()).collect();
        match fields.as_slice() {
            [] => continue,
            [v] => out.push(parse_complex(v)?),
            [re, im] => out.push(Complex64::new(number(re, line)?, number(im, line)?)),
            _ => return Err(Error::Parse(format!("line {line}: expected one or two columns"))),
        }
    }
    Ok(out)
}

pub fn read_values(path: &Path) -> Result<Vec<Complex64>> {
    parse_values(&read_text(path)?)
}

/// Rows of real numbers under a header.
pub fn parse_table(text: &str, columns: usize) -> Result<Vec<Vec<f64>>> {
    let mut rdr = reader(text, true);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        let fields: Vec<&str> = rec.iter().filter(|f| !f.is_empty()).collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != columns {
            return Err(Error::Parse(format!(
                "line {line}: expected {columns} columns, got {}",
                fields.len()
            )));
        }
        out.push(fields.iter().map(|f| number(f, line)).collect::<Result<_>>()?);
    }
    Ok(out)
}

pub fn read_table(path: &Path, columns: usize) -> Result<Vec<Vec<f64>>> {
    parse_table(&read_text(path)?, columns)
}

/// A headerless CSV matrix, or a JSON object with `n` and row-major
/// `entries` (numbers or `[re, im]` pairs), possibly nested under
/// `metrics` as written by the CLI.
pub fn parse_matrix(text: &str) -> Result<GramMatrix> {
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(text)?;
        let obj = if v.get("entries").is_some() { &v } else { v.get("metrics").unwrap_or(&v) };
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("matrix JSON needs an integer 'n'".into()))? as usize;
        let entries = obj
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("matrix JSON needs an 'entries' array".into()))?;
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        let data = entries.iter().map(json_complex).collect::<Result<Vec<_>>>()?;
        let points = match obj.get("points") {
            Some(p) if !p.is_null() => serde_json::from_value(p.clone())?,
            _ => Vec::new(),
        };
        let m = CMatrix::from_vec(n, n, data);
        return checked_square(m, points);
    }
    let mut rdr = reader(text, false);
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let fields: Vec<&str> = rec.iter().filter(|f| !f.is_empty()).collect();
        if fields.is_empty() {
            continue;
        }
        rows.push(fields.iter().map(|f| parse_complex(f)).collect::<Result<_>>()?);
    }
    let n = rows.len();
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: r.len(),
        });
    }
    checked_square(CMatrix::from_vec(n, n, rows.into_iter().flatten().collect()), Vec::new())
}

fn checked_square(m: CMatrix, points: Vec<Point>) -> Result<GramMatrix> {
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            if (m[(i, j)] - m[(j, i)].conj()).norm() > 1e-12 * (1.0 + m[(i, j)].norm()) {
                return Err(Error::InvalidInput(format!("matrix is not Hermitian at ({i}, {j})")));
            }
        }
    }
    let points = if points.len() == n { points } else { Vec::new() };
    Ok(GramMatrix::from_parts(m, points))
}

fn json_complex(v: &Value) -> Result<Complex64> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    if let Some([re, im]) = v.as_array().map(Vec::as_slice) {
        if let (Some(re), Some(im)) = (re.as_f64(), im.as_f64()) {
            return Ok(Complex64::new(re, im));
        }
    }
    Err(Error::Parse(format!("'{v}' is not a matrix entry")))
}

pub fn read_matrix(path: &Path) -> Result<GramMatrix> {
    parse_matrix(&read_text(path)?)
}

/// Headerless CSV, one matrix row per line.
pub fn matrix_csv(m: &CMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|&z| format_complex(z)).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn real_matrix_csv(m: &Matrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// A number for real values, `[re, im]` otherwise.
pub fn complex_json(z: Complex64) -> Value {
    if z.im == 0.0 {
        json!(z.re)
    } else {
        json!([z.re, z.im])
    }
}

pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(m.as_slice().iter().map(|&z| complex_json(z)).collect())
}

/// `{n, entries, points}` with row-major entries.
pub fn gram_json(g: &GramMatrix) -> Value {
    json!({
        "n": g.n(),
        "entries": matrix_json(g.entries()),
        "points": g.points(),
    })
}

/// Labeled CSV from a header and rows of already formatted fields.
pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_domain() {
        let pts = parse_points("real-line\n1\n2.5\n# comment\n-3\n").unwrap();
        assert_eq!(pts, vec![Point::Real(1.0), Point::Real(2.5), Point::Real(-3.0)]);
        let pts = parse_points("complex-disk,im\n0.1,0.2\n0.3\n").unwrap();
        assert_eq!(pts[0], Point::Disk(Complex64::new(0.1, 0.2)));
        assert_eq!(pts[1], Point::Disk(Complex64::new(0.3, 0.0)));
        let pts = parse_points("complex-vector(2)\n0.1,0,0.2,0.1\n").unwrap();
        assert_eq!(pts[0].tag(), DomainTag::ComplexVector(2));
        let pts = parse_points("interval-set\n0,0.5\n0.25,0.5,0.75,1\n").unwrap();
        assert_eq!(pts[1].tag(), DomainTag::IntervalSet);
        assert!(parse_points("real-line\n1,2\n").is_err());
        assert!(parse_points("moon\n1\n").is_err());
    }

    #[test]
    fn chains_from_levels() {
        let s = parse_chain("level,real-line\n0,1\n1,2\n1,-1\n2,3\n").unwrap();
        let levels = s.levels();
        assert_eq!(levels.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 3, 4]);
    }

    #[test]
    fn matrices_round_trip() {
        let m = CMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(2.0, 0.0),
                Complex64::new(0.5, -0.25),
                Complex64::new(0.5, 0.25),
                Complex64::new(1.0, 0.0),
            ],
        );
        let csv = matrix_csv(&m);
        assert_eq!(csv, "2,0.5-0.25i\n0.5+0.25i,1\n");
        assert_eq!(parse_matrix(&csv).unwrap().entries(), &m);
        let g = GramMatrix::from_parts(m.clone(), Vec::new());
        let js = serde_json::to_string(&gram_json(&g)).unwrap();
        assert_eq!(parse_matrix(&js).unwrap().entries(), &m);
        assert!(parse_matrix("1,2\n3,4\n").is_err());
    }

    #[test]
    fn values_and_numbers() {
        let v = parse_values("value\n1\n0.5-2i\n").unwrap();
        assert_eq!(v[1], Complex64::new(0.5, -2.0));
        let v = parse_values("re,im\n1,2\n").unwrap();
        assert_eq!(v[0], Complex64::new(1.0, 2.0));
        assert_eq!(parse_complex("0.5i").unwrap(), Complex64::new(0.0, 0.5));
        assert_eq!(format_complex(Complex64::new(1.0, -0.0)), "1");
    }
}
