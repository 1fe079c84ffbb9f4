//! Text formats for matrices, polynomials, sweeps and reports, and parsers
//! for the ones that are read back.
//!
//! CSV: comma separated, one header row, floats as `{:.16e}` (17
//! significant digits), LF line endings. JSON documents are one object with
//! `"meta"` and `"data"` keys.

use std::fmt::Write as _;

use faer::Mat;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::poly::MuPolynomial;
use crate::sweep::SweepResult;
use crate::verify::{VerificationReport, DEFAULT_GAMMA_GRID};

/// Largest dimension or entry count the parsers accept.
pub const MAX_PARSE_DIM: usize = 1 << 20;

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_cell(v: &Value) -> String {
    match v {
        Value::Null => "NaN".to_string(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) => u.to_string(),
            (None, Some(i)) => i.to_string(),
            _ => fmt_f64(n.as_f64().unwrap_or(f64::NAN)),
        },
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One JSON document: `{"meta": meta, "data": data}`, pretty printed, with a
/// trailing newline.
pub fn json_document(meta: Value, data: Value) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "data": data }))
        .unwrap_or_else(|_| "{}".to_string());
    s.push('\n');
    s
}

/// Dense matrix as CSV with header `c0,c1,…`.
pub fn matrix_to_csv(a: &Mat<f64>) -> String {
    let mut out = String::new();
    let header: Vec<String> = (0..a.ncols()).map(|j| format!("c{j}")).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for i in 0..a.nrows() {
        let row: Vec<String> = (0..a.ncols()).map(|j| fmt_f64(a[(i, j)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Inverse of [`matrix_to_csv`].
pub fn parse_matrix_csv(text: &str) -> Result<Mat<f64>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let ncols = header.split(',').count();
    for (j, name) in header.split(',').enumerate() {
        if name.trim() != format!("c{j}") {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected column name c{j}, found '{}'", name.trim()),
            });
        }
    }
    if ncols > MAX_PARSE_DIM {
        return Err(Error::Parse {
            line: 1,
            msg: "too many columns".into(),
        });
    }
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in lines {
        let row = line
            .split(',')
            .map(|c| parse_f64(c, i + 1))
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != ncols {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected {ncols} fields, found {}", row.len()),
            });
        }
        rows.push(row);
        if rows.len().saturating_mul(ncols) > MAX_PARSE_DIM {
            return Err(Error::Parse {
                line: i + 1,
                msg: "matrix too large".into(),
            });
        }
    }
    Ok(Mat::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

/// Dense matrix as `{"rows", "cols", "entries"}` row-major.
pub fn matrix_to_json(a: &Mat<f64>, meta: Value) -> String {
    let entries: Vec<Vec<Value>> = (0..a.nrows())
        .map(|i| (0..a.ncols()).map(|j| json_f64(a[(i, j)])).collect())
        .collect();
    json_document(
        meta,
        json!({ "rows": a.nrows(), "cols": a.ncols(), "entries": entries }),
    )
}

fn json_f64(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Sparse triplets: a `rows cols nnz` line, then one `i j value` line per
/// entry with 0-based indices.
pub fn coordinate_to_string(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> String {
    let mut out = format!("{rows} {cols} {}\n", triplets.len());
    for (i, j, v) in triplets {
        let _ = writeln!(out, "{i} {j} {}", fmt_f64(*v));
    }
    out
}

/// Parsed coordinate-format matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Coordinate {
    pub rows: usize,
    pub cols: usize,
    pub triplets: Vec<(usize, usize, f64)>,
}

impl Coordinate {
    /// Dense form; repeated entries add up.
    pub fn to_dense(&self) -> Mat<f64> {
        let mut a = Mat::zeros(self.rows, self.cols);
        for (i, j, v) in &self.triplets {
            a[(*i, *j)] += *v;
        }
        a
    }
}

/// Inverse of [`coordinate_to_string`]. Blank lines and lines starting with
/// `%` are skipped.
pub fn parse_coordinate(text: &str) -> Result<Coordinate> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing size line".into(),
    })?;
    let sizes = header
        .split_whitespace()
        .map(|t| parse_usize(t, hl))
        .collect::<Result<Vec<usize>>>()?;
    let [rows, cols, nnz] = sizes[..] else {
        return Err(Error::Parse {
            line: hl,
            msg: "size line must be 'rows cols nnz'".into(),
        });
    };
    if rows.saturating_mul(cols) > MAX_PARSE_DIM || nnz > MAX_PARSE_DIM {
        return Err(Error::Parse {
            line: hl,
            msg: "matrix too large".into(),
        });
    }
    let mut triplets = Vec::with_capacity(nnz);
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(Error::Parse {
                line: ln,
                msg: "entry line must be 'i j value'".into(),
            });
        }
        let i = parse_usize(toks[0], ln)?;
        let j = parse_usize(toks[1], ln)?;
        let v = parse_f64(toks[2], ln)?;
        if i >= rows || j >= cols {
            return Err(Error::Parse {
                line: ln,
                msg: format!("entry ({i}, {j}) outside {rows}x{cols}"),
            });
        }
        if triplets.len() == nnz {
            return Err(Error::Parse {
                line: ln,
                msg: format!("more than {nnz} entries"),
            });
        }
        triplets.push((i, j, v));
    }
    if triplets.len() != nnz {
        return Err(Error::Parse {
            line: hl,
            msg: format!("expected {nnz} entries, found {}", triplets.len()),
        });
    }
    Ok(Coordinate {
        rows,
        cols,
        triplets,
    })
}

/// Polynomial as `{"meta", "data": {"degree", "coeffs"}}`, ascending powers.
pub fn polynomial_to_json(p: &MuPolynomial, meta: Value) -> String {
    let coeffs: Vec<Value> = p.coeffs().iter().map(|c| json_f64(*c)).collect();
    let degree = if p.is_zero() {
        Value::Null
    } else {
        Value::from(p.degree())
    };
    json_document(meta, json!({ "degree": degree, "coeffs": coeffs }))
}

/// Polynomial as CSV rows `power,coeff`.
pub fn polynomial_to_csv(p: &MuPolynomial) -> String {
    let mut out = String::from("power,coeff\n");
    for (k, c) in p.coeffs().iter().enumerate() {
        let _ = writeln!(out, "{k},{}", fmt_f64(*c));
    }
    out
}

/// Reads a polynomial from a bare coefficient array, a `{"coeffs": [...]}`
/// object, or a full document with the coefficients under `"data"`.
pub fn parse_polynomial_json(text: &str) -> Result<MuPolynomial> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let arr = match &v {
        Value::Array(_) => &v,
        Value::Object(o) => match (o.get("coeffs"), o.get("data")) {
            (Some(c), _) => c,
            (None, Some(Value::Object(d))) => d.get("coeffs").ok_or(Error::Parse {
                line: 1,
                msg: "missing data.coeffs".into(),
            })?,
            _ => {
                return Err(Error::Parse {
                    line: 1,
                    msg: "expected 'coeffs' or 'data.coeffs'".into(),
                })
            }
        },
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "expected an array or object".into(),
            })
        }
    };
    let Value::Array(items) = arr else {
        return Err(Error::Parse {
            line: 1,
            msg: "coefficients must be an array".into(),
        });
    };
    if items.len() > MAX_PARSE_DIM {
        return Err(Error::Parse {
            line: 1,
            msg: "too many coefficients".into(),
        });
    }
    let coeffs = items
        .iter()
        .map(|c| match c.as_f64() {
            Some(x) if x.is_finite() => Ok(x),
            _ => Err(Error::Parse {
                line: 1,
                msg: format!("coefficient {c} is not a finite number"),
            }),
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(MuPolynomial::new(coeffs))
}

/// Sweep rows as CSV: grid columns, then value columns.
pub fn sweep_to_csv(r: &SweepResult) -> String {
    let mut out = r.header().join(",");
    out.push('\n');
    for row in r.rows() {
        let cells: Vec<String> = row.into_iter().map(fmt_cell).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Sweep as a JSON document; `data` holds one object per row.
pub fn sweep_to_json(r: &SweepResult, extra_meta: Map<String, Value>) -> String {
    let header = r.header();
    let data: Vec<Value> = r
        .rows()
        .map(|row| {
            let obj: Map<String, Value> = header
                .iter()
                .cloned()
                .zip(row.into_iter().cloned())
                .collect();
            Value::Object(obj)
        })
        .collect();
    let mut meta = extra_meta;
    meta.insert("name".into(), Value::from(r.name.clone()));
    meta.insert("columns".into(), json!(header));
    meta.insert("summary".into(), Value::Object(r.summary.clone()));
    meta.insert(
        "fits".into(),
        serde_json::to_value(&r.fits).unwrap_or(Value::Null),
    );
    json_document(Value::Object(meta), Value::Array(data))
}

/// Verification reports as CSV.
pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("check_name,passed,margin,relation,tolerance,parameters\n");
    for r in reports {
        let rel = match r.relation {
            crate::verify::Relation::Below => "<",
            crate::verify::Relation::Above => ">",
        };
        // parameters are JSON; quote for CSV
        let params = Value::Object(r.parameters.clone())
            .to_string()
            .replace('"', "\"\"");
        let _ = writeln!(
            out,
            "{},{},{},{},{},\"{}\"",
            r.check_name,
            r.passed,
            fmt_f64(r.margin),
            rel,
            fmt_f64(r.tolerance),
            params
        );
    }
    out
}

/// Verification reports as a JSON document with pass/fail counts in `meta`.
pub fn reports_to_json(reports: &[VerificationReport], extra_meta: Map<String, Value>) -> String {
    let failed = reports.iter().filter(|r| !r.passed).count();
    let mut meta = extra_meta;
    meta.insert("checks".into(), Value::from(reports.len()));
    meta.insert("failed".into(), Value::from(failed));
    meta.insert("all_passed".into(), Value::from(failed == 0));
    json_document(
        Value::Object(meta),
        serde_json::to_value(reports).unwrap_or(Value::Null),
    )
}

fn parse_f64(tok: &str, line: usize) -> Result<f64> {
    tok.trim().parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("'{}' is not a number", tok.trim()),
    })
}

fn parse_usize(tok: &str, line: usize) -> Result<usize> {
    tok.trim().parse::<usize>().map_err(|_| Error::Parse {
        line,
        msg: format!("'{}' is not a non-negative integer", tok.trim()),
    })
}

/// A list of floats: `default` (the standard `γ` grid), a comma list
/// `a,b,c`, or a range `start:stop:step` with both ends included.
pub fn parse_float_grid(text: &str) -> Result<Vec<f64>> {
    let t = text.trim();
    if t == "default" {
        return Ok(DEFAULT_GAMMA_GRID.to_vec());
    }
    if t.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "empty grid".into(),
        });
    }
    if t.contains(':') {
        let parts = t
            .split(':')
            .map(|p| parse_f64(p, 1))
            .collect::<Result<Vec<f64>>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(Error::Parse {
                line: 1,
                msg: "range must be start:stop:step".into(),
            });
        };
        if !(start.is_finite() && stop.is_finite() && step.is_finite())
            || step <= 0.0
            || stop < start
        {
            return Err(Error::Parse {
                line: 1,
                msg: "range needs finite start <= stop and step > 0".into(),
            });
        }
        let count = ((stop - start) / step + 1e-9).floor();
        if count >= MAX_PARSE_DIM as f64 {
            return Err(Error::Parse {
                line: 1,
                msg: "range too long".into(),
            });
        }
        return Ok((0..=count as usize)
            .map(|i| start + i as f64 * step)
            .collect());
    }
    let v = t
        .split(',')
        .map(|p| parse_f64(p, 1))
        .collect::<Result<Vec<f64>>>()?;
    if v.len() > MAX_PARSE_DIM {
        return Err(Error::Parse {
            line: 1,
            msg: "grid too long".into(),
        });
    }
    Ok(v)
}

/// Comma-separated positive integers, for mode-count grids.
pub fn parse_usize_grid(text: &str) -> Result<Vec<usize>> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "empty grid".into(),
        });
    }
    let v = t
        .split(',')
        .map(|p| parse_usize(p, 1))
        .collect::<Result<Vec<usize>>>()?;
    if v.len() > MAX_PARSE_DIM {
        return Err(Error::Parse {
            line: 1,
            msg: "grid too long".into(),
        });
    }
    Ok(v)
}
