//! Plain-text matrix files: a header line `q rows cols`, then one line per row
//! of space-separated canonical element indices.

use std::fs;
use std::path::Path;

use super::GfMatrix;
use crate::error::{Error, Result};
use crate::field::FieldSpec;

pub fn format_matrix(m: &GfMatrix) -> String {
    let mut out = format!("{} {} {}\n", m.field().q(), m.rows(), m.cols());
    for row in m.to_index_rows() {
        let parts: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        out.push_str(&parts.join(" "));
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

/// Parses a matrix file. When `field` is given its order must match the
/// header; otherwise GF(q) with the default modulus is used.
pub fn parse_matrix(text: &str, field: Option<&FieldSpec>) -> Result<GfMatrix> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(parse_err(1, "header must be `q rows cols`"));
    }
    let q: u32 = toks[0].parse().map_err(|_| parse_err(1, format!("invalid field order {:?}", toks[0])))?;
    let rows = parse_usize(toks[1], 1, "row count")?;
    let cols = parse_usize(toks[2], 1, "column count")?;
    let field = match field {
        Some(f) if f.q() != q => return Err(parse_err(1, format!("file is over GF({q}), expected GF({})", f.q()))),
        Some(f) => f.clone(),
        None => FieldSpec::from_order(q)?,
    };
    let mut data = Vec::new();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        if data.len() == rows {
            if line.trim().is_empty() {
                continue;
            }
            return Err(parse_err(lineno, "more rows than the header declares"));
        }
        let mut row = Vec::with_capacity(cols.min(line.len()));
        for tok in line.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| parse_err(lineno, format!("invalid entry {tok:?}")))?;
            if v >= q {
                return Err(parse_err(lineno, format!("entry {v} is not an element of GF({q})")));
            }
            row.push(v);
        }
        if row.len() != cols {
            return Err(parse_err(lineno, format!("expected {cols} entries, found {}", row.len())));
        }
        data.push(row);
    }
    if data.len() != rows {
        return Err(parse_err(data.len() + 2, format!("expected {rows} rows, found {}", data.len())));
    }
    GfMatrix::from_index_rows(&field, cols, &data)
}

pub fn read_matrix(path: impl AsRef<Path>, field: Option<&FieldSpec>) -> Result<GfMatrix> {
    parse_matrix(&fs::read_to_string(path)?, field)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &GfMatrix) -> Result<()> {
    fs::write(path, format_matrix(m))?;
    Ok(())
}
