//! Matrix Market coordinate and array files (real and integer fields).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

struct Header {
    layout: Layout,
    symmetry: Symmetry,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: &str) -> Result<Header> {
    let t: Vec<String> = line.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if t.len() != 5 || t[0] != "%%matrixmarket" || t[1] != "matrix" {
        return Err(parse_err(1, "expected `%%MatrixMarket matrix <format> <field> <symmetry>`"));
    }
    let layout = match t[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        f => return Err(parse_err(1, format!("unsupported format `{f}`"))),
    };
    match t[3].as_str() {
        "real" | "double" | "integer" => {}
        "pattern" => return Err(parse_err(1, "pattern matrices carry no values")),
        f => return Err(parse_err(1, format!("unsupported field `{f}`"))),
    }
    let symmetry = match t[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        s => return Err(parse_err(1, format!("unsupported symmetry `{s}`"))),
    };
    Ok(Header { layout, symmetry })
}

/// Data lines with their 1-based line numbers; comments and blanks skipped.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .skip(1)
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'))
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("cannot parse {what}")))
}

fn read_text(reader: impl Read) -> Result<String> {
    let mut s = String::new();
    BufReader::new(reader).read_to_string(&mut s)?;
    Ok(s)
}

/// Parses a coordinate-format matrix. Symmetric and skew-symmetric storage
/// is expanded; duplicate entries are summed.
pub fn parse_matrix_market(reader: impl Read) -> Result<CsrMatrix> {
    let text = read_text(reader)?;
    let first = text.lines().next().ok_or_else(|| parse_err(1, "empty file"))?;
    let header = parse_header(first)?;
    if header.layout != Layout::Coordinate {
        return Err(parse_err(1, "expected a coordinate matrix"));
    }
    let mut lines = data_lines(&text);
    let (ln, size) = lines.next().ok_or_else(|| parse_err(2, "missing size line"))?;
    let mut tok = size.split_whitespace();
    let rows: usize = field(tok.next(), ln, "row count")?;
    let cols: usize = field(tok.next(), ln, "column count")?;
    let nnz: usize = field(tok.next(), ln, "entry count")?;
    let mut triplets = Vec::with_capacity(nnz * 2);
    let mut seen = 0;
    for (ln, l) in lines {
        let mut tok = l.split_whitespace();
        let i: usize = field(tok.next(), ln, "row index")?;
        let j: usize = field(tok.next(), ln, "column index")?;
        let v: f64 = field(tok.next(), ln, "value")?;
        if i == 0 || j == 0 || i > rows || j > cols {
            return Err(parse_err(ln, format!("index ({i}, {j}) outside {rows}x{cols}")));
        }
        if !v.is_finite() {
            return Err(parse_err(ln, "non-finite value"));
        }
        triplets.push((i - 1, j - 1, v));
        if i != j {
            match header.symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => triplets.push((j - 1, i - 1, v)),
                Symmetry::SkewSymmetric => triplets.push((j - 1, i - 1, -v)),
            }
        }
        seen += 1;
    }
    if seen != nnz {
        return Err(parse_err(ln, format!("header announces {nnz} entries, found {seen}")));
    }
    CsrMatrix::from_triplets(rows, cols, triplets)
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    parse_matrix_market(File::open(path)?)
}

/// General coordinate format, 1-based, values with 17 significant digits so
/// that reading back is exact.
pub fn write_matrix_market_to(a: &CsrMatrix, mut w: impl Write) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.rows(), a.cols(), a.nnz())?;
    for i in 0..a.rows() {
        let (cols, vals) = a.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
        }
    }
    Ok(())
}

pub fn write_matrix_market(a: &CsrMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_matrix_market_to(a, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Reads a vector stored either as a one-column Matrix Market array or as
/// whitespace-separated numbers (`%` and `#` start comments).
pub fn parse_vector(reader: impl Read) -> Result<Vec<f64>> {
    let text = read_text(reader)?;
    let first = text.lines().next().unwrap_or("");
    if first.trim_start().starts_with("%%") {
        let header = parse_header(first)?;
        let mut lines = data_lines(&text);
        let (ln, size) = lines.next().ok_or_else(|| parse_err(2, "missing size line"))?;
        let mut tok = size.split_whitespace();
        let rows: usize = field(tok.next(), ln, "row count")?;
        let cols: usize = field(tok.next(), ln, "column count")?;
        if cols != 1 {
            return Err(parse_err(ln, format!("expected a single column, found {cols}")));
        }
        let mut out = vec![0.0; rows];
        match header.layout {
            Layout::Array => {
                let mut k = 0;
                for (ln, l) in lines {
                    for t in l.split_whitespace() {
                        if k == rows {
                            return Err(parse_err(ln, "more values than rows"));
                        }
                        out[k] = field(Some(t), ln, "value")?;
                        k += 1;
                    }
                }
                if k != rows {
                    return Err(parse_err(ln, format!("expected {rows} values, found {k}")));
                }
            }
            Layout::Coordinate => {
                let a = parse_matrix_market(text.as_bytes())?;
                a.spmv_into(&[1.0], &mut out);
            }
        }
        check_finite(out)
    } else {
        let mut out = Vec::new();
        for (i, l) in text.lines().enumerate() {
            let l = l.split(['%', '#']).next().unwrap_or("");
            for t in l.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                out.push(field(Some(t), i + 1, "value")?);
            }
        }
        check_finite(out)
    }
}

fn check_finite(v: Vec<f64>) -> Result<Vec<f64>> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(v),
    }
}

pub fn read_vector(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    parse_vector(File::open(path)?)
}

pub fn write_vector_to(v: &[f64], mut w: impl Write) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} 1", v.len())?;
    for x in v {
        writeln!(w, "{x:.16e}")?;
    }
    Ok(())
}

pub fn write_vector(v: &[f64], path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_vector_to(v, &mut w)?;
    w.flush()?;
    Ok(())
}
