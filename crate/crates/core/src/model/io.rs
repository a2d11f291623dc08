//! Matrix Market (`.mtx`) reading and writing.
//!
//! Reads coordinate and array layouts with real, integer, complex or pattern
//! fields and general, symmetric, skew-symmetric or hermitian symmetry.
//! Writes the array layout with shortest round-trip float formatting.

use super::StateSpaceSystem;
use crate::error::{Error, Result};
use crate::numkernel::{c64, ComplexMatrix, ComplexVector, C64};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Field {
    Real,
    Complex,
    Pattern,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        line,
        message: message.into(),
    }
}

fn parse_header(path: &Path, line: &str) -> Result<(Layout, Field, Symmetry)> {
    let tokens: Vec<String> = line.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(path, 1, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'"));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(parse_err(path, 1, format!("unknown layout '{other}'"))),
    };
    let field = match tokens[3].as_str() {
        "real" | "double" | "integer" => Field::Real,
        "complex" => Field::Complex,
        "pattern" => Field::Pattern,
        other => return Err(parse_err(path, 1, format!("unknown field '{other}'"))),
    };
    let symmetry = match tokens[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(parse_err(path, 1, format!("unknown symmetry '{other}'"))),
    };
    if layout == Layout::Array && field == Field::Pattern {
        return Err(parse_err(path, 1, "pattern field is only valid for coordinate layout"));
    }
    Ok((layout, field, symmetry))
}

fn parse_number(path: &Path, line: usize, tok: Option<&str>) -> Result<f64> {
    let tok = tok.ok_or_else(|| parse_err(path, line, "missing value"))?;
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(path, line, format!("invalid number '{tok}'")))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite value '{tok}'")));
    }
    Ok(v)
}

fn parse_index(path: &Path, line: usize, tok: Option<&str>, bound: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(path, line, "missing index"))?;
    let i: usize = tok
        .parse()
        .map_err(|_| parse_err(path, line, format!("invalid index '{tok}'")))?;
    if i == 0 || i > bound {
        return Err(parse_err(path, line, format!("index {i} out of range 1..={bound}")));
    }
    Ok(i - 1)
}

fn parse_value<'a>(path: &Path, line: usize, field: Field, toks: &mut impl Iterator<Item = &'a str>) -> Result<C64> {
    match field {
        Field::Pattern => Ok(c64(1.0, 0.0)),
        Field::Real => Ok(c64(parse_number(path, line, toks.next())?, 0.0)),
        Field::Complex => {
            let re = parse_number(path, line, toks.next())?;
            let im = parse_number(path, line, toks.next())?;
            Ok(c64(re, im))
        }
    }
}

fn mirror(symmetry: Symmetry, v: C64) -> C64 {
    match symmetry {
        Symmetry::General | Symmetry::Symmetric => v,
        Symmetry::SkewSymmetric => -v,
        Symmetry::Hermitian => v.conj(),
    }
}

/// Parses Matrix Market text; `path` is used only for error messages.
pub fn parse_matrix_market(path: &Path, text: &str) -> Result<ComplexMatrix> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let (layout, field, symmetry) = parse_header(path, header)?;
    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (size_line, size) = body.next().ok_or_else(|| parse_err(path, 2, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| parse_err(path, size_line, "invalid size line"))?;
    let expected = if layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(parse_err(path, size_line, format!("size line needs {expected} integers")));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if symmetry != Symmetry::General && rows != cols {
        return Err(parse_err(path, size_line, "symmetric storage requires a square matrix"));
    }
    let mut m = ComplexMatrix::zeros(rows, cols);
    match layout {
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut seen = 0;
            for (ln, l) in body {
                if seen == nnz {
                    return Err(parse_err(path, ln, "more entries than declared"));
                }
                let mut toks = l.split_whitespace();
                let i = parse_index(path, ln, toks.next(), rows)?;
                let j = parse_index(path, ln, toks.next(), cols)?;
                let v = parse_value(path, ln, field, &mut toks)?;
                m[(i, j)] += v;
                if i != j && symmetry != Symmetry::General {
                    m[(j, i)] += mirror(symmetry, v);
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(path, size_line, format!("declared {nnz} entries, found {seen}")));
            }
        }
        Layout::Array => {
            let mut slots: Vec<(usize, usize)> = Vec::with_capacity(rows * cols);
            for j in 0..cols {
                let start = match symmetry {
                    Symmetry::General => 0,
                    Symmetry::SkewSymmetric => j + 1,
                    _ => j,
                };
                for i in start..rows {
                    slots.push((i, j));
                }
            }
            let mut next = slots.iter();
            let mut last_line = size_line;
            for (ln, l) in body {
                last_line = ln;
                let mut toks = l.split_whitespace();
                let &(i, j) = next
                    .next()
                    .ok_or_else(|| parse_err(path, ln, "more entries than the declared size"))?;
                let v = parse_value(path, ln, field, &mut toks)?;
                m[(i, j)] = v;
                if i != j && symmetry != Symmetry::General {
                    m[(j, i)] = mirror(symmetry, v);
                }
            }
            if next.next().is_some() {
                return Err(parse_err(path, last_line, "fewer entries than the declared size"));
            }
        }
    }
    Ok(m)
}

pub fn read_matrix_market(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_matrix_market(path, &text)
}

/// Array-layout text for `m`; the field is `real` when every imaginary part is zero.
pub fn format_matrix_market_array(m: &ComplexMatrix) -> String {
    // -0.0 imaginary parts force the complex field so they survive a round trip
    let is_real = m.iter().all(|z| z.im.to_bits() == 0);
    let mut out = String::new();
    let field = if is_real { "real" } else { "complex" };
    let _ = writeln!(out, "%%MatrixMarket matrix array {field} general");
    let _ = writeln!(out, "{} {}", m.nrows(), m.ncols());
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if is_real {
                let _ = writeln!(out, "{:e}", z.re);
            } else {
                let _ = writeln!(out, "{:e} {:e}", z.re, z.im);
            }
        }
    }
    out
}

pub fn write_matrix_market_array(path: &Path, m: &ComplexMatrix) -> Result<()> {
    std::fs::write(path, format_matrix_market_array(m)).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn read_vector(path: &Path) -> Result<ComplexVector> {
    let m = read_matrix_market(path)?;
    match m.shape() {
        (_, 1) => Ok(ComplexVector::from_column_slice(m.as_slice())),
        (1, _) => Ok(ComplexVector::from_iterator(m.ncols(), m.iter().copied())),
        (r, c) => Err(Error::DimensionMismatch(format!(
            "{} holds a {r}x{c} matrix, expected a vector",
            path.display()
        ))),
    }
}

/// File locations of a system; relative paths resolve against `root`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SystemFiles {
    pub root: Option<PathBuf>,
    pub a: PathBuf,
    pub e: Option<PathBuf>,
    pub b: PathBuf,
    pub c: PathBuf,
}

impl SystemFiles {
    fn resolve(&self, p: &Path) -> PathBuf {
        match &self.root {
            Some(root) if p.is_relative() => root.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn load(&self) -> Result<StateSpaceSystem> {
        let e = self.e.as_ref().map(|p| self.resolve(p));
        load_system(&self.resolve(&self.a), e.as_deref(), &self.resolve(&self.b), &self.resolve(&self.c))
    }
}

/// Assembles a system from Matrix Market files; a missing E means the identity.
pub fn load_system(a: &Path, e: Option<&Path>, b: &Path, c: &Path) -> Result<StateSpaceSystem> {
    let a_mat = read_matrix_market(a)?;
    let e_mat = e.map(read_matrix_market).transpose()?;
    let b_vec = read_vector(b)?;
    let c_vec = read_vector(c)?;
    StateSpaceSystem::new(a_mat, e_mat, b_vec, c_vec)
}
