//! Text file formats for matrices, pivot vectors, and packed factorizations.
//!
//! Matrix format: a header line `rows cols`, then `rows` lines of `cols`
//! space-separated values, written row by row. Values are serialized with
//! Rust's shortest round-trip formatting, so write-then-read reproduces every
//! bit. Pivot format: a header line `n m` (length, target rows), then `n`
//! offset lines. A packed factorization is the matrix, a `---` line, and the
//! pivot vector.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::piv::PackedLu;
use crate::pivot::PivotVector;

pub fn matrix_to_string(m: &DenseMatrix) -> String {
    let mut out = String::new();
    out.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for i in 0..m.rows() {
        let mut line = String::new();
        for j in 0..m.cols() {
            if j > 0 {
                line.push(' ');
            }
            line.push_str(&format!("{}", m.get(i, j)));
        }
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn parse_header(line: Option<&str>, what: &str) -> Result<(usize, usize)> {
    let line = line.ok_or_else(|| Error::Parse(format!("missing {what} header")))?;
    let mut it = line.split_whitespace();
    let a = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad {what} header: {line:?}")))?;
    let b = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad {what} header: {line:?}")))?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens in {what} header")));
    }
    Ok((a, b))
}

fn matrix_from_lines<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<DenseMatrix> {
    let (rows, cols) = parse_header(lines.next(), "matrix")?;
    let mut m = DenseMatrix::zeros(rows, cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("matrix ends before row {i}")))?;
        let mut count = 0;
        for (j, tok) in line.split_whitespace().enumerate() {
            if j >= cols {
                return Err(Error::Parse(format!("row {i} has more than {cols} values")));
            }
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad value {tok:?} in row {i}")))?;
            m.set(i, j, v);
            count += 1;
        }
        if count != cols {
            return Err(Error::Parse(format!(
                "row {i} has {count} values, expected {cols}"
            )));
        }
    }
    Ok(m)
}

pub fn matrix_from_str(s: &str) -> Result<DenseMatrix> {
    let mut lines = s.lines();
    let m = matrix_from_lines(&mut lines)?;
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::Parse("trailing content after matrix".into()));
    }
    Ok(m)
}

pub fn pivots_to_string(p: &PivotVector) -> String {
    let mut out = format!("{} {}\n", p.len(), p.target_rows());
    for &off in p.offsets() {
        out.push_str(&format!("{off}\n"));
    }
    out
}

fn pivots_from_lines<'a>(lines: &mut impl Iterator<Item = &'a str>) -> Result<PivotVector> {
    let (n, m) = parse_header(lines.next(), "pivot")?;
    let mut offsets = Vec::with_capacity(n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("pivot vector ends before entry {i}")))?;
        let off: usize = line
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad pivot offset {line:?}")))?;
        offsets.push(off);
    }
    PivotVector::new(offsets, m)
}

pub fn pivots_from_str(s: &str) -> Result<PivotVector> {
    let mut lines = s.lines();
    let p = pivots_from_lines(&mut lines)?;
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::Parse("trailing content after pivot vector".into()));
    }
    Ok(p)
}

pub const PACKED_SEPARATOR: &str = "---";

pub fn packed_to_string(lu: &PackedLu) -> String {
    format!(
        "{}{}\n{}",
        matrix_to_string(lu.factors()),
        PACKED_SEPARATOR,
        pivots_to_string(lu.pivots())
    )
}

pub fn packed_from_str(s: &str) -> Result<PackedLu> {
    let mut lines = s.lines();
    let factors = matrix_from_lines(&mut lines)?;
    match lines.next() {
        Some(sep) if sep.trim() == PACKED_SEPARATOR => {}
        other => {
            return Err(Error::Parse(format!(
                "expected {PACKED_SEPARATOR:?} separator, found {other:?}"
            )))
        }
    }
    let pivots = pivots_from_lines(&mut lines)?;
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::Parse("trailing content after factorization".into()));
    }
    PackedLu::from_parts(factors, pivots)
}

pub fn read_matrix_file(path: &Path) -> Result<DenseMatrix> {
    matrix_from_str(&fs::read_to_string(path)?)
}

pub fn write_matrix_file(path: &Path, m: &DenseMatrix) -> Result<()> {
    Ok(fs::write(path, matrix_to_string(m))?)
}

pub fn read_pivots_file(path: &Path) -> Result<PivotVector> {
    pivots_from_str(&fs::read_to_string(path)?)
}

pub fn read_packed_file(path: &Path) -> Result<PackedLu> {
    packed_from_str(&fs::read_to_string(path)?)
}

pub fn write_packed_file(path: &Path, lu: &PackedLu) -> Result<()> {
    Ok(fs::write(path, packed_to_string(lu))?)
}

/// Reads either a packed factorization (detected by its `---` separator) or a
/// plain matrix.
pub enum SystemFile {
    Matrix(DenseMatrix),
    Packed(PackedLu),
}

pub fn read_system_file(path: &Path) -> Result<SystemFile> {
    let text = fs::read_to_string(path)?;
    if text.lines().any(|l| l.trim() == PACKED_SEPARATOR) {
        Ok(SystemFile::Packed(packed_from_str(&text)?))
    } else {
        Ok(SystemFile::Matrix(matrix_from_str(&text)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matrix_format_by_hand() {
        let m = DenseMatrix::from_fn(2, 3, |i, j| (i * 3 + j) as f64 / 2.0);
        let s = matrix_to_string(&m);
        assert_eq!(s, "2 3\n0 0.5 1\n1.5 2 2.5\n");
        assert!(matrix_from_str(&s).unwrap().bitwise_eq(&m));
    }

    #[test]
    fn empty_matrix_round_trips() {
        let m = DenseMatrix::zeros(0, 0);
        let s = matrix_to_string(&m);
        assert_eq!(s, "0 0\n");
        let back = matrix_from_str(&s).unwrap();
        assert_eq!((back.rows(), back.cols()), (0, 0));
    }

    #[test]
    fn zero_cols_round_trips() {
        let m = DenseMatrix::zeros(2, 0);
        let back = matrix_from_str(&matrix_to_string(&m)).unwrap();
        assert_eq!((back.rows(), back.cols()), (2, 0));
    }

    #[test]
    fn malformed_inputs_are_parse_errors() {
        assert!(matches!(matrix_from_str(""), Err(Error::Parse(_))));
        assert!(matches!(
            matrix_from_str("2 2\n1 2\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            matrix_from_str("2 2\n1 2 3\n4 5\n"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            matrix_from_str("1 1\nnope\n"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn pivot_format_round_trips() {
        let p = PivotVector::new(vec![2, 1, 0], 4).unwrap();
        let s = pivots_to_string(&p);
        assert_eq!(s, "3 4\n2\n1\n0\n");
        assert_eq!(pivots_from_str(&s).unwrap(), p);
    }

    proptest! {
        #[test]
        fn matrix_values_round_trip_bitwise(
            rows in 0usize..6,
            cols in 0usize..6,
            fill in proptest::collection::vec(-1.0e3f64..1.0e3, 0..36),
        ) {
            let m = DenseMatrix::from_fn(rows, cols, |i, j| {
                *fill.get(i * cols + j).unwrap_or(&0.125)
            });
            let back = matrix_from_str(&matrix_to_string(&m)).unwrap();
            prop_assert!(back.bitwise_eq(&m));
        }
    }
}
