//! Text format for matrices.
//!
//! ```text
//! 2,2,complex
//! 1,0
//! 0.5,-2
//! 0,0
//! 3,1e-7
//! ```
//!
//! The first line gives `rows,cols,field`; then one `re,im` pair per entry,
//! row-major. Blank lines and lines starting with `#` are ignored. Values
//! are written with 17 significant digits so parsing is lossless.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::fmt::g17;
use crate::randgen::Field;

pub fn write_matrix(a: &ComplexMatrix, field: Field) -> String {
    let mut out = format!("{},{},{}\n", a.rows(), a.cols(), field.name());
    for z in a.data() {
        let _ = writeln!(out, "{},{}", g17(z.re), g17(z.im));
    }
    out
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("line {line}: bad number {:?}", s.trim())))
}

pub fn parse_matrix(text: &str) -> Result<(ComplexMatrix, Field)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let parts: Vec<&str> = header.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "line {ln}: expected header rows,cols,field"
        )));
    }
    let rows: usize = parts[0]
        .parse()
        .map_err(|_| Error::Parse(format!("line {ln}: bad row count")))?;
    let cols: usize = parts[1]
        .parse()
        .map_err(|_| Error::Parse(format!("line {ln}: bad column count")))?;
    let field: Field = parts[2]
        .parse()
        .map_err(|_| Error::Parse(format!("line {ln}: unknown field {:?}", parts[2])))?;
    let mut data = Vec::with_capacity(rows * cols);
    for (ln, line) in lines {
        let (re, im) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {ln}: expected re,im")))?;
        let z = Complex64::new(parse_f64(re, ln)?, parse_f64(im, ln)?);
        if field == Field::Real && z.im != 0.0 {
            return Err(Error::Parse(format!(
                "line {ln}: nonzero imaginary part in a real matrix"
            )));
        }
        data.push(z);
    }
    if data.len() != rows * cols {
        return Err(Error::Parse(format!(
            "expected {} entries, found {}",
            rows * cols,
            data.len()
        )));
    }
    let m = ComplexMatrix::from_vec(rows, cols, data).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((m, field))
}
