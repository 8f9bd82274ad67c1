//! File formats.
//!
//! * Signal CSV: `N1` rows of `N2` comma-separated values, no header.
//! * Spectrum CSV: header `k1,k2,lambda1,lambda2,re,im,power`, one row per
//!   index pair in row-major order.
//! * Eigenvalue CSV: header `index,eigenvalue`.
//! * Matrix binary: magic `MDGSPMAT`, `u32` rows, `u32` cols (little-endian),
//!   then row-major little-endian `f64`.
//!
//! Numbers are written in the shortest decimal form that parses back to the
//! same `f64`.

use std::io::{Read, Write};

use nalgebra::DMatrix;

use crate::linalg::C64;
use crate::spectral::EigenBasis;
use crate::transform::{Signal2D, Spectrum2D};
use crate::{Error, Result};

const MAGIC: &[u8; 8] = b"MDGSPMAT";

pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format(format!("csv: {e}"))
}

fn parse_f64(field: &str, row: usize) -> Result<f64> {
    field
        .trim()
        .parse()
        .map_err(|_| Error::Format(format!("row {}: `{field}` is not a number", row + 1)))
}

pub fn read_signal_csv(reader: impl Read) -> Result<Signal2D> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err)?;
        rows.push(record.iter().map(|f| parse_f64(f, r)).collect::<Result<_>>()?);
    }
    let n2 = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || n2 == 0 {
        return Err(Error::Format("signal file is empty".into()));
    }
    Signal2D::new(DMatrix::from_fn(rows.len(), n2, |i, j| rows[i][j]))
}

pub fn write_signal_csv(mut w: impl Write, f: &Signal2D) -> Result<()> {
    let m = f.matrix();
    for i in 0..m.nrows() {
        let line: Vec<String> = m.row(i).iter().map(|v| fmt_f64(*v)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}

pub fn write_spectrum_csv(mut w: impl Write, s: &Spectrum2D) -> Result<()> {
    writeln!(w, "k1,k2,lambda1,lambda2,re,im,power")?;
    let (n1, n2) = s.shape();
    for k1 in 0..n1 {
        for k2 in 0..n2 {
            let z = s.coeffs[(k1, k2)];
            writeln!(
                w,
                "{k1},{k2},{},{},{},{},{}",
                fmt_f64(s.lambda1[k1]),
                fmt_f64(s.lambda2[k2]),
                fmt_f64(z.re),
                fmt_f64(z.im),
                fmt_f64(z.norm_sqr())
            )?;
        }
    }
    Ok(())
}

pub fn read_spectrum_csv(reader: impl Read) -> Result<Spectrum2D> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers().map_err(csv_err)?.clone();
    let expected = ["k1", "k2", "lambda1", "lambda2", "re", "im", "power"];
    if header.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Format(format!(
            "unexpected spectrum header `{}`",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut entries = Vec::new();
    for (r, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err)?;
        let k1: usize = record[0]
            .parse()
            .map_err(|_| Error::Format(format!("row {}: bad k1", r + 1)))?;
        let k2: usize = record[1]
            .parse()
            .map_err(|_| Error::Format(format!("row {}: bad k2", r + 1)))?;
        let vals = (2..6).map(|c| parse_f64(&record[c], r)).collect::<Result<Vec<_>>>()?;
        entries.push((k1, k2, vals));
    }
    let n1 = entries.iter().map(|e| e.0 + 1).max().unwrap_or(0);
    let n2 = entries.iter().map(|e| e.1 + 1).max().unwrap_or(0);
    if entries.len() != n1 * n2 || n1 == 0 {
        return Err(Error::Format(format!(
            "spectrum has {} rows, not a full {n1}x{n2} grid",
            entries.len()
        )));
    }
    let mut coeffs = DMatrix::from_element(n1, n2, C64::new(0.0, 0.0));
    let mut lambda1 = vec![f64::NAN; n1];
    let mut lambda2 = vec![f64::NAN; n2];
    let mut seen = vec![false; n1 * n2];
    for (k1, k2, v) in entries {
        if std::mem::replace(&mut seen[k1 * n2 + k2], true) {
            return Err(Error::Format(format!("duplicate spectrum entry ({k1}, {k2})")));
        }
        lambda1[k1] = v[0];
        lambda2[k2] = v[1];
        coeffs[(k1, k2)] = C64::new(v[2], v[3]);
    }
    Spectrum2D::new(coeffs, lambda1, lambda2)
}

pub fn write_eigen_csv(mut w: impl Write, basis: &EigenBasis) -> Result<()> {
    writeln!(w, "index,eigenvalue")?;
    for (k, v) in basis.values().iter().enumerate() {
        writeln!(w, "{k},{}", fmt_f64(*v))?;
    }
    Ok(())
}

pub fn write_matrix_bin(mut w: impl Write, m: &DMatrix<f64>) -> Result<()> {
    let rows = u32::try_from(m.nrows()).map_err(|_| Error::TooLarge("matrix rows exceed u32".into()))?;
    let cols = u32::try_from(m.ncols()).map_err(|_| Error::TooLarge("matrix cols exceed u32".into()))?;
    w.write_all(MAGIC)?;
    w.write_all(&rows.to_le_bytes())?;
    w.write_all(&cols.to_le_bytes())?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            w.write_all(&m[(i, j)].to_le_bytes())?;
        }
    }
    Ok(())
}

pub fn read_matrix_bin(mut r: impl Read) -> Result<DMatrix<f64>> {
    let mut header = [0u8; 16];
    r.read_exact(&mut header)?;
    if &header[..8] != MAGIC {
        return Err(Error::Format("missing MDGSPMAT header".into()));
    }
    let rows = u32::from_le_bytes(header[8..12].try_into().expect("4 bytes")) as usize;
    let cols = u32::from_le_bytes(header[12..16].try_into().expect("4 bytes")) as usize;
    let mut data = Vec::new();
    r.read_to_end(&mut data)?;
    if data.len() != rows * cols * 8 {
        return Err(Error::Format(format!(
            "expected {} payload bytes for {rows}x{cols}, found {}",
            rows * cols * 8,
            data.len()
        )));
    }
    let values: Vec<f64> = data
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    Ok(DMatrix::from_row_slice(rows, cols, &values))
}
