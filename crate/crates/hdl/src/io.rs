//! Matrix export formats.
//!
//! Binary layout, all integers little-endian:
//! `b"HDLM"`, `u32` version, `u64` rows, `u64` cols, `u8` layout tag
//! (0 = row-major complex f64), then `rows * cols` pairs of `f64`
//! (real, imaginary), row-major.
//!
//! CSV is the long form `row,col,re,im` with a header line, one line per
//! entry; intended for small matrices.

use std::io::{self, BufRead, Read, Write};

use faer::{c64, Mat};

pub const MAGIC: &[u8; 4] = b"HDLM";
pub const VERSION: u32 = 1;
pub const LAYOUT_ROW_MAJOR_C64: u8 = 0;
/// Matrices larger than this are refused by the CSV writer.
pub const CSV_MAX_ENTRIES: usize = 1 << 20;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not a matrix file (bad magic)")]
    BadMagic,
    #[error("unsupported version {0}")]
    Version(u32),
    #[error("unsupported layout tag {0}")]
    Layout(u8),
    #[error("matrix too large for CSV ({0} entries)")]
    TooLarge(usize),
    #[error("CSV line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

pub fn write_binary<W: Write>(mut w: W, m: &Mat<c64>) -> Result<(), IoError> {
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&(m.nrows() as u64).to_le_bytes())?;
    w.write_all(&(m.ncols() as u64).to_le_bytes())?;
    w.write_all(&[LAYOUT_ROW_MAJOR_C64])?;
    let mut buf = Vec::with_capacity(16 * m.ncols());
    for i in 0..m.nrows() {
        buf.clear();
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> Result<[u8; N], IoError> {
    let mut b = [0u8; N];
    r.read_exact(&mut b)?;
    Ok(b)
}

pub fn read_binary<R: Read>(mut r: R) -> Result<Mat<c64>, IoError> {
    if &read_array::<4, _>(&mut r)? != MAGIC {
        return Err(IoError::BadMagic);
    }
    let version = u32::from_le_bytes(read_array(&mut r)?);
    if version != VERSION {
        return Err(IoError::Version(version));
    }
    let rows = u64::from_le_bytes(read_array(&mut r)?) as usize;
    let cols = u64::from_le_bytes(read_array(&mut r)?) as usize;
    let [layout] = read_array::<1, _>(&mut r)?;
    if layout != LAYOUT_ROW_MAJOR_C64 {
        return Err(IoError::Layout(layout));
    }
    let mut m = Mat::zeros(rows, cols);
    let mut row = vec![0u8; 16 * cols];
    for i in 0..rows {
        r.read_exact(&mut row)?;
        for j in 0..cols {
            let at = |o: usize| f64::from_le_bytes(row[o..o + 8].try_into().unwrap_or([0; 8]));
            m[(i, j)] = c64::new(at(16 * j), at(16 * j + 8));
        }
    }
    Ok(m)
}

pub fn write_csv<W: Write>(mut w: W, m: &Mat<c64>) -> Result<(), IoError> {
    let entries = m.nrows() * m.ncols();
    if entries > CSV_MAX_ENTRIES {
        return Err(IoError::TooLarge(entries));
    }
    writeln!(w, "row,col,re,im")?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let z = m[(i, j)];
            writeln!(w, "{i},{j},{:e},{:e}", z.re, z.im)?;
        }
    }
    Ok(())
}

/// Reads the long CSV form; the shape is one past the largest indices.
pub fn read_csv<R: BufRead>(r: R) -> Result<Mat<c64>, IoError> {
    let mut entries = Vec::new();
    let (mut rows, mut cols) = (0, 0);
    for (n, line) in r.lines().enumerate() {
        let line = line?;
        if n == 0 || line.trim().is_empty() {
            continue;
        }
        let err = |msg: &str| IoError::Csv {
            line: n + 1,
            msg: msg.to_string(),
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(err("expected 4 fields"));
        }
        let i: usize = f[0].trim().parse().map_err(|_| err("bad row"))?;
        let j: usize = f[1].trim().parse().map_err(|_| err("bad col"))?;
        let re: f64 = f[2].trim().parse().map_err(|_| err("bad re"))?;
        let im: f64 = f[3].trim().parse().map_err(|_| err("bad im"))?;
        rows = rows.max(i + 1);
        cols = cols.max(j + 1);
        entries.push((i, j, c64::new(re, im)));
    }
    let mut m = Mat::zeros(rows, cols);
    for (i, j, z) in entries {
        m[(i, j)] = z;
    }
    Ok(m)
}
