//! CSV tables and the binary field file format.
//!
//! Field files are little-endian:
//!
//! | offset | size | content                                  |
//! |--------|------|------------------------------------------|
//! | 0      | 4    | magic `b"PDFF"`                          |
//! | 4      | 4    | version, `u32` = 1                       |
//! | 8      | 4    | `n`, `u32`                               |
//! | 12     | 4    | `dim`, `u32` (1 or 2)                    |
//! | 16     | 4    | dtype, `u32` = 1 (complex, two `f64`)    |
//! | 20     | 16·n^dim | samples, row-major, `re` then `im`   |

use crate::error::{Error, Result};
use crate::spectral_core::{PeriodicGrid, ScalarField};
use num_complex::Complex64;
use std::io::{Read, Write};
use std::path::Path;

/// A named table with a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|s| s.to_string()).collect(), rows: vec![] }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_f64(&mut self, row: &[f64]) {
        self.push(row.iter().map(|v| v.to_string()).collect());
    }
}

/// Formats a number for a mixed row.
pub fn num(v: f64) -> String {
    v.to_string()
}

/// Writes `rows` under `header` to `path`; an empty row set gives a
/// header-only file.
pub fn emit_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_table(dir: &Path, table: &Table) -> Result<()> {
    emit_csv(&dir.join(format!("{}.csv", table.name)), &table.header, &table.rows)
}

const MAGIC: &[u8; 4] = b"PDFF";
const VERSION: u32 = 1;
const DTYPE_COMPLEX128: u32 = 1;

pub fn write_field(path: &Path, u: &ScalarField) -> Result<()> {
    let g = u.grid();
    let mut buf = Vec::with_capacity(20 + 16 * g.len());
    buf.extend_from_slice(MAGIC);
    for v in [VERSION, g.n() as u32, g.dim() as u32, DTYPE_COMPLEX128] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for z in u.samples() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    std::fs::File::create(path)?.write_all(&buf)?;
    Ok(())
}

pub fn read_field(path: &Path) -> Result<ScalarField> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    let bad = |m: &str| Error::InvalidParameter(format!("{}: {m}", path.display()));
    if bytes.len() < 20 || &bytes[0..4] != MAGIC {
        return Err(bad("not a field file"));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[4 * i..4 * i + 4].try_into().unwrap());
    if word(1) != VERSION || word(4) != DTYPE_COMPLEX128 {
        return Err(bad("unsupported version or dtype"));
    }
    let grid = PeriodicGrid::new(word(2) as usize, word(3) as usize)?;
    if bytes.len() != 20 + 16 * grid.len() {
        return Err(bad("truncated sample block"));
    }
    let f = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let samples = (0..grid.len()).map(|i| Complex64::new(f(20 + 16 * i), f(28 + 16 * i))).collect();
    ScalarField::new(grid, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral_core::make_grid;

    #[test]
    fn field_round_trip_and_layout() {
        let dir = tempfile::tempdir().unwrap();
        let g = make_grid(16, 2).unwrap();
        let u = ScalarField::from_fn(g, |x| Complex64::new(x[0].sin(), x[1]));
        let p = dir.path().join("u.bin");
        write_field(&p, &u).unwrap();
        let bytes = std::fs::read(&p).unwrap();
        assert_eq!(&bytes[..4], b"PDFF");
        assert_eq!(bytes.len(), 20 + 16 * 256);
        assert_eq!(u32::from_le_bytes(bytes[8..12].try_into().unwrap()), 16);
        let v = read_field(&p).unwrap();
        assert_eq!(v.samples(), u.samples());
        std::fs::write(&p, &bytes[..100]).unwrap();
        assert!(read_field(&p).is_err());
    }

    #[test]
    fn empty_table_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let t = Table::new("empty", &["t", "E", "Hhalf_u", "Hneghalf_dtu", "Hneghalf_Lu"]);
        emit_table(dir.path(), &t).unwrap();
        let s = std::fs::read_to_string(dir.path().join("empty.csv")).unwrap();
        assert_eq!(s, "t,E,Hhalf_u,Hneghalf_dtu,Hneghalf_Lu\n");
    }
}
