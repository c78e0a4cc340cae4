//! Sample files: a 16-byte header (`b"CEVM"`, version `u32`, pair count
//! `u64`) followed by the pairs as little-endian `f64`, `x` before `y`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"CEVM";
pub const VERSION: u32 = 1;

pub fn write_pairs<W: Write>(mut out: W, pairs: &[(f64, f64)]) -> std::io::Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&(pairs.len() as u64).to_le_bytes())?;
    for &(x, y) in pairs {
        out.write_all(&x.to_le_bytes())?;
        out.write_all(&y.to_le_bytes())?;
    }
    out.flush()
}

pub fn save(path: &Path, pairs: &[(f64, f64)]) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    write_pairs(BufWriter::new(file), pairs).map_err(|e| CliError::io(path, e))
}

pub fn save_csv(path: &Path, pairs: &[(f64, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["x", "y"])?;
    for &(x, y) in pairs {
        w.serialize((x, y))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_pairs<R: Read>(mut input: R, origin: &Path) -> Result<Vec<(f64, f64)>> {
    let bad = |message: String| CliError::Parse { path: origin.to_path_buf(), message };
    let io = |e: std::io::Error| bad(format!("truncated sample file: {e}"));
    let mut header = [0u8; 16];
    input.read_exact(&mut header).map_err(io)?;
    if &header[..4] != MAGIC {
        return Err(bad("not a CEVM sample file".into()));
    }
    let version = u32::from_le_bytes(header[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(bad(format!("unsupported sample file version {version}")));
    }
    let count = u64::from_le_bytes(header[8..16].try_into().unwrap());
    let count = usize::try_from(count).map_err(|_| bad(format!("pair count {count} too large")))?;
    let mut body = Vec::new();
    input.read_to_end(&mut body).map_err(io)?;
    if body.len() != count.checked_mul(16).ok_or_else(|| bad("pair count overflows".into()))? {
        return Err(bad(format!("header declares {count} pairs, body holds {} bytes", body.len())));
    }
    let value = |c: &[u8]| f64::from_le_bytes(c.try_into().unwrap());
    Ok(body.chunks_exact(16).map(|c| (value(&c[..8]), value(&c[8..]))).collect())
}

pub fn load(path: &Path) -> Result<Vec<(f64, f64)>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_pairs(BufReader::new(file), path)
}
