//! Binary snapshots: little-endian header `"MLSF"`, version, d, n per axis,
//! box length, then row-major complex coefficients. A file may hold several
//! records back to back (one per vector component).

use num_complex::Complex64;
use std::io::{ErrorKind, Read, Write};
use std::sync::Arc;

use super::field::{Domain, SpectralField};
use super::grid::Grid;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"MLSF";
const VERSION: u32 = 1;

pub fn write_snapshot<W: Write>(mut w: W, fields: &[&SpectralField]) -> Result<()> {
    for f in fields {
        let g = f.grid();
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&(g.d as u32).to_le_bytes())?;
        for _ in 0..g.d {
            w.write_all(&(g.n as u32).to_le_bytes())?;
        }
        w.write_all(&g.box_length.to_le_bytes())?;
        let mut buf = Vec::with_capacity(16 * f.coeffs().len());
        for c in f.coeffs() {
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

/// Reads every record. All records must share one grid.
pub fn read_snapshot<R: Read>(mut r: R) -> Result<(Grid, Vec<Vec<Complex64>>)> {
    let mut grid: Option<Grid> = None;
    let mut records = Vec::new();
    loop {
        let mut magic = [0u8; 4];
        match r.read_exact(&mut magic) {
            Ok(()) => {}
            Err(e) if e.kind() == ErrorKind::UnexpectedEof && grid.is_some() => break,
            Err(e) => return Err(e.into()),
        }
        if &magic != MAGIC {
            return Err(Error::Format("bad snapshot magic".into()));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported snapshot version {version}")));
        }
        let d = read_u32(&mut r)? as usize;
        if !(2..=3).contains(&d) {
            return Err(Error::Format(format!("snapshot dimension {d}")));
        }
        let ns: Vec<usize> = (0..d).map(|_| read_u32(&mut r).map(|v| v as usize)).collect::<Result<_>>()?;
        if ns.iter().any(|&m| m != ns[0]) {
            return Err(Error::Format("non-cubic snapshot grids are not supported".into()));
        }
        let mut lb = [0u8; 8];
        r.read_exact(&mut lb)?;
        let g = Grid::new(d, ns[0], f64::from_le_bytes(lb)).map_err(|e| Error::Format(e.to_string()))?;
        if let Some(prev) = grid {
            if prev != g {
                return Err(Error::Format("snapshot records on different grids".into()));
            }
        }
        grid = Some(g);
        let mut raw = vec![0u8; 16 * g.len()];
        r.read_exact(&mut raw)?;
        let coeffs = raw
            .chunks_exact(16)
            .map(|c| {
                Complex64::new(
                    f64::from_le_bytes(c[..8].try_into().unwrap()),
                    f64::from_le_bytes(c[8..].try_into().unwrap()),
                )
            })
            .collect();
        records.push(coeffs);
    }
    Ok((grid.expect("at least one record"), records))
}

/// Reads records onto an existing domain, checking the grid.
pub fn read_fields<R: Read>(r: R, domain: &Arc<Domain>) -> Result<Vec<SpectralField>> {
    let (g, records) = read_snapshot(r)?;
    if &g != domain.grid() {
        return Err(Error::GridMismatch);
    }
    records
        .into_iter()
        .map(|c| SpectralField::from_coeffs(domain, c))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_two_records() {
        let dom = Domain::new(Grid::new(2, 8, 3.0).unwrap()).unwrap();
        let f = SpectralField::from_fn(&dom, |x| x[0].sin() + 0.25);
        let g = SpectralField::from_fn(&dom, |x| (2.0 * x[1]).cos());
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &[&f, &g]).unwrap();
        assert_eq!(&buf[..4], b"MLSF");
        let back = read_fields(buf.as_slice(), &dom).unwrap();
        assert_eq!(back[0].coeffs(), f.coeffs());
        assert_eq!(back[1].coeffs(), g.coeffs());
        assert!(read_snapshot(&buf[..10]).is_err());
    }
}
