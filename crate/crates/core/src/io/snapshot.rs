//! Bit-exact binary snapshots.
//!
//! Layout, all integers and floats little-endian:
//!
//! ```text
//! magic   8 bytes  "EASNAP01"
//! version u8       1
//! dim     u32
//! n       u32
//! L, t, alpha, kappa, gamma, mu   f64 each
//! repr    u8       0 = (ρ, u), 1 = (σ, u)
//! data    f64 × n^dim × (1 + dim): scalar, then velocity components
//! ```

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Representation, State};
use crate::spectral::{Field, Grid};

const MAGIC: &[u8; 8] = b"EASNAP01";
const VERSION: u8 = 1;

/// A state together with the parameters it was produced under.
#[derive(Clone, Debug)]
pub struct Snapshot {
    pub state: State,
    pub params: ModelParams,
}

fn encode(snap: &Snapshot) -> Vec<u8> {
    let s = &snap.state;
    let g = s.grid();
    let p = &snap.params;
    let mut out = Vec::with_capacity(64 + 8 * g.len() * (1 + g.dim()));
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(g.n() as u32).to_le_bytes());
    for v in [
        g.length(),
        s.time(),
        p.alpha(),
        p.kappa(),
        p.gamma(),
        p.mu(),
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.push(match s.representation() {
        Representation::RhoU => 0,
        Representation::SigmaU => 1,
    });
    for comp in s
        .scalar()
        .components()
        .iter()
        .chain(s.velocity().components())
    {
        for v in comp {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, k: usize) -> Result<&[u8]> {
        let end = self.pos + k;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::Data("snapshot is truncated".into()))?;
        self.pos = end;
        Ok(chunk)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn array(&mut self, len: usize) -> Result<Vec<f64>> {
        (0..len).map(|_| self.f64()).collect()
    }
}

fn decode(bytes: &[u8]) -> Result<Snapshot> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(8)? != MAGIC {
        return Err(Error::Data("not a snapshot file (bad magic)".into()));
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(Error::Data(format!(
            "unsupported snapshot version {version}"
        )));
    }
    let dim = r.u32()? as usize;
    let n = r.u32()? as usize;
    let length = r.f64()?;
    let t = r.f64()?;
    let (alpha, kappa, gamma, mu) = (r.f64()?, r.f64()?, r.f64()?, r.f64()?);
    let repr = match r.u8()? {
        0 => Representation::RhoU,
        1 => Representation::SigmaU,
        other => return Err(Error::Data(format!("unknown representation tag {other}"))),
    };
    let grid = Grid::new(dim, n, length)?;
    let params = ModelParams::new(dim, alpha, kappa, gamma, Some(mu))?;
    let scalar = Field::new(grid, vec![r.array(grid.len())?])?;
    let velocity = Field::new(
        grid,
        (0..dim)
            .map(|_| r.array(grid.len()))
            .collect::<Result<_>>()?,
    )?;
    if r.pos != bytes.len() {
        return Err(Error::Data("trailing bytes after snapshot data".into()));
    }
    Ok(Snapshot {
        state: State::new(repr, scalar, velocity, t)?,
        params,
    })
}

/// Write a snapshot atomically.
pub fn write_snapshot(path: &Path, snap: &Snapshot) -> Result<()> {
    super::write_atomic(path, &encode(snap))
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    decode(&fs::read(path)?)
}
