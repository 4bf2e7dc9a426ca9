//! QSF1 snapshot files.
//!
//! Binary layout, all little-endian: magic `QSF1`, nx (u64), ny (u64), lx (f64),
//! ly (f64), component count (u64), time (f64), then for each component its
//! nx*ny samples in row-major order (x fastest). A sidecar `<file>.meta` text
//! file lists `key = value` lines, including the component names.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

use super::PeriodicGrid;

const MAGIC: &[u8; 4] = b"QSF1";

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub grid: PeriodicGrid,
    pub time: f64,
    pub names: Vec<String>,
    pub data: Vec<Vec<f64>>,
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

impl Snapshot {
    pub fn encode(&self) -> Vec<u8> {
        let n = self.grid.len();
        let mut out = Vec::with_capacity(52 + 8 * n * self.data.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.grid.nx as u64).to_le_bytes());
        out.extend_from_slice(&(self.grid.ny as u64).to_le_bytes());
        out.extend_from_slice(&self.grid.lx.to_le_bytes());
        out.extend_from_slice(&self.grid.ly.to_le_bytes());
        out.extend_from_slice(&(self.data.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.time.to_le_bytes());
        for c in &self.data {
            for x in c {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Snapshot> {
        let bad = |m: &str| Error::Snapshot(m.to_string());
        if bytes.len() < 52 || &bytes[..4] != MAGIC {
            return Err(bad("missing QSF1 header"));
        }
        let word = |k: usize| -> [u8; 8] { bytes[4 + 8 * k..12 + 8 * k].try_into().unwrap() };
        let nx = u64::from_le_bytes(word(0)) as usize;
        let ny = u64::from_le_bytes(word(1)) as usize;
        let lx = f64::from_le_bytes(word(2));
        let ly = f64::from_le_bytes(word(3));
        let ncomp = u64::from_le_bytes(word(4)) as usize;
        let time = f64::from_le_bytes(word(5));
        let grid = PeriodicGrid::new(nx, ny, lx, ly)?;
        let n = grid.len();
        let body = &bytes[52..];
        if body.len() != 8 * n * ncomp {
            return Err(bad("payload length does not match header"));
        }
        let data = (0..ncomp)
            .map(|c| {
                (0..n)
                    .map(|i| {
                        let o = 8 * (c * n + i);
                        f64::from_le_bytes(body[o..o + 8].try_into().unwrap())
                    })
                    .collect()
            })
            .collect();
        Ok(Snapshot { grid, time, names: Vec::new(), data })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.encode())?;
        let mut meta = fs::File::create(meta_path(path))?;
        writeln!(meta, "format = QSF1")?;
        writeln!(meta, "nx = {}", self.grid.nx)?;
        writeln!(meta, "ny = {}", self.grid.ny)?;
        writeln!(meta, "lx = {:e}", self.grid.lx)?;
        writeln!(meta, "ly = {:e}", self.grid.ly)?;
        writeln!(meta, "time = {:e}", self.time)?;
        writeln!(meta, "components = {}", self.names.join(","))?;
        Ok(())
    }

    /// Reads the binary file and, when present, the component names from the sidecar.
    pub fn read(path: &Path) -> Result<Snapshot> {
        let mut snap = Snapshot::decode(&fs::read(path)?)?;
        if let Ok(text) = fs::read_to_string(meta_path(path)) {
            for line in text.lines() {
                if let Some((k, v)) = line.split_once('=') {
                    if k.trim() == "components" {
                        snap.names = v.trim().split(',').filter(|s| !s.is_empty()).map(String::from).collect();
                    }
                }
            }
        }
        Ok(snap)
    }

    pub fn component(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|i| self.data[i].as_slice())
    }
}
