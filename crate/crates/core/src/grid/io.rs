//! Grid snapshot files.
//!
//! Binary layout (all little-endian):
//!
//! ```text
//! b"HWK1" | ndim: u32 | n_0 .. n_{ndim-1}: u64 | (min_k, max_k): f64 x ndim | values: f64 x prod(n)
//! ```
//!
//! Values are row-major with the x index fastest. The CSV form is `x[,y],value`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Field1D, Field2D};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"HWK1";

/// Raw snapshot contents as read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub dims: Vec<usize>,
    pub bounds: Vec<(f64, f64)>,
    pub values: Vec<f64>,
}

impl Snapshot {
    pub fn from_field1d(f: &Field1D) -> Self {
        let g = f.grid();
        Self {
            dims: vec![g.n()],
            bounds: vec![(g.x_min(), g.x_max())],
            values: f.values().to_vec(),
        }
    }

    pub fn from_field2d(f: &Field2D) -> Self {
        let g = f.grid();
        Self {
            dims: vec![g.nx(), g.ny()],
            bounds: vec![
                (g.x_axis().x_min(), g.x_axis().x_max()),
                (g.y_axis().x_min(), g.y_axis().x_max()),
            ],
            values: f.values().to_vec(),
        }
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&(self.dims.len() as u32).to_le_bytes())?;
        for &n in &self.dims {
            w.write_all(&(n as u64).to_le_bytes())?;
        }
        for &(lo, hi) in &self.bounds {
            w.write_all(&lo.to_le_bytes())?;
            w.write_all(&hi.to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Format("bad snapshot magic".into()));
        }
        let mut b4 = [0u8; 4];
        let mut b8 = [0u8; 8];
        r.read_exact(&mut b4)?;
        let ndim = u32::from_le_bytes(b4) as usize;
        if !(1..=3).contains(&ndim) {
            return Err(Error::Format(format!("unsupported dimension count {ndim}")));
        }
        let mut dims = Vec::with_capacity(ndim);
        for _ in 0..ndim {
            r.read_exact(&mut b8)?;
            dims.push(u64::from_le_bytes(b8) as usize);
        }
        let mut bounds = Vec::with_capacity(ndim);
        for _ in 0..ndim {
            r.read_exact(&mut b8)?;
            let lo = f64::from_le_bytes(b8);
            r.read_exact(&mut b8)?;
            bounds.push((lo, f64::from_le_bytes(b8)));
        }
        let len: usize = dims.iter().product();
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            r.read_exact(&mut b8)?;
            values.push(f64::from_le_bytes(b8));
        }
        Ok(Self {
            dims,
            bounds,
            values,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

pub fn write_csv_1d(f: &Field1D, mut w: impl Write) -> Result<()> {
    writeln!(w, "x,value")?;
    for (x, v) in f.grid().nodes().zip(f.values()) {
        writeln!(w, "{x:.17e},{v:.17e}")?;
    }
    Ok(())
}

pub fn write_csv_2d(f: &Field2D, mut w: impl Write) -> Result<()> {
    writeln!(w, "x,y,value")?;
    let g = f.grid();
    for j in 0..g.ny() {
        for i in 0..g.nx() {
            let (x, y) = g.coords(i, j);
            writeln!(w, "{x:.17e},{y:.17e},{:.17e}", f.at(i, j))?;
        }
    }
    Ok(())
}
