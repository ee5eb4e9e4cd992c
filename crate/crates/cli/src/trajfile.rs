//! Binary trajectory files.
//!
//! Layout (all integers unsigned):
//!
//! ```text
//! magic      8 bytes  "NSMTRAJ1"
//! tag        4 bytes  0x01020304 in the writer's byte order
//! dim        u32
//! box length f64
//! grid N     u64
//! nodes      u64
//! grading    f64
//! per node:  time f64, then dim blocks of N^dim complex values
//!            (re f64, im f64) in row-major wavenumber order
//! ```
//!
//! Files are written little-endian; either byte order is read back.

use std::fs;
use std::path::Path;

use navier_mild::{Domain, SpectralField, TimeGrid, Trajectory};
use num_complex::Complex64;

use crate::error::HarnessError;

const MAGIC: &[u8; 8] = b"NSMTRAJ1";
const TAG: u32 = 0x0102_0304;

/// Raw file contents. Times may include 0 (single-state data files).
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryFile {
    domain: Domain,
    pub grading: f64,
    pub times: Vec<f64>,
    pub states: Vec<SpectralField>,
}

impl TrajectoryFile {
    pub fn new(domain: &Domain, grading: f64, times: Vec<f64>, states: Vec<SpectralField>) -> Self {
        assert_eq!(times.len(), states.len());
        Self {
            domain: domain.clone(),
            grading,
            times,
            states,
        }
    }

    pub fn from_trajectory(traj: &Trajectory) -> Self {
        Self::new(
            traj.domain(),
            traj.grid().grading(),
            traj.times().to_vec(),
            traj.states().to_vec(),
        )
    }

    /// A single field stored at `t = 0`.
    pub fn from_field(field: &SpectralField) -> Self {
        Self::new(field.domain(), 1.0, vec![0.0], vec![field.clone()])
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn into_trajectory(self) -> Result<Trajectory, HarnessError> {
        let grid = TimeGrid::from_nodes(self.times, self.grading)?;
        Ok(Trajectory::new(grid, self.states)?)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let d = &self.domain;
        let block = d.len() * 16;
        let mut out =
            Vec::with_capacity(48 + self.times.len() * (8 + d.dim() * block));
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&TAG.to_le_bytes());
        out.extend_from_slice(&(d.dim() as u32).to_le_bytes());
        out.extend_from_slice(&d.box_length().to_le_bytes());
        out.extend_from_slice(&(d.grid_points() as u64).to_le_bytes());
        out.extend_from_slice(&(self.times.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.grading.to_le_bytes());
        for (t, state) in self.times.iter().zip(&self.states) {
            out.extend_from_slice(&t.to_le_bytes());
            for comp in state.components() {
                for z in comp {
                    out.extend_from_slice(&z.re.to_le_bytes());
                    out.extend_from_slice(&z.im.to_le_bytes());
                }
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, HarnessError> {
        let mut r = Reader {
            bytes,
            pos: 0,
            little: true,
        };
        if r.take(8)? != MAGIC {
            return Err(HarnessError::Format("bad magic".into()));
        }
        let tag: [u8; 4] = r.take(4)?.try_into().expect("4 bytes");
        r.little = if tag == TAG.to_le_bytes() {
            true
        } else if tag == TAG.to_be_bytes() {
            false
        } else {
            return Err(HarnessError::Format("unknown endianness tag".into()));
        };
        let dim = r.u32()? as usize;
        let box_length = r.f64()?;
        let n = usize::try_from(r.u64()?)
            .map_err(|_| HarnessError::Format("grid size overflows".into()))?;
        let count = usize::try_from(r.u64()?)
            .map_err(|_| HarnessError::Format("node count overflows".into()))?;
        let grading = r.f64()?;
        if !(2..=3).contains(&dim) {
            return Err(HarnessError::Format(format!("unsupported dimension {dim}")));
        }
        let expected = n
            .checked_pow(dim as u32)
            .and_then(|len| len.checked_mul(dim * 16))
            .and_then(|b| b.checked_add(8))
            .and_then(|b| b.checked_mul(count))
            .and_then(|b| b.checked_add(48));
        if expected != Some(bytes.len()) {
            return Err(HarnessError::Format(format!(
                "header promises {count} nodes of {n}^{dim} modes but file has {} bytes",
                bytes.len()
            )));
        }
        let domain = Domain::new(dim, box_length, n)
            .map_err(|e| HarnessError::Format(format!("bad header: {e}")))?;
        let mut times = Vec::with_capacity(count);
        let mut states = Vec::with_capacity(count);
        for _ in 0..count {
            times.push(r.f64()?);
            let mut comps = Vec::with_capacity(dim);
            for _ in 0..dim {
                let mut c = Vec::with_capacity(domain.len());
                for _ in 0..domain.len() {
                    let re = r.f64()?;
                    let im = r.f64()?;
                    c.push(Complex64::new(re, im));
                }
                comps.push(c);
            }
            states.push(SpectralField::from_coefficients(&domain, comps)?);
        }
        Ok(Self {
            domain,
            grading,
            times,
            states,
        })
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        fs::write(path, self.to_bytes()).map_err(|e| HarnessError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
        Self::from_bytes(&bytes)
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
    little: bool,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], HarnessError> {
        let end = self.pos + n;
        let s = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| HarnessError::Format("file truncated".into()))?;
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, HarnessError> {
        let b: [u8; 4] = self.take(4)?.try_into().expect("4 bytes");
        Ok(if self.little { u32::from_le_bytes(b) } else { u32::from_be_bytes(b) })
    }

    fn u64(&mut self) -> Result<u64, HarnessError> {
        let b: [u8; 8] = self.take(8)?.try_into().expect("8 bytes");
        Ok(if self.little { u64::from_le_bytes(b) } else { u64::from_be_bytes(b) })
    }

    fn f64(&mut self) -> Result<f64, HarnessError> {
        self.u64().map(f64::from_bits)
    }
}
