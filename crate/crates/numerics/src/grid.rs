//! Frequency-grid test functions: complex samples on the uniform grid of
//! cell centers in [0,1]^d, plus the little-endian QRX1 cache format
//! (magic "QRX1", u32 dimension count, u32 dims, then complex64 samples
//! row-major).

use crate::error::{NumericsError, Result};
use num_complex::Complex64;
use std::io::{Read, Write};

#[derive(Debug, Clone, PartialEq)]
pub struct BoxMeta {
    pub corner: Vec<f64>,
    pub sides: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct GridFunction {
    pub d: usize,
    pub resolution: Vec<usize>,
    /// Row-major over the axes, last axis fastest.
    pub samples: Vec<Complex64>,
    pub box_meta: Option<BoxMeta>,
}

impl GridFunction {
    pub fn from_fn(resolution: &[usize], mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let d = resolution.len();
        let total: usize = resolution.iter().product();
        let mut samples = Vec::with_capacity(total);
        let mut idx = vec![0usize; d];
        let mut point = vec![0.0f64; d];
        for _ in 0..total {
            for k in 0..d {
                point[k] = (idx[k] as f64 + 0.5) / resolution[k] as f64;
            }
            samples.push(f(&point));
            // advance row-major (last axis fastest)
            for k in (0..d).rev() {
                idx[k] += 1;
                if idx[k] < resolution[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        GridFunction { d, resolution: resolution.to_vec(), samples, box_meta: None }
    }

    /// Indicator of the box [corner, corner + sides] sampled on the grid.
    pub fn box_indicator(resolution: &[usize], corner: &[f64], sides: &[f64]) -> Self {
        let mut g = Self::from_fn(resolution, |p| {
            let inside = p
                .iter()
                .zip(corner.iter().zip(sides))
                .all(|(&x, (&c, &s))| x >= c && x <= c + s);
            if inside {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        g.box_meta = Some(BoxMeta { corner: corner.to_vec(), sides: sides.to_vec() });
        g
    }

    pub fn cell_volume(&self) -> f64 {
        self.resolution.iter().map(|&n| 1.0 / n as f64).product()
    }

    pub fn l1_norm(&self) -> f64 {
        self.samples.iter().map(|v| v.norm()).sum::<f64>() * self.cell_volume()
    }

    pub fn lp_norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.samples.iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        (self.samples.iter().map(|v| v.norm().powf(p)).sum::<f64>() * self.cell_volume())
            .powf(1.0 / p)
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        GridFunction {
            d: self.d,
            resolution: self.resolution.clone(),
            samples: self.samples.iter().map(|v| v * c).collect(),
            box_meta: self.box_meta.clone(),
        }
    }

    /// Cell-center coordinate along one axis.
    pub fn center(&self, axis: usize, index: usize) -> f64 {
        (index as f64 + 0.5) / self.resolution[axis] as f64
    }

    pub fn write_qrx1(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(b"QRX1")?;
        w.write_all(&(self.d as u32).to_le_bytes())?;
        for &n in &self.resolution {
            w.write_all(&(n as u32).to_le_bytes())?;
        }
        for v in &self.samples {
            w.write_all(&(v.re as f32).to_le_bytes())?;
            w.write_all(&(v.im as f32).to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_qrx1(r: &mut impl Read) -> Result<GridFunction> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic).map_err(|_| bad("truncated header"))?;
        if &magic != b"QRX1" {
            return Err(bad("bad magic"));
        }
        let mut u32buf = [0u8; 4];
        r.read_exact(&mut u32buf).map_err(|_| bad("truncated dimension"))?;
        let d = u32::from_le_bytes(u32buf) as usize;
        if d == 0 || d > 8 {
            return Err(bad("unreasonable dimension"));
        }
        let mut resolution = Vec::with_capacity(d);
        for _ in 0..d {
            r.read_exact(&mut u32buf).map_err(|_| bad("truncated dims"))?;
            resolution.push(u32::from_le_bytes(u32buf) as usize);
        }
        let total: usize = resolution.iter().product();
        if total == 0 || total > 1 << 28 {
            return Err(bad("unreasonable sample count"));
        }
        let mut samples = Vec::with_capacity(total);
        let mut f32buf = [0u8; 4];
        for _ in 0..total {
            r.read_exact(&mut f32buf).map_err(|_| bad("truncated samples"))?;
            let re = f32::from_le_bytes(f32buf) as f64;
            r.read_exact(&mut f32buf).map_err(|_| bad("truncated samples"))?;
            let im = f32::from_le_bytes(f32buf) as f64;
            samples.push(Complex64::new(re, im));
        }
        Ok(GridFunction { d, resolution, samples, box_meta: None })
    }
}

fn bad(msg: &str) -> NumericsError {
    NumericsError::Precondition(format!("qrx1 cache: {msg}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_indicator_is_zero_one_valued() {
        let g = GridFunction::box_indicator(&[8, 8], &[0.0, 0.5], &[0.25, 0.5]);
        assert!(g.samples.iter().all(|v| v.re == 0.0 || v.re == 1.0));
        let mass = g.l1_norm();
        assert!((mass - 0.125).abs() < 0.1, "approximate box volume, got {mass}");
    }

    #[test]
    fn qrx1_roundtrip() {
        let g = GridFunction::from_fn(&[4, 3], |p| Complex64::new(p[0], -p[1]));
        let mut buf = Vec::new();
        g.write_qrx1(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"QRX1");
        let g2 = GridFunction::read_qrx1(&mut buf.as_slice()).unwrap();
        assert_eq!(g2.resolution, vec![4, 3]);
        for (a, b) in g.samples.iter().zip(&g2.samples) {
            assert!((a - b).norm() < 1e-6); // f32 storage
        }
        // corrupted magic
        buf[0] = b'X';
        assert!(GridFunction::read_qrx1(&mut buf.as_slice()).is_err());
    }
}
