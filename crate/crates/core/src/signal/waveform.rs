//! Sampled dual-polarization optical field, plus the flat binary capture
//! format used to decouple waveform capture from estimation.

use super::SignalError;
use crate::units::watts_to_dbm;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use std::path::Path;

const MAGIC: &[u8; 8] = b"AALWVF01";

/// Sampled dual-polarization complex optical field.
///
/// Field samples are in sqrt(W): the mean of `|x|^2 + |y|^2` is the average
/// optical power in watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveformGrid {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub sample_rate_hz: f64,
    pub baud_hz: f64,
}

impl WaveformGrid {
    pub fn new(
        x: Vec<Complex64>,
        y: Vec<Complex64>,
        sample_rate_hz: f64,
        baud_hz: f64,
    ) -> Result<Self, SignalError> {
        if x.len() != y.len() {
            return Err(SignalError::PolarizationMismatch(x.len(), y.len()));
        }
        Ok(Self {
            x,
            y,
            sample_rate_hz,
            baud_hz,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Samples per symbol.
    pub fn oversampling(&self) -> usize {
        (self.sample_rate_hz / self.baud_hz).round() as usize
    }

    /// Average optical power in watts (both polarizations).
    pub fn mean_power_watts(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        let sum: f64 = self
            .x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum();
        sum / self.len() as f64
    }

    pub fn mean_power_dbm(&self) -> f64 {
        watts_to_dbm(self.mean_power_watts())
    }

    /// Copy scaled so the average power equals `watts`.
    pub fn scaled_to_power(&self, watts: f64) -> WaveformGrid {
        let current = self.mean_power_watts();
        let s = if current > 0.0 {
            (watts / current).sqrt()
        } else {
            0.0
        };
        let mut out = self.clone();
        for v in out.x.iter_mut().chain(out.y.iter_mut()) {
            *v *= s;
        }
        out
    }

    /// Total energy (sum of |.|^2 over both polarizations), used by the
    /// conservation tests.
    pub fn total_energy(&self) -> f64 {
        self.x
            .iter()
            .zip(&self.y)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum()
    }
}

/// Write a waveform in the flat binary capture format: an 8-byte magic,
/// little-endian f64 header (sample rate, baud, measured power in dBm),
/// a u64 sample count, then interleaved (re, im) per polarization.
pub fn write_waveform(path: &Path, wf: &WaveformGrid) -> Result<(), SignalError> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    f.write_all(MAGIC)?;
    f.write_all(&wf.sample_rate_hz.to_le_bytes())?;
    f.write_all(&wf.baud_hz.to_le_bytes())?;
    f.write_all(&wf.mean_power_dbm().to_le_bytes())?;
    f.write_all(&(wf.len() as u64).to_le_bytes())?;
    for (a, b) in wf.x.iter().zip(&wf.y) {
        f.write_all(&a.re.to_le_bytes())?;
        f.write_all(&a.im.to_le_bytes())?;
        f.write_all(&b.re.to_le_bytes())?;
        f.write_all(&b.im.to_le_bytes())?;
    }
    f.flush()?;
    Ok(())
}

/// Read a waveform written by [`write_waveform`].
pub fn read_waveform(path: &Path) -> Result<WaveformGrid, SignalError> {
    let mut f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    f.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(SignalError::FileFormat(format!(
            "bad magic {:?} in {}",
            magic,
            path.display()
        )));
    }
    let mut f64buf = [0u8; 8];
    let mut read_f64 = |f: &mut dyn Read| -> Result<f64, SignalError> {
        f.read_exact(&mut f64buf)?;
        Ok(f64::from_le_bytes(f64buf))
    };
    let sample_rate_hz = read_f64(&mut f)?;
    let baud_hz = read_f64(&mut f)?;
    let _power_dbm = read_f64(&mut f)?;
    let mut u64buf = [0u8; 8];
    f.read_exact(&mut u64buf)?;
    let n = u64::from_le_bytes(u64buf) as usize;
    if n > (1 << 28) {
        return Err(SignalError::FileFormat(format!(
            "implausible sample count {n}"
        )));
    }
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    let mut sample = [0u8; 32];
    for _ in 0..n {
        f.read_exact(&mut sample)?;
        let g = |i: usize| f64::from_le_bytes(sample[i * 8..(i + 1) * 8].try_into().unwrap());
        x.push(Complex64::new(g(0), g(1)));
        y.push(Complex64::new(g(2), g(3)));
    }
    WaveformGrid::new(x, y, sample_rate_hz, baud_hz)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_roundtrip() {
        let wf = WaveformGrid::new(
            vec![Complex64::new(0.1, -0.2), Complex64::new(0.3, 0.4)],
            vec![Complex64::new(-0.5, 0.6), Complex64::new(0.7, -0.8)],
            64e9,
            32e9,
        )
        .unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("probe.wvf");
        write_waveform(&path, &wf).unwrap();
        let back = read_waveform(&path).unwrap();
        assert_eq!(wf, back);
    }

    #[test]
    fn power_measurement() {
        let n = 1000;
        let x = vec![Complex64::new(1e-3f64.sqrt(), 0.0); n];
        let y = vec![Complex64::new(0.0, 1e-3f64.sqrt()); n];
        let wf = WaveformGrid::new(x, y, 64e9, 32e9).unwrap();
        // 2 mW total
        assert!((wf.mean_power_dbm() - 3.0103).abs() < 1e-3);
        let scaled = wf.scaled_to_power(1e-3);
        assert!((scaled.mean_power_dbm() - 0.0).abs() < 1e-9);
    }
}
