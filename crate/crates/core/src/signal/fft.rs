//! Thin wrapper over rustfft with normalized inverse transforms and the
//! angular-frequency grid used by every frequency-domain operator.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

pub struct SpectrumOps {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl SpectrumOps {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn fft(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.fwd.process(buf);
    }

    /// Inverse FFT including the 1/N normalization, so `ifft(fft(x)) == x`.
    pub fn ifft(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.n);
        self.inv.process(buf);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

/// Angular frequencies (rad/s) matching the FFT bin layout for a record of
/// `n` samples at `sample_rate_hz`.
pub fn angular_freqs(n: usize, sample_rate_hz: f64) -> Vec<f64> {
    let df = sample_rate_hz / n as f64;
    (0..n)
        .map(|k| {
            let f = if k <= n / 2 {
                k as f64 * df
            } else {
                (k as f64 - n as f64) * df
            };
            2.0 * PI * f
        })
        .collect()
}

/// Baseband frequencies (Hz) matching the FFT bin layout.
pub fn baseband_freqs(n: usize, sample_rate_hz: f64) -> Vec<f64> {
    angular_freqs(n, sample_rate_hz)
        .into_iter()
        .map(|w| w / (2.0 * PI))
        .collect()
}
