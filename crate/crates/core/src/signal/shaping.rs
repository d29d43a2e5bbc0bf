//! Root-raised-cosine pulse shaping and matched filtering, done in the
//! frequency domain on periodic records.
//!
//! The Tx shaper and Rx matched filter share the same real spectral root,
//! so their cascade is an exact raised-cosine Nyquist response: symbol-rate
//! samples of a clean loopback reproduce the symbols with no ISI.

use super::fft::{baseband_freqs, SpectrumOps};
use super::{SignalError, SymbolSequence, WaveformGrid};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Root-raised-cosine amplitude response sampled on the FFT grid of a
/// record with `n` samples at `sample_rate_hz`.
pub fn rrc_response(n: usize, sample_rate_hz: f64, baud_hz: f64, rolloff: f64) -> Vec<f64> {
    let f_lo = (1.0 - rolloff) * baud_hz / 2.0;
    let f_hi = (1.0 + rolloff) * baud_hz / 2.0;
    baseband_freqs(n, sample_rate_hz)
        .into_iter()
        .map(|f| {
            let af = f.abs();
            if af <= f_lo {
                1.0
            } else if af < f_hi && rolloff > 0.0 {
                let arg = PI / (rolloff * baud_hz) * (af - f_lo);
                (0.5 * (1.0 + arg.cos())).sqrt()
            } else {
                0.0
            }
        })
        .collect()
}

fn filter_in_place(ops: &SpectrumOps, response: &[f64], samples: &mut [Complex64]) {
    ops.fft(samples);
    for (s, h) in samples.iter_mut().zip(response) {
        *s *= *h;
    }
    ops.ifft(samples);
}

/// Zero-stuff the symbols to the oversampled grid and apply the RRC shaper
/// at the given baud. The result is normalized to unit average power.
pub fn shape_symbols_at(
    symbols: &SymbolSequence,
    rolloff: f64,
    oversampling: usize,
    baud_hz: f64,
) -> Result<WaveformGrid, SignalError> {
    if symbols.is_empty() {
        return Err(SignalError::EmptySymbols(0));
    }
    if oversampling < 2 {
        return Err(SignalError::BadOversampling(oversampling));
    }
    if !(0.0..=1.0).contains(&rolloff) {
        return Err(SignalError::BadRolloff(rolloff));
    }
    let n = symbols.len() * oversampling;
    let sample_rate_hz = baud_hz * oversampling as f64;
    let response = rrc_response(n, sample_rate_hz, baud_hz, rolloff);
    let ops = SpectrumOps::new(n);

    let stuff = |syms: &[Complex64]| -> Vec<Complex64> {
        let mut up = vec![Complex64::new(0.0, 0.0); n];
        for (k, s) in syms.iter().enumerate() {
            up[k * oversampling] = *s;
        }
        up
    };
    let mut x = stuff(&symbols.x);
    let mut y = stuff(&symbols.y);
    filter_in_place(&ops, &response, &mut x);
    filter_in_place(&ops, &response, &mut y);

    let mut wf = WaveformGrid::new(x, y, sample_rate_hz, baud_hz)?;
    let p = wf.mean_power_watts();
    if p > 0.0 {
        let s = p.sqrt().recip();
        for v in wf.x.iter_mut().chain(wf.y.iter_mut()) {
            *v *= s;
        }
    }
    Ok(wf)
}

/// Apply the matched RRC filter and pick one sample per symbol, normalizing
/// each polarization to unit average symbol power.
pub fn matched_filter_and_downsample(wf: &WaveformGrid, rolloff: f64) -> SymbolsAtRate {
    let n = wf.len();
    let m = wf.oversampling();
    let response = rrc_response(n, wf.sample_rate_hz, wf.baud_hz, rolloff);
    let ops = SpectrumOps::new(n);
    let mut x = wf.x.clone();
    let mut y = wf.y.clone();
    filter_in_place(&ops, &response, &mut x);
    filter_in_place(&ops, &response, &mut y);

    let pick = |v: &[Complex64]| -> Vec<Complex64> { v.iter().step_by(m).copied().collect() };
    let mut sx = pick(&x);
    let mut sy = pick(&y);
    normalize_unit_power(&mut sx);
    normalize_unit_power(&mut sy);
    SymbolsAtRate { x: sx, y: sy }
}

/// Symbol-rate samples, one complex value per symbol per polarization.
#[derive(Debug, Clone)]
pub struct SymbolsAtRate {
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
}

pub(super) fn normalize_unit_power(v: &mut [Complex64]) {
    if v.is_empty() {
        return;
    }
    let p: f64 = v.iter().map(|s| s.norm_sqr()).sum::<f64>() / v.len() as f64;
    if p > 0.0 {
        let s = p.sqrt().recip();
        for s_i in v.iter_mut() {
            *s_i *= s;
        }
    }
}
