//! Receive-side DSP: full chromatic-dispersion compensation, matched
//! filtering, blind carrier-phase removal, and hard decisions, with pre-FEC
//! BER and EVM against an optional known reference.

use super::constellation::{Constellation, Modulation};
use super::fft::{angular_freqs, SpectrumOps};
use super::shaping::matched_filter_and_downsample;
use super::{SymbolSequence, WaveformGrid};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Receiver metrics for one demodulation run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DemodMetrics {
    /// Pre-FEC bit error ratio against the reference, if one was given.
    pub ber: Option<f64>,
    pub bit_errors: Option<u64>,
    pub bits_compared: Option<u64>,
    /// Error vector magnitude in percent against the reference symbols.
    pub evm_percent: Option<f64>,
    /// Carrier-phase recovery reached a stable estimate on both
    /// polarizations. Not fatal when false; decisions are still returned.
    pub phase_converged: bool,
}

/// Demodulate a received waveform: undo the accumulated link dispersion
/// (`total_dispersion_s2` = sum of beta2·L over the path), matched-filter,
/// downsample, remove the carrier phase blindly, and decide symbols.
pub fn demodulate(
    rx: &WaveformGrid,
    total_dispersion_s2: f64,
    modulation: Modulation,
    rolloff: f64,
    reference: Option<&SymbolSequence>,
) -> (SymbolSequence, DemodMetrics) {
    let mut compensated = rx.clone();
    if total_dispersion_s2 != 0.0 && !rx.is_empty() {
        let ops = SpectrumOps::new(rx.len());
        let mult: Vec<Complex64> = angular_freqs(rx.len(), rx.sample_rate_hz)
            .into_iter()
            .map(|w| Complex64::from_polar(1.0, -0.5 * total_dispersion_s2 * w * w))
            .collect();
        ops.fft(&mut compensated.x);
        ops.fft(&mut compensated.y);
        for i in 0..mult.len() {
            compensated.x[i] *= mult[i];
            compensated.y[i] *= mult[i];
        }
        ops.ifft(&mut compensated.x);
        ops.ifft(&mut compensated.y);
    }

    let symbols = matched_filter_and_downsample(&compensated, rolloff);
    let constellation = Constellation::new(modulation);

    let (mut sx, ok_x) = recover_phase(&constellation, symbols.x);
    let (mut sy, ok_y) = recover_phase(&constellation, symbols.y);

    let mut metrics = DemodMetrics {
        ber: None,
        bit_errors: None,
        bits_compared: None,
        evm_percent: None,
        phase_converged: ok_x && ok_y,
    };

    if let Some(reference) = reference {
        // resolve the residual k*pi/2 ambiguity of blind recovery per
        // polarization against the reference, then count errors
        let (ex, rot_x) = best_rotation(&constellation, &sx, &reference.x);
        let (ey, rot_y) = best_rotation(&constellation, &sy, &reference.y);
        apply_rotation(&mut sx, rot_x);
        apply_rotation(&mut sy, rot_y);
        let total_bits = ((reference.x.len().min(sx.len())
            + reference.y.len().min(sy.len()))
            * modulation.bits_per_symbol()) as u64;
        let errors = ex + ey;
        metrics.ber = Some(errors as f64 / total_bits as f64);
        metrics.bit_errors = Some(errors);
        metrics.bits_compared = Some(total_bits);
        metrics.evm_percent = Some(evm_percent(&sx, &sy, reference));
    }

    let decide_all = |v: &[Complex64]| -> Vec<Complex64> {
        v.iter()
            .map(|s| constellation.points()[constellation.decide(*s)])
            .collect()
    };
    let decided = SymbolSequence {
        modulation,
        x: decide_all(&sx),
        y: decide_all(&sy),
        seed: 0,
    };
    (decided, metrics)
}

/// Blind carrier-phase estimate: fourth-power for QPSK, coarse grid search
/// plus decision-directed refinement for 16QAM. Returns the de-rotated
/// symbols and a convergence flag.
fn recover_phase(
    constellation: &Constellation,
    mut symbols: Vec<Complex64>,
) -> (Vec<Complex64>, bool) {
    if symbols.is_empty() {
        return (symbols, false);
    }
    let converged;
    match constellation.modulation() {
        Modulation::DpQpsk => {
            let s4: Complex64 = symbols.iter().map(|s| s * s * s * s).sum();
            // QPSK^4 collapses to a single tone at 4*theta (offset by pi)
            let theta = (s4 * Complex64::from_polar(1.0, -PI)).arg() / 4.0;
            apply_phase(&mut symbols, -theta);
            converged = s4.norm() / symbols.len() as f64 > 0.05;
        }
        Modulation::Dp16qam => {
            // coarse search over a quadrant
            let mut best = (f64::MAX, 0.0);
            for k in 0..64 {
                let theta = k as f64 / 64.0 * FRAC_PI_2;
                let cost: f64 = symbols
                    .iter()
                    .step_by((symbols.len() / 512).max(1))
                    .map(|s| {
                        let r = s * Complex64::from_polar(1.0, -theta);
                        let d = constellation.points()[constellation.decide(r)];
                        (r - d).norm_sqr()
                    })
                    .sum();
                if cost < best.0 {
                    best = (cost, theta);
                }
            }
            let mut theta = best.1;
            let mut delta = f64::MAX;
            for _ in 0..16 {
                let num: Complex64 = symbols
                    .iter()
                    .map(|s| {
                        let r = s * Complex64::from_polar(1.0, -theta);
                        let d = constellation.points()[constellation.decide(r)];
                        r * d.conj()
                    })
                    .sum();
                delta = num.arg();
                theta += delta;
                if delta.abs() < 1e-9 {
                    break;
                }
            }
            apply_phase(&mut symbols, -theta);
            converged = delta.abs() < 1e-3;
        }
    }
    (symbols, converged)
}

fn apply_phase(symbols: &mut [Complex64], theta: f64) {
    let rot = Complex64::from_polar(1.0, theta);
    for s in symbols.iter_mut() {
        *s *= rot;
    }
}

fn apply_rotation(symbols: &mut [Complex64], quarter_turns: usize) {
    apply_phase(symbols, quarter_turns as f64 * FRAC_PI_2);
}

/// Try all four quadrant rotations and return (bit errors, best rotation).
fn best_rotation(
    constellation: &Constellation,
    symbols: &[Complex64],
    reference: &[Complex64],
) -> (u64, usize) {
    let n = symbols.len().min(reference.len());
    let ref_labels: Vec<usize> = reference[..n]
        .iter()
        .map(|r| constellation.label_of(*r))
        .collect();
    let mut best = (u64::MAX, 0usize);
    for k in 0..4 {
        let rot = Complex64::from_polar(1.0, k as f64 * FRAC_PI_2);
        let errors: u64 = symbols[..n]
            .iter()
            .zip(&ref_labels)
            .map(|(s, &rl)| {
                let d = constellation.decide(s * rot);
                constellation.bit_errors(d, rl) as u64
            })
            .sum();
        if errors < best.0 {
            best = (errors, k);
        }
    }
    best
}

fn evm_percent(sx: &[Complex64], sy: &[Complex64], reference: &SymbolSequence) -> f64 {
    let mut err = 0.0;
    let mut pow = 0.0;
    for (s, r) in sx.iter().zip(&reference.x) {
        err += (s - r).norm_sqr();
        pow += r.norm_sqr();
    }
    for (s, r) in sy.iter().zip(&reference.y) {
        err += (s - r).norm_sqr();
        pow += r.norm_sqr();
    }
    if pow <= 0.0 {
        return 0.0;
    }
    (err / pow).sqrt() * 100.0
}
