//! Transmit-side signal synthesis, nonlinear fiber propagation, ASE noise
//! loading, and receive-side demodulation.
//!
//! All operations are pure given their seeds, and all filtering is circular
//! (periodic records), which keeps propagation exactly unitary in the linear
//! lossless limit and makes segment concatenation exactly compositional.

mod constellation;
mod demod;
mod fft;
mod noise;
mod shaping;
mod ssfm;
mod waveform;

pub use constellation::{Constellation, Modulation};
pub use demod::{demodulate, DemodMetrics};
pub use noise::load_awgn_to_osnr;
pub use shaping::{
    matched_filter_and_downsample, rrc_response, shape_symbols_at, SymbolsAtRate,
};
pub use ssfm::{
    propagate, propagate_with_monitor, PropagationConfig, StepSample, MANAKOV_FACTOR,
};
pub use waveform::{read_waveform, write_waveform, WaveformGrid};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("symbol count must be >= 1, got {0}")]
    EmptySymbols(usize),
    #[error("roll-off must lie in [0, 1], got {0}")]
    BadRolloff(f64),
    #[error("oversampling must be an integer >= 2, got {0}")]
    BadOversampling(usize),
    #[error("step size must be positive, got {0} km")]
    BadStepSize(f64),
    #[error("waveform polarizations differ in length: {0} vs {1}")]
    PolarizationMismatch(usize, usize),
    #[error("waveform file: {0}")]
    FileFormat(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Symbol-rate complex samples for both polarizations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolSequence {
    pub modulation: Modulation,
    pub x: Vec<Complex64>,
    pub y: Vec<Complex64>,
    pub seed: u64,
}

impl SymbolSequence {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

/// Draw a random dual-polarization symbol sequence and shape it into a
/// root-raised-cosine waveform at the given baud, normalized to unit
/// average optical power.
///
/// The same seed always produces bit-identical output.
pub fn generate_waveform(
    modulation: Modulation,
    n_symbols: usize,
    rolloff: f64,
    oversampling: usize,
    baud_hz: f64,
    seed: u64,
) -> Result<(SymbolSequence, WaveformGrid), SignalError> {
    if n_symbols == 0 {
        return Err(SignalError::EmptySymbols(n_symbols));
    }
    if !(0.0..=1.0).contains(&rolloff) {
        return Err(SignalError::BadRolloff(rolloff));
    }
    if oversampling < 2 {
        return Err(SignalError::BadOversampling(oversampling));
    }
    let constellation = Constellation::new(modulation);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut draw = |rng: &mut ChaCha20Rng| -> Vec<Complex64> {
        (0..n_symbols)
            .map(|_| constellation.points()[rng.gen_range(0..constellation.order())])
            .collect()
    };
    let x = draw(&mut rng);
    let y = draw(&mut rng);
    let symbols = SymbolSequence {
        modulation,
        x,
        y,
        seed,
    };
    let grid = shaping::shape_symbols_at(&symbols, rolloff, oversampling, baud_hz)?;
    Ok((symbols, grid))
}
