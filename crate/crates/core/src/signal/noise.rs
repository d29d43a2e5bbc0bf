//! Additive noise loading for receiver-side tests and black-box probing.

use super::WaveformGrid;
use crate::units::db_to_lin;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

/// Add circular complex Gaussian noise so the waveform's OSNR, measured in
/// the given reference bandwidth, equals `target_osnr_db`. Noise is white
/// across the simulation bandwidth and split equally between polarizations.
pub fn load_awgn_to_osnr(
    wf: &WaveformGrid,
    target_osnr_db: f64,
    ref_bandwidth_hz: f64,
    seed: u64,
) -> WaveformGrid {
    let p_watts = wf.mean_power_watts();
    if !target_osnr_db.is_finite() {
        return wf.clone();
    }
    // both-polarization noise PSD such that P / (PSD * B_ref) = OSNR
    let psd_total = p_watts / (db_to_lin(target_osnr_db) * ref_bandwidth_hz);
    let sigma = (0.5 * psd_total * wf.sample_rate_hz / 2.0).sqrt();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = wf.clone();
    for v in out.x.iter_mut() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *v += Complex64::new(re * sigma, im * sigma);
    }
    for v in out.y.iter_mut() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *v += Complex64::new(re * sigma, im * sigma);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{generate_waveform, Modulation};
    use crate::units::{dbm_to_watts, lin_to_db};

    #[test]
    fn loaded_noise_power_matches_target() {
        let wf = generate_waveform(Modulation::DpQpsk, 4096, 0.1, 2, 32e9, 5)
            .unwrap()
            .1
            .scaled_to_power(dbm_to_watts(0.0));
        let bref = 12.5e9;
        let noisy = load_awgn_to_osnr(&wf, 20.0, bref, 11);
        let noise_power = noisy.mean_power_watts() - wf.mean_power_watts();
        // total injected noise power = PSD * fs; expected OSNR back-out:
        let psd = noise_power / wf.sample_rate_hz;
        let osnr = lin_to_db(wf.mean_power_watts() / (psd * bref));
        assert!((osnr - 20.0).abs() < 0.2, "measured OSNR {osnr}");
    }
}
