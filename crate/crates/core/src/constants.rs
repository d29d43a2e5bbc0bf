//! Physical constants fixed per scenario.

use serde::{Deserialize, Serialize};

/// Planck constant in J·s.
pub const PLANCK: f64 = 6.62607015e-34;

/// Speed of light in m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Reference quantities every OSNR in this crate is quoted against.
///
/// The reference bandwidth defaults to 12.5 GHz (0.1 nm at 1550 nm); OSNRs
/// are converted to per-baud SNR only where a BER threshold is inverted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// OSNR reference bandwidth in GHz.
    pub ref_bandwidth_ghz: f64,
    /// Carrier wavelength in nm.
    pub wavelength_nm: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            ref_bandwidth_ghz: 12.5,
            wavelength_nm: 1550.0,
        }
    }
}

impl PhysicalConstants {
    /// Carrier frequency in Hz.
    pub fn carrier_freq_hz(&self) -> f64 {
        SPEED_OF_LIGHT / (self.wavelength_nm * 1e-9)
    }

    /// Photon energy h·nu in J.
    pub fn photon_energy(&self) -> f64 {
        PLANCK * self.carrier_freq_hz()
    }

    /// Reference bandwidth in Hz.
    pub fn ref_bandwidth_hz(&self) -> f64 {
        self.ref_bandwidth_ghz * 1e9
    }

    /// 10·log10(1 mW / (h·nu·B_ref)): the constant that maps launch power,
    /// span loss, and noise figure straight to a per-span OSNR in dB.
    pub fn osnr_constant_db(&self) -> f64 {
        10.0 * (1e-3 / (self.photon_energy() * self.ref_bandwidth_hz())).log10()
    }

    /// Validity check used by scenario loading.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.ref_bandwidth_ghz > 0.0) {
            return Err(format!(
                "reference bandwidth must be positive, got {}",
                self.ref_bandwidth_ghz
            ));
        }
        if !(self.wavelength_nm > 0.0) {
            return Err(format!(
                "wavelength must be positive, got {}",
                self.wavelength_nm
            ));
        }
        Ok(())
    }
}

/// Convert dispersion D (ps/nm/km) to beta2 (s^2/m) at the given wavelength.
///
/// beta2 = -D·lambda^2/(2·pi·c); done once at topology build so every
/// consumer sees the same value.
pub fn dispersion_to_beta2(d_ps_nm_km: f64, wavelength_nm: f64) -> f64 {
    let d_si = d_ps_nm_km * 1e-6; // s/m^2
    let lambda = wavelength_nm * 1e-9;
    -d_si * lambda * lambda / (2.0 * std::f64::consts::PI * SPEED_OF_LIGHT)
}
