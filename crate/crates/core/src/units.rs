//! dB/linear conversions used throughout the crate.
//!
//! Conventions: optical powers are carried as dBm at module boundaries and
//! as watts inside numeric kernels; field loss/gain is applied in amplitude,
//! power bookkeeping in dB.

use std::f64::consts::LN_10;

/// Power ratio in dB to linear.
pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn lin_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// dBm to watts.
pub fn dbm_to_watts(dbm: f64) -> f64 {
    1e-3 * db_to_lin(dbm)
}

/// Watts to dBm.
pub fn watts_to_dbm(watts: f64) -> f64 {
    lin_to_db(watts / 1e-3)
}

/// Attenuation in dB/km to the power attenuation coefficient in 1/m.
pub fn loss_db_km_to_per_m(db_per_km: f64) -> f64 {
    db_per_km * LN_10 / 10.0 / 1000.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrips() {
        for x in [-30.0, -3.0, 0.0, 5.0, 20.0] {
            assert!((lin_to_db(db_to_lin(x)) - x).abs() < 1e-12);
            assert!((watts_to_dbm(dbm_to_watts(x)) - x).abs() < 1e-12);
        }
        assert!((dbm_to_watts(0.0) - 1e-3).abs() < 1e-18);
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn loss_coefficient() {
        // 0.2 dB/km over 50 km is 10 dB: exp(-a * 50e3) must equal 10^-1
        let a = loss_db_km_to_per_m(0.2);
        assert!(((-a * 50e3).exp() - 0.1).abs() < 1e-12);
    }
}
