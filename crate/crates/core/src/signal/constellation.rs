//! Gray-mapped constellations for the two supported modulation formats,
//! normalized to unit average power per polarization.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Supported dual-polarization modulation formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modulation {
    DpQpsk,
    Dp16qam,
}

impl Modulation {
    /// Bits per symbol per polarization.
    pub fn bits_per_symbol(&self) -> usize {
        match self {
            Modulation::DpQpsk => 2,
            Modulation::Dp16qam => 4,
        }
    }

    pub fn order(&self) -> usize {
        1 << self.bits_per_symbol()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Modulation::DpQpsk => "DP-QPSK",
            Modulation::Dp16qam => "DP-16QAM",
        }
    }
}

impl std::fmt::Display for Modulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn gray(n: usize) -> usize {
    n ^ (n >> 1)
}

/// Square-grid Gray constellation; index is the Gray-coded bit label.
#[derive(Debug, Clone)]
pub struct Constellation {
    modulation: Modulation,
    points: Vec<Complex64>,
}

impl Constellation {
    pub fn new(modulation: Modulation) -> Self {
        let bps = modulation.bits_per_symbol();
        let side = 1usize << (bps / 2);
        let order = modulation.order();
        let mut points = vec![Complex64::new(0.0, 0.0); order];
        for i_idx in 0..side {
            for q_idx in 0..side {
                let label = (gray(i_idx) << (bps / 2)) | gray(q_idx);
                let re = 2.0 * i_idx as f64 - (side as f64 - 1.0);
                let im = 2.0 * q_idx as f64 - (side as f64 - 1.0);
                points[label] = Complex64::new(re, im);
            }
        }
        let avg: f64 = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / order as f64;
        let scale = avg.sqrt().recip();
        for p in &mut points {
            *p *= scale;
        }
        Self { modulation, points }
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Nearest-point hard decision; returns the Gray label.
    pub fn decide(&self, sample: Complex64) -> usize {
        let mut best = 0usize;
        let mut best_d = f64::MAX;
        for (idx, p) in self.points.iter().enumerate() {
            let d = (sample - p).norm_sqr();
            if d < best_d {
                best_d = d;
                best = idx;
            }
        }
        best
    }

    /// Gray label of the exact constellation point (used to demap references).
    pub fn label_of(&self, point: Complex64) -> usize {
        self.decide(point)
    }

    /// Hamming distance between the Gray labels of two points.
    pub fn bit_errors(&self, a: usize, b: usize) -> u32 {
        ((a ^ b) as u32).count_ones()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_average_power() {
        for m in [Modulation::DpQpsk, Modulation::Dp16qam] {
            let c = Constellation::new(m);
            let avg: f64 =
                c.points().iter().map(|p| p.norm_sqr()).sum::<f64>() / c.order() as f64;
            assert!((avg - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gray_neighbors_differ_by_one_bit() {
        let c = Constellation::new(Modulation::Dp16qam);
        let coords: Vec<(i32, i32)> = c
            .points()
            .iter()
            .map(|p| {
                (
                    (p.re * 10.0f64.sqrt()).round() as i32,
                    (p.im * 10.0f64.sqrt()).round() as i32,
                )
            })
            .collect();
        for a in 0..c.order() {
            for b in 0..c.order() {
                let (ar, ai) = coords[a];
                let (br, bi) = coords[b];
                let adjacent = (ar == br && (ai - bi).abs() == 2)
                    || (ai == bi && (ar - br).abs() == 2);
                if adjacent {
                    assert_eq!(c.bit_errors(a, b), 1, "labels {a} {b}");
                }
            }
        }
    }

    #[test]
    fn decide_roundtrip() {
        for m in [Modulation::DpQpsk, Modulation::Dp16qam] {
            let c = Constellation::new(m);
            for (label, p) in c.points().iter().enumerate() {
                assert_eq!(c.decide(*p), label);
            }
        }
    }
}
