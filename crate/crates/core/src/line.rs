//! Ground-truth physical model of the end-to-end path: fiber spans and
//! amplifiers with ownership tags and role-based parameter visibility.
//!
//! The true parameters of the access segments are hidden from every
//! operational role; only the omniscient test role can read them. The
//! carrier can read its own segments, customers can read none.

use crate::constants::{dispersion_to_beta2, PhysicalConstants};
use crate::profile::{PowerProfile, ProfileSampling};
use crate::units::lin_to_db;
use serde::{Deserialize, Serialize};
use std::str::FromStr;
use thiserror::Error;

/// Quantum-limit floor for amplifier noise figures, in dB.
pub const NF_QUANTUM_LIMIT_DB: f64 = 3.0;

#[derive(Debug, Error)]
pub enum LineError {
    #[error("fiber span length must be positive, got {0} km")]
    BadSpanLength(f64),
    #[error("fiber loss coefficient must be non-negative, got {0} dB/km")]
    BadLossCoeff(f64),
    #[error("fiber nonlinear coefficient must be non-negative, got {0} /W/km")]
    BadNonlinearCoeff(f64),
    #[error("amplifier gain must be non-negative, got {0} dB")]
    BadGain(f64),
    #[error("noise figure {0} dB is below the {NF_QUANTUM_LIMIT_DB} dB quantum limit")]
    NoiseFigureBelowQuantumLimit(f64),
    #[error("profile resolution must be positive, got {0} km")]
    BadResolution(f64),
    #[error("unknown role '{0}'")]
    UnknownRole(String),
}

/// A single fiber span with its true physical parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiberSpan {
    pub length_km: f64,
    /// Attenuation in dB/km.
    pub loss_db_km: f64,
    /// Dispersion D in ps/nm/km.
    pub dispersion_ps_nm_km: f64,
    /// Kerr nonlinear coefficient in 1/(W·km).
    pub gamma_per_w_km: f64,
    /// beta2 in s^2/m, derived once from D at topology build.
    pub beta2_s2_m: f64,
}

impl FiberSpan {
    pub fn new(
        length_km: f64,
        loss_db_km: f64,
        dispersion_ps_nm_km: f64,
        gamma_per_w_km: f64,
        wavelength_nm: f64,
    ) -> Result<Self, LineError> {
        if !(length_km > 0.0) {
            return Err(LineError::BadSpanLength(length_km));
        }
        if loss_db_km < 0.0 {
            return Err(LineError::BadLossCoeff(loss_db_km));
        }
        if gamma_per_w_km < 0.0 {
            return Err(LineError::BadNonlinearCoeff(gamma_per_w_km));
        }
        Ok(Self {
            length_km,
            loss_db_km,
            dispersion_ps_nm_km,
            gamma_per_w_km,
            beta2_s2_m: dispersion_to_beta2(dispersion_ps_nm_km, wavelength_nm),
        })
    }
}

/// Flat-gain amplifier (no tilt, no saturation; single-channel model).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Amplifier {
    pub gain_db: f64,
    pub noise_figure_db: f64,
}

impl Amplifier {
    pub fn new(gain_db: f64, noise_figure_db: f64) -> Result<Self, LineError> {
        Self::with_nf_floor(gain_db, noise_figure_db, true)
    }

    /// `enforce_quantum_limit` can be switched off for synthetic test
    /// amplifiers (e.g. noiseless gain elements).
    pub fn with_nf_floor(
        gain_db: f64,
        noise_figure_db: f64,
        enforce_quantum_limit: bool,
    ) -> Result<Self, LineError> {
        if gain_db < 0.0 {
            return Err(LineError::BadGain(gain_db));
        }
        if enforce_quantum_limit && noise_figure_db < NF_QUANTUM_LIMIT_DB {
            return Err(LineError::NoiseFigureBelowQuantumLimit(noise_figure_db));
        }
        Ok(Self {
            gain_db,
            noise_figure_db,
        })
    }
}

/// One element of the line: a fiber span or an amplifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Element {
    Span(FiberSpan),
    Amp(Amplifier),
}

/// Who owns (and may disclose) a segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ownership {
    CustomerAalA,
    Carrier,
    CustomerAalB,
}

/// Observer roles for parameter visibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    CustomerA,
    CustomerB,
    Carrier,
    /// Test-only role that sees everything.
    OmniscientTest,
}

impl FromStr for Role {
    type Err = LineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "customer-a" => Ok(Role::CustomerA),
            "customer-b" => Ok(Role::CustomerB),
            "carrier" => Ok(Role::Carrier),
            "omniscient-test" => Ok(Role::OmniscientTest),
            other => Err(LineError::UnknownRole(other.to_string())),
        }
    }
}

/// A tagged element of the topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub element: Element,
    pub ownership: Ownership,
}

/// The full end-to-end line: AAL A, carrier link, AAL B, in order.
///
/// Immutable after construction; safe to share across concurrent readers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkTopology {
    pub segments: Vec<Segment>,
    pub constants: PhysicalConstants,
}

impl LinkTopology {
    pub fn new(segments: Vec<Segment>, constants: PhysicalConstants) -> Self {
        Self {
            segments,
            constants,
        }
    }

    /// Total fiber length in km.
    pub fn total_length_km(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| match &s.element {
                Element::Span(sp) => sp.length_km,
                Element::Amp(_) => 0.0,
            })
            .sum()
    }

    /// Accumulated beta2·L over all spans, in s^2.
    pub fn total_dispersion_s2(&self) -> f64 {
        self.segments
            .iter()
            .map(|s| match &s.element {
                Element::Span(sp) => sp.beta2_s2_m * sp.length_km * 1e3,
                Element::Amp(_) => 0.0,
            })
            .sum()
    }

    /// Segments belonging to one owner, in order.
    pub fn owned_by(&self, owner: Ownership) -> Vec<&Segment> {
        self.segments
            .iter()
            .filter(|s| s.ownership == owner)
            .collect()
    }

    /// Sub-topology containing only the segments of one owner.
    pub fn section(&self, owner: Ownership) -> LinkTopology {
        LinkTopology {
            segments: self
                .segments
                .iter()
                .filter(|s| s.ownership == owner)
                .cloned()
                .collect(),
            constants: self.constants,
        }
    }
}

/// A segment as seen by a role: structure always visible, parameters only
/// when the role is entitled to them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedactedSegment {
    pub ownership: Ownership,
    pub kind: SegmentKind,
    /// Span parameters (length, loss, dispersion, gamma), present only if visible.
    pub span: Option<FiberSpan>,
    /// Amplifier parameters (gain, NF), present only if visible.
    pub amp: Option<Amplifier>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SegmentKind {
    Span,
    Amp,
}

/// Topology with parameters masked according to the observer's role.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedactedTopology {
    pub role: Role,
    pub segments: Vec<RedactedSegment>,
}

fn role_sees(role: Role, ownership: Ownership) -> bool {
    match role {
        // Both sides treat the access links as unknown; the carrier may read
        // only its own section.
        Role::Carrier => ownership == Ownership::Carrier,
        Role::CustomerA | Role::CustomerB => false,
        Role::OmniscientTest => true,
    }
}

/// Return the topology with parameters masked per the visibility rules.
///
/// Customers see only the structure adjacent to their own transceiver; the
/// carrier sees carrier-owned parameters; the omniscient test role sees all.
pub fn visible_view(topology: &LinkTopology, role: Role) -> RedactedTopology {
    let segments = topology
        .segments
        .iter()
        .filter(|seg| match role {
            Role::CustomerA => seg.ownership == Ownership::CustomerAalA,
            Role::CustomerB => seg.ownership == Ownership::CustomerAalB,
            _ => true,
        })
        .map(|seg| {
            let visible = role_sees(role, seg.ownership);
            let (kind, span, amp) = match &seg.element {
                Element::Span(s) => (SegmentKind::Span, visible.then(|| s.clone()), None),
                Element::Amp(a) => (SegmentKind::Amp, None, visible.then(|| a.clone())),
            };
            RedactedSegment {
                ownership: seg.ownership,
                kind,
                span,
                amp,
            }
        })
        .collect();
    RedactedTopology { role, segments }
}

/// Ground-truth power evolution along the topology: -loss·z within spans,
/// +gain jumps at amplifiers, starting at the launch power.
///
/// Samples lie on a uniform grid of the given resolution (span boundaries
/// are always included); the sample at an amplifier position carries the
/// post-gain power ([`ProfileSampling::PostJump`]).
pub fn true_power_profile(
    topology: &LinkTopology,
    launch_dbm: f64,
    resolution_km: f64,
) -> Result<PowerProfile, LineError> {
    if !(resolution_km > 0.0) {
        return Err(LineError::BadResolution(resolution_km));
    }
    let mut distance = vec![0.0f64];
    let mut power = vec![launch_dbm];
    let mut z = 0.0f64;
    let mut p = launch_dbm;
    for seg in &topology.segments {
        match &seg.element {
            Element::Span(span) => {
                let n_steps = (span.length_km / resolution_km).ceil().max(1.0) as usize;
                for k in 1..=n_steps {
                    let dz = (span.length_km / n_steps as f64).min(span.length_km);
                    let zk = z + dz * k as f64;
                    distance.push(zk);
                    power.push(p - span.loss_db_km * dz * k as f64);
                }
                z += span.length_km;
                p -= span.loss_db_km * span.length_km;
            }
            Element::Amp(amp) => {
                // overwrite the sample at this position with post-gain power
                p += amp.gain_db;
                if let Some(last) = power.last_mut() {
                    *last = p;
                }
            }
        }
    }
    // distances are strictly increasing by construction, so build directly;
    // a zero-length topology degenerates to a single point at launch power
    Ok(PowerProfile {
        distance_km: distance,
        power_dbm: power,
        sampling: ProfileSampling::PostJump,
    })
}

/// dB bookkeeping over the whole line: sum of gains minus sum of losses.
pub fn net_gain_db(topology: &LinkTopology) -> f64 {
    topology
        .segments
        .iter()
        .map(|s| match &s.element {
            Element::Span(sp) => -sp.loss_db_km * sp.length_km,
            Element::Amp(a) => a.gain_db,
        })
        .sum()
}

/// Average signal power in dBm a unit-gain reference would see; convenience
/// for tests that compare against waveform measurements.
pub fn mean_power_dbm(power_watts: f64) -> f64 {
    lin_to_db(power_watts / 1e-3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn smf(length_km: f64, loss: f64) -> FiberSpan {
        FiberSpan::new(length_km, loss, 16.7, 1.3, 1550.0).unwrap()
    }

    fn two_span_aal(loss: f64, gain: f64) -> LinkTopology {
        LinkTopology::new(
            vec![
                Segment {
                    element: Element::Span(smf(50.0, loss)),
                    ownership: Ownership::CustomerAalA,
                },
                Segment {
                    element: Element::Amp(Amplifier::new(gain, 5.0).unwrap()),
                    ownership: Ownership::CustomerAalA,
                },
                Segment {
                    element: Element::Span(smf(50.0, loss)),
                    ownership: Ownership::CustomerAalA,
                },
            ],
            PhysicalConstants::default(),
        )
    }

    #[test]
    fn single_span_endpoint() {
        let topo = LinkTopology::new(
            vec![Segment {
                element: Element::Span(smf(50.0, 0.2)),
                ownership: Ownership::Carrier,
            }],
            PhysicalConstants::default(),
        );
        let profile = true_power_profile(&topo, 5.0, 0.5).unwrap();
        assert!((profile.power_dbm.last().unwrap() - (-5.0)).abs() < 1e-9);
        assert!((profile.distance_km.last().unwrap() - 50.0).abs() < 1e-9);
    }

    #[test]
    fn zero_length_topology_is_single_point() {
        let topo = LinkTopology::new(vec![], PhysicalConstants::default());
        let profile = true_power_profile(&topo, 5.0, 1.0).unwrap();
        assert_eq!(profile.distance_km, vec![0.0]);
        assert_eq!(profile.power_dbm, vec![5.0]);
    }

    #[test]
    fn mid_link_jump_matches_declared_gain() {
        // 2x50 km at 0.186 dB/km with a 9.42 dB mid amplifier, 5 dBm launch:
        // the profile drops to -4.3 dBm then jumps to 5.12 dBm
        let topo = two_span_aal(0.186, 9.42);
        let profile = true_power_profile(&topo, 5.0, 0.1).unwrap();
        let idx_before = profile
            .distance_km
            .iter()
            .position(|&d| (d - 49.9).abs() < 1e-9)
            .unwrap();
        let idx_at = profile
            .distance_km
            .iter()
            .position(|&d| (d - 50.0).abs() < 1e-9)
            .unwrap();
        let before = profile.power_dbm[idx_before] - 0.186 * 0.1; // extrapolate to 50 km
        assert!((before - (-4.3)).abs() < 1e-9, "pre-amp {before}");
        assert!((profile.power_dbm[idx_at] - 5.12).abs() < 1e-9);
    }

    #[test]
    fn monotone_between_amplifiers() {
        let topo = two_span_aal(0.2, 9.42);
        let profile = true_power_profile(&topo, 5.0, 0.7).unwrap();
        let mut jumps = 0;
        for i in 1..profile.len() {
            let dp = profile.power_dbm[i] - profile.power_dbm[i - 1];
            if dp > 0.0 {
                jumps += 1;
            }
        }
        assert_eq!(jumps, 1, "exactly one positive jump (the amplifier)");
    }

    #[test]
    fn db_bookkeeping_exact() {
        let topo = two_span_aal(0.186, 9.42);
        let profile = true_power_profile(&topo, 5.0, 0.25).unwrap();
        let drop = profile.power_dbm[0] - profile.power_dbm.last().unwrap();
        assert!((drop - (-net_gain_db(&topo))).abs() < 1e-9);
    }

    #[test]
    fn visible_view_rules() {
        let mut topo = two_span_aal(0.2, 9.42);
        topo.segments.push(Segment {
            element: Element::Span(smf(80.0, 0.21)),
            ownership: Ownership::Carrier,
        });
        topo.segments.push(Segment {
            element: Element::Span(smf(30.0, 0.19)),
            ownership: Ownership::CustomerAalB,
        });

        let carrier = visible_view(&topo, Role::Carrier);
        for seg in &carrier.segments {
            let visible = seg.span.is_some() || seg.amp.is_some();
            assert_eq!(visible, seg.ownership == Ownership::Carrier);
        }

        let cust_a = visible_view(&topo, Role::CustomerA);
        assert!(cust_a
            .segments
            .iter()
            .all(|s| s.ownership == Ownership::CustomerAalA));
        assert!(cust_a
            .segments
            .iter()
            .all(|s| s.span.is_none() && s.amp.is_none()));

        let omni = visible_view(&topo, Role::OmniscientTest);
        assert_eq!(omni.segments.len(), topo.segments.len());
        for (rseg, seg) in omni.segments.iter().zip(&topo.segments) {
            match &seg.element {
                Element::Span(s) => assert_eq!(rseg.span.as_ref(), Some(s)),
                Element::Amp(a) => assert_eq!(rseg.amp.as_ref(), Some(a)),
            }
        }
    }

    #[test]
    fn visible_view_never_leaks_masked_fields() {
        let mut rng = StdRng::seed_from_u64(42);
        for _ in 0..200 {
            let n = rng.gen_range(1..8);
            let segments: Vec<Segment> = (0..n)
                .map(|_| {
                    let ownership = match rng.gen_range(0..3) {
                        0 => Ownership::CustomerAalA,
                        1 => Ownership::Carrier,
                        _ => Ownership::CustomerAalB,
                    };
                    let element = if rng.gen_bool(0.6) {
                        Element::Span(smf(rng.gen_range(1.0..100.0), rng.gen_range(0.15..0.25)))
                    } else {
                        Element::Amp(
                            Amplifier::new(rng.gen_range(0.0..25.0), rng.gen_range(3.5..8.0))
                                .unwrap(),
                        )
                    };
                    Segment { element, ownership }
                })
                .collect();
            let topo = LinkTopology::new(segments, PhysicalConstants::default());
            for role in [Role::CustomerA, Role::CustomerB, Role::Carrier] {
                let view = visible_view(&topo, role);
                for seg in &view.segments {
                    let allowed = role_sees(role, seg.ownership);
                    if !allowed {
                        assert!(seg.span.is_none() && seg.amp.is_none());
                    }
                }
            }
        }
    }

    #[test]
    fn role_parsing() {
        assert_eq!(Role::from_str("carrier").unwrap(), Role::Carrier);
        assert!(Role::from_str("eavesdropper").is_err());
    }

    #[test]
    fn invariants_rejected() {
        assert!(FiberSpan::new(0.0, 0.2, 16.7, 1.3, 1550.0).is_err());
        assert!(FiberSpan::new(10.0, -0.1, 16.7, 1.3, 1550.0).is_err());
        assert!(Amplifier::new(-1.0, 5.0).is_err());
        assert!(Amplifier::new(10.0, 2.0).is_err());
        assert!(Amplifier::with_nf_floor(10.0, 0.0, false).is_ok());
    }
}
