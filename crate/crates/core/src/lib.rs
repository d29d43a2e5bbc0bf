//! Simulation and provisioning engine for coherent optical paths that cross
//! *alien access links* (AALs): access fibers whose loss, gain, and launch
//! parameters are unknown to both the customer and the carrier.
//!
//! The crate is organized as a pipeline:
//!
//! * [`line`] — ground-truth physical model of the end-to-end path with
//!   role-based parameter visibility.
//! * [`signal`] — waveform synthesis, split-step propagation of the Manakov
//!   equation, ASE loading, and coherent demodulation.
//! * [`dlm`] — digital longitudinal monitoring: recovers the fiber power
//!   profile from received samples by gradient learning of a split-step
//!   model, then fits per-span loss, launch power, and amplifier gain.
//! * [`qot`] — Gaussian-noise quality-of-transmission calculator: ASE and
//!   nonlinear-interference OSNR, GSNR totals, transceiver mode feasibility,
//!   and OSNR margin analysis.
//! * [`protocol`] — the customer/carrier cooperative provisioning protocol
//!   (catalog exchange, consistency check, measurement orchestration, path
//!   design, mode assignment, verification), plus the black-box alternative.
//! * [`scenario`] / [`runner`] — declarative scenario files and the
//!   report-emitting entry points used by the command-line tool.

pub mod constants;
pub mod dlm;
pub mod line;
pub mod profile;
pub mod protocol;
pub mod qot;
pub mod runner;
pub mod scenario;
pub mod signal;
pub mod units;
