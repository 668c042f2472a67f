//! Type-II parametric down-conversion in uniaxial crystals.

pub mod crystal;
pub mod jsa;
pub mod phase_matching;

pub use crystal::{Polarization, Sellmeier, UniaxialCrystal};
pub use jsa::{
    jsa, photon_marginals, pump_sigma_from_fwhm, JointSpectralAmplitude, JsaConstants, JsaGridSpec,
    JsaKind, PhotonMarginals, SidelobeFilter, SpdcConfig,
};
pub use phase_matching::{phase_matching_at, phase_matching_solve, GroupSlopes, PhaseMatching};
