//! Temporal imaging with time lenses and two-lens time telescopes, plus the
//! two-photon interference they enable.
//!
//! The core is generic over the scalar type (`f32` or `f64`); the aliases
//! below fix it to `f64`, which every published check assumes.
//!
//! Units: time in ps, angular frequency in rad/ps, GDD in ps², wavelength in
//! nm, crystal length in mm, angles in degrees.

pub mod elements;
pub mod envelope;
pub mod error;
mod fft;
pub mod hom;
pub mod io;
pub mod real;
pub mod spdc;
pub mod telescope;

pub use error::{Error, Result};
pub use real::Real;

pub type TimeGrid = envelope::TimeGrid<f64>;
pub type SampledEnvelope = envelope::SampledEnvelope<f64>;
pub type Moments = envelope::Moments<f64>;
pub type GaussianPulseSpec = envelope::GaussianPulseSpec<f64>;
pub type PulseShape = envelope::PulseShape<f64>;
pub type Element = elements::Element<f64>;
pub type StageReport = elements::StageReport<f64>;
pub type ChainOutput = elements::ChainOutput<f64>;
pub type TelescopeDesign = telescope::TelescopeDesign<f64>;
pub type FresnelDesignReport = telescope::FresnelDesignReport<f64>;
pub type SpdcConfig = spdc::SpdcConfig<f64>;
pub type JointSpectralAmplitude = spdc::JointSpectralAmplitude<f64>;
pub type PhotonMarginals = spdc::PhotonMarginals<f64>;
pub type PhaseMatching = spdc::PhaseMatching<f64>;
pub type EmitterMode = hom::EmitterMode<f64>;
pub type HomCurve = hom::HomCurve<f64>;

/// Single-precision variants.
pub mod f32 {
    use super::*;
    pub type TimeGrid = envelope::TimeGrid<f32>;
    pub type SampledEnvelope = envelope::SampledEnvelope<f32>;
    pub type Element = elements::Element<f32>;
    pub type TelescopeDesign = telescope::TelescopeDesign<f32>;
    pub type JointSpectralAmplitude = spdc::JointSpectralAmplitude<f32>;
    pub type EmitterMode = hom::EmitterMode<f32>;
}
