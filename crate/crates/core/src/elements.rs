//! Dispersive media and time lenses acting on sampled envelopes.
//!
//! A GDD `D` multiplies the spectrum by `exp(+iDΩ²/2)`, which in time is the
//! Fresnel kernel `exp(-i(t-t')²/2D)`. Together with the lens phase
//! `exp(it²/2D_f)` this makes `[D_in, lens(D_f), D_out]` image whenever
//! `1/D_in + 1/D_out = 1/D_f`, with magnification `-D_out/D_in` and residual
//! chirp `1/(m D_f)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::envelope::{Moments, SampledEnvelope};
use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Dispersed pulses must keep their rms width under this fraction of the window.
const WINDOW_FRACTION: f64 = 1.0 / 8.0;

/// Quadratic spectral phase with GDD `gdd` [ps²]; zero is the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersiveMedium<T> {
    #[serde(rename = "gdd_ps2")]
    pub gdd: T,
}

/// Ideal quadratic phase modulator `exp(it²/2D_f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealTimeLens<T> {
    #[serde(rename = "focal_gdd_ps2")]
    pub focal_gdd: T,
}

/// Modulator-driven lens whose 2π-wrapped parabolic phase is confined to
/// the temporal aperture `T_A = |D_f| Ω_m`, centered on the intensity centroid.
/// Outside the aperture the field passes unmodulated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FresnelTimeLens<T> {
    #[serde(rename = "focal_gdd_ps2")]
    pub focal_gdd: T,
    #[serde(rename = "bandwidth_rad_per_ps")]
    pub modulator_bandwidth: T,
}

/// One element of a temporal imaging chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Element<T> {
    Dispersion(DispersiveMedium<T>),
    Lens(IdealTimeLens<T>),
    FresnelLens(FresnelTimeLens<T>),
}

impl<T: Real> DispersiveMedium<T> {
    pub fn new(gdd: T) -> Self {
        Self { gdd }
    }

    pub fn apply(&self, env: &SampledEnvelope<T>) -> Result<SampledEnvelope<T>> {
        if !self.gdd.is_finite() {
            return Err(crate::error::invalid("gdd", "must be finite"));
        }
        let m = env.measure_moments()?;
        if self.gdd == T::zero() {
            return Ok(env.clone());
        }
        let predicted = predicted_width(env, &m, self.gdd)?;
        let limit = env.grid().window() * lit(WINDOW_FRACTION);
        if predicted > limit {
            return Err(Error::WindowTooSmall {
                required: (predicted / lit(WINDOW_FRACTION)).to_f64_lossy(),
                available: env.grid().window().to_f64_lossy(),
            });
        }
        let half_gdd = self.gdd * lit(0.5);
        Ok(env.filter_spectrum(|omega| Complex::from_polar(T::one(), half_gdd * omega * omega)))
    }
}

/// Exact rms duration after a GDD, from `σ_t² + 2D cov(t, Ω) + D² σ_Ω²`.
fn predicted_width<T: Real>(env: &SampledEnvelope<T>, m: &Moments<T>, gdd: T) -> Result<T> {
    let cov = env.time_frequency_covariance()?;
    let var = m.delta_t * m.delta_t
        + lit::<T>(2.0) * gdd * cov
        + gdd * gdd * m.delta_omega * m.delta_omega;
    Ok(var.max(T::zero()).sqrt())
}

impl<T: Real> IdealTimeLens<T> {
    pub fn new(focal_gdd: T) -> Result<Self> {
        let lens = Self { focal_gdd };
        lens.validate()?;
        Ok(lens)
    }

    fn validate(&self) -> Result<()> {
        if self.focal_gdd == T::zero() || !self.focal_gdd.is_finite() {
            return Err(Error::InvalidLens);
        }
        Ok(())
    }

    pub fn apply(&self, env: &SampledEnvelope<T>) -> Result<SampledEnvelope<T>> {
        self.validate()?;
        let grid = env.grid();
        let reach = grid.t_min().abs().max(grid.t_max().abs());
        check_lens_band(reach, self.focal_gdd, grid.nyquist())?;
        let inv = T::one() / (lit::<T>(2.0) * self.focal_gdd);
        let samples = env
            .samples()
            .iter()
            .zip(grid.times())
            .map(|(a, t)| *a * Complex::from_polar(T::one(), t * t * inv))
            .collect();
        Ok(env.replace_samples(samples))
    }
}

fn check_lens_band<T: Real>(reach: T, focal_gdd: T, nyquist: T) -> Result<()> {
    let added = reach / focal_gdd.abs();
    if added > nyquist {
        return Err(Error::AliasingRisk {
            required: added.to_f64_lossy(),
            nyquist: nyquist.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Field after a Fresnel lens together with the energy fraction that fell
/// outside its aperture.
#[derive(Debug, Clone, PartialEq)]
pub struct FresnelOutput<T> {
    pub envelope: SampledEnvelope<T>,
    pub aperture_clip_fraction: T,
}

impl<T: Real> FresnelTimeLens<T> {
    pub fn new(focal_gdd: T, modulator_bandwidth: T) -> Result<Self> {
        let lens = Self {
            focal_gdd,
            modulator_bandwidth,
        };
        lens.validate()?;
        Ok(lens)
    }

    fn validate(&self) -> Result<()> {
        if self.focal_gdd == T::zero() || !self.focal_gdd.is_finite() {
            return Err(Error::InvalidLens);
        }
        if !(self.modulator_bandwidth > T::zero()) || !self.modulator_bandwidth.is_finite() {
            return Err(crate::error::invalid(
                "modulator_bandwidth",
                "must be positive and finite",
            ));
        }
        Ok(())
    }

    /// Temporal aperture `|D_f| Ω_m` [ps].
    pub fn aperture(&self) -> T {
        self.focal_gdd.abs() * self.modulator_bandwidth
    }

    pub fn apply(&self, env: &SampledEnvelope<T>) -> Result<FresnelOutput<T>> {
        self.validate()?;
        let m = env.measure_moments()?;
        let grid = env.grid();
        let center = m.t_mean;
        let half_aperture = self.aperture() * lit(0.5);

        // the modulator only has to reach the edge of its aperture or the grid
        let lo = (center - half_aperture).max(grid.t_min());
        let hi = (center + half_aperture).min(grid.t_max());
        if lo <= hi {
            check_lens_band(lo.abs().max(hi.abs()), self.focal_gdd, grid.nyquist())?;
        }

        let inv = T::one() / (lit::<T>(2.0) * self.focal_gdd);
        let tau = T::TAU();
        let mut outside = T::zero();
        let samples = env
            .samples()
            .iter()
            .zip(grid.times())
            .map(|(a, t)| {
                if (t - center).abs() <= half_aperture {
                    let phase = t * t * inv;
                    let wrapped = phase - tau * (phase / tau).floor();
                    *a * Complex::from_polar(T::one(), wrapped)
                } else {
                    outside = outside + a.norm_sqr();
                    *a
                }
            })
            .collect();
        let clip = outside * grid.dt() / m.energy;
        Ok(FresnelOutput {
            envelope: env.replace_samples(samples),
            aperture_clip_fraction: clip,
        })
    }
}

/// Result of applying a single element.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementOutput<T> {
    pub envelope: SampledEnvelope<T>,
    pub aperture_clip_fraction: Option<T>,
}

impl<T: Real> Element<T> {
    pub fn dispersion(gdd: T) -> Self {
        Element::Dispersion(DispersiveMedium::new(gdd))
    }

    pub fn lens(focal_gdd: T) -> Result<Self> {
        Ok(Element::Lens(IdealTimeLens::new(focal_gdd)?))
    }

    pub fn fresnel_lens(focal_gdd: T, modulator_bandwidth: T) -> Result<Self> {
        Ok(Element::FresnelLens(FresnelTimeLens::new(
            focal_gdd,
            modulator_bandwidth,
        )?))
    }

    pub fn apply(&self, env: &SampledEnvelope<T>) -> Result<ElementOutput<T>> {
        match self {
            Element::Dispersion(medium) => Ok(ElementOutput {
                envelope: medium.apply(env)?,
                aperture_clip_fraction: None,
            }),
            Element::Lens(lens) => Ok(ElementOutput {
                envelope: lens.apply(env)?,
                aperture_clip_fraction: None,
            }),
            Element::FresnelLens(lens) => {
                let out = lens.apply(env)?;
                Ok(ElementOutput {
                    envelope: out.envelope,
                    aperture_clip_fraction: Some(out.aperture_clip_fraction),
                })
            }
        }
    }
}

/// Applies a dispersive medium.
pub fn apply_dispersion<T: Real>(
    env: &SampledEnvelope<T>,
    medium: &DispersiveMedium<T>,
) -> Result<SampledEnvelope<T>> {
    medium.apply(env)
}

/// Applies an ideal or Fresnel time lens, given as an [`Element`].
///
/// Passing a dispersion element is rejected with [`Error::InvalidLens`].
pub fn apply_time_lens<T: Real>(
    env: &SampledEnvelope<T>,
    lens: &Element<T>,
) -> Result<ElementOutput<T>> {
    match lens {
        Element::Dispersion(_) => Err(Error::InvalidLens),
        _ => lens.apply(env),
    }
}

/// Diagnostics recorded after each stage of a chain; stage 0 is the input.
#[derive(Debug, Clone, PartialEq)]
pub struct StageReport<T> {
    pub stage: usize,
    pub element: Option<Element<T>>,
    pub moments: Moments<T>,
    /// `None` when the phase could not be fitted.
    pub chirp_c2: Option<T>,
    pub aperture_clip_fraction: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainOutput<T> {
    pub output: SampledEnvelope<T>,
    pub stages: Vec<StageReport<T>>,
}

/// Propagates `env` through `chain` left to right. Errors carry the
/// 1-based index of the failing element.
pub fn propagate_chain<T: Real>(
    env: &SampledEnvelope<T>,
    chain: &[Element<T>],
) -> Result<ChainOutput<T>> {
    let report = |stage, element, envelope: &SampledEnvelope<T>, clip| -> Result<StageReport<T>> {
        Ok(StageReport {
            stage,
            element,
            moments: envelope.measure_moments()?,
            chirp_c2: envelope.residual_chirp().ok(),
            aperture_clip_fraction: clip,
        })
    };
    let mut stages = vec![report(0, None, env, None).map_err(|e| e.at_stage(0))?];
    let mut current = env.clone();
    for (i, element) in chain.iter().enumerate() {
        let stage = i + 1;
        let out = element.apply(&current).map_err(|e| e.at_stage(stage))?;
        stages.push(
            report(stage, Some(*element), &out.envelope, out.aperture_clip_fraction)
                .map_err(|e| e.at_stage(stage))?,
        );
        current = out.envelope;
    }
    Ok(ChainOutput {
        output: current,
        stages,
    })
}

/// Analytic single-lens image.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleLensImage<T> {
    pub envelope: SampledEnvelope<T>,
    pub magnification: T,
    pub output_gdd: T,
}

/// Closed-form image of `[D_in, lens(D_f), D_out]` at the imaging plane
/// `1/D_out = 1/D_f - 1/D_in`:
/// `A_out(t) = -|m|^{-1/2} exp(it²/2mD_f) A_in(t/m)`, `m = -D_out/D_in`.
///
/// The result lives on the input grid scaled by `m`, so for `m < 0` the
/// samples are the input samples in reversed order. For negative `m` the
/// prefactor's phase is a convention; only `|m|^{-1/2}` is physical.
pub fn single_lens_image_analytic<T: Real>(
    env: &SampledEnvelope<T>,
    input_gdd: T,
    focal_gdd: T,
) -> Result<SingleLensImage<T>> {
    if input_gdd == T::zero() {
        return Err(Error::ZeroInputGdd);
    }
    if focal_gdd == T::zero() || !focal_gdd.is_finite() {
        return Err(Error::InvalidLens);
    }
    let power = T::one() / focal_gdd - T::one() / input_gdd;
    if power.abs() <= lit::<T>(1e-12) / focal_gdd.abs() {
        return Err(Error::FocalDegeneracy {
            gdd: input_gdd.to_f64_lossy(),
        });
    }
    let output_gdd = T::one() / power;
    let m = -output_gdd / input_gdd;
    let grid = env.grid().scaled(m)?;
    let amplitude = -T::one() / m.abs().sqrt();
    let chirp = T::one() / (lit::<T>(2.0) * m * focal_gdd);
    let samples = grid
        .times()
        .map(|t| env.value_at(t / m) * Complex::from_polar(amplitude, chirp * t * t))
        .collect();
    Ok(SingleLensImage {
        envelope: SampledEnvelope::new(grid, samples)?.with_carrier_offset(env.carrier_offset()),
        magnification: m,
        output_gdd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::envelope::{distance_modulo_phase, make_gaussian, GaussianPulseSpec, TimeGrid};
    use approx::assert_relative_eq;

    fn gaussian(n: usize, dt: f64) -> SampledEnvelope<f64> {
        make_gaussian(
            &GaussianPulseSpec::transform_limited(1.0),
            TimeGrid::centered(n, dt).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_gdd_is_identity() {
        let env = gaussian(4096, 0.02);
        let out = DispersiveMedium::new(0.0).apply(&env).unwrap();
        assert_eq!(out, env);
    }

    /// Direct quadrature of `∫ A(t') exp(-i(t-t')²/2D) dt'`, normalized by
    /// `1/sqrt(-2π i D)`, independent of the FFT path.
    fn fresnel_kernel(env: &SampledEnvelope<f64>, gdd: f64, t: f64) -> Complex<f64> {
        let dt = env.grid().dt();
        let norm = (Complex::new(0.0, -std::f64::consts::TAU * gdd)).sqrt();
        let sum = env
            .samples()
            .iter()
            .zip(env.grid().times())
            .map(|(a, s)| a * Complex::from_polar(1.0, -(t - s) * (t - s) / (2.0 * gdd)))
            .sum::<Complex<f64>>();
        sum * dt / norm
    }

    #[test]
    fn dispersion_matches_fresnel_kernel() {
        let env = gaussian(2048, 0.04);
        let out = DispersiveMedium::new(10.0).apply(&env).unwrap();
        for k in [900, 1024, 1100, 1300] {
            let t = out.grid().time(k);
            let direct = fresnel_kernel(&env, 10.0, t);
            assert!(
                (out.samples()[k] - direct).norm() < 1e-9,
                "t={t}: fft {} vs kernel {}",
                out.samples()[k],
                direct
            );
        }
    }

    #[test]
    fn dispersed_gaussian_width_and_chirp() {
        // complex-Gaussian algebra: σ² → σ² + D²/4σ², c2 = -D/(4σ⁴ + D²)
        let env = gaussian(4096, 0.02);
        let out = DispersiveMedium::new(10.0).apply(&env).unwrap();
        let m = out.measure_moments().unwrap();
        assert_relative_eq!(m.delta_t, 26f64.sqrt(), max_relative = 1e-6);
        assert_relative_eq!(out.residual_chirp().unwrap(), -10.0 / 104.0, max_relative = 1e-6);
    }

    #[test]
    fn dispersion_round_trip() {
        let env = gaussian(4096, 0.02);
        let there = DispersiveMedium::new(7.5).apply(&env).unwrap();
        let back = DispersiveMedium::new(-7.5).apply(&there).unwrap();
        assert!(distance_modulo_phase(&back, &env).unwrap() < 1e-10);
    }

    #[test]
    fn window_guard_trips_for_huge_gdd() {
        let env = gaussian(1024, 0.02);
        let err = DispersiveMedium::new(50.0).apply(&env).unwrap_err();
        assert_eq!(err.kind(), "WindowTooSmall");
    }

    #[test]
    fn lens_adds_expected_chirp_and_bandwidth() {
        let env = gaussian(4096, 0.02);
        let out = IdealTimeLens::new(2.0).unwrap().apply(&env).unwrap();
        assert_relative_eq!(out.residual_chirp().unwrap(), 0.5, max_relative = 1e-9);
        // ΔΩ₁ = ΔΩ₀ sqrt(1 + D_f⁻²/4ΔΩ₀⁴)
        let expected = 0.5 * (1.0 + 0.25 / (4.0 * 0.0625f64)).sqrt();
        let m = out.measure_moments().unwrap();
        assert_relative_eq!(m.delta_omega, expected, max_relative = 1e-6);
        assert_relative_eq!(expected, 0.5 * 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn zero_focal_gdd_rejected() {
        assert_eq!(IdealTimeLens::new(0.0).unwrap_err(), Error::InvalidLens);
        assert_eq!(FresnelTimeLens::new(0.0, 1.0).unwrap_err(), Error::InvalidLens);
        let env = gaussian(1024, 0.05);
        assert_eq!(
            apply_time_lens(&env, &Element::dispersion(1.0)).unwrap_err(),
            Error::InvalidLens
        );
    }

    #[test]
    fn strong_lens_on_wide_window_is_aliasing() {
        let env = gaussian(4096, 0.02);
        let err = IdealTimeLens::new(0.1).unwrap().apply(&env).unwrap_err();
        assert_eq!(err.kind(), "AliasingRisk");
    }

    #[test]
    fn fresnel_lens_with_wide_aperture_matches_ideal() {
        let env = gaussian(4096, 0.02);
        let ideal = IdealTimeLens::new(2.0).unwrap().apply(&env).unwrap();
        // aperture 12 Δt₀
        let fresnel = FresnelTimeLens::new(2.0, 6.0).unwrap().apply(&env).unwrap();
        let d = distance_modulo_phase(&fresnel.envelope, &ideal).unwrap();
        assert!(d <= 1e-4, "distance {d}");
        assert!(fresnel.aperture_clip_fraction <= 2e-6);

        // aperture exactly 10 Δt₀: two-sided Gaussian tail beyond 5σ is 5.7e-7
        let edge = FresnelTimeLens::new(2.0, 5.0).unwrap().apply(&env).unwrap();
        assert!(edge.aperture_clip_fraction <= 2e-6);
        assert_relative_eq!(edge.aperture_clip_fraction, 5.733e-7, max_relative = 0.1);
    }

    #[test]
    fn fresnel_converges_to_ideal() {
        let env = gaussian(4096, 0.02);
        let ideal = IdealTimeLens::new(2.0).unwrap().apply(&env).unwrap();
        let mut last = f64::INFINITY;
        for bandwidth in [1.0, 1.5, 2.0, 3.0, 4.0, 5.0] {
            let out = FresnelTimeLens::new(2.0, bandwidth).unwrap().apply(&env).unwrap();
            let d = distance_modulo_phase(&out.envelope, &ideal).unwrap();
            assert!(d < last, "not monotone at Ω_m = {bandwidth}: {d} >= {last}");
            last = d;
        }
    }

    #[test]
    fn chain_errors_carry_stage() {
        let env = gaussian(1024, 0.02);
        let chain = [Element::dispersion(0.5), Element::dispersion(80.0)];
        match propagate_chain(&env, &chain).unwrap_err() {
            Error::Stage { stage, source } => {
                assert_eq!(stage, 2);
                assert_eq!(source.kind(), "WindowTooSmall");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_chain_is_identity() {
        let env = gaussian(1024, 0.05);
        let out = propagate_chain(&env, &[]).unwrap();
        assert_eq!(out.output, env);
        assert_eq!(out.stages.len(), 1);
    }

    #[test]
    fn single_lens_errors() {
        let env = gaussian(1024, 0.05);
        assert_eq!(
            single_lens_image_analytic(&env, 0.0, 1.0).unwrap_err(),
            Error::ZeroInputGdd
        );
        assert_eq!(
            single_lens_image_analytic(&env, 2.0, 2.0).unwrap_err().kind(),
            "FocalDegeneracy"
        );
    }

    #[test]
    fn symmetric_imaging_inverts() {
        let env = gaussian(1024, 0.05);
        let image = single_lens_image_analytic(&env, 4.0, 2.0).unwrap();
        assert_relative_eq!(image.output_gdd, 4.0, max_relative = 1e-12);
        assert_relative_eq!(image.magnification, -1.0, max_relative = 1e-12);
    }

    #[test]
    fn chain_json_schema() {
        let chain: Vec<Element<f64>> = serde_json::from_str(
            r#"[{"kind":"dispersion","gdd_ps2":2.5},
                {"kind":"lens","focal_gdd_ps2":-1.0},
                {"kind":"fresnel_lens","focal_gdd_ps2":4.0,"bandwidth_rad_per_ps":3.0}]"#,
        )
        .unwrap();
        assert_eq!(
            chain,
            vec![
                Element::dispersion(2.5),
                Element::lens(-1.0).unwrap(),
                Element::fresnel_lens(4.0, 3.0).unwrap()
            ]
        );
        let text = serde_json::to_string(&chain[2]).unwrap();
        assert_eq!(
            text,
            r#"{"kind":"fresnel_lens","focal_gdd_ps2":4.0,"bandwidth_rad_per_ps":3.0}"#
        );
    }
}
