//! Two-lens time telescopes: design equations, classification, loss-minimal
//! layouts, Fresnel-lens sizing and the Gaussian moment chain.
//!
//! A telescope is fixed by the magnification `M`, the inter-lens GDD
//! `D_inter` and the input GDD `D_in`. The afocal condition
//! `D_inter = D_f + D_f'` together with `D_f' = -M D_f` removes the residual
//! chirp, so the output is `A_in(t/M)/√M` at `D_out' = -M² D_in - M D_inter`.

use serde::Serialize;

use crate::elements::Element;
use crate::envelope::fwhm_factor;
use crate::error::{invalid, Error, Result};
use crate::real::{lit, Real};

/// Relative shortfall of the second modulator bandwidth below `Ω₀/M` that
/// is still accepted, absorbing magnifications quoted to a few digits.
pub const BANDWIDTH_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelescopeDesign<T> {
    pub magnification: T,
    pub inter_gdd: T,
    pub input_gdd: T,
    /// First lens focal GDD, `D_inter / (1 - M)`.
    pub focal_1: T,
    /// Second lens focal GDD, `-M D_inter / (1 - M)`.
    pub focal_2: T,
    /// Image distance `-M² D_in - M D_inter`.
    pub output_gdd: T,
}

fn check_magnification<T: Real>(m: T) -> Result<()> {
    if !m.is_finite() {
        return Err(Error::DegenerateMagnification("M must be finite".into()));
    }
    if m == T::zero() {
        return Err(Error::DegenerateMagnification(
            "M = 0 is not an imaging system".into(),
        ));
    }
    if m == T::one() {
        return Err(Error::DegenerateMagnification(
            "M = 1 puts both focal GDDs at infinity".into(),
        ));
    }
    Ok(())
}

/// Solves the telescope for `(M, D_inter, D_in)`.
pub fn design_from<T: Real>(magnification: T, inter_gdd: T, input_gdd: T) -> Result<TelescopeDesign<T>> {
    check_magnification(magnification)?;
    if inter_gdd == T::zero() || !inter_gdd.is_finite() {
        return Err(Error::DegenerateMagnification(
            "D_inter must be finite and nonzero".into(),
        ));
    }
    if !input_gdd.is_finite() {
        return Err(invalid("input_gdd", "must be finite"));
    }
    let m = magnification;
    let focal_1 = inter_gdd / (T::one() - m);
    Ok(TelescopeDesign {
        magnification: m,
        inter_gdd,
        input_gdd,
        focal_1,
        focal_2: -m * focal_1,
        output_gdd: -m * m * input_gdd - m * inter_gdd,
    })
}

impl<T: Real> TelescopeDesign<T> {
    /// Element chain `[D_in, lens(D_f), D_inter, lens(D_f'), D_out']`;
    /// zero input or output GDDs are left out.
    pub fn chain(&self) -> Vec<Element<T>> {
        let mut chain = Vec::with_capacity(5);
        if self.input_gdd != T::zero() {
            chain.push(Element::dispersion(self.input_gdd));
        }
        chain.push(Element::Lens(crate::elements::IdealTimeLens {
            focal_gdd: self.focal_1,
        }));
        chain.push(Element::dispersion(self.inter_gdd));
        chain.push(Element::Lens(crate::elements::IdealTimeLens {
            focal_gdd: self.focal_2,
        }));
        if self.output_gdd != T::zero() {
            chain.push(Element::dispersion(self.output_gdd));
        }
        chain
    }

    /// Magnifications `(m, m')` of the two single-lens stages, or `None`
    /// when the intermediate image is at infinity (`D_in = D_f`).
    pub fn stage_magnifications(&self) -> Option<(T, T)> {
        let denom = self.focal_1 - self.input_gdd;
        if denom == T::zero() {
            return None;
        }
        let m1 = self.focal_1 / denom;
        let m2 = self.magnification / m1;
        if m2 == T::zero() || !m2.is_finite() {
            return None;
        }
        Some((m1, m2))
    }

    /// Residual chirp of the two-lens image,
    /// `(m m' D_f + D_f') / (m m'² D_f D_f')`; zero for every valid design.
    pub fn chirp_coefficient(&self) -> Option<T> {
        let (m1, m2) = self.stage_magnifications()?;
        Some(
            (m1 * m2 * self.focal_1 + self.focal_2)
                / (m1 * m2 * m2 * self.focal_1 * self.focal_2),
        )
    }

    /// Sum of the moduli of all dispersive GDDs in the chain.
    pub fn total_gdd_modulus(&self) -> T {
        self.input_gdd.abs() + self.inter_gdd.abs() + self.output_gdd.abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TelescopeKind {
    /// `M < -1`
    InvertingMagnifying,
    /// `M = -1`, the symmetric relay.
    InvertingRelay,
    /// `-1 < M < 0`
    InvertingCompressing,
    /// `0 < M < 1`
    ErectingCompressing,
    /// `M > 1`
    ErectingMagnifying,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpatialCounterpart {
    BeamExpander,
    Keplerian,
    Galilean,
    InvertedGalilean,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TelescopeClass {
    pub kind: TelescopeKind,
    pub spatial_counterpart: SpatialCounterpart,
    pub has_spatial_counterpart: bool,
}

impl TelescopeKind {
    pub fn is_erecting(self) -> bool {
        matches!(
            self,
            TelescopeKind::ErectingCompressing | TelescopeKind::ErectingMagnifying
        )
    }
}

/// Classifies by the magnification interval and the sign of `D_inter`.
/// A negative inter-lens GDD has no spatial analog.
pub fn classify<T: Real>(design: &TelescopeDesign<T>) -> TelescopeClass {
    let m = design.magnification;
    let one = T::one();
    let kind = if m < -one {
        TelescopeKind::InvertingMagnifying
    } else if m == -one {
        TelescopeKind::InvertingRelay
    } else if m < T::zero() {
        TelescopeKind::InvertingCompressing
    } else if m < one {
        TelescopeKind::ErectingCompressing
    } else {
        TelescopeKind::ErectingMagnifying
    };
    let has_spatial_counterpart = design.inter_gdd > T::zero();
    let spatial_counterpart = if !has_spatial_counterpart {
        SpatialCounterpart::None
    } else {
        match kind {
            TelescopeKind::InvertingMagnifying => SpatialCounterpart::BeamExpander,
            TelescopeKind::InvertingRelay | TelescopeKind::InvertingCompressing => {
                SpatialCounterpart::Keplerian
            }
            TelescopeKind::ErectingCompressing => SpatialCounterpart::Galilean,
            TelescopeKind::ErectingMagnifying => SpatialCounterpart::InvertedGalilean,
        }
    };
    TelescopeClass {
        kind,
        spatial_counterpart,
        has_spatial_counterpart,
    }
}

/// Where the object sits in a two-medium telescope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum InputPlacement {
    /// `D_in = 0`, output medium `-M D_inter`.
    NoInputMedium,
    /// `D_in = -D_inter/M`, image at `D_out' = 0`.
    FieldLens,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LossCandidate<T> {
    pub placement: InputPlacement,
    pub input_gdd: T,
    pub output_gdd: T,
    pub total_gdd_modulus: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimalLossConfig<T> {
    pub candidates: [LossCandidate<T>; 2],
    pub choice: InputPlacement,
}

impl<T: Real> MinimalLossConfig<T> {
    pub fn chosen(&self) -> &LossCandidate<T> {
        self.candidates
            .iter()
            .find(|c| c.placement == self.choice)
            .expect("choice is one of the candidates")
    }
}

/// Compares the two layouts that need only two dispersive media and picks the
/// smaller total `|GDD|`: `(1+|M|)|D_inter|` against `(1+1/|M|)|D_inter|`.
/// Ties go to `D_in = 0`.
pub fn minimal_loss_config<T: Real>(magnification: T, inter_gdd: T) -> Result<MinimalLossConfig<T>> {
    check_magnification(magnification)?;
    if inter_gdd == T::zero() || !inter_gdd.is_finite() {
        return Err(Error::DegenerateMagnification(
            "D_inter must be finite and nonzero".into(),
        ));
    }
    let m = magnification;
    let modulus = inter_gdd.abs();
    let first = LossCandidate {
        placement: InputPlacement::NoInputMedium,
        input_gdd: T::zero(),
        output_gdd: -m * inter_gdd,
        total_gdd_modulus: (T::one() + m.abs()) * modulus,
    };
    let second = LossCandidate {
        placement: InputPlacement::FieldLens,
        input_gdd: -inter_gdd / m,
        output_gdd: T::zero(),
        total_gdd_modulus: (T::one() + T::one() / m.abs()) * modulus,
    };
    let choice = if first.total_gdd_modulus <= second.total_gdd_modulus {
        InputPlacement::NoInputMedium
    } else {
        InputPlacement::FieldLens
    };
    Ok(MinimalLossConfig {
        candidates: [first, second],
        choice,
    })
}

/// Sizing of an erecting compressing telescope built from Fresnel lenses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FresnelDesignReport<T> {
    pub t0_fwhm: T,
    pub magnification: T,
    /// Second modulator bandwidth supplied by the user [rad/ps].
    pub omega_m2: T,
    /// Input FWHM bandwidth `4 ln2 / T₀` [rad/ps].
    pub omega0: T,
    /// Smallest first-lens focal GDD that keeps both apertures open [ps²].
    pub focal_1_min: T,
    pub focal_2: T,
    pub inter_gdd: T,
    pub output_gdd: T,
    /// Minimum first modulator bandwidth `Ω₀ √(2/M)` [rad/ps].
    pub required_bw_1: T,
    /// Minimum second modulator bandwidth `Ω₀ / M` [rad/ps].
    pub required_bw_2: T,
    /// Shortest output FWHM the second modulator supports, `4 ln2 / Ω_m'` [ps].
    pub min_output_fwhm: T,
    /// Bandwidth magnification of a Fourier processor with the same lens.
    pub fourier_processor_m_omega: T,
}

/// Minimal-focal-GDD Fresnel telescope with `D_in = 0` for an input of FWHM
/// `t0_fwhm`, magnification `0 < M < 1` and second modulator bandwidth `omega_m2`.
///
/// The focal GDD `√(2M) T₀² / (8 ln2)` assumes the second modulator runs at
/// exactly `Ω₀/M`; a faster modulator still gets this value, which is then a
/// lower bound.
pub fn fresnel_design<T: Real>(t0_fwhm: T, magnification: T, omega_m2: T) -> Result<FresnelDesignReport<T>> {
    if !(t0_fwhm > T::zero()) || !t0_fwhm.is_finite() {
        return Err(invalid("t0_fwhm", "must be positive"));
    }
    if !(magnification > T::zero() && magnification < T::one()) {
        return Err(Error::DegenerateMagnification(format!(
            "Fresnel design needs 0 < M < 1, got {magnification}"
        )));
    }
    if !(omega_m2 > T::zero()) || !omega_m2.is_finite() {
        return Err(invalid("omega_m2", "must be positive"));
    }
    let m = magnification;
    let four_ln2 = lit::<T>(4.0) * T::LN_2();
    let omega0 = four_ln2 / t0_fwhm;
    let required_bw_2 = omega0 / m;
    if omega_m2 < required_bw_2 * (T::one() - lit(BANDWIDTH_SLACK)) {
        return Err(Error::InfeasibleBandwidth {
            omega_m2: omega_m2.to_f64_lossy(),
            required: required_bw_2.to_f64_lossy(),
            min_magnification: (four_ln2 / (t0_fwhm * omega_m2)).to_f64_lossy(),
        });
    }
    let focal_1 = (lit::<T>(2.0) * m).sqrt() * t0_fwhm * t0_fwhm / (lit::<T>(2.0) * four_ln2);
    let inter_gdd = focal_1 * (T::one() - m);
    Ok(FresnelDesignReport {
        t0_fwhm,
        magnification: m,
        omega_m2,
        omega0,
        focal_1_min: focal_1,
        focal_2: -m * focal_1,
        inter_gdd,
        output_gdd: -m * inter_gdd,
        required_bw_1: omega0 * (lit::<T>(2.0) / m).sqrt(),
        required_bw_2,
        min_output_fwhm: four_ln2 / omega_m2,
        fourier_processor_m_omega: focal_1 * omega_m2 * omega_m2 / four_ln2,
    })
}

impl<T: Real> FresnelDesignReport<T> {
    /// The corresponding telescope with no input medium.
    pub fn design(&self) -> Result<TelescopeDesign<T>> {
        design_from(self.magnification, self.inter_gdd, T::zero())
    }

    /// Chain with Fresnel lenses running at the required bandwidths.
    pub fn fresnel_chain(&self) -> Result<Vec<Element<T>>> {
        Ok(vec![
            Element::fresnel_lens(self.focal_1_min, self.required_bw_1)?,
            Element::dispersion(self.inter_gdd),
            Element::fresnel_lens(self.focal_2, self.omega_m2)?,
            Element::dispersion(self.output_gdd),
        ])
    }
}

/// Rms widths of a transform-limited Gaussian after each element of a
/// `D_in = 0` telescope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianMomentChain<T> {
    pub delta_t0: T,
    pub delta_omega0: T,
    /// Spectral width after the first lens.
    pub delta_omega_1: T,
    /// Duration at the second lens.
    pub delta_t_2: T,
    /// Spectral width after the second lens.
    pub delta_omega_3: T,
    /// Output duration.
    pub delta_t_4: T,
}

pub fn analytic_gaussian_moments<T: Real>(
    delta_t0: T,
    design: &TelescopeDesign<T>,
) -> Result<GaussianMomentChain<T>> {
    if !(delta_t0 > T::zero()) || !delta_t0.is_finite() {
        return Err(invalid("delta_t0", "must be positive"));
    }
    check_magnification(design.magnification)?;
    if design.input_gdd != T::zero() {
        return Err(invalid(
            "design",
            "the closed-form moment chain needs D_in = 0",
        ));
    }
    let m = design.magnification;
    let d_f = design.focal_1;
    let two: T = lit(2.0);
    let four: T = lit(4.0);
    let delta_omega0 = T::one() / (two * delta_t0);
    let delta_omega_1 = delta_omega0
        * (T::one() + T::one() / (d_f * d_f * four * delta_omega0.powi(4))).sqrt();
    let delta_t_2 = m.abs()
        * delta_t0
        * (T::one()
            + d_f * d_f * (T::one() - m) * (T::one() - m) / (four * delta_t0.powi(4) * m * m))
            .sqrt();
    Ok(GaussianMomentChain {
        delta_t0,
        delta_omega0,
        delta_omega_1,
        delta_t_2,
        delta_omega_3: delta_omega0 / m.abs(),
        delta_t_4: m.abs() * delta_t0,
    })
}

/// Converts an rms duration to FWHM for a Gaussian.
pub fn gaussian_fwhm<T: Real>(sigma: T) -> T {
    fwhm_factor::<T>() * sigma
}
