//! Collinear degenerate type-II phase matching (e → o + e).

use serde::Serialize;

use super::crystal::{angular_frequency, Polarization, UniaxialCrystal};
use crate::error::{invalid, Error, Result};
use crate::real::{lit, Real};

/// Finite-difference step for the group slopes [rad/ps].
pub const FD_STEP: f64 = 0.01;
const BISECTION_REL_TOL: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

/// Inverse group velocities [ps/mm] at the carriers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroupSlopes<T> {
    pub k_p: T,
    pub k_o: T,
    pub k_e: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseMatching<T> {
    pub lambda_p_nm: T,
    pub length_mm: T,
    pub theta_p_deg: T,
    /// Delay of the extraordinary photon relative to pump and ordinary
    /// photon, `(k_p' - k_e') L / 2` [ps].
    pub tau_e: T,
    pub gvm_check: GroupSlopes<T>,
    /// `k_p⁰ - k_o⁰ - k_e⁰` at the solution [1/mm].
    pub residual_mismatch: T,
}

impl<T: Real> PhaseMatching<T> {
    /// `|k_p' - k_o'| / k_p'`.
    pub fn gvm_relative_difference(&self) -> T {
        (self.gvm_check.k_p - self.gvm_check.k_o).abs() / self.gvm_check.k_p
    }
}

/// Pump, ordinary and extraordinary wave numbers as functions of detuning.
#[derive(Debug, Clone)]
pub struct Waves<'a, T> {
    pub crystal: &'a UniaxialCrystal,
    pub omega_p: T,
    pub theta_deg: T,
}

impl<'a, T: Real> Waves<'a, T> {
    pub fn new(crystal: &'a UniaxialCrystal, lambda_p_nm: T, theta_deg: T) -> Self {
        Waves {
            crystal,
            omega_p: angular_frequency(lambda_p_nm),
            theta_deg,
        }
    }

    pub fn signal_carrier(&self) -> T {
        self.omega_p / lit(2.0)
    }

    pub fn k_p(&self, detuning: T) -> Result<T> {
        self.crystal
            .wavenumber(Polarization::E, self.omega_p + detuning, self.theta_deg)
    }

    pub fn k_o(&self, detuning: T) -> Result<T> {
        self.crystal
            .wavenumber(Polarization::O, self.signal_carrier() + detuning, self.theta_deg)
    }

    pub fn k_e(&self, detuning: T) -> Result<T> {
        self.crystal
            .wavenumber(Polarization::E, self.signal_carrier() + detuning, self.theta_deg)
    }

    /// `Δ(Ω, Ω') = k_p(Ω+Ω') - k_o(Ω) - k_e(Ω')` [1/mm].
    pub fn mismatch(&self, omega: T, omega_prime: T) -> Result<T> {
        Ok(self.k_p(omega + omega_prime)? - self.k_o(omega)? - self.k_e(omega_prime)?)
    }

    pub fn group_slopes(&self) -> Result<GroupSlopes<T>> {
        Ok(GroupSlopes {
            k_p: slope(|x| self.k_p(x))?,
            k_o: slope(|x| self.k_o(x))?,
            k_e: slope(|x| self.k_e(x))?,
        })
    }
}

/// Central difference at zero detuning, checked against the half step.
fn slope<T: Real>(f: impl Fn(T) -> Result<T>) -> Result<T> {
    let central = |h: T| -> Result<T> { Ok((f(h)? - f(-h)?) / (h + h)) };
    let h: T = lit(FD_STEP);
    let coarse = central(h)?;
    let fine = central(h / lit(2.0))?;
    // cancellation in f(h) - f(-h) bounds what the step comparison can see
    let roundoff = T::epsilon() * f(T::zero())?.abs() / (h / lit(2.0) * fine.abs());
    let rel_change = ((fine - coarse) / fine).abs().max(roundoff);
    if !(rel_change <= T::fd_tolerance()) {
        return Err(Error::DerivativeUnstable {
            rel_change: rel_change.to_f64_lossy(),
        });
    }
    Ok(fine)
}

/// Solves `k_p⁰(θ) = k_o⁰ + k_e⁰(θ)` for `θ ∈ (0°, 90°)` by bisection and
/// evaluates the group slopes and the extraordinary delay for length `length_mm`.
pub fn phase_matching_solve<T: Real>(
    crystal: &UniaxialCrystal,
    lambda_p_nm: T,
    length_mm: T,
) -> Result<PhaseMatching<T>> {
    if !(length_mm > T::zero()) || !length_mm.is_finite() {
        return Err(invalid("length_mm", "must be positive"));
    }
    let mismatch = |theta: T| Waves::new(crystal, lambda_p_nm, theta).mismatch(T::zero(), T::zero());
    let mut lo = T::zero();
    let mut hi: T = lit(90.0);
    let f_lo = mismatch(lo)?;
    let f_hi = mismatch(hi)?;
    if f_lo == T::zero() || f_hi == T::zero() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NoPhaseMatching);
    }
    for _ in 0..MAX_BISECTIONS {
        let mid = (lo + hi) / lit(2.0);
        if mid <= lo || mid >= hi || hi - lo <= lit::<T>(BISECTION_REL_TOL) * mid {
            break;
        }
        let f_mid = mismatch(mid)?;
        if f_mid == T::zero() {
            lo = mid;
            hi = mid;
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta = (lo + hi) / lit(2.0);
    if theta <= T::zero() || theta >= lit(90.0) {
        return Err(Error::NoPhaseMatching);
    }
    let waves = Waves::new(crystal, lambda_p_nm, theta);
    let slopes = waves.group_slopes()?;
    Ok(PhaseMatching {
        lambda_p_nm,
        length_mm,
        theta_p_deg: theta,
        tau_e: (slopes.k_p - slopes.k_e) * length_mm / lit(2.0),
        gvm_check: slopes,
        residual_mismatch: waves.mismatch(T::zero(), T::zero())?,
    })
}

/// Group slopes and delay at a given angle, skipping the angle search.
pub fn phase_matching_at<T: Real>(
    crystal: &UniaxialCrystal,
    lambda_p_nm: T,
    length_mm: T,
    theta_deg: T,
) -> Result<PhaseMatching<T>> {
    if !(length_mm > T::zero()) || !length_mm.is_finite() {
        return Err(invalid("length_mm", "must be positive"));
    }
    let waves = Waves::new(crystal, lambda_p_nm, theta_deg);
    let slopes = waves.group_slopes()?;
    Ok(PhaseMatching {
        lambda_p_nm,
        length_mm,
        theta_p_deg: theta_deg,
        tau_e: (slopes.k_p - slopes.k_e) * length_mm / lit(2.0),
        gvm_check: slopes,
        residual_mismatch: waves.mismatch(T::zero(), T::zero())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kdp_reference_point() {
        let kdp = UniaxialCrystal::kdp();
        let pm = phase_matching_solve(&kdp, 415.0f64, 5.0).unwrap();
        assert!((pm.theta_p_deg - 67.8).abs() <= 0.2, "{}", pm.theta_p_deg);
        assert!((pm.tau_e - 0.360).abs() <= 0.005, "{}", pm.tau_e);
        assert!(pm.gvm_relative_difference() <= 1e-3);
        assert!(pm.residual_mismatch.abs() < 1e-6);
        let again = phase_matching_at(&kdp, 415.0, 10.0, pm.theta_p_deg).unwrap();
        assert!((again.tau_e - 2.0 * pm.tau_e).abs() < 1e-12);
    }

    #[test]
    fn mismatch_sign_change_required() {
        let kdp = UniaxialCrystal::kdp();
        let mut isotropic = kdp.clone();
        isotropic.sellmeier_e = isotropic.sellmeier_o;
        let err = phase_matching_solve(&isotropic, 415.0f64, 5.0).unwrap_err();
        assert_eq!(err.kind(), "NoPhaseMatching");
        assert!(phase_matching_solve(&kdp, 415.0f64, 0.0).is_err());
    }

    #[test]
    fn single_precision_slopes_are_flagged() {
        let kdp = UniaxialCrystal::kdp();
        let err = phase_matching_solve(&kdp, 415.0f32, 5.0).unwrap_err();
        assert_eq!(err.kind(), "DerivativeUnstable");
    }
}
