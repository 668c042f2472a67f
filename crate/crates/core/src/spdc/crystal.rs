//! Uniaxial crystals described by two-pole Sellmeier fits.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::real::{lit, Real};

/// Speed of light in mm/ps.
pub const C_MM_PER_PS: f64 = 0.299_792_458;
/// Speed of light in nm/ps.
pub const C_NM_PER_PS: f64 = 299_792.458;

const BUNDLED: &str = include_str!("../../data/crystals.json");

/// `n² = a + b/(λ² - c) + d λ²/(λ² - e)` with `λ` in micrometres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sellmeier {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

impl Sellmeier {
    pub fn index<T: Real>(&self, lambda_um: T) -> T {
        let l2 = lambda_um * lambda_um;
        let n2 = lit::<T>(self.a)
            + lit::<T>(self.b) / (l2 - lit(self.c))
            + lit::<T>(self.d) * l2 / (l2 - lit(self.e));
        n2.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniaxialCrystal {
    pub name: String,
    pub provenance: String,
    pub valid_range_nm: [f64; 2],
    #[serde(rename = "ordinary")]
    pub sellmeier_o: Sellmeier,
    #[serde(rename = "extraordinary")]
    pub sellmeier_e: Sellmeier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    /// Ordinary wave; the angle is ignored.
    O,
    /// Extraordinary wave at an angle to the optic axis.
    E,
}

#[derive(Deserialize)]
struct CrystalFile {
    crystals: std::collections::BTreeMap<String, CrystalEntry>,
}

#[derive(Deserialize)]
struct CrystalEntry {
    provenance: String,
    valid_range_nm: [f64; 2],
    ordinary: Sellmeier,
    extraordinary: Sellmeier,
}

/// Parses a crystal table in the bundled JSON layout.
pub fn parse_crystal_table(json: &str) -> Result<Vec<UniaxialCrystal>> {
    let file: CrystalFile =
        serde_json::from_str(json).map_err(|e| Error::CrystalData(e.to_string()))?;
    let mut out = Vec::with_capacity(file.crystals.len());
    for (name, entry) in file.crystals {
        let [lo, hi] = entry.valid_range_nm;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::CrystalData(format!("{name}: bad valid range")));
        }
        out.push(UniaxialCrystal {
            name,
            provenance: entry.provenance,
            valid_range_nm: entry.valid_range_nm,
            sellmeier_o: entry.ordinary,
            sellmeier_e: entry.extraordinary,
        });
    }
    Ok(out)
}

impl UniaxialCrystal {
    /// Looks up a crystal in the bundled data file.
    pub fn bundled(name: &str) -> Result<Self> {
        parse_crystal_table(BUNDLED)?
            .into_iter()
            .find(|c| c.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::CrystalData(format!("unknown crystal `{name}`")))
    }

    pub fn kdp() -> Self {
        Self::bundled("KDP").expect("bundled KDP entry")
    }

    fn check_range<T: Real>(&self, lambda_nm: T) -> Result<()> {
        let l = lambda_nm.to_f64_lossy();
        let [lo, hi] = self.valid_range_nm;
        if !(l >= lo && l <= hi) {
            return Err(Error::OutOfRangeWavelength {
                lambda_nm: l,
                min_nm: lo,
                max_nm: hi,
            });
        }
        Ok(())
    }

    /// Principal indices `(n_o, n_e)` at `lambda_nm`.
    pub fn principal_indices<T: Real>(&self, lambda_nm: T) -> Result<(T, T)> {
        self.check_range(lambda_nm)?;
        let um = lambda_nm / lit(1000.0);
        Ok((self.sellmeier_o.index(um), self.sellmeier_e.index(um)))
    }

    /// Refractive index for the given polarization. For `E` the index at
    /// angle `theta_deg` to the optic axis follows
    /// `1/n² = cos²θ/n_o² + sin²θ/n_e²`.
    pub fn refractive_index<T: Real>(&self, pol: Polarization, lambda_nm: T, theta_deg: T) -> Result<T> {
        if !(theta_deg >= T::zero() && theta_deg <= lit(90.0)) {
            return Err(invalid("theta", "must lie in [0, 90] degrees"));
        }
        let (n_o, n_e) = self.principal_indices(lambda_nm)?;
        Ok(match pol {
            Polarization::O => n_o,
            Polarization::E => extraordinary_index(n_o, n_e, theta_deg.to_radians()),
        })
    }

    /// Wave number `n(ω) ω / c` [1/mm] at angular frequency `omega` [rad/ps].
    pub fn wavenumber<T: Real>(&self, pol: Polarization, omega: T, theta_deg: T) -> Result<T> {
        let lambda_nm = T::TAU() * lit(C_NM_PER_PS) / omega;
        let n = self.refractive_index(pol, lambda_nm, theta_deg)?;
        Ok(n * omega / lit(C_MM_PER_PS))
    }
}

pub(crate) fn extraordinary_index<T: Real>(n_o: T, n_e: T, theta_rad: T) -> T {
    let (s, c) = theta_rad.sin_cos();
    let inv = c * c / (n_o * n_o) + s * s / (n_e * n_e);
    T::one() / inv.sqrt()
}

/// Angular frequency [rad/ps] of vacuum wavelength `lambda_nm`.
pub fn angular_frequency<T: Real>(lambda_nm: T) -> T {
    T::TAU() * lit(C_NM_PER_PS) / lambda_nm
}

/// Wavelength width [nm] equivalent to an angular-frequency width at `lambda_nm`.
pub fn wavelength_width<T: Real>(lambda_nm: T, d_omega: T) -> T {
    lambda_nm * lambda_nm * d_omega / (T::TAU() * lit(C_NM_PER_PS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn kdp_is_negative_uniaxial() {
        let kdp = UniaxialCrystal::kdp();
        assert!(kdp.provenance.contains("1964"));
        let (n_o, n_e) = kdp.principal_indices(830.0f64).unwrap();
        assert!(n_o > n_e && n_e > 1.0);
        // direct evaluation of the tabulated two-pole fit
        let l2: f64 = 0.83 * 0.83;
        let expect = (2.259276 + 0.01008956 / (l2 - 0.012942625) + 13.00522 * l2 / (l2 - 400.0)).sqrt();
        assert_relative_eq!(n_o, expect, max_relative = 1e-15);
        assert_relative_eq!(n_o, 1.500588366, epsilon = 1e-9);
    }

    #[test]
    fn angle_limits() {
        let kdp = UniaxialCrystal::kdp();
        for lambda in [300.0, 415.0, 830.0, 1200.0] {
            let o = kdp.refractive_index(Polarization::O, lambda, 0.0).unwrap();
            let e0 = kdp.refractive_index(Polarization::E, lambda, 0.0).unwrap();
            let e90 = kdp.refractive_index(Polarization::E, lambda, 90.0).unwrap();
            assert_relative_eq!(o, e0, max_relative = 1e-15);
            assert_relative_eq!(e90, kdp.principal_indices(lambda).unwrap().1, max_relative = 1e-15);
        }
    }

    #[test]
    fn range_and_angle_guards() {
        let kdp = UniaxialCrystal::kdp();
        let err = kdp.refractive_index(Polarization::O, 2000.0f64, 0.0).unwrap_err();
        assert_eq!(err.kind(), "OutOfRangeWavelength");
        assert!(kdp.refractive_index(Polarization::E, 800.0f64, 95.0).is_err());
        assert!(UniaxialCrystal::bundled("BBO").is_err());
        assert!(parse_crystal_table("{").is_err());
    }

    #[test]
    fn pump_bandwidth_conversion() {
        // 19 rad/ps at 415 nm is about 1.7 nm of pump bandwidth
        let w = wavelength_width(415.0f64, 19.0);
        assert_relative_eq!(w, 415.0 * 415.0 * 19.0 / (std::f64::consts::TAU * C_NM_PER_PS), max_relative = 1e-15);
        assert_relative_eq!(angular_frequency(415.0f64), 4538.9, max_relative = 1e-4);
    }
}
