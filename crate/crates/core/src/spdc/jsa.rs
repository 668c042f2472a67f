//! Joint spectral amplitudes of collinear type-II pairs and their marginals.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::crystal::UniaxialCrystal;
use super::phase_matching::{phase_matching_at, phase_matching_solve, GroupSlopes, PhaseMatching, Waves};
use crate::envelope::{fwhm, fwhm_factor, weighted_mean_std};
use crate::error::{invalid, Error, Result};
use crate::fft;
use crate::real::{lit, Real};

/// Width of the Gaussian that shares its half maximum with `sinc(x)`.
pub const SIGMA_S: f64 = 1.61;
/// Zero padding used for the temporal profiles of tabulated amplitudes.
pub const TEMPORAL_PADDING: usize = 16;
pub const DEFAULT_GRID_POINTS: usize = 512;
/// Default half spans in units of the marginal scales `Ω_p` and `σ_s/τ_e`.
pub const DEFAULT_SPAN: f64 = 5.0;
/// Smallest accepted half spans in the same units.
pub const MIN_SPAN: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JsaKind {
    Exact,
    GaussianApprox,
    /// Built from user-supplied values.
    Tabulated,
}

/// Super-Gaussian amplitude filter `exp(-½ (Ω'/w)^(2·order))` on the
/// extraordinary frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SidelobeFilter<T> {
    /// `w` [rad/ps]; `None` puts it at the first sinc zero `π/τ_e`.
    pub half_width: Option<T>,
    pub order: u32,
}

impl<T: Real> Default for SidelobeFilter<T> {
    fn default() -> Self {
        SidelobeFilter {
            half_width: None,
            order: 6,
        }
    }
}

impl<T: Real> SidelobeFilter<T> {
    pub fn width(&self, tau_e: T) -> T {
        self.half_width.unwrap_or_else(|| T::PI() / tau_e)
    }

    pub fn transmission(&self, omega_prime: T, width: T) -> T {
        let x = (omega_prime / width).abs();
        (-x.powi(2 * self.order as i32) / lit(2.0)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JsaGridSpec<T> {
    pub n_omega: usize,
    pub n_omega_prime: usize,
    /// Half span of the ordinary axis [rad/ps]; defaults to `5 Ω_p`.
    pub half_span_omega: Option<T>,
    /// Half span of the extraordinary axis [rad/ps]; defaults to `5 σ_s/τ_e`.
    pub half_span_omega_prime: Option<T>,
}

impl<T: Real> Default for JsaGridSpec<T> {
    fn default() -> Self {
        JsaGridSpec {
            n_omega: DEFAULT_GRID_POINTS,
            n_omega_prime: DEFAULT_GRID_POINTS,
            half_span_omega: None,
            half_span_omega_prime: None,
        }
    }
}

impl<T: Real> JsaGridSpec<T> {
    pub fn square(n: usize) -> Self {
        JsaGridSpec {
            n_omega: n,
            n_omega_prime: n,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpdcConfig<T> {
    pub crystal: UniaxialCrystal,
    pub lambda_p_nm: T,
    pub length_mm: T,
    /// Propagation angle [deg]; solved from phase matching when absent.
    pub theta_p_deg: Option<T>,
    /// Pump amplitude width `Ω_p` [rad/ps], `α(Ω) ∝ exp(-Ω²/4Ω_p²)`.
    pub pump_sigma: T,
    pub grid: JsaGridSpec<T>,
    pub sidelobe_filter: Option<SidelobeFilter<T>>,
}

impl<T: Real> SpdcConfig<T> {
    /// 5 mm KDP pumped at 415 nm with `Ω_p = 19 rad/ps`.
    pub fn kdp_reference() -> Self {
        SpdcConfig {
            crystal: UniaxialCrystal::kdp(),
            lambda_p_nm: lit(415.0),
            length_mm: lit(5.0),
            theta_p_deg: None,
            pump_sigma: lit(19.0),
            grid: JsaGridSpec::default(),
            sidelobe_filter: None,
        }
    }

    pub fn phase_matching(&self) -> Result<PhaseMatching<T>> {
        match self.theta_p_deg {
            Some(theta) => phase_matching_at(&self.crystal, self.lambda_p_nm, self.length_mm, theta),
            None => phase_matching_solve(&self.crystal, self.lambda_p_nm, self.length_mm),
        }
    }
}

/// `Ω_p = √(2 ln2) / τ_p` for a pump of intensity FWHM `tau_p`.
pub fn pump_sigma_from_fwhm<T: Real>(tau_p: T) -> T {
    (lit::<T>(2.0) * T::LN_2()).sqrt() / tau_p
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JsaConstants<T> {
    pub sigma_s: T,
    pub tau_e: T,
    /// `σ_o / σ_e`: closed form for the Gaussian kind, from the marginals otherwise.
    pub k: T,
    pub pump_sigma: T,
    pub length_mm: T,
    pub slopes: GroupSlopes<T>,
}

/// Amplitude on a rectangular grid, row-major with the ordinary frequency
/// `Ω` as the slow index. Stored normalized to `∬|J|² dΩ dΩ' = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointSpectralAmplitude<T> {
    pub kind: JsaKind,
    pub omega: Vec<T>,
    pub omega_prime: Vec<T>,
    pub values: Vec<Complex<T>>,
    /// Nonlinear crystal phase `[k_o(Ω) - k_o⁰ - k_o'Ω] L` picked up by the
    /// ordinary photon on its way out; zero for the Gaussian kind.
    pub residual_phase_o: Vec<T>,
    pub residual_phase_e: Vec<T>,
    pub constants: JsaConstants<T>,
    pub filtered: bool,
}

fn axis<T: Real>(half_span: T, n: usize) -> Vec<T> {
    let step = (half_span + half_span) / T::from_usize_lossy(n - 1);
    (0..n)
        .map(|k| -half_span + step * T::from_usize_lossy(k))
        .collect()
}

fn spacing<T: Real>(axis: &[T]) -> T {
    axis[1] - axis[0]
}

fn sinc<T: Real>(x: T) -> T {
    if x.abs() < lit(1e-4) {
        T::one() - x * x / lit(6.0)
    } else {
        x.sin() / x
    }
}

/// Builds the amplitude for `config`.
pub fn jsa<T: Real>(config: &SpdcConfig<T>, kind: JsaKind) -> Result<JointSpectralAmplitude<T>> {
    if kind == JsaKind::Tabulated {
        return Err(invalid("kind", "tabulated amplitudes come from JointSpectralAmplitude::tabulated"));
    }
    if !(config.pump_sigma > T::zero()) || !config.pump_sigma.is_finite() {
        return Err(invalid("pump_sigma", "must be positive"));
    }
    let grid = &config.grid;
    if grid.n_omega < 16 || grid.n_omega_prime < 16 {
        return Err(invalid("grid", "need at least 16 points per axis"));
    }
    let pm = config.phase_matching()?;
    let tau_e = pm.tau_e;
    if !(tau_e > T::zero()) {
        return Err(invalid("tau_e", "extraordinary photon must lead the pump"));
    }
    let sigma_s: T = lit(SIGMA_S);
    let omega_p = config.pump_sigma;
    let e_scale = sigma_s / tau_e;
    let span_o = grid.half_span_omega.unwrap_or(omega_p * lit(DEFAULT_SPAN));
    let span_e = grid.half_span_omega_prime.unwrap_or(e_scale * lit(DEFAULT_SPAN));
    let slack: T = lit(1.0 - 1e-12);
    if span_o < omega_p * lit::<T>(MIN_SPAN) * slack {
        return Err(Error::GridTooNarrow(format!(
            "ordinary axis spans ±{span_o}, need ±{}",
            omega_p * lit(MIN_SPAN)
        )));
    }
    if span_e < e_scale * lit::<T>(MIN_SPAN) * slack {
        return Err(Error::GridTooNarrow(format!(
            "extraordinary axis spans ±{span_e}, need ±{}",
            e_scale * lit(MIN_SPAN)
        )));
    }
    let omega = axis(span_o, grid.n_omega);
    let omega_prime = axis(span_e, grid.n_omega_prime);
    let n_o = omega.len();
    let n_e = omega_prime.len();
    let four_wp2 = lit::<T>(4.0) * omega_p * omega_p;

    let constants = JsaConstants {
        sigma_s,
        tau_e,
        k: T::SQRT_2() * omega_p * tau_e / sigma_s,
        pump_sigma: omega_p,
        length_mm: config.length_mm,
        slopes: pm.gvm_check,
    };

    let mut values = Vec::with_capacity(n_o * n_e);
    let mut phase_o = vec![T::zero(); n_o];
    let mut phase_e = vec![T::zero(); n_e];
    let mut filtered = false;
    match kind {
        JsaKind::GaussianApprox => {
            let b = tau_e * tau_e / (lit::<T>(2.0) * sigma_s * sigma_s);
            let g: Vec<Complex<T>> = omega_prime
                .iter()
                .map(|&w| Complex::from_polar((-b * w * w).exp(), tau_e * w))
                .collect();
            for &w in &omega {
                let f = (-w * w / four_wp2).exp();
                values.extend(g.iter().map(|g| *g * f));
            }
        }
        JsaKind::Exact => {
            let waves = Waves::new(&config.crystal, config.lambda_p_nm, pm.theta_p_deg);
            let l = config.length_mm;
            let k_o: Vec<T> = omega.iter().map(|&w| waves.k_o(w)).collect::<Result<_>>()?;
            let k_e: Vec<T> = omega_prime.iter().map(|&w| waves.k_e(w)).collect::<Result<_>>()?;
            let (k_o0, k_e0) = (waves.k_o(T::zero())?, waves.k_e(T::zero())?);
            for (p, (&w, &k)) in phase_o.iter_mut().zip(omega.iter().zip(&k_o)) {
                *p = (k - k_o0 - pm.gvm_check.k_o * w) * l;
            }
            for (p, (&w, &k)) in phase_e.iter_mut().zip(omega_prime.iter().zip(&k_e)) {
                *p = (k - k_e0 - pm.gvm_check.k_e * w) * l;
            }
            let filter: Vec<T> = match &config.sidelobe_filter {
                Some(f) => {
                    filtered = true;
                    let width = f.width(tau_e);
                    omega_prime.iter().map(|&w| f.transmission(w, width)).collect()
                }
                None => vec![T::one(); n_e],
            };
            for (i, &w) in omega.iter().enumerate() {
                for (j, &wp) in omega_prime.iter().enumerate() {
                    let sum = w + wp;
                    let delta = waves.k_p(sum)? - k_o[i] - k_e[j];
                    let x = delta * l / lit(2.0);
                    let amp = (-sum * sum / four_wp2).exp() * sinc(x) * filter[j];
                    values.push(Complex::from_polar(amp, x));
                }
            }
        }
        JsaKind::Tabulated => unreachable!(),
    }

    let mut out = JointSpectralAmplitude {
        kind,
        omega,
        omega_prime,
        values,
        residual_phase_o: phase_o,
        residual_phase_e: phase_e,
        constants,
        filtered,
    };
    out.normalize()?;
    if kind == JsaKind::Exact {
        let (so, se) = out.marginal_widths();
        out.constants.k = so / se;
    }
    Ok(out)
}

impl<T: Real> JointSpectralAmplitude<T> {
    /// Samples `f(Ω, Ω')` on uniform axes with half spans `half_spans` and
    /// normalizes. Crystal constants are zero.
    pub fn tabulated(
        n: (usize, usize),
        half_spans: (T, T),
        f: impl Fn(T, T) -> Complex<T>,
    ) -> Result<Self> {
        if n.0 < 2 || n.1 < 2 {
            return Err(invalid("n", "need at least two points per axis"));
        }
        if !(half_spans.0 > T::zero() && half_spans.1 > T::zero()) {
            return Err(invalid("half_spans", "must be positive"));
        }
        let omega = axis(half_spans.0, n.0);
        let omega_prime = axis(half_spans.1, n.1);
        let mut values = Vec::with_capacity(n.0 * n.1);
        for &w in &omega {
            values.extend(omega_prime.iter().map(|&wp| f(w, wp)));
        }
        let zero = GroupSlopes {
            k_p: T::zero(),
            k_o: T::zero(),
            k_e: T::zero(),
        };
        let mut out = JointSpectralAmplitude {
            kind: JsaKind::Tabulated,
            residual_phase_o: vec![T::zero(); omega.len()],
            residual_phase_e: vec![T::zero(); omega_prime.len()],
            omega,
            omega_prime,
            values,
            constants: JsaConstants {
                sigma_s: lit(SIGMA_S),
                tau_e: T::zero(),
                k: T::zero(),
                pump_sigma: T::zero(),
                length_mm: T::zero(),
                slopes: zero,
            },
            filtered: false,
        };
        out.normalize()?;
        let (so, se) = out.marginal_widths();
        out.constants.k = so / se;
        Ok(out)
    }

    pub fn d_omega(&self) -> T {
        spacing(&self.omega)
    }

    pub fn d_omega_prime(&self) -> T {
        spacing(&self.omega_prime)
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex<T> {
        self.values[i * self.omega_prime.len() + j]
    }

    /// `∬|J|² dΩ dΩ'` by the rectangle rule.
    pub fn norm_sqr(&self) -> T {
        self.values.iter().map(|z| z.norm_sqr()).sum::<T>() * self.d_omega() * self.d_omega_prime()
    }

    fn normalize(&mut self) -> Result<()> {
        let p = self.norm_sqr();
        if !(p > T::zero()) || !p.is_finite() {
            return Err(Error::ZeroEnergy);
        }
        let s = T::one() / p.sqrt();
        for v in &mut self.values {
            *v = *v * s;
        }
        Ok(())
    }

    /// Amplitude at the crystal exit with the linear phases removed:
    /// `J(Ω,Ω') exp(i φ_o(Ω) + i φ_e(Ω'))`.
    pub fn output_values(&self) -> Vec<Complex<T>> {
        let n_e = self.omega_prime.len();
        self.values
            .iter()
            .enumerate()
            .map(|(idx, v)| {
                let (i, j) = (idx / n_e, idx % n_e);
                *v * Complex::from_polar(T::one(), self.residual_phase_o[i] + self.residual_phase_e[j])
            })
            .collect()
    }

    /// Spectral densities `(S_o(Ω), S_e(Ω'))`.
    pub fn marginal_spectra(&self) -> (Vec<T>, Vec<T>) {
        let n_e = self.omega_prime.len();
        let mut s_o = vec![T::zero(); self.omega.len()];
        let mut s_e = vec![T::zero(); n_e];
        for (idx, v) in self.values.iter().enumerate() {
            let p = v.norm_sqr();
            s_o[idx / n_e] = s_o[idx / n_e] + p;
            s_e[idx % n_e] = s_e[idx % n_e] + p;
        }
        let (dw, dwp) = (self.d_omega(), self.d_omega_prime());
        s_o.iter_mut().for_each(|s| *s = *s * dwp);
        s_e.iter_mut().for_each(|s| *s = *s * dw);
        (s_o, s_e)
    }

    fn marginal_widths(&self) -> (T, T) {
        let (s_o, s_e) = self.marginal_spectra();
        (
            weighted_mean_std(&self.omega, &s_o).1,
            weighted_mean_std(&self.omega_prime, &s_e).1,
        )
    }

    /// Upper bound on `σ₂/σ₁` of the value matrix: the Frobenius norm of the
    /// residual after removing the leading rank-one term, over `σ₁`.
    pub fn separability_residual(&self) -> T {
        let (n_o, n_e) = (self.omega.len(), self.omega_prime.len());
        let mut v = vec![Complex::new(T::one(), T::zero()); n_e];
        let mut sigma = T::zero();
        let mut u = vec![Complex::new(T::zero(), T::zero()); n_o];
        for _ in 0..50 {
            for (i, ui) in u.iter_mut().enumerate() {
                *ui = (0..n_e).map(|j| self.at(i, j) * v[j]).sum();
            }
            let nu = u.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            u.iter_mut().for_each(|z| *z = *z / nu);
            for (j, vj) in v.iter_mut().enumerate() {
                *vj = (0..n_o).map(|i| self.at(i, j).conj() * u[i]).sum();
            }
            let nv = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
            v.iter_mut().for_each(|z| *z = *z / nv);
            let converged = (nv - sigma).abs() <= nv * lit(1e-15);
            sigma = nv;
            if converged {
                break;
            }
        }
        let mut resid = T::zero();
        for i in 0..n_o {
            for j in 0..n_e {
                resid = resid + (self.at(i, j) - u[i] * v[j].conj() * sigma).norm_sqr();
            }
        }
        resid.sqrt() / sigma
    }
}

/// Marginal spectra, spectral and temporal widths of both photons.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhotonMarginals<T> {
    pub omega: Vec<T>,
    pub s_o: Vec<T>,
    pub omega_prime: Vec<T>,
    pub s_e: Vec<T>,
    pub sigma_o: T,
    pub sigma_e: T,
    /// Rms intensity durations [ps].
    pub delta_t_o: T,
    pub delta_t_e: T,
    pub fwhm_t_o: T,
    pub fwhm_t_e: T,
    pub k: T,
}

/// Average temporal intensity of one photon: the Fourier transform of the
/// amplitude along its own axis, squared and summed over the partner axis.
/// Returns ascending times and intensities.
fn temporal_profile<T: Real>(jsa: &JointSpectralAmplitude<T>, ordinary: bool) -> (Vec<T>, Vec<T>) {
    let out = jsa.output_values();
    let (n_o, n_e) = (jsa.omega.len(), jsa.omega_prime.len());
    let (n_own, n_other, d) = if ordinary {
        (n_o, n_e, jsa.d_omega())
    } else {
        (n_e, n_o, jsa.d_omega_prime())
    };
    let len = (n_own * TEMPORAL_PADDING).next_power_of_two();
    let mut intensity = vec![T::zero(); len];
    let mut buf = vec![Complex::new(T::zero(), T::zero()); len];
    for other in 0..n_other {
        buf.iter_mut().for_each(|z| *z = Complex::new(T::zero(), T::zero()));
        for own in 0..n_own {
            let (i, j) = if ordinary { (own, other) } else { (other, own) };
            buf[own] = out[i * n_e + j];
        }
        fft::forward(&mut buf);
        for (acc, z) in intensity.iter_mut().zip(&buf) {
            *acc = *acc + z.norm_sqr();
        }
    }
    let dt = T::TAU() / (T::from_usize_lossy(len) * d);
    let times: Vec<T> = (0..len)
        .map(|k| dt * lit(fft::signed_index(k, len) as f64))
        .collect();
    (fft::shift(&times), fft::shift(&intensity))
}

pub fn photon_marginals<T: Real>(jsa: &JointSpectralAmplitude<T>) -> Result<PhotonMarginals<T>> {
    let (s_o, s_e) = jsa.marginal_spectra();
    let total: T = s_o.iter().copied().sum();
    if !(total > T::zero()) {
        return Err(Error::ZeroEnergy);
    }
    let sigma_o = weighted_mean_std(&jsa.omega, &s_o).1;
    let sigma_e = weighted_mean_std(&jsa.omega_prime, &s_e).1;
    let (delta_t_o, delta_t_e, fwhm_t_o, fwhm_t_e) = match jsa.kind {
        JsaKind::GaussianApprox => {
            let c = &jsa.constants;
            let dto = T::one() / (lit::<T>(2.0) * c.pump_sigma);
            let dte = c.tau_e / (T::SQRT_2() * c.sigma_s);
            (dto, dte, fwhm_factor::<T>() * dto, fwhm_factor::<T>() * dte)
        }
        JsaKind::Exact | JsaKind::Tabulated => {
            let (t_o, i_o) = temporal_profile(jsa, true);
            let (t_e, i_e) = temporal_profile(jsa, false);
            (
                weighted_mean_std(&t_o, &i_o).1,
                weighted_mean_std(&t_e, &i_e).1,
                fwhm(&t_o, &i_o),
                fwhm(&t_e, &i_e),
            )
        }
    };
    Ok(PhotonMarginals {
        omega: jsa.omega.clone(),
        s_o,
        omega_prime: jsa.omega_prime.clone(),
        s_e,
        sigma_o,
        sigma_e,
        delta_t_o,
        delta_t_e,
        fwhm_t_o,
        fwhm_t_e,
        k: sigma_o / sigma_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sigma_s_matches_sinc_half_width() {
        // half maximum of sinc(x) against that of exp(-x²/2σ²) at σ√(2 ln2)
        let mut lo = 1.0f64;
        let mut hi = 3.0f64;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid.sin() / mid > 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let sigma = lo / (2.0 * 2f64.ln()).sqrt();
        assert_relative_eq!(sigma, SIGMA_S, max_relative = 1e-2);
    }

    #[test]
    fn gaussian_kind_matches_closed_forms() {
        let cfg = SpdcConfig::<f64>::kdp_reference();
        let j = jsa(&cfg, JsaKind::GaussianApprox).unwrap();
        assert!((j.norm_sqr() - 1.0).abs() < 1e-8);
        assert!(j.separability_residual() <= 1e-10);
        let m = photon_marginals(&j).unwrap();
        let expect_e = SIGMA_S / (2f64.sqrt() * j.constants.tau_e);
        assert_relative_eq!(m.sigma_o, 19.0, max_relative = 1e-4);
        assert_relative_eq!(m.sigma_e, expect_e, max_relative = 1e-4);
        assert_relative_eq!(m.k, j.constants.k, max_relative = 1e-4);
    }

    #[test]
    fn exact_kind_properties() {
        let mut cfg = SpdcConfig::<f64>::kdp_reference();
        cfg.grid = JsaGridSpec::square(128);
        let j = jsa(&cfg, JsaKind::Exact).unwrap();
        assert!((j.norm_sqr() - 1.0).abs() < 1e-8);
        assert!(!j.filtered);
        // |Φ| ≤ 1 means |J| never exceeds the pump envelope (up to normalization)
        let peak = j.values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(peak.is_finite());
        cfg.sidelobe_filter = Some(SidelobeFilter::default());
        let filtered = jsa(&cfg, JsaKind::Exact).unwrap();
        assert!(filtered.filtered);
        assert!(filtered.constants.k > j.constants.k);
    }

    #[test]
    fn narrow_grids_rejected() {
        let mut cfg = SpdcConfig::<f64>::kdp_reference();
        cfg.grid.half_span_omega = Some(3.0 * 19.0);
        assert_eq!(jsa(&cfg, JsaKind::GaussianApprox).unwrap_err().kind(), "GridTooNarrow");
        let mut cfg = SpdcConfig::<f64>::kdp_reference();
        cfg.grid.half_span_omega_prime = Some(1.0);
        assert_eq!(jsa(&cfg, JsaKind::Exact).unwrap_err().kind(), "GridTooNarrow");
    }

    #[test]
    fn symmetric_toy_amplitude() {
        let j = JointSpectralAmplitude::tabulated((96, 96), (6.0, 6.0), |a: f64, b| {
            Complex::new((-(a * a + b * b)).exp(), 0.0)
        })
        .unwrap();
        let m = photon_marginals(&j).unwrap();
        assert_relative_eq!(m.sigma_o, m.sigma_e, max_relative = 1e-12);
        assert_relative_eq!(m.k, 1.0, max_relative = 1e-12);
        assert_relative_eq!(m.delta_t_o, m.delta_t_e, max_relative = 1e-9);
        // |J|² ∝ exp(-2Ω²): σ_Ω = 1/2, amplitude FT gives σ_t = 1/(2σ_Ω) = 1
        assert_relative_eq!(m.sigma_o, 0.5, max_relative = 1e-6);
        assert_relative_eq!(m.delta_t_o, 1.0, max_relative = 1e-3);
    }

    #[test]
    fn narrow_pump_concentrates_on_antidiagonal() {
        let mut cfg = SpdcConfig::<f64>::kdp_reference();
        cfg.grid = JsaGridSpec {
            n_omega: 256,
            n_omega_prime: 256,
            half_span_omega: Some(95.0),
            half_span_omega_prime: None,
        };
        cfg.pump_sigma = 1.0;
        let j = jsa(&cfg, JsaKind::Exact).unwrap();
        let (mut sum, mut sum2, mut tot) = (0.0, 0.0, 0.0);
        for (i, &w) in j.omega.iter().enumerate() {
            for (jj, &wp) in j.omega_prime.iter().enumerate() {
                let p = j.at(i, jj).norm_sqr();
                sum += p * (w + wp);
                sum2 += p * (w + wp) * (w + wp);
                tot += p;
            }
        }
        let std = (sum2 / tot - (sum / tot).powi(2)).sqrt();
        assert!((std - 1.0).abs() < 0.1, "{std}");
    }
}
