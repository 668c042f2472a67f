//! Hong-Ou-Mandel interference behind a time telescope: SPDC pairs with one
//! photon rescaled, and photons from two exponentially decaying emitters.
//!
//! `p_int` is the conditional probability that both photons leave through
//! the same beam-splitter port; the normalized coincidence rate is `1 - p_int`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::real::{lit, Real};
use crate::spdc::{JointSpectralAmplitude, JsaKind};

/// Tolerated imaginary part of the interference integral.
pub const HERMITIAN_TOLERANCE: f64 = 1e-6;
/// Values above `1 + CLAMP_SLACK` are reported as quadrature trouble.
pub const CLAMP_SLACK: f64 = 1e-6;
/// `||M|τ₁ - τ₂| ≤ DEGENERATE_LIFETIME·τ₂` selects the limit forms.
pub const DEGENERATE_LIFETIME: f64 = 1e-9;
/// Emitter quadrature: samples per shortest lifetime and span in longest lifetimes.
pub const EMITTER_STEPS_PER_LIFETIME: usize = 50;
pub const EMITTER_SPAN_LIFETIMES: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Analytic,
    Numeric,
}

/// How the extraordinary-arm delay `t_d` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayMode {
    /// `t_d = [(2M-1) k_p' - k_e'] L / 2`.
    Formula,
    /// Maximizes `p_int(0)` over `t_d`.
    Optimize,
}

fn check_m<T: Real>(m: T) -> Result<()> {
    if m == T::zero() || !m.is_finite() {
        return Err(invalid("M", "magnification must be finite and nonzero"));
    }
    Ok(())
}

/// Closed-form `p_int` for the separable Gaussian amplitude,
/// `2K|M|/(K²+M²) exp(-2Ω_p² δτ² / (K²+M²))`.
pub fn p_int_spdc_analytic<T: Real>(k: T, m: T, omega_p: T, delay: T) -> T {
    let s = k * k + m * m;
    lit::<T>(2.0) * k * m.abs() / s * (-lit::<T>(2.0) * omega_p * omega_p * delay * delay / s).exp()
}

/// `2K|M|/(K²+M²)`.
pub fn spdc_visibility<T: Real>(k: T, m: T) -> T {
    lit::<T>(2.0) * k * m.abs() / (k * k + m * m)
}

/// Numeric interference integral for one amplitude and magnification,
/// prepared once and evaluated at any number of delays.
#[derive(Debug, Clone)]
pub struct SpdcInterference<T> {
    magnification: T,
    /// Integration axis: the extraordinary frequency grid.
    axis: Vec<T>,
    d_axis: T,
    /// `J_out(MΩ_i, Ω_j) conj(J_out(MΩ_j, Ω_i))`, row-major.
    kernel: Vec<Complex<T>>,
    p_b: T,
    /// Shift from the crystal group delays, `(M k_o' - k_e') L`.
    crystal_shift: T,
    t_d: T,
}

impl<T: Real> SpdcInterference<T> {
    pub fn new(jsa: &JointSpectralAmplitude<T>, magnification: T, mode: DelayMode) -> Result<Self> {
        check_m(magnification)?;
        let m = magnification;
        let out = jsa.output_values();
        let (n_o, n_e) = (jsa.omega.len(), jsa.omega_prime.len());
        let (o_min, d_o) = (jsa.omega[0], jsa.d_omega());
        let axis = jsa.omega_prime.clone();

        let (s_o, _) = jsa.marginal_spectra();
        let sigma_o = crate::envelope::weighted_mean_std(&jsa.omega, &s_o).1;
        let d_axis = jsa.d_omega_prime();
        let scaled_width = sigma_o / m.abs();
        if scaled_width < d_axis * lit(4.0) {
            return Err(Error::GridTooCoarse(format!(
                "scaled ordinary width {scaled_width:.4e} rad/ps spans fewer than 4 steps of {d_axis:.4e}"
            )));
        }

        // G[i][j] = J_out(M Ω_i, Ω_j), linear along the ordinary axis
        let zero = Complex::new(T::zero(), T::zero());
        let last = T::from_usize_lossy(n_o - 1);
        let mut g = vec![zero; n_e * n_e];
        for (i, &w) in axis.iter().enumerate() {
            let x = (m * w - o_min) / d_o;
            if !(x >= T::zero() && x <= last) {
                continue;
            }
            let i0 = x.floor().to_f64_lossy() as usize;
            let i0 = i0.min(n_o - 2);
            let f = x - T::from_usize_lossy(i0);
            let (r0, r1) = (&out[i0 * n_e..(i0 + 1) * n_e], &out[(i0 + 1) * n_e..(i0 + 2) * n_e]);
            for j in 0..n_e {
                g[i * n_e + j] = r0[j] * (T::one() - f) + r1[j] * f;
            }
        }
        let mut kernel = vec![zero; n_e * n_e];
        for i in 0..n_e {
            for j in 0..n_e {
                kernel[i * n_e + j] = g[i * n_e + j] * g[j * n_e + i].conj();
            }
        }

        let c = &jsa.constants;
        let l = c.length_mm;
        // the separable model drops (k_p' - k_o')Ω from the mismatch, so the
        // ordinary photon travels with the pump there
        let k_o = if jsa.kind == JsaKind::GaussianApprox {
            c.slopes.k_p
        } else {
            c.slopes.k_o
        };
        let crystal_shift = (m * k_o - c.slopes.k_e) * l;
        let t_d_formula = ((lit::<T>(2.0) * m - T::one()) * c.slopes.k_p - c.slopes.k_e) * l / lit(2.0);
        let mut me = SpdcInterference {
            magnification: m,
            axis,
            d_axis,
            kernel,
            p_b: jsa.norm_sqr(),
            crystal_shift,
            t_d: t_d_formula,
        };
        if mode == DelayMode::Optimize {
            let (_, s_e) = jsa.marginal_spectra();
            let sigma_e = crate::envelope::weighted_mean_std(&jsa.omega_prime, &s_e).1;
            let width = (T::one() / (sigma_e * sigma_e) + T::one() / (scaled_width * scaled_width)).sqrt();
            me.t_d = me.optimize_delay(t_d_formula, width + width)?;
        }
        Ok(me)
    }

    pub fn magnification(&self) -> T {
        self.magnification
    }

    pub fn t_d(&self) -> T {
        self.t_d
    }

    /// Unclamped `p_int(δτ)` as returned by the quadrature.
    pub fn raw_p_int(&self, delay: T) -> Result<T> {
        self.evaluate(delay - self.t_d + self.crystal_shift)
    }

    /// `p_int(δτ)` clamped to `[0, 1]`; see [`Self::raw_p_int`].
    pub fn p_int(&self, delay: T) -> Result<T> {
        Ok(self.raw_p_int(delay)?.max(T::zero()).min(T::one()))
    }

    fn evaluate(&self, s: T) -> Result<T> {
        if s.abs() * self.d_axis > T::FRAC_PI_2() {
            return Err(Error::GridTooCoarse(format!(
                "phase step {:.3e} rad per sample at total delay {s:.4e} ps",
                (s * self.d_axis).to_f64_lossy()
            )));
        }
        let n = self.axis.len();
        let u: Vec<Complex<T>> = self
            .axis
            .iter()
            .map(|&w| Complex::from_polar(T::one(), w * s))
            .collect();
        let mut total = Complex::new(T::zero(), T::zero());
        for i in 0..n {
            let row = &self.kernel[i * n..(i + 1) * n];
            let inner: Complex<T> = row.iter().zip(&u).map(|(k, uj)| *k * uj.conj()).sum();
            total = total + u[i] * inner;
        }
        let p = total * (self.magnification.abs() * self.d_axis * self.d_axis / self.p_b);
        if p.im.abs() > lit(HERMITIAN_TOLERANCE) {
            return Err(Error::NonHermitianResult {
                imag: p.im.to_f64_lossy(),
            });
        }
        Ok(p.re)
    }

    /// Golden-section search for the `t_d` maximizing `p_int(0)` within
    /// `± half_range` of `start`.
    fn optimize_delay(&self, start: T, half_range: T) -> Result<T> {
        let f = |t_d: T| self.evaluate(-t_d + self.crystal_shift);
        let ratio: T = lit(0.618_033_988_749_894_9);
        let (mut a, mut b) = (start - half_range, start + half_range);
        let mut c = b - (b - a) * ratio;
        let mut d = a + (b - a) * ratio;
        let (mut fc, mut fd) = (f(c)?, f(d)?);
        let tol = half_range * lit(1e-9);
        while b - a > tol {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - (b - a) * ratio;
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + (b - a) * ratio;
                fd = f(d)?;
            }
        }
        Ok((a + b) / lit(2.0))
    }
}

/// Numeric `p_int(δτ)` for a single delay.
pub fn p_int_spdc<T: Real>(jsa: &JointSpectralAmplitude<T>, m: T, delay: T, mode: DelayMode) -> Result<T> {
    SpdcInterference::new(jsa, m, mode)?.p_int(delay)
}

/// Exponentially decaying emitter, `ψ(t) = √(μ/τ) e^{-t/2τ} θ(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmitterMode<T> {
    pub tau: T,
    pub mu: T,
}

impl<T: Real> EmitterMode<T> {
    pub fn new(tau: T, mu: T) -> Result<Self> {
        if !(tau > T::zero()) || !tau.is_finite() {
            return Err(invalid("tau", "lifetime must be positive"));
        }
        if !(mu > T::zero() && mu <= T::one()) {
            return Err(invalid("mu", "brightness must lie in (0, 1]"));
        }
        Ok(EmitterMode { tau, mu })
    }

    pub fn amplitude(&self, t: T) -> T {
        if t < T::zero() {
            T::zero()
        } else {
            (self.mu / self.tau).sqrt() * (-t / (lit::<T>(2.0) * self.tau)).exp()
        }
    }
}

fn degenerate<T: Real>(a: T, tau2: T) -> bool {
    (a - tau2).abs() <= lit::<T>(DEGENERATE_LIFETIME) * tau2
}

/// Closed forms for the emitter overlap.
pub fn p_int_emitter_analytic<T: Real>(tau1: T, tau2: T, m: T, delay: T) -> T {
    let a = m.abs() * tau1;
    if m > T::zero() {
        let v = lit::<T>(4.0) * a * tau2 / ((a + tau2) * (a + tau2));
        if delay >= T::zero() {
            v * (-delay / tau2).exp()
        } else {
            v * (delay / a).exp()
        }
    } else if delay <= T::zero() {
        T::zero()
    } else if degenerate(a, tau2) {
        let x = delay / tau2;
        x * x * (-x).exp()
    } else {
        let two: T = lit(2.0);
        let diff = (-delay / (two * a)).exp() - (-delay / (two * tau2)).exp();
        lit::<T>(4.0) * a * tau2 / ((a - tau2) * (a - tau2)) * diff * diff
    }
}

/// Composite Simpson quadrature of `|∫ψ₁(t/M)ψ₂(t+δτ)dt|² / (|M| μ₁μ₂)` with
/// step `dt` over at most `span` past the start of the common support.
pub fn emitter_overlap_numeric<T: Real>(
    s1: &EmitterMode<T>,
    s2: &EmitterMode<T>,
    m: T,
    delay: T,
    dt: T,
    span: T,
) -> Result<T> {
    check_m(m)?;
    let a = m.abs() * s1.tau;
    let shortest = a.min(s2.tau);
    let longest = a.max(s2.tau);
    if !(dt > T::zero()) || dt * T::from_usize_lossy(EMITTER_STEPS_PER_LIFETIME) > shortest * lit(1.0 + 1e-12) {
        return Err(Error::GridTooCoarse(format!(
            "step {dt} exceeds 1/{EMITTER_STEPS_PER_LIFETIME} of the shortest lifetime {shortest}"
        )));
    }
    if span < longest * lit(EMITTER_SPAN_LIFETIMES) * lit(1.0 - 1e-12) {
        return Err(Error::GridTooNarrow(format!(
            "span {span} below {EMITTER_SPAN_LIFETIMES} x {longest}"
        )));
    }
    // supports: ψ₁(t/M) on t ≥ 0 (M > 0) or t ≤ 0 (M < 0); ψ₂(t+δτ) on t ≥ -δτ
    let lo = if m > T::zero() { (-delay).max(T::zero()) } else { -delay };
    let hi = if m > T::zero() { lo + span } else { T::zero().min(lo + span) };
    if !(hi > lo) {
        return Ok(T::zero());
    }
    let mut steps = ((hi - lo) / dt).ceil().to_f64_lossy() as usize;
    steps += steps % 2;
    steps = steps.max(2);
    let h = (hi - lo) / T::from_usize_lossy(steps);
    let f = |t: T| s1.amplitude(t / m) * s2.amplitude(t + delay);
    let mut sum = f(lo) + f(hi);
    for k in 1..steps {
        let w: T = if k % 2 == 1 { lit(4.0) } else { lit(2.0) };
        sum = sum + w * f(lo + h * T::from_usize_lossy(k));
    }
    let c = sum * h / lit(3.0);
    Ok(c * c / (m.abs() * s1.mu * s2.mu))
}

pub fn p_int_emitter<T: Real>(
    s1: &EmitterMode<T>,
    s2: &EmitterMode<T>,
    m: T,
    delay: T,
    mode: EvalMode,
) -> Result<T> {
    check_m(m)?;
    match mode {
        EvalMode::Analytic => Ok(p_int_emitter_analytic(s1.tau, s2.tau, m, delay)),
        EvalMode::Numeric => {
            let a = m.abs() * s1.tau;
            let dt = a.min(s2.tau) / T::from_usize_lossy(EMITTER_STEPS_PER_LIFETIME);
            let span = a.max(s2.tau) * lit(EMITTER_SPAN_LIFETIMES);
            emitter_overlap_numeric(s1, s2, m, delay, dt, span)
        }
    }
}

/// Visibility and the delay where it is reached for two emitters.
pub fn emitter_visibility<T: Real>(tau1: T, tau2: T, m: T) -> (T, T) {
    let a = m.abs() * tau1;
    if m > T::zero() {
        (lit::<T>(4.0) * a * tau2 / ((a + tau2) * (a + tau2)), T::zero())
    } else if degenerate(a, tau2) {
        (lit::<T>(4.0) * (-lit::<T>(2.0)).exp(), tau2 + tau2)
    } else {
        let delay = lit::<T>(2.0) * a * tau2 / (a - tau2) * (a / tau2).ln();
        let v = lit::<T>(4.0) * (tau2 / a).powf((a + tau2) / (a - tau2));
        (v, delay)
    }
}

/// Source description for visibility scans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum ScanSource<T> {
    Spdc { k: T, omega_p: T },
    Emitters { tau1: T, tau2: T },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VisibilityPoint<T> {
    pub m: T,
    pub visibility: T,
    pub argmax_delay: T,
}

pub fn visibility_scan<T: Real>(source: &ScanSource<T>, m_values: &[T]) -> Result<Vec<VisibilityPoint<T>>> {
    if m_values.is_empty() {
        return Err(invalid("m_values", "scan needs at least one magnification"));
    }
    match *source {
        ScanSource::Spdc { k, omega_p } => {
            if !(k > T::zero() && omega_p > T::zero()) {
                return Err(invalid("source", "K and Ω_p must be positive"));
            }
        }
        ScanSource::Emitters { tau1, tau2 } => {
            EmitterMode::new(tau1, T::one())?;
            EmitterMode::new(tau2, T::one())?;
        }
    }
    m_values
        .iter()
        .map(|&m| {
            check_m(m)?;
            let (visibility, argmax_delay) = match *source {
                ScanSource::Spdc { k, .. } => (spdc_visibility(k, m), T::zero()),
                ScanSource::Emitters { tau1, tau2 } => emitter_visibility(tau1, tau2, m),
            };
            Ok(VisibilityPoint {
                m,
                visibility,
                argmax_delay,
            })
        })
        .collect()
}

/// Source description for coincidence curves.
#[derive(Debug, Clone, Copy)]
pub enum CurveSource<'a, T> {
    SpdcAnalytic { k: T, omega_p: T },
    SpdcNumeric {
        jsa: &'a JointSpectralAmplitude<T>,
        delay_mode: DelayMode,
    },
    Emitters {
        source1: EmitterMode<T>,
        source2: EmitterMode<T>,
        mode: EvalMode,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomMetadata<T> {
    pub m: T,
    pub source: &'static str,
    /// Extraordinary-arm delay used by the numeric SPDC path [ps].
    pub t_d: Option<T>,
    /// Delay of the maximal `p_int` predicted in closed form [ps].
    pub delay_min: Option<T>,
    /// Points whose raw value fell outside `[0, 1 + 1e-6]` before clamping.
    pub clamped_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomCurve<T> {
    pub delays: Vec<T>,
    pub p_int: Vec<T>,
    pub normalized_rate: Vec<T>,
    /// Largest `p_int` over the sampled delays.
    pub visibility: T,
    pub metadata: HomMetadata<T>,
}

pub fn coincidence_curve<T: Real>(source: &CurveSource<'_, T>, m: T, delays: &[T]) -> Result<HomCurve<T>> {
    check_m(m)?;
    if delays.is_empty() {
        return Err(invalid("delays", "need at least one delay"));
    }
    let mut clamped = 0usize;
    let mut clamp = |p: T| {
        if p < T::zero() || p > lit::<T>(1.0 + CLAMP_SLACK) {
            clamped += 1;
        }
        p.max(T::zero()).min(T::one())
    };
    let (name, t_d, delay_min, raw): (&'static str, Option<T>, Option<T>, Vec<T>) = match source {
        CurveSource::SpdcAnalytic { k, omega_p } => (
            "spdc_analytic",
            None,
            Some(T::zero()),
            delays
                .iter()
                .map(|&d| p_int_spdc_analytic(*k, m, *omega_p, d))
                .collect(),
        ),
        CurveSource::SpdcNumeric { jsa, delay_mode } => {
            let hom = SpdcInterference::new(jsa, m, *delay_mode)?;
            let raw = delays.iter().map(|&d| hom.raw_p_int(d)).collect::<Result<_>>()?;
            ("spdc_numeric", Some(hom.t_d()), None, raw)
        }
        CurveSource::Emitters {
            source1,
            source2,
            mode,
        } => {
            let raw = delays
                .iter()
                .map(|&d| p_int_emitter(source1, source2, m, d, *mode))
                .collect::<Result<_>>()?;
            let (_, at) = emitter_visibility(source1.tau, source2.tau, m);
            ("emitters", None, Some(at), raw)
        }
    };
    let p_int: Vec<T> = raw.into_iter().map(&mut clamp).collect();
    let normalized_rate = p_int.iter().map(|p| T::one() - *p).collect();
    let visibility = p_int.iter().copied().fold(T::zero(), T::max);
    Ok(HomCurve {
        delays: delays.to_vec(),
        p_int,
        normalized_rate,
        visibility,
        metadata: HomMetadata {
            m,
            source: name,
            t_d,
            delay_min,
            clamped_points: clamped,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn analytic_spdc_values() {
        assert_eq!(spdc_visibility(6.0, 6.0), 1.0);
        assert_eq!(spdc_visibility(6.0, -6.0), 1.0);
        assert_relative_eq!(p_int_spdc_analytic(6.0, 1.0, 19.0, 0.0), 12.0 / 37.0, max_relative = 1e-15);
        let half = (72.0 * 2f64.ln() / (2.0 * 361.0)).sqrt();
        assert_relative_eq!(p_int_spdc_analytic(6.0, 6.0, 19.0, half), 0.5, max_relative = 1e-12);
        for m in [0.5, 2.0, 7.0] {
            assert_relative_eq!(spdc_visibility(6.0, m), spdc_visibility(6.0, 36.0 / m), max_relative = 1e-12);
        }
    }

    #[test]
    fn emitter_closed_forms() {
        assert_relative_eq!(p_int_emitter_analytic(1.0, 3.0, 3.0, 0.0), 1.0, max_relative = 1e-15);
        assert_relative_eq!(p_int_emitter_analytic(1.0, 3.0, 1.0, 0.0), 0.75, max_relative = 1e-15);
        let (v, at) = emitter_visibility(1.0, 3.0, -3.0);
        assert_relative_eq!(v, 4.0 * (-2.0f64).exp(), max_relative = 1e-12);
        assert_eq!(at, 6.0);
        assert_relative_eq!(p_int_emitter_analytic(1.0, 3.0, -3.0, 6.0), v, max_relative = 1e-12);
        // closed-form visibility agrees with the curve at its maximum
        let (v, at) = emitter_visibility(1.0, 3.0, -2.0);
        assert_relative_eq!(p_int_emitter_analytic(1.0, 3.0, -2.0, at), v, max_relative = 1e-12);
        assert!(p_int_emitter_analytic(1.0, 3.0, -2.0, at * 1.01) < v);
        assert!(p_int_emitter_analytic(1.0, 3.0, -2.0, at * 0.99) < v);
        // the limit form joins the general one continuously
        let near = p_int_emitter_analytic(1.0, 3.0, -3.0 * (1.0 + 1e-6), 4.0);
        let at_limit = p_int_emitter_analytic(1.0, 3.0, -3.0, 4.0);
        assert_relative_eq!(near, at_limit, max_relative = 1e-5);
    }

    #[test]
    fn numeric_overlap_matches_closed_forms() {
        let s1 = EmitterMode::new(1.0f64, 1.0).unwrap();
        let s2 = EmitterMode::new(3.0, 1.0).unwrap();
        for m in [3.0, 1.0, 0.5, -0.5, -3.0, -6.0] {
            for d in [-4.0, -1.0, 0.0, 0.7, 2.0, 6.0, 11.0] {
                let a = p_int_emitter(&s1, &s2, m, d, EvalMode::Analytic).unwrap();
                let n = p_int_emitter(&s1, &s2, m, d, EvalMode::Numeric).unwrap();
                assert!((a - n).abs() <= 1e-2 * a.max(1e-12) + 1e-12, "M={m} d={d}: {a} vs {n}");
            }
        }
    }

    #[test]
    fn brightness_cancels() {
        let a = p_int_emitter(&EmitterMode::new(1.0f64, 1.0).unwrap(), &EmitterMode::new(2.0, 1.0).unwrap(), 1.5, 0.3, EvalMode::Numeric).unwrap();
        let b = p_int_emitter(&EmitterMode::new(1.0f64, 0.3).unwrap(), &EmitterMode::new(2.0, 0.7).unwrap(), 1.5, 0.3, EvalMode::Numeric).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn emitter_grid_guards() {
        let s1 = EmitterMode::new(1.0f64, 1.0).unwrap();
        let s2 = EmitterMode::new(3.0, 1.0).unwrap();
        let err = emitter_overlap_numeric(&s1, &s2, 1.0, 0.0, 0.1, 100.0).unwrap_err();
        assert_eq!(err.kind(), "GridTooCoarse");
        let err = emitter_overlap_numeric(&s1, &s2, 1.0, 0.0, 0.01, 10.0).unwrap_err();
        assert_eq!(err.kind(), "GridTooNarrow");
        assert!(EmitterMode::new(0.0, 1.0).is_err());
        assert!(EmitterMode::new(1.0, 1.5).is_err());
    }

    #[test]
    fn scans() {
        let pts = visibility_scan(&ScanSource::Emitters { tau1: 1.0, tau2: 3.0 }, &[-3.0, 3.0]).unwrap();
        assert_relative_eq!(pts[0].visibility, 4.0 * (-2.0f64).exp(), max_relative = 1e-12);
        assert_eq!(pts[1].visibility, 1.0);
        assert!(visibility_scan(&ScanSource::Spdc { k: 6.0, omega_p: 19.0 }, &[0.0]).is_err());
        assert!(visibility_scan::<f64>(&ScanSource::Spdc { k: 6.0, omega_p: 19.0 }, &[]).is_err());
        for ratio in [1.5, 4.0, 10.0] {
            let pts = visibility_scan(&ScanSource::Emitters { tau1: 1.0, tau2: ratio }, &[-ratio]).unwrap();
            assert_relative_eq!(pts[0].visibility, 4.0 * (-2.0f64).exp(), max_relative = 1e-12);
        }
    }

    #[test]
    fn emitter_curve_minimum() {
        let s1 = EmitterMode::new(1.0f64, 1.0).unwrap();
        let s2 = EmitterMode::new(3.0, 1.0).unwrap();
        let delays: Vec<f64> = (0..=240).map(|k| -6.0 + 0.1 * k as f64).collect();
        let curve = coincidence_curve(
            &CurveSource::Emitters { source1: s1, source2: s2, mode: EvalMode::Analytic },
            -3.0,
            &delays,
        )
        .unwrap();
        let (imin, rmin) = curve
            .normalized_rate
            .iter()
            .enumerate()
            .fold((0, f64::MAX), |acc, (i, r)| if *r < acc.1 { (i, *r) } else { acc });
        assert!((curve.delays[imin] - 6.0).abs() < 1e-9);
        assert_relative_eq!(rmin, 1.0 - 4.0 * (-2.0f64).exp(), max_relative = 1e-12);
        assert_eq!(curve.metadata.delay_min, Some(6.0));
    }

    #[test]
    fn numeric_spdc_on_separable_amplitude() {
        use crate::spdc::{jsa, JsaGridSpec, JsaKind, SpdcConfig};
        let mut cfg = SpdcConfig::<f64>::kdp_reference();
        cfg.grid = JsaGridSpec::square(160);
        let j = jsa(&cfg, JsaKind::GaussianApprox).unwrap();
        let k = j.constants.k;
        for m in [1.0, 6.0, -6.0] {
            let hom = SpdcInterference::new(&j, m, DelayMode::Formula).unwrap();
            for d in [-0.3, 0.0, 0.2] {
                let a = p_int_spdc_analytic(k, m, 19.0, d);
                let n = hom.p_int(d).unwrap();
                assert!((a - n).abs() <= 1e-2 * a, "M={m} d={d}: {a} vs {n}");
            }
            let opt = SpdcInterference::new(&j, m, DelayMode::Optimize).unwrap();
            assert!((opt.t_d() - hom.t_d()).abs() < 1e-6, "{} vs {}", opt.t_d(), hom.t_d());
        }
    }
}
