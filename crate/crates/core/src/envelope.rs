//! Sampled complex envelopes on uniform time grids.
//!
//! Conventions used throughout the crate:
//!
//! * time in ps, angular frequency detuning in rad/ps, GDD in ps²;
//! * the envelope is group-delayed, so `t` is measured in the frame moving
//!   with the carrier group velocity and has no absolute clock;
//! * spectra follow `Ã(Ω) = ∫ A(t) exp(iΩt) dt`, so that a component
//!   `exp(-iΩt)` of the envelope sits at positive detuning `Ω`.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::fft;
use crate::real::{lit, Real};

/// Intensity fraction of the peak below which phase is treated as noise.
pub const PHASE_SIGNIFICANCE: f64 = 1e-4;

/// Largest wrapped phase step accepted between neighbouring significant samples.
const UNWRAP_LIMIT: f64 = 0.9 * std::f64::consts::PI;

/// Zero padding used when locating spectral half-maximum crossings.
const SPECTRAL_FWHM_PADDING: usize = 4;

/// Uniform, periodic time grid with `n_points` samples centered on `t_center`.
///
/// Sample `k` sits at `t_center + (k - n/2) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    n_points: usize,
    dt: T,
    t_center: T,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(n_points: usize, dt: T, t_center: T) -> Result<Self> {
        if n_points < 2 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= 2, got {n_points}"
            )));
        }
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::InvalidGrid(format!("dt must be positive, got {dt}")));
        }
        if !t_center.is_finite() {
            return Err(Error::InvalidGrid("t_center must be finite".into()));
        }
        Ok(Self {
            n_points,
            dt,
            t_center,
        })
    }

    /// Grid centered on zero.
    pub fn centered(n_points: usize, dt: T) -> Result<Self> {
        Self::new(n_points, dt, T::zero())
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dt(&self) -> T {
        self.dt
    }

    pub fn t_center(&self) -> T {
        self.t_center
    }

    #[inline]
    pub fn time(&self, k: usize) -> T {
        let offset = T::from_usize_lossy(k) - T::from_usize_lossy(self.n_points / 2);
        self.t_center + offset * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n_points).map(move |k| self.time(k))
    }

    pub fn t_min(&self) -> T {
        self.time(0)
    }

    pub fn t_max(&self) -> T {
        self.time(self.n_points - 1)
    }

    /// Full periodic window `n dt`.
    pub fn window(&self) -> T {
        T::from_usize_lossy(self.n_points) * self.dt
    }

    /// Conjugate frequency step `2π / (n dt)`.
    pub fn d_omega(&self) -> T {
        T::TAU() / self.window()
    }

    /// Half-width of the representable band, `π / dt`.
    pub fn nyquist(&self) -> T {
        T::PI() / self.dt
    }

    /// Angular frequency of the `j`-th bin of the ascending spectrum.
    pub fn omega(&self, j: usize) -> T {
        (T::from_usize_lossy(j) - T::from_usize_lossy(self.n_points / 2)) * self.d_omega()
    }

    /// Grid with every time coordinate multiplied by `factor` (negative allowed).
    pub fn scaled(&self, factor: T) -> Result<Self> {
        Self::new(self.n_points, self.dt * factor.abs(), self.t_center * factor)
    }
}

/// Complex field envelope sampled on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SampledEnvelope<T> {
    grid: TimeGrid<T>,
    samples: Vec<Complex<T>>,
    carrier_offset: T,
}

impl<T: Real> SampledEnvelope<T> {
    pub fn new(grid: TimeGrid<T>, samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::InvalidGrid(format!(
                "{} samples for a grid of {} points",
                samples.len(),
                grid.n_points()
            )));
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("samples", "non-finite sample"));
        }
        Ok(Self {
            grid,
            samples,
            carrier_offset: T::zero(),
        })
    }

    /// Evaluates `f(t)` at every grid point.
    pub fn from_fn(grid: TimeGrid<T>, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let samples = grid.times().map(f).collect();
        Self::new(grid, samples)
    }

    pub fn with_carrier_offset(mut self, offset: T) -> Self {
        self.carrier_offset = offset;
        self
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }

    /// Detuning of the envelope carrier from the reference frequency [rad/ps].
    pub fn carrier_offset(&self) -> T {
        self.carrier_offset
    }

    pub(crate) fn replace_samples(&self, samples: Vec<Complex<T>>) -> Self {
        debug_assert_eq!(samples.len(), self.samples.len());
        Self {
            grid: self.grid,
            samples,
            carrier_offset: self.carrier_offset,
        }
    }

    pub fn intensity(&self) -> Vec<T> {
        self.samples.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `∫|A|² dt` by the trapezoid rule on the periodic grid.
    pub fn energy(&self) -> T {
        self.samples.iter().map(|z| z.norm_sqr()).sum::<T>() * self.grid.dt()
    }

    /// Spectrum on the conjugate grid, ascending in `Ω`.
    pub fn spectrum(&self) -> Spectrum<T> {
        self.spectrum_padded(1)
    }

    /// Spectrum sampled `padding` times finer by zero padding in time.
    pub fn spectrum_padded(&self, padding: usize) -> Spectrum<T> {
        let padding = padding.max(1);
        let n = self.grid.n_points() * padding;
        let dt = self.grid.dt();
        let t0 = self.grid.t_min();
        let d_omega = T::TAU() / (T::from_usize_lossy(n) * dt);

        let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
        buf[..self.samples.len()].copy_from_slice(&self.samples);
        fft::inverse(&mut buf);
        for (k, z) in buf.iter_mut().enumerate() {
            let omega = T::from_isize(fft::signed_index(k, n)).unwrap() * d_omega;
            *z = *z * Complex::from_polar(dt, omega * t0);
        }
        let values = fft::shift(&buf);
        let omegas = (0..n)
            .map(|j| (T::from_usize_lossy(j) - T::from_usize_lossy(n / 2)) * d_omega)
            .collect();
        Spectrum {
            omegas,
            values,
            d_omega,
        }
    }

    /// Rebuilds an envelope from an ascending spectrum on this grid.
    pub fn from_spectrum(grid: TimeGrid<T>, spectrum: &Spectrum<T>) -> Result<Self> {
        let n = grid.n_points();
        if spectrum.values.len() != n {
            return Err(Error::InvalidGrid("spectrum length does not match grid".into()));
        }
        let t0 = grid.t_min();
        let dt = grid.dt();
        let half = n / 2;
        // undo the shift: ascending index j maps to FFT bin (j + n/2) mod n
        let mut buf = vec![Complex::new(T::zero(), T::zero()); n];
        for (j, value) in spectrum.values.iter().enumerate() {
            let k = (j + half) % n;
            let omega = T::from_isize(fft::signed_index(k, n)).unwrap() * grid.d_omega();
            buf[k] = *value * Complex::from_polar(T::one(), -omega * t0);
        }
        fft::forward(&mut buf);
        let scale = T::one() / (T::from_usize_lossy(n) * dt);
        for z in buf.iter_mut() {
            *z = *z * scale;
        }
        Self::new(grid, buf)
    }

    /// Multiplies the spectrum by `transfer(Ω)`; the transfer must be even
    /// in `Ω` or the caller accepts the `e^{iΩt}` sign of `Ω`.
    pub(crate) fn filter_spectrum(&self, transfer: impl Fn(T) -> Complex<T>) -> Self {
        let n = self.grid.n_points();
        let d_omega = self.grid.d_omega();
        let mut buf = self.samples.clone();
        // inverse transform puts +Ω at bin k under the `e^{iΩt}` convention
        fft::inverse(&mut buf);
        for (k, z) in buf.iter_mut().enumerate() {
            let omega = T::from_isize(fft::signed_index(k, n)).unwrap() * d_omega;
            *z = *z * transfer(omega);
        }
        fft::forward(&mut buf);
        let scale = T::one() / T::from_usize_lossy(n);
        for z in buf.iter_mut() {
            *z = *z * scale;
        }
        self.replace_samples(buf)
    }

    /// Cubic (Keys, a = -1/2) interpolation of the envelope at time `t`;
    /// zero outside the sampled window.
    pub fn value_at(&self, t: T) -> Complex<T> {
        let n = self.grid.n_points();
        let x = (t - self.grid.t_min()) / self.grid.dt();
        let zero = Complex::new(T::zero(), T::zero());
        if !x.is_finite() || x < -T::one() || x > T::from_usize_lossy(n) {
            return zero;
        }
        let base = x.floor();
        let frac = x - base;
        let i = base.to_isize().unwrap_or(isize::MIN);
        let fetch = |j: isize| -> Complex<T> {
            if j < 0 || j >= n as isize {
                zero
            } else {
                self.samples[j as usize]
            }
        };
        let (p0, p1, p2, p3) = (fetch(i - 1), fetch(i), fetch(i + 1), fetch(i + 2));
        let half: T = lit(0.5);
        let s = frac;
        let s2 = s * s;
        let s3 = s2 * s;
        let w0 = half * (-s3 + lit::<T>(2.0) * s2 - s);
        let w1 = half * (lit::<T>(3.0) * s3 - lit::<T>(5.0) * s2 + lit(2.0));
        let w2 = half * (lit::<T>(-3.0) * s3 + lit::<T>(4.0) * s2 + s);
        let w3 = half * (s3 - s2);
        p0 * w0 + p1 * w1 + p2 * w2 + p3 * w3
    }

    /// Interpolates this envelope onto another grid.
    pub fn resample(&self, grid: TimeGrid<T>) -> Result<Self> {
        let samples = grid.times().map(|t| self.value_at(t)).collect();
        Ok(Self::new(grid, samples)?.with_carrier_offset(self.carrier_offset))
    }

    /// Moments, widths and energy of the field in time and frequency.
    pub fn measure_moments(&self) -> Result<Moments<T>> {
        let energy = self.energy();
        if !(energy > T::zero()) {
            return Err(Error::ZeroEnergy);
        }
        let intensity = self.intensity();
        let times: Vec<T> = self.grid.times().collect();
        let (t_mean, delta_t) = weighted_mean_std(&times, &intensity);
        let fwhm_t = fwhm(&times, &intensity);

        let spectrum = self.spectrum();
        let density = spectrum.density();
        let (omega_mean, delta_omega) = weighted_mean_std(&spectrum.omegas, &density);
        let fine = self.spectrum_padded(SPECTRAL_FWHM_PADDING);
        let fwhm_omega = fwhm(&fine.omegas, &fine.density());

        Ok(Moments {
            t_mean,
            delta_t,
            fwhm_t,
            omega_mean,
            delta_omega,
            fwhm_omega,
            energy,
        })
    }

    /// Intensity-weighted covariance of time and instantaneous frequency,
    /// `⟨(t - t̄)(Ω_inst - Ω̄)⟩`, with `Ω_inst = -dφ/dt`.
    ///
    /// Under a GDD `D` the temporal variance evolves exactly as
    /// `σ_t² + 2 D cov + D² σ_Ω²`.
    pub fn time_frequency_covariance(&self) -> Result<T> {
        let energy = self.energy();
        if !(energy > T::zero()) {
            return Err(Error::ZeroEnergy);
        }
        // spectral derivative: dA/dt = F^-1[-iΩ Ã]
        let derivative = self.filter_spectrum(|omega| Complex::new(T::zero(), -omega));
        let intensity = self.intensity();
        let times: Vec<T> = self.grid.times().collect();
        let (t_mean, _) = weighted_mean_std(&times, &intensity);
        let dt = self.grid.dt();
        let mut acc = T::zero();
        for ((a, da), t) in self.samples.iter().zip(derivative.samples()).zip(&times) {
            // Im(A* dA/dt) = |A|² dφ/dt
            let flux = (a.conj() * da).im;
            acc = acc + (*t - t_mean) * (-flux);
        }
        Ok(acc * dt / energy)
    }

    /// Third standardized central moment of `|A|²` in time.
    pub fn intensity_skewness(&self) -> Result<T> {
        let intensity = self.intensity();
        let total: T = intensity.iter().copied().sum();
        if !(total > T::zero()) {
            return Err(Error::ZeroEnergy);
        }
        let times: Vec<T> = self.grid.times().collect();
        let (mean, std) = weighted_mean_std(&times, &intensity);
        let m3 = times
            .iter()
            .zip(&intensity)
            .map(|(t, w)| (*t - mean).powi(3) * *w)
            .sum::<T>()
            / total;
        Ok(m3 / std.powi(3))
    }

    /// Quadratic phase coefficient `c2` of `φ ≈ φ₀ + φ₁ t + c2 t²/2`.
    ///
    /// Intensity-weighted least squares over samples with `|A|²` at least
    /// [`PHASE_SIGNIFICANCE`] of the peak. Disjoint significant regions each
    /// get their own constant offset and share the linear and quadratic terms.
    pub fn residual_chirp(&self) -> Result<T> {
        let intensity = self.intensity();
        let peak = intensity.iter().copied().fold(T::zero(), T::max);
        if !(peak > T::zero()) {
            return Err(Error::ZeroEnergy);
        }
        let threshold = peak * lit(PHASE_SIGNIFICANCE);
        let n = self.samples.len();

        // per-segment weighted sums, after unwrapping within each segment
        let mut s_tt = T::zero();
        let mut s_tq = T::zero();
        let mut s_qq = T::zero();
        let mut s_tp = T::zero();
        let mut s_qp = T::zero();

        let mut k = 0;
        while k < n {
            if intensity[k] < threshold {
                k += 1;
                continue;
            }
            let start = k;
            while k < n && intensity[k] >= threshold {
                k += 1;
            }
            let segment = start..k;
            let mut phases = Vec::with_capacity(segment.len());
            let mut prev = self.samples[start].arg();
            phases.push(prev);
            for j in start + 1..k {
                let raw = self.samples[j].arg();
                let step = wrap_phase(raw - prev);
                if step.abs() > lit(UNWRAP_LIMIT) {
                    return Err(Error::PhaseUnwrapFailure {
                        t: self.grid.time(j).to_f64_lossy(),
                        jump: step.to_f64_lossy(),
                    });
                }
                prev = prev + step;
                phases.push(prev);
            }

            let mut w_sum = T::zero();
            let (mut m_t, mut m_q, mut m_p) = (T::zero(), T::zero(), T::zero());
            for (j, phi) in segment.clone().zip(&phases) {
                let t = self.grid.time(j);
                let w = intensity[j];
                w_sum = w_sum + w;
                m_t = m_t + w * t;
                m_q = m_q + w * t * t * lit(0.5);
                m_p = m_p + w * *phi;
            }
            m_t = m_t / w_sum;
            m_q = m_q / w_sum;
            m_p = m_p / w_sum;
            for (j, phi) in segment.zip(&phases) {
                let t = self.grid.time(j);
                let w = intensity[j];
                let x = t - m_t;
                let q = t * t * lit(0.5) - m_q;
                let p = *phi - m_p;
                s_tt = s_tt + w * x * x;
                s_tq = s_tq + w * x * q;
                s_qq = s_qq + w * q * q;
                s_tp = s_tp + w * x * p;
                s_qp = s_qp + w * q * p;
            }
        }

        let det = s_tt * s_qq - s_tq * s_tq;
        if !(det.abs() > T::epsilon() * s_tt * s_qq) {
            return Err(invalid(
                "envelope",
                "significant region too short to fit a quadratic phase",
            ));
        }
        Ok((s_tt * s_qp - s_tq * s_tp) / det)
    }
}

fn wrap_phase<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let mut y = x - tau * (x / tau).floor();
    if y > T::PI() {
        y = y - tau;
    }
    y
}

/// Spectrum sampled on an ascending angular-frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    pub omegas: Vec<T>,
    pub values: Vec<Complex<T>>,
    pub d_omega: T,
}

impl<T: Real> Spectrum<T> {
    pub fn density(&self) -> Vec<T> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `∫|Ã|² dΩ / 2π`, equal to the time-domain energy by Parseval.
    pub fn energy(&self) -> T {
        self.values.iter().map(|z| z.norm_sqr()).sum::<T>() * self.d_omega / T::TAU()
    }
}

/// Output of [`SampledEnvelope::measure_moments`].
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Moments<T> {
    pub t_mean: T,
    pub delta_t: T,
    pub fwhm_t: T,
    pub omega_mean: T,
    pub delta_omega: T,
    pub fwhm_omega: T,
    pub energy: T,
}

pub(crate) fn weighted_mean_std<T: Real>(x: &[T], w: &[T]) -> (T, T) {
    let total: T = w.iter().copied().sum();
    let mean = x.iter().zip(w).map(|(x, w)| *x * *w).sum::<T>() / total;
    let var = x
        .iter()
        .zip(w)
        .map(|(x, w)| (*x - mean) * (*x - mean) * *w)
        .sum::<T>()
        / total;
    (mean, var.max(T::zero()).sqrt())
}

/// Distance between the outermost half-maximum crossings, each located by
/// linear interpolation between the bracketing samples.
pub(crate) fn fwhm<T: Real>(x: &[T], y: &[T]) -> T {
    let peak = y.iter().copied().fold(T::zero(), T::max);
    if !(peak > T::zero()) || x.len() < 2 {
        return T::zero();
    }
    let half = peak * lit(0.5);
    let first = y.iter().position(|v| *v >= half).unwrap();
    let last = y.iter().rposition(|v| *v >= half).unwrap();
    let left = if first == 0 {
        x[0]
    } else {
        let (x0, x1, y0, y1) = (x[first - 1], x[first], y[first - 1], y[first]);
        x0 + (half - y0) * (x1 - x0) / (y1 - y0)
    };
    let right = if last + 1 == y.len() {
        x[last]
    } else {
        let (x0, x1, y0, y1) = (x[last], x[last + 1], y[last], y[last + 1]);
        x0 + (y0 - half) * (x1 - x0) / (y0 - y1)
    };
    right - left
}

/// Transform-limited or linearly chirped Gaussian pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPulseSpec<T> {
    /// Intensity standard deviation [ps].
    pub sigma_t: T,
    /// Center time [ps].
    pub t0: T,
    /// Peak amplitude.
    pub amplitude: T,
    /// Quadratic phase coefficient [rad/ps²].
    pub chirp_c2: T,
}

impl<T: Real> GaussianPulseSpec<T> {
    pub fn transform_limited(sigma_t: T) -> Self {
        Self {
            sigma_t,
            t0: T::zero(),
            amplitude: T::one(),
            chirp_c2: T::zero(),
        }
    }

    /// FWHM duration `2√(2 ln 2) σ_t`.
    pub fn fwhm(&self) -> T {
        fwhm_factor::<T>() * self.sigma_t
    }

    /// Spectral intensity standard deviation of the unchirped pulse, `1/(2σ_t)`.
    pub fn delta_omega0(&self) -> T {
        T::one() / (lit::<T>(2.0) * self.sigma_t)
    }

    pub fn evaluate(&self, t: T) -> Complex<T> {
        let x = t - self.t0;
        let envelope = self.amplitude
            * (-(x * x) / (lit::<T>(4.0) * self.sigma_t * self.sigma_t)).exp();
        Complex::from_polar(envelope, self.chirp_c2 * x * x * lit(0.5))
    }
}

/// `2√(2 ln 2)`, the FWHM of a unit-variance Gaussian.
pub fn fwhm_factor<T: Real>() -> T {
    (lit::<T>(8.0) * T::LN_2()).sqrt()
}

/// Samples a Gaussian pulse after checking the grid can hold it.
pub fn make_gaussian<T: Real>(
    spec: &GaussianPulseSpec<T>,
    grid: TimeGrid<T>,
) -> Result<SampledEnvelope<T>> {
    if !(spec.sigma_t > T::zero()) || !spec.sigma_t.is_finite() {
        return Err(invalid("sigma_t", "must be positive"));
    }
    let margin = lit::<T>(8.0) * spec.sigma_t;
    let left = spec.t0 - margin;
    let right = spec.t0 + margin;
    if left < grid.t_min() || right > grid.t_max() {
        let required = lit::<T>(2.0)
            * ((spec.t0 - grid.t_center()).abs() + margin);
        return Err(Error::WindowTooSmall {
            required: required.to_f64_lossy(),
            available: grid.window().to_f64_lossy(),
        });
    }
    let needed = lit::<T>(4.0)
        * (spec.delta_omega0() + spec.chirp_c2.abs() * lit::<T>(4.0) * spec.sigma_t);
    if grid.nyquist() < needed {
        return Err(Error::AliasingRisk {
            required: needed.to_f64_lossy(),
            nyquist: grid.nyquist().to_f64_lossy(),
        });
    }
    SampledEnvelope::from_fn(grid, |t| spec.evaluate(t))
}

/// Analytic pulse shapes used as test objects and CLI inputs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseShape<T> {
    Gaussian(GaussianPulseSpec<T>),
    /// Exponential decay with amplitude lifetime `2 tau` (intensity lifetime
    /// `tau`), switched on by a logistic step of width `rise` at `t0`.
    Exponential { tau: T, rise: T, t0: T },
    /// Two Gaussians of equal width, the second scaled by `ratio` and
    /// delayed by `separation`, centered on `t0` as a pair.
    DoublePulse {
        sigma_t: T,
        separation: T,
        ratio: T,
        t0: T,
    },
    /// `exp(-((t - t0)/width)^(2 order) / 2)`.
    SuperGaussian { width: T, order: u32, t0: T },
}

impl<T: Real> PulseShape<T> {
    pub fn evaluate(&self, t: T) -> Complex<T> {
        let zero = T::zero();
        match *self {
            PulseShape::Gaussian(spec) => spec.evaluate(t),
            PulseShape::Exponential { tau, rise, t0 } => {
                let x = t - t0;
                let two_tau = lit::<T>(2.0) * tau;
                let value = if x >= zero {
                    (-x / two_tau).exp() / (T::one() + (-x / rise).exp())
                } else {
                    (x / rise - x / two_tau).exp() / ((x / rise).exp() + T::one())
                };
                Complex::new(value, zero)
            }
            PulseShape::DoublePulse {
                sigma_t,
                separation,
                ratio,
                t0,
            } => {
                let g = |c: T| {
                    let x = t - c;
                    (-(x * x) / (lit::<T>(4.0) * sigma_t * sigma_t)).exp()
                };
                let half = separation * lit(0.5);
                Complex::new(g(t0 - half) + ratio * g(t0 + half), zero)
            }
            PulseShape::SuperGaussian { width, order, t0 } => {
                let x = ((t - t0) / width).abs();
                Complex::new((-x.powi(2 * order as i32) * lit(0.5)).exp(), zero)
            }
        }
    }

    /// Samples the shape, requiring the field to have decayed at the window edges.
    pub fn sample(&self, grid: TimeGrid<T>) -> Result<SampledEnvelope<T>> {
        if let PulseShape::Gaussian(spec) = self {
            return make_gaussian(spec, grid);
        }
        self.validate()?;
        let env = SampledEnvelope::from_fn(grid, |t| self.evaluate(t))?;
        let intensity = env.intensity();
        let peak = intensity.iter().copied().fold(T::zero(), T::max);
        if !(peak > T::zero()) {
            return Err(Error::ZeroEnergy);
        }
        let edge = intensity[0].max(intensity[intensity.len() - 1]);
        if edge > peak * lit(1e-12) {
            return Err(Error::WindowTooSmall {
                required: f64::NAN,
                available: grid.window().to_f64_lossy(),
            });
        }
        Ok(env)
    }

    fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: T| {
            if v > T::zero() && v.is_finite() {
                Ok(())
            } else {
                Err(invalid(name, "must be positive"))
            }
        };
        match *self {
            PulseShape::Gaussian(spec) => positive("sigma_t", spec.sigma_t),
            PulseShape::Exponential { tau, rise, .. } => {
                positive("tau", tau)?;
                positive("rise", rise)?;
                if rise >= lit::<T>(2.0) * tau {
                    return Err(invalid("rise", "must be shorter than 2 tau"));
                }
                Ok(())
            }
            PulseShape::DoublePulse {
                sigma_t, separation, ..
            } => {
                positive("sigma_t", sigma_t)?;
                if separation.is_finite() {
                    Ok(())
                } else {
                    Err(invalid("separation", "must be finite"))
                }
            }
            PulseShape::SuperGaussian { width, order, .. } => {
                positive("width", width)?;
                if order == 0 {
                    return Err(invalid("order", "must be at least 1"));
                }
                Ok(())
            }
        }
    }
}

/// Relative L2 distance `‖a − e^{iθ} b‖ / ‖b‖` minimized over the global
/// phase `θ`. Both envelopes must share a grid.
pub fn distance_modulo_phase<T: Real>(a: &SampledEnvelope<T>, b: &SampledEnvelope<T>) -> Result<T> {
    if a.grid().n_points() != b.grid().n_points() {
        return Err(Error::InvalidGrid("envelopes live on different grids".into()));
    }
    let overlap = a
        .samples()
        .iter()
        .zip(b.samples())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + y.conj() * *x);
    let norm_b: T = b.samples().iter().map(|z| z.norm_sqr()).sum();
    if !(norm_b > T::zero()) {
        return Err(Error::ZeroEnergy);
    }
    let rotation = if overlap.norm() > T::zero() {
        overlap / overlap.norm()
    } else {
        Complex::new(T::one(), T::zero())
    };
    let diff: T = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (*x - rotation * *y).norm_sqr())
        .sum();
    Ok((diff / norm_b).sqrt())
}
