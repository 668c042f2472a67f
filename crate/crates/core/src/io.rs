//! Plot-ready CSV output. Every table has a one-line header, LF line endings
//! and numbers in C `%.12g` style.

use std::io::{self, Write};

use crate::elements::StageReport;
use crate::envelope::SampledEnvelope;
use crate::hom::{HomCurve, VisibilityPoint};
use crate::real::Real;
use crate::spdc::{JointSpectralAmplitude, PhotonMarginals};

pub const ENVELOPE_HEADER: &str = "t_ps,re,im,intensity";
pub const SPECTRUM_HEADER: &str = "omega_rad_per_ps,re,im,spectral_density";
pub const STAGES_HEADER: &str = "stage,delta_t_ps,delta_omega,energy,chirp_c2";
pub const JSA_HEADER: &str = "omega_rad_per_ps,omega_prime_rad_per_ps,re,im,abs2";
pub const MARGINALS_HEADER: &str = "photon,omega_rad_per_ps,spectral_density";
pub const HOM_CURVE_HEADER: &str = "delay_ps,p_int,normalized_rate";
pub const SCAN_HEADER: &str = "M,visibility,argmax_delay_ps";

/// Formats like C's `printf("%.12g", x)`.
pub fn fmt_g(x: f64) -> String {
    fmt_g_prec(x, 12)
}

pub fn fmt_g_prec(x: f64, precision: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let p = precision.max(1);
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // exponent after rounding to p significant digits
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn g<T: Real>(x: T) -> String {
    fmt_g(x.to_f64_lossy())
}

pub fn write_envelope_csv<T: Real, W: Write>(mut w: W, env: &SampledEnvelope<T>) -> io::Result<()> {
    writeln!(w, "{ENVELOPE_HEADER}")?;
    for (t, z) in env.grid().times().zip(env.samples()) {
        writeln!(w, "{},{},{},{}", g(t), g(z.re), g(z.im), g(z.norm_sqr()))?;
    }
    Ok(())
}

pub fn write_spectrum_csv<T: Real, W: Write>(mut w: W, env: &SampledEnvelope<T>) -> io::Result<()> {
    let spec = env.spectrum();
    let density = spec.density();
    writeln!(w, "{SPECTRUM_HEADER}")?;
    for ((o, z), d) in spec.omegas.iter().zip(&spec.values).zip(&density) {
        writeln!(w, "{},{},{},{}", g(*o), g(z.re), g(z.im), g(*d))?;
    }
    Ok(())
}

/// Stage table; a missing chirp (unfit phase) leaves the field empty.
pub fn write_stages_csv<T: Real, W: Write>(mut w: W, stages: &[StageReport<T>]) -> io::Result<()> {
    writeln!(w, "{STAGES_HEADER}")?;
    for s in stages {
        let chirp = s.chirp_c2.map(g).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{}",
            s.stage,
            g(s.moments.delta_t),
            g(s.moments.delta_omega),
            g(s.moments.energy),
            chirp
        )?;
    }
    Ok(())
}

pub fn write_jsa_csv<T: Real, W: Write>(mut w: W, jsa: &JointSpectralAmplitude<T>) -> io::Result<()> {
    writeln!(w, "{JSA_HEADER}")?;
    for (i, o) in jsa.omega.iter().enumerate() {
        for (j, op) in jsa.omega_prime.iter().enumerate() {
            let z = jsa.at(i, j);
            writeln!(w, "{},{},{},{},{}", g(*o), g(*op), g(z.re), g(z.im), g(z.norm_sqr()))?;
        }
    }
    Ok(())
}

/// Both marginal spectra in one table, tagged `o` and `e`.
pub fn write_marginals_csv<T: Real, W: Write>(mut w: W, m: &PhotonMarginals<T>) -> io::Result<()> {
    writeln!(w, "{MARGINALS_HEADER}")?;
    for (o, s) in m.omega.iter().zip(&m.s_o) {
        writeln!(w, "o,{},{}", g(*o), g(*s))?;
    }
    for (o, s) in m.omega_prime.iter().zip(&m.s_e) {
        writeln!(w, "e,{},{}", g(*o), g(*s))?;
    }
    Ok(())
}

pub fn write_hom_curve_csv<T: Real, W: Write>(mut w: W, curve: &HomCurve<T>) -> io::Result<()> {
    writeln!(w, "{HOM_CURVE_HEADER}")?;
    for ((d, p), r) in curve.delays.iter().zip(&curve.p_int).zip(&curve.normalized_rate) {
        writeln!(w, "{},{},{}", g(*d), g(*p), g(*r))?;
    }
    Ok(())
}

pub fn write_scan_csv<T: Real, W: Write>(mut w: W, points: &[VisibilityPoint<T>]) -> io::Result<()> {
    writeln!(w, "{SCAN_HEADER}")?;
    for p in points {
        writeln!(w, "{},{},{}", g(p.m), g(p.visibility), g(p.argmax_delay))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printf_g_style() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-2.5, "-2.5"),
            (61700.0, "61700"),
            (0.1, "0.1"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (1e-5, "1e-05"),
            (1.5e-7, "1.5e-07"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (999999999999.5, "1e+12"),
            (0.0001, "0.0001"),
            (6.02214076e23, "6.02214076e+23"),
            (-1e100, "-1e+100"),
            (f64::NAN, "nan"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g(x), want, "{x}");
        }
    }
}
