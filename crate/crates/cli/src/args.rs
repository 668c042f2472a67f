//! Command-line and config-file arguments.
//!
//! Every per-command struct doubles as the config-file schema: keys in the
//! JSON file are the long flag names. Flags override the file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "chronoscope", version, about = "Time-lens telescope design, pulse propagation and two-photon interference")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory (created if missing) [default: out]
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON config file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a two-lens telescope; with --T0-ps and --bw2-ghz, size it for Fresnel lenses
    #[command(allow_negative_numbers = true)]
    Design(DesignArgs),
    /// Classify a telescope by magnification and inter-lens GDD
    #[command(allow_negative_numbers = true)]
    Classify(ClassifyArgs),
    /// Propagate a pulse through an element chain
    #[command(allow_negative_numbers = true)]
    Propagate(PropagateArgs),
    /// Phase matching and joint spectral amplitude of type-II SPDC
    #[command(allow_negative_numbers = true)]
    Jsa(JsaArgs),
    /// Two-photon interference curves and visibility scans
    #[command(allow_negative_numbers = true)]
    Hom(HomArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Design(_) => "design",
            Command::Classify(_) => "classify",
            Command::Propagate(_) => "propagate",
            Command::Jsa(_) => "jsa",
            Command::Hom(_) => "hom",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct DesignArgs {
    /// Telescope magnification M
    #[arg(long = "M")]
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Input pulse FWHM [ps] (Fresnel sizing)
    #[arg(long = "T0-ps")]
    #[serde(rename = "T0-ps", skip_serializing_if = "Option::is_none")]
    pub t0_ps: Option<f64>,
    /// Second modulator bandwidth [GHz] (Fresnel sizing)
    #[arg(long = "bw2-ghz")]
    #[serde(rename = "bw2-ghz", skip_serializing_if = "Option::is_none")]
    pub bw2_ghz: Option<f64>,
    /// Inter-lens GDD [ps^2] (direct design)
    #[arg(long = "D-inter-ps2")]
    #[serde(rename = "D-inter-ps2", skip_serializing_if = "Option::is_none")]
    pub d_inter: Option<f64>,
    /// Input GDD [ps^2] (direct design) [default: 0]
    #[arg(long = "D-in-ps2")]
    #[serde(rename = "D-in-ps2", skip_serializing_if = "Option::is_none")]
    pub d_in: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct ClassifyArgs {
    #[arg(long = "M")]
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Inter-lens GDD [ps^2]
    #[arg(long = "D-inter-ps2")]
    #[serde(rename = "D-inter-ps2", skip_serializing_if = "Option::is_none")]
    pub d_inter: Option<f64>,
    /// Input GDD [ps^2] [default: 0]
    #[arg(long = "D-in-ps2")]
    #[serde(rename = "D-in-ps2", skip_serializing_if = "Option::is_none")]
    pub d_in: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct PropagateArgs {
    /// Element chain JSON: an array, or an object with a "chain" field (as written by `design`)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain: Option<PathBuf>,
    /// Input pulse, e.g. gauss:sigma_t=1 | exp:tau=1,rise=0.1 | double:sigma_t=0.5,separation=3 | supergauss:width=1,order=3
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulse: Option<String>,
    /// Grid points [default: CHRONOSCOPE_GRID_N or 4096]
    #[arg(long = "grid-n")]
    #[serde(rename = "grid-n", skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    /// Grid step [ps] [default: 0.02]
    #[arg(long = "dt-ps")]
    #[serde(rename = "dt-ps", skip_serializing_if = "Option::is_none")]
    pub dt_ps: Option<f64>,
    /// Residual phase (|c2| dt^2, rad) below which the output counts as chirp-free [default: 1e-3]
    #[arg(long = "chirp-tolerance")]
    #[serde(rename = "chirp-tolerance", skip_serializing_if = "Option::is_none")]
    pub chirp_tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct SpdcArgs {
    /// Bundled crystal [default: KDP]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crystal: Option<String>,
    /// Pump wavelength [nm] [default: 415]
    #[arg(long = "lambda-p-nm")]
    #[serde(rename = "lambda-p-nm", skip_serializing_if = "Option::is_none")]
    pub lambda_p_nm: Option<f64>,
    /// Crystal length [mm] [default: 5]
    #[arg(long = "length-mm")]
    #[serde(rename = "length-mm", skip_serializing_if = "Option::is_none")]
    pub length_mm: Option<f64>,
    /// Propagation angle [deg]; solved from phase matching when absent
    #[arg(long = "theta-deg")]
    #[serde(rename = "theta-deg", skip_serializing_if = "Option::is_none")]
    pub theta_deg: Option<f64>,
    /// Pump amplitude width [rad/ps] [default: 19]
    #[arg(long = "pump-sigma")]
    #[serde(rename = "pump-sigma", skip_serializing_if = "Option::is_none")]
    pub pump_sigma: Option<f64>,
    /// JSA model: exact | gaussian [default: exact]
    #[arg(long = "jsa-kind")]
    #[serde(rename = "jsa-kind", skip_serializing_if = "Option::is_none")]
    pub jsa_kind: Option<String>,
    /// Grid points per JSA axis [default: CHRONOSCOPE_GRID_N or 512]
    #[arg(long = "grid-n")]
    #[serde(rename = "grid-n", skip_serializing_if = "Option::is_none")]
    pub grid_n: Option<usize>,
    /// Apply the sinc sidelobe filter [default: true for exact, false for gaussian]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<bool>,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct JsaArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub spdc: SpdcArgs,
}

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
pub struct HomArgs {
    /// spdc | emitters
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    /// Magnification for a coincidence curve
    #[arg(long = "M")]
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Delay range start:stop:step [ps] for the curve
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delays: Option<String>,
    /// Magnification range start:stop:step for a visibility scan (M = 0 is skipped)
    #[arg(long = "scan-M", allow_hyphen_values = true)]
    #[serde(rename = "scan-M", skip_serializing_if = "Option::is_none")]
    pub scan_m: Option<String>,
    /// Emitter intensity lifetime [ps]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau2: Option<f64>,
    /// Emitter brightness [default: 1]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu2: Option<f64>,
    /// analytic | numeric [default: analytic]
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Schmidt number for the closed-form SPDC model [default: 6]
    #[arg(long = "K")]
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    /// Pump amplitude width [rad/ps] for the closed-form SPDC model [default: 19]
    #[arg(long = "omega-p")]
    #[serde(rename = "omega-p", skip_serializing_if = "Option::is_none")]
    pub omega_p: Option<f64>,
    /// Delay compensation for numeric SPDC curves: formula | optimize [default: formula]
    #[arg(long = "delay-mode")]
    #[serde(rename = "delay-mode", skip_serializing_if = "Option::is_none")]
    pub delay_mode: Option<String>,
    #[command(flatten)]
    #[serde(flatten)]
    pub spdc: SpdcArgs,
}
