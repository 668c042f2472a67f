use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report. Numeric payloads are stored as
/// `f64` regardless of the scalar type used for the computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time window too small: need {required:.6e} ps, grid offers {available:.6e} ps")]
    WindowTooSmall { required: f64, available: f64 },

    #[error("aliasing risk: field needs {required:.6e} rad/ps, grid Nyquist is {nyquist:.6e} rad/ps")]
    AliasingRisk { required: f64, nyquist: f64 },

    #[error("field carries no energy")]
    ZeroEnergy,

    #[error("phase unwrap failed near t = {t:.6e} ps (jump {jump:.4} rad)")]
    PhaseUnwrapFailure { t: f64, jump: f64 },

    #[error("time lens focal GDD must be finite and nonzero")]
    InvalidLens,

    #[error("input GDD equals the focal GDD ({gdd:.6e} ps^2): image at infinity")]
    FocalDegeneracy { gdd: f64 },

    #[error("input GDD must be nonzero for single-lens imaging")]
    ZeroInputGdd,

    #[error("stage {stage}: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate telescope: {0}")]
    DegenerateMagnification(String),

    #[error(
        "modulator bandwidth {omega_m2:.6e} rad/ps is below the required {required:.6e} rad/ps; \
         smallest feasible magnification is {min_magnification:.6e}"
    )]
    InfeasibleBandwidth {
        omega_m2: f64,
        required: f64,
        min_magnification: f64,
    },

    #[error("wavelength {lambda_nm} nm outside valid range [{min_nm}, {max_nm}] nm")]
    OutOfRangeWavelength { lambda_nm: f64, min_nm: f64, max_nm: f64 },

    #[error("no phase matching angle in (0, 90) deg: mismatch does not change sign")]
    NoPhaseMatching,

    #[error("finite-difference slope unstable: relative change {rel_change:.3e} on step halving")]
    DerivativeUnstable { rel_change: f64 },

    #[error("grid too narrow: {0}")]
    GridTooNarrow(String),

    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    #[error("interference integral has imaginary part {imag:.3e}")]
    NonHermitianResult { imag: f64 },

    #[error("crystal data: {0}")]
    CrystalData(String),
}

impl Error {
    pub(crate) fn at_stage(self, stage: usize) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Stable machine-readable name of the variant (innermost for stage errors).
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::WindowTooSmall { .. } => "WindowTooSmall",
            Error::AliasingRisk { .. } => "AliasingRisk",
            Error::ZeroEnergy => "ZeroEnergy",
            Error::PhaseUnwrapFailure { .. } => "PhaseUnwrapFailure",
            Error::InvalidLens => "InvalidLens",
            Error::FocalDegeneracy { .. } => "FocalDegeneracy",
            Error::ZeroInputGdd => "ZeroInputGDD",
            Error::Stage { source, .. } => source.kind(),
            Error::DegenerateMagnification(_) => "DegenerateMagnification",
            Error::InfeasibleBandwidth { .. } => "InfeasibleBandwidth",
            Error::OutOfRangeWavelength { .. } => "OutOfRangeWavelength",
            Error::NoPhaseMatching => "NoPhaseMatching",
            Error::DerivativeUnstable { .. } => "DerivativeUnstable",
            Error::GridTooNarrow(_) => "GridTooNarrow",
            Error::GridTooCoarse(_) => "GridTooCoarse",
            Error::NonHermitianResult { .. } => "NonHermitianResult",
            Error::CrystalData(_) => "CrystalData",
        }
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
