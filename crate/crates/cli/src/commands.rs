use std::path::Path;

use chronoscope::elements::{propagate_chain, Element};
use chronoscope::envelope::TimeGrid;
use chronoscope::hom::{
    coincidence_curve, visibility_scan, CurveSource, DelayMode, EmitterMode, EvalMode, ScanSource, VisibilityPoint,
};
use chronoscope::io;
use chronoscope::spdc::crystal::wavelength_width;
use chronoscope::spdc::{jsa, photon_marginals, JointSpectralAmplitude, JsaGridSpec, JsaKind, SidelobeFilter, SpdcConfig, UniaxialCrystal};
use chronoscope::telescope::{classify, design_from, fresnel_design, minimal_loss_config, TelescopeDesign};
use serde_json::{json, Value};

use crate::args::{ClassifyArgs, DesignArgs, HomArgs, PropagateArgs, SpdcArgs};
use crate::config::{ghz_to_rad_per_ps, grid_points, parse_pulse, parse_range, rad_per_ps_to_ghz, require};
use crate::error::{CliError, Context};
use crate::output::Run;

const DEFAULT_PULSE_POINTS: usize = 4096;
const DEFAULT_PULSE_STEP: f64 = 0.02;
const DEFAULT_CHIRP_TOLERANCE: f64 = 1e-3;
const DEFAULT_EMITTER_DELAYS: &str = "-20:20:0.05";
const DEFAULT_SPDC_DELAYS: &str = "-0.5:0.5:0.005";

fn design_summary(d: &TelescopeDesign<f64>) -> Value {
    let class = classify(d);
    json!({
        "design": d,
        "classification": class,
        "stage_magnifications": d.stage_magnifications(),
        "chirp_coefficient": d.chirp_coefficient(),
        "total_gdd_modulus_ps2": d.total_gdd_modulus(),
    })
}

pub fn design(a: &DesignArgs, run: &mut Run) -> Result<(), CliError> {
    let m = require(a.m, "M")?;
    let mut report = serde_json::Map::new();
    let design = if a.t0_ps.is_some() || a.bw2_ghz.is_some() {
        let t0 = require(a.t0_ps, "T0-ps")?;
        let bw2 = require(a.bw2_ghz, "bw2-ghz")?;
        let omega_m2 = ghz_to_rad_per_ps(bw2);
        run.derive("bw2_ghz", bw2);
        run.derive("omega_m2_rad_per_ps", omega_m2);
        let fresnel = fresnel_design(t0, m, omega_m2).ctx("telescope")?;
        run.derive("required_bw_1_ghz", rad_per_ps_to_ghz(fresnel.required_bw_1));
        run.derive("required_bw_2_ghz", rad_per_ps_to_ghz(fresnel.required_bw_2));
        println!("Fresnel telescope for T0 = {t0} ps, M = {m}, modulator 2 at {bw2} GHz ({omega_m2:.6} rad/ps)");
        println!("  D_f (minimum)       {} ps^2", io::fmt_g_prec(fresnel.focal_1_min, 6));
        println!("  D_f'                {} ps^2", io::fmt_g_prec(fresnel.focal_2, 6));
        println!("  D_inter             {} ps^2", io::fmt_g_prec(fresnel.inter_gdd, 6));
        println!("  D_out'              {} ps^2", io::fmt_g_prec(fresnel.output_gdd, 6));
        println!(
            "  modulator 1 bw      {} GHz ({} rad/ps)",
            io::fmt_g_prec(rad_per_ps_to_ghz(fresnel.required_bw_1), 6),
            io::fmt_g_prec(fresnel.required_bw_1, 6)
        );
        println!(
            "  modulator 2 bw      {} GHz ({} rad/ps)",
            io::fmt_g_prec(rad_per_ps_to_ghz(fresnel.required_bw_2), 6),
            io::fmt_g_prec(fresnel.required_bw_2, 6)
        );
        println!("  min output FWHM     {} ps", io::fmt_g_prec(fresnel.min_output_fwhm, 6));
        println!("  Fourier M_Omega     {}", io::fmt_g_prec(fresnel.fourier_processor_m_omega, 6));
        report.insert("fresnel_report".into(), json!(fresnel));
        report.insert("fresnel_chain".into(), json!(fresnel.fresnel_chain().ctx("telescope")?));
        fresnel.design().ctx("telescope")?
    } else {
        let d_inter = require(a.d_inter, "D-inter-ps2")?;
        design_from(m, d_inter, a.d_in.unwrap_or(0.0)).ctx("telescope")?
    };
    let class = classify(&design);
    println!(
        "  D_f = {} ps^2, D_f' = {} ps^2, D_in = {} ps^2, D_inter = {} ps^2, D_out' = {} ps^2",
        io::fmt_g_prec(design.focal_1, 6),
        io::fmt_g_prec(design.focal_2, 6),
        io::fmt_g_prec(design.input_gdd, 6),
        io::fmt_g_prec(design.inter_gdd, 6),
        io::fmt_g_prec(design.output_gdd, 6)
    );
    println!("  kind {:?}, spatial counterpart {:?}", class.kind, class.spatial_counterpart);
    if let Value::Object(summary) = design_summary(&design) {
        report.extend(summary);
    }
    report.insert(
        "minimal_loss".into(),
        json!(minimal_loss_config(m, design.inter_gdd).ctx("telescope")?),
    );
    report.insert("chain".into(), json!(design.chain()));
    run.derive("focal_1_ps2", design.focal_1);
    run.derive("focal_2_ps2", design.focal_2);
    run.write_json("design.json", &Value::Object(report))
}

pub fn classify_cmd(a: &ClassifyArgs, run: &mut Run) -> Result<(), CliError> {
    let m = require(a.m, "M")?;
    let d_inter = require(a.d_inter, "D-inter-ps2")?;
    let design = design_from(m, d_inter, a.d_in.unwrap_or(0.0)).ctx("telescope")?;
    let class = classify(&design);
    println!(
        "M = {m}, D_inter = {d_inter} ps^2: {:?}, {}, spatial counterpart {:?}",
        class.kind,
        if class.kind.is_erecting() { "erecting" } else { "inverting" },
        class.spatial_counterpart
    );
    run.write_json("classification.json", &design_summary(&design))
}

fn load_chain(path: &Path) -> Result<Vec<Element<f64>>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read chain {}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("chain {}: {e}", path.display())))?;
    let list = match value {
        Value::Object(mut obj) => obj
            .remove("chain")
            .ok_or_else(|| CliError::config(format!("chain {}: object has no `chain` field", path.display())))?,
        other => other,
    };
    serde_json::from_value(list).map_err(|e| CliError::config(format!("chain {}: {e}", path.display())))
}

pub fn propagate(a: &PropagateArgs, run: &mut Run) -> Result<(), CliError> {
    let chain = load_chain(&require(a.chain.clone(), "chain")?)?;
    let pulse = parse_pulse(&require(a.pulse.clone(), "pulse")?)?;
    let (n, n_from) = grid_points(a.grid_n, DEFAULT_PULSE_POINTS)?;
    let dt = a.dt_ps.unwrap_or(DEFAULT_PULSE_STEP);
    let tolerance = a.chirp_tolerance.unwrap_or(DEFAULT_CHIRP_TOLERANCE);
    run.derive("grid_points", n);
    run.derive("grid_points_from", n_from);
    run.derive("dt_ps", dt);

    let grid = TimeGrid::centered(n, dt).ctx("envelope")?;
    let input = pulse.sample(grid).ctx("envelope")?;
    let result = propagate_chain(&input, &chain).ctx("elements")?;
    let out = &result.output;
    let moments = out.measure_moments().ctx("envelope")?;
    let (verdict, c2, residual) = match out.residual_chirp() {
        Ok(c2) => {
            let residual = c2.abs() * moments.delta_t * moments.delta_t;
            let verdict = if residual <= tolerance { "chirp_free" } else { "chirped" };
            (verdict, Some(c2), Some(residual))
        }
        Err(_) => ("undetermined", None, None),
    };
    println!("{} elements, N = {n}, dt = {dt} ps", chain.len());
    for s in &result.stages {
        println!(
            "  stage {}: dt = {} ps, dOmega = {} rad/ps",
            s.stage,
            io::fmt_g_prec(s.moments.delta_t, 6),
            io::fmt_g_prec(s.moments.delta_omega, 6)
        );
    }
    match c2 {
        Some(c2) => println!(
            "residual chirp c2 = {} rad/ps^2, |c2| dt^2 = {}: {verdict}",
            io::fmt_g_prec(c2, 6),
            io::fmt_g_prec(residual.unwrap_or_default(), 6)
        ),
        None => println!("residual chirp: {verdict} (phase could not be fitted)"),
    }
    run.write("input_envelope.csv", |w| io::write_envelope_csv(w, &input))?;
    run.write("output_envelope.csv", |w| io::write_envelope_csv(w, out))?;
    run.write("output_spectrum.csv", |w| io::write_spectrum_csv(w, out))?;
    run.write("stages.csv", |w| io::write_stages_csv(w, &result.stages))?;
    let max_clip = result
        .stages
        .iter()
        .filter_map(|s| s.aperture_clip_fraction)
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    run.write_json(
        "report.json",
        &json!({
            "verdict": verdict,
            "chirp_c2": c2,
            "residual_phase_rad": residual,
            "chirp_tolerance_rad": tolerance,
            "output_moments": moments,
            "max_aperture_clip_fraction": max_clip,
            "chain": chain,
        }),
    )
}

fn jsa_kind(text: Option<&str>) -> Result<JsaKind, CliError> {
    match text.unwrap_or("exact") {
        "exact" => Ok(JsaKind::Exact),
        "gaussian" | "gaussian_approx" => Ok(JsaKind::GaussianApprox),
        other => Err(CliError::config(format!("unknown jsa-kind `{other}` (exact, gaussian)"))),
    }
}

fn build_jsa(a: &SpdcArgs, run: &mut Run) -> Result<(SpdcConfig<f64>, JointSpectralAmplitude<f64>), CliError> {
    let kind = jsa_kind(a.jsa_kind.as_deref())?;
    let crystal = UniaxialCrystal::bundled(a.crystal.as_deref().unwrap_or("KDP")).ctx("spdc")?;
    let (n, n_from) = grid_points(a.grid_n, chronoscope::spdc::jsa::DEFAULT_GRID_POINTS)?;
    let filter = a.filter.unwrap_or(kind == JsaKind::Exact);
    let reference = SpdcConfig::<f64>::kdp_reference();
    let config = SpdcConfig {
        crystal,
        lambda_p_nm: a.lambda_p_nm.unwrap_or(reference.lambda_p_nm),
        length_mm: a.length_mm.unwrap_or(reference.length_mm),
        theta_p_deg: a.theta_deg,
        pump_sigma: a.pump_sigma.unwrap_or(reference.pump_sigma),
        grid: JsaGridSpec::square(n),
        sidelobe_filter: filter.then(SidelobeFilter::default),
    };
    run.derive("jsa_grid_points", n);
    run.derive("jsa_grid_points_from", n_from);
    run.derive("spdc_config", &config);
    let j = jsa(&config, kind).ctx("spdc")?;
    run.derive("jsa_constants", j.constants);
    Ok((config, j))
}

pub fn jsa_cmd(a: &SpdcArgs, run: &mut Run) -> Result<(), CliError> {
    let (config, j) = build_jsa(a, run)?;
    let pm = config.phase_matching().ctx("spdc")?;
    let m = photon_marginals(&j).ctx("spdc")?;
    // amplitude exp(-Ω²/4Ω_p²) has intensity rms width Ω_p
    let pump_fwhm = (8.0 * std::f64::consts::LN_2).sqrt() * config.pump_sigma;
    println!(
        "phase matching: theta_p = {} deg, tau_e = {} ps",
        io::fmt_g_prec(pm.theta_p_deg, 6),
        io::fmt_g_prec(pm.tau_e, 6)
    );
    println!(
        "marginals: sigma_o = {} rad/ps, sigma_e = {} rad/ps, K = {}",
        io::fmt_g_prec(m.sigma_o, 6),
        io::fmt_g_prec(m.sigma_e, 6),
        io::fmt_g_prec(m.k, 6)
    );
    println!(
        "durations: dt_o = {} ps, dt_e = {} ps, FWHM_o = {} ps, FWHM_e = {} ps",
        io::fmt_g_prec(m.delta_t_o, 6),
        io::fmt_g_prec(m.delta_t_e, 6),
        io::fmt_g_prec(m.fwhm_t_o, 6),
        io::fmt_g_prec(m.fwhm_t_e, 6)
    );
    run.write("jsa.csv", |w| io::write_jsa_csv(w, &j))?;
    run.write("marginals.csv", |w| io::write_marginals_csv(w, &m))?;
    run.write_json(
        "phase_matching.json",
        &json!({
            "kind": j.kind,
            "filtered": j.filtered,
            "phase_matching": pm,
            "constants": j.constants,
            "separability_residual": j.separability_residual(),
            "pump_intensity_fwhm": {
                "rad_per_ps": pump_fwhm,
                "nm_at_pump": wavelength_width(config.lambda_p_nm, pump_fwhm),
                "nm_at_degenerate": wavelength_width(2.0 * config.lambda_p_nm, pump_fwhm),
            },
            "marginals": {
                "sigma_o": m.sigma_o,
                "sigma_e": m.sigma_e,
                "delta_t_o": m.delta_t_o,
                "delta_t_e": m.delta_t_e,
                "fwhm_t_o": m.fwhm_t_o,
                "fwhm_t_e": m.fwhm_t_e,
                "K": m.k,
            },
        }),
    )
}

fn eval_mode(text: Option<&str>) -> Result<EvalMode, CliError> {
    match text.unwrap_or("analytic") {
        "analytic" => Ok(EvalMode::Analytic),
        "numeric" => Ok(EvalMode::Numeric),
        other => Err(CliError::config(format!("unknown mode `{other}` (analytic, numeric)"))),
    }
}

fn delay_mode(text: Option<&str>) -> Result<DelayMode, CliError> {
    match text.unwrap_or("formula") {
        "formula" => Ok(DelayMode::Formula),
        "optimize" => Ok(DelayMode::Optimize),
        other => Err(CliError::config(format!("unknown delay-mode `{other}` (formula, optimize)"))),
    }
}

fn print_scan_peaks(points: &[VisibilityPoint<f64>]) {
    let best = |pos: bool| {
        points
            .iter()
            .filter(|p| (p.m > 0.0) == pos)
            .max_by(|a, b| a.visibility.total_cmp(&b.visibility))
    };
    for (label, p) in [("M > 0", best(true)), ("M < 0", best(false))] {
        if let Some(p) = p {
            println!(
                "  {label}: max V = {} at M = {} (delay {} ps)",
                io::fmt_g_prec(p.visibility, 6),
                io::fmt_g(p.m),
                io::fmt_g_prec(p.argmax_delay, 6)
            );
        }
    }
}

pub fn hom(a: &HomArgs, run: &mut Run) -> Result<(), CliError> {
    let source = require(a.source.clone(), "source")?;
    if a.m.is_none() && a.scan_m.is_none() {
        return Err(CliError::config("hom needs `M` for a curve and/or `scan-M` for a visibility scan"));
    }
    let mode = eval_mode(a.mode.as_deref())?;
    let mut report = serde_json::Map::new();

    let (scan_source, default_delays) = match source.as_str() {
        "emitters" => {
            let tau1 = require(a.tau1, "tau1")?;
            let tau2 = require(a.tau2, "tau2")?;
            (ScanSource::Emitters { tau1, tau2 }, DEFAULT_EMITTER_DELAYS)
        }
        "spdc" => (
            ScanSource::Spdc {
                k: a.k.unwrap_or(6.0),
                omega_p: a.omega_p.unwrap_or(19.0),
            },
            DEFAULT_SPDC_DELAYS,
        ),
        other => return Err(CliError::config(format!("unknown source `{other}` (spdc, emitters)"))),
    };

    if let Some(scan) = &a.scan_m {
        if source == "spdc" && mode == EvalMode::Numeric {
            return Err(CliError::config(
                "visibility scans use the closed forms; drop `mode` = numeric or use `M` for a numeric curve",
            ));
        }
        let ms: Vec<f64> = parse_range(scan, "scan-M")?.into_iter().filter(|m| *m != 0.0).collect();
        if ms.is_empty() {
            return Err(CliError::config("`scan-M` holds no nonzero magnification"));
        }
        let points = visibility_scan(&scan_source, &ms).ctx("hom")?;
        println!("visibility scan over {} magnifications", points.len());
        print_scan_peaks(&points);
        run.write("scan.csv", |w| io::write_scan_csv(w, &points))?;
        report.insert("scan_points".into(), json!(points.len()));
    }

    if let Some(m) = a.m {
        let delays = parse_range(a.delays.as_deref().unwrap_or(default_delays), "delays")?;
        let jsa_holder;
        let curve_source = match (scan_source, mode) {
            (ScanSource::Emitters { tau1, tau2 }, mode) => CurveSource::Emitters {
                source1: EmitterMode::new(tau1, a.mu1.unwrap_or(1.0)).ctx("hom")?,
                source2: EmitterMode::new(tau2, a.mu2.unwrap_or(1.0)).ctx("hom")?,
                mode,
            },
            (ScanSource::Spdc { k, omega_p }, EvalMode::Analytic) => CurveSource::SpdcAnalytic { k, omega_p },
            (ScanSource::Spdc { .. }, EvalMode::Numeric) => {
                jsa_holder = build_jsa(&a.spdc, run)?.1;
                CurveSource::SpdcNumeric {
                    jsa: &jsa_holder,
                    delay_mode: delay_mode(a.delay_mode.as_deref())?,
                }
            }
        };
        let curve = coincidence_curve(&curve_source, m, &delays).ctx("hom")?;
        let at = curve
            .p_int
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(y.1))
            .map(|(i, _)| curve.delays[i])
            .unwrap_or_default();
        println!(
            "coincidence curve at M = {m}: {} delays, max p_int = {} at {} ps",
            delays.len(),
            io::fmt_g_prec(curve.visibility, 6),
            io::fmt_g_prec(at, 6)
        );
        run.write("hom_curve.csv", |w| io::write_hom_curve_csv(w, &curve))?;
        report.insert("curve".into(), json!({ "metadata": curve.metadata, "visibility": curve.visibility, "argmax_delay_ps": at }));
    }
    run.write_json("hom_report.json", &Value::Object(report))
}
