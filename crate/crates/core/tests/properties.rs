use proptest::prelude::*;

use chronoscope::elements::{propagate_chain, Element};
use chronoscope::envelope::{distance_modulo_phase, GaussianPulseSpec, PulseShape, SampledEnvelope, TimeGrid};
use chronoscope::hom::{emitter_visibility, p_int_emitter, p_int_spdc_analytic, spdc_visibility, EmitterMode, EvalMode};
use chronoscope::telescope::{classify, design_from};

fn grid() -> TimeGrid<f64> {
    TimeGrid::centered(4096, 0.04).unwrap()
}

fn chirped_gaussian(sigma: f64, t0: f64, c2: f64) -> SampledEnvelope<f64> {
    let spec = GaussianPulseSpec {
        sigma_t: sigma,
        t0,
        amplitude: 1.0,
        chirp_c2: c2,
    };
    PulseShape::Gaussian(spec).sample(grid()).unwrap()
}

fn magnification() -> impl Strategy<Value = f64> {
    prop_oneof![0.5f64..0.9, 1.2f64..2.0, -2.0f64..-0.5]
}

fn apply(env: &SampledEnvelope<f64>, chain: &[Element<f64>]) -> SampledEnvelope<f64> {
    propagate_chain(env, chain).unwrap().output
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_and_unitarity(sigma in 0.6f64..1.5, t0 in -2.0f64..2.0, c2 in -0.3f64..0.3,
                              d1 in -4.0f64..4.0, f in 2.0f64..8.0, d2 in -4.0f64..4.0) {
        let env = chirped_gaussian(sigma, t0, c2);
        let e0 = env.energy();
        prop_assert!(((env.spectrum().energy() - e0) / e0).abs() < 1e-10);
        let out = apply(&env, &[Element::dispersion(d1), Element::lens(f).unwrap(), Element::dispersion(d2)]);
        prop_assert!(((out.energy() - e0) / e0).abs() < 1e-10);
    }

    #[test]
    fn dispersion_composes_additively(sigma in 0.6f64..1.5, d1 in -4.0f64..4.0, d2 in -4.0f64..4.0) {
        let env = chirped_gaussian(sigma, 0.0, 0.0);
        let split = apply(&env, &[Element::dispersion(d1), Element::dispersion(d2)]);
        let joint = apply(&env, &[Element::dispersion(d1 + d2)]);
        prop_assert!(distance_modulo_phase(&split, &joint).unwrap() < 1e-10);
        let back = apply(&env, &[Element::dispersion(d1), Element::dispersion(-d1)]);
        prop_assert!(distance_modulo_phase(&back, &env).unwrap() < 1e-10);
    }

    #[test]
    fn lenses_compose_as_inverse_focal_sum(f1 in prop_oneof![2.0f64..8.0, -8.0f64..-2.0],
                                           f2 in prop_oneof![2.0f64..8.0, -8.0f64..-2.0]) {
        prop_assume!((1.0 / f1 + 1.0 / f2).abs() > 1e-3);
        let env = chirped_gaussian(1.0, 0.3, 0.0);
        let split = apply(&env, &[Element::lens(f1).unwrap(), Element::lens(f2).unwrap()]);
        let joint = apply(&env, &[Element::lens(1.0 / (1.0 / f1 + 1.0 / f2)).unwrap()]);
        prop_assert!(distance_modulo_phase(&split, &joint).unwrap() < 1e-10);
    }

    #[test]
    fn telescope_design_invariants(m in prop_oneof![-10.0f64..-0.1, 0.1f64..0.95, 1.05f64..10.0],
                                   d_inter in prop_oneof![0.5f64..50.0, -50.0f64..-0.5],
                                   d_in in -20.0f64..20.0) {
        let d = design_from(m, d_inter, d_in).unwrap();
        prop_assert!((d.focal_2 + m * d.focal_1).abs() <= 1e-9 * d.focal_1.abs().max(1.0));
        if let Some((m1, m2)) = d.stage_magnifications() {
            prop_assert!((m1 * m2 - m).abs() <= 1e-9 * m.abs());
            // numerator of the chirp coefficient, relative to its terms
            let chirp = d.chirp_coefficient().unwrap() * m1 * m2 * m2 * d.focal_1 * d.focal_2;
            prop_assert!(chirp.abs() <= 1e-9 * d.focal_2.abs());
        }
        let class = classify(&d);
        prop_assert_eq!(class.kind.is_erecting(), m > 0.0);
        prop_assert_eq!(class.has_spatial_counterpart, d_inter > 0.0);
    }

    #[test]
    fn telescope_scales_without_chirp(m in magnification(), sigma in 0.8f64..1.5, t0 in -1.0f64..1.0,
                                      f in prop_oneof![3.0f64..6.0, -6.0f64..-3.0]) {
        let shape = PulseShape::Gaussian(GaussianPulseSpec { sigma_t: sigma, t0, amplitude: 1.0, chirp_c2: 0.0 });
        let env = shape.sample(grid()).unwrap();
        let design = design_from(m, f * (1.0 - m), 0.0).unwrap();
        let out = apply(&env, &design.chain());
        let want = SampledEnvelope::from_fn(grid(), |t| shape.evaluate(t / m) / m.abs().sqrt()).unwrap();
        prop_assert!(distance_modulo_phase(&out, &want).unwrap() < 1e-6);
    }

    #[test]
    fn telescopes_in_series_multiply(m1 in magnification(), m2 in magnification()) {
            let shape = PulseShape::DoublePulse { sigma_t: 0.6, separation: 2.5, ratio: 0.5, t0: 0.0 };
        let grid = TimeGrid::centered(8192, 0.02).unwrap();
        let env = shape.sample(grid).unwrap();
        let mut chain = design_from(m1, 2.0 * (1.0 - m1), 0.0).unwrap().chain();
        chain.extend(design_from(m2, 2.0 * (1.0 - m2), 0.0).unwrap().chain());
        let series = apply(&env, &chain);
        let m = m1 * m2;
        let want = SampledEnvelope::from_fn(grid, |t| shape.evaluate(t / m) / m.abs().sqrt()).unwrap();
        prop_assert!(distance_modulo_phase(&series, &want).unwrap() < 1e-6);
    }

    #[test]
    fn skewness_flips_only_when_inverting(m in magnification()) {
        let shape = PulseShape::Exponential { tau: 1.0, rise: 0.25, t0: -4.0 };
        let env = shape.sample(TimeGrid::centered(16384, 0.02).unwrap()).unwrap();
        let before: f64 = env.intensity_skewness().unwrap();
        let after: f64 = apply(&env, &design_from(m, 4.0 * (1.0 - m), 0.0).unwrap().chain())
            .intensity_skewness()
            .unwrap();
        prop_assert!(before > 0.5);
        prop_assert_eq!(after > 0.0, m > 0.0);
        prop_assert!((after.abs() - before).abs() < 1e-3 * before);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn emitter_overlap_is_a_probability(tau1 in 0.2f64..5.0, tau2 in 0.2f64..5.0,
                                        m in prop_oneof![-5.0f64..-0.2, 0.2f64..5.0], delay in -20.0f64..20.0) {
        let p = p_int_emitter_pair(tau1, tau2, 1.0, 1.0, m, delay, EvalMode::Analytic);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&p), "p = {}", p);
    }

    #[test]
    fn spdc_overlap_is_a_probability(k in 0.5f64..20.0, m in prop_oneof![-20.0f64..-0.1, 0.1f64..20.0],
                                     delay in -2.0f64..2.0) {
        let p = p_int_spdc_analytic(k, m, 19.0, delay);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((spdc_visibility(k, m) - spdc_visibility(k, k * k / m)).abs() < 1e-12);
    }

    #[test]
    fn brightness_cancels(mu1 in 0.01f64..1.0, mu2 in 0.01f64..1.0, m in prop_oneof![-4.0f64..-0.3, 0.3f64..4.0],
                          delay in -4.0f64..8.0) {
        let bright = p_int_emitter_pair(1.0, 2.5, 1.0, 1.0, m, delay, EvalMode::Numeric);
        let dim = p_int_emitter_pair(1.0, 2.5, mu1, mu2, m, delay, EvalMode::Numeric);
        prop_assert!((bright - dim).abs() < 1e-12);
    }

    #[test]
    fn erecting_beats_inverting(tau1 in 0.2f64..3.0, ratio in 1.05f64..20.0) {
        let m = ratio;
        let (erect, _) = emitter_visibility(tau1, ratio * tau1, m);
        let (invert, _) = emitter_visibility(tau1, ratio * tau1, -m);
        prop_assert!(erect > invert);
    }
}

fn p_int_emitter_pair(tau1: f64, tau2: f64, mu1: f64, mu2: f64, m: f64, delay: f64, mode: EvalMode) -> f64 {
    let s1 = EmitterMode::new(tau1, mu1).unwrap();
    let s2 = EmitterMode::new(tau2, mu2).unwrap();
    p_int_emitter(&s1, &s2, m, delay, mode).unwrap()
}
