use lowfreq::fem::CapacitorConfig;
use lowfreq::stabilize::ScalingVariant;
use lowfreq::timestep::*;
use std::f64::consts::PI;

fn run(variant: ScalingVariant, dt: f64) -> (f64, TransientRun) {
    let cfg = CapacitorConfig::default();
    let fem = cfg.build().unwrap();
    let w = 2.0 * PI * cfg.freq;
    let tc = TransientConfig {
        dt,
        t0: 0.0,
        t_end: 5e-3,
        variant,
        initial: InitialState::Static,
        probes: vec![],
        stride: 1,
    };
    let run = run_transient(&fem, &tc, &|t| (w * t).sin(), |_, _| Ok(())).unwrap();
    (cfg.analytic_displacement(), run)
}

#[test]
fn power_frequency_peak_matches_layered_capacitor() {
    let cfg = CapacitorConfig::default();
    let (sigma1, eps1, eps2) = cfg.scaling_materials();
    let (d, run) = run(ScalingVariant::NonSymMatIV { sigma1, eps1, eps2 }, 1e-3);
    let last = run.history.last().unwrap();
    assert!((last.t - 5e-3).abs() < 1e-15);
    assert!((last.max_d - d).abs() <= 1e-6 * d, "{} vs {d}", last.max_d);
    assert!((last.min_d - d).abs() <= 1e-6 * d, "{} vs {d}", last.min_d);
    assert_eq!(run.history.len(), 6);
}

#[test]
fn scaled_and_unscaled_steps_agree_at_millisecond_steps() {
    let cfg = CapacitorConfig::default();
    let (sigma1, eps1, eps2) = cfg.scaling_materials();
    let (d, orig) = run(ScalingVariant::Original, 1e-3);
    for v in [
        ScalingVariant::SymI,
        ScalingVariant::NonSymII,
        ScalingVariant::SymMatIII { sigma1, eps1, eps2 },
        ScalingVariant::NonSymMatIV { sigma1, eps1, eps2 },
    ] {
        let (_, other) = run(v, 1e-3);
        for (a, b) in other.history.iter().zip(&orig.history) {
            assert!((a.max_d - b.max_d).abs() <= 1e-8 * d, "{}", v.name());
        }
    }
}
