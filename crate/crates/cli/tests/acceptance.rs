//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.
//!
//! Run with `cargo test -p zalad-cli --test acceptance`.

use std::process::ExitCode;

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use zalad_cli::output::write_csv;
use zalad_core::filters::cost;
use zalad_core::stats::{ks_one_sample, ks_two_sample};
use zalad_core::*;

const SEED: u64 = 2024;
const STEADY_WINDOW: usize = 500;
const SIGNIFICANCE: f64 = 0.01;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn steady_db(series: &MsdSeries, phase: std::ops::Range<usize>) -> f64 {
    to_db(series.mean_over(phase.end - STEADY_WINDOW..phase.end))
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn central_difference(f: impl Fn(&[f64]) -> f64, w: &[f64], h: f64) -> Vec<f64> {
    (0..w.len())
        .map(|m| {
            let mut plus = w.to_vec();
            let mut minus = w.to_vec();
            plus[m] += h;
            minus[m] -= h;
            (f(&plus) - f(&minus)) / (2.0 * h)
        })
        .collect()
}

fn subgradients() -> Outcome {
    let taps = 16;
    let h = 1e-7;
    let mut rng = TrialSeed::new(SEED, 1).rng();
    let mut worst: f64 = 0.0;
    let mut accepted = 0;
    while accepted < 1000 {
        let w: Vec<f64> = (0..taps).map(|_| rng.random_range(-2.0..2.0)).collect();
        let x: Vec<f64> = (0..taps).map(|_| rng.random_range(-2.0..2.0)).collect();
        let d: f64 = rng.random_range(-5.0..5.0);
        let y: f64 = w.iter().zip(&x).map(|(a, b)| a * b).sum();
        if w.iter().any(|v| v.abs() <= 1e-3) || (d - y).abs() <= 1e-3 {
            continue;
        }
        accepted += 1;
        let alpha: f64 = rng.random_range(1e-3..1.0);
        let eps: f64 = rng.random_range(1e-2..10.0);

        let fd = central_difference(|v| cost::za_lad_cost(v, &x, d, alpha), &w, h);
        let an = cost::za_lad_gradient(&w, &x, d, alpha);
        let diff: Vec<f64> = fd.iter().zip(&an).map(|(a, b)| a - b).collect();
        worst = worst.max(norm(&diff) / norm(&an));

        let fd = central_difference(|v| cost::rza_lad_cost(v, &x, d, alpha, eps), &w, h);
        let an = cost::rza_lad_gradient(&w, &x, d, alpha, eps);
        let diff: Vec<f64> = fd.iter().zip(&an).map(|(a, b)| a - b).collect();
        worst = worst.max(norm(&diff) / norm(&an));
    }
    outcome(
        worst <= 1e-6,
        format!("worst relative error {worst:.3e} over 1000 triples"),
    )
}

fn limit_equivalence() -> Result<Outcome> {
    let mut cfg = make_example(ExampleId::Ex1);
    let rho = FilterParams::reference(Algorithm::ZaLad).rho();
    cfg.filters = vec![
        ConfiguredFilter::reference(Algorithm::ZaLad),
        ConfiguredFilter::new("rza_tiny_eps", FilterParams::new(Algorithm::RzaLad, 5e-3, rho, 1e-12)?),
    ];
    let out = run_trial(&cfg, TrialSeed::new(SEED, 0))?;
    let (za, rza) = (&out.histories[0].weights, &out.histories[1].weights);
    let mut worst: f64 = 0.0;
    for (a, b) in za.iter().zip(rza) {
        for (u, v) in a.iter().zip(b) {
            worst = worst.max((u - v).abs());
        }
    }
    Ok(outcome(
        worst <= 1e-8 && za.len() == 3000,
        format!("max |w_za - w_rza| = {worst:.3e} over {} iterations", za.len()),
    ))
}

fn sampler_validity() -> Result<Outcome> {
    let mut rng = TrialSeed::new(SEED, 3).rng();
    let delta = 0.5;
    let gaussian = NoiseParams::symmetric(2.0, delta)?;
    let mut xs: Vec<f64> = (0..1_000_000).map(|_| sample_stable(&gaussian, &mut rng)).collect();
    let normal = Normal::new(0.0, (2.0 * delta * delta).sqrt()).expect("valid normal");
    let a = ks_one_sample(&mut xs, |x| normal.cdf(x));

    let alpha = 1.2;
    let stable = NoiseParams::symmetric(alpha, 1.0)?;
    let k = 2f64.powf(1.0 / alpha);
    let mut sums: Vec<f64> = (0..100_000)
        .map(|_| (sample_stable(&stable, &mut rng) + sample_stable(&stable, &mut rng)) / k)
        .collect();
    let mut singles: Vec<f64> = (0..100_000).map(|_| sample_stable(&stable, &mut rng)).collect();
    let b = ks_two_sample(&mut sums, &mut singles);

    Ok(outcome(
        a.p_value > SIGNIFICANCE && b.p_value > SIGNIFICANCE,
        format!(
            "alpha=2 vs N(0, 2 delta^2): D={:.2e} p={:.3}; stability at alpha=1.2: D={:.2e} p={:.3}",
            a.statistic, a.p_value, b.statistic, b.p_value
        ),
    ))
}

fn example2_ordering(result: &ExperimentResult) -> Outcome {
    let trajectory = &result.config.trajectory;
    let level =
        |label: &str, k: usize| steady_db(result.series(label).expect("label present"), trajectory.phase_range(k));
    let (lad1, za1, rza1) = (level("lad", 0), level("za_lad", 0), level("rza_lad", 0));
    let phase1 = rza1 <= za1 - 1.0 && rza1 <= lad1 - 1.0;
    let phase3: Vec<f64> = ["lad", "za_lad", "rza_lad"].iter().map(|l| level(l, 2)).collect();
    let spread = phase3.iter().cloned().fold(f64::MIN, f64::max) - phase3.iter().cloned().fold(f64::MAX, f64::min);
    outcome(
        phase1 && spread <= 3.0,
        format!(
            "phase 1 lad {lad1:.2} za {za1:.2} rza {rza1:.2} dB; phase 3 lad {:.2} za {:.2} rza {:.2} dB (spread {spread:.2})",
            phase3[0], phase3[1], phase3[2]
        ),
    )
}

fn lms_non_convergence(result: &ExperimentResult) -> Outcome {
    let phase = result.config.trajectory.phase_range(0);
    let lad_worst = ["lad", "za_lad", "rza_lad"]
        .iter()
        .map(|l| steady_db(result.series(l).expect("label present"), phase.clone()))
        .fold(f64::MIN, f64::max);
    let mut passed = true;
    let mut parts = vec![format!("worst LAD-family {lad_worst:.2} dB")];
    for label in ["lms", "za_lms", "rza_lms"] {
        let s = result.series(label).expect("label present");
        let fraction = result.diverged_fraction(label).unwrap_or(0.0);
        let db = if s.trials > 0 {
            steady_db(s, phase.clone())
        } else {
            f64::INFINITY
        };
        passed &= db >= lad_worst + 10.0 || fraction > 0.1;
        parts.push(format!("{label} {db:.2} dB diverged {:.0}%", 100.0 * fraction));
    }
    outcome(passed, parts.join("; "))
}

/// Iterations until the curve first comes within 3 dB of its final level.
fn time_to_steady(series: &MsdSeries) -> (usize, f64) {
    let n = series.values.len();
    let target = steady_db(series, 0..n);
    let t = series.values_db().position(|v| v <= target + 3.0).unwrap_or(n);
    (t, target)
}

fn epsilon_robustness() -> Result<Outcome> {
    let cfg = make_example(ExampleId::Ex1);
    let result = run_experiment(&cfg, SEED, default_parallelism())?;
    let get = |label: &str| result.series(label).expect("label present");
    let (_, lad) = time_to_steady(get("lad"));
    let (_, za) = time_to_steady(get("za_lad"));

    let mut passed = true;
    let mut parts = vec![format!("lad {lad:.2} dB, za {za:.2} dB")];
    for eps in ["0.01", "0.1", "1"] {
        let (_, db) = time_to_steady(get(&format!("rza_lad_eps{eps}")));
        passed &= db <= lad - 1.0;
        parts.push(format!("eps {eps}: {db:.2} dB"));
    }
    let (_, tiny) = time_to_steady(get("rza_lad_eps0.001"));
    passed &= (tiny - za).abs() <= 1.0;
    parts.push(format!("eps 0.001: {tiny:.2} dB"));
    let (t_small, _) = time_to_steady(get("rza_lad_eps0.01"));
    let (t_large, _) = time_to_steady(get("rza_lad_eps10"));
    passed &= t_large > t_small;
    parts.push(format!("t3dB eps 10 = {t_large}, eps 0.01 = {t_small}"));
    Ok(outcome(passed, parts.join("; ")))
}

fn zero_estimator() -> Result<Outcome> {
    let cfg = make_example(ExampleId::Ex2);
    let trajectory = &cfg.trajectory;
    let history = WeightHistory {
        label: "zero".into(),
        algorithm: Algorithm::Lad,
        stride: 1,
        weights: vec![vec![0.0; cfg.taps()]; cfg.total_iterations()],
    };
    let series = msd_trajectory(&[history], trajectory)?;
    let expected = [1.0, 8.0, 16.0];
    let passed = (0..3).all(|k| {
        series.values[trajectory.phase_range(k)]
            .iter()
            .all(|&v| v == expected[k])
    });
    let seen: Vec<String> = (0..3)
        .map(|k| format!("{}", series.values[trajectory.phase_range(k).start]))
        .collect();
    Ok(outcome(passed, format!("phase MSDs {}", seen.join(", "))))
}

fn csv_bytes(cfg: &ScenarioConfig, parallelism: usize) -> Result<Vec<u8>> {
    let result = run_experiment(cfg, SEED, parallelism)?;
    let mut buf = Vec::new();
    write_csv(&result, &mut buf).expect("writing to memory");
    Ok(buf)
}

fn determinism() -> Result<Outcome> {
    let cfg = make_example(ExampleId::Ex2);
    let first = csv_bytes(&cfg, 1)?;
    let again = csv_bytes(&cfg, 1)?;
    let wide = csv_bytes(&cfg, 8)?;
    Ok(outcome(
        first == again && first == wide,
        format!(
            "{} bytes, repeat identical: {}, 1 vs 8 workers identical: {}",
            first.len(),
            first == again,
            first == wide
        ),
    ))
}

fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    let ex2 = make_example(ExampleId::Ex2);
    let ex2_result = run_experiment(&ex2, SEED, default_parallelism()).expect("example 2 runs");

    let criteria: Vec<(&str, Result<Outcome>)> = vec![
        ("1 subgradient correctness", Ok(subgradients())),
        ("2 ZA/RZA limit equivalence", limit_equivalence()),
        ("3 alpha-stable sampler validity", sampler_validity()),
        ("4 example 2 ordering", Ok(example2_ordering(&ex2_result))),
        ("5 LMS non-convergence", Ok(lms_non_convergence(&ex2_result))),
        ("6 example 1 epsilon robustness", epsilon_robustness()),
        ("7 zero-estimator MSD", zero_estimator()),
        ("8 determinism", determinism()),
    ];

    let mut failures = 0;
    for (name, result) in criteria {
        let o = result.unwrap_or_else(|e| outcome(false, format!("error: {e}")));
        if !o.passed {
            failures += 1;
        }
        println!(
            "{} criterion {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
