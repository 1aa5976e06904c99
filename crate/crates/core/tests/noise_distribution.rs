use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use zalad_core::stats::{ks_one_sample, ks_two_sample};
use zalad_core::{sample_stable, NoiseParams};

const SIGNIFICANCE: f64 = 0.01;

fn draw(params: &NoiseParams, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| sample_stable(params, &mut rng)).collect()
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[(lo + 1).min(sorted.len() - 1)] * frac
}

#[test]
fn alpha_two_is_gaussian_with_variance_two_scale_squared() {
    for (scale, seed) in [(1.0, 1), (0.3, 2)] {
        let params = NoiseParams::symmetric(2.0, scale).unwrap();
        let mut xs = draw(&params, 1_000_000, seed);
        let normal = Normal::new(0.0, (2.0f64).sqrt() * scale).unwrap();
        let r = ks_one_sample(&mut xs, |x| normal.cdf(x));
        assert!(r.p_value > SIGNIFICANCE, "scale {scale}: {r:?}");
    }
}

#[test]
fn alpha_one_is_cauchy() {
    let params = NoiseParams::symmetric(1.0, 1.0).unwrap();
    let mut xs = draw(&params, 1_000_000, 3);
    xs.sort_by(f64::total_cmp);
    let median = quantile(&xs, 0.5);
    let iqr = quantile(&xs, 0.75) - quantile(&xs, 0.25);
    // Cauchy quartiles sit at ±tan(π/4) = ±1.
    assert!(median.abs() < 0.01, "median {median}");
    assert!((iqr - 2.0).abs() < 0.04, "iqr {iqr}");

    let r = ks_one_sample(&mut xs, |x| 0.5 + x.atan() / std::f64::consts::PI);
    assert!(r.p_value > SIGNIFICANCE, "{r:?}");
}

#[test]
fn sums_of_stable_variates_are_stable() {
    let alpha = 1.2;
    let params = NoiseParams::symmetric(alpha, 0.146_78).unwrap();
    let n = 100_000;
    let pairs = draw(&params, 2 * n, 4);
    let norm = 2f64.powf(1.0 / alpha);
    let mut sums: Vec<f64> = pairs.chunks(2).map(|p| (p[0] + p[1]) / norm).collect();
    let mut single = draw(&params, n, 5);
    let r = ks_two_sample(&mut sums, &mut single);
    assert!(r.p_value > SIGNIFICANCE, "{r:?}");
}

#[test]
fn symmetric_law_is_symmetric() {
    let params = NoiseParams::symmetric(1.2, 1.0).unwrap();
    let mut xs = draw(&params, 1_000_000, 6);
    let mut neg: Vec<f64> = xs.iter().map(|x| -x).collect();
    let r = ks_two_sample(&mut xs, &mut neg);
    assert!(r.p_value > SIGNIFICANCE, "{r:?}");
}

#[test]
fn skewed_law_is_not_symmetric() {
    let params = NoiseParams::new(1.5, 1.0, 0.0, 1.0).unwrap();
    let mut xs = draw(&params, 100_000, 7);
    let mut neg: Vec<f64> = xs.iter().map(|x| -x).collect();
    assert!(ks_two_sample(&mut xs, &mut neg).p_value < 1e-6);
}
