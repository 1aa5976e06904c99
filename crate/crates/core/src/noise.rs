//! Symmetric α-stable and Gaussian noise.
//!
//! Stable variates use the Chambers–Mallows–Stuck transform of one uniform
//! angle and one unit exponential, so every variate consumes exactly two
//! uniform draws from the stream. Gaussian variates use Box–Muller with the
//! same two-draw budget.
//!
//! Parameter names follow the `(alpha, beta, scale, location)` convention with
//! characteristic function
//!
//! ```text
//! φ(u) = exp(i·location·u − scale^α |u|^α [1 − iβ sgn(u) tan(πα/2)])   α ≠ 1
//! ```
//!
//! so `scale^α` is the dispersion.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseParams {
    alpha: f64,
    beta: f64,
    location: f64,
    scale: f64,
}

impl NoiseParams {
    pub fn new(alpha: f64, beta: f64, location: f64, scale: f64) -> Result<Self> {
        validate_alpha(alpha)?;
        if !(beta.is_finite() && (-1.0..=1.0).contains(&beta)) {
            return Err(invalid("beta", format!("must lie in [-1, 1], got {beta}")));
        }
        if !location.is_finite() {
            return Err(invalid("location", format!("must be finite, got {location}")));
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(invalid("scale", format!("must be finite and > 0, got {scale}")));
        }
        Ok(Self {
            alpha,
            beta,
            location,
            scale,
        })
    }

    /// Centered symmetric law, `beta = 0` and `location = 0`.
    pub fn symmetric(alpha: f64, scale: f64) -> Result<Self> {
        Self::new(alpha, 0.0, 0.0, scale)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn location(&self) -> f64 {
        self.location
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `scale^alpha`
    pub fn dispersion(&self) -> f64 {
        self.scale.powf(self.alpha)
    }
}

fn validate_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha <= 2.0 {
        Ok(())
    } else {
        Err(invalid("alpha", format!("must lie in (0, 2], got {alpha}")))
    }
}

/// Target generalized signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GsnrSpec {
    gsnr_db: f64,
    signal_power: f64,
}

impl GsnrSpec {
    pub fn new(gsnr_db: f64, signal_power: f64) -> Result<Self> {
        if !gsnr_db.is_finite() {
            return Err(invalid("gsnr_db", format!("must be finite, got {gsnr_db}")));
        }
        if !(signal_power.is_finite() && signal_power > 0.0) {
            return Err(invalid(
                "signal_power",
                format!("must be finite and > 0, got {signal_power}"),
            ));
        }
        Ok(Self { gsnr_db, signal_power })
    }

    pub fn gsnr_db(&self) -> f64 {
        self.gsnr_db
    }

    pub fn signal_power(&self) -> f64 {
        self.signal_power
    }
}

/// Scale `δ` for which `10·log10(signal_power / δ^α)` equals the requested GSNR.
pub fn calibrate_scale(spec: &GsnrSpec, alpha: f64) -> Result<f64> {
    validate_alpha(alpha)?;
    let dispersion = spec.signal_power / 10f64.powf(spec.gsnr_db / 10.0);
    Ok(dispersion.powf(1.0 / alpha))
}

/// One Stable(alpha, beta, scale, location) variate.
pub fn sample_stable<R: Rng + ?Sized>(params: &NoiseParams, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    let v: f64 = rng.sample(Open01);
    let angle = PI * (u - 0.5);
    let exp = -v.ln();
    stable_from_uniforms(params, angle, exp)
}

fn stable_from_uniforms(p: &NoiseParams, angle: f64, exp: f64) -> f64 {
    let (alpha, beta, scale) = (p.alpha, p.beta, p.scale);
    if alpha == 1.0 {
        let shifted = FRAC_PI_2 + beta * angle;
        let x = (shifted * angle.tan() - beta * (FRAC_PI_2 * exp * angle.cos() / shifted).ln()) / FRAC_PI_2;
        let drift = if beta == 0.0 {
            0.0
        } else {
            beta * scale * scale.ln() / FRAC_PI_2
        };
        return (scale * x + drift) + p.location;
    }
    let x = if beta == 0.0 {
        (alpha * angle).sin() / angle.cos().powf(1.0 / alpha)
            * (((1.0 - alpha) * angle).cos() / exp).powf((1.0 - alpha) / alpha)
    } else {
        let t = beta * (FRAC_PI_2 * alpha).tan();
        let b = t.atan() / alpha;
        let s = (1.0 + t * t).powf(1.0 / (2.0 * alpha));
        s * (alpha * (angle + b)).sin() / angle.cos().powf(1.0 / alpha)
            * ((angle - alpha * (angle + b)).cos() / exp).powf((1.0 - alpha) / alpha)
    };
    scale * x + p.location
}

/// One Gaussian variate. Always consumes two uniform draws.
pub fn sample_gaussian<R: Rng + ?Sized>(mean: f64, variance: f64, rng: &mut R) -> Result<f64> {
    if !(variance.is_finite() && variance >= 0.0) {
        return Err(invalid("variance", format!("must be finite and >= 0, got {variance}")));
    }
    Ok(mean + variance.sqrt() * standard_normal(rng))
}

#[inline]
pub(crate) fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    let v: f64 = rng.sample(Open01);
    (-2.0 * u.ln()).sqrt() * (2.0 * PI * v).cos()
}

/// Additive measurement-noise model of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseSpec {
    /// Stable law with an explicit scale.
    Stable {
        alpha: f64,
        beta: f64,
        location: f64,
        scale: f64,
    },
    /// Centered stable law whose scale is calibrated against the input power.
    StableGsnr {
        alpha: f64,
        beta: f64,
        gsnr_db: f64,
    },
    Gaussian {
        variance: f64,
    },
}

impl NoiseSpec {
    /// Resolves the spec into a concrete sampler. `signal_power` is the
    /// stationary power of the clean input process.
    pub fn resolve(&self, signal_power: f64) -> Result<NoiseSource> {
        match *self {
            NoiseSpec::Stable {
                alpha,
                beta,
                location,
                scale,
            } => Ok(NoiseSource::Stable(NoiseParams::new(alpha, beta, location, scale)?)),
            NoiseSpec::StableGsnr { alpha, beta, gsnr_db } => {
                let scale = calibrate_scale(&GsnrSpec::new(gsnr_db, signal_power)?, alpha)?;
                Ok(NoiseSource::Stable(NoiseParams::new(alpha, beta, 0.0, scale)?))
            }
            NoiseSpec::Gaussian { variance } => {
                if !(variance.is_finite() && variance >= 0.0) {
                    return Err(invalid("variance", format!("must be finite and >= 0, got {variance}")));
                }
                Ok(NoiseSource::Gaussian { variance })
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSource {
    Stable(NoiseParams),
    Gaussian { variance: f64 },
}

impl NoiseSource {
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            NoiseSource::Stable(p) => sample_stable(p, rng),
            NoiseSource::Gaussian { variance } => variance.sqrt() * standard_normal(rng),
        }
    }
}
