//! Noise estimation and adaptive hard thresholding of detail bands.
//!
//! The noise standard deviation is estimated from the diagonal (HH) band by
//! the robust median rule `sigma_hat = median(|x|) / 0.6745`. Each detail
//! band gets its own threshold `Th = sigma_hat^2 / sigma_x`, where `sigma_x`
//! is that band's population standard deviation, and is then hard
//! thresholded: coefficients with magnitude below `Th` are zeroed, the rest
//! pass through unchanged. The approximation band is never thresholded.

use std::fmt;

use crate::error::{Error, Result};
use crate::plane::Plane;

/// Median absolute deviation factor of the standard normal distribution.
pub const MAD_FACTOR: f64 = 0.6745;

/// A per-band threshold: either a finite value or the band-kill sentinel
/// produced when the band's standard deviation is zero (the whole band is
/// zeroed downstream).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Value(f64),
    KillBand,
}

impl Threshold {
    pub fn is_band_kill(&self) -> bool {
        matches!(self, Threshold::KillBand)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Value(v) => write!(f, "{v:.4}"),
            Threshold::KillBand => f.write_str("inf"),
        }
    }
}

/// Which comparison drives the hard threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdRule {
    /// Zero a coefficient when `|F| < Th`. Detail coefficients are signed
    /// and symmetric about zero, so this is the default.
    #[default]
    Magnitude,
    /// Zero a coefficient when `F < Th`, comparing the signed value. Kept
    /// as a debug mode; it wipes out every negative detail coefficient.
    SignedLiteral,
}

/// Shrinkage statistics for one detail band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandShrinkage {
    /// Population standard deviation of the band before thresholding.
    pub sigma_x: f64,
    /// Threshold applied to the band.
    pub threshold: Threshold,
    /// Coefficients the rule forced from nonzero to zero.
    pub zeroed: usize,
}

/// Estimation and thresholding summary for one pipeline run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdReport {
    /// Noise standard deviation estimated from the diagonal band.
    pub sigma_hat: f64,
    pub h: BandShrinkage,
    pub v: BandShrinkage,
    pub d: BandShrinkage,
}

/// Robust median estimate of the noise standard deviation from the diagonal
/// band: `median(|x|) / 0.6745`. The median of an even count is the mean of
/// the two middle values.
pub fn estimate_noise_sigma(d_band: &Plane) -> f64 {
    let mut magnitudes: Vec<f64> = d_band.data().iter().map(|v| v.abs()).collect();
    magnitudes.sort_unstable_by(f64::total_cmp);
    let mid = magnitudes.len() / 2;
    let median = if magnitudes.len() % 2 == 0 {
        0.5 * (magnitudes[mid - 1] + magnitudes[mid])
    } else {
        magnitudes[mid]
    };
    median / MAD_FACTOR
}

/// Population standard deviation of a plane (divisor `n`, not `n - 1`).
pub fn subband_std(values: &Plane) -> f64 {
    let n = values.len() as f64;
    let mean = values.data().iter().sum::<f64>() / n;
    let var = values
        .data()
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / n;
    var.sqrt()
}

/// Per-band threshold `Th = sigma_hat^2 / sigma_x`. A zero-variance band
/// yields the band-kill sentinel.
pub fn compute_threshold(sigma_hat: f64, sigma_x: f64) -> Result<Threshold> {
    if sigma_hat < 0.0 || sigma_x < 0.0 || sigma_hat.is_nan() || sigma_x.is_nan() {
        return Err(Error::NegativeThresholdInput { sigma_hat, sigma_x });
    }
    if sigma_x == 0.0 {
        return Ok(Threshold::KillBand);
    }
    Ok(Threshold::Value(sigma_hat * sigma_hat / sigma_x))
}

/// Hard thresholding with the default magnitude rule.
pub fn hard_threshold(band: &Plane, th: Threshold) -> Plane {
    hard_threshold_with(band, th, ThresholdRule::Magnitude)
}

/// Hard thresholding with an explicit comparison rule.
pub fn hard_threshold_with(band: &Plane, th: Threshold, rule: ThresholdRule) -> Plane {
    match th {
        Threshold::KillBand => Plane::from_raw(band.width(), band.height(), vec![0.0; band.len()]),
        Threshold::Value(t) => band.map(|v| {
            let keep = match rule {
                ThresholdRule::Magnitude => v.abs() >= t,
                ThresholdRule::SignedLiteral => v >= t,
            };
            if keep {
                v
            } else {
                0.0
            }
        }),
    }
}

/// Number of coefficients that were nonzero before and zero after.
pub fn count_zeroed(before: &Plane, after: &Plane) -> usize {
    before
        .data()
        .iter()
        .zip(after.data())
        .filter(|(&b, &a)| b != 0.0 && a == 0.0)
        .count()
}
