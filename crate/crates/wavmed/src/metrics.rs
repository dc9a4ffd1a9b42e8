//! Image fidelity metrics: mean squared error and peak signal-to-noise ratio.

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Peak intensity of the 8-bit grayscale images this crate works with.
pub const PEAK: f64 = 255.0;

/// Mean squared error between two images of identical dimensions.
pub fn mse(original: &GrayImage, restored: &GrayImage) -> Result<f64> {
    if !original.plane().same_shape(restored.plane()) {
        return Err(Error::DimensionMismatch {
            left_width: original.width(),
            left_height: original.height(),
            right_width: restored.width(),
            right_height: restored.height(),
        });
    }
    let sum: f64 = original
        .data()
        .iter()
        .zip(restored.data())
        .map(|(&a, &b)| (b - a) * (b - a))
        .sum();
    Ok(sum / original.data().len() as f64)
}

/// PSNR in dB for a given MSE: `10 * log10(255^2 / mse)`.
///
/// An MSE of zero (identical images) yields `f64::INFINITY`; reports render
/// it as `inf`. The peak value is fixed at 255, never inferred from content.
pub fn psnr(mse_value: f64) -> Result<f64> {
    if mse_value < 0.0 || mse_value.is_nan() {
        return Err(Error::NegativeMse { mse: mse_value });
    }
    if mse_value == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PEAK * PEAK / mse_value).log10())
}
