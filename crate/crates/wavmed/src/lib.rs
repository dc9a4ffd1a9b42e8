//! Grayscale image denoising by median filtering in the wavelet domain.
//!
//! The library decomposes a noisy image with a one-level 2D DWT, estimates
//! the noise level from the diagonal sub-band with the robust median rule,
//! hard thresholds the detail bands with per-band adaptive thresholds, and
//! reconstructs. A 3x3 median filter can run on the image itself or on the
//! sub-bands before or after thresholding, giving four pipeline variants
//! that the benchmark harness compares by MSE/PSNR.
//!
//! ```
//! use wavmed::{
//!     add_gaussian_noise, run_pipeline, CaseId, GrayImage, NoiseSpec, PipelineConfig,
//! };
//!
//! let original = GrayImage::from_fn(64, 64, |r, c| {
//!     128.0 + 80.0 * ((r as f64 / 11.0).sin() * (c as f64 / 13.0).cos())
//! })
//! .unwrap();
//! let noise = NoiseSpec::new(0.0, 15.0, 7).unwrap();
//! let noisy = add_gaussian_noise(&original, &noise);
//!
//! let cfg = PipelineConfig::new(CaseId::MedianBeforeThreshold);
//! let (restored, report) = run_pipeline(&noisy, Some(&original), &cfg).unwrap();
//! assert_eq!(restored.width(), 64);
//! assert!(report.psnr.unwrap() > 20.0);
//! ```

pub mod bench;
pub mod error;
pub mod image;
pub mod median;
pub mod metrics;
pub mod noise;
pub mod pipeline;
pub mod plane;
pub mod shrinkage;
pub mod wavelet;

#[cfg(test)]
pub(crate) mod testutil;

pub use bench::{
    render_bench, render_estimate, run_benchmark, run_estimation_table, BenchConfig, BenchRow,
    EstimateRow, ImageEntry, ReportFormat,
};
pub use error::{Error, Result};
pub use image::GrayImage;
pub use median::median_filter;
pub use metrics::{mse, psnr};
pub use noise::{add_gaussian_noise, derive_stream_seed, gaussian_pdf, NoiseSpec};
pub use pipeline::{run_pipeline, CaseId, DenoiseReport, PipelineConfig};
pub use plane::Plane;
pub use shrinkage::{
    compute_threshold, estimate_noise_sigma, hard_threshold, hard_threshold_with, subband_std,
    BandShrinkage, Threshold, ThresholdReport, ThresholdRule,
};
pub use wavelet::{dwt2, idwt2, Boundary, SubbandSet, WaveletFamily, WaveletSpec};
