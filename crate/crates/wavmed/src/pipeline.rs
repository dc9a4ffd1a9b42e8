//! End-to-end denoising pipelines: the four case variants.
//!
//! All four consume a (possibly noisy) image and produce a restored image
//! plus a [`DenoiseReport`]:
//!
//! * `dwt`: transform, threshold the detail bands, inverse transform.
//! * `mf`: a single spatial median filter, no transform.
//! * `mf-before`: transform, median filter the bands, then estimate and
//!   threshold from the filtered bands, inverse transform.
//! * `mf-after`: transform, estimate and threshold from the raw bands,
//!   median filter the thresholded bands, inverse transform.
//!
//! The median filter inside `mf-before`/`mf-after` touches the detail bands
//! only unless `filter_approx_band` is set.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::median::median_filter;
use crate::metrics;
use crate::plane::Plane;
use crate::shrinkage::{
    compute_threshold, count_zeroed, estimate_noise_sigma, hard_threshold_with, subband_std,
    BandShrinkage, ThresholdReport, ThresholdRule,
};
use crate::wavelet::{dwt2, idwt2, SubbandSet, WaveletSpec};

/// The four pipeline variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CaseId {
    DwtOnly,
    MedianOnly,
    MedianBeforeThreshold,
    MedianAfterThreshold,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [
        CaseId::DwtOnly,
        CaseId::MedianOnly,
        CaseId::MedianBeforeThreshold,
        CaseId::MedianAfterThreshold,
    ];

    /// Short identifier used in reports and on the command line.
    pub fn slug(&self) -> &'static str {
        match self {
            CaseId::DwtOnly => "dwt",
            CaseId::MedianOnly => "mf",
            CaseId::MedianBeforeThreshold => "mf-before",
            CaseId::MedianAfterThreshold => "mf-after",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dwt" => Ok(CaseId::DwtOnly),
            "mf" => Ok(CaseId::MedianOnly),
            "mf-before" => Ok(CaseId::MedianBeforeThreshold),
            "mf-after" => Ok(CaseId::MedianAfterThreshold),
            other => Err(Error::InvalidConfig {
                reason: format!(
                    "unknown case {other:?} (expected dwt, mf, mf-before or mf-after)"
                ),
            }),
        }
    }
}

/// Everything one pipeline run needs besides the images.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub case: CaseId,
    pub wavelet: WaveletSpec,
    /// Median window side length; odd, at least 3.
    pub window: usize,
    /// Also median filter the approximation band in `mf-before`/`mf-after`.
    pub filter_approx_band: bool,
    /// Clip and round the restored image to byte range before returning it
    /// (and before metrics are computed).
    pub clip_output: bool,
    pub threshold_rule: ThresholdRule,
}

impl PipelineConfig {
    pub fn new(case: CaseId) -> Self {
        Self {
            case,
            wavelet: WaveletSpec::default(),
            window: 3,
            filter_approx_band: false,
            clip_output: true,
            threshold_rule: ThresholdRule::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        if self.window % 2 == 0 || self.window < 3 {
            return Err(Error::InvalidConfig {
                reason: format!("median window must be odd and >= 3, got {}", self.window),
            });
        }
        Ok(())
    }
}

/// Outcome record of one pipeline run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DenoiseReport {
    pub case: CaseId,
    /// The injected noise standard deviation, when the caller knows it.
    pub true_sigma: Option<f64>,
    /// Estimation and thresholding details; absent for the `mf` case.
    pub threshold_report: Option<ThresholdReport>,
    /// Fidelity versus the reference image; absent when no reference given.
    pub mse: Option<f64>,
    /// PSNR in dB; `f64::INFINITY` when the restored image is exact.
    pub psnr: Option<f64>,
}

/// Run one denoising case. `original`, when given, must match the noisy
/// image's dimensions and is only used to fill in the report's MSE/PSNR.
pub fn run_pipeline(
    noisy: &GrayImage,
    original: Option<&GrayImage>,
    cfg: &PipelineConfig,
) -> Result<(GrayImage, DenoiseReport)> {
    cfg.validate()?;
    if let Some(original) = original {
        if !original.plane().same_shape(noisy.plane()) {
            return Err(Error::DimensionMismatch {
                left_width: original.width(),
                left_height: original.height(),
                right_width: noisy.width(),
                right_height: noisy.height(),
            });
        }
    }

    let (restored, threshold_report) = match cfg.case {
        CaseId::MedianOnly => {
            let filtered = median_filter(noisy.plane(), cfg.window)?;
            (GrayImage::from_plane(filtered), None)
        }
        CaseId::DwtOnly => {
            let bands = dwt2(noisy, cfg.wavelet);
            let (shrunk, report) = shrink_detail_bands(&bands, cfg.threshold_rule)?;
            (idwt2(&shrunk), Some(report))
        }
        CaseId::MedianBeforeThreshold => {
            let bands = dwt2(noisy, cfg.wavelet);
            let filtered = median_filter_bands(&bands, cfg.window, cfg.filter_approx_band)?;
            let (shrunk, report) = shrink_detail_bands(&filtered, cfg.threshold_rule)?;
            (idwt2(&shrunk), Some(report))
        }
        CaseId::MedianAfterThreshold => {
            let bands = dwt2(noisy, cfg.wavelet);
            let (shrunk, report) = shrink_detail_bands(&bands, cfg.threshold_rule)?;
            let filtered = median_filter_bands(&shrunk, cfg.window, cfg.filter_approx_band)?;
            (idwt2(&filtered), Some(report))
        }
    };

    let restored = if cfg.clip_output {
        restored.clip_round()
    } else {
        restored
    };

    let (mse, psnr) = match original {
        Some(original) => {
            let m = metrics::mse(original, &restored)?;
            (Some(m), Some(metrics::psnr(m)?))
        }
        None => (None, None),
    };

    Ok((
        restored,
        DenoiseReport {
            case: cfg.case,
            true_sigma: None,
            threshold_report,
            mse,
            psnr,
        },
    ))
}

/// Estimate sigma from the diagonal band, then threshold H, V and D each
/// with its own `Th = sigma_hat^2 / sigma_x`. The approximation band passes
/// through untouched.
fn shrink_detail_bands(
    bands: &SubbandSet,
    rule: ThresholdRule,
) -> Result<(SubbandSet, ThresholdReport)> {
    let sigma_hat = estimate_noise_sigma(bands.d());
    let shrink = |band: &Plane| -> Result<(Plane, BandShrinkage)> {
        let sigma_x = subband_std(band);
        let threshold = compute_threshold(sigma_hat, sigma_x)?;
        let out = hard_threshold_with(band, threshold, rule);
        let zeroed = count_zeroed(band, &out);
        Ok((
            out,
            BandShrinkage {
                sigma_x,
                threshold,
                zeroed,
            },
        ))
    };
    let (h, h_stats) = shrink(bands.h())?;
    let (v, v_stats) = shrink(bands.v())?;
    let (d, d_stats) = shrink(bands.d())?;
    let shrunk = bands.with_bands(bands.a().clone(), h, v, d)?;
    Ok((
        shrunk,
        ThresholdReport {
            sigma_hat,
            h: h_stats,
            v: v_stats,
            d: d_stats,
        },
    ))
}

fn median_filter_bands(
    bands: &SubbandSet,
    window: usize,
    include_approx: bool,
) -> Result<SubbandSet> {
    let a = if include_approx {
        median_filter(bands.a(), window)?
    } else {
        bands.a().clone()
    };
    let h = median_filter(bands.h(), window)?;
    let v = median_filter(bands.v(), window)?;
    let d = median_filter(bands.d(), window)?;
    bands.with_bands(a, h, v, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{add_gaussian_noise, NoiseSpec};
    use crate::testutil::SeededRng;
    use crate::wavelet::{Boundary, WaveletFamily};

    fn noisy_image(seed: u64, sigma: f64) -> (GrayImage, GrayImage) {
        let original = SeededRng::new(seed).image(32, 32).clip_round();
        let spec = NoiseSpec::new(0.0, sigma, seed ^ 0xabcd).unwrap();
        let noisy = add_gaussian_noise(&original, &spec);
        (original, noisy)
    }

    #[test]
    fn median_only_on_clean_constant_image() {
        let img = GrayImage::new(8, 8, vec![50.0; 64]).unwrap();
        let cfg = PipelineConfig::new(CaseId::MedianOnly);
        let (restored, report) = run_pipeline(&img, Some(&img), &cfg).unwrap();
        assert_eq!(restored, img);
        assert_eq!(report.mse, Some(0.0));
        assert_eq!(report.psnr, Some(f64::INFINITY));
        assert!(report.threshold_report.is_none());
    }

    #[test]
    fn dwt_only_is_identity_when_estimate_is_zero() {
        // vertical stripes constant on aligned 2x2 quads: every Haar detail
        // coefficient involving noise-free structure is exactly zero in D,
        // so sigma_hat = 0, every threshold is 0 and nothing is zeroed
        let img =
            GrayImage::from_fn(32, 32, |_, c| f64::from(((c / 4) % 5) as u8 * 40)).unwrap();
        let mut cfg = PipelineConfig::new(CaseId::DwtOnly);
        cfg.clip_output = false;
        let (restored, report) = run_pipeline(&img, Some(&img), &cfg).unwrap();
        let tr = report.threshold_report.unwrap();
        assert_eq!(tr.sigma_hat, 0.0);
        for (a, b) in img.data().iter().zip(restored.data()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn median_only_ignores_wavelet_config() {
        let (_, noisy) = noisy_image(3, 10.0);
        let mut cfg = PipelineConfig::new(CaseId::MedianOnly);
        let (first, _) = run_pipeline(&noisy, None, &cfg).unwrap();
        cfg.wavelet = WaveletSpec {
            family: WaveletFamily::Sym4,
            boundary: Boundary::Symmetric,
        };
        let (second, _) = run_pipeline(&noisy, None, &cfg).unwrap();
        assert_eq!(first, second);
    }

    #[test]
    fn all_cases_preserve_dimensions() {
        let mut rng = SeededRng::new(4);
        for (w, h) in [(32, 32), (33, 47), (16, 40)] {
            let img = rng.image(w, h);
            for case in CaseId::ALL {
                let cfg = PipelineConfig::new(case);
                let (restored, _) = run_pipeline(&img, None, &cfg).unwrap();
                assert_eq!((restored.width(), restored.height()), (w, h));
            }
        }
    }

    #[test]
    fn report_is_consistent_with_metrics() {
        let (original, noisy) = noisy_image(5, 15.0);
        for case in CaseId::ALL {
            let cfg = PipelineConfig::new(case);
            let (_, report) = run_pipeline(&noisy, Some(&original), &cfg).unwrap();
            let mse = report.mse.unwrap();
            let psnr = report.psnr.unwrap();
            assert!(mse > 0.0);
            let expect = 10.0 * (255.0 * 255.0 / mse).log10();
            assert!((psnr - expect).abs() < 1e-9);
        }
    }

    #[test]
    fn pipelines_are_deterministic() {
        let (original, noisy) = noisy_image(6, 20.0);
        for case in CaseId::ALL {
            let cfg = PipelineConfig::new(case);
            let (a, ra) = run_pipeline(&noisy, Some(&original), &cfg).unwrap();
            let (b, rb) = run_pipeline(&noisy, Some(&original), &cfg).unwrap();
            assert_eq!(a, b);
            assert_eq!(ra, rb);
        }
    }

    #[test]
    fn case3_estimates_from_filtered_band_case4_from_raw() {
        let (_, noisy) = noisy_image(7, 20.0);
        let dwt_report = run_pipeline(&noisy, None, &PipelineConfig::new(CaseId::DwtOnly))
            .unwrap()
            .1
            .threshold_report
            .unwrap();
        let before_report = run_pipeline(
            &noisy,
            None,
            &PipelineConfig::new(CaseId::MedianBeforeThreshold),
        )
        .unwrap()
        .1
        .threshold_report
        .unwrap();
        let after_report = run_pipeline(
            &noisy,
            None,
            &PipelineConfig::new(CaseId::MedianAfterThreshold),
        )
        .unwrap()
        .1
        .threshold_report
        .unwrap();

        // mf-after thresholds exactly what dwt thresholds
        assert_eq!(after_report, dwt_report);
        // mf-before estimates from the median-filtered diagonal band, which
        // suppresses most of the noise
        assert!(before_report.sigma_hat < dwt_report.sigma_hat);
    }

    #[test]
    fn filter_approx_band_changes_result() {
        let (_, noisy) = noisy_image(8, 20.0);
        let mut cfg = PipelineConfig::new(CaseId::MedianBeforeThreshold);
        let (plain, _) = run_pipeline(&noisy, None, &cfg).unwrap();
        cfg.filter_approx_band = true;
        let (filtered, _) = run_pipeline(&noisy, None, &cfg).unwrap();
        assert_ne!(plain, filtered);
    }

    #[test]
    fn clip_flag_controls_output_range() {
        let (_, noisy) = noisy_image(9, 30.0);
        let mut cfg = PipelineConfig::new(CaseId::DwtOnly);
        let (clipped, _) = run_pipeline(&noisy, None, &cfg).unwrap();
        assert!(clipped
            .data()
            .iter()
            .all(|&v| (0.0..=255.0).contains(&v) && v == v.trunc()));
        cfg.clip_output = false;
        let (raw, _) = run_pipeline(&noisy, None, &cfg).unwrap();
        assert!(raw.data().iter().any(|&v| v != v.trunc()));
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let a = SeededRng::new(10).image(16, 16);
        let b = SeededRng::new(11).image(16, 18);
        let cfg = PipelineConfig::new(CaseId::MedianOnly);
        assert!(matches!(
            run_pipeline(&a, Some(&b), &cfg),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn even_window_rejected() {
        let img = SeededRng::new(12).image(16, 16);
        let mut cfg = PipelineConfig::new(CaseId::MedianOnly);
        cfg.window = 4;
        assert!(matches!(
            run_pipeline(&img, None, &cfg),
            Err(Error::InvalidConfig { .. })
        ));
    }

    #[test]
    fn window_too_large_for_subbands() {
        // 4x4 image has 2x2 bands: the band-level median filter cannot fit
        let img = SeededRng::new(13).image(4, 4);
        let cfg = PipelineConfig::new(CaseId::MedianBeforeThreshold);
        assert!(matches!(
            run_pipeline(&img, None, &cfg),
            Err(Error::InvalidWindow { .. })
        ));
        // while the plain median case still works
        let cfg = PipelineConfig::new(CaseId::MedianOnly);
        assert!(run_pipeline(&img, None, &cfg).is_ok());
    }

    #[test]
    fn denoising_improves_noisy_psnr() {
        let original = GrayImage::from_fn(64, 64, |r, c| {
            120.0 + 60.0 * ((r as f64 / 9.0).sin() * (c as f64 / 7.0).cos())
        })
        .unwrap();
        let spec = NoiseSpec::new(0.0, 20.0, 99).unwrap();
        let noisy = add_gaussian_noise(&original, &spec);
        let base = metrics::psnr(metrics::mse(&original, &noisy.clip_round()).unwrap()).unwrap();
        for case in CaseId::ALL {
            let cfg = PipelineConfig::new(case);
            let (_, report) = run_pipeline(&noisy, Some(&original), &cfg).unwrap();
            let psnr = report.psnr.unwrap();
            assert!(
                psnr > base,
                "{case}: restored {psnr:.2} dB vs noisy {base:.2} dB"
            );
        }
    }
}
