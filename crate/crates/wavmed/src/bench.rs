//! Benchmark harness: runs every requested case over every (image, sigma)
//! pair and renders the results as CSV or a markdown table.
//!
//! For each (image, sigma) cell the noise is injected exactly once, with a
//! stream seed derived from `(master_seed, image name, sigma)`, and every
//! case consumes that same noisy realization. Rows are sorted by
//! `(image name, sigma, case)` before rendering, so parallel and sequential
//! execution emit byte-identical reports.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::noise::{add_gaussian_noise, derive_stream_seed, NoiseSpec};
use crate::pipeline::{run_pipeline, CaseId, DenoiseReport, PipelineConfig};
use crate::shrinkage::{estimate_noise_sigma, subband_std, ThresholdRule};
use crate::wavelet::{dwt2, WaveletSpec};

/// Output encoding for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Markdown,
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "markdown",
        })
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::InvalidConfig {
                reason: format!("unknown report format {other:?} (expected csv or markdown)"),
            }),
        }
    }
}

/// One benchmark input: where the file lives and the name used in reports
/// and seed derivation.
#[derive(Debug, Clone)]
pub struct ImageEntry {
    pub name: String,
    pub path: PathBuf,
}

impl ImageEntry {
    /// Entry named after the file stem.
    pub fn from_path(path: PathBuf) -> Self {
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.to_string_lossy().into_owned());
        Self { name, path }
    }
}

/// Full benchmark configuration.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub images: Vec<ImageEntry>,
    pub sigmas: Vec<f64>,
    pub cases: Vec<CaseId>,
    pub master_seed: u64,
    pub wavelet: WaveletSpec,
    pub window: usize,
    pub filter_approx_band: bool,
    pub clip_output: bool,
    pub threshold_rule: ThresholdRule,
    /// When set, noisy and restored images are saved here as PGM.
    pub output_dir: Option<PathBuf>,
    /// Fan tasks out with rayon; results are identical either way.
    pub parallel: bool,
}

impl BenchConfig {
    pub fn new(images: Vec<ImageEntry>) -> Self {
        Self {
            images,
            sigmas: vec![15.0, 20.0, 25.0],
            cases: CaseId::ALL.to_vec(),
            master_seed: 42,
            wavelet: WaveletSpec::default(),
            window: 3,
            filter_approx_band: false,
            clip_output: true,
            threshold_rule: ThresholdRule::default(),
            output_dir: None,
            parallel: true,
        }
    }

    fn validate(&self, allow_zero_sigma: bool) -> Result<()> {
        if self.images.is_empty() {
            return Err(Error::InvalidConfig {
                reason: "at least one image is required".into(),
            });
        }
        if self.sigmas.is_empty() {
            return Err(Error::InvalidConfig {
                reason: "at least one sigma is required".into(),
            });
        }
        for &sigma in &self.sigmas {
            let ok = sigma.is_finite() && (sigma > 0.0 || (allow_zero_sigma && sigma == 0.0));
            if !ok {
                return Err(Error::InvalidConfig {
                    reason: format!("noise sigma must be positive, got {sigma}"),
                });
            }
        }
        if self.cases.is_empty() {
            return Err(Error::InvalidConfig {
                reason: "at least one case is required".into(),
            });
        }
        Ok(())
    }

    fn pipeline_config(&self, case: CaseId) -> PipelineConfig {
        PipelineConfig {
            case,
            wavelet: self.wavelet,
            window: self.window,
            filter_approx_band: self.filter_approx_band,
            clip_output: self.clip_output,
            threshold_rule: self.threshold_rule,
        }
    }

    fn load_images(&self) -> Result<Vec<(String, GrayImage)>> {
        self.images
            .iter()
            .map(|entry| Ok((entry.name.clone(), GrayImage::load_pgm(&entry.path)?)))
            .collect()
    }

    fn noisy_realization(&self, name: &str, original: &GrayImage, sigma: f64) -> Result<GrayImage> {
        let seed = derive_stream_seed(self.master_seed, name, sigma);
        let spec = NoiseSpec::new(0.0, sigma, seed)?;
        Ok(add_gaussian_noise(original, &spec))
    }
}

/// One line of the PSNR benchmark report.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub image: String,
    pub sigma: f64,
    pub case: CaseId,
    pub report: DenoiseReport,
}

/// One line of the noise-estimation report.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub image: String,
    pub sigma: f64,
    pub std_original: f64,
    pub std_noisy: f64,
    pub sigma_hat: f64,
}

/// Run every requested case over every (image, sigma) pair.
pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    cfg.validate(false)?;
    let images = cfg.load_images()?;
    if let Some(dir) = &cfg.output_dir {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.clone(),
            source,
        })?;
    }

    let groups: Vec<(&String, &GrayImage, f64)> = images
        .iter()
        .flat_map(|(name, img)| cfg.sigmas.iter().map(move |&s| (name, img, s)))
        .collect();

    let run_group = |&(name, original, sigma): &(&String, &GrayImage, f64)| -> Result<Vec<BenchRow>> {
        let noisy = cfg.noisy_realization(name, original, sigma)?;
        if let Some(dir) = &cfg.output_dir {
            noisy.save_pgm(dir.join(format!("{name}_s{sigma}_noisy.pgm")))?;
        }
        let mut rows = Vec::with_capacity(cfg.cases.len());
        for &case in &cfg.cases {
            let (restored, mut report) =
                run_pipeline(&noisy, Some(original), &cfg.pipeline_config(case))?;
            report.true_sigma = Some(sigma);
            if let Some(dir) = &cfg.output_dir {
                restored.save_pgm(dir.join(format!("{name}_s{sigma}_{}.pgm", case.slug())))?;
            }
            rows.push(BenchRow {
                image: name.clone(),
                sigma,
                case,
                report,
            });
        }
        Ok(rows)
    };

    let nested: Result<Vec<Vec<BenchRow>>> = if cfg.parallel {
        groups.par_iter().map(run_group).collect()
    } else {
        groups.iter().map(run_group).collect()
    };
    let mut rows: Vec<BenchRow> = nested?.into_iter().flatten().collect();
    sort_bench_rows(&mut rows);
    Ok(rows)
}

/// Per (image, sigma): whole-image standard deviations and the robust
/// median estimate from the noisy image's diagonal band. Accepts sigma = 0
/// so the estimator can be checked against clean inputs.
pub fn run_estimation_table(cfg: &BenchConfig) -> Result<Vec<EstimateRow>> {
    cfg.validate(true)?;
    let images = cfg.load_images()?;

    let groups: Vec<(&String, &GrayImage, f64)> = images
        .iter()
        .flat_map(|(name, img)| cfg.sigmas.iter().map(move |&s| (name, img, s)))
        .collect();

    let run_group = |&(name, original, sigma): &(&String, &GrayImage, f64)| -> Result<EstimateRow> {
        let noisy = cfg.noisy_realization(name, original, sigma)?;
        let bands = dwt2(&noisy, cfg.wavelet);
        Ok(EstimateRow {
            image: name.clone(),
            sigma,
            std_original: subband_std(original.plane()),
            std_noisy: subband_std(noisy.plane()),
            sigma_hat: estimate_noise_sigma(bands.d()),
        })
    };

    let mut rows: Vec<EstimateRow> = if cfg.parallel {
        groups.par_iter().map(run_group).collect::<Result<_>>()?
    } else {
        groups.iter().map(run_group).collect::<Result<_>>()?
    };
    rows.sort_by(|a, b| {
        (a.image.as_str(), a.sigma)
            .partial_cmp(&(b.image.as_str(), b.sigma))
            .expect("sigmas are finite")
    });
    Ok(rows)
}

fn sort_bench_rows(rows: &mut [BenchRow]) {
    rows.sort_by(|a, b| {
        (a.image.as_str(), a.sigma, a.case)
            .partial_cmp(&(b.image.as_str(), b.sigma, b.case))
            .expect("sigmas are finite")
    });
}

const BENCH_COLUMNS: [&str; 9] = [
    "image",
    "sigma",
    "case",
    "estimated_sigma",
    "th_H",
    "th_V",
    "th_D",
    "mse",
    "psnr",
];

const ESTIMATE_COLUMNS: [&str; 5] = ["image", "sigma", "std_original", "std_noisy", "estimated_sigma"];

fn bench_cells(row: &BenchRow) -> [String; 9] {
    let (estimated, th_h, th_v, th_d) = match &row.report.threshold_report {
        Some(tr) => (
            format!("{:.4}", tr.sigma_hat),
            tr.h.threshold.to_string(),
            tr.v.threshold.to_string(),
            tr.d.threshold.to_string(),
        ),
        None => Default::default(),
    };
    [
        row.image.clone(),
        format!("{}", row.sigma),
        row.case.slug().to_string(),
        estimated,
        th_h,
        th_v,
        th_d,
        row.report.mse.map(|m| format!("{m:.4}")).unwrap_or_default(),
        row.report.psnr.map(format_db).unwrap_or_default(),
    ]
}

/// dB values use 4 decimal places; an exact reconstruction renders as inf.
fn format_db(value: f64) -> String {
    if value.is_infinite() {
        "inf".to_string()
    } else {
        format!("{value:.4}")
    }
}

fn estimate_cells(row: &EstimateRow) -> [String; 5] {
    [
        row.image.clone(),
        format!("{}", row.sigma),
        format!("{:.4}", row.std_original),
        format!("{:.4}", row.std_noisy),
        format!("{:.4}", row.sigma_hat),
    ]
}

fn render_table<const N: usize>(
    columns: [&str; N],
    cells: Vec<[String; N]>,
    format: ReportFormat,
) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(&columns.join(","));
            out.push('\n');
            for row in cells {
                out.push_str(&row.join(","));
                out.push('\n');
            }
        }
        ReportFormat::Markdown => {
            out.push_str(&format!("| {} |\n", columns.join(" | ")));
            out.push_str(&format!("|{}\n", " --- |".repeat(N)));
            for row in cells {
                out.push_str(&format!("| {} |\n", row.join(" | ")));
            }
        }
    }
    out
}

/// Render benchmark rows in the requested format.
pub fn render_bench(rows: &[BenchRow], format: ReportFormat) -> String {
    render_table(BENCH_COLUMNS, rows.iter().map(bench_cells).collect(), format)
}

/// Render estimation rows in the requested format.
pub fn render_estimate(rows: &[EstimateRow], format: ReportFormat) -> String {
    render_table(
        ESTIMATE_COLUMNS,
        rows.iter().map(estimate_cells).collect(),
        format,
    )
}
