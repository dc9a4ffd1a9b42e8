//! Command-line interface: denoise single images, regenerate the PSNR and
//! noise-estimation benchmark tables, or compare two images.
//!
//! Exit codes: 0 success, 1 usage error, 2 I/O or file-format error,
//! 3 domain error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use wavmed::bench::{
    render_bench, render_estimate, run_benchmark, run_estimation_table, BenchConfig, BenchRow,
    ImageEntry, ReportFormat,
};
use wavmed::noise::{add_gaussian_noise, derive_stream_seed, NoiseSpec};
use wavmed::pipeline::{run_pipeline, CaseId, PipelineConfig};
use wavmed::shrinkage::ThresholdRule;
use wavmed::wavelet::{Boundary, WaveletFamily, WaveletSpec};
use wavmed::{metrics, Error, GrayImage};

/// Names of the benchmark images used when `bench`/`estimate` get no
/// positional paths; looked up under images/standard/.
const STANDARD_IMAGES: [&str; 5] = ["lena", "barbara", "camera", "fruits", "butterfly"];

#[derive(Parser)]
#[command(
    name = "wavmed",
    version,
    about = "Grayscale image denoising by median filtering in the wavelet domain"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Denoise one PGM image with one pipeline case.
    Denoise(DenoiseArgs),
    /// Run every case over every (image, sigma) pair and report PSNR.
    Bench(BenchArgs),
    /// Report whole-image stds and the robust noise estimate per (image, sigma).
    Estimate(EstimateArgs),
    /// Print MSE and PSNR between two PGM images.
    Metrics(MetricsArgs),
}

#[derive(Args)]
struct TransformFlags {
    /// Wavelet family: haar, db2, db4 or sym4.
    #[arg(long, default_value = "haar", value_parser = WaveletFamily::from_str)]
    wavelet: WaveletFamily,
    /// Boundary extension: periodic (exact reconstruction) or symmetric.
    #[arg(long, default_value = "periodic", value_parser = Boundary::from_str)]
    boundary: Boundary,
}

#[derive(Args)]
struct PipelineFlags {
    #[command(flatten)]
    transform: TransformFlags,
    /// Median filter window (odd, >= 3).
    #[arg(long, default_value_t = 3)]
    window: usize,
    /// Median filter the approximation band too in mf-before/mf-after.
    #[arg(long)]
    filter_approx: bool,
    /// Skip the final clip-and-round to byte range.
    #[arg(long)]
    no_clip: bool,
    /// Debug: threshold on signed values instead of magnitudes.
    #[arg(long, hide = true)]
    signed_threshold: bool,
}

impl PipelineFlags {
    fn wavelet_spec(&self) -> WaveletSpec {
        WaveletSpec {
            family: self.transform.wavelet,
            boundary: self.transform.boundary,
        }
    }

    fn threshold_rule(&self) -> ThresholdRule {
        if self.signed_threshold {
            ThresholdRule::SignedLiteral
        } else {
            ThresholdRule::Magnitude
        }
    }
}

#[derive(Args)]
struct DenoiseArgs {
    /// Pipeline case: dwt, mf, mf-before or mf-after.
    #[arg(long, default_value = "dwt", value_parser = CaseId::from_str)]
    case: CaseId,
    /// Inject seeded Gaussian noise of this sigma before denoising; the
    /// input then serves as the clean reference for MSE/PSNR.
    #[arg(long)]
    sigma: Option<f64>,
    /// Master seed for noise injection.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Report format: csv or markdown.
    #[arg(long, default_value = "csv", value_parser = ReportFormat::from_str)]
    format: ReportFormat,
    /// Output PGM path (default: <input stem>_denoised.pgm next to the input).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Input PGM image.
    input: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Noise sigmas, comma separated or repeated.
    #[arg(long = "sigma", value_delimiter = ',', default_values_t = [15.0, 20.0, 25.0])]
    sigmas: Vec<f64>,
    /// Cases to run, comma separated or repeated (default: all four).
    #[arg(long = "case", value_delimiter = ',', value_parser = CaseId::from_str)]
    cases: Vec<CaseId>,
    /// Master seed; per-(image, sigma) streams are derived from it.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    pipeline: PipelineFlags,
    /// Report format: csv or markdown.
    #[arg(long, default_value = "csv", value_parser = ReportFormat::from_str)]
    format: ReportFormat,
    /// Directory for noisy/restored images and the report file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Input PGM images (default: the five standard images under
    /// images/standard/).
    images: Vec<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Noise sigmas, comma separated or repeated.
    #[arg(long = "sigma", value_delimiter = ',', default_values_t = [15.0, 20.0, 25.0])]
    sigmas: Vec<f64>,
    /// Master seed; per-(image, sigma) streams are derived from it.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    transform: TransformFlags,
    /// Report format: csv or markdown.
    #[arg(long, default_value = "csv", value_parser = ReportFormat::from_str)]
    format: ReportFormat,
    /// Directory for the report file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Input PGM images (default: the five standard images under
    /// images/standard/).
    images: Vec<PathBuf>,
}

#[derive(Args)]
struct MetricsArgs {
    /// Reference image.
    original: PathBuf,
    /// Image to compare against the reference.
    restored: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Denoise(args) => denoise(args),
        Command::Bench(args) => bench(args),
        Command::Estimate(args) => estimate(args),
        Command::Metrics(args) => metrics_cmd(args),
    }
}

fn denoise(args: DenoiseArgs) -> Result<(), Error> {
    let input = GrayImage::load_pgm(&args.input)?;
    let name = ImageEntry::from_path(args.input.clone()).name;

    let cfg = PipelineConfig {
        case: args.case,
        wavelet: args.pipeline.wavelet_spec(),
        window: args.pipeline.window,
        filter_approx_band: args.pipeline.filter_approx,
        clip_output: !args.pipeline.no_clip,
        threshold_rule: args.pipeline.threshold_rule(),
    };

    let (restored, report) = match args.sigma {
        Some(sigma) => {
            let seed = derive_stream_seed(args.seed, &name, sigma);
            let spec = NoiseSpec::new(0.0, sigma, seed)?;
            let noisy = add_gaussian_noise(&input, &spec);
            let (restored, mut report) = run_pipeline(&noisy, Some(&input), &cfg)?;
            report.true_sigma = Some(sigma);
            (restored, report)
        }
        None => run_pipeline(&input, None, &cfg)?,
    };

    let out_path = args.out.unwrap_or_else(|| {
        args.input
            .with_file_name(format!("{name}_denoised.pgm"))
    });
    restored.save_pgm(&out_path)?;

    let row = BenchRow {
        image: name,
        sigma: args.sigma.unwrap_or(0.0),
        case: args.case,
        report,
    };
    print!("{}", render_bench(&[row], args.format));
    eprintln!("wrote {}", out_path.display());
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Error> {
    let images = resolve_images(args.images)?;
    let mut cfg = BenchConfig::new(images);
    cfg.sigmas = args.sigmas;
    if !args.cases.is_empty() {
        cfg.cases = args.cases;
    }
    cfg.master_seed = args.seed;
    cfg.wavelet = args.pipeline.wavelet_spec();
    cfg.window = args.pipeline.window;
    cfg.filter_approx_band = args.pipeline.filter_approx;
    cfg.clip_output = !args.pipeline.no_clip;
    cfg.threshold_rule = args.pipeline.threshold_rule();
    cfg.output_dir = args.out.clone();

    let rows = run_benchmark(&cfg)?;
    let rendered = render_bench(&rows, args.format);
    print!("{rendered}");
    write_report_file(args.out.as_deref(), args.format, &rendered)
}

fn estimate(args: EstimateArgs) -> Result<(), Error> {
    let images = resolve_images(args.images)?;
    let mut cfg = BenchConfig::new(images);
    cfg.sigmas = args.sigmas;
    cfg.master_seed = args.seed;
    cfg.wavelet = WaveletSpec {
        family: args.transform.wavelet,
        boundary: args.transform.boundary,
    };

    let rows = run_estimation_table(&cfg)?;
    let rendered = render_estimate(&rows, args.format);
    print!("{rendered}");
    write_report_file(args.out.as_deref(), args.format, &rendered)
}

fn metrics_cmd(args: MetricsArgs) -> Result<(), Error> {
    let original = GrayImage::load_pgm(&args.original)?;
    let restored = GrayImage::load_pgm(&args.restored)?;
    let mse = metrics::mse(&original, &restored)?;
    let psnr = metrics::psnr(mse)?;
    if psnr.is_infinite() {
        println!("MSE={mse:.4} PSNR=inf");
    } else {
        println!("MSE={mse:.4} PSNR={psnr:.4}");
    }
    Ok(())
}

/// Use the given paths, or fall back to the five standard images.
fn resolve_images(paths: Vec<PathBuf>) -> Result<Vec<ImageEntry>, Error> {
    if !paths.is_empty() {
        return Ok(paths.into_iter().map(ImageEntry::from_path).collect());
    }
    let entries: Vec<ImageEntry> = STANDARD_IMAGES
        .iter()
        .map(|name| ImageEntry {
            name: (*name).to_string(),
            path: PathBuf::from(format!("images/standard/{name}.pgm")),
        })
        .collect();
    let missing: Vec<&ImageEntry> = entries.iter().filter(|e| !e.path.exists()).collect();
    if missing.is_empty() {
        return Ok(entries);
    }
    Err(Error::InvalidConfig {
        reason: format!(
            "no images given and the standard set is incomplete ({} missing); \
             pass image paths or fetch them with scripts/fetch_standard_images.py",
            missing
                .iter()
                .map(|e| e.path.display().to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    })
}

fn write_report_file(
    dir: Option<&std::path::Path>,
    format: ReportFormat,
    rendered: &str,
) -> Result<(), Error> {
    let Some(dir) = dir else { return Ok(()) };
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let file = dir.join(match format {
        ReportFormat::Csv => "report.csv",
        ReportFormat::Markdown => "report.md",
    });
    std::fs::write(&file, rendered).map_err(|source| Error::Io {
        path: file.clone(),
        source,
    })?;
    eprintln!("wrote {}", file.display());
    Ok(())
}
