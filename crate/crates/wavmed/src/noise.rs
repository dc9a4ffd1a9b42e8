//! Seeded additive Gaussian noise and the Gaussian density.
//!
//! Reproducibility contract: normal variates come from the Marsaglia polar
//! transform driven by a ChaCha12 stream cipher, with uniforms built as
//! `(next_u64() >> 11) * 2^-53`. Every step is pinned here, so identical
//! `(image, spec)` inputs produce bit-identical noisy images on every
//! platform and run.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::plane::Plane;

/// Parameters of an additive Gaussian noise source: mean, standard
/// deviation and the PRNG seed of the realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    mean: f64,
    sigma: f64,
    seed: u64,
}

impl NoiseSpec {
    pub fn new(mean: f64, sigma: f64, seed: u64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::InvalidMean { mean });
        }
        if !sigma.is_finite() || sigma < 0.0 {
            return Err(Error::InvalidSigma { sigma });
        }
        Ok(Self { mean, sigma, seed })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// Gaussian probability density `(1/sqrt(2 pi sigma^2)) exp(-(g-m)^2 / (2 sigma^2))`.
///
/// Errors with [`Error::DegenerateSigma`] when `spec.sigma == 0`.
pub fn gaussian_pdf(g: f64, spec: &NoiseSpec) -> Result<f64> {
    if spec.sigma == 0.0 {
        return Err(Error::DegenerateSigma);
    }
    let var = spec.sigma * spec.sigma;
    let z = g - spec.mean;
    Ok((-z * z / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt())
}

/// Add i.i.d. `N(mean, sigma^2)` noise to every pixel.
///
/// The result keeps the input dimensions and is NOT clipped to [0, 255]:
/// clipping would distort the noise distribution, so it is deferred to the
/// pipeline output stage. A pure function of `(img, spec)`.
pub fn add_gaussian_noise(img: &GrayImage, spec: &NoiseSpec) -> GrayImage {
    if spec.sigma == 0.0 {
        // degenerate distribution: the noise is exactly `mean` everywhere
        if spec.mean == 0.0 {
            return img.clone();
        }
        return GrayImage::from_plane(img.plane().map(|v| v + spec.mean));
    }
    let mut source = GaussianSource::new(spec.seed);
    let data = img
        .data()
        .iter()
        .map(|&s| s + spec.mean + spec.sigma * source.next())
        .collect();
    GrayImage::from_plane(Plane::from_raw(img.width(), img.height(), data))
}

/// Derive the per-run stream seed for one `(image, sigma)` benchmark cell
/// from the master seed. SHA-256 of the three values keeps streams
/// independent and makes the derivation order-free, so parallel execution
/// cannot change any realization.
pub fn derive_stream_seed(master_seed: u64, image_name: &str, sigma: f64) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master_seed.to_le_bytes());
    hasher.update(image_name.as_bytes());
    hasher.update(sigma.to_bits().to_le_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest is 32 bytes"))
}

/// Standard normal variates via the Marsaglia polar method.
struct GaussianSource {
    rng: ChaCha12Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in [0, 1) from the top 53 bits of the stream.
    fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.unit() - 1.0;
            let v = 2.0 * self.unit() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let factor = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * factor);
                return u * factor;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mean: f64, sigma: f64, seed: u64) -> NoiseSpec {
        NoiseSpec::new(mean, sigma, seed).unwrap()
    }

    #[test]
    fn pdf_peak_at_mean() {
        // 1/sqrt(2 pi) evaluated independently
        let d = gaussian_pdf(3.0, &spec(3.0, 1.0, 0)).unwrap();
        assert!((d - 0.3989422804014327).abs() < 1e-12);
    }

    #[test]
    fn pdf_symmetric_about_mean() {
        let s = spec(10.0, 4.0, 0);
        let lo = gaussian_pdf(10.0 - 4.0, &s).unwrap();
        let hi = gaussian_pdf(10.0 + 4.0, &s).unwrap();
        assert_eq!(lo, hi);
        assert!(gaussian_pdf(10.0, &s).unwrap() > lo);
    }

    #[test]
    fn pdf_integrates_to_one() {
        // trapezoid quadrature over [m - 8 sigma, m + 8 sigma]
        let s = spec(7.0, 2.5, 0);
        let (a, b) = (7.0 - 8.0 * 2.5, 7.0 + 8.0 * 2.5);
        let n = 20_000;
        let h = (b - a) / n as f64;
        let mut integral = 0.5 * (gaussian_pdf(a, &s).unwrap() + gaussian_pdf(b, &s).unwrap());
        for i in 1..n {
            integral += gaussian_pdf(a + i as f64 * h, &s).unwrap();
        }
        integral *= h;
        assert!((integral - 1.0).abs() < 1e-6, "integral = {integral}");
    }

    #[test]
    fn zero_sigma_pdf_is_error() {
        assert!(matches!(
            gaussian_pdf(0.0, &spec(0.0, 0.0, 0)),
            Err(Error::DegenerateSigma)
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            NoiseSpec::new(0.0, -1.0, 0),
            Err(Error::InvalidSigma { .. })
        ));
        assert!(matches!(
            NoiseSpec::new(f64::NAN, 1.0, 0),
            Err(Error::InvalidMean { .. })
        ));
    }

    #[test]
    fn zero_sigma_noise_is_identity() {
        let img = crate::testutil::SeededRng::new(1).image(8, 8);
        assert_eq!(add_gaussian_noise(&img, &spec(0.0, 0.0, 99)), img);
    }

    #[test]
    fn noise_is_deterministic() {
        let img = crate::testutil::SeededRng::new(2).image(16, 16);
        let s = spec(0.0, 20.0, 1234);
        let a = add_gaussian_noise(&img, &s);
        let b = add_gaussian_noise(&img, &s);
        assert_eq!(a, b);
        let c = add_gaussian_noise(&img, &spec(0.0, 20.0, 1235));
        assert_ne!(a, c);
    }

    #[test]
    fn sample_statistics_match_spec() {
        let img = GrayImage::new(256, 256, vec![128.0; 256 * 256]).unwrap();
        let s = spec(0.0, 20.0, 77);
        let noisy = add_gaussian_noise(&img, &s);
        let deltas: Vec<f64> = noisy
            .data()
            .iter()
            .zip(img.data())
            .map(|(&w, &x)| w - x)
            .collect();
        let n = deltas.len() as f64;
        let mean = deltas.iter().sum::<f64>() / n;
        let std = (deltas.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n).sqrt();
        assert!(mean.abs() < 0.5, "sample mean = {mean}");
        assert!((std - 20.0).abs() < 0.02 * 20.0, "sample std = {std}");
    }

    #[test]
    fn calibration_within_three_standard_errors() {
        // se(mean) = sigma/sqrt(n); se(std) ~ sigma/sqrt(2n)
        let img = GrayImage::new(256, 256, vec![0.0; 65536]).unwrap();
        for seed in [1u64, 2, 3] {
            let s = spec(0.0, 15.0, seed);
            let noisy = add_gaussian_noise(&img, &s);
            let n = 65536.0;
            let mean = noisy.data().iter().sum::<f64>() / n;
            let std =
                (noisy.data().iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n).sqrt();
            assert!(mean.abs() < 3.0 * 15.0 / n.sqrt(), "seed {seed}: mean {mean}");
            assert!(
                (std - 15.0).abs() < 3.0 * 15.0 / (2.0 * n).sqrt(),
                "seed {seed}: std {std}"
            );
        }
    }

    #[test]
    fn mean_shifts_pixels() {
        let img = GrayImage::new(4, 4, vec![10.0; 16]).unwrap();
        let noisy = add_gaussian_noise(&img, &spec(5.0, 0.0, 0));
        assert_eq!(noisy.data(), &[15.0; 16]);
    }

    #[test]
    fn stream_seed_derivation_distinguishes_inputs() {
        let base = derive_stream_seed(42, "lena", 15.0);
        assert_eq!(base, derive_stream_seed(42, "lena", 15.0));
        assert_ne!(base, derive_stream_seed(43, "lena", 15.0));
        assert_ne!(base, derive_stream_seed(42, "lenb", 15.0));
        assert_ne!(base, derive_stream_seed(42, "lena", 20.0));
    }
}
