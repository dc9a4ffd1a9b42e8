//! Seeded random data helpers shared by unit tests.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::image::GrayImage;
use crate::plane::Plane;

pub struct SeededRng {
    rng: ChaCha12Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// Uniform draw in [0, 1).
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw in [lo, hi).
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn plane(&mut self, width: usize, height: usize, lo: f64, hi: f64) -> Plane {
        let data = (0..width * height).map(|_| self.uniform(lo, hi)).collect();
        Plane::new(width, height, data).unwrap()
    }

    pub fn image(&mut self, width: usize, height: usize) -> GrayImage {
        let data = (0..width * height).map(|_| self.uniform(0.0, 255.0)).collect();
        GrayImage::new(width, height, data).unwrap()
    }
}
