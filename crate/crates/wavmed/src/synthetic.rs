//! Deterministic synthetic test images.
//!
//! The benchmark does not bundle the classic photographs (provenance and
//! licensing of the scans vary), so this module provides five byte-valued
//! patterns with distinct texture: a smooth ramp, hard-edged checkers, ring
//! oscillations, a band-limited wave mix and a flat-block mosaic. They make
//! the full benchmark and property suite runnable offline.

use crate::image::GrayImage;

/// Names of the built-in synthetic images.
pub const NAMES: [&str; 5] = ["gradient", "checker", "rings", "waves", "blocks"];

/// Build one synthetic image by name at the requested size.
pub fn build(name: &str, width: usize, height: usize) -> Option<GrayImage> {
    let f: fn(usize, usize, usize, usize) -> f64 = match name {
        "gradient" => gradient,
        "checker" => checker,
        "rings" => rings,
        "waves" => waves,
        "blocks" => blocks,
        _ => return None,
    };
    let img = GrayImage::from_fn(width, height, |r, c| f(r, c, width, height))
        .expect("synthetic sizes are valid")
        .clip_round();
    Some(img)
}

/// The five standard synthetic images at the benchmark size of 256x256.
pub fn standard_set() -> Vec<(String, GrayImage)> {
    NAMES
        .iter()
        .map(|name| ((*name).to_string(), build(name, 256, 256).unwrap()))
        .collect()
}

fn gradient(r: usize, c: usize, width: usize, height: usize) -> f64 {
    255.0 * (r + c) as f64 / (width + height - 2) as f64
}

fn checker(r: usize, c: usize, _: usize, _: usize) -> f64 {
    let coarse = if (r / 16 + c / 16) % 2 == 0 { 55.0 } else { 200.0 };
    let fine = if (r / 4 + c / 4) % 2 == 0 { -15.0 } else { 15.0 };
    coarse + fine
}

fn rings(r: usize, c: usize, width: usize, height: usize) -> f64 {
    let dy = r as f64 - (height as f64 - 1.0) / 2.0;
    let dx = c as f64 - (width as f64 - 1.0) / 2.0;
    let dist = (dx * dx + dy * dy).sqrt();
    127.5 + 127.5 * (dist / 6.0).sin()
}

fn waves(r: usize, c: usize, _: usize, _: usize) -> f64 {
    use std::f64::consts::TAU;
    let (r, c) = (r as f64, c as f64);
    128.0 + 45.0 * (TAU * r / 32.0).sin() + 35.0 * (TAU * c / 24.0).cos()
        + 25.0 * (TAU * (r + c) / 40.0).sin()
}

fn blocks(r: usize, c: usize, _: usize, _: usize) -> f64 {
    // Knuth-style multiplicative hash of the 32-pixel block coordinates
    let cell = (r / 32) as u64 * 31 + (c / 32) as u64 * 17 + 7;
    f64::from((cell.wrapping_mul(2_654_435_761) >> 24) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_names_build_byte_valued_images() {
        for name in NAMES {
            let img = build(name, 64, 48).unwrap();
            assert_eq!((img.width(), img.height()), (64, 48));
            assert!(img
                .data()
                .iter()
                .all(|&v| (0.0..=255.0).contains(&v) && v == v.trunc()));
        }
    }

    #[test]
    fn unknown_name_is_none() {
        assert!(build("lena", 64, 64).is_none());
    }

    #[test]
    fn standard_set_is_deterministic() {
        let a = standard_set();
        let b = standard_set();
        assert_eq!(a.len(), 5);
        for ((name_a, img_a), (name_b, img_b)) in a.iter().zip(&b) {
            assert_eq!(name_a, name_b);
            assert_eq!(img_a, img_b);
        }
    }
}
