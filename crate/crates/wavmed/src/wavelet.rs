//! One-level separable 2D discrete wavelet transform and its inverse.
//!
//! Analysis correlates each row with the low-pass and high-pass filters at
//! even offsets (`a[k] = sum_j lo[j] * x[2k + j]`), then does the same down
//! each column of the two half-width results. Synthesis is the adjoint
//! scatter, which is the exact inverse for orthonormal filters under
//! periodic extension.
//!
//! Band orientation: `H` holds row-lowpass / column-highpass coefficients,
//! `V` row-highpass / column-lowpass, `D` highpass in both directions
//! (the HH band), `A` lowpass in both.
//!
//! Boundary modes: `periodic` wraps indices; the analysis operator is then
//! orthogonal and the adjoint reconstructs exactly (and preserves energy).
//! `symmetric` reflects indices (half-sample); that folds uneven weight
//! onto positions near the borders, which synthesis undoes by solving the
//! small boundary Gram system. The folded system is mildly ill-conditioned,
//! so symmetric reconstruction is near-exact (about 1e-8 on byte-range
//! images) rather than bit-exact, and energy is preserved only in periodic
//! mode. Images with an odd dimension are symmetric-padded by one row or
//! column before analysis; the pad is cropped after synthesis.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::plane::Plane;

/// Orthonormal wavelet filter family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveletFamily {
    /// 2-tap Haar.
    Haar,
    /// 4-tap Daubechies with 2 vanishing moments.
    Db2,
    /// 8-tap Daubechies with 4 vanishing moments.
    Db4,
    /// 8-tap least-asymmetric Symlet.
    Sym4,
}

/// Boundary extension rule for the filter bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Circular wrap; the only mode with exact perfect reconstruction.
    Periodic,
    /// Half-sample reflection; approximate near the right/bottom borders.
    Symmetric,
}

/// Filter family plus boundary rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WaveletSpec {
    pub family: WaveletFamily,
    pub boundary: Boundary,
}

impl Default for WaveletSpec {
    fn default() -> Self {
        Self {
            family: WaveletFamily::Haar,
            boundary: Boundary::Periodic,
        }
    }
}

const SQRT1_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

const HAAR: [f64; 2] = [SQRT1_2, SQRT1_2];

// Daubechies and Symlet scaling coefficients from spectral factorization of
// the Daubechies polynomial, evaluated at 60-digit precision and rounded to
// f64 (db2 agrees with its (1 +- sqrt 3)/(4 sqrt 2) closed form).
const DB2: [f64; 4] = [
    0.48296291314453414,
    0.83651630373780791,
    0.22414386804201338,
    -0.12940952255126038,
];

const DB4: [f64; 8] = [
    0.2303778133088965,
    0.71484657055291565,
    0.63088076792985891,
    -0.027983769416859854,
    -0.18703481171909308,
    0.030841381835560764,
    0.0328830116668852,
    -0.010597401785069032,
];

const SYM4: [f64; 8] = [
    0.032223100604051468,
    -0.012603967262031304,
    -0.099219543576633533,
    0.29785779560530605,
    0.80373875180513208,
    0.49761866763277499,
    -0.029635527646002492,
    -0.075765714789502213,
];

impl WaveletFamily {
    pub const ALL: [WaveletFamily; 4] = [
        WaveletFamily::Haar,
        WaveletFamily::Db2,
        WaveletFamily::Db4,
        WaveletFamily::Sym4,
    ];

    /// Low-pass (scaling) filter coefficients.
    pub fn lowpass(&self) -> &'static [f64] {
        match self {
            WaveletFamily::Haar => &HAAR,
            WaveletFamily::Db2 => &DB2,
            WaveletFamily::Db4 => &DB4,
            WaveletFamily::Sym4 => &SYM4,
        }
    }

    /// High-pass filter via the quadrature mirror relation
    /// `hi[j] = (-1)^j * lo[L-1-j]`.
    pub fn highpass(&self) -> Vec<f64> {
        let lo = self.lowpass();
        let len = lo.len();
        (0..len)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * lo[len - 1 - j]
            })
            .collect()
    }
}

impl fmt::Display for WaveletFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            WaveletFamily::Haar => "haar",
            WaveletFamily::Db2 => "db2",
            WaveletFamily::Db4 => "db4",
            WaveletFamily::Sym4 => "sym4",
        };
        f.write_str(name)
    }
}

impl FromStr for WaveletFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" => Ok(WaveletFamily::Haar),
            "db2" => Ok(WaveletFamily::Db2),
            "db4" => Ok(WaveletFamily::Db4),
            "sym4" => Ok(WaveletFamily::Sym4),
            other => Err(Error::InvalidConfig {
                reason: format!("unknown wavelet family {other:?} (expected haar, db2, db4 or sym4)"),
            }),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Symmetric => "symmetric",
        })
    }
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" => Ok(Boundary::Periodic),
            "symmetric" => Ok(Boundary::Symmetric),
            other => Err(Error::InvalidConfig {
                reason: format!("unknown boundary mode {other:?} (expected periodic or symmetric)"),
            }),
        }
    }
}

/// The four quarter-size planes of a one-level 2D DWT, with the spec that
/// produced them and the pre-padding image dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct SubbandSet {
    a: Plane,
    h: Plane,
    v: Plane,
    d: Plane,
    spec: WaveletSpec,
    image_width: usize,
    image_height: usize,
}

impl SubbandSet {
    /// Assemble a sub-band set, validating that all four planes share one
    /// shape consistent with the stated image dimensions.
    pub fn new(
        a: Plane,
        h: Plane,
        v: Plane,
        d: Plane,
        spec: WaveletSpec,
        image_width: usize,
        image_height: usize,
    ) -> Result<Self> {
        for band in [&h, &v, &d] {
            if !a.same_shape(band) {
                return Err(Error::DimensionMismatch {
                    left_width: a.width(),
                    left_height: a.height(),
                    right_width: band.width(),
                    right_height: band.height(),
                });
            }
        }
        let expect_w = image_width.div_ceil(2);
        let expect_h = image_height.div_ceil(2);
        if a.width() != expect_w || a.height() != expect_h {
            return Err(Error::DimensionMismatch {
                left_width: expect_w,
                left_height: expect_h,
                right_width: a.width(),
                right_height: a.height(),
            });
        }
        Ok(Self {
            a,
            h,
            v,
            d,
            spec,
            image_width,
            image_height,
        })
    }

    pub fn a(&self) -> &Plane {
        &self.a
    }

    /// Row-lowpass / column-highpass detail band.
    pub fn h(&self) -> &Plane {
        &self.h
    }

    /// Row-highpass / column-lowpass detail band.
    pub fn v(&self) -> &Plane {
        &self.v
    }

    /// Diagonal (HH) detail band; the noise estimator reads this one.
    pub fn d(&self) -> &Plane {
        &self.d
    }

    pub fn spec(&self) -> WaveletSpec {
        self.spec
    }

    pub fn image_width(&self) -> usize {
        self.image_width
    }

    pub fn image_height(&self) -> usize {
        self.image_height
    }

    /// Same set with every band replaced; shapes are re-validated.
    pub fn with_bands(&self, a: Plane, h: Plane, v: Plane, d: Plane) -> Result<Self> {
        Self::new(a, h, v, d, self.spec, self.image_width, self.image_height)
    }

    /// Sum of squared coefficients over all four bands.
    pub fn energy(&self) -> f64 {
        self.a.energy() + self.h.energy() + self.v.energy() + self.d.energy()
    }
}

/// Map an out-of-range index back into `[0, n)`.
#[inline]
fn extend(i: isize, n: usize, boundary: Boundary) -> usize {
    if i >= 0 && (i as usize) < n {
        return i as usize;
    }
    match boundary {
        Boundary::Periodic => i.rem_euclid(n as isize) as usize,
        Boundary::Symmetric => {
            // half-sample reflection: ... x1 x0 | x0 x1 ... xn-1 | xn-1 ...
            let m = i.rem_euclid(2 * n as isize) as usize;
            if m < n {
                m
            } else {
                2 * n - 1 - m
            }
        }
    }
}

/// Centering offset so analysis windows overlap both signal ends; zero for
/// Haar, which keeps every window in range on even-length signals.
#[inline]
fn phase_offset(filter_len: usize) -> isize {
    filter_len as isize / 2 - 1
}

/// One level of 1D analysis: correlate with both filters, keep even offsets.
/// The window for output `k` covers `2k - offset .. 2k - offset + L - 1`.
fn analyze_1d(
    x: &[f64],
    lo: &[f64],
    hi: &[f64],
    boundary: Boundary,
    out_lo: &mut [f64],
    out_hi: &mut [f64],
) {
    let n = x.len();
    debug_assert_eq!(n % 2, 0);
    let offset = phase_offset(lo.len());
    for k in 0..n / 2 {
        let mut a = 0.0;
        let mut d = 0.0;
        for (j, (&l, &g)) in lo.iter().zip(hi).enumerate() {
            let v = x[extend(2 * k as isize + j as isize - offset, n, boundary)];
            a += l * v;
            d += g * v;
        }
        out_lo[k] = a;
        out_hi[k] = d;
    }
}

/// One level of 1D synthesis.
///
/// Under periodic extension the analysis operator is orthogonal, so the
/// adjoint scatter is its exact inverse. Under symmetric extension the
/// folded boundary windows break orthogonality; the scatter then computes
/// `W^T W x`, and `W^T W` deviates from identity only on the footprints of
/// the folded windows, so a small dense solve over those positions recovers
/// the exact (least-squares) inverse.
fn synthesize_1d(
    approx: &[f64],
    detail: &[f64],
    lo: &[f64],
    hi: &[f64],
    boundary: Boundary,
    out: &mut [f64],
) {
    let n = out.len();
    out.fill(0.0);
    let offset = phase_offset(lo.len());
    for (k, (&a, &d)) in approx.iter().zip(detail).enumerate() {
        for (j, (&l, &g)) in lo.iter().zip(hi).enumerate() {
            let idx = extend(2 * k as isize + j as isize - offset, n, boundary);
            out[idx] += l * a + g * d;
        }
    }
    if boundary == Boundary::Symmetric {
        symmetric_boundary_correction(lo, hi, out);
    }
}

/// Fold one analysis window onto `[0, n)`, merging taps that land on the
/// same position. Returns `(position, lowpass weight, highpass weight)`
/// triples and whether any tap was reflected.
fn folded_window(
    k: usize,
    lo: &[f64],
    hi: &[f64],
    n: usize,
    boundary: Boundary,
    folded: &mut Vec<(usize, f64, f64)>,
) -> bool {
    let offset = phase_offset(lo.len());
    folded.clear();
    let mut reflected = false;
    for (j, (&l, &g)) in lo.iter().zip(hi).enumerate() {
        let raw = 2 * k as isize + j as isize - offset;
        if raw < 0 || raw >= n as isize {
            reflected = true;
        }
        let idx = extend(raw, n, boundary);
        match folded.iter_mut().find(|(i, _, _)| *i == idx) {
            Some((_, al, ag)) => {
                *al += l;
                *ag += g;
            }
            None => folded.push((idx, l, g)),
        }
    }
    reflected
}

/// Replace `out = W^T W x` by `x` on the positions where symmetric folding
/// perturbs the Gram matrix `W^T W` away from identity.
fn symmetric_boundary_correction(lo: &[f64], hi: &[f64], out: &mut [f64]) {
    let n = out.len();
    let mut folded = Vec::with_capacity(lo.len());

    // positions covered by any window that reflected off an edge
    let mut in_set = vec![false; n];
    for k in 0..n / 2 {
        if folded_window(k, lo, hi, n, Boundary::Symmetric, &mut folded) {
            for &(idx, _, _) in &folded {
                in_set[idx] = true;
            }
        }
    }
    let set: Vec<usize> = (0..n).filter(|&i| in_set[i]).collect();
    if set.is_empty() {
        return;
    }
    let pos_of = |i: usize| set.binary_search(&i).expect("position is in the set");

    // Gram matrix restricted to the affected set, accumulated over every
    // window that touches it
    let m = set.len();
    let mut gram = vec![0.0; m * m];
    for k in 0..n / 2 {
        folded_window(k, lo, hi, n, Boundary::Symmetric, &mut folded);
        for &(i1, al1, ag1) in &folded {
            if !in_set[i1] {
                continue;
            }
            let p1 = pos_of(i1);
            for &(i2, al2, ag2) in &folded {
                if in_set[i2] {
                    gram[p1 * m + pos_of(i2)] += al1 * al2 + ag1 * ag2;
                }
            }
        }
    }

    let mut rhs: Vec<f64> = set.iter().map(|&i| out[i]).collect();
    if solve_in_place(&mut gram, &mut rhs) {
        for (&i, &v) in set.iter().zip(&rhs) {
            out[i] = v;
        }
    }
}

/// Gaussian elimination with partial pivoting on a dense m x m system.
/// Returns false (leaving `rhs` unusable) when the system is singular.
fn solve_in_place(a: &mut [f64], rhs: &mut [f64]) -> bool {
    let m = rhs.len();
    debug_assert_eq!(a.len(), m * m);
    for col in 0..m {
        let pivot_row = (col..m)
            .max_by(|&r1, &r2| a[r1 * m + col].abs().total_cmp(&a[r2 * m + col].abs()))
            .expect("non-empty range");
        if a[pivot_row * m + col].abs() < 1e-12 {
            return false;
        }
        if pivot_row != col {
            for j in 0..m {
                a.swap(col * m + j, pivot_row * m + j);
            }
            rhs.swap(col, pivot_row);
        }
        let pivot = a[col * m + col];
        for row in col + 1..m {
            let factor = a[row * m + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in col..m {
                a[row * m + j] -= factor * a[col * m + j];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    for col in (0..m).rev() {
        let mut v = rhs[col];
        for j in col + 1..m {
            v -= a[col * m + j] * rhs[j];
        }
        rhs[col] = v / a[col * m + col];
    }
    true
}

/// Pad odd dimensions by one replicated row/column (half-sample symmetric
/// extension of length one). Returns the padded plane or a copy.
fn pad_even(plane: &Plane) -> Plane {
    let (w0, h0) = (plane.width(), plane.height());
    let (w, h) = (w0 + w0 % 2, h0 + h0 % 2);
    if (w, h) == (w0, h0) {
        return plane.clone();
    }
    let mut data = Vec::with_capacity(w * h);
    for r in 0..h {
        let src = r.min(h0 - 1);
        data.extend_from_slice(plane.row(src));
        if w != w0 {
            data.push(plane.at(src, w0 - 1));
        }
    }
    Plane::from_raw(w, h, data)
}

/// One-level 2D DWT: rows first, then columns.
pub fn dwt2(img: &GrayImage, spec: WaveletSpec) -> SubbandSet {
    let lo = spec.family.lowpass();
    let hi = spec.family.highpass();
    let padded = pad_even(img.plane());
    let (w, h) = (padded.width(), padded.height());
    let (wb, hb) = (w / 2, h / 2);

    // row pass: low half into `l`, high half into `r`, both wb x h
    let mut l = vec![0.0; wb * h];
    let mut r = vec![0.0; wb * h];
    for row in 0..h {
        let (lo_out, hi_out) = (
            &mut l[row * wb..(row + 1) * wb],
            &mut r[row * wb..(row + 1) * wb],
        );
        analyze_1d(padded.row(row), lo, &hi, spec.boundary, lo_out, hi_out);
    }

    // column pass over both half-width planes
    let mut a = vec![0.0; wb * hb];
    let mut hh = vec![0.0; wb * hb];
    let mut v = vec![0.0; wb * hb];
    let mut d = vec![0.0; wb * hb];
    let mut col = vec![0.0; h];
    let mut out_lo = vec![0.0; hb];
    let mut out_hi = vec![0.0; hb];
    for c in 0..wb {
        for (source, low_band, high_band) in [(&l, &mut a, &mut hh), (&r, &mut v, &mut d)] {
            for row in 0..h {
                col[row] = source[row * wb + c];
            }
            analyze_1d(&col, lo, &hi, spec.boundary, &mut out_lo, &mut out_hi);
            for row in 0..hb {
                low_band[row * wb + c] = out_lo[row];
                high_band[row * wb + c] = out_hi[row];
            }
        }
    }

    SubbandSet {
        a: Plane::from_raw(wb, hb, a),
        h: Plane::from_raw(wb, hb, hh),
        v: Plane::from_raw(wb, hb, v),
        d: Plane::from_raw(wb, hb, d),
        spec,
        image_width: img.width(),
        image_height: img.height(),
    }
}

/// Inverse of [`dwt2`]: undo the column pass, then the row pass, then crop
/// any padding that was added for odd dimensions.
pub fn idwt2(bands: &SubbandSet) -> GrayImage {
    let spec = bands.spec;
    let lo = spec.family.lowpass();
    let hi = spec.family.highpass();
    let (wb, hb) = (bands.a.width(), bands.a.height());
    let (w, h) = (wb * 2, hb * 2);

    // undo columns: (A, H) -> row-lowpass plane, (V, D) -> row-highpass plane
    let mut l = vec![0.0; wb * h];
    let mut r = vec![0.0; wb * h];
    let mut col_lo = vec![0.0; hb];
    let mut col_hi = vec![0.0; hb];
    let mut col_out = vec![0.0; h];
    for c in 0..wb {
        for (low_band, high_band, target) in [
            (&bands.a, &bands.h, &mut l),
            (&bands.v, &bands.d, &mut r),
        ] {
            for row in 0..hb {
                col_lo[row] = low_band.at(row, c);
                col_hi[row] = high_band.at(row, c);
            }
            synthesize_1d(&col_lo, &col_hi, lo, &hi, spec.boundary, &mut col_out);
            for row in 0..h {
                target[row * wb + c] = col_out[row];
            }
        }
    }

    // undo rows
    let (w0, h0) = (bands.image_width, bands.image_height);
    let mut data = Vec::with_capacity(w0 * h0);
    let mut row_out = vec![0.0; w];
    for row in 0..h0 {
        synthesize_1d(
            &l[row * wb..(row + 1) * wb],
            &r[row * wb..(row + 1) * wb],
            lo,
            &hi,
            spec.boundary,
            &mut row_out,
        );
        data.extend_from_slice(&row_out[..w0]);
    }

    GrayImage::from_plane(Plane::from_raw(w0, h0, data))
}
