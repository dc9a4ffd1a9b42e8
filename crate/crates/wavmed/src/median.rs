//! Sliding-window median filter.
//!
//! A k x k mask moves over the plane; each output value is the exact middle
//! element of the sorted window centered on that position. Borders are
//! handled by replicate (clamp-to-edge) padding.

use crate::error::{Error, Result};
use crate::plane::Plane;

/// Apply a `window` x `window` median filter to `plane`.
///
/// `window` must be odd, at least 3 and no larger than either plane
/// dimension. The window size is odd, so the median is always a single
/// window element; no averaging rule is involved.
pub fn median_filter(plane: &Plane, window: usize) -> Result<Plane> {
    if window % 2 == 0 || window < 3 || window > plane.width() || window > plane.height() {
        return Err(Error::InvalidWindow {
            window,
            width: plane.width(),
            height: plane.height(),
        });
    }

    let (width, height) = (plane.width(), plane.height());
    let reach = (window / 2) as isize;
    let mid = (window * window) / 2;
    let mut out = Vec::with_capacity(width * height);
    let mut scratch = Vec::with_capacity(window * window);

    for row in 0..height as isize {
        for col in 0..width as isize {
            scratch.clear();
            for dr in -reach..=reach {
                let r = (row + dr).clamp(0, height as isize - 1) as usize;
                for dc in -reach..=reach {
                    let c = (col + dc).clamp(0, width as isize - 1) as usize;
                    scratch.push(plane.at(r, c));
                }
            }
            let (_, median, _) = scratch.select_nth_unstable_by(mid, f64::total_cmp);
            out.push(*median);
        }
    }

    Ok(Plane::from_raw(width, height, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Reference that materializes, fully sorts and indexes every window.
    fn naive_median(plane: &Plane, window: usize) -> Plane {
        let (w, h) = (plane.width(), plane.height());
        let reach = (window / 2) as isize;
        let mut out = Vec::with_capacity(w * h);
        for row in 0..h as isize {
            for col in 0..w as isize {
                let mut vals = Vec::new();
                for dr in -reach..=reach {
                    for dc in -reach..=reach {
                        let r = (row + dr).clamp(0, h as isize - 1) as usize;
                        let c = (col + dc).clamp(0, w as isize - 1) as usize;
                        vals.push(plane.at(r, c));
                    }
                }
                vals.sort_by(f64::total_cmp);
                out.push(vals[vals.len() / 2]);
            }
        }
        Plane::new(w, h, out).unwrap()
    }

    #[test]
    fn constant_plane_unchanged() {
        let p = Plane::filled(8, 5, 42.0).unwrap();
        assert_eq!(median_filter(&p, 3).unwrap(), p);
    }

    #[test]
    fn center_of_hand_sorted_window() {
        // sorted window {1,2,3,4,6,7,8,9,100}, middle = 6
        let p = Plane::new(3, 3, vec![1.0, 2.0, 3.0, 4.0, 100.0, 6.0, 7.0, 8.0, 9.0]).unwrap();
        let filtered = median_filter(&p, 3).unwrap();
        assert_eq!(filtered.at(1, 1), 6.0);
    }

    #[test]
    fn rejects_even_window() {
        let p = Plane::filled(8, 8, 0.0).unwrap();
        assert!(matches!(
            median_filter(&p, 4),
            Err(Error::InvalidWindow { window: 4, .. })
        ));
    }

    #[test]
    fn rejects_oversized_window() {
        let p = Plane::filled(4, 8, 0.0).unwrap();
        assert!(matches!(median_filter(&p, 5), Err(Error::InvalidWindow { .. })));
    }

    #[test]
    fn rejects_window_one() {
        let p = Plane::filled(4, 4, 0.0).unwrap();
        assert!(matches!(median_filter(&p, 1), Err(Error::InvalidWindow { .. })));
    }

    #[test]
    fn single_impulse_removed() {
        let mut data = vec![7.0; 36];
        data[14] = 250.0;
        let p = Plane::new(6, 6, data).unwrap();
        assert_eq!(median_filter(&p, 3).unwrap(), Plane::filled(6, 6, 7.0).unwrap());
    }

    #[test]
    fn matches_naive_reference_bitwise() {
        let mut rng = crate::testutil::SeededRng::new(7);
        for _ in 0..50 {
            let p = rng.plane(32, 32, -100.0, 355.0);
            let fast = median_filter(&p, 3).unwrap();
            let slow = naive_median(&p, 3);
            assert_eq!(fast.data(), slow.data());
        }
    }

    #[test]
    fn window5_matches_naive() {
        let mut rng = crate::testutil::SeededRng::new(11);
        for _ in 0..10 {
            let p = rng.plane(16, 12, 0.0, 255.0);
            assert_eq!(median_filter(&p, 5).unwrap().data(), naive_median(&p, 5).data());
        }
    }

    proptest! {
        #[test]
        fn output_values_come_from_input(values in proptest::collection::vec(-1e3f64..1e3, 25)) {
            let p = Plane::new(5, 5, values).unwrap();
            let out = median_filter(&p, 3).unwrap();
            for v in out.data() {
                prop_assert!(p.data().contains(v));
            }
        }

        #[test]
        fn output_bounded_by_input(values in proptest::collection::vec(-1e3f64..1e3, 48)) {
            let p = Plane::new(8, 6, values).unwrap();
            let out = median_filter(&p, 3).unwrap();
            let min = p.data().iter().cloned().fold(f64::INFINITY, f64::min);
            let max = p.data().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            for &v in out.data() {
                prop_assert!(v >= min && v <= max);
            }
        }

        #[test]
        fn translation_equivariant_in_interior(values in proptest::collection::vec(0f64..255.0, 100)) {
            // shift input right by one column; interior of output shifts too
            let p = Plane::new(10, 10, values).unwrap();
            let shifted = Plane::from_fn(10, 10, |r, c| {
                p.at(r, if c == 0 { 0 } else { c - 1 })
            }).unwrap();
            let out = median_filter(&p, 3).unwrap();
            let out_shifted = median_filter(&shifted, 3).unwrap();
            for r in 1..9 {
                for c in 2..9 {
                    prop_assert_eq!(out_shifted.at(r, c), out.at(r, c - 1));
                }
            }
        }
    }
}
