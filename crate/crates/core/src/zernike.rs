//! Zernike moment magnitudes of binary ROIs.
//!
//! A ROI is mapped onto the unit disk centered at its foreground centroid,
//! with the radius set to the largest centroid distance of any foreground
//! pixel. Pixel `(x, y)` samples the image at integer coordinates `(x, y)`,
//! and each pixel contributes an area element of `1 / radius^2`, so a solid
//! disk that fills the mapping has `|A00| = 1`.
//!
//! The discrete moment is
//!
//! ```text
//! A(n, m) = (n + 1) / pi * sum over foreground pixels with rho <= 1 of
//!           R(n, m, rho) * exp(-i m theta) / radius^2
//! ```
//!
//! and the descriptor is `|A(n, m)|` over every `0 <= m <= n <= 8` with
//! `n - m` even, which is 25 values in `(n, m)` lexicographic order. The
//! angular factor is computed as `((dx - i dy) / d)^m`, so no trigonometric
//! function is involved and results are reproducible bit for bit.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::imaging::BinaryRoi;

/// Highest order in the descriptor set.
pub const MAX_ORDER: u32 = 8;

/// Number of moments in the descriptor set.
pub const ZERNIKE_COUNT: usize = 25;

const FACTORIAL: [u64; 9] = [1, 1, 2, 6, 24, 120, 720, 5040, 40320];

/// Order `n` and repetition `m` of a Zernike basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZernikeIndex {
    pub n: u32,
    pub m: u32,
}

impl ZernikeIndex {
    pub fn new(n: u32, m: u32) -> Result<Self> {
        if m > n || !(n - m).is_multiple_of(2) || n > MAX_ORDER {
            return Err(Error::InvalidIndex { n, m });
        }
        Ok(Self { n, m })
    }

    /// Column name used in feature tables, e.g. `z4_2`.
    pub fn column_name(&self) -> String {
        format!("z{}_{}", self.n, self.m)
    }
}

static CANONICAL: OnceLock<Vec<ZernikeIndex>> = OnceLock::new();

/// The 25 descriptor indices, `n` ascending then `m` ascending.
pub fn canonical_index_set() -> &'static [ZernikeIndex] {
    CANONICAL.get_or_init(|| {
        let mut set = Vec::with_capacity(ZERNIKE_COUNT);
        for n in 0..=MAX_ORDER {
            for m in (n % 2..=n).step_by(2) {
                set.push(ZernikeIndex { n, m });
            }
        }
        debug_assert_eq!(set.len(), ZERNIKE_COUNT);
        set
    })
}

/// Radial polynomial `R(n, m, rho)` evaluated directly from its factorial sum.
pub fn radial_polynomial(n: u32, m: u32, rho: f64) -> Result<f64> {
    let idx = ZernikeIndex::new(n, m)?;
    let (n, m) = (idx.n as usize, idx.m as usize);
    let mut sum = 0.0;
    for s in 0..=(n - m) / 2 {
        let numerator = FACTORIAL[n - s] as f64;
        let denominator =
            (FACTORIAL[s] * FACTORIAL[(n + m) / 2 - s] * FACTORIAL[(n - m) / 2 - s]) as f64;
        let sign = if s % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * numerator / denominator * rho.powi((n - 2 * s) as i32);
    }
    Ok(sum)
}

/// Integer power-series coefficients of every canonical radial polynomial.
///
/// `coefficients[k][p]` multiplies `rho^p` in `R(n_k, m_k, rho)`.
#[derive(Debug, Clone)]
pub struct RadialTable {
    coefficients: Vec<[f64; MAX_ORDER as usize + 1]>,
}

impl RadialTable {
    fn build() -> Self {
        let coefficients = canonical_index_set()
            .iter()
            .map(|idx| {
                let (n, m) = (idx.n as usize, idx.m as usize);
                let mut c = [0.0; MAX_ORDER as usize + 1];
                for s in 0..=(n - m) / 2 {
                    let magnitude = FACTORIAL[n - s]
                        / (FACTORIAL[s] * FACTORIAL[(n + m) / 2 - s] * FACTORIAL[(n - m) / 2 - s]);
                    let signed = if s % 2 == 0 {
                        magnitude as i64
                    } else {
                        -(magnitude as i64)
                    };
                    c[n - 2 * s] = signed as f64;
                }
                c
            })
            .collect();
        Self { coefficients }
    }

    /// Shared table for the canonical index set.
    pub fn get() -> &'static RadialTable {
        static TABLE: OnceLock<RadialTable> = OnceLock::new();
        TABLE.get_or_init(Self::build)
    }

    /// `R` for canonical index `k`, given `powers[p] = rho^p`.
    #[inline]
    pub fn eval_with_powers(&self, k: usize, powers: &[f64; MAX_ORDER as usize + 1]) -> f64 {
        self.coefficients[k]
            .iter()
            .zip(powers)
            .map(|(c, p)| c * p)
            .sum()
    }

    /// `R` for canonical index `k` at `rho`.
    pub fn eval(&self, k: usize, rho: f64) -> f64 {
        self.eval_with_powers(k, &rho_powers(rho))
    }
}

#[inline]
fn rho_powers(rho: f64) -> [f64; MAX_ORDER as usize + 1] {
    let mut p = [1.0; MAX_ORDER as usize + 1];
    for i in 1..p.len() {
        p[i] = p[i - 1] * rho;
    }
    p
}

/// Complex basis function `V(n, m, rho, theta) = R(n, m, rho) * exp(i m theta)`.
pub fn basis(idx: ZernikeIndex, rho: f64, theta: f64) -> Complex64 {
    let r = radial_polynomial(idx.n, idx.m, rho).expect("ZernikeIndex is validated");
    Complex64::from_polar(r, idx.m as f64 * theta)
}

/// Placement of the unit disk over a ROI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMapping {
    pub cx: f64,
    pub cy: f64,
    pub radius: f64,
}

/// Centroid of the foreground pixel centers and the largest distance from it,
/// clamped below at 1.
pub fn disk_mapping(roi: &BinaryRoi) -> DiskMapping {
    let (mut sx, mut sy, mut count) = (0.0f64, 0.0f64, 0usize);
    for (x, y) in roi.foreground() {
        sx += x as f64;
        sy += y as f64;
        count += 1;
    }
    let count = count.max(1) as f64;
    let (cx, cy) = (sx / count, sy / count);
    let radius = roi
        .foreground()
        .map(|(x, y)| (x as f64 - cx).hypot(y as f64 - cy))
        .fold(0.0f64, f64::max)
        .max(1.0);
    DiskMapping { cx, cy, radius }
}

/// Accumulate all 25 canonical moments in a single pass over the foreground.
pub fn zernike_moments(roi: &BinaryRoi, map: &DiskMapping) -> [Complex64; ZERNIKE_COUNT] {
    let table = RadialTable::get();
    let indices = canonical_index_set();
    let mut acc = [Complex64::new(0.0, 0.0); ZERNIKE_COUNT];
    for (x, y) in roi.foreground() {
        let (dx, dy) = (x as f64 - map.cx, y as f64 - map.cy);
        let d = dx.hypot(dy);
        let rho = d / map.radius;
        if rho > 1.0 {
            continue;
        }
        let powers = rho_powers(rho);
        let unit = if d > 0.0 {
            Complex64::new(dx / d, -dy / d)
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut angular = [Complex64::new(1.0, 0.0); MAX_ORDER as usize + 1];
        for m in 1..angular.len() {
            angular[m] = angular[m - 1] * unit;
        }
        for (k, idx) in indices.iter().enumerate() {
            acc[k] += angular[idx.m as usize] * table.eval_with_powers(k, &powers);
        }
    }
    let area = 1.0 / (map.radius * map.radius);
    for (a, idx) in acc.iter_mut().zip(indices) {
        *a *= (idx.n as f64 + 1.0) / PI * area;
    }
    acc
}

/// Complex moment `A(n, m)` of the ROI under the given disk mapping.
pub fn zernike_moment(roi: &BinaryRoi, map: &DiskMapping, idx: ZernikeIndex) -> Complex64 {
    let k = canonical_index_set()
        .iter()
        .position(|&c| c == idx)
        .expect("every valid index with n <= 8 is canonical");
    zernike_moments(roi, map)[k]
}

/// The 25 moment magnitudes, in canonical index order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZernikeFeatures {
    pub values: [f64; ZERNIKE_COUNT],
}

pub fn zernike_feature_set(roi: &BinaryRoi) -> ZernikeFeatures {
    let map = disk_mapping(roi);
    let moments = zernike_moments(roi, &map);
    let mut values = [0.0; ZERNIKE_COUNT];
    for (v, a) in values.iter_mut().zip(moments) {
        *v = a.norm();
    }
    ZernikeFeatures { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::BinaryMask;

    fn roi_from_fn(w: usize, h: usize, f: impl FnMut(usize, usize) -> bool) -> BinaryRoi {
        BinaryRoi::from_mask(&BinaryMask::from_fn(w, h, f)).unwrap()
    }

    #[test]
    fn canonical_set_shape() {
        let set = canonical_index_set();
        assert_eq!(set.len(), 25);
        assert_eq!(set[0], ZernikeIndex { n: 0, m: 0 });
        assert_eq!(set.iter().filter(|i| i.n == 8).count(), 5);
        let names: Vec<String> = set.iter().map(|i| i.column_name()).collect();
        assert_eq!(names[..6], ["z0_0", "z1_1", "z2_0", "z2_2", "z3_1", "z3_3"]);
        assert_eq!(names[24], "z8_8");
        assert!(set.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn invalid_indices_rejected() {
        assert!(matches!(
            radial_polynomial(2, 3, 0.5),
            Err(Error::InvalidIndex { n: 2, m: 3 })
        ));
        assert!(radial_polynomial(3, 0, 0.5).is_err());
        assert!(ZernikeIndex::new(10, 0).is_err());
        assert!(ZernikeIndex::new(8, 8).is_ok());
    }

    #[test]
    fn radial_known_values() {
        for rho in [0.0, 0.3, 1.0] {
            assert_eq!(radial_polynomial(0, 0, rho).unwrap(), 1.0);
        }
        assert_eq!(radial_polynomial(2, 2, 0.5).unwrap(), 0.25);
        // 6 rho^4 - 6 rho^2 + 1 at rho = 0.5
        assert!((radial_polynomial(4, 0, 0.5).unwrap() + 0.125).abs() < 1e-15);
        for idx in canonical_index_set() {
            let r = radial_polynomial(idx.n, idx.m, 1.0).unwrap();
            assert!((r - 1.0).abs() < 1e-12, "{idx:?}: {r}");
        }
    }

    #[test]
    fn table_matches_direct_sum() {
        let table = RadialTable::get();
        for (k, idx) in canonical_index_set().iter().enumerate() {
            for i in 0..=10 {
                let rho = i as f64 / 10.0;
                let direct = radial_polynomial(idx.n, idx.m, rho).unwrap();
                assert!((table.eval(k, rho) - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn disk_mapping_cases() {
        let single = roi_from_fn(1, 1, |_, _| true);
        let m = disk_mapping(&single);
        assert_eq!((m.cx, m.cy, m.radius), (0.0, 0.0, 1.0));

        let line = roi_from_fn(3, 1, |_, _| true);
        let m = disk_mapping(&line);
        assert_eq!((m.cx, m.cy, m.radius), (1.0, 0.0, 1.0));

        let square = roi_from_fn(64, 64, |_, _| true);
        let m = disk_mapping(&square);
        assert_eq!((m.cx, m.cy), (31.5, 31.5));
        assert!((m.radius - 31.5 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_pixel_has_only_radially_constant_moments() {
        let roi = roi_from_fn(1, 1, |_, _| true);
        let f = zernike_feature_set(&roi);
        assert!((f.values[0] - 1.0 / PI).abs() < 1e-15);
        // m > 0 terms vanish at rho = 0
        for (idx, v) in canonical_index_set().iter().zip(f.values) {
            if idx.m > 0 {
                assert_eq!(v, 0.0);
            }
        }
    }

    #[test]
    fn solid_disk_is_mostly_a00() {
        let r = 40.0f64;
        let size = 81;
        let roi = roi_from_fn(size, size, |x, y| {
            (x as f64 - 40.0).hypot(y as f64 - 40.0) <= r
        });
        let f = zernike_feature_set(&roi);
        assert!((f.values[0] - 1.0).abs() <= 0.05, "A00 = {}", f.values[0]);
        for v in &f.values[1..] {
            assert!(*v <= 0.05, "{v}");
        }
        assert!(f.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn single_moment_agrees_with_batch() {
        let roi = roi_from_fn(20, 15, |x, y| (x * y) % 7 < 3);
        let map = disk_mapping(&roi);
        let all = zernike_moments(&roi, &map);
        for (k, &idx) in canonical_index_set().iter().enumerate() {
            assert_eq!(zernike_moment(&roi, &map, idx), all[k]);
        }
    }
}
