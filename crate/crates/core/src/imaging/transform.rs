//! Geometric transforms of ROIs, used to exercise the invariance properties
//! of the shape descriptors.

use super::{BinaryMask, BinaryRoi};

/// Lossless quarter-turn clockwise rotation.
pub fn rotate90(roi: &BinaryRoi) -> BinaryRoi {
    let (w, h) = (roi.width(), roi.height());
    let mask = BinaryMask::from_fn(h, w, |x, y| roi.get(y, h - 1 - x));
    BinaryRoi::from_mask(&mask).expect("rotation keeps foreground")
}

/// Rotation by an arbitrary angle (degrees, counter-clockwise in image
/// coordinates) with nearest-neighbor resampling, cropped to the result.
/// Returns `None` if resampling loses every foreground pixel.
pub fn rotate_nearest(roi: &BinaryRoi, degrees: f64) -> Option<BinaryRoi> {
    let (w, h) = (roi.width() as f64, roi.height() as f64);
    let side = (w * w + h * h).sqrt().ceil() as usize + 2;
    // matching parity keeps pixel centers aligned when the angle is a multiple of 180
    let dst_w = side + (side + roi.width()) % 2;
    let dst_h = side + (side + roi.height()) % 2;
    let (sin, cos) = degrees.to_radians().sin_cos();
    let (src_cx, src_cy) = ((w - 1.0) / 2.0, (h - 1.0) / 2.0);
    let (dst_cx, dst_cy) = ((dst_w as f64 - 1.0) / 2.0, (dst_h as f64 - 1.0) / 2.0);
    let mask = BinaryMask::from_fn(dst_w, dst_h, |x, y| {
        let (dx, dy) = (x as f64 - dst_cx, y as f64 - dst_cy);
        // inverse rotation back into the source frame
        let sx = (cos * dx + sin * dy + src_cx).round();
        let sy = (-sin * dx + cos * dy + src_cy).round();
        sx >= 0.0 && sy >= 0.0 && sx < w && sy < h && roi.get(sx as usize, sy as usize)
    });
    BinaryRoi::from_mask(&mask).ok()
}

/// Nearest-neighbor 2x upscale: each pixel becomes a 2x2 block.
pub fn upscale2(roi: &BinaryRoi) -> BinaryRoi {
    let mask = BinaryMask::from_fn(roi.width() * 2, roi.height() * 2, |x, y| {
        roi.get(x / 2, y / 2)
    });
    BinaryRoi::from_mask(&mask).expect("upscale keeps foreground")
}

impl BinaryRoi {
    /// Surround the ROI with background margins. The result is deliberately
    /// not tight; it models the same shape cropped with a looser box.
    pub fn padded(&self, left: usize, top: usize, right: usize, bottom: usize) -> BinaryRoi {
        let width = self.width() + left + right;
        let height = self.height() + top + bottom;
        let mut bits = vec![false; width * height];
        for (x, y) in self.foreground() {
            bits[(y + top) * width + x + left] = true;
        }
        BinaryRoi::from_parts(width, height, bits, self.polygon_count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l_shape() -> BinaryRoi {
        let rows = ["#..", "#..", "###", "#.."];
        let m = BinaryMask::from_fn(3, 4, |x, y| rows[y].as_bytes()[x] == b'#');
        BinaryRoi::from_mask(&m).unwrap()
    }

    #[test]
    fn four_quarter_turns_is_identity() {
        let roi = l_shape();
        let r1 = rotate90(&roi);
        assert_eq!((r1.width(), r1.height()), (4, 3));
        assert!(r1.get(3, 0) && r1.get(0, 0) && r1.get(1, 1));
        let r4 = rotate90(&rotate90(&rotate90(&r1)));
        assert_eq!(r4, roi);
    }

    #[test]
    fn zero_angle_resample_is_identity() {
        let roi = l_shape();
        assert_eq!(rotate_nearest(&roi, 0.0).unwrap(), roi);
    }

    #[test]
    fn upscale_quadruples_area() {
        let roi = l_shape();
        let up = upscale2(&roi);
        assert_eq!((up.width(), up.height()), (6, 8));
        assert_eq!(up.foreground_count(), 4 * roi.foreground_count());
        assert_eq!(up.polygon_count(), 1);
    }

    #[test]
    fn padding_keeps_pixels_and_count() {
        let roi = l_shape();
        let p = roi.padded(2, 1, 0, 3);
        assert_eq!((p.width(), p.height()), (5, 8));
        assert_eq!(p.foreground_count(), roi.foreground_count());
        assert_eq!(p.polygon_count(), 1);
        assert!(p.get(2, 1));
    }
}
