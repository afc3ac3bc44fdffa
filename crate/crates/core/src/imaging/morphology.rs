//! Binary erosion, dilation and opening with a square structuring element.
//!
//! The square element is separable, so each operation is a horizontal pass
//! followed by a vertical pass over a running window count. Pixels outside
//! the image count as background.

use super::BinaryMask;

/// Erosion with a `(2r+1) x (2r+1)` square: a pixel survives only if the
/// whole window around it is in-bounds foreground.
pub fn erode(mask: &BinaryMask, radius: usize) -> BinaryMask {
    if radius == 0 {
        return mask.clone();
    }
    let horizontal = window_pass(
        mask.bits(),
        mask.width(),
        mask.height(),
        radius,
        true,
        Op::All,
    );
    let bits = window_pass(
        &horizontal,
        mask.width(),
        mask.height(),
        radius,
        false,
        Op::All,
    );
    BinaryMask::new(mask.width(), mask.height(), bits).expect("dimensions preserved")
}

/// Dilation with a `(2r+1) x (2r+1)` square, clipped to the image.
pub fn dilate(mask: &BinaryMask, radius: usize) -> BinaryMask {
    if radius == 0 {
        return mask.clone();
    }
    let horizontal = window_pass(
        mask.bits(),
        mask.width(),
        mask.height(),
        radius,
        true,
        Op::Any,
    );
    let bits = window_pass(
        &horizontal,
        mask.width(),
        mask.height(),
        radius,
        false,
        Op::Any,
    );
    BinaryMask::new(mask.width(), mask.height(), bits).expect("dimensions preserved")
}

/// Erosion followed by dilation; removes foreground features narrower than
/// `2r+1` pixels. Radius 0 is the identity.
pub fn morphological_open(mask: &BinaryMask, radius: usize) -> BinaryMask {
    if radius == 0 {
        return mask.clone();
    }
    dilate(&erode(mask, radius), radius)
}

#[derive(Clone, Copy)]
enum Op {
    All,
    Any,
}

fn window_pass(
    bits: &[bool],
    width: usize,
    height: usize,
    radius: usize,
    horizontal: bool,
    op: Op,
) -> Vec<bool> {
    let (lines, len) = if horizontal {
        (height, width)
    } else {
        (width, height)
    };
    let index = |line: usize, pos: usize| {
        if horizontal {
            line * width + pos
        } else {
            pos * width + line
        }
    };
    let window = 2 * radius + 1;
    let mut out = vec![false; bits.len()];
    // prefix[i] = foreground count among the first i pixels of the line
    let mut prefix = vec![0usize; len + 1];
    for line in 0..lines {
        for pos in 0..len {
            prefix[pos + 1] = prefix[pos] + bits[index(line, pos)] as usize;
        }
        for pos in 0..len {
            let lo = pos.saturating_sub(radius);
            let hi = (pos + radius + 1).min(len);
            let count = prefix[hi] - prefix[lo];
            out[index(line, pos)] = match op {
                Op::All => count == window,
                Op::Any => count > 0,
            };
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(size: usize, x0: usize, y0: usize, side: usize) -> BinaryMask {
        BinaryMask::from_fn(size, size, |x, y| {
            x >= x0 && x < x0 + side && y >= y0 && y < y0 + side
        })
    }

    // Direct definition over the full window, used to cross-check the separable passes.
    fn erode_naive(mask: &BinaryMask, r: usize) -> BinaryMask {
        let (w, h) = (mask.width() as i64, mask.height() as i64);
        let r = r as i64;
        BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
            (-r..=r).all(|dy| {
                (-r..=r).all(|dx| {
                    let (sx, sy) = (x as i64 + dx, y as i64 + dy);
                    sx >= 0 && sy >= 0 && sx < w && sy < h && mask.get(sx as usize, sy as usize)
                })
            })
        })
    }

    fn dilate_naive(mask: &BinaryMask, r: usize) -> BinaryMask {
        let (w, h) = (mask.width() as i64, mask.height() as i64);
        let r = r as i64;
        BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
            (-r..=r).any(|dy| {
                (-r..=r).any(|dx| {
                    let (sx, sy) = (x as i64 + dx, y as i64 + dy);
                    sx >= 0 && sy >= 0 && sx < w && sy < h && mask.get(sx as usize, sy as usize)
                })
            })
        })
    }

    #[test]
    fn radius_zero_is_identity() {
        let m = BinaryMask::from_fn(9, 7, |x, y| (x * 3 + y * 5) % 4 == 0);
        assert_eq!(morphological_open(&m, 0), m);
    }

    #[test]
    fn isolated_pixel_is_removed() {
        let mut m = BinaryMask::empty(9, 9);
        m.set(4, 4, true);
        assert_eq!(morphological_open(&m, 1).foreground_count(), 0);
    }

    #[test]
    fn solid_square_survives_opening() {
        let m = square(20, 5, 5, 10);
        let eroded = erode(&m, 1);
        assert_eq!(eroded, square(20, 6, 6, 8));
        assert_eq!(morphological_open(&m, 1), m);
    }

    #[test]
    fn square_touching_border_survives_opening() {
        let m = square(10, 0, 0, 10);
        assert_eq!(morphological_open(&m, 1), m);
    }

    #[test]
    fn thin_line_is_removed_thick_line_kept() {
        let thin = BinaryMask::from_fn(20, 20, |_, y| (9..11).contains(&y));
        assert_eq!(morphological_open(&thin, 1).foreground_count(), 0);
        let thick = BinaryMask::from_fn(20, 20, |_, y| (9..12).contains(&y));
        assert_eq!(morphological_open(&thick, 1), thick);
    }

    #[test]
    fn separable_passes_match_full_window() {
        let mut state = 0x9e37_79b9u32;
        for r in 1..=3 {
            let m = BinaryMask::from_fn(23, 17, |_, _| {
                state ^= state << 13;
                state ^= state >> 17;
                state ^= state << 5;
                !state.is_multiple_of(3)
            });
            assert_eq!(erode(&m, r), erode_naive(&m, r));
            assert_eq!(dilate(&m, r), dilate_naive(&m, r));
        }
    }
}
