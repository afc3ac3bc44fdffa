//! Integer-only rasterization of thick segments and filled ellipses.
//!
//! Geometry lives in sub-pixel units of 1/16 pixel; pixel `(x, y)` is sampled
//! at `(16x, 16y)`. Rotations use a Q16 sine table at whole degrees, so no
//! floating-point trigonometry is involved.

use crate::imaging::BinaryMask;

/// Sub-pixel units per pixel.
pub const SUB: i64 = 16;

const Q16_ONE: i64 = 1 << 16;
const Q16_HALF: i64 = 1 << 15;

/// `round(sin(d deg) * 65536)` for `d` in `0..=90`.
const SIN_Q16: [i64; 91] = [
    0, 1144, 2287, 3430, 4572, 5712, 6850, 7987, 9121, 10252, 11380, 12505, 13626, 14742, 15855,
    16962, 18064, 19161, 20252, 21336, 22415, 23486, 24550, 25607, 26656, 27697, 28729, 29753,
    30767, 31772, 32768, 33754, 34729, 35693, 36647, 37590, 38521, 39441, 40348, 41243, 42126,
    42995, 43852, 44695, 45525, 46341, 47143, 47930, 48703, 49461, 50203, 50931, 51643, 52339,
    53020, 53684, 54332, 54963, 55578, 56175, 56756, 57319, 57865, 58393, 58903, 59396, 59870,
    60326, 60764, 61183, 61584, 61966, 62328, 62672, 62997, 63303, 63589, 63856, 64104, 64332,
    64540, 64729, 64898, 65048, 65177, 65287, 65376, 65446, 65496, 65526, 65536,
];

pub fn sin_q16(degrees: i64) -> i64 {
    let d = degrees.rem_euclid(360);
    match d {
        0..=90 => SIN_Q16[d as usize],
        91..=180 => SIN_Q16[(180 - d) as usize],
        181..=270 => -SIN_Q16[(d - 180) as usize],
        _ => -SIN_Q16[(360 - d) as usize],
    }
}

pub fn cos_q16(degrees: i64) -> i64 {
    sin_q16(degrees + 90)
}

/// Multiply by a Q16 factor and round half up.
fn q16(v: i64) -> i64 {
    (v + Q16_HALF) >> 16
}

/// Point in sub-pixel units.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }

    /// Vector of the given length at the given direction.
    pub fn polar(length: i64, degrees: i64) -> Self {
        Self::new(
            q16(length * cos_q16(degrees)),
            q16(length * sin_q16(degrees)),
        )
    }

    pub fn rotated(self, degrees: i64) -> Self {
        let (c, s) = (cos_q16(degrees), sin_q16(degrees));
        Self::new(q16(self.x * c - self.y * s), q16(self.x * s + self.y * c))
    }

    pub fn offset(self, dx: i64, dy: i64) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

/// Drawable shape element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitive {
    /// Every pixel within half the stroke width of the segment `a`-`b`.
    Stroke { a: Point, b: Point },
    /// Filled ellipse with semi-axes `rx`, `ry` (sub-pixel units), rotated by `degrees`.
    Ellipse {
        center: Point,
        rx: i64,
        ry: i64,
        degrees: i64,
    },
}

impl Primitive {
    pub fn rotated(self, degrees: i64) -> Self {
        match self {
            Primitive::Stroke { a, b } => Primitive::Stroke {
                a: a.rotated(degrees),
                b: b.rotated(degrees),
            },
            Primitive::Ellipse {
                center,
                rx,
                ry,
                degrees: d,
            } => Primitive::Ellipse {
                center: center.rotated(degrees),
                rx,
                ry,
                degrees: d + degrees,
            },
        }
    }

    pub fn translated(self, by: Point) -> Self {
        match self {
            Primitive::Stroke { a, b } => Primitive::Stroke {
                a: a + by,
                b: b + by,
            },
            Primitive::Ellipse {
                center,
                rx,
                ry,
                degrees,
            } => Primitive::Ellipse {
                center: center + by,
                rx,
                ry,
                degrees,
            },
        }
    }

    /// Conservative bounding box in sub-pixel units.
    fn bounds(&self, stroke: i64) -> (i64, i64, i64, i64) {
        match *self {
            Primitive::Stroke { a, b } => {
                let pad = stroke * SUB / 2 + SUB;
                (
                    a.x.min(b.x) - pad,
                    a.y.min(b.y) - pad,
                    a.x.max(b.x) + pad,
                    a.y.max(b.y) + pad,
                )
            }
            Primitive::Ellipse { center, rx, ry, .. } => {
                let r = rx.max(ry) + SUB;
                (center.x - r, center.y - r, center.x + r, center.y + r)
            }
        }
    }

    fn covers(&self, p: Point, stroke: i64) -> bool {
        match *self {
            Primitive::Stroke { a, b } => {
                // dist(p, segment) <= stroke / 2, compared exactly in integers
                let half = (stroke * SUB) as i128;
                let (abx, aby) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
                let (apx, apy) = ((p.x - a.x) as i128, (p.y - a.y) as i128);
                let len2 = abx * abx + aby * aby;
                let dot = apx * abx + apy * aby;
                if len2 == 0 || dot <= 0 {
                    4 * (apx * apx + apy * apy) <= half * half
                } else if dot >= len2 {
                    let (bpx, bpy) = ((p.x - b.x) as i128, (p.y - b.y) as i128);
                    4 * (bpx * bpx + bpy * bpy) <= half * half
                } else {
                    let cross = apx * aby - apy * abx;
                    4 * cross * cross <= half * half * len2
                }
            }
            Primitive::Ellipse {
                center,
                rx,
                ry,
                degrees,
            } => {
                let (c, s) = (cos_q16(degrees) as i128, sin_q16(degrees) as i128);
                let (dx, dy) = ((p.x - center.x) as i128, (p.y - center.y) as i128);
                let u = dx * c + dy * s;
                let v = -dx * s + dy * c;
                let (rx, ry) = (rx as i128, ry as i128);
                let one = Q16_ONE as i128;
                u * u * ry * ry + v * v * rx * rx <= rx * rx * ry * ry * one * one
            }
        }
    }
}

/// Rasterize primitives onto a `size x size` canvas.
pub fn rasterize(size: usize, stroke: usize, primitives: &[Primitive]) -> BinaryMask {
    let mut mask = BinaryMask::empty(size, size);
    let stroke = stroke as i64;
    let max = size as i64 - 1;
    for prim in primitives {
        let (x0, y0, x1, y1) = prim.bounds(stroke);
        let px0 = (x0.div_euclid(SUB)).clamp(0, max);
        let py0 = (y0.div_euclid(SUB)).clamp(0, max);
        let px1 = (x1.div_euclid(SUB) + 1).clamp(0, max);
        let py1 = (y1.div_euclid(SUB) + 1).clamp(0, max);
        for y in py0..=py1 {
            for x in px0..=px1 {
                if prim.covers(Point::new(x * SUB, y * SUB), stroke) {
                    mask.set(x as usize, y as usize, true);
                }
            }
        }
    }
    mask
}
