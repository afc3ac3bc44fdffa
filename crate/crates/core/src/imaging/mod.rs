//! Color frames to binary regions of interest.
//!
//! A frame goes through HSV thresholding for one flow color, a square-element
//! morphological opening, 8-connected component labeling, and finally a crop
//! to the union bounding box of the components that pass the area filter.

mod components;
pub mod io;
mod morphology;
mod roi;
pub mod transform;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use components::{connected_components, label_components, Component, Labeling};
pub use morphology::{dilate, erode, morphological_open};
pub use roi::{extract_roi, segment_frame, BinaryRoi};

/// Decoded color frame, row-major RGB.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbFrame {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RgbFrame {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidFrame(format!(
                "frame dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidFrame(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width * height,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// A frame filled with one color.
    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Result<Self> {
        Self::new(width, height, vec![rgb; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        self.pixels[y * self.width + x] = rgb;
    }
}

/// Which Doppler flow color a pipeline run isolates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorChannel {
    Blue,
    Red,
}

/// Row-major boolean image, `true` is foreground.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != width * height {
            return Err(Error::InvalidFrame(format!(
                "expected {} bits for {width}x{height} mask, got {}",
                width * height,
                bits.len()
            )));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    /// Build a mask by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                bits.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            bits,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    pub fn foreground_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Inclusive hue interval in degrees. `lo > hi` wraps through 0°.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HueRange {
    pub lo: f64,
    pub hi: f64,
}

impl HueRange {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, hue: f64) -> bool {
        if self.lo <= self.hi {
            hue >= self.lo && hue <= self.hi
        } else {
            hue >= self.lo || hue <= self.hi
        }
    }
}

/// Thresholds and cleanup parameters for turning a frame into a ROI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SegmentationConfig {
    pub blue_hue: HueRange,
    pub red_hue: HueRange,
    pub sat_min: f64,
    pub val_min: f64,
    pub open_radius: usize,
    pub min_component_area: usize,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self {
            blue_hue: HueRange::new(190.0, 260.0),
            red_hue: HueRange::new(330.0, 25.0),
            sat_min: 0.35,
            val_min: 0.25,
            open_radius: 1,
            min_component_area: 20,
        }
    }
}

impl SegmentationConfig {
    pub fn hue_range(&self, channel: ColorChannel) -> HueRange {
        match channel {
            ColorChannel::Blue => self.blue_hue,
            ColorChannel::Red => self.red_hue,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, range) in [("blue_hue", self.blue_hue), ("red_hue", self.red_hue)] {
            for bound in [range.lo, range.hi] {
                if !(0.0..360.0).contains(&bound) {
                    return Err(Error::InvalidConfig(format!(
                        "{name} bound {bound} outside [0, 360)"
                    )));
                }
            }
        }
        for (name, value) in [("sat_min", self.sat_min), ("val_min", self.val_min)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidConfig(format!(
                    "{name} {value} outside [0, 1]"
                )));
            }
        }
        if self.min_component_area == 0 {
            return Err(Error::InvalidConfig(
                "min_component_area must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Standard RGB to HSV conversion; hue in degrees `[0, 360)`, saturation and value in `[0, 1]`.
pub fn rgb_to_hsv(r: u8, g: u8, b: u8) -> (f64, f64, f64) {
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let v = max as f64 / 255.0;
    if max == min {
        return (0.0, 0.0, v);
    }
    let delta = (max - min) as f64;
    let s = delta / max as f64;
    let (r, g, b) = (r as f64, g as f64, b as f64);
    let sector = if max as f64 == r {
        (g - b) / delta
    } else if max as f64 == g {
        (b - r) / delta + 2.0
    } else {
        (r - g) / delta + 4.0
    };
    let mut h = 60.0 * sector;
    if h < 0.0 {
        h += 360.0;
    }
    if h >= 360.0 {
        h -= 360.0;
    }
    (h, s, v)
}

/// Foreground wherever the pixel's hue is in the channel's range and it is
/// saturated and bright enough.
pub fn color_mask(frame: &RgbFrame, channel: ColorChannel, cfg: &SegmentationConfig) -> BinaryMask {
    let range = cfg.hue_range(channel);
    let bits = frame
        .pixels()
        .iter()
        .map(|&[r, g, b]| {
            let (h, s, v) = rgb_to_hsv(r, g, b);
            s >= cfg.sat_min && v >= cfg.val_min && range.contains(h)
        })
        .collect();
    BinaryMask {
        width: frame.width(),
        height: frame.height(),
        bits,
    }
}
