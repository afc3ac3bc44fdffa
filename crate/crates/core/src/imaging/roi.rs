use super::components::label_components;
use super::morphology::morphological_open;
use super::{color_mask, BinaryMask, ColorChannel, RgbFrame, SegmentationConfig};
use crate::error::{Error, Result};

/// Cropped binary region of interest holding every retained component of one
/// color, plus the number of those components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryRoi {
    width: usize,
    height: usize,
    bits: Vec<bool>,
    polygon_count: usize,
}

impl BinaryRoi {
    /// Build a ROI from arbitrary bits: crops to the foreground bounding box
    /// and counts 8-connected components. No area filter is applied.
    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        let mask = BinaryMask::new(width, height, bits)?;
        Self::from_mask(&mask)
    }

    pub fn from_mask(mask: &BinaryMask) -> Result<Self> {
        let labeling = label_components(mask);
        if labeling.components.is_empty() {
            return Err(Error::NoForeground);
        }
        let keep = vec![true; labeling.components.len()];
        Ok(crop_components(
            mask,
            &labeling.labels,
            &labeling.components,
            &keep,
        ))
    }

    pub(crate) fn from_parts(
        width: usize,
        height: usize,
        bits: Vec<bool>,
        polygon_count: usize,
    ) -> Self {
        debug_assert_eq!(bits.len(), width * height);
        Self {
            width,
            height,
            bits,
            polygon_count,
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

    pub fn polygon_count(&self) -> usize {
        self.polygon_count
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    pub fn foreground_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Iterator over `(x, y)` of foreground pixels in raster order.
    pub fn foreground(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }

    pub fn to_mask(&self) -> BinaryMask {
        BinaryMask::new(self.width, self.height, self.bits.clone()).expect("roi dimensions")
    }
}

fn crop_components(
    mask: &BinaryMask,
    labels: &[Option<usize>],
    components: &[super::Component],
    keep: &[bool],
) -> BinaryRoi {
    let mut bbox = (usize::MAX, usize::MAX, 0, 0);
    let mut polygon_count = 0;
    for c in components.iter().filter(|c| keep[c.id]) {
        polygon_count += 1;
        bbox.0 = bbox.0.min(c.bbox.0);
        bbox.1 = bbox.1.min(c.bbox.1);
        bbox.2 = bbox.2.max(c.bbox.2);
        bbox.3 = bbox.3.max(c.bbox.3);
    }
    let width = bbox.2 - bbox.0 + 1;
    let height = bbox.3 - bbox.1 + 1;
    let mut bits = Vec::with_capacity(width * height);
    for y in bbox.1..=bbox.3 {
        for x in bbox.0..=bbox.2 {
            let retained = labels[y * mask.width() + x].is_some_and(|id| keep[id]);
            bits.push(retained);
        }
    }
    BinaryRoi {
        width,
        height,
        bits,
        polygon_count,
    }
}

/// Drop components smaller than `cfg.min_component_area` and crop to the
/// union bounding box of the rest. Dropped components inside that box are
/// cleared.
pub fn extract_roi(mask: &BinaryMask, cfg: &SegmentationConfig) -> Result<BinaryRoi> {
    let labeling = label_components(mask);
    let keep: Vec<bool> = labeling
        .components
        .iter()
        .map(|c| c.pixel_count >= cfg.min_component_area)
        .collect();
    if !keep.iter().any(|&k| k) {
        return Err(Error::NoForeground);
    }
    Ok(crop_components(
        mask,
        &labeling.labels,
        &labeling.components,
        &keep,
    ))
}

/// Full frame segmentation for one channel: color mask, opening, ROI crop.
pub fn segment_frame(
    frame: &RgbFrame,
    channel: ColorChannel,
    cfg: &SegmentationConfig,
) -> Result<BinaryRoi> {
    let mask = color_mask(frame, channel, cfg);
    let opened = morphological_open(&mask, cfg.open_radius);
    extract_roi(&opened, cfg)
}
