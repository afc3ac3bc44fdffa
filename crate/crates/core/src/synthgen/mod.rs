//! Deterministic synthetic V, X, parallel-line and "other" shapes.
//!
//! Shapes are drawn with thick strokes and filled ellipses on a square canvas
//! using integer geometry only, then cropped with the same semantics as
//! [`extract_roi`]. Every random choice comes from a splitmix64 stream, so a
//! spec (or a dataset seed) reproduces the same bits everywhere.

mod raster;
mod render;
pub mod rng;

use std::collections::BTreeMap;

use crate::classifier::Problem;
use crate::error::{Error, Result};
use crate::features::{featurize, ClassLabel, LabeledSample};
use crate::imaging::{extract_roi, morphological_open, BinaryRoi, SegmentationConfig};

pub use raster::{rasterize, Point, Primitive, SUB};
pub use render::render_frame;
pub use rng::{sample_hash, SplitMix64};

/// Attempts made before a spec is declared degenerate.
const MAX_ATTEMPTS: usize = 8;

/// Smallest component area every generated ROI must keep.
const MIN_AREA: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    V,
    X,
    Parallel,
    OtherBlob,
    OtherLine,
}

impl ShapeKind {
    pub fn label(&self) -> ClassLabel {
        match self {
            ShapeKind::V => ClassLabel::V,
            ShapeKind::X => ClassLabel::X,
            ShapeKind::Parallel => ClassLabel::Parallel,
            ShapeKind::OtherBlob | ShapeKind::OtherLine => ClassLabel::Other,
        }
    }
}

/// Everything needed to draw one shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    /// Side of the square canvas in pixels.
    pub canvas: usize,
    /// Stroke thickness in pixels.
    pub stroke: usize,
    /// Global rotation in whole degrees.
    pub angle: i64,
    /// Endpoint perturbation as a fraction of the stroke length, at most 0.3.
    pub jitter: f64,
    pub seed: u64,
}

impl ShapeSpec {
    pub fn validate(&self) -> Result<()> {
        if self.canvas < 32 {
            return Err(Error::InvalidSpec(format!(
                "canvas {} is below 32",
                self.canvas
            )));
        }
        if self.stroke == 0 || self.stroke * 8 > self.canvas {
            return Err(Error::InvalidSpec(format!(
                "stroke {} must be in 1..={}",
                self.stroke,
                self.canvas / 8
            )));
        }
        if !(0.0..=0.3).contains(&self.jitter) {
            return Err(Error::InvalidSpec(format!(
                "jitter {} outside [0, 0.3]",
                self.jitter
            )));
        }
        Ok(())
    }

    /// Draw canvas size, stroke, rotation and jitter for one dataset sample.
    pub fn sample(kind: ShapeKind, seed: u64) -> Self {
        let mut rng = SplitMix64::new(seed);
        let canvas = 80 + 8 * rng.range(0, 4) as usize;
        let stroke = rng.range(4, 6) as usize;
        let angle = rng.range(0, 359);
        let jitter = rng.range(0, 150) as f64 / 1000.0;
        let seed = rng.next_u64();
        Self {
            kind,
            canvas,
            stroke,
            angle,
            jitter,
            seed,
        }
    }

    fn permille_jitter(&self) -> i64 {
        (self.jitter * 1000.0).round() as i64
    }
}

/// Local-frame primitives for one attempt, centered on the origin.
fn build_shape(spec: &ShapeSpec, rng: &mut SplitMix64) -> Vec<Primitive> {
    let stroke = spec.stroke as i64;
    // every drawn point stays within `reach` of the canvas center
    let reach = (spec.canvas as i64 / 2 - stroke - 2) * SUB;
    let jitter = spec.permille_jitter();
    let wobble = |rng: &mut SplitMix64, length: i64| {
        let mag = length * jitter / 4000;
        Point::new(rng.symmetric(mag), rng.symmetric(mag))
    };

    match spec.kind {
        ShapeKind::V => {
            let half_angle = rng.range(20, 50);
            let len_a = reach * rng.range(70, 90) / 100;
            let len_b = len_a * rng.range(85, 100) / 100;
            let apex_y = -len_a * raster::cos_q16(half_angle) / (2 << 16);
            let apex = Point::new(0, apex_y);
            let end_a = apex + Point::polar(len_a, 90 - half_angle) + wobble(rng, len_a);
            let end_b = apex + Point::polar(len_b, 90 + half_angle) + wobble(rng, len_b);
            vec![
                Primitive::Stroke { a: apex, b: end_a },
                Primitive::Stroke { a: apex, b: end_b },
            ]
        }
        ShapeKind::X => {
            let crossing = rng.range(45, 90);
            let len = reach * rng.range(80, 90) / 100;
            let mut strokes = Vec::with_capacity(2);
            for direction in [0, crossing] {
                let back = len * rng.range(60, 100) / 100;
                let fwd = len * rng.range(60, 100) / 100;
                let a = Point::polar(back, direction + 180) + wobble(rng, len);
                let b = Point::polar(fwd, direction) + wobble(rng, len);
                strokes.push(Primitive::Stroke { a, b });
            }
            strokes
        }
        ShapeKind::Parallel => {
            let min_sep = 2 * stroke + 2;
            let max_sep = min_sep.max(reach / SUB / 2);
            let half_sep = rng.range(min_sep, max_sep) * SUB / 2;
            let len = reach * rng.range(55, 80) / 100;
            let slide = len * jitter / 2000;
            (0..2)
                .map(|i| {
                    let y = if i == 0 { -half_sep } else { half_sep };
                    let a = Point::new(-len + rng.symmetric(slide), y);
                    let b = Point::new(len + rng.symmetric(slide), y);
                    Primitive::Stroke { a, b }
                })
                .collect()
        }
        ShapeKind::OtherBlob => {
            let count = rng.range(1, 4);
            let max_axis = (4 * SUB).max(reach / 3);
            (0..count)
                .map(|_| {
                    let center = Point::polar(reach * rng.range(0, 55) / 100, rng.range(0, 359));
                    Primitive::Ellipse {
                        center,
                        rx: rng.range(4 * SUB, max_axis),
                        ry: rng.range(4 * SUB, max_axis),
                        degrees: rng.range(0, 179),
                    }
                })
                .collect()
        }
        ShapeKind::OtherLine => {
            let len = reach * rng.range(40, 95) / 100;
            let shift = Point::new(rng.symmetric(reach / 10), rng.symmetric(reach / 10));
            let a = Point::new(-len, 0) + shift + wobble(rng, len);
            let b = Point::new(len, 0) + shift + wobble(rng, len);
            vec![Primitive::Stroke { a, b }]
        }
    }
}

fn satisfies_class_geometry(kind: ShapeKind, roi: &BinaryRoi) -> bool {
    match kind {
        ShapeKind::V | ShapeKind::X | ShapeKind::OtherLine => roi.polygon_count() == 1,
        ShapeKind::Parallel => roi.polygon_count() == 2,
        ShapeKind::OtherBlob => (1..=4).contains(&roi.polygon_count()),
    }
}

/// Rasterize a shape and crop it to a ROI. Geometry that comes out empty or
/// breaks its class invariant is redrawn from the same stream, up to eight
/// attempts in total.
///
/// Strokes at least four pixels wide are passed through the default
/// segmentation opening before cropping. Opening is idempotent, so such ROIs
/// come back unchanged when rendered into a frame and segmented again.
pub fn generate(spec: &ShapeSpec) -> Result<BinaryRoi> {
    spec.validate()?;
    let cfg = SegmentationConfig {
        min_component_area: MIN_AREA,
        ..SegmentationConfig::default()
    };
    let open_radius = if spec.stroke > 2 * cfg.open_radius + 1 {
        cfg.open_radius
    } else {
        0
    };
    let center = Point::new(
        (spec.canvas as i64 - 1) * SUB / 2,
        (spec.canvas as i64 - 1) * SUB / 2,
    );
    let mut rng = SplitMix64::new(spec.seed);
    let mut last_failure = String::new();
    for _ in 0..MAX_ATTEMPTS {
        let primitives: Vec<Primitive> = build_shape(spec, &mut rng)
            .into_iter()
            .map(|p| p.rotated(spec.angle).translated(center))
            .collect();
        let mask = morphological_open(
            &rasterize(spec.canvas, spec.stroke, &primitives),
            open_radius,
        );
        match extract_roi(&mask, &cfg) {
            Ok(roi) if satisfies_class_geometry(spec.kind, &roi) => return Ok(roi),
            Ok(roi) => {
                last_failure = format!(
                    "{:?} drawn with {} components",
                    spec.kind,
                    roi.polygon_count()
                )
            }
            Err(_) => last_failure = "empty raster".into(),
        }
    }
    Err(Error::DegenerateSpec {
        id: format!("seed {}", spec.seed),
        reason: last_failure,
    })
}

/// One generated corpus entry.
#[derive(Debug, Clone)]
pub struct SyntheticSample {
    pub id: String,
    pub label: ClassLabel,
    pub spec: ShapeSpec,
    pub roi: BinaryRoi,
}

/// Per-sample seed: the master seed offset by a hash of label and index.
pub fn sample_seed(master: u64, label: ClassLabel, index: usize) -> u64 {
    master.wrapping_add(sample_hash(label.as_str(), index))
}

pub fn sample_id(label: ClassLabel, index: usize) -> String {
    format!("synth_{}_{:04}", label.as_str(), index)
}

/// Spec for one corpus entry. "Other" samples are split between blobs and
/// single lines by the first draw of the sample's stream.
pub fn sample_spec(label: ClassLabel, seed: u64) -> ShapeSpec {
    let kind = match label {
        ClassLabel::V => ShapeKind::V,
        ClassLabel::X => ShapeKind::X,
        ClassLabel::Parallel => ShapeKind::Parallel,
        ClassLabel::Other => {
            if SplitMix64::new(seed).next_u64() & 1 == 0 {
                ShapeKind::OtherBlob
            } else {
                ShapeKind::OtherLine
            }
        }
    };
    ShapeSpec::sample(kind, seed.rotate_left(17))
}

/// Generate ROIs for the requested per-class counts, in the problem's label
/// order and ascending index.
pub fn generate_corpus(
    counts: &BTreeMap<ClassLabel, usize>,
    problem: Problem,
    seed: u64,
) -> Result<Vec<SyntheticSample>> {
    if let Some((&label, _)) = counts.iter().find(|(l, _)| !problem.accepts(**l)) {
        return Err(Error::InvalidLabel {
            id: String::new(),
            label: label.to_string(),
        });
    }
    let mut corpus = Vec::new();
    for &label in problem.labels() {
        for index in 0..counts.get(&label).copied().unwrap_or(0) {
            let id = sample_id(label, index);
            let spec = sample_spec(label, sample_seed(seed, label, index));
            let roi = generate(&spec).map_err(|e| match e {
                Error::DegenerateSpec { reason, .. } => Error::DegenerateSpec {
                    id: id.clone(),
                    reason,
                },
                other => other,
            })?;
            corpus.push(SyntheticSample {
                id,
                label,
                spec,
                roi,
            });
        }
    }
    Ok(corpus)
}

/// Generate and featurize a labeled table.
pub fn generate_dataset(
    counts: &BTreeMap<ClassLabel, usize>,
    problem: Problem,
    seed: u64,
) -> Result<Vec<LabeledSample>> {
    Ok(generate_corpus(counts, problem, seed)?
        .into_iter()
        .map(|s| LabeledSample {
            features: featurize(&s.roi),
            id: s.id,
            label: s.label,
        })
        .collect())
}

/// Training-set class sizes used for each problem: 20 V, 12 X and 21 other
/// for blue; 20 parallel and 20 other for red.
pub fn reference_counts(problem: Problem) -> BTreeMap<ClassLabel, usize> {
    match problem {
        Problem::BlueSignatures => BTreeMap::from([
            (ClassLabel::V, 20),
            (ClassLabel::X, 12),
            (ClassLabel::Other, 21),
        ]),
        Problem::RedParallel => {
            BTreeMap::from([(ClassLabel::Parallel, 20), (ClassLabel::Other, 20)])
        }
    }
}
