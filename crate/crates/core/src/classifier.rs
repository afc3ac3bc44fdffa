//! Nearest-neighbor frame classification.
//!
//! A [`Model`] memorizes its raw training table and the z-score
//! normalization fitted over it. A query is normalized the same way and takes
//! the label of the training sample at the smallest Euclidean distance; exact
//! ties go to the lexicographically smallest sample id.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{
    apply_normalization, featurize, fit_normalization, ClassLabel, FeatureVector, LabeledSample,
    Normalization,
};
use crate::imaging::{segment_frame, ColorChannel, RgbFrame, SegmentationConfig};

/// Current model file format version.
pub const MODEL_VERSION: u64 = 1;

/// The two independent classification problems, one per flow color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Problem {
    /// Blue flow: V, X or other.
    #[serde(rename = "blue")]
    BlueSignatures,
    /// Red flow: two parallel lines or other.
    #[serde(rename = "red")]
    RedParallel,
}

impl Problem {
    pub fn labels(&self) -> &'static [ClassLabel] {
        match self {
            Problem::BlueSignatures => &[ClassLabel::V, ClassLabel::X, ClassLabel::Other],
            Problem::RedParallel => &[ClassLabel::Parallel, ClassLabel::Other],
        }
    }

    pub fn channel(&self) -> ColorChannel {
        match self {
            Problem::BlueSignatures => ColorChannel::Blue,
            Problem::RedParallel => ColorChannel::Red,
        }
    }

    pub fn accepts(&self, label: ClassLabel) -> bool {
        self.labels().contains(&label)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Problem::BlueSignatures => "blue",
            Problem::RedParallel => "red",
        }
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "blue" => Ok(Problem::BlueSignatures),
            "red" => Ok(Problem::RedParallel),
            _ => Err(format!("unknown problem `{s}` (expected blue or red)")),
        }
    }
}

/// Trained 1-NN classifier for one problem.
#[derive(Debug, Clone)]
pub struct Model {
    problem: Problem,
    samples: Vec<LabeledSample>,
    normalization: Normalization,
    normalized: Vec<FeatureVector>,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.problem == other.problem
            && self.samples == other.samples
            && self.normalization == other.normalization
    }
}

impl Model {
    pub fn problem(&self) -> Problem {
        self.problem
    }

    pub fn samples(&self) -> &[LabeledSample] {
        &self.samples
    }

    pub fn normalization(&self) -> &Normalization {
        &self.normalization
    }

    pub fn version(&self) -> u64 {
        MODEL_VERSION
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

fn validate_table(samples: &[LabeledSample], problem: Problem) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut ids = HashSet::with_capacity(samples.len());
    for s in samples {
        if !problem.accepts(s.label) {
            return Err(Error::InvalidLabel {
                id: s.id.clone(),
                label: s.label.to_string(),
            });
        }
        if !ids.insert(s.id.as_str()) {
            return Err(Error::DuplicateId(s.id.clone()));
        }
    }
    Ok(())
}

/// Memorize the table and fit its normalization.
pub fn train(samples: Vec<LabeledSample>, problem: Problem) -> Result<Model> {
    validate_table(&samples, problem)?;
    let normalization = fit_normalization(&samples)?;
    let normalized = samples
        .iter()
        .map(|s| apply_normalization(&normalization, &s.features))
        .collect();
    Ok(Model {
        problem,
        samples,
        normalization,
        normalized,
    })
}

/// Outcome of classifying one frame or vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: ClassLabel,
    /// Euclidean distance in normalized feature space; `+inf` when the frame
    /// had no usable foreground.
    pub distance: f64,
    /// Id of the nearest training sample, empty when there was none.
    pub neighbor_id: String,
}

impl Prediction {
    /// Policy result for frames whose channel has no retained component.
    pub fn no_foreground() -> Self {
        Self {
            label: ClassLabel::Other,
            distance: f64::INFINITY,
            neighbor_id: String::new(),
        }
    }
}

pub fn classify(model: &Model, fv: &FeatureVector) -> Prediction {
    let query = apply_normalization(&model.normalization, fv);
    let mut best: Option<(f64, usize)> = None;
    for (i, train) in model.normalized.iter().enumerate() {
        let d = query.distance_sq(train);
        best = match best {
            None => Some((d, i)),
            Some((bd, bi)) => {
                if d < bd || (d == bd && model.samples[i].id < model.samples[bi].id) {
                    Some((d, i))
                } else {
                    Some((bd, bi))
                }
            }
        };
    }
    let (d, i) = best.expect("models are never empty");
    Prediction {
        label: model.samples[i].label,
        distance: d.sqrt(),
        neighbor_id: model.samples[i].id.clone(),
    }
}

/// Segment the frame for the model's color and classify the resulting ROI.
/// Frames without a usable ROI are labeled Other.
pub fn classify_frame(model: &Model, frame: &RgbFrame, cfg: &SegmentationConfig) -> Prediction {
    match segment_frame(frame, model.problem.channel(), cfg) {
        Ok(roi) => classify(model, &featurize(&roi)),
        Err(_) => Prediction::no_foreground(),
    }
}

/// Truth-by-prediction count table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    labels: Vec<ClassLabel>,
    /// `counts[truth][predicted]`, indexed like `labels`.
    counts: Vec<Vec<u64>>,
}

impl ConfusionMatrix {
    pub fn new(labels: &[ClassLabel]) -> Self {
        Self {
            labels: labels.to_vec(),
            counts: vec![vec![0; labels.len()]; labels.len()],
        }
    }

    fn index(&self, label: ClassLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn record(&mut self, truth: ClassLabel, predicted: ClassLabel) -> Result<()> {
        let invalid = |l: ClassLabel| Error::InvalidLabel {
            id: String::new(),
            label: l.to_string(),
        };
        let t = self.index(truth).ok_or_else(|| invalid(truth))?;
        let p = self.index(predicted).ok_or_else(|| invalid(predicted))?;
        self.counts[t][p] += 1;
        Ok(())
    }

    pub fn labels(&self) -> &[ClassLabel] {
        &self.labels
    }

    pub fn count(&self, truth: ClassLabel, predicted: ClassLabel) -> u64 {
        match (self.index(truth), self.index(predicted)) {
            (Some(t), Some(p)) => self.counts[t][p],
            _ => 0,
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..self.labels.len()).map(|i| self.counts[i][i]).sum()
    }

    pub fn accuracy(&self) -> f64 {
        ratio(self.trace(), self.total())
    }

    fn row_total(&self, t: usize) -> u64 {
        self.counts[t].iter().sum()
    }

    fn column_total(&self, p: usize) -> u64 {
        self.counts.iter().map(|row| row[p]).sum()
    }

    /// Fraction of `label` truths predicted as `label`; 0 when there are none.
    pub fn recall(&self, label: ClassLabel) -> f64 {
        self.index(label)
            .map_or(0.0, |i| ratio(self.counts[i][i], self.row_total(i)))
    }

    /// Fraction of `label` predictions that were correct; 0 when there are none.
    pub fn precision(&self, label: ClassLabel) -> f64 {
        self.index(label)
            .map_or(0.0, |i| ratio(self.counts[i][i], self.column_total(i)))
    }

    /// Mean recall over the labels that occur in the truth set.
    pub fn macro_recall(&self) -> f64 {
        let present: Vec<usize> = (0..self.labels.len())
            .filter(|&i| self.row_total(i) > 0)
            .collect();
        if present.is_empty() {
            return 0.0;
        }
        present
            .iter()
            .map(|&i| ratio(self.counts[i][i], self.row_total(i)))
            .sum::<f64>()
            / present.len() as f64
    }

    /// Fraction of `truth` samples that were predicted as `predicted`.
    pub fn confusion_rate(&self, truth: ClassLabel, predicted: ClassLabel) -> f64 {
        self.index(truth).map_or(0.0, |t| {
            ratio(self.count(truth, predicted), self.row_total(t))
        })
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .labels
            .iter()
            .map(|l| l.as_str().len())
            .max()
            .unwrap_or(0)
            .max(9);
        write!(f, "{:>width$}", "truth\\pred")?;
        for l in &self.labels {
            write!(f, " {:>width$}", l.as_str())?;
        }
        writeln!(f)?;
        for (t, row) in self.labels.iter().zip(&self.counts) {
            write!(f, "{:>width$}", t.as_str())?;
            for c in row {
                write!(f, " {c:>width$}")?;
            }
            writeln!(f)?;
        }
        writeln!(f)?;
        for l in &self.labels {
            writeln!(
                f,
                "{:<9} recall {:.4} precision {:.4}",
                l.as_str(),
                self.recall(*l),
                self.precision(*l)
            )?;
        }
        writeln!(
            f,
            "accuracy {:.4} ({}/{})",
            self.accuracy(),
            self.trace(),
            self.total()
        )?;
        write!(f, "macro recall {:.4}", self.macro_recall())
    }
}

/// One evaluated truth sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRow {
    pub id: String,
    pub truth: ClassLabel,
    pub prediction: Prediction,
}

/// Classify every truth sample, keeping the individual predictions.
pub fn evaluate_detailed(
    model: &Model,
    truth: &[LabeledSample],
) -> Result<(ConfusionMatrix, Vec<EvaluationRow>)> {
    if truth.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut matrix = ConfusionMatrix::new(model.problem.labels());
    let mut rows = Vec::with_capacity(truth.len());
    for s in truth {
        if !model.problem.accepts(s.label) {
            return Err(Error::InvalidLabel {
                id: s.id.clone(),
                label: s.label.to_string(),
            });
        }
        let prediction = classify(model, &s.features);
        matrix.record(s.label, prediction.label)?;
        rows.push(EvaluationRow {
            id: s.id.clone(),
            truth: s.label,
            prediction,
        });
    }
    Ok((matrix, rows))
}

pub fn evaluate(model: &Model, truth: &[LabeledSample]) -> Result<ConfusionMatrix> {
    evaluate_detailed(model, truth).map(|(m, _)| m)
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u64,
    problem: Problem,
    normalization: Normalization,
    samples: Vec<LabeledSample>,
}

pub fn model_to_json(model: &Model) -> String {
    let file = ModelFile {
        version: MODEL_VERSION,
        problem: model.problem,
        normalization: model.normalization.clone(),
        samples: model.samples.clone(),
    };
    let mut json = serde_json::to_string_pretty(&file).expect("model serializes");
    json.push('\n');
    json
}

/// Parse a model document, checking its version and that the stored
/// normalization is the one fitted over the stored samples.
pub fn model_from_json(text: &str) -> Result<Model> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
    let version = value
        .get("version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::parse(0, "missing or non-integer `version`"))?;
    if version != MODEL_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: MODEL_VERSION,
        });
    }
    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| Error::parse(0, e.to_string()))?;
    let model = train(file.samples, file.problem)?;
    if model.normalization != file.normalization {
        return Err(Error::parse(
            0,
            "stored normalization does not match the stored samples",
        ));
    }
    Ok(model)
}

pub fn save_model(model: &Model, path: &Path) -> Result<()> {
    fs::write(path, model_to_json(model)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<Model> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    model_from_json(&text)
}
