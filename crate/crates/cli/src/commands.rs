//! The six subcommands. Each `cmd_*` function runs one command, prints any
//! failure to standard error and returns the process exit code.

use std::collections::BTreeMap;
use std::path::Path;

use clap::{Args, ValueEnum};
use fetal_doppler::classifier::{evaluate_detailed, model_to_json};
use fetal_doppler::features::write_feature_csv_to;
use fetal_doppler::imaging::io::{
    encode_frame_png, encode_roi_pgm, is_frame_file, load_frame, read_roi_pgm,
};
use fetal_doppler::imaging::segment_frame;
use fetal_doppler::synthgen::{generate_corpus, reference_counts, render_frame};
use fetal_doppler::{
    classify, classify_frame, featurize, load_model, read_feature_csv, train, ClassLabel,
    ConfusionMatrix, Error, LabeledSample, Model, Prediction, Problem,
};
use rayon::prelude::*;

use crate::config::{require, CommonArgs, RunConfig};
use crate::error::{CliError, EXIT_OK};
use crate::files::{create_dir, csv_bytes, has_extension, list_inputs, read_labels, write_atomic};

/// Manifest written by `extract` next to the ROI files.
pub const MANIFEST_NAME: &str = "manifest.csv";
/// Label table written by `synth`.
pub const LABELS_NAME: &str = "labels.csv";
/// Manifest entry for frames without a usable ROI.
pub const NO_FOREGROUND: &str = "no_foreground";

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FeaturizeArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Treat the input directory as PGM ROIs written by `extract` instead of color frames.
    #[arg(long)]
    pub rois: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// With a directory input, read PGM ROIs instead of color frames.
    #[arg(long)]
    pub rois: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderMode {
    /// Binary PGM ROIs.
    Rois,
    /// Colored PNG frames.
    Frames,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Per-class sample counts, e.g. `V=20,X=12,Other=21`.
    #[arg(long)]
    pub counts: Option<String>,
    #[arg(long, value_enum, default_value_t = RenderMode::Rois)]
    pub render: RenderMode,
}

fn finish(result: Result<(), CliError>) -> i32 {
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.code
        }
    }
}

pub fn cmd_extract(args: &ExtractArgs) -> i32 {
    finish(extract(args))
}

pub fn cmd_featurize(args: &FeaturizeArgs) -> i32 {
    finish(featurize_rois(args))
}

pub fn cmd_train(args: &TrainArgs) -> i32 {
    finish(train_model(args))
}

pub fn cmd_classify(args: &ClassifyArgs) -> i32 {
    finish(classify_dir(args))
}

pub fn cmd_evaluate(args: &EvaluateArgs) -> i32 {
    finish(evaluate_model(args))
}

pub fn cmd_synth(args: &SynthArgs) -> i32 {
    finish(synth(args))
}

/// Keep results in input order and report the first failure in that order.
fn in_order<T>(results: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    results.into_iter().collect()
}

fn read_roi(path: &Path) -> Result<Option<fetal_doppler::BinaryRoi>, CliError> {
    match read_roi_pgm(path) {
        Ok(roi) => Ok(Some(roi)),
        Err(Error::NoForeground) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn extract(args: &ExtractArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let problem = cfg.require_problem()?;
    let input = require(&cfg.input, "input")?;
    let output = require(&cfg.output, "output")?;
    let frames = list_inputs(input, is_frame_file)?;
    create_dir(output)?;

    let rois = in_order(
        frames
            .par_iter()
            .map(|(id, path)| {
                let frame = load_frame(path)?;
                let roi = match segment_frame(&frame, problem.channel(), &cfg.segmentation) {
                    Ok(roi) => roi,
                    Err(Error::NoForeground) => return Ok(None),
                    Err(e) => return Err(e.into()),
                };
                let name = format!("{id}.pgm");
                write_atomic(&output.join(&name), &encode_roi_pgm(&roi))?;
                Ok(Some(name))
            })
            .collect(),
    )?;

    let manifest = csv_bytes(
        &["frame_id", "roi"],
        frames
            .iter()
            .zip(&rois)
            .map(|((id, _), roi)| [id.as_str(), roi.as_deref().unwrap_or(NO_FOREGROUND)]),
    );
    write_atomic(&output.join(MANIFEST_NAME), &manifest)?;
    let found = rois.iter().filter(|r| r.is_some()).count();
    println!("extracted {found} ROIs from {} frames", frames.len());
    Ok(())
}

pub fn featurize_rois(args: &FeaturizeArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let input = require(&cfg.input, "input")?;
    let labels_path = require(&cfg.labels, "labels")?;
    let output = require(&cfg.output, "output")?;
    let labels = read_labels(labels_path, cfg.problem)?;
    let rois = list_inputs(input, |p| has_extension(p, "pgm"))?;
    if let Some((id, _)) = rois.iter().find(|(id, _)| !labels.contains_key(id)) {
        return Err(CliError::data(
            "missing_label",
            format!("no label for ROI `{id}` in {}", labels_path.display()),
        ));
    }

    let samples = in_order(
        rois.par_iter()
            .map(|(id, path)| {
                let roi = read_roi(path)?.ok_or_else(|| {
                    CliError::data(
                        "no_foreground",
                        format!("{}: ROI has no foreground", path.display()),
                    )
                })?;
                Ok(LabeledSample {
                    id: id.clone(),
                    label: labels[id],
                    features: featurize(&roi),
                })
            })
            .collect(),
    )?;

    let mut bytes = Vec::new();
    write_feature_csv_to(&samples, &mut bytes).expect("in-memory CSV");
    write_atomic(output, &bytes)?;
    println!(
        "wrote {} feature rows to {}",
        samples.len(),
        output.display()
    );
    Ok(())
}

pub fn train_model(args: &TrainArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let problem = cfg.require_problem()?;
    let input = require(&cfg.input, "input")?;
    let output = require(&cfg.output, "output")?;
    let model = train(read_feature_csv(input)?, problem)?;
    write_atomic(output, model_to_json(&model).as_bytes())?;
    println!("trained {problem} model on {} samples", model.len());
    Ok(())
}

fn load_checked_model(cfg: &RunConfig) -> Result<Model, CliError> {
    let model = load_model(require(&cfg.model, "model")?)?;
    match cfg.problem {
        Some(p) if p != model.problem() => Err(CliError::data(
            "problem_mismatch",
            format!("model is for `{}` but --problem is `{p}`", model.problem()),
        )),
        _ => Ok(model),
    }
}

/// Predictions for every frame (or ROI) in a directory, ordered by id.
pub fn predict_dir(
    model: &Model,
    dir: &Path,
    rois: bool,
    cfg: &RunConfig,
) -> Result<Vec<(String, Prediction)>, CliError> {
    let inputs = if rois {
        list_inputs(dir, |p| has_extension(p, "pgm"))?
    } else {
        list_inputs(dir, is_frame_file)?
    };
    let predictions = in_order(
        inputs
            .par_iter()
            .map(|(_, path)| {
                if rois {
                    Ok(match read_roi(path)? {
                        Some(roi) => classify(model, &featurize(&roi)),
                        None => Prediction::no_foreground(),
                    })
                } else {
                    Ok(classify_frame(model, &load_frame(path)?, &cfg.segmentation))
                }
            })
            .collect(),
    )?;
    Ok(inputs
        .into_iter()
        .map(|(id, _)| id)
        .zip(predictions)
        .collect())
}

pub fn classify_dir(args: &ClassifyArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let model = load_checked_model(&cfg)?;
    let input = require(&cfg.input, "input")?;
    let output = require(&cfg.output, "output")?;
    let predictions = predict_dir(&model, input, args.rois, &cfg)?;
    let report = csv_bytes(
        &["id", "predicted", "distance", "neighbor_id"],
        predictions.iter().map(|(id, p)| {
            [
                id.clone(),
                p.label.to_string(),
                p.distance.to_string(),
                p.neighbor_id.clone(),
            ]
        }),
    );
    write_atomic(output, &report)?;
    println!("classified {} inputs", predictions.len());
    Ok(())
}

pub fn evaluate_model(args: &EvaluateArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let model = load_checked_model(&cfg)?;
    let input = require(&cfg.input, "input")?;

    let mut rows: Vec<(String, ClassLabel, Prediction)> = Vec::new();
    let matrix = if input.is_dir() {
        let truth = read_labels(require(&cfg.labels, "labels")?, Some(model.problem()))?;
        let mut matrix = ConfusionMatrix::new(model.problem().labels());
        for (id, prediction) in predict_dir(&model, input, args.rois, &cfg)? {
            let label = *truth.get(&id).ok_or_else(|| {
                CliError::data("missing_label", format!("no truth label for `{id}`"))
            })?;
            matrix.record(label, prediction.label)?;
            rows.push((id, label, prediction));
        }
        matrix
    } else {
        let (matrix, detailed) = evaluate_detailed(&model, &read_feature_csv(input)?)?;
        rows.extend(detailed.into_iter().map(|r| (r.id, r.truth, r.prediction)));
        rows.sort_by(|a, b| a.0.cmp(&b.0));
        matrix
    };

    println!("{matrix}");
    if let Some(output) = &cfg.output {
        let report = csv_bytes(
            &["id", "truth", "predicted", "distance", "neighbor_id"],
            rows.iter().map(|(id, truth, p)| {
                [
                    id.clone(),
                    truth.to_string(),
                    p.label.to_string(),
                    p.distance.to_string(),
                    p.neighbor_id.clone(),
                ]
            }),
        );
        write_atomic(output, &report)?;
    }
    Ok(())
}

/// Parse `Label=count` pairs separated by commas.
pub fn parse_counts(text: &str, problem: Problem) -> Result<BTreeMap<ClassLabel, usize>, CliError> {
    let mut counts = BTreeMap::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (label, count) = part.split_once('=').ok_or_else(|| {
            CliError::usage(format!("--counts entry `{part}` is not Label=count"))
        })?;
        let label: ClassLabel = label.trim().parse().map_err(CliError::usage)?;
        let count: usize = count
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("--counts entry `{part}` has a bad count")))?;
        if !problem.accepts(label) {
            return Err(Error::InvalidLabel {
                id: String::new(),
                label: label.to_string(),
            }
            .into());
        }
        if counts.insert(label, count).is_some() {
            return Err(CliError::usage(format!("--counts repeats {label}")));
        }
    }
    Ok(counts)
}

pub fn synth(args: &SynthArgs) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&args.common)?;
    let problem = cfg.require_problem()?;
    let output = require(&cfg.output, "output")?;
    let seed = cfg.seed.unwrap_or(0);
    let counts = match &args.counts {
        Some(text) => parse_counts(text, problem)?,
        None => reference_counts(problem),
    };
    let mut corpus = generate_corpus(&counts, problem, seed)?;
    corpus.sort_by(|a, b| a.id.cmp(&b.id));
    create_dir(output)?;

    in_order(
        corpus
            .par_iter()
            .map(|s| match args.render {
                RenderMode::Rois => write_atomic(
                    &output.join(format!("{}.pgm", s.id)),
                    &encode_roi_pgm(&s.roi),
                ),
                RenderMode::Frames => {
                    let frame = render_frame(&s.roi, problem.channel(), s.spec.seed);
                    write_atomic(
                        &output.join(format!("{}.png", s.id)),
                        &encode_frame_png(&frame),
                    )
                }
            })
            .collect(),
    )?;

    let labels = csv_bytes(
        &["id", "label"],
        corpus.iter().map(|s| [s.id.as_str(), s.label.as_str()]),
    );
    write_atomic(&output.join(LABELS_NAME), &labels)?;
    println!(
        "generated {} {problem} samples with seed {seed}",
        corpus.len()
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_parsing() {
        let c = parse_counts("V=2, X=0,Other=5", Problem::BlueSignatures).unwrap();
        assert_eq!(c[&ClassLabel::V], 2);
        assert_eq!(c[&ClassLabel::Other], 5);
        assert_eq!(
            parse_counts("V=1,V=2", Problem::BlueSignatures)
                .unwrap_err()
                .kind,
            "usage"
        );
        assert_eq!(
            parse_counts("V:1", Problem::BlueSignatures)
                .unwrap_err()
                .kind,
            "usage"
        );
        assert_eq!(
            parse_counts("Q=1", Problem::BlueSignatures)
                .unwrap_err()
                .kind,
            "usage"
        );
        assert_eq!(
            parse_counts("Parallel=1", Problem::BlueSignatures)
                .unwrap_err()
                .kind,
            "invalid_label"
        );
    }
}
