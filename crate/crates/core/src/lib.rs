//! Segmentation, shape description and nearest-neighbor classification of
//! first-trimester fetal color-Doppler frames.
//!
//! The pipeline turns a decoded color frame into a binary region of interest
//! for one flow color ([`imaging`]), describes that region with width, height,
//! polygon count and 25 Zernike moment magnitudes ([`zernike`], [`features`]),
//! and labels it with the class of the closest training sample
//! ([`classifier`]). [`synthgen`] produces deterministic stand-in shapes for
//! the V, X, parallel and "other" signatures.

pub mod classifier;
pub mod error;
pub mod features;
pub mod imaging;
pub mod synthgen;
pub mod zernike;

pub use classifier::{
    classify, classify_frame, evaluate, load_model, save_model, train, ConfusionMatrix, Model,
    Prediction, Problem,
};
pub use error::{Error, Result};
pub use features::{
    apply_normalization, featurize, fit_normalization, read_feature_csv, write_feature_csv,
    ClassLabel, FeatureVector, LabeledSample, Normalization, FEATURE_COUNT,
};
pub use imaging::{
    color_mask, connected_components, extract_roi, morphological_open, rgb_to_hsv, BinaryMask,
    BinaryRoi, ColorChannel, Component, RgbFrame, SegmentationConfig,
};
pub use synthgen::{generate, generate_dataset, ShapeKind, ShapeSpec};
pub use zernike::{canonical_index_set, zernike_feature_set, ZernikeFeatures, ZernikeIndex};
