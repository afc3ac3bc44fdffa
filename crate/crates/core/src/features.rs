//! The 28-value frame descriptor, z-score normalization and feature tables.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imaging::BinaryRoi;
use crate::zernike::{canonical_index_set, zernike_feature_set, ZERNIKE_COUNT};

/// Width, height, polygon count and the 25 Zernike magnitudes.
pub const FEATURE_COUNT: usize = 3 + ZERNIKE_COUNT;

/// Standard deviations below this are replaced by 1.
const MIN_STDDEV: f64 = 1e-12;

/// Ordered frame descriptor: `[width, height, polygon_count, z0_0, z1_1, ..., z8_8]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector(#[serde(with = "fixed_array")] pub [f64; FEATURE_COUNT]);

impl FeatureVector {
    pub fn values(&self) -> &[f64; FEATURE_COUNT] {
        &self.0
    }

    pub fn width(&self) -> f64 {
        self.0[0]
    }

    pub fn height(&self) -> f64 {
        self.0[1]
    }

    pub fn polygon_count(&self) -> f64 {
        self.0[2]
    }

    pub fn zernike(&self) -> &[f64] {
        &self.0[3..]
    }

    /// Squared Euclidean distance.
    pub fn distance_sq(&self, other: &FeatureVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

impl TryFrom<&[f64]> for FeatureVector {
    type Error = Error;

    fn try_from(values: &[f64]) -> Result<Self> {
        let array: [f64; FEATURE_COUNT] = values.try_into().map_err(|_| {
            Error::parse(
                0,
                format!("expected {FEATURE_COUNT} features, got {}", values.len()),
            )
        })?;
        Ok(FeatureVector(array))
    }
}

mod fixed_array {
    use super::FEATURE_COUNT;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64; FEATURE_COUNT], s: S) -> Result<S::Ok, S::Error> {
        v.as_slice().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; FEATURE_COUNT], D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        let len = v.len();
        v.try_into()
            .map_err(|_| D::Error::custom(format!("expected {FEATURE_COUNT} values, got {len}")))
    }
}

/// Column names of the descriptor, in order.
pub fn feature_names() -> Vec<String> {
    let mut names = vec!["width".to_owned(), "height".into(), "polygon_count".into()];
    names.extend(canonical_index_set().iter().map(|i| i.column_name()));
    names
}

/// Describe a ROI by its size, component count and Zernike magnitudes.
pub fn featurize(roi: &BinaryRoi) -> FeatureVector {
    let mut v = [0.0; FEATURE_COUNT];
    v[0] = roi.width() as f64;
    v[1] = roi.height() as f64;
    v[2] = roi.polygon_count() as f64;
    v[3..].copy_from_slice(&zernike_feature_set(roi).values);
    FeatureVector(v)
}

/// Frame class across both problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    V,
    X,
    Parallel,
    Other,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 4] = [
        ClassLabel::V,
        ClassLabel::X,
        ClassLabel::Parallel,
        ClassLabel::Other,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ClassLabel::V => "V",
            ClassLabel::X => "X",
            ClassLabel::Parallel => "Parallel",
            ClassLabel::Other => "Other",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ClassLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| format!("unknown label `{s}`"))
    }
}

/// One row of a feature table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub id: String,
    pub label: ClassLabel,
    pub features: FeatureVector,
}

/// Per-feature mean and standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    #[serde(with = "fixed_array")]
    pub means: [f64; FEATURE_COUNT],
    #[serde(with = "fixed_array")]
    pub stddevs: [f64; FEATURE_COUNT],
}

impl Normalization {
    pub fn identity() -> Self {
        Self {
            means: [0.0; FEATURE_COUNT],
            stddevs: [1.0; FEATURE_COUNT],
        }
    }
}

/// Population mean and standard deviation of each feature; features with
/// (near) zero spread get a standard deviation of 1.
pub fn fit_normalization(samples: &[LabeledSample]) -> Result<Normalization> {
    if samples.is_empty() {
        return Err(Error::EmptyTable);
    }
    let n = samples.len() as f64;
    let mut means = [0.0; FEATURE_COUNT];
    for s in samples {
        for (m, v) in means.iter_mut().zip(s.features.values()) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut stddevs = [0.0; FEATURE_COUNT];
    for s in samples {
        for ((sd, v), m) in stddevs.iter_mut().zip(s.features.values()).zip(&means) {
            *sd += (v - m) * (v - m);
        }
    }
    for sd in &mut stddevs {
        *sd = (*sd / n).sqrt();
        if *sd < MIN_STDDEV {
            *sd = 1.0;
        }
    }
    Ok(Normalization { means, stddevs })
}

pub fn apply_normalization(norm: &Normalization, fv: &FeatureVector) -> FeatureVector {
    let mut out = [0.0; FEATURE_COUNT];
    for (k, o) in out.iter_mut().enumerate() {
        *o = (fv.0[k] - norm.means[k]) / norm.stddevs[k];
    }
    FeatureVector(out)
}

fn csv_header() -> Vec<String> {
    let mut header = vec!["id".to_owned(), "label".to_owned()];
    header.extend(feature_names());
    header
}

/// Write a feature table as CSV. Reals use the shortest representation that
/// parses back to the identical value.
pub fn write_feature_csv_to<W: Write>(samples: &[LabeledSample], out: W) -> std::io::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(csv_header())?;
    for s in samples {
        let mut record = Vec::with_capacity(FEATURE_COUNT + 2);
        record.push(s.id.clone());
        record.push(s.label.to_string());
        record.extend(s.features.values().iter().map(|v| v.to_string()));
        writer.write_record(&record)?;
    }
    writer.flush()
}

pub fn write_feature_csv(samples: &[LabeledSample], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_feature_csv_to(samples, file).map_err(|e| Error::io(path, e))
}

/// Parse a feature table. Row numbers in errors count the header as row 1.
pub fn read_feature_csv_from<R: Read>(input: R) -> Result<Vec<LabeledSample>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = reader.records();
    let expected = csv_header();
    match records.next() {
        None => return Err(Error::parse(1, "missing header row")),
        Some(header) => {
            let header = header.map_err(|e| Error::parse(1, e.to_string()))?;
            if header.iter().ne(expected.iter().map(String::as_str)) {
                return Err(Error::parse(1, "header does not match the feature schema"));
            }
        }
    }
    let mut samples = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (i, record) in records.enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| Error::parse(row, e.to_string()))?;
        if record.len() != expected.len() {
            return Err(Error::parse(
                row,
                format!("expected {} columns, got {}", expected.len(), record.len()),
            ));
        }
        let id = record[0].to_owned();
        if id.is_empty() {
            return Err(Error::parse(row, "empty id"));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::parse(row, format!("duplicate id `{id}`")));
        }
        let label: ClassLabel = record[1]
            .parse()
            .map_err(|e: String| Error::parse(row, e))?;
        let mut values = [0.0; FEATURE_COUNT];
        for (k, v) in values.iter_mut().enumerate() {
            let field = &record[k + 2];
            *v = field.parse().map_err(|_| {
                Error::parse(
                    row,
                    format!("column {} is not a number: `{field}`", expected[k + 2]),
                )
            })?;
        }
        samples.push(LabeledSample {
            id,
            label,
            features: FeatureVector(values),
        });
    }
    Ok(samples)
}

pub fn read_feature_csv(path: &Path) -> Result<Vec<LabeledSample>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_feature_csv_from(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::BinaryMask;

    fn sample(id: &str, label: ClassLabel, f0: f64) -> LabeledSample {
        let mut v = [0.5; FEATURE_COUNT];
        v[0] = f0;
        LabeledSample {
            id: id.into(),
            label,
            features: FeatureVector(v),
        }
    }

    #[test]
    fn featurize_copies_geometry() {
        let roi = BinaryRoi::from_mask(&BinaryMask::from_fn(10, 5, |_, _| true)).unwrap();
        let fv = featurize(&roi);
        assert_eq!(fv.values().len(), 28);
        assert_eq!(&fv.values()[..3], &[10.0, 5.0, 1.0]);
        assert_eq!(featurize(&roi), fv);
    }

    #[test]
    fn padding_changes_only_width_and_height() {
        let roi = BinaryRoi::from_mask(&BinaryMask::from_fn(12, 9, |x, y| x == y || x == 11 - y))
            .unwrap();
        let padded = roi.padded(3, 0, 5, 2);
        let (a, b) = (featurize(&roi), featurize(&padded));
        assert_eq!((b.width(), b.height()), (20.0, 11.0));
        assert_eq!(a.polygon_count(), b.polygon_count());
        for (x, y) in a.zernike().iter().zip(b.zernike()) {
            assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn normalization_single_sample() {
        let s = sample("a", ClassLabel::V, 3.0);
        let n = fit_normalization(std::slice::from_ref(&s)).unwrap();
        assert_eq!(n.means, *s.features.values());
        assert!(n.stddevs.iter().all(|&sd| sd == 1.0));
    }

    #[test]
    fn normalization_two_samples() {
        let table = [
            sample("a", ClassLabel::V, 4.0),
            sample("b", ClassLabel::X, 8.0),
        ];
        let n = fit_normalization(&table).unwrap();
        assert_eq!(n.means[0], 6.0);
        assert_eq!(n.stddevs[0], 2.0);
        // constant features fall back to 1
        assert_eq!(n.stddevs[5], 1.0);
        assert!(matches!(fit_normalization(&[]), Err(Error::EmptyTable)));
    }

    #[test]
    fn apply_normalization_cases() {
        let norm = Normalization {
            means: std::array::from_fn(|k| k as f64),
            stddevs: std::array::from_fn(|k| 0.5 + k as f64),
        };
        let at_mean = FeatureVector(norm.means);
        assert!(apply_normalization(&norm, &at_mean)
            .values()
            .iter()
            .all(|&v| v == 0.0));
        let one_step = FeatureVector(std::array::from_fn(|k| norm.means[k] + norm.stddevs[k]));
        assert!(apply_normalization(&norm, &one_step)
            .values()
            .iter()
            .all(|&v| (v - 1.0).abs() < 1e-15));
        let fv = FeatureVector(std::array::from_fn(|k| (k * k) as f64 - 3.0));
        assert_eq!(apply_normalization(&Normalization::identity(), &fv), fv);
    }

    #[test]
    fn empty_table_is_header_only() {
        let mut buf = Vec::new();
        write_feature_csv_to(&[], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "id,label,width,height,polygon_count,z0_0,z1_1,z2_0,z2_2,z3_1,z3_3,z4_0,z4_2,z4_4,\
             z5_1,z5_3,z5_5,z6_0,z6_2,z6_4,z6_6,z7_1,z7_3,z7_5,z7_7,z8_0,z8_2,z8_4,z8_6,z8_8\n"
        );
        assert!(read_feature_csv_from(text.as_bytes()).unwrap().is_empty());
    }

    #[test]
    fn round_trip_is_exact() {
        let mut s = sample("frame,01", ClassLabel::Parallel, 0.1 + 0.2);
        s.features.0[7] = 1.0 / 3.0;
        s.features.0[8] = 5e-300;
        let table = vec![s, sample("b", ClassLabel::Other, 17.0)];
        let mut buf = Vec::new();
        write_feature_csv_to(&table, &mut buf).unwrap();
        assert_eq!(read_feature_csv_from(buf.as_slice()).unwrap(), table);
    }

    #[test]
    fn short_row_names_its_row() {
        let mut buf = Vec::new();
        write_feature_csv_to(&[sample("a", ClassLabel::V, 1.0)], &mut buf).unwrap();
        let mut text = String::from_utf8(buf).unwrap();
        text.push_str("b,X");
        for _ in 0..27 {
            text.push_str(",1");
        }
        text.push('\n');
        match read_feature_csv_from(text.as_bytes()) {
            Err(Error::Parse { row, message }) => {
                assert_eq!(row, 3);
                assert!(message.contains("29"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_label_and_bad_header() {
        let mut buf = Vec::new();
        write_feature_csv_to(&[sample("a", ClassLabel::V, 1.0)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lowercase = text.replace("\na,V,", "\na,v,");
        assert!(matches!(
            read_feature_csv_from(lowercase.as_bytes()),
            Err(Error::Parse { row: 2, .. })
        ));
        let bad_header = text.replacen("width", "w", 1);
        assert!(matches!(
            read_feature_csv_from(bad_header.as_bytes()),
            Err(Error::Parse { row: 1, .. })
        ));
    }

    #[test]
    fn labels_parse_case_sensitively() {
        for l in ClassLabel::ALL {
            assert_eq!(l.as_str().parse::<ClassLabel>().unwrap(), l);
        }
        assert!("parallel".parse::<ClassLabel>().is_err());
    }
}
