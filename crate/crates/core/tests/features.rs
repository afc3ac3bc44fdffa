use fetal_doppler::features::{read_feature_csv_from, write_feature_csv_to};
use fetal_doppler::{
    apply_normalization, featurize, fit_normalization, read_feature_csv, write_feature_csv,
    BinaryMask, BinaryRoi, ClassLabel, Error, FeatureVector, LabeledSample, Normalization,
    FEATURE_COUNT,
};
use proptest::prelude::*;

fn sample(id: &str, label: ClassLabel, values: [f64; FEATURE_COUNT]) -> LabeledSample {
    LabeledSample {
        id: id.to_owned(),
        label,
        features: FeatureVector(values),
    }
}

#[test]
fn rectangle_features_copy_geometry() {
    let roi = BinaryRoi::from_mask(&BinaryMask::from_fn(10, 5, |_, _| true)).unwrap();
    let fv = featurize(&roi);
    assert_eq!(fv.values().len(), 28);
    assert_eq!(&fv.values()[..3], &[10.0, 5.0, 1.0]);
}

#[test]
fn normalization_hand_cases() {
    let mut a = [3.0; FEATURE_COUNT];
    let mut b = [3.0; FEATURE_COUNT];
    a[0] = 4.0;
    b[0] = 8.0;
    let norm =
        fit_normalization(&[sample("a", ClassLabel::V, a), sample("b", ClassLabel::X, b)]).unwrap();
    assert_eq!(norm.means[0], 6.0);
    assert_eq!(norm.stddevs[0], 2.0);
    assert_eq!(norm.means[1], 3.0);
    assert_eq!(norm.stddevs[1], 1.0);

    let single = fit_normalization(&[sample("a", ClassLabel::V, a)]).unwrap();
    assert_eq!(single.means, a);
    assert_eq!(single.stddevs, [1.0; FEATURE_COUNT]);

    assert!(matches!(fit_normalization(&[]), Err(Error::EmptyTable)));
}

#[test]
fn csv_header_and_empty_table() {
    let mut out = Vec::new();
    write_feature_csv_to(&[], &mut out).unwrap();
    let text = String::from_utf8(out).unwrap();
    assert_eq!(text.lines().count(), 1);
    let header: Vec<&str> = text.trim_end().split(',').collect();
    assert_eq!(header.len(), 30);
    assert_eq!(
        &header[..6],
        &["id", "label", "width", "height", "polygon_count", "z0_0"]
    );
    assert_eq!(header[29], "z8_8");
    assert!(read_feature_csv_from(text.as_bytes()).unwrap().is_empty());
}

#[test]
fn short_row_names_row_number() {
    let mut out = Vec::new();
    write_feature_csv_to(
        &[sample("a", ClassLabel::V, [1.0; FEATURE_COUNT])],
        &mut out,
    )
    .unwrap();
    let mut text = String::from_utf8(out).unwrap();
    text.push_str("b,X");
    text.push_str(&",1".repeat(27));
    text.push('\n');
    match read_feature_csv_from(text.as_bytes()) {
        Err(Error::Parse { row, message }) => {
            assert_eq!(row, 3);
            assert!(message.contains("29"), "{message}");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let rows = vec![
        sample("f1", ClassLabel::V, [0.1; FEATURE_COUNT]),
        sample("f2", ClassLabel::Other, [1e-300; FEATURE_COUNT]),
    ];
    write_feature_csv(&rows, &path).unwrap();
    assert_eq!(read_feature_csv(&path).unwrap(), rows);
    assert!(read_feature_csv(&dir.path().join("missing.csv"))
        .unwrap_err()
        .is_io());
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6f64..1e6,
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
    ]
}

fn vector() -> impl Strategy<Value = [f64; FEATURE_COUNT]> {
    proptest::collection::vec(finite(), FEATURE_COUNT)
        .prop_map(|v| <[f64; FEATURE_COUNT]>::try_from(v).unwrap())
}

fn table() -> impl Strategy<Value = Vec<LabeledSample>> {
    proptest::collection::vec((0usize..4, vector()), 0..12).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (l, v))| sample(&format!("id {i}"), ClassLabel::ALL[l], v))
            .collect()
    })
}

proptest! {
    #[test]
    fn csv_round_trip_is_exact(rows in table()) {
        let mut out = Vec::new();
        write_feature_csv_to(&rows, &mut out).unwrap();
        prop_assert_eq!(read_feature_csv_from(out.as_slice()).unwrap(), rows);
    }

    #[test]
    fn normalized_table_is_standardized(
        rows in proptest::collection::vec(proptest::collection::vec(-1e3f64..1e3, FEATURE_COUNT), 2..20)
    ) {
        let samples: Vec<_> = rows.iter().enumerate().map(|(i, v)| {
            sample(&i.to_string(), ClassLabel::V, v.as_slice().try_into().unwrap())
        }).collect();
        let norm = fit_normalization(&samples).unwrap();
        let z: Vec<_> = samples.iter().map(|s| apply_normalization(&norm, &s.features)).collect();
        let n = z.len() as f64;
        for k in 0..FEATURE_COUNT {
            let mean = z.iter().map(|v| v.0[k]).sum::<f64>() / n;
            let var = z.iter().map(|v| (v.0[k] - mean).powi(2)).sum::<f64>() / n;
            prop_assert!(mean.abs() < 1e-9);
            prop_assert!((var - 1.0).abs() < 1e-9 || var < 1e-9);
        }
    }

    #[test]
    fn unit_step_maps_to_ones(means in vector(), sd in proptest::collection::vec(0.5f64..100.0, FEATURE_COUNT)) {
        let means = means.map(|m| m.clamp(-1e6, 1e6));
        let stddevs: [f64; FEATURE_COUNT] = sd.try_into().unwrap();
        let norm = Normalization { means, stddevs };
        let mut step = [0.0; FEATURE_COUNT];
        for k in 0..FEATURE_COUNT {
            step[k] = means[k] + stddevs[k];
        }
        let centered = apply_normalization(&norm, &FeatureVector(means));
        let ones = apply_normalization(&norm, &FeatureVector(step));
        prop_assert!(centered.0.iter().all(|v| *v == 0.0));
        prop_assert!(ones.0.iter().all(|v| (v - 1.0).abs() < 1e-9));
        let identity = apply_normalization(&Normalization::identity(), &FeatureVector(step));
        prop_assert_eq!(identity.0, step);
    }
}
