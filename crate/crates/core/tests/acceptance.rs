//! End-to-end acceptance checks, one per release criterion. Each test prints
//! a single `criterion N: pass` line; a panic marks the criterion failed.

use hetdist_core::classifier::{FitConfig, Model};
use hetdist_core::dataset::{parse_data, parse_schema, Dataset, Value};
use hetdist_core::eval::{self, Confidence};
use hetdist_core::metrics::{self, HvdmNorm, MetricKind, PreparedMetric};
use hetdist_core::vdm_stats::{self, CellKey, DiscretizationConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn load_iris() -> Dataset<f64> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let schema = parse_schema(&std::fs::read_to_string(dir.join("iris.schema")).unwrap()).unwrap();
    parse_data(
        &std::fs::read_to_string(dir.join("iris.data")).unwrap(),
        &schema,
    )
    .unwrap()
}

fn assert_close(got: &[f64], want: &[f64], tolerance: f64, context: &str) {
    assert_eq!(got.len(), want.len(), "{context}");
    for (g, w) in got.iter().zip(want) {
        assert!((g - w).abs() < tolerance, "{context}: {got:?} vs {want:?}");
    }
}

/// A single continuous attribute whose first two intervals learn the
/// documented golden probabilities (.867, .100, .033) and
/// (.485, .455, .061), with the range pinned to [4.3, 7.9] so the interval
/// width is exactly 0.72.
#[test]
fn criterion_1_single_attribute_probability_golden_values() {
    let schema = parse_schema("attribute sepal_length continuous\nclass species a b c").unwrap();
    let mut rows = String::from("4.3,a\n");
    rows.push_str(&"4.5,a\n".repeat(25));
    rows.push_str(&"4.5,b\n".repeat(3));
    rows.push_str("4.5,c\n");
    rows.push_str(&"5.1,a\n".repeat(16));
    rows.push_str(&"5.1,b\n".repeat(15));
    rows.push_str(&"5.1,c\n".repeat(2));
    rows.push_str("7.9,c\n");
    let data: Dataset<f64> = parse_data(&rows, &schema).unwrap();
    let stats = &data.stats[0];
    assert_eq!(stats.min, 4.3);
    assert_eq!(stats.max, 7.9);

    let config = DiscretizationConfig::default();
    let table = vdm_stats::learn_p(&data, &config);
    assert_eq!(table.intervals(), 5);
    let width = table.width(0);
    assert!((width - 0.72).abs() < 1e-12, "{width}");

    // (a) interval assignment around the first boundary
    assert_eq!(vdm_stats::discretize(5.0, stats, 5, width), 1);
    assert_eq!(vdm_stats::discretize(5.1, stats, 5, width), 2);
    assert_eq!(vdm_stats::discretize(5.7, stats, 5, width), 2);

    // learned interval probabilities reproduce the golden vectors
    let p1 = table.probabilities(0, CellKey::Interval(1)).to_vec();
    let p2 = table.probabilities(0, CellKey::Interval(2)).to_vec();
    assert_close(&p1, &[0.867, 0.100, 0.033], 1e-3, "interval 1");
    assert_close(&p2, &[0.485, 0.455, 0.061], 1e-3, "interval 2");

    // (b) squared-difference distance between the two intervals
    let d = metrics::vdm_a(&p1, &p2);
    assert!((d - 0.273).abs() < 1e-3, "{d}");

    // (c) interpolated vectors between the first two interval centers
    let at_51 = vdm_stats::interpolate_probs(5.1, 0, &table, stats);
    assert_close(&at_51, &[0.634, 0.317, 0.050], 1e-3, "interpolated at 5.1");
    let at_50 = vdm_stats::interpolate_probs(5.0, 0, &table, stats);
    assert_close(&at_50, &[0.687, 0.268, 0.046], 1e-3, "interpolated at 5.0");

    // (d) interpolated per-attribute contribution between 5.1 and 5.0
    let metric = PreparedMetric::prepare(&data, MetricKind::Ivdm, &config);
    let contribution = metric.attribute_distance(0, Value::Number(5.1), Value::Number(5.0));
    assert!((contribution - 0.005).abs() < 1e-3, "{contribution}");

    println!("criterion 1: pass — golden interval probabilities, interpolation, and contributions");
}

/// Ten-fold cross-validation on the iris measurements, averaged over five
/// fold seeds, lands in the documented accuracy bands for the three
/// probability metrics.
#[test]
fn criterion_2_iris_accuracy_within_reference_ranges() {
    let data = load_iris();
    let kinds = [MetricKind::Dvdm, MetricKind::Ivdm, MetricKind::Wvdm];
    let seeds = [0u64, 1, 2, 3, 4];
    let mut means = [0.0f64; 3];
    for &seed in &seeds {
        let plan = eval::make_folds(data.instance_count(), 10, seed).unwrap();
        let report = eval::cross_validate(&data, &kinds, &plan, &FitConfig::default()).unwrap();
        for (mean, result) in means.iter_mut().zip(&report.results) {
            *mean += result.mean_accuracy;
        }
    }
    for mean in &mut means {
        *mean /= seeds.len() as f64;
    }
    let [dvdm, ivdm, wvdm] = means;
    assert!((0.89..=0.95).contains(&dvdm), "dvdm mean accuracy {dvdm}");
    assert!((0.915..=0.98).contains(&ivdm), "ivdm mean accuracy {ivdm}");
    assert!((0.93..=0.99).contains(&wvdm), "wvdm mean accuracy {wvdm}");
    println!(
        "criterion 2: pass — seed-averaged accuracies dvdm {dvdm:.4}, ivdm {ivdm:.4}, wvdm {wvdm:.4}"
    );
}

/// On purely nominal data the four class-probability metrics are the same
/// function: all pairwise distances agree to within accumulated rounding.
#[test]
fn criterion_3_nominal_only_probability_metrics_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(30);
    for case in 0..50 {
        let m: usize = rng.gen_range(1..=8);
        let classes: usize = rng.gen_range(2..=5);
        let n: usize = rng.gen_range(10..=100);
        let vocab: Vec<usize> = (0..m).map(|_| rng.gen_range(2..=4)).collect();
        let mut schema_text = String::new();
        for a in 0..m {
            schema_text.push_str(&format!("attribute a{a} nominal\n"));
        }
        schema_text.push_str("class y");
        for k in 0..classes {
            schema_text.push_str(&format!(" c{k}"));
        }
        let schema = parse_schema(&schema_text).unwrap();
        let mut rows = String::new();
        for i in 0..n {
            for &v in &vocab {
                rows.push_str(&format!("v{},", rng.gen_range(0..v)));
            }
            let class = if i < classes {
                i
            } else {
                rng.gen_range(0..classes)
            };
            rows.push_str(&format!("c{class}\n"));
        }
        let data: Dataset<f64> = parse_data(&rows, &schema).unwrap();
        let kinds = [
            MetricKind::Hvdm(HvdmNorm::N2),
            MetricKind::Dvdm,
            MetricKind::Ivdm,
            MetricKind::Wvdm,
        ];
        let prepared: Vec<_> = kinds
            .iter()
            .map(|&k| PreparedMetric::prepare(&data, k, &Default::default()))
            .collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let reference = prepared[0]
                    .distance(&data.instances[i], &data.instances[j])
                    .unwrap();
                for p in &prepared[1..] {
                    let d = p.distance(&data.instances[i], &data.instances[j]).unwrap();
                    assert!(
                        (d - reference).abs() < 1e-9,
                        "case {case}: pair {i},{j}: {} gives {d} vs {reference}",
                        p.kind()
                    );
                }
            }
        }
    }
    println!("criterion 3: pass — hvdm/dvdm/ivdm/wvdm agree on 50 nominal-only datasets");
}

/// On purely continuous data, scaling every per-attribute distance by the
/// same constant cannot change who is nearest: the σ-normalized baseline and
/// the 4σ-normalized hybrid rank every query's neighbors identically.
#[test]
fn criterion_4_sigma_and_four_sigma_rankings_match_on_continuous_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(40);
    for case in 0..50 {
        let m: usize = rng.gen_range(1..=5);
        let n: usize = rng.gen_range(5..=40);
        let mut schema_text = String::new();
        for a in 0..m {
            schema_text.push_str(&format!("attribute x{a} continuous\n"));
        }
        schema_text.push_str("class y c0 c1");
        let schema = parse_schema(&schema_text).unwrap();
        let mut rows = String::new();
        for i in 0..n {
            for _ in 0..m {
                rows.push_str(&format!("{},", rng.gen_range(-100.0..100.0)));
            }
            rows.push_str(&format!(
                "c{}\n",
                if i < 2 { i } else { rng.gen_range(0..2) }
            ));
        }
        let data: Dataset<f64> = parse_data(&rows, &schema).unwrap();
        for a in 0..m {
            assert!(data.stats[a].sigma > 0.0, "degenerate random attribute");
        }
        let baseline = Model::fit(
            data.clone(),
            MetricKind::EuclideanSigma,
            &FitConfig::default(),
        )
        .unwrap();
        let hybrid = Model::fit(
            data.clone(),
            MetricKind::Hvdm(HvdmNorm::N2),
            &FitConfig::default(),
        )
        .unwrap();
        for query in &data.instances {
            let rank = |model: &Model<f64>| -> Vec<usize> {
                model
                    .nearest(query, n)
                    .unwrap()
                    .iter()
                    .map(|&(i, _)| i)
                    .collect()
            };
            assert_eq!(rank(&baseline), rank(&hybrid), "case {case}");
        }
    }
    println!("criterion 4: pass — neighbor orderings identical on 50 continuous-only datasets");
}

/// The single-sweep window estimator agrees exactly with a quadratic
/// recount of the half-open window around every stored value.
#[test]
fn criterion_5_window_probabilities_match_brute_force_recount() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    for case in 0..100 {
        let m: usize = rng.gen_range(1..=3);
        let classes: usize = rng.gen_range(2..=4);
        let n: usize = rng.gen_range(5..=200);
        let mut schema_text = String::new();
        for a in 0..m {
            schema_text.push_str(&format!("attribute x{a} continuous\n"));
        }
        schema_text.push_str("class y");
        for k in 0..classes {
            schema_text.push_str(&format!(" c{k}"));
        }
        let schema = parse_schema(&schema_text).unwrap();
        let mut rows = String::new();
        for i in 0..n {
            for _ in 0..m {
                if rng.gen_bool(0.05) {
                    rows.push_str("?,");
                } else {
                    // Coarse grid values so duplicates are common.
                    rows.push_str(&format!("{},", rng.gen_range(0..=30) as f64 * 0.5));
                }
            }
            let class = if i < classes {
                i
            } else {
                rng.gen_range(0..classes)
            };
            rows.push_str(&format!("c{class}\n"));
        }
        let data: Dataset<f64> = parse_data(&rows, &schema).unwrap();
        let config = DiscretizationConfig::default();
        let table = vdm_stats::learn_wvdm(&data, &config);
        let s = config.intervals(data.schema.class_count());
        for a in 0..m {
            let pairs: Vec<(f64, usize)> = data
                .instances
                .iter()
                .filter_map(|inst| inst.values[a].as_number().map(|x| (x, inst.class_index)))
                .collect();
            if pairs.is_empty() {
                assert!(!table.has_attribute(a));
                continue;
            }
            assert!(table.has_attribute(a));
            let width = vdm_stats::interval_width(&data.stats[a], s);
            assert_eq!(table.width(a), width);
            let mut distinct: Vec<f64> = pairs.iter().map(|&(x, _)| x).collect();
            distinct.sort_by(|p, q| p.partial_cmp(q).unwrap());
            distinct.dedup();
            assert_eq!(table.stored_values(a), &distinct[..]);
            let half = width / 2.0;
            for (vi, &x) in distinct.iter().enumerate() {
                let mut counts = vec![0u32; data.schema.class_count()];
                for &(v, class) in &pairs {
                    let inside = if width > 0.0 {
                        v >= x - half && v < x + half
                    } else {
                        v == x
                    };
                    if inside {
                        counts[class] += 1;
                    }
                }
                let total: u32 = counts.iter().sum();
                let expected: Vec<f64> = counts
                    .iter()
                    .map(|&k| f64::from(k) / f64::from(total))
                    .collect();
                assert_eq!(
                    table.stored_probs(a)[vi],
                    expected,
                    "case {case}, attribute {a}, value {x}"
                );
            }
        }
    }
    println!("criterion 5: pass — window estimates equal the quadratic recount on 100 datasets");
}

/// Inside the covered span — between the outermost interval centers for the
/// interpolated metric, between the extreme stored values for the windowed
/// one — every stored and every interpolated probability vector sums to 1.
#[test]
fn criterion_6_probability_vectors_sum_to_one_inside_the_covered_span() {
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    for case in 0..25 {
        let classes: usize = rng.gen_range(2..=4);
        let n: usize = rng.gen_range(20..=60);
        let mut schema_text = String::from("attribute x continuous\nclass y");
        for k in 0..classes {
            schema_text.push_str(&format!(" c{k}"));
        }
        let schema = parse_schema(&schema_text).unwrap();
        // Anchors pin the range to [0, 10] and occupy all five intervals so
        // no interior interval is empty.
        let mut rows = String::new();
        for (i, anchor) in [0.0, 1.0, 3.0, 5.0, 7.0, 9.0, 10.0].iter().enumerate() {
            rows.push_str(&format!("{},c{}\n", anchor, i % classes));
        }
        for _ in 0..n {
            rows.push_str(&format!(
                "{},c{}\n",
                rng.gen_range(0.0..10.0),
                rng.gen_range(0..classes)
            ));
        }
        let data: Dataset<f64> = parse_data(&rows, &schema).unwrap();
        let config = DiscretizationConfig::default();
        let table = vdm_stats::learn_p(&data, &config);
        let window = vdm_stats::learn_wvdm(&data, &config);
        let stats = &data.stats[0];
        let width = table.width(0);

        let sum_of = |p: &[f64]| p.iter().sum::<f64>();
        for key in table.keys(0) {
            let stored = sum_of(table.probabilities(0, key));
            assert!((stored - 1.0).abs() < 1e-9, "case {case}: stored {stored}");
        }
        let lo = vdm_stats::midpoint(stats, width, 1);
        let hi = vdm_stats::midpoint(stats, width, table.intervals());
        for x in vdm_stats::uniform_grid(lo, hi, 101) {
            let sum = sum_of(&vdm_stats::interpolate_probs(x, 0, &table, stats));
            assert!(
                (sum - 1.0).abs() < 1e-9,
                "case {case}: interpolated {sum} at {x}"
            );
        }

        for probs in window.stored_probs(0) {
            let stored = sum_of(probs);
            assert!((stored - 1.0).abs() < 1e-9, "case {case}: window {stored}");
        }
        let values = window.stored_values(0);
        for x in vdm_stats::uniform_grid(values[0], values[values.len() - 1], 101) {
            let sum = sum_of(&vdm_stats::wvdm_find_p(x, 0, &window));
            assert!((sum - 1.0).abs() < 1e-9, "case {case}: window {sum} at {x}");
        }
    }
    println!("criterion 6: pass — stored and interpolated vectors are normalized in-span");
}

/// Symmetry, non-negativity, and identity of fully-known instances, checked
/// for all six metrics over at least ten thousand random pairs.
#[test]
fn criterion_7_metric_axioms_hold_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(70);
    let kinds = [
        MetricKind::EuclideanSigma,
        MetricKind::Heom,
        MetricKind::Hvdm(HvdmNorm::N2),
        MetricKind::Dvdm,
        MetricKind::Ivdm,
        MetricKind::Wvdm,
    ];
    let mut symmetry_checks = 0usize;
    let mut identity_checks = 0usize;
    for _case in 0..10 {
        let m: usize = rng.gen_range(2..=6);
        let classes: usize = rng.gen_range(2..=3);
        let n: usize = rng.gen_range(20..=60);
        let attr_kinds: Vec<u8> = (0..m).map(|_| rng.gen_range(0..3)).collect();
        let mut schema_text = String::new();
        for (a, &k) in attr_kinds.iter().enumerate() {
            let keyword = ["continuous", "discrete", "nominal"][k as usize];
            schema_text.push_str(&format!("attribute a{a} {keyword}\n"));
        }
        schema_text.push_str("class y");
        for k in 0..classes {
            schema_text.push_str(&format!(" c{k}"));
        }
        let schema = parse_schema(&schema_text).unwrap();
        let mut rows = String::new();
        for i in 0..n {
            for &k in &attr_kinds {
                if rng.gen_bool(0.05) {
                    rows.push_str("?,");
                } else {
                    match k {
                        0 => rows.push_str(&format!("{},", rng.gen_range(-10.0..10.0))),
                        1 => rows.push_str(&format!("{},", rng.gen_range(0..8))),
                        _ => rows.push_str(&format!("v{},", rng.gen_range(0..4))),
                    }
                }
            }
            let class = if i < classes {
                i
            } else {
                rng.gen_range(0..classes)
            };
            rows.push_str(&format!("c{class}\n"));
        }
        let data: Dataset<f64> = parse_data(&rows, &schema).unwrap();
        let prepared: Vec<_> = kinds
            .iter()
            .map(|&k| PreparedMetric::prepare(&data, k, &Default::default()))
            .collect();
        for _ in 0..170 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            for p in &prepared {
                let dij = p.distance(&data.instances[i], &data.instances[j]).unwrap();
                let dji = p.distance(&data.instances[j], &data.instances[i]).unwrap();
                assert_eq!(dij, dji, "{}: pair {i},{j}", p.kind());
                assert!(dij >= 0.0, "{}: pair {i},{j}", p.kind());
                symmetry_checks += 1;
            }
        }
        for instance in &data.instances {
            if instance.values.iter().any(|v| v.is_unknown()) {
                continue;
            }
            for p in &prepared {
                assert_eq!(p.distance(instance, instance).unwrap(), 0.0, "{}", p.kind());
                identity_checks += 1;
            }
        }
    }
    assert!(symmetry_checks >= 10_000, "{symmetry_checks}");
    println!(
        "criterion 7: pass — {symmetry_checks} symmetry/non-negativity checks, \
         {identity_checks} identity checks"
    );
}

/// The paired test reproduces the textbook formula `t = d̄·√n / s_d` and the
/// tabulated two-tailed 90% threshold for nine degrees of freedom.
#[test]
fn criterion_8_paired_test_matches_textbook_oracle() {
    assert_eq!(Confidence::P90.critical_value(9), 1.833);
    let mut rng = ChaCha8Rng::seed_from_u64(80);
    for case in 0..100 {
        let a: Vec<f64> = (0..10).map(|_| rng.gen_range(0.0..1.0)).collect();
        let b: Vec<f64> = (0..10).map(|_| rng.gen_range(0.0..1.0)).collect();
        let (t, significant) = eval::paired_t_test(&a, &b, Confidence::P90).unwrap();
        let n = a.len() as f64;
        let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let mean = diffs.iter().sum::<f64>() / n;
        let ss: f64 = diffs.iter().map(|d| (d - mean).powi(2)).sum();
        let sd = (ss / (n - 1.0)).sqrt();
        let expected = mean * n.sqrt() / sd;
        assert!(
            (t - expected).abs() <= 1e-9 * expected.abs().max(1.0),
            "case {case}: {t} vs {expected}"
        );
        assert_eq!(significant, expected.abs() > 1.833, "case {case}");
    }
    println!("criterion 8: pass — t statistic matches the oracle on 100 random fold vectors");
}

/// The learning curve evaluated at 100% of the training data is bitwise
/// identical to plain cross-validation on the same folds. Together with
/// criteria 2–8 this stands in for result aggregates over large dataset
/// collections, which are out of scope at this scale.
#[test]
fn criterion_9_full_size_curve_point_equals_cross_validation() {
    let data = load_iris();
    let plan = eval::make_folds(data.instance_count(), 10, 7).unwrap();
    let kinds = [MetricKind::Heom, MetricKind::Ivdm];
    let fit = FitConfig::default();
    let report = eval::cross_validate(&data, &kinds, &plan, &fit).unwrap();
    let curve =
        eval::learning_curve(&data, &kinds, &[25.0, 50.0, 75.0, 100.0], &plan, &fit, 7).unwrap();
    for (series, result) in curve.series.iter().zip(&report.results) {
        assert_eq!(series.kind, result.kind);
        assert_eq!(series.accuracies[3], Some(result.mean_accuracy));
    }
    println!(
        "criterion 9: pass — full-size curve point equals cross-validation; large-corpus \
         aggregates substituted by criteria 2-8 plus this consistency property"
    );
}
