use std::path::Path;

use antnet::datagen::{load_csv, Preset};
use antnet::experiment::{run_experiment, DatasetSource, ExperimentConfig, LabelMode};
use antnet::feature::PhaseKind;
use antnet::{ExperimentReport, RngSeed};

fn quick(source: DatasetSource) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(source);
    cfg.repetitions = 4;
    cfg.aco.n_iters = 40;
    cfg
}

#[test]
fn dataset1_report_shape() {
    let report = run_experiment(&quick(DatasetSource::Preset("dataset1".into()))).unwrap();
    assert_eq!(report.classes.len(), 2);
    for class in &report.classes {
        assert_eq!(class.phases.len(), 5);
        assert!(class.phases.iter().all(|p| p.samples.len() == 4));
    }
    assert!(report.classes[0].targeted && !report.classes[1].targeted);
    assert!(report.classes[1].phases.iter().all(|p| p.inserted == 0));
    assert_eq!(report.classes[0].phases[4].inserted, 5);
}

#[test]
fn json_round_trip() {
    let report = run_experiment(&quick(DatasetSource::Preset("dataset4".into()))).unwrap();
    let back = ExperimentReport::from_json(&report.to_json().unwrap()).unwrap();
    assert_eq!(back, report);
}

#[test]
fn seed_changes_results() {
    let mut a = quick(DatasetSource::Preset("dataset1".into()));
    a.phases = Some(vec![PhaseKind::Baseline]);
    let mut b = a.clone();
    b.seed = RngSeed(43);
    let (ra, rb) = (run_experiment(&a).unwrap(), run_experiment(&b).unwrap());
    assert_ne!(
        ra.classes[0].phases[0].samples,
        rb.classes[0].phases[0].samples
    );
}

#[test]
fn iris_and_wine_files() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let (iris, s) = load_csv(dir.join("iris.csv"), true, None).unwrap();
    assert_eq!(
        (iris.len(), iris.dim(), iris.class_counts()),
        (150, 4, vec![50, 50, 50])
    );
    assert_eq!(s.class_names, vec!["setosa", "versicolor", "virginica"]);
    let (wine, _) = load_csv(dir.join("wine.csv"), true, None).unwrap();
    assert_eq!((wine.len(), wine.dim(), wine.n_classes()), (178, 13, 3));
}

#[test]
fn iris_ground_truth_networks() {
    let mut cfg = quick(DatasetSource::Csv {
        path: Path::new(env!("CARGO_MANIFEST_DIR")).join("data/iris.csv"),
        has_header: true,
        label_column: None,
    });
    cfg.labels = LabelMode::GroundTruth;
    cfg.phases = Some(vec![PhaseKind::Baseline]);
    let report = run_experiment(&cfg).unwrap();
    let members: Vec<usize> = report.classes.iter().map(|c| c.members).collect();
    assert_eq!(members, vec![50, 50, 50]);
}

#[test]
fn every_preset_runs() {
    for name in Preset::builtin_names() {
        let mut cfg = quick(DatasetSource::Preset(name.into()));
        cfg.repetitions = 2;
        cfg.aco.n_iters = 10;
        let report = run_experiment(&cfg).unwrap();
        assert!(report.phase(0, 5).is_some(), "{name}");
    }
}
