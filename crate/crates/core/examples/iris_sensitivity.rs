//! Same-class versus other-class insertions on Iris, using real held-out
//! instances and the per-edge scale.
//!
//! cargo run --release --example iris_sensitivity -- [seed]

use std::path::PathBuf;

use antnet::experiment::{run_experiment, DatasetSource, ExperimentConfig, LabelMode};
use antnet::feature::{InsertionSource, PhaseKind};
use antnet::{FeatureScale, RngSeed};

fn main() -> antnet::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let mut cfg = ExperimentConfig::new(DatasetSource::Csv {
        path: PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/iris.csv"),
        has_header: true,
        label_column: None,
    });
    cfg.labels = LabelMode::GroundTruth;
    cfg.phases = Some(vec![
        PhaseKind::Baseline,
        PhaseKind::SameClass,
        PhaseKind::FarOrOtherClass,
    ]);
    cfg.insertion = InsertionSource::Holdout;
    cfg.scale = FeatureScale::PerEdge;
    cfg.seed = RngSeed(seed);

    let report = run_experiment(&cfg)?;
    for c in 0..report.classes.len() {
        let base = &report.phase(c, 1).expect("baseline").stats;
        let same = report.phase(c, 2).expect("same class").stats.median;
        let other = report.phase(c, 5).expect("other class").stats.median;
        println!(
            "class {c}: baseline {:.4} (whisker {:.4}), same class {same:.4}, other class {other:.4}",
            base.median,
            base.whisker_high()
        );
    }
    Ok(())
}
