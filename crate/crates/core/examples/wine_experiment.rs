//! Short k-means-labelled experiment on the 13-feature Wine data.
//!
//! cargo run --release --example wine_experiment

use std::path::PathBuf;

use antnet::experiment::{run_experiment, DatasetSource, ExperimentConfig};
use antnet::feature::PhaseKind;

fn main() -> antnet::Result<()> {
    let mut cfg = ExperimentConfig::new(DatasetSource::Csv {
        path: PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/wine.csv"),
        has_header: true,
        label_column: None,
    });
    cfg.phases = Some(vec![
        PhaseKind::Baseline,
        PhaseKind::SameClass,
        PhaseKind::FarOrOtherClass,
    ]);
    cfg.repetitions = 5;
    cfg.aco.n_iters = 100;

    let report = run_experiment(&cfg)?;
    println!(
        "{} points, dim {}, clusters {:?}",
        report.dataset.n, report.dataset.dim, report.dataset.class_counts
    );
    for class in &report.classes {
        let medians: Vec<String> = class
            .phases
            .iter()
            .map(|p| format!("{}={:.2}", p.phase_id, p.stats.median))
            .collect();
        println!("class {}: {}", class.class_id, medians.join(" "));
    }
    Ok(())
}
