//! Full insertion experiment on the two-blob preset, printed as a table.
//!
//! cargo run --release --example dataset1_protocol -- [reps]

use antnet::experiment::{run_experiment, DatasetSource, ExperimentConfig};

fn main() -> antnet::Result<()> {
    let reps = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(30);
    let mut cfg = ExperimentConfig::new(DatasetSource::Preset("dataset1".into()));
    cfg.repetitions = reps;

    let report = run_experiment(&cfg)?;
    println!("class phase  name                 median      q1      q3  whiskers");
    for class in &report.classes {
        for p in &class.phases {
            let s = &p.stats;
            println!(
                "{:>5} {:>5}  {:<18} {:>8.3} {:>7.3} {:>7.3}  [{:.3}, {:.3}]",
                class.class_id,
                p.phase_id,
                p.phase.name(),
                s.median,
                s.q1,
                s.q3,
                s.whisker_low(),
                s.whisker_high()
            );
        }
    }
    Ok(())
}
