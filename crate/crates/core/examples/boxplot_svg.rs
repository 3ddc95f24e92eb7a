//! Summarise samples as boxplots and render a report to SVG.
//!
//! cargo run --example boxplot_svg -- [out.svg]

use antnet::experiment::{run_experiment, DatasetSource, ExperimentConfig};
use antnet::feature::boxplot_stats;
use antnet::plot::render_svg;

fn main() -> antnet::Result<()> {
    let s = boxplot_stats(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 30.0])?;
    println!(
        "median {} q1 {} q3 {} whiskers {:?} outliers {:?}",
        s.median, s.q1, s.q3, s.whiskers, s.outliers
    );

    let mut cfg = ExperimentConfig::new(DatasetSource::Preset("dataset3".into()));
    cfg.repetitions = 10;
    let report = run_experiment(&cfg)?;
    let out = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "boxplots.svg".into());
    std::fs::write(&out, render_svg(&report)).map_err(|e| antnet::Error::Io {
        path: out.clone().into(),
        source: e,
    })?;
    println!("wrote {out}");
    Ok(())
}
