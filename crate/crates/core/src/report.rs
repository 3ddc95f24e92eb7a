//! Experiment reports and their JSON / CSV forms.
//!
//! JSON layout:
//!
//! ```text
//! {
//!   "dataset": { "source", "labeling", "n", "dim", "class_counts" },
//!   "params": { AcoParams },
//!   "repetitions": R,
//!   "seed": base seed,
//!   "scale": "raw" | "per-edge",
//!   "classes": [
//!     { "class_id", "members", "targeted",
//!       "phases": [ { "phase_id", "phase", "inserted", "samples": [..], "seeds": [..],
//!                     "median", "q1", "q3", "iqr", "whiskers": [lo, hi], "outliers": [..] } ] }
//!   ]
//! }
//! ```
//!
//! The CSV form has one row per sample: `class,phase,repetition,seed,length`.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::aco::AcoParams;
use crate::error::{Error, Result};
use crate::feature::{FeatureScale, PhaseReport};
use crate::seed::RngSeed;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetDescriptor {
    /// Preset name or CSV path.
    pub source: String,
    /// `ground-truth` or `kmeans`.
    pub labeling: String,
    pub n: usize,
    pub dim: usize,
    pub class_counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class_id: usize,
    pub members: usize,
    /// Whether phases inserted points into this class.
    pub targeted: bool,
    pub phases: Vec<PhaseReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub dataset: DatasetDescriptor,
    pub params: AcoParams,
    pub repetitions: usize,
    pub seed: RngSeed,
    pub scale: FeatureScale,
    pub classes: Vec<ClassReport>,
}

impl ExperimentReport {
    /// Every `(class, phase)` cell holds exactly `repetitions` samples.
    pub fn check(&self) -> Result<()> {
        for class in &self.classes {
            for phase in &class.phases {
                if phase.samples.len() != self.repetitions || phase.seeds.len() != self.repetitions
                {
                    return Err(Error::input(format!(
                        "class {} phase {} has {} samples, expected {}",
                        class.class_id,
                        phase.phase_id,
                        phase.samples.len(),
                        self.repetitions
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn phase(&self, class_id: usize, phase_id: u8) -> Option<&PhaseReport> {
        self.classes
            .iter()
            .find(|c| c.class_id == class_id)?
            .phases
            .iter()
            .find(|p| p.phase_id == phase_id)
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let report: ExperimentReport = serde_json::from_str(text)?;
        report.check()?;
        Ok(report)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ExperimentReport::from_json(&text)
    }

    pub fn write_samples_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["class", "phase", "repetition", "seed", "length"])?;
        for class in &self.classes {
            for phase in &class.phases {
                for (rep, (len, seed)) in phase.samples.iter().zip(&phase.seeds).enumerate() {
                    w.write_record([
                        class.class_id.to_string(),
                        phase.phase_id.to_string(),
                        rep.to_string(),
                        seed.to_string(),
                        format!("{len:?}"),
                    ])?;
                }
            }
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Whitespace-separated boxplot table, one block per class, for
    /// gnuplot's `candlesticks` style:
    /// `phase whisker_low q1 median q3 whisker_high`.
    pub fn gnuplot_data(&self) -> String {
        let mut out = String::from("# phase whisker_low q1 median q3 whisker_high\n");
        for (i, class) in self.classes.iter().enumerate() {
            if i > 0 {
                out.push_str("\n\n");
            }
            out.push_str(&format!("# class {}\n", class.class_id));
            for p in &class.phases {
                let s = &p.stats;
                out.push_str(&format!(
                    "{} {:?} {:?} {:?} {:?} {:?}\n",
                    p.phase_id,
                    s.whisker_low(),
                    s.q1,
                    s.median,
                    s.q3,
                    s.whisker_high()
                ));
            }
        }
        out
    }
}
