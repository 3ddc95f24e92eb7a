//! Ant-colony path lengths as a class-membership feature.
//!
//! Each class of a labelled dataset is treated as a complete graph over its
//! points. An ant colony finds a short Hamiltonian path (or tour) through it,
//! and the change in that length when new points are inserted measures how
//! well they fit the class.

pub mod aco;
pub mod clustering;
pub mod datagen;
pub mod dataset;
pub mod distance;
pub mod error;
pub mod experiment;
pub mod feature;
pub mod network;
pub mod plot;
pub mod report;
pub mod seed;

pub use aco::{AcoParams, PathMode, TourSolution};
pub use dataset::{LabeledDataset, Point};
pub use distance::DistanceMatrix;
pub use error::{Error, Result};
pub use experiment::{run_experiment, ExperimentConfig};
pub use feature::{BoxplotStats, FeatureScale, PhaseKind, PhaseReport};
pub use network::ClassNetwork;
pub use report::ExperimentReport;
pub use seed::RngSeed;
