//! Per-class complete networks.

use crate::dataset::{LabeledDataset, Point};
use crate::distance::DistanceMatrix;
use crate::error::{Error, Result};

/// Complete weighted graph over the members of one class. Edge `(i, j)` has
/// weight `dist.get(i, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassNetwork {
    class_id: usize,
    members: Vec<Point>,
    dist: DistanceMatrix,
}

impl ClassNetwork {
    pub fn new(class_id: usize, members: Vec<Point>) -> Result<Self> {
        let dist = DistanceMatrix::from_points(&members)?;
        Ok(ClassNetwork {
            class_id,
            members,
            dist,
        })
    }

    pub fn class_id(&self) -> usize {
        self.class_id
    }

    pub fn members(&self) -> &[Point] {
        &self.members
    }

    pub fn dist(&self) -> &DistanceMatrix {
        &self.dist
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// New network with `new_points` appended after the current members.
    /// Every added node is connected to every other node, old and new.
    pub fn insert_points(&self, new_points: &[Point]) -> Result<ClassNetwork> {
        if let Some(p) = new_points.iter().find(|p| p.dim() != self.dim()) {
            return Err(Error::input(format!(
                "inserted point has dimension {} but network {} has {}",
                p.dim(),
                self.class_id,
                self.dim()
            )));
        }
        let dist = self.dist.extended(&self.members, new_points);
        let mut members = self.members.clone();
        members.extend_from_slice(new_points);
        Ok(ClassNetwork {
            class_id: self.class_id,
            members,
            dist,
        })
    }
}

/// One network per class, ordered by class id.
pub fn build_class_networks(ds: &LabeledDataset) -> Vec<ClassNetwork> {
    (0..ds.n_classes())
        .map(|c| {
            ClassNetwork::new(c, ds.class_points(c))
                .expect("dataset invariants guarantee non-empty uniform classes")
        })
        .collect()
}
