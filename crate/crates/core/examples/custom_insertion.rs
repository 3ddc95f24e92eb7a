//! Insertion protocol with hand-picked points instead of generated ones.
//!
//! cargo run --example custom_insertion

use antnet::feature::{run_insertion_protocol, PhaseKind, PhaseSpec};
use antnet::{point, AcoParams, ClassNetwork, FeatureScale, RngSeed};

fn main() -> antnet::Result<()> {
    let square = vec![
        point![0, 0],
        point![4, 0],
        point![4, 4],
        point![0, 4],
        point![2, 0],
        point![4, 2],
    ];
    let net = ClassNetwork::new(0, square)?;
    let phases = vec![
        PhaseSpec::baseline(),
        PhaseSpec::new(PhaseKind::SameClass, vec![point![2, 4], point![0, 2]])?,
        PhaseSpec::new(PhaseKind::Near, vec![point![5, 5]])?,
        PhaseSpec::new(
            PhaseKind::FarOrOtherClass,
            vec![point![20, 20], point![21, 19]],
        )?,
    ];
    let params = AcoParams::default().with_seed(RngSeed(3));
    for p in run_insertion_protocol(&net, &phases, &params, 5, FeatureScale::Raw)? {
        println!(
            "{:<20} +{} points  median {:.3}",
            p.phase.name(),
            p.inserted,
            p.stats.median
        );
    }
    Ok(())
}
