//! Label Iris with k-means, name clusters after the species they overlap
//! most, and build one network per cluster.
//!
//! cargo run --example kmeans_networks

use std::path::Path;

use antnet::clustering::{align_to_reference, kmeans, KMeansConfig};
use antnet::datagen::load_csv;
use antnet::dataset::zscore_normalize;
use antnet::network::build_class_networks;
use antnet::RngSeed;

fn main() -> antnet::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/iris.csv");
    let (raw, summary) = load_csv(&path, true, None)?;
    let ds = zscore_normalize(&raw);

    let km = kmeans(ds.points(), &KMeansConfig::new(3, RngSeed(1)))?;
    println!(
        "k-means: {} iterations, inertia {:.3}, history {:?}",
        km.iterations_run,
        km.inertia,
        km.inertia_history
            .iter()
            .map(|v| (v * 100.0).round() / 100.0)
            .collect::<Vec<_>>()
    );

    let labels = align_to_reference(&km.labels, ds.labels());
    let agree = labels
        .iter()
        .zip(ds.labels())
        .filter(|(a, b)| a == b)
        .count();
    println!("agreement with species: {agree}/{}", ds.len());

    for net in build_class_networks(&ds.relabeled(labels)?) {
        println!(
            "network {} ({}): {} members",
            net.class_id(),
            summary.class_names[net.class_id()],
            net.len()
        );
    }
    Ok(())
}
