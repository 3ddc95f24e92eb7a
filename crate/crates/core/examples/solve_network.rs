//! Shortest covering path through one small network, checked against
//! exhaustive search.
//!
//! cargo run --example solve_network

use antnet::aco::{brute_force_optimum, solve_traced};
use antnet::{point, AcoParams, ClassNetwork, PathMode, RngSeed};

fn main() -> antnet::Result<()> {
    let members = vec![
        point![0.0, 0.0],
        point![1.0, 0.2],
        point![2.1, -0.1],
        point![2.9, 1.0],
        point![1.8, 2.2],
        point![0.4, 1.7],
        point![3.5, 2.6],
        point![-0.6, 0.9],
    ];
    let net = ClassNetwork::new(0, members)?;

    for mode in [PathMode::OpenPath, PathMode::ClosedTour] {
        let params = AcoParams::default().with_seed(RngSeed(7)).with_mode(mode);
        let trace = solve_traced(&net, &params)?;
        let exact = brute_force_optimum(&net, mode)?;
        let first_best = trace
            .history
            .iter()
            .position(|&l| l == trace.best.length)
            .unwrap_or(0);
        println!(
            "{mode}: colony {:.6} (order {:?}, reached at iteration {first_best}), optimum {:.6}",
            trace.best.length, trace.best.order, exact.length
        );
    }
    Ok(())
}
