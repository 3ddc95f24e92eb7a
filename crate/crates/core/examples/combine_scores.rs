//! Blend a low-level and a high-level membership score.
//!
//! cargo run --example combine_scores

use antnet::feature::combine_scores;

fn main() -> antnet::Result<()> {
    let (low, high) = (0.82, 0.35);
    for lambda in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!(
            "lambda {lambda:.2}: {:.4}",
            combine_scores(low, high, lambda)?
        );
    }
    match combine_scores(low, high, 1.5) {
        Err(e) => println!("lambda 1.5 rejected: {e}"),
        Ok(v) => println!("unexpected {v}"),
    }
    Ok(())
}
