//! Colony versus brute force on small random instances.
//!
//! cargo run --release --example verify_oracle -- [n_max]

use antnet::experiment::{verify, VerifyConfig};

fn main() -> antnet::Result<()> {
    let n_max = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let outcome = verify(&VerifyConfig {
        n_max,
        trials: 10,
        ..Default::default()
    })?;
    print!("{}", outcome.table());
    Ok(())
}
