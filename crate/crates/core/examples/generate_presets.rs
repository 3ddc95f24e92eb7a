//! Write every built-in synthetic dataset to CSV.
//!
//! cargo run --example generate_presets -- [dir]

use std::path::PathBuf;

use antnet::datagen::{save_csv, Preset};
use antnet::RngSeed;

fn main() -> antnet::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "presets".into()));
    std::fs::create_dir_all(&dir).map_err(|e| antnet::Error::Io {
        path: dir.clone(),
        source: e,
    })?;
    for name in Preset::builtin_names() {
        let preset = Preset::builtin(name)?;
        let ds = preset.generate(RngSeed(42))?;
        let path = dir.join(format!("{name}.csv"));
        save_csv(&ds, &path, true)?;
        println!("{name}: {:?} -> {}", ds.class_counts(), path.display());
    }
    Ok(())
}
