//! Regenerates the bundled replica data files: `cargo run -p itclust --example write_replicas -- data/replica`

use itclust::evalio::{datasets, save_points};
use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data/replica".into()));
    std::fs::create_dir_all(&dir).expect("create output directory");
    for name in datasets::NAMES {
        let path = dir.join(format!("{name}.txt"));
        save_points(&path, &datasets::by_name(name).unwrap()).expect("write data file");
        println!("{}", path.display());
    }
}
