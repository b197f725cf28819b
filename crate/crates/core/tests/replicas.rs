use itclust::evalio::{datasets, load_points, write_points, PointFormat};
use std::path::PathBuf;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/replica")
}

#[test]
fn bundled_files_match_the_generators() {
    for name in datasets::NAMES {
        let path = data_dir().join(format!("{name}.txt"));
        let text = std::fs::read_to_string(&path).unwrap();
        let ds = datasets::by_name(name).unwrap();
        assert_eq!(text, write_points(&ds), "{} is stale", path.display());
        assert_eq!(load_points(&path, PointFormat::default()).unwrap(), ds);
    }
}
