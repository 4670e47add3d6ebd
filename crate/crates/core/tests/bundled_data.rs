//! The files under `data/` are the bundled generators written out.

use std::path::PathBuf;

use varinc_core::{bundled, matrix_file};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

#[test]
fn data_files_match_generators() {
    for (name, matrix) in bundled::all() {
        let path = data_dir().join(format!("{name}.mat"));
        let on_disk =
            std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, matrix_file::write_matrix(&matrix), "{name}");
        assert_eq!(
            matrix_file::parse_matrix(&on_disk).unwrap(),
            matrix,
            "{name}"
        );
    }
}

#[test]
fn hand_entered_weak_kleene_loads() {
    let wk = matrix_file::load_algebra(&data_dir().join("wk.mat")).unwrap();
    assert_eq!(wk, bundled::weak_kleene());
}

#[test]
fn exported_files_are_the_data_directory() {
    for (file, text) in bundled::data_files() {
        let on_disk = std::fs::read_to_string(data_dir().join(&file)).unwrap();
        assert_eq!(on_disk, text, "{file}");
    }
    let wk = bundled::by_name("wk").unwrap();
    assert_eq!(
        wk,
        matrix_file::load_matrix(&data_dir().join("wk.mat")).unwrap()
    );
}
