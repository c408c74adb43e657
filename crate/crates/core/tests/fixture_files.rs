//! The shipped fixture files must stay in sync with the fixtures module.

use std::path::Path;

use qoracle::fixtures;

fn repo_file(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .join("fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()))
}

#[test]
fn names_fixture_file_matches_module() {
    assert_eq!(
        repo_file("names.json"),
        fixtures::to_fixture_json(&fixtures::names(), fixtures::NAMES_K)
    );
}

#[test]
fn similarity_fixture_file_matches_module() {
    assert_eq!(
        repo_file("similarity16.json"),
        fixtures::to_fixture_json(&fixtures::similarity16(), fixtures::SIMILARITY_K)
    );
}
