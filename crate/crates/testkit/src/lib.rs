//! Test support shared by the workspace: a random hand generator, a
//! brute-force ranking oracle and a `wc`-style counter.

pub mod conservation;
pub mod gen;
pub mod oracle;
pub mod wc;

use std::path::PathBuf;

/// Directory holding the shipped `.phh` fixtures.
pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

/// Every fixture as `(file name, bytes)`, sorted by name.
pub fn fixtures() -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<(String, Vec<u8>)> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory exists")
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "phh"))
        .map(|p| {
            let name = p.file_name().expect("file").to_string_lossy().into_owned();
            let bytes = std::fs::read(&p).expect("readable fixture");
            (name, bytes)
        })
        .collect();
    out.sort();
    out
}
