use std::path::{Path, PathBuf};

use super::IdealTriangulation;
use crate::error::Result;

/// Environment variable naming a directory that replaces the bundled census.
pub const CENSUS_DIR_ENV: &str = "CONE_MODULI_CENSUS_DIR";

pub const BUNDLED_NAMES: [&str; 2] = ["figure8", "whitehead"];

const FIGURE8: &str = include_str!("../../census/figure8.json");
const WHITEHEAD: &str = include_str!("../../census/whitehead.json");

/// Raw JSON of a bundled census manifold.
pub fn bundled_census(name: &str) -> Option<&'static str> {
    match name {
        "figure8" => Some(FIGURE8),
        "whitehead" => Some(WHITEHEAD),
        _ => None,
    }
}

/// Loads a census manifold by name, or a triangulation file by path.
///
/// Census names are looked up in `$CONE_MODULI_CENSUS_DIR/<name>.json` when
/// that variable is set, and in the bundled copies otherwise.
pub fn load(name_or_file: &str) -> Result<IdealTriangulation> {
    let dir = std::env::var_os(CENSUS_DIR_ENV).map(PathBuf::from);
    load_with_census_dir(name_or_file, dir.as_deref())
}

pub fn load_with_census_dir(name_or_file: &str, census_dir: Option<&Path>) -> Result<IdealTriangulation> {
    if let Some(text) = bundled_census(name_or_file) {
        return match census_dir {
            Some(dir) => IdealTriangulation::from_path(&dir.join(format!("{name_or_file}.json"))),
            None => IdealTriangulation::from_json_str(text),
        };
    }
    IdealTriangulation::from_path(Path::new(name_or_file))
}
