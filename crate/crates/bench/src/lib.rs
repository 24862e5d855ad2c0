//! Shared helpers for the criterion benchmarks: fixture loading relative
//! to the workspace root.

use std::path::{Path, PathBuf};

use severi_core::relations::Table1;
use severi_core::sections::StBasis;

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn load_table1() -> Table1 {
    Table1::load(&fixture_dir().join("table1.poly")).expect("table1 fixture")
}

pub fn load_st_basis() -> StBasis {
    StBasis::load(&fixture_dir().join("st_basis.poly")).expect("st_basis fixture")
}
