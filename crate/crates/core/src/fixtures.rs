//! Fixture files: labeled polynomial lists (`*.poly`) and the intersection
//! number table (`intersections.tbl`). Fixtures carry all transcribed data;
//! nothing in the check logic hard-codes them, so a corrupted file surfaces
//! as a failed certificate or a loud parse error, never as a silent pass.

use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::polyring::{parse_poly, MultiPoly, VarTable};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}:{col}: {msg}")]
    Parse { path: String, line: usize, col: usize, msg: String },
    #[error("{path}:{line}: duplicate label `{label}`")]
    DuplicateLabel { path: String, line: usize, label: String },
    #[error("{path}: {msg}")]
    Shape { path: String, msg: String },
}

impl FixtureError {
    fn shape(path: &Path, msg: impl fmt::Display) -> Self {
        FixtureError::Shape { path: display_path(path), msg: msg.to_string() }
    }
}

fn display_path(p: &Path) -> String {
    p.display().to_string()
}

/// A parsed `*.poly` file: the declared variable table and the labeled
/// polynomials in file order.
#[derive(Debug, Clone)]
pub struct LabeledPolys {
    pub table: Arc<VarTable>,
    pub entries: Vec<(String, MultiPoly)>,
}

impl LabeledPolys {
    pub fn get(&self, label: &str) -> Option<&MultiPoly> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, p)| p)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    /// Canonical re-serialization: a `vars:` header and one labeled
    /// polynomial per line in canonical term order. Parsing the output
    /// reproduces the same entries exactly.
    pub fn canonical_form(&self) -> String {
        let mut out = format!("vars: {}\n", self.table.names().join(" "));
        for (label, p) in &self.entries {
            out.push_str(&format!("{label}: {p}\n"));
        }
        out
    }
}

/// Parses a labeled polynomial file. Format: optional `#` comment lines and
/// blank lines, one `vars: a b c` header, then one `label: polynomial` per
/// line.
pub fn parse_poly_file(path: &Path) -> Result<LabeledPolys, FixtureError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FixtureError::Io { path: display_path(path), source: e })?;
    parse_poly_str(path, &text)
}

fn parse_poly_str(path: &Path, text: &str) -> Result<LabeledPolys, FixtureError> {
    let mut table: Option<Arc<VarTable>> = None;
    let mut entries: Vec<(String, MultiPoly)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((head, rest)) = line.split_once(':') else {
            return Err(FixtureError::Parse {
                path: display_path(path),
                line: lineno,
                col: 1,
                msg: "expected `vars:` header or `label: polynomial`".into(),
            });
        };
        let head = head.trim();
        if head == "vars" {
            if table.is_some() {
                return Err(FixtureError::Parse {
                    path: display_path(path),
                    line: lineno,
                    col: 1,
                    msg: "duplicate `vars:` header".into(),
                });
            }
            let names: Vec<&str> = rest.split_whitespace().collect();
            if names.is_empty() {
                return Err(FixtureError::Parse {
                    path: display_path(path),
                    line: lineno,
                    col: 1,
                    msg: "empty variable list".into(),
                });
            }
            table = Some(VarTable::new(&names));
            continue;
        }
        let Some(table) = &table else {
            return Err(FixtureError::Parse {
                path: display_path(path),
                line: lineno,
                col: 1,
                msg: "polynomial before `vars:` header".into(),
            });
        };
        if entries.iter().any(|(l, _)| l == head) {
            return Err(FixtureError::DuplicateLabel {
                path: display_path(path),
                line: lineno,
                label: head.to_string(),
            });
        }
        let poly = parse_poly(table, rest).map_err(|e| {
            let col = raw.len() - raw.trim_start().len() + raw.trim_start().find(':').unwrap_or(0)
                + 2
                + e.pos;
            FixtureError::Parse {
                path: display_path(path),
                line: lineno,
                col,
                msg: e.msg,
            }
        })?;
        entries.push((head.to_string(), poly));
    }
    let table = table.ok_or_else(|| FixtureError::shape(path, "missing `vars:` header"))?;
    if entries.is_empty() {
        return Err(FixtureError::shape(path, "no labeled polynomials"));
    }
    Ok(LabeledPolys { table, entries })
}

/// Validates that the file declares exactly the expected variables and the
/// expected labels in order.
pub fn expect_shape(
    path: &Path,
    polys: &LabeledPolys,
    vars: &[&str],
    labels: &[String],
) -> Result<(), FixtureError> {
    let got: Vec<&str> = polys.table.names().iter().map(|s| s.as_str()).collect();
    if got != vars {
        return Err(FixtureError::shape(
            path,
            format!("expected variables {vars:?}, found {got:?}"),
        ));
    }
    let have: Vec<&str> = polys.labels().collect();
    let want: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    if have != want {
        return Err(FixtureError::shape(
            path,
            format!("expected labels {want:?}, found {have:?}"),
        ));
    }
    Ok(())
}

/// One raw row of the intersection table fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionRow {
    pub stage: u8,
    pub divisor: String,
    pub pairings: Vec<(String, i64)>,
}

/// Parses `intersections.tbl`: whitespace-separated rows
/// `stageN DIVISOR curve:int curve:int ...`.
pub fn parse_intersections_file(path: &Path) -> Result<Vec<IntersectionRow>, FixtureError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| FixtureError::Io { path: display_path(path), source: e })?;
    let mut rows = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let stage_tok = fields.next().unwrap();
        let stage = match stage_tok {
            "stage1" => 1,
            "stage2" => 2,
            "stage3" => 3,
            other => {
                return Err(FixtureError::Parse {
                    path: display_path(path),
                    line: lineno,
                    col: 1,
                    msg: format!("expected stage1|stage2|stage3, found `{other}`"),
                })
            }
        };
        let Some(divisor) = fields.next() else {
            return Err(FixtureError::Parse {
                path: display_path(path),
                line: lineno,
                col: 1,
                msg: "missing divisor name".into(),
            });
        };
        let mut pairings = Vec::new();
        for field in fields {
            let Some((curve, value)) = field.split_once(':') else {
                return Err(FixtureError::Parse {
                    path: display_path(path),
                    line: lineno,
                    col: 1,
                    msg: format!("expected curve:integer, found `{field}`"),
                });
            };
            let value: i64 = value.parse().map_err(|_| FixtureError::Parse {
                path: display_path(path),
                line: lineno,
                col: 1,
                msg: format!("invalid integer `{value}` for curve `{curve}`"),
            })?;
            if pairings.iter().any(|(c, _)| c == curve) {
                return Err(FixtureError::Parse {
                    path: display_path(path),
                    line: lineno,
                    col: 1,
                    msg: format!("duplicate curve `{curve}`"),
                });
            }
            pairings.push((curve.to_string(), value));
        }
        if pairings.is_empty() {
            return Err(FixtureError::Parse {
                path: display_path(path),
                line: lineno,
                col: 1,
                msg: "row has no curve pairings".into(),
            });
        }
        rows.push(IntersectionRow { stage, divisor: divisor.to_string(), pairings });
    }
    if rows.is_empty() {
        return Err(FixtureError::shape(path, "empty intersection table"));
    }
    Ok(rows)
}

/// The canonical fixture file names, in report order.
pub const FIXTURE_FILES: [&str; 4] =
    ["intersections.tbl", "local_basis.poly", "st_basis.poly", "table1.poly"];

/// A fixture directory with content checksums.
#[derive(Debug, Clone)]
pub struct FixtureDir {
    pub dir: PathBuf,
}

impl FixtureDir {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        FixtureDir { dir: dir.into() }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    /// SHA-256 of the file bytes, hex-encoded.
    pub fn checksum(&self, name: &str) -> Result<String, FixtureError> {
        let path = self.path(name);
        let bytes = std::fs::read(&path)
            .map_err(|e| FixtureError::Io { path: display_path(&path), source: e })?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        Ok(format!("{:x}", hasher.finalize()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture_dir() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
    }

    #[test]
    fn ships_all_fixture_files() {
        let dir = FixtureDir::new(fixture_dir());
        for name in FIXTURE_FILES {
            assert!(dir.path(name).exists(), "missing fixture {name}");
            assert_eq!(dir.checksum(name).unwrap().len(), 64);
        }
    }

    #[test]
    fn parses_shipped_table1() {
        let polys = parse_poly_file(&fixture_dir().join("table1.poly")).unwrap();
        assert_eq!(polys.entries.len(), 27);
        let labels: Vec<String> = (1..=27).map(|i| format!("f{i}")).collect();
        expect_shape(
            Path::new("table1.poly"),
            &polys,
            &["s", "t", "x0", "x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9"],
            &labels,
        )
        .unwrap();
    }

    #[test]
    fn canonical_form_round_trips_every_shipped_poly_fixture() {
        for name in ["table1.poly", "st_basis.poly", "local_basis.poly"] {
            let path = fixture_dir().join(name);
            let polys = parse_poly_file(&path).unwrap();
            let canon = polys.canonical_form();
            let tmp = std::env::temp_dir().join(format!("severi_canon_{name}"));
            std::fs::write(&tmp, &canon).unwrap();
            let back = parse_poly_file(&tmp).unwrap();
            std::fs::remove_file(&tmp).ok();
            assert_eq!(back.table.names(), polys.table.names(), "{name}");
            assert_eq!(back.entries, polys.entries, "{name}");
            // Canonical form is a fixed point of re-serialization.
            assert_eq!(back.canonical_form(), canon, "{name}");
        }
    }

    #[test]
    fn parses_shipped_intersections() {
        let rows = parse_intersections_file(&fixture_dir().join("intersections.tbl")).unwrap();
        assert_eq!(rows.len(), 9);
        assert_eq!(rows[0].stage, 1);
        assert_eq!(rows[8].divisor, "E3");
    }

    #[test]
    fn empty_file_is_loud() {
        let tmp = std::env::temp_dir().join("severi_empty_fixture_test.poly");
        std::fs::write(&tmp, "").unwrap();
        assert!(parse_poly_file(&tmp).is_err());
        std::fs::remove_file(&tmp).ok();
    }

    #[test]
    fn duplicate_label_is_rejected() {
        let tmp = std::env::temp_dir().join("severi_dup_fixture_test.poly");
        std::fs::write(&tmp, "vars: x0\nf1: x0\nf1: x0^2\n").unwrap();
        let err = parse_poly_file(&tmp).unwrap_err();
        assert!(matches!(err, FixtureError::DuplicateLabel { .. }), "got: {err}");
        std::fs::remove_file(&tmp).ok();
    }

    #[test]
    fn undeclared_variable_is_an_arity_error() {
        let tmp = std::env::temp_dir().join("severi_arity_fixture_test.poly");
        std::fs::write(&tmp, "vars: x0 x1\nf1: x0*x10\n").unwrap();
        let err = parse_poly_file(&tmp).unwrap_err();
        assert!(err.to_string().contains("x10"), "got: {err}");
        std::fs::remove_file(&tmp).ok();
    }
}
