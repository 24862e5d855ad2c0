//! The machine-readable verification report: named checks with exact
//! witnesses, fixture checksums, and a strict summary.
//!
//! Reports are byte-deterministic for a fixed configuration and fixture
//! set: all maps are ordered, exact values are serialized in the scalar
//! and polynomial text formats (never floats), and nothing time- or
//! environment-dependent is recorded.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

/// Outcome of one named check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// One verification check with its witness data.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub status: Status,
    /// Stable identifier of the claim being checked.
    pub anchor: String,
    /// Exact values (dimensions, determinants, degrees) as text.
    pub witness: BTreeMap<String, String>,
}

impl CheckResult {
    pub fn pass(
        suite: &Suite,
        name: &str,
        anchor: &str,
        witness: BTreeMap<String, String>,
    ) -> Self {
        CheckResult {
            suite: suite.name().into(),
            name: name.into(),
            status: Status::Pass,
            anchor: anchor.into(),
            witness,
        }
    }

    /// Failures always carry a nonempty witness.
    pub fn fail(
        suite: &Suite,
        name: &str,
        anchor: &str,
        mut witness: BTreeMap<String, String>,
    ) -> Self {
        if witness.is_empty() {
            witness.insert("failure".into(), "unexpected value (no detail recorded)".into());
        }
        CheckResult {
            suite: suite.name().into(),
            name: name.into(),
            status: Status::Fail,
            anchor: anchor.into(),
            witness,
        }
    }

    pub fn from_flag(
        suite: &Suite,
        name: &str,
        anchor: &str,
        ok: bool,
        witness: BTreeMap<String, String>,
    ) -> Self {
        if ok {
            Self::pass(suite, name, anchor, witness)
        } else {
            Self::fail(suite, name, anchor, witness)
        }
    }
}

/// A fixture file and the SHA-256 of its bytes.
#[derive(Debug, Clone, Serialize)]
pub struct FixtureStamp {
    pub path: String,
    pub checksum: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
}

/// The full report emitted by a run.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub fixtures: Vec<FixtureStamp>,
    pub checks: Vec<CheckResult>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(fixtures: Vec<FixtureStamp>, checks: Vec<CheckResult>) -> Self {
        let mut summary = Summary { pass: 0, fail: 0, error: 0 };
        for c in &checks {
            match c.status {
                Status::Pass => summary.pass += 1,
                Status::Fail => summary.fail += 1,
                Status::Error => summary.error += 1,
            }
        }
        VerificationReport {
            version: env!("CARGO_PKG_VERSION").into(),
            fixtures,
            checks,
            summary,
        }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    /// Process exit code: 0 iff every check passed.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("verification report v{}\n", self.version));
        for f in &self.fixtures {
            out.push_str(&format!("fixture {} sha256={}\n", f.path, f.checksum));
        }
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Error => "ERROR",
            };
            out.push_str(&format!("{status:5} {}/{} [{}]\n", c.suite, c.name, c.anchor));
            if c.status != Status::Pass {
                for (k, v) in &c.witness {
                    out.push_str(&format!("      {k}: {v}\n"));
                }
            }
        }
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} error\n",
            self.summary.pass, self.summary.fail, self.summary.error
        ));
        out
    }
}

/// The verification suites, in their fixed execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Basis,
    Relations,
    Freeness,
    Fiber,
    Ampleness,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Basis, Suite::Relations, Suite::Freeness, Suite::Fiber, Suite::Ampleness];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Basis => "basis",
            Suite::Relations => "relations",
            Suite::Freeness => "freeness",
            Suite::Fiber => "fiber",
            Suite::Ampleness => "ampleness",
        }
    }

    /// Fixture files the suite reads.
    pub fn fixture_files(&self) -> &'static [&'static str] {
        match self {
            Suite::Basis => &["st_basis.poly", "local_basis.poly"],
            Suite::Relations => &["table1.poly", "st_basis.poly"],
            Suite::Freeness => &["table1.poly"],
            Suite::Fiber => &["table1.poly"],
            Suite::Ampleness => &["intersections.tbl"],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "basis" => Ok(Suite::Basis),
            "relations" => Ok(Suite::Relations),
            "freeness" => Ok(Suite::Freeness),
            "fiber" => Ok(Suite::Fiber),
            "ampleness" => Ok(Suite::Ampleness),
            other => Err(format!(
                "unknown suite `{other}` (expected basis, relations, freeness, fiber, ampleness, or all)"
            )),
        }
    }
}

/// Output format of the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format `{other}` (expected json or text)")),
        }
    }
}

/// A fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Deduplicated, in fixed execution order; never empty.
    pub suites: Vec<Suite>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub fixture_dir: PathBuf,
    pub dump_matrices: Option<PathBuf>,
}

impl RunConfig {
    pub fn all(fixture_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            suites: Suite::ALL.to_vec(),
            format: Format::Json,
            out: None,
            fixture_dir: fixture_dir.into(),
            dump_matrices: None,
        }
    }

    /// Normalizes a user-supplied suite list: `all` expands, duplicates
    /// collapse, execution order is fixed.
    pub fn resolve_suites(names: &[String]) -> Result<Vec<Suite>, String> {
        let mut set = std::collections::BTreeSet::new();
        if names.is_empty() {
            return Err("empty suite set".into());
        }
        for n in names {
            if n == "all" {
                set.extend(Suite::ALL);
            } else {
                set.insert(n.parse::<Suite>()?);
            }
        }
        Ok(set.into_iter().collect())
    }
}
