//! Intersection-number tables for the three blow-up stages and the exact
//! inequality algebra on top of them: relative ampleness regions, their
//! symbolic equivalence with the displayed inequality systems, and the
//! contraction-twist degree pattern.
//!
//! The intersection numbers themselves are fixture data; this module's
//! value is the exact rational and symbolic arithmetic over them.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::fixtures::{parse_intersections_file, FixtureError, IntersectionRow};
use crate::polyring::{parse_poly, MultiPoly, VarTable};
use crate::scalars::{rat, Eisenstein, Rational};

/// The divisor symbols, in table row order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DivisorSym {
    Omega,
    E1,
    E2,
    E3,
}

impl DivisorSym {
    pub const ALL: [DivisorSym; 4] = [DivisorSym::Omega, DivisorSym::E1, DivisorSym::E2, DivisorSym::E3];

    pub fn name(&self) -> &'static str {
        match self {
            DivisorSym::Omega => "omega",
            DivisorSym::E1 => "E1",
            DivisorSym::E2 => "E2",
            DivisorSym::E3 => "E3",
        }
    }
}

/// Exact rational combination of omega, E1, E2, E3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorClass {
    coeffs: [Rational; 4],
}

impl DivisorClass {
    pub fn zero() -> Self {
        DivisorClass { coeffs: std::array::from_fn(|_| rat(0, 1)) }
    }

    pub fn term(sym: DivisorSym, c: Rational) -> Self {
        let mut d = Self::zero();
        d.coeffs[sym as usize] = c;
        d
    }

    pub fn coeff(&self, sym: DivisorSym) -> &Rational {
        &self.coeffs[sym as usize]
    }

    pub fn add(&self, other: &DivisorClass) -> Self {
        DivisorClass {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] + &other.coeffs[i]),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        DivisorClass { coeffs: std::array::from_fn(|i| &self.coeffs[i] * c) }
    }

    pub fn sub(&self, other: &DivisorClass) -> Self {
        self.add(&other.scale(&rat(-1, 1)))
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for sym in DivisorSym::ALL {
            let c = self.coeff(sym);
            if c == &rat(0, 1) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({})*{}", c, sym.name())?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum AmplenessError {
    #[error("no {divisor} row at stage {stage}")]
    UndefinedRow { divisor: &'static str, stage: u8 },
    #[error("unknown curve `{0}`")]
    UnknownCurve(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error("intersection table: {0}")]
    Table(String),
}

/// One stage of the intersection table: divisor rows over curve columns.
#[derive(Debug, Clone)]
pub struct StageTable {
    pub stage: u8,
    pub divisors: Vec<DivisorSym>,
    /// Fixture curve keys, in column order.
    pub curves: Vec<String>,
    /// values[d][c] pairs divisors[d] with curves[c].
    pub values: Vec<Vec<Rational>>,
}

impl StageTable {
    /// Stage-qualified display name: proper transforms get a `t` marker.
    pub fn display_name(&self, key: &str) -> String {
        match (self.stage, key) {
            (2 | 3, "d_u") => "dt_u".into(),
            (2 | 3, "l_vw") => "lt_vw".into(),
            (3, "f2_u") => "ft2_u".into(),
            _ => key.into(),
        }
    }
}

/// The three stage tables, fixture-backed.
#[derive(Debug, Clone)]
pub struct IntersectionTables {
    stages: [StageTable; 3],
}

impl IntersectionTables {
    pub fn load(path: &Path) -> Result<Self, AmplenessError> {
        let rows = parse_intersections_file(path)?;
        Self::from_rows(&rows)
    }

    pub fn from_rows(rows: &[IntersectionRow]) -> Result<Self, AmplenessError> {
        let expected_divisors: [&[DivisorSym]; 3] = [
            &[DivisorSym::Omega, DivisorSym::E1],
            &[DivisorSym::Omega, DivisorSym::E1, DivisorSym::E2],
            &[DivisorSym::Omega, DivisorSym::E1, DivisorSym::E2, DivisorSym::E3],
        ];
        let expected_curves: [&[&str]; 3] = [
            &["d_u", "l_vw"],
            &["d_u", "l_vw", "c_u", "f2_u"],
            &["d_u", "e_u", "l_vw", "c_u", "f2_u", "f_u"],
        ];
        let mut stages = Vec::new();
        for stage in 1..=3u8 {
            let stage_rows: Vec<&IntersectionRow> =
                rows.iter().filter(|r| r.stage == stage).collect();
            let want_divs = expected_divisors[stage as usize - 1];
            if stage_rows.len() != want_divs.len() {
                return Err(AmplenessError::Table(format!(
                    "stage {stage}: expected {} divisor rows, found {}",
                    want_divs.len(),
                    stage_rows.len()
                )));
            }
            let mut divisors = Vec::new();
            let mut values = Vec::new();
            let curves: Vec<String> =
                expected_curves[stage as usize - 1].iter().map(|s| s.to_string()).collect();
            for (row, want) in stage_rows.iter().zip(want_divs) {
                if row.divisor != want.name() {
                    return Err(AmplenessError::Table(format!(
                        "stage {stage}: expected divisor row {}, found {}",
                        want.name(),
                        row.divisor
                    )));
                }
                let mut vals = Vec::new();
                for curve in &curves {
                    let Some((_, v)) = row.pairings.iter().find(|(c, _)| c == curve) else {
                        return Err(AmplenessError::Table(format!(
                            "stage {stage}, row {}: missing curve `{curve}`",
                            row.divisor
                        )));
                    };
                    vals.push(rat(*v, 1));
                }
                if row.pairings.len() != curves.len() {
                    return Err(AmplenessError::Table(format!(
                        "stage {stage}, row {}: unexpected extra curve columns",
                        row.divisor
                    )));
                }
                divisors.push(*want);
                values.push(vals);
            }
            stages.push(StageTable { stage, divisors, curves, values });
        }
        Ok(IntersectionTables { stages: stages.try_into().unwrap() })
    }

    pub fn stage(&self, stage: u8) -> &StageTable {
        &self.stages[stage as usize - 1]
    }

    fn row_value(&self, stage: u8, divisor: DivisorSym, curve: usize) -> Option<&Rational> {
        let st = self.stage(stage);
        let d = st.divisors.iter().position(|&x| x == divisor)?;
        st.values[d].get(curve)
    }
}

/// Bilinear pairing of a divisor class with one curve column of a stage.
/// A nonzero coefficient on a divisor with no row at that stage is an
/// error (e.g. E3 against a stage-1 curve).
pub fn pairing(
    tables: &IntersectionTables,
    d: &DivisorClass,
    stage: u8,
    curve: &str,
) -> Result<Rational, AmplenessError> {
    let st = tables.stage(stage);
    let ci = st
        .curves
        .iter()
        .position(|c| c == curve)
        .ok_or_else(|| AmplenessError::UnknownCurve(curve.into()))?;
    let mut acc = rat(0, 1);
    for sym in DivisorSym::ALL {
        let c = d.coeff(sym);
        if c == &rat(0, 1) {
            continue;
        }
        let Some(v) = tables.row_value(stage, sym, ci) else {
            return Err(AmplenessError::UndefinedRow { divisor: sym.name(), stage });
        };
        acc += &(c * v);
    }
    Ok(acc)
}

/// Exact rational ampleness parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmpleParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
}

impl AmpleParams {
    pub fn new(alpha: Rational, beta: Rational, gamma: Rational) -> Self {
        AmpleParams { alpha, beta, gamma }
    }
}

/// The displayed divisor of each stage:
/// stage 1: alpha*omega - E1;
/// stage 2: beta*(stage 1) - E2;
/// stage 3: gamma*(stage 2) - E3.
pub fn stage_divisor(stage: u8, p: &AmpleParams) -> DivisorClass {
    let s1 = DivisorClass::term(DivisorSym::Omega, p.alpha.clone())
        .sub(&DivisorClass::term(DivisorSym::E1, rat(1, 1)));
    match stage {
        1 => s1,
        2 => s1.scale(&p.beta).sub(&DivisorClass::term(DivisorSym::E2, rat(1, 1))),
        3 => s1
            .scale(&p.beta)
            .sub(&DivisorClass::term(DivisorSym::E2, rat(1, 1)))
            .scale(&p.gamma)
            .sub(&DivisorClass::term(DivisorSym::E3, rat(1, 1))),
        _ => panic!("stage must be 1, 2, or 3"),
    }
}

/// Degrees of a divisor class on every curve of a stage.
pub fn degrees(
    tables: &IntersectionTables,
    d: &DivisorClass,
    stage: u8,
) -> Result<Vec<(String, Rational)>, AmplenessError> {
    let st = tables.stage(stage);
    st.curves
        .iter()
        .map(|c| Ok((st.display_name(c), pairing(tables, d, stage, c)?)))
        .collect()
}

/// Strict positivity on every curve class of the stage; the per-curve
/// degrees are returned alongside the verdict.
pub fn is_ample(
    tables: &IntersectionTables,
    stage: u8,
    p: &AmpleParams,
) -> Result<(bool, Vec<(String, Rational)>), AmplenessError> {
    let degs = degrees(tables, &stage_divisor(stage, p), stage)?;
    let ok = degs.iter().all(|(_, d)| d > &rat(0, 1));
    Ok((ok, degs))
}

// ---------------------------------------------------------------------------
// Symbolic region certificates.
// ---------------------------------------------------------------------------

pub fn abg_table() -> Arc<VarTable> {
    VarTable::new(&["alpha", "beta", "gamma"])
}

/// How one curve's positivity condition relates to the displayed system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionKind {
    /// Degree is a positive constant; no condition.
    Vacuous,
    /// Degree equals a displayed inequality cleared by the stated positive
    /// factor.
    Displayed { cleared_by: &'static str },
    /// Degree minus the named curve's degree is a positive constant, so
    /// positivity follows from the displayed system.
    Implied { via: &'static str },
}

/// Per-curve outcome of [`region_equivalence_certificate`].
#[derive(Debug, Clone)]
pub struct CurveCondition {
    pub curve: String,
    pub degree: MultiPoly,
    pub expected: MultiPoly,
    pub kind: ConditionKind,
    pub matches: bool,
}

#[derive(Debug, Clone)]
pub struct RegionCertificate {
    pub stage: u8,
    pub conditions: Vec<CurveCondition>,
}

impl RegionCertificate {
    pub fn ok(&self) -> bool {
        self.conditions.iter().all(|c| c.matches)
    }
}

/// Divisor coefficients of the stage divisor as polynomials in alpha,
/// beta, gamma.
fn symbolic_stage_coeffs(stage: u8, t: &Arc<VarTable>) -> Vec<(DivisorSym, MultiPoly)> {
    let p = |s: &str| parse_poly(t, s).unwrap();
    match stage {
        1 => vec![(DivisorSym::Omega, p("alpha")), (DivisorSym::E1, p("-1"))],
        2 => vec![
            (DivisorSym::Omega, p("alpha*beta")),
            (DivisorSym::E1, p("-beta")),
            (DivisorSym::E2, p("-1")),
        ],
        3 => vec![
            (DivisorSym::Omega, p("alpha*beta*gamma")),
            (DivisorSym::E1, p("-beta*gamma")),
            (DivisorSym::E2, p("-gamma")),
            (DivisorSym::E3, p("-1")),
        ],
        _ => panic!("stage must be 1, 2, or 3"),
    }
}

/// Expands the degree of the stage divisor on each curve as an exact
/// polynomial in alpha, beta, gamma and matches it against the displayed
/// inequality system (after clearing the stated positive factors).
pub fn region_equivalence_certificate(
    tables: &IntersectionTables,
    stage: u8,
) -> RegionCertificate {
    let t = abg_table();
    let p = |s: &str| parse_poly(&t, s).unwrap();
    let st = tables.stage(stage);
    let coeffs = symbolic_stage_coeffs(stage, &t);

    // (fixture key, expected degree polynomial, relation to the display)
    let expected: Vec<(&str, MultiPoly, ConditionKind)> = match stage {
        1 => vec![
            ("d_u", p("1"), ConditionKind::Vacuous),
            // alpha > 2/3, cleared by 3.
            ("l_vw", p("3*alpha - 2"), ConditionKind::Displayed { cleared_by: "3" }),
        ],
        2 => vec![
            ("d_u", p("beta - 1"), ConditionKind::Displayed { cleared_by: "1" }),
            // alpha > (1/3)(2 + 1/beta), cleared by 3*beta.
            (
                "l_vw",
                p("3*alpha*beta - 2*beta - 1"),
                ConditionKind::Displayed { cleared_by: "3*beta" },
            ),
            ("c_u", p("beta - 1"), ConditionKind::Displayed { cleared_by: "1" }),
            ("f2_u", p("1"), ConditionKind::Vacuous),
        ],
        3 => vec![
            // beta > 1 + 1/gamma, cleared by gamma.
            (
                "d_u",
                p("beta*gamma - gamma - 1"),
                ConditionKind::Displayed { cleared_by: "gamma" },
            ),
            ("e_u", p("1"), ConditionKind::Vacuous),
            // alpha > 2/3 + 1/(3 beta) - 2/(3 beta gamma), cleared by
            // 3*beta*gamma.
            (
                "l_vw",
                p("3*alpha*beta*gamma - 2*beta*gamma - gamma + 2"),
                ConditionKind::Displayed { cleared_by: "3*beta*gamma" },
            ),
            // gamma*(beta - 1) = (beta*gamma - gamma - 1) + 1.
            ("c_u", p("beta*gamma - gamma"), ConditionKind::Implied { via: "d_u" }),
            ("f2_u", p("gamma - 1"), ConditionKind::Displayed { cleared_by: "1" }),
            ("f_u", p("1"), ConditionKind::Vacuous),
        ],
        _ => panic!("stage must be 1, 2, or 3"),
    };

    let degree_of = |curve_key: &str| -> MultiPoly {
        let ci = st.curves.iter().position(|c| c == curve_key).unwrap();
        let mut acc = MultiPoly::zero(&t);
        for (sym, coeff) in &coeffs {
            let d = tables.row_value(stage, *sym, ci).unwrap();
            let scalar = Eisenstein::from_rational(d.clone());
            acc = acc.add(&coeff.scale(&scalar));
        }
        acc
    };

    let mut conditions = Vec::new();
    for (key, expect, kind) in expected {
        let degree = degree_of(key);
        let mut matches = degree == expect;
        match &kind {
            ConditionKind::Vacuous => {
                // Constant and strictly positive.
                matches = matches
                    && degree
                        .as_constant()
                        .map(|c| c.is_rational() && !c.is_display_negative() && !c.is_zero())
                        .unwrap_or(false);
            }
            ConditionKind::Implied { via } => {
                // degree - degree(via) must be a positive constant.
                let diff = degree.sub(&degree_of(via));
                matches = matches
                    && diff
                        .as_constant()
                        .map(|c| c.is_rational() && !c.is_display_negative() && !c.is_zero())
                        .unwrap_or(false);
            }
            ConditionKind::Displayed { .. } => {}
        }
        conditions.push(CurveCondition {
            curve: st.display_name(key),
            degree,
            expected: expect,
            kind,
            matches,
        });
    }
    RegionCertificate { stage, conditions }
}

// ---------------------------------------------------------------------------
// Contraction twist.
// ---------------------------------------------------------------------------

/// Degrees of the twisted stage-3 divisor for admissible (alpha, beta).
#[derive(Debug, Clone)]
pub struct TwistCertificate {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub twist: Rational,
    pub degrees: Vec<(String, Rational)>,
    /// Zero exactly on dt_u and lt_vw, strictly positive elsewhere.
    pub pattern_ok: bool,
}

/// Sets gamma = 1/((1-alpha) beta) and m = (alpha beta - 1)/((1-alpha)
/// beta), twists the stage-3 divisor by m(E1 - E2 + E3), and checks the
/// degree pattern on the six stage-3 curves.
pub fn contraction_twist_certificate(
    tables: &IntersectionTables,
    alpha: &Rational,
    beta: &Rational,
) -> Result<TwistCertificate, AmplenessError> {
    let one = rat(1, 1);
    let ab = alpha * beta;
    let d = &(&one - alpha) * beta;
    let twisted_e = &(rat(2, 1) * alpha - &one) * beta;
    if ab <= one {
        return Err(AmplenessError::Precondition(format!("alpha*beta = {ab} is not > 1")));
    }
    if d >= one {
        return Err(AmplenessError::Precondition(format!("(1-alpha)*beta = {d} is not < 1")));
    }
    if twisted_e >= one {
        return Err(AmplenessError::Precondition(format!(
            "(2*alpha-1)*beta = {twisted_e} is not < 1"
        )));
    }
    let gamma = &one / &d;
    let m = &(&ab - &one) / &d;
    let params = AmpleParams::new(alpha.clone(), beta.clone(), gamma.clone());
    let twist_class = DivisorClass::term(DivisorSym::E1, rat(1, 1))
        .sub(&DivisorClass::term(DivisorSym::E2, rat(1, 1)))
        .add(&DivisorClass::term(DivisorSym::E3, rat(1, 1)));
    let a = stage_divisor(3, &params).add(&twist_class.scale(&m));
    let degs = degrees(tables, &a, 3)?;
    let zero = rat(0, 1);
    let pattern_ok = degs.iter().all(|(name, deg)| {
        if name == "dt_u" || name == "lt_vw" {
            deg == &zero
        } else {
            deg > &zero
        }
    });
    Ok(TwistCertificate {
        alpha: alpha.clone(),
        beta: beta.clone(),
        gamma,
        twist: m,
        degrees: degs,
        pattern_ok,
    })
}

/// A deterministic grid of admissible (alpha, beta) pairs: every listed
/// combination satisfying the three preconditions, at least 20 points.
pub fn default_twist_grid() -> Vec<(Rational, Rational)> {
    let alphas = [
        rat(11, 20),
        rat(3, 5),
        rat(13, 20),
        rat(7, 10),
        rat(3, 4),
        rat(4, 5),
        rat(17, 20),
        rat(9, 10),
        rat(19, 20),
    ];
    let betas = [
        rat(13, 12),
        rat(11, 10),
        rat(6, 5),
        rat(13, 10),
        rat(7, 5),
        rat(3, 2),
        rat(8, 5),
        rat(7, 4),
        rat(9, 5),
        rat(2, 1),
        rat(9, 4),
        rat(12, 5),
    ];
    let one = rat(1, 1);
    let mut grid = Vec::new();
    for a in &alphas {
        for b in &betas {
            let ab = a * b;
            let d = &(&one - a) * b;
            let e = &(rat(2, 1) * a - &one) * b;
            if ab > one && d < one && e < one {
                grid.push((a.clone(), b.clone()));
            }
        }
    }
    grid
}
