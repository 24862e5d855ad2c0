//! Suite runner: loads fixtures, executes the selected verification
//! suites in their fixed order, and assembles the deterministic report.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::ampleness::{
    self, contraction_twist_certificate, default_twist_grid, is_ample, region_equivalence_certificate,
    AmpleParams, IntersectionTables,
};
use crate::fiber::{
    central_fiber_points, conic_warmup_check, jacobian_specs, reduced_cone_certificate,
    smoothness_certificate, tangent_dimension, torus_equivariance_check,
};
use crate::fixtures::FixtureDir;
use crate::freeness::{
    all_multiplication_matrices, commutation_certificate, dump_matrices, relation_certificate,
    RewriteSystem,
};
use crate::polyring::MultiPoly;
use crate::relations::{table1_certificate, xring_table, Table1};
use crate::report::{
    CheckResult, FixtureStamp, Format, RunConfig, Suite, VerificationReport,
};
use crate::scalars::rat;
use crate::sections::{
    intersection_cell, local_section_space, s_membership_space, st_basis_certificate,
    t_membership_space, tilde_compatibility_check, LocalBasis, StBasis,
};

/// Configuration or fixture problems; these map to process exit code 2.
#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Fixture(#[from] crate::fixtures::FixtureError),
    #[error(transparent)]
    Ampleness(#[from] crate::ampleness::AmplenessError),
    #[error("{0}")]
    Config(String),
    #[error("writing output: {0}")]
    Output(std::io::Error),
}

fn wit(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Runs the configured suites and assembles the report. The exit-code
/// contract is: 0 iff every check passes, 1 if any check fails, and this
/// function returning Err means exit 2 (configuration/fixture error).
pub fn run(config: &RunConfig) -> Result<VerificationReport, RunError> {
    if config.suites.is_empty() {
        return Err(RunError::Config("empty suite set".into()));
    }
    let dir = FixtureDir::new(&config.fixture_dir);

    // Stamp every fixture the selected suites read, in sorted order.
    let mut files: Vec<&str> = config
        .suites
        .iter()
        .flat_map(|s| s.fixture_files().iter().copied())
        .collect();
    files.sort_unstable();
    files.dedup();
    let mut fixtures = Vec::new();
    for f in files {
        fixtures.push(FixtureStamp { path: f.into(), checksum: dir.checksum(f)? });
    }

    let mut checks = Vec::new();
    for suite in &config.suites {
        match suite {
            Suite::Basis => basis_suite(&dir, &mut checks)?,
            Suite::Relations => relations_suite(&dir, &mut checks)?,
            Suite::Freeness => freeness_suite(&dir, config.dump_matrices.as_deref(), &mut checks)?,
            Suite::Fiber => fiber_suite(&dir, &mut checks)?,
            Suite::Ampleness => ampleness_suite(&dir, &mut checks)?,
        }
    }
    let report = VerificationReport::new(fixtures, checks);

    if let Some(path) = &config.out {
        let body = match config.format {
            Format::Json => report.to_json(),
            Format::Text => report.to_text(),
        };
        std::fs::write(path, body).map_err(RunError::Output)?;
    }
    Ok(report)
}

fn dims_string(dims: &[usize]) -> String {
    format!("{dims:?}")
}

fn basis_suite(dir: &FixtureDir, checks: &mut Vec<CheckResult>) -> Result<(), RunError> {
    let suite = Suite::Basis;
    let st_basis = StBasis::load(&dir.path("st_basis.poly"))?;
    let local_basis = LocalBasis::load(&dir.path("local_basis.poly"))?;

    let compat = tilde_compatibility_check();
    checks.push(CheckResult::from_flag(
        &suite,
        "tilde_cyclic_equivariance",
        "sections/tilde-frame/diagonal-action",
        compat.rot1_diagonal && compat.rot2_diagonal && compat.id_fixed,
        wit(&[
            ("uvw->vwu acts by (z^2, z, 1)", compat.rot1_diagonal.to_string()),
            ("uvw->wuv acts by (z, z^2, 1)", compat.rot2_diagonal.to_string()),
            ("determinant", compat.determinant.to_string()),
        ]),
    ));
    checks.push(CheckResult::from_flag(
        &suite,
        "tilde_triple_product",
        "sections/tilde-frame/triple-product",
        compat.triple_product && !compat.determinant.is_zero(),
        wit(&[("ut*vt*wt = u^3+v^3+w^3-3uvw", compat.triple_product.to_string())]),
    ));

    let s_dims: Vec<usize> = (0..=3).map(|a| s_membership_space(a).dim()).collect();
    checks.push(CheckResult::from_flag(
        &suite,
        "s_space_dimensions",
        "sections/s-criterion/dimensions",
        s_dims == [1, 4, 7, 10],
        wit(&[("computed", dims_string(&s_dims)), ("expected", "[1, 4, 7, 10]".into())]),
    ));
    let t_dims: Vec<usize> = (0..=3).map(|b| t_membership_space(b).dim()).collect();
    checks.push(CheckResult::from_flag(
        &suite,
        "t_space_dimensions",
        "sections/t-criterion/dimensions",
        t_dims == [1, 4, 7, 10],
        wit(&[("computed", dims_string(&t_dims)), ("expected", "[1, 4, 7, 10]".into())]),
    ));

    let listed = crate::polyring::parse_poly(
        &crate::sections::uvw_table(),
        "u^2*w + z*v*w^2 + z^2*u*v^2",
    )
    .unwrap();
    let listed_vec = crate::sections::cubic_to_vec(&listed).unwrap();
    checks.push(CheckResult::from_flag(
        &suite,
        "t_space_b1_contains_listed_element",
        "sections/t-criterion/b1-element",
        t_membership_space(1).contains(&listed_vec),
        wit(&[("element", listed.to_string())]),
    ));

    // The self-consistent grid; see intersection_cell_11 for the unique
    // generator and the generation check below for the cross-validation.
    let expected_grid = [[0, 0, 0, 1], [0, 1, 2, 4], [0, 2, 4, 7], [1, 4, 7, 10]];
    let mut grid = Vec::new();
    let mut grid_ok = true;
    for a in 0..=3u32 {
        let mut row = Vec::new();
        for b in 0..=3u32 {
            let d = intersection_cell(a, b).dim();
            grid_ok &= d == expected_grid[a as usize][b as usize];
            row.push(d);
        }
        grid.push(row);
    }
    checks.push(CheckResult::from_flag(
        &suite,
        "intersection_cell_grid",
        "sections/intersection/dimension-grid",
        grid_ok,
        wit(&[
            ("computed", format!("{grid:?}")),
            ("expected", format!("{expected_grid:?}")),
            (
                "note",
                "cell (2,2) is 4-dimensional; the generation check certifies the grid against the free basis".into(),
            ),
        ]),
    ));

    let cell11 = intersection_cell(1, 1);
    checks.push(CheckResult::from_flag(
        &suite,
        "intersection_cell_11_unique_generator",
        "sections/intersection/cell-1-1",
        cell11.dim() == 1 && cell11.contains(&listed_vec),
        wit(&[("dim", cell11.dim().to_string()), ("element", listed.to_string())]),
    ));

    let cert = st_basis_certificate(&st_basis);
    let membership_ok = cert.memberships.iter().all(|m| m.member);
    checks.push(CheckResult::from_flag(
        &suite,
        "st_generator_membership",
        "sections/free-basis/membership",
        membership_ok,
        cert.memberships
            .iter()
            .map(|m| (m.label.clone(), format!("{} ({})", m.member, m.detail)))
            .collect(),
    ));
    checks.push(CheckResult::from_flag(
        &suite,
        "st_generator_determinant",
        "sections/free-basis/determinant",
        cert.determinant_nonzero,
        wit(&[("determinant", cert.determinant.to_string())]),
    ));
    let gen_ok = cert.generation.iter().all(|c| c.span_ok);
    checks.push(CheckResult::from_flag(
        &suite,
        "st_generation_grid",
        "sections/free-basis/generation",
        gen_ok,
        cert.generation
            .iter()
            .map(|c| {
                (
                    format!("cell ({},{})", c.cell.0, c.cell.1),
                    format!(
                        "generated dim {} vs cell dim {}, span equal: {}",
                        c.generated_dim, c.expected_dim, c.span_ok
                    ),
                )
            })
            .collect(),
    ));

    let local = local_section_space(&local_basis);
    let conds_ok = local.element_conditions.iter().all(|(_, cs)| cs.iter().all(|&b| b));
    checks.push(CheckResult::from_flag(
        &suite,
        "local_chart_conditions",
        "sections/local-basis/chart-conditions",
        conds_ok,
        local
            .element_conditions
            .iter()
            .map(|(l, cs)| (l.clone(), format!("{cs:?}")))
            .collect(),
    ));
    checks.push(CheckResult::from_flag(
        &suite,
        "local_kernel_dimension",
        "sections/local-basis/kernel-dimension",
        local.kernel_dim_ok,
        wit(&[("computed", local.kernel.dim().to_string()), ("expected", "12".into())]),
    ));
    checks.push(CheckResult::from_flag(
        &suite,
        "local_kernel_equals_truncated_span",
        "sections/local-basis/span",
        local.span_ok,
        wit(&[("span equal", local.span_ok.to_string())]),
    ));
    checks.push(CheckResult::from_flag(
        &suite,
        "local_counting_identity",
        "sections/local-basis/counting",
        local.counting_ok,
        wit(&[
            ("sum of max(0, 3 - deg_t)", local.expected_count.to_string()),
            ("kernel dim", local.kernel.dim().to_string()),
        ]),
    ));
    Ok(())
}

fn relations_suite(dir: &FixtureDir, checks: &mut Vec<CheckResult>) -> Result<(), RunError> {
    let suite = Suite::Relations;
    let table1 = Table1::load(&dir.path("table1.poly"))?;
    let basis = StBasis::load(&dir.path("st_basis.poly"))?;
    let cert = table1_certificate(&table1, &basis);

    let frame_ok = cert.rows.iter().all(|r| r.frame_ok);
    checks.push(CheckResult::from_flag(
        &suite,
        "frame_conformance",
        "relations/frame/degree-2-linear-st",
        frame_ok,
        cert.rows
            .iter()
            .filter(|r| !r.frame_ok)
            .map(|r| (r.label.clone(), r.detail.clone()))
            .collect(),
    ));
    let vanish_ok = cert.rows.iter().all(|r| r.vanish_ok);
    checks.push(CheckResult::from_flag(
        &suite,
        "substitution_vanishing",
        "relations/substitution/vanishing",
        vanish_ok,
        if vanish_ok {
            wit(&[("rows", "all 27 residuals are zero".into())])
        } else {
            cert.rows
                .iter()
                .filter(|r| !r.vanish_ok)
                .map(|r| (r.label.clone(), r.detail.clone()))
                .collect()
        },
    ));
    checks.push(CheckResult::from_flag(
        &suite,
        "fraction_field_rank",
        "relations/independence/rank",
        cert.rank_ok,
        wit(&[("computed rank", cert.rank.to_string()), ("expected", "27".into())]),
    ));
    checks.push(CheckResult::from_flag(
        &suite,
        "kernel_membership_and_dimension",
        "relations/kernel/membership",
        cert.rows_in_kernel,
        wit(&[
            ("kernel dimension (reported, no target)", cert.kernel_dim.to_string()),
            ("all rows in kernel", cert.rows_in_kernel.to_string()),
        ]),
    ));
    Ok(())
}

fn freeness_suite(
    dir: &FixtureDir,
    dump_dir: Option<&Path>,
    checks: &mut Vec<CheckResult>,
) -> Result<(), RunError> {
    let suite = Suite::Freeness;
    let table1 = Table1::load(&dir.path("table1.poly"))?;

    let system = match RewriteSystem::from_table1(&table1) {
        Ok(s) => s,
        Err(e) => {
            checks.push(CheckResult::fail(
                &suite,
                "rewrite_heads",
                "freeness/rewrite/heads",
                wit(&[("error", e)]),
            ));
            return Ok(());
        }
    };
    checks.push(CheckResult::pass(
        &suite,
        "rewrite_heads",
        "freeness/rewrite/heads",
        wit(&[
            ("rules", system.rule_count().to_string()),
            ("coverage", "27 heads + x5^2 = all 28 quadratics".into()),
        ]),
    ));

    let mats = match all_multiplication_matrices(&system) {
        Ok(m) => m,
        Err(e) => {
            checks.push(CheckResult::fail(
                &suite,
                "multiplication_matrices",
                "freeness/matrices/construction",
                wit(&[("error", e)]),
            ));
            return Ok(());
        }
    };
    checks.push(CheckResult::pass(
        &suite,
        "multiplication_matrices",
        "freeness/matrices/construction",
        wit(&[("matrices", "x2 x3 x4 x5 x6 x8 x9".into())]),
    ));
    if let Some(dump) = dump_dir {
        dump_matrices(dump, &mats).map_err(RunError::Output)?;
    }

    let comm = commutation_certificate(&mats);
    checks.push(CheckResult::from_flag(
        &suite,
        "commutation",
        "freeness/matrices/commutation",
        comm.ok(),
        if comm.ok() {
            wit(&[("pairs", format!("{} commutators vanish", comm.pairs_checked))])
        } else {
            comm.failures
                .iter()
                .map(|(a, b, r, c)| {
                    (format!("[{a},{b}]"), format!("nonzero entry at ({r},{c})"))
                })
                .collect()
        },
    ));

    let rel = relation_certificate(&table1, &mats);
    checks.push(CheckResult::from_flag(
        &suite,
        "matrix_relations",
        "freeness/matrices/relations",
        rel.ok(),
        if rel.ok() {
            wit(&[("relations", format!("{} matrix identities hold", rel.relations_checked))])
        } else {
            rel.failures.iter().map(|(l, d)| (l.clone(), d.clone())).collect()
        },
    ));

    checks.push(CheckResult::from_flag(
        &suite,
        "flatness_corollary",
        "freeness/flatness",
        comm.ok() && rel.ok(),
        wit(&[(
            "freeness of rank 9 over k[s,t,x0,x1,x7]",
            (comm.ok() && rel.ok()).to_string(),
        )]),
    ));
    Ok(())
}

fn fiber_suite(dir: &FixtureDir, checks: &mut Vec<CheckResult>) -> Result<(), RunError> {
    let suite = Suite::Fiber;
    let table1 = Table1::load(&dir.path("table1.poly"))?;

    match torus_equivariance_check(&table1) {
        Ok(weights) => {
            checks.push(CheckResult::pass(
                &suite,
                "torus_bihomogeneity",
                "fiber/torus/bihomogeneity",
                weights.iter().map(|(l, w)| (l.clone(), format!("({}, {})", w.0, w.1))).collect(),
            ));
        }
        Err(e) => {
            checks.push(CheckResult::fail(
                &suite,
                "torus_bihomogeneity",
                "fiber/torus/bihomogeneity",
                wit(&[("inhomogeneity", e.to_string())]),
            ));
        }
    }

    let pts = central_fiber_points(&table1);
    checks.push(CheckResult::from_flag(
        &suite,
        "central_fiber_points",
        "fiber/points/0-1-7",
        pts == vec![0, 1, 7],
        wit(&[("computed", format!("{pts:?}")), ("expected", "[0, 1, 7]".into())]),
    ));

    let cone = reduced_cone_certificate(&table1);
    checks.push(CheckResult::from_flag(
        &suite,
        "reduced_cone_quadrics",
        "fiber/reduced-cone/quadrics",
        cone.dim_ok && cone.x1_free,
        wit(&[
            ("dimension", cone.quadrics.len().to_string()),
            ("x1-free", cone.x1_free.to_string()),
            (
                "quadrics",
                cone.quadrics.iter().map(|q| q.to_string()).collect::<Vec<_>>().join("; "),
            ),
        ]),
    ));
    checks.push(CheckResult::from_flag(
        &suite,
        "twisted_cubic_parametrization",
        "fiber/reduced-cone/parametrization",
        cone.parametrization_ok,
        match &cone.constants {
            Some((c2, c4, c7)) => wit(&[
                ("c2", c2.to_string()),
                ("c4", c4.to_string()),
                ("c7", c7.to_string()),
            ]),
            None => wit(&[("constants", "unsolvable".into())]),
        },
    ));

    // Tangent dimensions at p0: 3 for the fiber, 2 for the reduced cone.
    let table = xring_table();
    let zero = MultiPoly::zero(&table);
    let st_zero: Vec<(&str, MultiPoly)> = vec![("s", zero.clone()), ("t", zero.clone())];
    let fiber_eqs: Vec<MultiPoly> =
        table1.rows().map(|f| f.substitute(&table, &st_zero).unwrap()).collect();
    let vars = ["x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9"];
    let fiber_dim = tangent_dimension(0, &fiber_eqs, &vars).unwrap();
    checks.push(CheckResult::from_flag(
        &suite,
        "tangent_dimension_fiber_p0",
        "fiber/tangent/fiber-p0",
        fiber_dim == 3,
        wit(&[("computed", fiber_dim.to_string()), ("expected", "3".into())]),
    ));
    let cone_vars = ["x2", "x4", "x7", "x1"];
    let cone_dim = tangent_dimension(0, &cone.quadrics, &cone_vars).unwrap();
    checks.push(CheckResult::from_flag(
        &suite,
        "tangent_dimension_cone_p0",
        "fiber/tangent/cone-p0",
        cone_dim == 2 && fiber_dim > cone_dim,
        wit(&[
            ("computed", cone_dim.to_string()),
            ("expected", "2".into()),
            ("nonreducedness witness (3 > 2)", (fiber_dim > cone_dim).to_string()),
        ]),
    ));

    for spec in jacobian_specs() {
        let det = smoothness_certificate(&table1, &spec).unwrap();
        checks.push(CheckResult::from_flag(
            &suite,
            &format!("jacobian_p{}", spec.point),
            &format!("fiber/smoothness/p{}", spec.point),
            !det.is_zero(),
            wit(&[
                ("determinant", det.to_string()),
                ("equations", format!("{:?}", spec.equations)),
                ("variables", format!("{:?}", spec.variables)),
            ]),
        ));
    }

    let warmup = conic_warmup_check();
    checks.push(CheckResult::from_flag(
        &suite,
        "conic_partials_ideal",
        "conic/total-space-smoothness",
        warmup.total_space_ok,
        wit(&[(
            "partials",
            warmup.partials.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("; "),
        )]),
    ));
    checks.push(CheckResult::from_flag(
        &suite,
        "conic_fiber_singularity",
        "conic/singular-iff-st-zero",
        warmup.smooth_off_axes && warmup.singular_on_axes,
        wit(&[
            ("smooth off the axes", warmup.smooth_off_axes.to_string()),
            ("singular on each axis", warmup.singular_on_axes.to_string()),
        ]),
    ));
    Ok(())
}

fn ampleness_suite(dir: &FixtureDir, checks: &mut Vec<CheckResult>) -> Result<(), RunError> {
    let suite = Suite::Ampleness;
    let tables = IntersectionTables::load(&dir.path("intersections.tbl"))?;

    for stage in 1..=3u8 {
        let cert = region_equivalence_certificate(&tables, stage);
        checks.push(CheckResult::from_flag(
            &suite,
            &format!("stage{stage}_region"),
            &format!("ampleness/region/stage{stage}"),
            cert.ok(),
            cert.conditions
                .iter()
                .map(|c| {
                    (
                        c.curve.clone(),
                        format!("degree = {} ({:?}, matches: {})", c.degree, c.kind, c.matches),
                    )
                })
                .collect(),
        ));
    }

    let examples = [
        ("stage1_alpha_1", 1u8, AmpleParams::new(rat(1, 1), rat(1, 1), rat(1, 1)), true),
        ("stage1_boundary_2_3", 1, AmpleParams::new(rat(2, 3), rat(1, 1), rat(1, 1)), false),
        ("stage3_example", 3, AmpleParams::new(rat(3, 4), rat(3, 1), rat(2, 1)), true),
    ];
    for (name, stage, params, expect) in examples {
        let (ok, degs) = is_ample(&tables, stage, &params)?;
        let mut witness: BTreeMap<String, String> =
            degs.iter().map(|(c, d)| (c.clone(), d.to_string())).collect();
        witness.insert("ample".into(), ok.to_string());
        witness.insert("expected".into(), expect.to_string());
        checks.push(CheckResult::from_flag(
            &suite,
            name,
            &format!("ampleness/examples/{name}"),
            ok == expect,
            witness,
        ));
    }

    for (name, alpha, beta) in [
        ("twist_example_3_5__2", rat(3, 5), rat(2, 1)),
        ("twist_example_9_10__6_5", rat(9, 10), rat(6, 5)),
    ] {
        let cert = contraction_twist_certificate(&tables, &alpha, &beta)?;
        let mut witness: BTreeMap<String, String> =
            cert.degrees.iter().map(|(c, d)| (c.clone(), d.to_string())).collect();
        witness.insert("gamma".into(), cert.gamma.to_string());
        witness.insert("twist".into(), cert.twist.to_string());
        checks.push(CheckResult::from_flag(
            &suite,
            name,
            &format!("ampleness/twist/{name}"),
            cert.pattern_ok,
            witness,
        ));
    }

    let grid = default_twist_grid();
    let mut all_ok = grid.len() >= 20;
    let mut failures = Vec::new();
    for (a, b) in &grid {
        let cert = contraction_twist_certificate(&tables, a, b)?;
        if !cert.pattern_ok {
            all_ok = false;
            failures.push(format!("alpha={a}, beta={b}"));
        }
    }
    checks.push(CheckResult::from_flag(
        &suite,
        "contraction_twist_grid",
        "ampleness/twist/grid",
        all_ok,
        wit(&[
            ("grid points", grid.len().to_string()),
            (
                "zero pattern",
                if failures.is_empty() {
                    "degree 0 on dt_u, lt_vw and positive elsewhere at every point".into()
                } else {
                    failures.join("; ")
                },
            ),
        ]),
    ));

    let boundary = contraction_twist_certificate(&tables, &rat(1, 2), &rat(2, 1));
    checks.push(CheckResult::from_flag(
        &suite,
        "contraction_precondition_boundary",
        "ampleness/twist/precondition",
        boundary.is_err(),
        wit(&[(
            "alpha=1/2, beta=2",
            match boundary {
                Err(e) => format!("rejected: {e}"),
                Ok(_) => "accepted (should have been rejected)".into(),
            },
        )]),
    ));
    let _ = ampleness::abg_table();
    Ok(())
}
