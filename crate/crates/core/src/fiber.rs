//! Geometry of the central fiber s = t = 0: torus equivariance of the 27
//! relations, the coordinate points on the fiber, the twisted-cubic cone
//! structure of the reduced subscheme, tangent-space dimensions, the three
//! 7x7 Jacobian smoothness certificates, and the conic-bundle warm-up.

use crate::polyring::{
    bi_weight, jacobian, parse_poly, rank_over_field, MultiPoly, PolyError, PolyMatrix,
    VarTable, WeightVector,
};
use crate::relations::{xring_table, Table1};
use crate::scalars::Eisenstein;

/// The two-dimensional torus weights of s, t, x0..x9, in table order.
pub const TORUS_WEIGHTS: [(i64, i64); 12] = [
    (3, 0), // s
    (0, 3), // t
    (0, 3), // x0
    (1, 1), // x1
    (1, 2), // x2
    (1, 3), // x3
    (2, 1), // x4
    (2, 2), // x5
    (2, 3), // x6
    (3, 0), // x7
    (3, 1), // x8
    (3, 2), // x9
];

pub fn torus_weight_vector() -> WeightVector {
    WeightVector::new(&xring_table(), TORUS_WEIGHTS.to_vec())
}

/// Bi-homogeneity of every relation under the torus weights; the common
/// bi-weight of each row is returned in fixture order.
pub fn torus_equivariance_check(table1: &Table1) -> Result<Vec<(String, (i64, i64))>, PolyError> {
    let w = torus_weight_vector();
    let mut out = Vec::new();
    for (label, f) in &table1.entries {
        let bw = bi_weight(f, &w)?;
        out.push((label.clone(), bw));
    }
    Ok(out)
}

/// The coordinate point with x_i = 1, all other coordinates and s, t zero,
/// as a full evaluation point of the ambient table.
pub fn coordinate_point(i: usize) -> Vec<Eisenstein> {
    assert!(i < 10);
    let mut pt = vec![Eisenstein::zero(); 12];
    pt[2 + i] = Eisenstein::one();
    pt
}

/// Indices i such that every relation vanishes at the coordinate point p_i
/// over s = t = 0.
pub fn central_fiber_points(table1: &Table1) -> Vec<usize> {
    (0..10)
        .filter(|&i| {
            let pt = coordinate_point(i);
            table1.rows().all(|f| f.eval(&pt).is_zero())
        })
        .collect()
}

/// Outcome of the reduced-cone computation.
#[derive(Debug, Clone)]
pub struct ReducedConeCertificate {
    /// Canonical basis of the specialized quadric space.
    pub quadrics: Vec<MultiPoly>,
    pub dim_ok: bool,
    pub x1_free: bool,
    /// Solved parametrization constants (c2, c4, c7) for
    /// x0 = l^3, x2 = c2*l^2*m, x4 = c4*l*m^2, x7 = c7*m^3.
    pub constants: Option<(Eisenstein, Eisenstein, Eisenstein)>,
    pub parametrization_ok: bool,
}

impl ReducedConeCertificate {
    pub fn ok(&self) -> bool {
        self.dim_ok && self.x1_free && self.parametrization_ok
    }
}

/// Substitutes s = t = x3 = x5 = x6 = x8 = x9 = 0 into every relation,
/// certifies the surviving quadric space has dimension exactly 3 and does
/// not involve x1, and solves the induced triangular system for a monomial
/// twisted-cubic parametrization.
pub fn reduced_cone_certificate(table1: &Table1) -> ReducedConeCertificate {
    let table = xring_table();
    let zero = MultiPoly::zero(&table);
    let assignment: Vec<(&str, MultiPoly)> = ["s", "t", "x3", "x5", "x6", "x8", "x9"]
        .iter()
        .map(|v| (*v, zero.clone()))
        .collect();

    // Collect the nonzero specializations and reduce to a canonical basis
    // over the quadric monomials in x0, x1, x2, x4, x7.
    let survivors: Vec<MultiPoly> = table1
        .rows()
        .map(|f| f.substitute(&table, &assignment).unwrap())
        .filter(|p| !p.is_zero())
        .collect();
    let live = ["x0", "x1", "x2", "x4", "x7"];
    let live_idx: Vec<usize> = live.iter().map(|v| table.index_of(v).unwrap()).collect();
    let mut monomials = Vec::new();
    for a in 0..5 {
        for b in a..5 {
            monomials.push((live_idx[a], live_idx[b]));
        }
    }
    let mut rows: Vec<Vec<Eisenstein>> = Vec::new();
    for p in &survivors {
        let mut row = vec![Eisenstein::zero(); monomials.len()];
        for (m, c) in p.terms() {
            let e = m.exponents();
            let mut xs = Vec::new();
            for (k, &x) in e.iter().enumerate() {
                for _ in 0..x {
                    xs.push(k);
                }
            }
            assert_eq!(xs.len(), 2, "specialized relation is quadratic");
            let q = monomials.iter().position(|&(a, b)| (a, b) == (xs[0], xs[1])).unwrap();
            row[q] = c.clone();
        }
        rows.push(row);
    }
    crate::polyring::rref(&mut rows);
    let dim = rows.len();
    let quadrics: Vec<MultiPoly> = rows
        .iter()
        .map(|row| {
            let mut raw = Vec::new();
            for (q, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    let (a, b) = monomials[q];
                    let mut exps = vec![0u32; 12];
                    exps[a] += 1;
                    exps[b] += 1;
                    raw.push((exps, c.clone()));
                }
            }
            MultiPoly::from_raw_terms(&table, raw)
        })
        .collect();
    let ix1 = table.index_of("x1").unwrap();
    let x1_free = quadrics.iter().all(|q| q.degree_in(ix1) == 0);
    let dim_ok = dim == 3;

    let (constants, parametrization_ok) = solve_parametrization(&quadrics);
    ReducedConeCertificate { quadrics, dim_ok, x1_free, constants, parametrization_ok }
}

/// Substitutes x0 = l^3, x2 = c2*l^2*m, x4 = c4*l*m^2, x7 = c7*m^3 with
/// c2 = 1 and solves for c4, c7 one quadric at a time; remaining quadrics
/// must then vanish identically in (l, m).
fn solve_parametrization(
    quadrics: &[MultiPoly],
) -> (Option<(Eisenstein, Eisenstein, Eisenstein)>, bool) {
    let c2 = Eisenstein::one();
    let mut c4: Option<Eisenstein> = None;
    let mut c7: Option<Eisenstein> = None;

    // Under the substitution, a quadric monomial x_a x_b becomes
    // (const) * l^(da) * m^(db); pairs with equal (da, db) must cancel.
    // Working degree-wise: x0 -> (3,0), x2 -> (2,1), x4 -> (1,2), x7 -> (0,3)
    // with constants 1, c2, c4, c7.
    let table = xring_table();
    let deg_of = |v: usize| -> Option<(u32, u32)> {
        match table.name(v) {
            "x0" => Some((3, 0)),
            "x2" => Some((2, 1)),
            "x4" => Some((1, 2)),
            "x7" => Some((0, 3)),
            _ => None,
        }
    };

    // Each quadric yields equations: sum over its monomials grouped by
    // (l, m)-bidegree of coefficient * product-of-constants = 0. Constants
    // enter linearly except c2^2/c4^2/c7^2 from squares; with c2 fixed the
    // system is triangular in the order the rref basis provides.
    for _pass in 0..quadrics.len() + 1 {
        for q in quadrics {
            let mut groups: std::collections::BTreeMap<(u32, u32), Vec<(Vec<usize>, Eisenstein)>> =
                std::collections::BTreeMap::new();
            for (m, c) in q.terms() {
                let e = m.exponents();
                let mut vars = Vec::new();
                for (k, &x) in e.iter().enumerate() {
                    for _ in 0..x {
                        vars.push(k);
                    }
                }
                let d1 = deg_of(vars[0]).unwrap();
                let d2 = deg_of(vars[1]).unwrap();
                groups
                    .entry((d1.0 + d2.0, d1.1 + d2.1))
                    .or_default()
                    .push((vars, c.clone()));
            }
            for (_deg, terms) in groups {
                // Evaluate sum of c * prod(constants), tracking one unknown.
                let mut known = Eisenstein::zero();
                let mut unknown_coeff = Eisenstein::zero();
                let mut unknown_slot: Option<&'static str> = None;
                let mut solvable = true;
                for (vars, coeff) in &terms {
                    let mut factor = coeff.clone();
                    let mut pending: Option<&'static str> = None;
                    let mut pending_pow = 0u32;
                    for &v in vars {
                        let val = match table.name(v) {
                            "x0" => Some(Eisenstein::one()),
                            "x2" => Some(c2.clone()),
                            "x4" => c4.clone(),
                            "x7" => c7.clone(),
                            _ => None,
                        };
                        match (val, table.name(v)) {
                            (Some(v), _) => factor = factor * v,
                            (None, "x4") => {
                                pending = Some("c4");
                                pending_pow += 1;
                            }
                            (None, "x7") => {
                                pending = Some("c7");
                                pending_pow += 1;
                            }
                            _ => unreachable!(),
                        }
                    }
                    match (pending, pending_pow) {
                        (None, _) => known += &factor,
                        (Some(slot), 1) => {
                            if unknown_slot.is_some() && unknown_slot != Some(slot) {
                                solvable = false;
                            }
                            unknown_slot = Some(slot);
                            unknown_coeff += &factor;
                        }
                        // A square of an unsolved constant: postpone.
                        (Some(_), _) => solvable = false,
                    }
                }
                if !solvable {
                    continue;
                }
                match unknown_slot {
                    None => {
                        if !known.is_zero() {
                            return (None, false);
                        }
                    }
                    Some(slot) => {
                        if unknown_coeff.is_zero() {
                            if !known.is_zero() {
                                return (None, false);
                            }
                            continue;
                        }
                        let value = -&known * unknown_coeff.inv().unwrap();
                        match slot {
                            "c4" => {
                                if let Some(prev) = &c4 {
                                    if *prev != value {
                                        return (None, false);
                                    }
                                } else {
                                    c4 = Some(value);
                                }
                            }
                            "c7" => {
                                if let Some(prev) = &c7 {
                                    if *prev != value {
                                        return (None, false);
                                    }
                                } else {
                                    c7 = Some(value);
                                }
                            }
                            _ => unreachable!(),
                        }
                    }
                }
            }
        }
        if c4.is_some() && c7.is_some() {
            break;
        }
    }

    let (Some(c4), Some(c7)) = (c4, c7) else {
        return (None, false);
    };

    // Final verification: substitute the solved constants and check every
    // quadric vanishes identically in (l, m).
    let lm = VarTable::new(&["l", "m"]);
    let sub: Vec<(&str, MultiPoly)> = vec![
        ("x0", parse_poly(&lm, "l^3").unwrap()),
        ("x2", parse_poly(&lm, "l^2*m").unwrap().scale(&c2)),
        ("x4", parse_poly(&lm, "l*m^2").unwrap().scale(&c4)),
        ("x7", parse_poly(&lm, "m^3").unwrap().scale(&c7)),
        ("s", MultiPoly::zero(&lm)),
        ("t", MultiPoly::zero(&lm)),
        ("x1", MultiPoly::zero(&lm)),
        ("x3", MultiPoly::zero(&lm)),
        ("x5", MultiPoly::zero(&lm)),
        ("x6", MultiPoly::zero(&lm)),
        ("x8", MultiPoly::zero(&lm)),
        ("x9", MultiPoly::zero(&lm)),
    ];
    let all_vanish = quadrics.iter().all(|q| q.substitute(&lm, &sub).unwrap().is_zero());
    (Some((c2, c4, c7)), all_vanish)
}

/// Zariski tangent dimension at a coordinate point: ambient variable count
/// minus the rank of the Jacobian evaluated at the point.
pub fn tangent_dimension(
    point: usize,
    equations: &[MultiPoly],
    ambient_vars: &[&str],
) -> Result<usize, PolyError> {
    let table = equations[0].table().clone();
    let chart_var = format!("x{point}");
    assert!(
        !ambient_vars.contains(&chart_var.as_str()),
        "the chart variable must be excluded from the ambient variables"
    );
    let jac = jacobian(equations, ambient_vars)?;
    let pt = coordinate_point(point);
    let evaluated = jac.eval(&pt);
    let _ = table;
    Ok(ambient_vars.len() - rank_over_field(&evaluated))
}

/// The 7-equation / 7-variable data of one smoothness check.
#[derive(Debug, Clone)]
pub struct JacobianSpec {
    pub point: usize,
    pub equations: [usize; 7],
    pub variables: [&'static str; 7],
}

/// The three smoothness checks at the coordinate points of the central
/// fiber.
pub fn jacobian_specs() -> [JacobianSpec; 3] {
    [
        JacobianSpec {
            point: 0,
            equations: [1, 2, 3, 4, 5, 6, 13],
            variables: ["s", "x4", "x5", "x6", "x7", "x8", "x9"],
        },
        JacobianSpec {
            point: 1,
            equations: [1, 2, 4, 5, 8, 9, 17],
            variables: ["s", "t", "x3", "x5", "x6", "x8", "x9"],
        },
        JacobianSpec {
            point: 7,
            equations: [4, 8, 9, 17, 18, 25, 26],
            variables: ["t", "x0", "x2", "x3", "x5", "x6", "x9"],
        },
    ]
}

/// Determinant of the 7x7 Jacobian of the listed equations with respect to
/// the listed variables, evaluated at the coordinate point.
pub fn smoothness_certificate(
    table1: &Table1,
    spec: &JacobianSpec,
) -> Result<Eisenstein, PolyError> {
    let eqs: Vec<MultiPoly> = spec.equations.iter().map(|&i| table1.row(i).clone()).collect();
    let jac = jacobian(&eqs, &spec.variables)?;
    let pt = coordinate_point(spec.point);
    let evaluated = jac.eval(&pt);
    let table = VarTable::new(&["dummy"]);
    let m = PolyMatrix::from_fn(&table, 7, 7, |i, j| {
        MultiPoly::constant(&table, evaluated[i][j].clone())
    });
    Ok(m.determinant_fraction_free()?.as_constant().unwrap())
}

/// Outcome of the conic-bundle warm-up.
#[derive(Debug, Clone)]
pub struct ConicWarmup {
    /// The five partial derivatives of s*x^2 + t*y^2 + z^2.
    pub partials: Vec<MultiPoly>,
    /// x^2, y^2, z lie in the ideal of the partials (explicit combinations).
    pub total_space_ok: bool,
    /// Away from s*t = 0 the fiber Jacobian only vanishes at the origin.
    pub smooth_off_axes: bool,
    /// On s = 0 (resp. t = 0) an explicit singular point of the fiber.
    pub singular_on_axes: bool,
}

impl ConicWarmup {
    pub fn ok(&self) -> bool {
        self.total_space_ok && self.smooth_off_axes && self.singular_on_axes
    }
}

/// For F = s*x^2 + t*y^2 + z^2: the partial-derivative ideal contains
/// x^2, y^2, z, so the total space is smooth away from x = y = z = 0; and
/// the fiber over (s0, t0) is singular iff s0*t0 = 0.
pub fn conic_warmup_check() -> ConicWarmup {
    let table = VarTable::new(&["s", "t", "x", "y", "zc"]);
    let p = |s: &str| parse_poly(&table, s).unwrap();
    let f = p("s*x^2 + t*y^2 + zc^2");
    let partials: Vec<MultiPoly> =
        ["s", "t", "x", "y", "zc"].iter().map(|v| f.derivative(v).unwrap()).collect();

    // x^2 and y^2 are the s- and t-partials; z is half the z-partial.
    let total_space_ok = partials[0] == p("x^2")
        && partials[1] == p("y^2")
        && partials[4].scale(&Eisenstein::from_parts(1, 2, 0, 1)) == p("zc");

    // Off the axes: s*t * x = (t/2) * dF/dx, and similarly for y, z, so
    // vanishing of the fiber Jacobian forces x = y = z = 0 when s*t != 0.
    let fiber_jac = [f.derivative("x").unwrap(), f.derivative("y").unwrap(), f.derivative("zc").unwrap()];
    let half = Eisenstein::from_parts(1, 2, 0, 1);
    let smooth_off_axes = p("s*t*x") == fiber_jac[0].mul(&p("t")).scale(&half)
        && p("s*t*y") == fiber_jac[1].mul(&p("s")).scale(&half)
        && p("s*t*zc") == fiber_jac[2].mul(&p("s*t")).scale(&half);

    // On s = 0 the point (x, y, z) = (1, 0, 0) lies on the fiber and all
    // three fiber partials vanish there; symmetrically for t = 0.
    let ev = |q: &MultiPoly, s0: i64, t0: i64, x0: i64, y0: i64, z0: i64| {
        q.eval(&[
            Eisenstein::from_int(s0),
            Eisenstein::from_int(t0),
            Eisenstein::from_int(x0),
            Eisenstein::from_int(y0),
            Eisenstein::from_int(z0),
        ])
    };
    let on_s_axis = ev(&f, 0, 1, 1, 0, 0).is_zero()
        && fiber_jac.iter().all(|d| ev(d, 0, 1, 1, 0, 0).is_zero());
    let on_t_axis = ev(&f, 1, 0, 0, 1, 0).is_zero()
        && fiber_jac.iter().all(|d| ev(d, 1, 0, 0, 1, 0).is_zero());
    // Negative control at s0 = t0 = 1: the Jacobian spans everything, so
    // only the origin is singular and the fiber is a smooth conic.
    let smooth_example = {
        let rows: Vec<Vec<Eisenstein>> = (0..3)
            .map(|i| {
                ["x", "y", "zc"]
                    .iter()
                    .map(|v| {
                        fiber_jac[i]
                            .derivative(v)
                            .unwrap()
                            .eval(&[
                                Eisenstein::one(),
                                Eisenstein::one(),
                                Eisenstein::zero(),
                                Eisenstein::zero(),
                                Eisenstein::zero(),
                            ])
                    })
                    .collect()
            })
            .collect();
        rank_over_field(&rows) == 3
    };

    ConicWarmup {
        partials,
        total_space_ok,
        smooth_off_axes,
        singular_on_axes: on_s_axis && on_t_axis && smooth_example,
    }
}
