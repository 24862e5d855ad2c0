//! Section-module calculus on cubic forms in u, v, w.
//!
//! Two membership criteria drive everything here. A cubic monomial m has an
//! s-weight (3 for w^3, u^3, v^3 down to 0 for uvw), and s^a*f lies in the
//! first section module iff every monomial of f has weight <= a. The second
//! module is the same criterion read in the tilde coordinates
//! ut = z*u + z^2*v + w, vt = z^2*u + z*v + w, wt = u + v + w, with t in
//! place of s. Intersecting the two graded criteria produces the 10-element
//! free k[s,t]-basis certified by [`st_basis_certificate`]; the blow-up
//! chart conditions produce the 10-element local basis certified by
//! [`local_section_space`].

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use crate::fixtures::{expect_shape, parse_poly_file, FixtureError, LabeledPolys};
use crate::polyring::{
    kernel_basis, parse_poly, span_equal, Monomial, MultiPoly, PolyMatrix, VarTable,
};
use crate::scalars::Eisenstein;

/// The 10 cubic monomials in u, v, w, in the fixed frame order used for all
/// coefficient vectors, with their s-weights.
pub const CUBIC_MONOMIALS: [((u32, u32, u32), u32); 10] = [
    ((0, 0, 3), 3), // w^3
    ((1, 0, 2), 2), // u*w^2
    ((0, 1, 2), 1), // v*w^2
    ((2, 0, 1), 1), // u^2*w
    ((1, 1, 1), 0), // u*v*w
    ((0, 2, 1), 2), // v^2*w
    ((3, 0, 0), 3), // u^3
    ((2, 1, 0), 2), // u^2*v
    ((1, 2, 0), 1), // u*v^2
    ((0, 3, 0), 3), // v^3
];

pub fn uvw_table() -> Arc<VarTable> {
    VarTable::new(&["u", "v", "w"])
}

pub fn stuvw_table() -> Arc<VarTable> {
    VarTable::new(&["s", "t", "u", "v", "w"])
}

pub fn tuvw_table() -> Arc<VarTable> {
    VarTable::new(&["t", "u", "v", "w"])
}

/// Frame index of a cubic monomial given as (u, v, w) exponents.
pub fn cubic_index(exps: (u32, u32, u32)) -> Option<usize> {
    CUBIC_MONOMIALS.iter().position(|(m, _)| *m == exps)
}

/// Coefficient vector of a homogeneous cubic in the 10-monomial frame.
pub fn cubic_to_vec(p: &MultiPoly) -> Result<Vec<Eisenstein>, String> {
    let table = p.table();
    let (iu, iv, iw) = (
        table.index_of("u").ok_or("table has no u")?,
        table.index_of("v").ok_or("table has no v")?,
        table.index_of("w").ok_or("table has no w")?,
    );
    let mut vec = vec![Eisenstein::zero(); 10];
    for (m, c) in p.terms() {
        let e = m.exponents();
        for (k, &x) in e.iter().enumerate() {
            if x > 0 && k != iu && k != iv && k != iw {
                return Err(format!("term involves non-cubic variable `{}`", table.name(k)));
            }
        }
        let key = (e[iu], e[iv], e[iw]);
        let Some(i) = cubic_index(key) else {
            return Err(format!("monomial u^{}v^{}w^{} is not cubic", key.0, key.1, key.2));
        };
        vec[i] = c.clone();
    }
    Ok(vec)
}

/// Inverse of [`cubic_to_vec`] over the plain (u, v, w) table.
pub fn vec_to_cubic(v: &[Eisenstein]) -> MultiPoly {
    let t = uvw_table();
    let raw = v
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let ((eu, ev, ew), _) = CUBIC_MONOMIALS[i];
            (vec![eu, ev, ew], c.clone())
        })
        .collect();
    MultiPoly::from_raw_terms(&t, raw)
}

/// A finite-dimensional space of coefficient vectors in a fixed frame,
/// stored as a canonical reduced-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSpace {
    /// Grading cell, truncation level, or other label of the space.
    pub label: String,
    pub frame_dim: usize,
    pub vectors: Vec<Vec<Eisenstein>>,
}

impl SectionSpace {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn contains(&self, v: &[Eisenstein]) -> bool {
        crate::polyring::span_contains(&self.vectors, v)
    }
}

/// Cubics f with s^a * f in the first section module: the span of the
/// cubic monomials of s-weight at most a.
pub fn s_membership_space(a: u32) -> SectionSpace {
    let mut vectors = Vec::new();
    for (i, (_, w)) in CUBIC_MONOMIALS.iter().enumerate() {
        if *w <= a {
            let mut v = vec![Eisenstein::zero(); 10];
            v[i] = Eisenstein::one();
            vectors.push(v);
        }
    }
    crate::polyring::rref(&mut vectors);
    SectionSpace { label: format!("s-cell a={a}"), frame_dim: 10, vectors }
}

/// The linear change of coordinates to the tilde frame and back.
pub struct TildeFrame {
    table: Arc<VarTable>,
    forward: [MultiPoly; 3],
    inverse: [MultiPoly; 3],
    /// Row r = tilde coordinate r of the cubic frame monomials.
    tilde_matrix: Vec<Vec<Eisenstein>>,
}

impl TildeFrame {
    pub fn new() -> Self {
        let t = uvw_table();
        let p = |s: &str| parse_poly(&t, s).unwrap();
        // ut = z*u + z^2*v + w and cyclically; inverse solved exactly and
        // verified by `compose_check`.
        let forward = [p("z*u + z^2*v + w"), p("z^2*u + z*v + w"), p("u + v + w")];
        let inverse = [
            p("(z^2*u + z*v + w)/3"),
            p("(z*u + z^2*v + w)/3"),
            p("(u + v + w)/3"),
        ];
        let mut frame = TildeFrame { table: t, forward, inverse, tilde_matrix: Vec::new() };
        let mut cols = Vec::new();
        for i in 0..10 {
            let mut unit = vec![Eisenstein::zero(); 10];
            unit[i] = Eisenstein::one();
            cols.push(frame.tilde_coords_raw(&vec_to_cubic(&unit)));
        }
        frame.tilde_matrix = (0..10)
            .map(|r| (0..10).map(|c| cols[c][r].clone()).collect())
            .collect();
        frame
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    /// The forward linear forms (ut, vt, wt) as polynomials in u, v, w.
    pub fn forward(&self) -> &[MultiPoly; 3] {
        &self.forward
    }

    /// Substituting the inverse forms into f rewrites f in tilde
    /// coordinates; the result's frame vector is f's tilde coordinates.
    fn tilde_coords_raw(&self, f: &MultiPoly) -> Vec<Eisenstein> {
        let g = f
            .substitute(
                &self.table,
                &[
                    ("u", self.inverse[0].clone()),
                    ("v", self.inverse[1].clone()),
                    ("w", self.inverse[2].clone()),
                ],
            )
            .expect("tilde substitution");
        cubic_to_vec(&g).expect("tilde image of a cubic is cubic")
    }

    pub fn tilde_coords(&self, f: &MultiPoly) -> Result<Vec<Eisenstein>, String> {
        cubic_to_vec(f)?;
        Ok(self.tilde_coords_raw(f))
    }

    /// forward composed with inverse must be the identity on u, v, w.
    pub fn compose_check(&self) -> bool {
        let assignment: Vec<(&str, MultiPoly)> = vec![
            ("u", self.inverse[0].clone()),
            ("v", self.inverse[1].clone()),
            ("w", self.inverse[2].clone()),
        ];
        ["u", "v", "w"].iter().enumerate().all(|(i, name)| {
            self.forward[i].substitute(&self.table, &assignment).unwrap()
                == MultiPoly::var(&self.table, name).unwrap()
        })
    }

    /// Determinant of the forward 3x3 change-of-basis matrix.
    pub fn determinant(&self) -> Eisenstein {
        let t = &self.table;
        let vars = ["u", "v", "w"];
        let m = PolyMatrix::from_fn(t, 3, 3, |i, j| {
            MultiPoly::constant(
                t,
                self.forward[i]
                    .derivative(vars[j])
                    .unwrap()
                    .as_constant()
                    .expect("linear form"),
            )
        });
        m.determinant_fraction_free().unwrap().as_constant().unwrap()
    }
}

impl Default for TildeFrame {
    fn default() -> Self {
        Self::new()
    }
}

/// Cubics f with t^b * f in the second section module: the tilde-coordinate
/// weight criterion, computed as a kernel of stacked coordinate constraints.
pub fn t_membership_space(b: u32) -> SectionSpace {
    let frame = TildeFrame::new();
    let mut rows = Vec::new();
    for (i, (_, w)) in CUBIC_MONOMIALS.iter().enumerate() {
        if *w > b {
            rows.push(frame.tilde_matrix[i].clone());
        }
    }
    let vectors = kernel_basis(&rows, 10);
    SectionSpace { label: format!("t-cell b={b}"), frame_dim: 10, vectors }
}

/// Intersection of the two membership criteria at the cell (a, b).
pub fn intersection_cell(a: u32, b: u32) -> SectionSpace {
    let frame = TildeFrame::new();
    let mut rows = Vec::new();
    for (i, (_, w)) in CUBIC_MONOMIALS.iter().enumerate() {
        if *w > a {
            let mut r = vec![Eisenstein::zero(); 10];
            r[i] = Eisenstein::one();
            rows.push(r);
        }
    }
    for (i, (_, w)) in CUBIC_MONOMIALS.iter().enumerate() {
        if *w > b {
            rows.push(frame.tilde_matrix[i].clone());
        }
    }
    let vectors = kernel_basis(&rows, 10);
    SectionSpace { label: format!("cell ({a},{b})"), frame_dim: 10, vectors }
}

/// Cyclic permutations of (u, v, w), written as substitution assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CyclicPerm {
    Id,
    /// u -> v, v -> w, w -> u.
    Rot1,
    /// u -> w, v -> u, w -> v.
    Rot2,
}

impl CyclicPerm {
    pub const ALL: [CyclicPerm; 3] = [CyclicPerm::Id, CyclicPerm::Rot1, CyclicPerm::Rot2];

    pub fn name(&self) -> &'static str {
        match self {
            CyclicPerm::Id => "id",
            CyclicPerm::Rot1 => "uvw->vwu",
            CyclicPerm::Rot2 => "uvw->wuv",
        }
    }

    fn images(&self) -> [&'static str; 3] {
        match self {
            CyclicPerm::Id => ["u", "v", "w"],
            CyclicPerm::Rot1 => ["v", "w", "u"],
            CyclicPerm::Rot2 => ["w", "u", "v"],
        }
    }

    /// Applies the substitution within any table containing u, v, w.
    pub fn apply(&self, p: &MultiPoly) -> MultiPoly {
        let t = p.table().clone();
        let [iu, iv, iw] = self.images();
        p.substitute(
            &t,
            &[
                ("u", MultiPoly::var(&t, iu).unwrap()),
                ("v", MultiPoly::var(&t, iv).unwrap()),
                ("w", MultiPoly::var(&t, iw).unwrap()),
            ],
        )
        .unwrap()
    }
}

/// Outcome of the tilde-frame compatibility computations.
#[derive(Debug, Clone)]
pub struct TildeCompatibility {
    /// u->v,v->w,w->u sends (ut, vt, wt) to (z^2*ut, z*vt, wt).
    pub rot1_diagonal: bool,
    /// u->w,v->u,w->v sends (ut, vt, wt) to (z*ut, z^2*vt, wt).
    pub rot2_diagonal: bool,
    /// Identity permutation leaves (ut, vt, wt) unchanged.
    pub id_fixed: bool,
    /// ut*vt*wt = u^3 + v^3 + w^3 - 3uvw.
    pub triple_product: bool,
    /// Change-of-basis determinant 3(z - z^2), nonzero.
    pub determinant: Eisenstein,
}

impl TildeCompatibility {
    pub fn ok(&self) -> bool {
        self.rot1_diagonal
            && self.rot2_diagonal
            && self.id_fixed
            && self.triple_product
            && !self.determinant.is_zero()
    }
}

/// Certifies that cyclically permuting u, v, w acts diagonally by cube
/// roots of unity on the tilde coordinates, and that the weight-0 tilde
/// generator expands to u^3 + v^3 + w^3 - 3uvw.
pub fn tilde_compatibility_check() -> TildeCompatibility {
    let frame = TildeFrame::new();
    let t = frame.table().clone();
    let z = MultiPoly::constant(&t, Eisenstein::zeta());
    let z2 = MultiPoly::constant(&t, Eisenstein::zeta2());
    let [ut, vt, wt] = frame.forward().clone();

    let rot = |perm: CyclicPerm, expect: [&MultiPoly; 3]| -> bool {
        perm.apply(&ut) == *expect[0]
            && perm.apply(&vt) == *expect[1]
            && perm.apply(&wt) == *expect[2]
    };
    let rot1_diagonal = rot(CyclicPerm::Rot1, [&z2.mul(&ut), &z.mul(&vt), &wt]);
    let rot2_diagonal = rot(CyclicPerm::Rot2, [&z.mul(&ut), &z2.mul(&vt), &wt]);
    let id_fixed = rot(CyclicPerm::Id, [&ut, &vt, &wt]);
    let triple = ut.mul(&vt).mul(&wt);
    let triple_product = triple == parse_poly(&t, "u^3 + v^3 + w^3 - 3*u*v*w").unwrap();
    TildeCompatibility {
        rot1_diagonal,
        rot2_diagonal,
        id_fixed,
        triple_product,
        determinant: frame.determinant(),
    }
}

// ---------------------------------------------------------------------------
// The free k[s,t]-basis of the intersection of the two section modules.
// ---------------------------------------------------------------------------

/// The fixture-backed list of 10 generators over k[s,t,u,v,w].
#[derive(Debug, Clone)]
pub struct StBasis {
    pub entries: Vec<(String, MultiPoly)>,
}

impl StBasis {
    pub fn from_polys(path: &Path, polys: &LabeledPolys) -> Result<Self, FixtureError> {
        let labels: Vec<String> = (1..=10).map(|i| format!("b{i}")).collect();
        expect_shape(path, polys, &["s", "t", "u", "v", "w"], &labels)?;
        Ok(StBasis { entries: polys.entries.clone() })
    }

    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        let polys = parse_poly_file(path)?;
        Self::from_polys(path, &polys)
    }

    pub fn generators(&self) -> impl Iterator<Item = &MultiPoly> {
        self.entries.iter().map(|(_, p)| p)
    }
}

/// Splits p in k[s,t,u,v,w] into cubic pieces indexed by (s,t)-bidegree.
pub fn st_decompose(p: &MultiPoly) -> Result<BTreeMap<(u32, u32), MultiPoly>, String> {
    let table = p.table();
    let is = table.index_of("s").ok_or("table has no s")?;
    let it = table.index_of("t").ok_or("table has no t")?;
    let (iu, iv, iw) = (
        table.index_of("u").ok_or("table has no u")?,
        table.index_of("v").ok_or("table has no v")?,
        table.index_of("w").ok_or("table has no w")?,
    );
    let uvw = uvw_table();
    let mut pieces: BTreeMap<(u32, u32), Vec<(Vec<u32>, Eisenstein)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let e = m.exponents();
        if e[iu] + e[iv] + e[iw] != 3 {
            return Err(format!("term of u,v,w-degree {} != 3", e[iu] + e[iv] + e[iw]));
        }
        pieces
            .entry((e[is], e[it]))
            .or_default()
            .push((vec![e[iu], e[iv], e[iw]], c.clone()));
    }
    Ok(pieces
        .into_iter()
        .map(|(k, raw)| (k, MultiPoly::from_raw_terms(&uvw, raw)))
        .collect())
}

/// Membership of a polynomial in the intersection module: every bidegree
/// piece s^a t^b f_ab must satisfy the s-criterion at a and the t-criterion
/// at b. Returns the per-cell outcomes.
pub fn st_membership(p: &MultiPoly) -> Result<Vec<((u32, u32), bool, bool)>, String> {
    let frame = TildeFrame::new();
    let mut out = Vec::new();
    for ((a, b), f) in st_decompose(p)? {
        let vec = cubic_to_vec(&f)?;
        let s_ok = CUBIC_MONOMIALS
            .iter()
            .enumerate()
            .all(|(i, (_, w))| *w <= a || vec[i].is_zero());
        let tilde = frame.tilde_coords(&f)?;
        let t_ok = CUBIC_MONOMIALS
            .iter()
            .enumerate()
            .all(|(i, (_, w))| *w <= b || tilde[i].is_zero());
        out.push(((a, b), s_ok, t_ok));
    }
    Ok(out)
}

/// Per-generator outcome inside [`StBasisCertificate`].
#[derive(Debug, Clone)]
pub struct GeneratorMembership {
    pub label: String,
    pub cell: Option<(u32, u32)>,
    pub member: bool,
    pub detail: String,
}

/// Per-cell outcome of the generation check.
#[derive(Debug, Clone)]
pub struct CellCheck {
    pub cell: (u32, u32),
    pub expected_dim: usize,
    pub generated_dim: usize,
    pub span_ok: bool,
}

/// Full certificate for the free k[s,t]-module claim.
#[derive(Debug, Clone)]
pub struct StBasisCertificate {
    pub memberships: Vec<GeneratorMembership>,
    /// Determinant of the 10x10 generator matrix over k[s,t].
    pub determinant: MultiPoly,
    pub determinant_nonzero: bool,
    pub generation: Vec<CellCheck>,
}

impl StBasisCertificate {
    pub fn ok(&self) -> bool {
        self.memberships.iter().all(|m| m.member)
            && self.determinant_nonzero
            && self.generation.iter().all(|c| c.span_ok)
    }
}

/// The 10x10 matrix over k[s,t] whose column j expresses generator j in
/// the cubic monomial frame.
pub fn generator_matrix(basis: &StBasis) -> PolyMatrix {
    let st = VarTable::new(&["s", "t"]);
    PolyMatrix::from_fn(&st, 10, 10, |i, j| {
        let p = &basis.entries[j].1;
        let mut acc = MultiPoly::zero(&st);
        if let Ok(pieces) = st_decompose(p) {
            for ((a, b), f) in pieces {
                let vec = cubic_to_vec(&f).unwrap();
                if !vec[i].is_zero() {
                    acc = acc
                        .add(&MultiPoly::from_raw_terms(&st, vec![(vec![a, b], vec[i].clone())]));
                }
            }
        }
        acc
    })
}

/// Certifies the three parts of the free-basis claim: membership of each
/// generator at its cell, a nonzero 10x10 determinant over k[s,t], and
/// generation of every grid cell (a,b) with 0 <= a,b <= 3. Both criteria
/// saturate at weight 3, so the finite grid is exhaustive.
pub fn st_basis_certificate(basis: &StBasis) -> StBasisCertificate {
    let mut memberships = Vec::new();
    let mut cells: Vec<Option<((u32, u32), Vec<Eisenstein>)>> = Vec::new();
    for (label, p) in &basis.entries {
        match st_membership(p) {
            Err(e) => {
                memberships.push(GeneratorMembership {
                    label: label.clone(),
                    cell: None,
                    member: false,
                    detail: e,
                });
                cells.push(None);
            }
            Ok(pieces) if pieces.len() == 1 => {
                let ((a, b), s_ok, t_ok) = pieces[0];
                let piece = st_decompose(p).unwrap().into_iter().next().unwrap().1;
                memberships.push(GeneratorMembership {
                    label: label.clone(),
                    cell: Some((a, b)),
                    member: s_ok && t_ok,
                    detail: format!("cell ({a},{b}): s-criterion {s_ok}, t-criterion {t_ok}"),
                });
                cells.push(Some(((a, b), cubic_to_vec(&piece).unwrap())));
            }
            Ok(pieces) => {
                memberships.push(GeneratorMembership {
                    label: label.clone(),
                    cell: None,
                    member: false,
                    detail: format!(
                        "not concentrated in one bidegree cell: {:?}",
                        pieces.iter().map(|(c, ..)| *c).collect::<Vec<_>>()
                    ),
                });
                cells.push(None);
            }
        }
    }

    let matrix = generator_matrix(basis);
    let determinant = matrix.determinant_fraction_free().unwrap();
    let determinant_nonzero = !determinant.is_zero();

    let mut generation = Vec::new();
    for a in 0..=3u32 {
        for b in 0..=3u32 {
            let target = intersection_cell(a, b);
            let generated: Vec<Vec<Eisenstein>> = cells
                .iter()
                .flatten()
                .filter(|((ga, gb), _)| *ga <= a && *gb <= b)
                .map(|(_, v)| v.clone())
                .collect();
            let span_ok = span_equal(&generated, &target.vectors);
            generation.push(CellCheck {
                cell: (a, b),
                expected_dim: target.dim(),
                generated_dim: crate::polyring::rank_over_field(&generated),
                span_ok,
            });
        }
    }

    StBasisCertificate { memberships, determinant, determinant_nonzero, generation }
}

// ---------------------------------------------------------------------------
// Blow-up charts and the local section module.
// ---------------------------------------------------------------------------

/// A chart of the three-step blow-up tower over the affine (u, v)-plane,
/// stored as data. Only the two charts carrying a membership ideal are used
/// as conditions; together with cyclic shifts they cover the generic point
/// of every exceptional component.
#[derive(Debug, Clone)]
pub struct ChartMap {
    pub name: &'static str,
    pub coordinates: &'static [&'static str],
    /// Chart substitution: (source variable, expression in chart coordinates).
    pub substitution: &'static [(&'static str, &'static str)],
    /// Exceptional divisor / center equations stated on this chart.
    pub exceptional: &'static [(&'static str, &'static str)],
    /// Generator of the membership ideal, when the chart carries one.
    pub membership_ideal: Option<&'static str>,
}

/// The blow-up chart atlas. Charts 1, 2, 3 cover the first blow-up;
/// 1', 1'', 3', 3'' the second; 1'a and 2a the third.
pub fn chart_atlas() -> Vec<ChartMap> {
    vec![
        ChartMap {
            name: "1",
            coordinates: &["u", "t1", "v1"],
            substitution: &[("t", "u*t1"), ("v", "u*v1")],
            exceptional: &[("E1", "u = 0"), ("center_c", "u = v1 = 0")],
            membership_ideal: None,
        },
        ChartMap {
            name: "2",
            coordinates: &["v", "t2", "u2"],
            substitution: &[("t", "v*t2"), ("u", "v*u2")],
            exceptional: &[("E1", "v = 0"), ("center_lambda", "t2 = u2 = 0")],
            membership_ideal: None,
        },
        ChartMap {
            name: "3",
            coordinates: &["t", "u3", "v3"],
            substitution: &[("u", "t*u3"), ("v", "t*v3")],
            exceptional: &[("E1", "t = 0"), ("center_c", "t = v3 = 0")],
            membership_ideal: None,
        },
        ChartMap {
            name: "1'",
            coordinates: &["u", "t1", "v1p"],
            substitution: &[("v1", "u*v1p")],
            exceptional: &[("E2", "u = 0"), ("center_lambda", "t1 = v1p = 0")],
            membership_ideal: None,
        },
        ChartMap {
            name: "1''",
            coordinates: &["t1", "v1", "upp"],
            substitution: &[("u", "v1*upp")],
            exceptional: &[("E2", "v1 = 0")],
            membership_ideal: None,
        },
        ChartMap {
            name: "3'",
            coordinates: &["t", "u3", "v3p"],
            substitution: &[("v3", "t*v3p")],
            exceptional: &[("E2", "t = 0")],
            membership_ideal: None,
        },
        ChartMap {
            name: "3''",
            coordinates: &["t", "v3", "u3pp"],
            substitution: &[("u3", "v3*u3pp")],
            exceptional: &[("E2", "v3 = 0")],
            membership_ideal: None,
        },
        ChartMap {
            name: "1'a",
            coordinates: &["u", "t1", "v1a"],
            substitution: &[("v1p", "t1*v1a")],
            exceptional: &[("E3", "t1 = 0")],
            membership_ideal: Some("u^3*t1"),
        },
        ChartMap {
            name: "2a",
            coordinates: &["v", "t2", "u2a"],
            substitution: &[("u2", "t2*u2a")],
            exceptional: &[("E3", "t2 = 0")],
            membership_ideal: Some("v^2*t2"),
        },
    ]
}

/// The two charts that carry membership conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MembershipChart {
    /// Coordinates (u, t1, v1a): t = u*t1, v = u^2*t1*v1a, ideal (u^3*t1).
    Chart1a,
    /// Coordinates (v, t2, u2a): t = v*t2, u = v*t2*u2a, ideal (v^2*t2).
    Chart2a,
}

impl MembershipChart {
    pub const ALL: [MembershipChart; 2] = [MembershipChart::Chart1a, MembershipChart::Chart2a];

    pub fn name(&self) -> &'static str {
        match self {
            MembershipChart::Chart1a => "1'a",
            MembershipChart::Chart2a => "2a",
        }
    }

    pub fn target_table(&self) -> Arc<VarTable> {
        match self {
            MembershipChart::Chart1a => VarTable::new(&["u", "t1", "v1a"]),
            MembershipChart::Chart2a => VarTable::new(&["v", "t2", "u2a"]),
        }
    }

    fn composed_substitution(&self, target: &Arc<VarTable>) -> Vec<(&'static str, MultiPoly)> {
        let p = |s: &str| parse_poly(target, s).unwrap();
        match self {
            MembershipChart::Chart1a => vec![
                ("t", p("u*t1")),
                ("u", p("u")),
                ("v", p("u^2*t1*v1a")),
                ("w", p("1")),
            ],
            MembershipChart::Chart2a => vec![
                ("t", p("v*t2")),
                ("u", p("v*t2*u2a")),
                ("v", p("v")),
                ("w", p("1")),
            ],
        }
    }

    fn ideal_generator(&self, target: &Arc<VarTable>) -> Monomial {
        let text = match self {
            MembershipChart::Chart1a => "u^3*t1",
            MembershipChart::Chart2a => "v^2*t2",
        };
        let p = parse_poly(target, text).unwrap();
        let (m, _) = p.leading_term().unwrap();
        m.clone()
    }
}

/// Drops every term divisible by the monomial ideal generator.
fn reduce_mod_monomial_ideal(p: &MultiPoly, generator: &Monomial) -> MultiPoly {
    let raw = p
        .terms()
        .filter(|(m, _)| !generator.divides(m))
        .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
        .collect();
    MultiPoly::from_raw_terms(p.table(), raw)
}

/// Drops every term with t-exponent >= 3 (reduction modulo the defining
/// relation of the degree-3 cyclic cover).
fn truncate_t_cubed(p: &MultiPoly) -> MultiPoly {
    let it = p.table().index_of("t").expect("table has t");
    let raw = p
        .terms()
        .filter(|(m, _)| m.exponents()[it] < 3)
        .map(|(m, c)| (m.exponents().to_vec(), c.clone()))
        .collect();
    MultiPoly::from_raw_terms(p.table(), raw)
}

/// Image of a cubic with k[t]-coefficients in a blow-up chart, reduced
/// modulo t^3 in the source and modulo the chart's membership ideal. The
/// residue is zero iff the membership condition holds.
pub fn chart_image(c: &MultiPoly, chart: MembershipChart, perm: CyclicPerm) -> MultiPoly {
    let truncated = truncate_t_cubed(c);
    let permuted = perm.apply(&truncated);
    let target = chart.target_table();
    let image = permuted
        .substitute(&target, &chart.composed_substitution(&target))
        .expect("chart substitution");
    reduce_mod_monomial_ideal(&image, &chart.ideal_generator(&target))
}

/// The fixture-backed local basis over k[t].
#[derive(Debug, Clone)]
pub struct LocalBasis {
    pub entries: Vec<(String, MultiPoly)>,
}

impl LocalBasis {
    pub fn from_polys(path: &Path, polys: &LabeledPolys) -> Result<Self, FixtureError> {
        let labels: Vec<String> = (1..=10).map(|i| format!("c{i}")).collect();
        expect_shape(path, polys, &["t", "u", "v", "w"], &labels)?;
        Ok(LocalBasis { entries: polys.entries.clone() })
    }

    pub fn load(path: &Path) -> Result<Self, FixtureError> {
        let polys = parse_poly_file(path)?;
        Self::from_polys(path, &polys)
    }
}

/// Outcome of the local-section computation.
#[derive(Debug, Clone)]
pub struct LocalSectionCertificate {
    /// Kernel of the six stacked chart conditions on the 30-dimensional
    /// frame of cubics with k[t]/(t^3) coefficients.
    pub kernel: SectionSpace,
    pub element_conditions: Vec<(String, Vec<bool>)>,
    pub kernel_dim_ok: bool,
    pub span_ok: bool,
    /// Counting identity at truncation level 2: sum of max(0, 3 - deg_t)
    /// over the basis elements.
    pub expected_count: usize,
    pub counting_ok: bool,
}

impl LocalSectionCertificate {
    pub fn ok(&self) -> bool {
        self.element_conditions.iter().all(|(_, cs)| cs.iter().all(|&b| b))
            && self.kernel_dim_ok
            && self.span_ok
            && self.counting_ok
    }
}

/// Frame index of t^j * (cubic monomial i) in the 30-dimensional frame.
fn truncated_index(j: u32, i: usize) -> usize {
    (j as usize) * 10 + i
}

/// Vector of a polynomial over k[t]/(t^3) in the 30-dimensional frame.
pub fn truncated_vec(p: &MultiPoly) -> Result<Vec<Eisenstein>, String> {
    let table = p.table();
    let it = table.index_of("t").ok_or("table has no t")?;
    let (iu, iv, iw) = (
        table.index_of("u").ok_or("table has no u")?,
        table.index_of("v").ok_or("table has no v")?,
        table.index_of("w").ok_or("table has no w")?,
    );
    let mut v = vec![Eisenstein::zero(); 30];
    for (m, c) in truncate_t_cubed(p).terms() {
        let e = m.exponents();
        let Some(ci) = cubic_index((e[iu], e[iv], e[iw])) else {
            return Err("term is not cubic in u, v, w".into());
        };
        v[truncated_index(e[it], ci)] = c.clone();
    }
    Ok(v)
}

/// Computes the space of cubics with k[t]/(t^3) coefficients annihilated by
/// all six (chart, cyclic permutation) conditions and certifies that it is
/// exactly the truncation of the free module on the given basis.
pub fn local_section_space(basis: &LocalBasis) -> LocalSectionCertificate {
    let source = tuvw_table();

    // Constraint rows: coefficients of the chart residues of the 30 frame
    // elements, one block of rows per (chart, permutation) condition.
    let mut rows: Vec<Vec<Eisenstein>> = Vec::new();
    for chart in MembershipChart::ALL {
        for perm in CyclicPerm::ALL {
            let mut residues = Vec::with_capacity(30);
            for j in 0..3u32 {
                for i in 0..10 {
                    let ((eu, ev, ew), _) = CUBIC_MONOMIALS[i];
                    let elt = MultiPoly::from_raw_terms(
                        &source,
                        vec![(vec![j, eu, ev, ew], Eisenstein::one())],
                    );
                    residues.push(chart_image(&elt, chart, perm));
                }
            }
            let mut monomials: BTreeSet<Monomial> = BTreeSet::new();
            for r in &residues {
                for (m, _) in r.terms() {
                    monomials.insert(m.clone());
                }
            }
            for m in monomials {
                let row: Vec<Eisenstein> =
                    residues.iter().map(|r| r.coefficient_of(&m)).collect();
                rows.push(row);
            }
        }
    }
    let vectors = kernel_basis(&rows, 30);
    let kernel = SectionSpace {
        label: "local sections mod t^3".into(),
        frame_dim: 30,
        vectors,
    };

    // Direct six-condition check on each fixture basis element.
    let mut element_conditions = Vec::new();
    for (label, p) in &basis.entries {
        let mut conds = Vec::new();
        for chart in MembershipChart::ALL {
            for perm in CyclicPerm::ALL {
                conds.push(chart_image(p, chart, perm).is_zero());
            }
        }
        element_conditions.push((label.clone(), conds));
    }

    // Truncated t-multiples t^j * b_i with deg_t(b_i) + j <= 2.
    let mut multiples: Vec<Vec<Eisenstein>> = Vec::new();
    let mut expected_count = 0usize;
    for (_, p) in &basis.entries {
        let deg_t = p.degree_in(source.index_of("t").unwrap());
        expected_count += 3usize.saturating_sub(deg_t as usize);
        for j in 0..3u32.saturating_sub(deg_t) {
            let tj = MultiPoly::from_raw_terms(
                &source,
                vec![(vec![j, 0, 0, 0], Eisenstein::one())],
            );
            multiples.push(truncated_vec(&p.mul(&tj)).expect("basis element is cubic"));
        }
    }

    let kernel_dim_ok = kernel.dim() == 12;
    let span_ok = span_equal(&multiples, &kernel.vectors);
    let counting_ok = expected_count == 12 && expected_count == kernel.dim();

    LocalSectionCertificate {
        kernel,
        element_conditions,
        kernel_dim_ok,
        span_ok,
        expected_count,
        counting_ok,
    }
}
