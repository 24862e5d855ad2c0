//! Freeness of the quotient by the 27 relations, as a rank-9 module over
//! the base ring R = k[s,t,x0,x1,x7].
//!
//! Each relation is solved for its unique monic quadratic monomial in the
//! seven non-base variables x2,x3,x4,x5,x6,x8,x9; the 27 heads plus the
//! basis quadratic x5^2 exhaust all 28 such quadratics. Rewriting to normal
//! form expresses any element in the claimed basis 1, x2, x3, x4, x5,
//! x5^2, x6, x8, x9 with R-coefficients, which yields the seven 9x9
//! multiplication matrices. The matrices commuting pairwise and satisfying
//! all 27 relations certifies the freeness claim; commutation doubles as
//! the a-posteriori confluence certificate for the rewrite strategy.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use crate::polyring::{Monomial, MultiPoly, PolyMatrix, VarTable};
use crate::relations::{xring_table, Table1};
use crate::scalars::Eisenstein;

/// Variables of the base ring R, as indices into the ambient table.
pub const BASE_INDICES: [usize; 5] = [0, 1, 2, 3, 9]; // s, t, x0, x1, x7

/// The seven non-base variables, ascending.
pub const NON_BASE: [&str; 7] = ["x2", "x3", "x4", "x5", "x6", "x8", "x9"];
pub const NON_BASE_INDICES: [usize; 7] = [4, 5, 6, 7, 8, 10, 11];

/// The module basis 1, x2, x3, x4, x5, x5^2, x6, x8, x9, as exponent
/// patterns on the ambient table.
pub fn basis_monomials(table: &Arc<VarTable>) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(9);
    let mut push = |assign: &[(usize, u32)]| {
        let mut exps = vec![0u32; table.arity()];
        for &(i, e) in assign {
            exps[i] = e;
        }
        out.push(Monomial::new(exps));
    };
    push(&[]); // 1
    push(&[(4, 1)]); // x2
    push(&[(5, 1)]); // x3
    push(&[(6, 1)]); // x4
    push(&[(7, 1)]); // x5
    push(&[(7, 2)]); // x5^2
    push(&[(8, 1)]); // x6
    push(&[(10, 1)]); // x8
    push(&[(11, 1)]); // x9
    out
}

/// Non-base exponent pattern of a monomial.
fn non_base_part(m: &Monomial) -> Vec<u32> {
    NON_BASE_INDICES.iter().map(|&i| m.exponents()[i]).collect()
}

fn is_basis_pattern(nb: &[u32]) -> bool {
    let deg: u32 = nb.iter().sum();
    match deg {
        0 | 1 => true,
        // x5^2 is the unique quadratic basis monomial (x5 is slot 3).
        2 => nb[3] == 2,
        _ => false,
    }
}

/// One directed rule: head (a quadratic monomial in the non-base
/// variables) rewrites to the remainder of its source relation.
#[derive(Debug, Clone)]
pub struct RewriteRule {
    pub head: Monomial,
    pub rhs: MultiPoly,
    pub source_row: usize,
}

/// The 27 directed rules plus the derived expansion of x5^2 used for cubic
/// input, keyed by head.
pub struct RewriteSystem {
    table: Arc<VarTable>,
    rules: BTreeMap<Monomial, RewriteRule>,
    /// x5^2 = x4*x6 + 3*z*s*x0*x1, solved from the relation headed x4*x6;
    /// used only when no rule head divides (i.e. on powers of x5).
    x5sq_expansion: MultiPoly,
    /// Ordered heads for deterministic sub-factor choice.
    head_order: Vec<Monomial>,
}

impl RewriteSystem {
    pub fn from_table1(table1: &Table1) -> Result<Self, String> {
        let table = xring_table();
        let mut rules: BTreeMap<Monomial, RewriteRule> = BTreeMap::new();
        for (row, (label, f)) in table1.entries.iter().enumerate() {
            let mut head: Option<Monomial> = None;
            for (m, c) in f.terms() {
                let e = m.exponents();
                let base_deg: u32 = BASE_INDICES.iter().map(|&i| e[i]).sum();
                let nb = non_base_part(m);
                let nb_deg: u32 = nb.iter().sum();
                if base_deg == 0 && nb_deg == 2 && c.is_one() {
                    if head.is_some() {
                        return Err(format!("{label}: two candidate monic quadratic heads"));
                    }
                    head = Some(m.clone());
                }
            }
            let Some(head) = head else {
                return Err(format!("{label}: no monic quadratic head in the non-base variables"));
            };
            if is_basis_pattern(&non_base_part(&head)) {
                return Err(format!("{label}: head is the basis monomial x5^2"));
            }
            let head_poly = MultiPoly::from_raw_terms(
                &table,
                vec![(head.exponents().to_vec(), Eisenstein::one())],
            );
            let rhs = head_poly.sub(f);
            if rules
                .insert(head.clone(), RewriteRule { head: head.clone(), rhs, source_row: row + 1 })
                .is_some()
            {
                return Err(format!("{label}: duplicate head"));
            }
        }
        if rules.len() != 27 {
            return Err(format!("expected 27 rules, built {}", rules.len()));
        }

        // Coverage: heads + x5^2 must be all 28 quadratics in the 7
        // non-base variables.
        for a in 0..7 {
            for b in a..7 {
                let mut exps = vec![0u32; table.arity()];
                exps[NON_BASE_INDICES[a]] += 1;
                exps[NON_BASE_INDICES[b]] += 1;
                let q = Monomial::new(exps);
                let covered = rules.contains_key(&q) || is_basis_pattern(&non_base_part(&q));
                if !covered {
                    return Err(format!(
                        "quadratic {}*{} has no rule and is not the basis quadratic",
                        NON_BASE[a], NON_BASE[b]
                    ));
                }
            }
        }

        // Solve the x4*x6 relation for x5^2.
        let mut x46 = vec![0u32; table.arity()];
        x46[6] = 1;
        x46[8] = 1;
        let x46_rule = rules.get(&Monomial::new(x46)).ok_or("no rule headed x4*x6")?;
        let mut x5sq = vec![0u32; table.arity()];
        x5sq[7] = 2;
        let x5sq_mono = Monomial::new(x5sq.clone());
        let c = table1.row(x46_rule.source_row).coefficient_of(&x5sq_mono);
        if c.is_zero() {
            return Err("relation headed x4*x6 does not involve x5^2".into());
        }
        let x5sq_poly = MultiPoly::from_raw_terms(&table, vec![(x5sq, Eisenstein::one())]);
        let scaled = table1.row(x46_rule.source_row).scale(&c.inv().unwrap());
        let x5sq_expansion = x5sq_poly.sub(&scaled);

        let head_order: Vec<Monomial> = rules.keys().cloned().collect();
        Ok(RewriteSystem { table, rules, x5sq_expansion, head_order })
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn rule_count(&self) -> usize {
        self.rules.len()
    }

    pub fn x5sq_expansion(&self) -> &MultiPoly {
        &self.x5sq_expansion
    }

    /// Rewrites until only basis monomials with R-coefficients remain and
    /// returns the 9 coordinates. Hard-fails past the iteration cap, which
    /// signals a broken rule set.
    pub fn normal_form(&self, p: &MultiPoly) -> Result<Vec<MultiPoly>, String> {
        const CAP: usize = 10_000;
        let mut work = p.clone();
        for _ in 0..CAP {
            // First reducible term in descending monomial order.
            let target = work
                .terms()
                .rev()
                .find(|(m, _)| !is_basis_pattern(&non_base_part(m)))
                .map(|(m, c)| (m.clone(), c.clone()));
            let Some((m, c)) = target else {
                return Ok(self.collect_coordinates(&work));
            };
            // Lowest head in the fixed order that divides the term.
            let rewrite =
                self.head_order.iter().find(|h| h.divides(&m)).map(|h| &self.rules[h]);
            let replacement = match rewrite {
                Some(rule) => {
                    let cofactor = rule.head.quotient_into(&m);
                    rule.rhs.mul_monomial(&cofactor, &c)
                }
                None => {
                    // Only powers of x5 reach here; expand one x5^2 factor.
                    let mut x5sq = vec![0u32; self.table.arity()];
                    x5sq[7] = 2;
                    let x5sq = Monomial::new(x5sq);
                    if !x5sq.divides(&m) {
                        return Err(format!("irreducible non-basis monomial in {work}"));
                    }
                    let cofactor = x5sq.quotient_into(&m);
                    self.x5sq_expansion.mul_monomial(&cofactor, &c)
                }
            };
            let term = MultiPoly::from_raw_terms(&self.table, vec![(m.exponents().to_vec(), c)]);
            work = work.sub(&term).add(&replacement);
        }
        Err("iteration cap exceeded; rule set does not terminate".into())
    }

    /// Coordinates of a fully reduced polynomial in the module basis.
    fn collect_coordinates(&self, reduced: &MultiPoly) -> Vec<MultiPoly> {
        let basis = basis_monomials(&self.table);
        let mut coords = vec![MultiPoly::zero(&self.table); 9];
        for (m, c) in reduced.terms() {
            let nb = non_base_part(m);
            let idx = basis
                .iter()
                .position(|b| non_base_part(b) == nb)
                .expect("reduced term is a basis monomial");
            let mut base_exps = m.exponents().to_vec();
            for &i in &NON_BASE_INDICES {
                base_exps[i] = 0;
            }
            coords[idx] = coords[idx]
                .add(&MultiPoly::from_raw_terms(&self.table, vec![(base_exps, c.clone())]));
        }
        coords
    }
}

/// Multiplication-by-x_i matrix: column j is the normal form of
/// x_i * basis_j in module coordinates.
pub fn multiplication_matrix(system: &RewriteSystem, var: &str) -> Result<PolyMatrix, String> {
    assert!(NON_BASE.contains(&var), "multiplication matrices exist for the non-base variables");
    let table = system.table().clone();
    let xi = MultiPoly::var(&table, var).unwrap();
    let basis = basis_monomials(&table);
    let mut cols: Vec<Vec<MultiPoly>> = Vec::with_capacity(9);
    for b in &basis {
        let prod = xi.mul_monomial(b, &Eisenstein::one());
        cols.push(system.normal_form(&prod)?);
    }
    Ok(PolyMatrix::from_fn(&table, 9, 9, |i, j| cols[j][i].clone()))
}

/// All seven matrices, in ascending variable order.
pub fn all_multiplication_matrices(
    system: &RewriteSystem,
) -> Result<Vec<(String, PolyMatrix)>, String> {
    NON_BASE
        .iter()
        .map(|v| Ok((v.to_string(), multiplication_matrix(system, v)?)))
        .collect()
}

/// Pairwise commutators; the first nonzero entry of a failing pair is
/// reported.
#[derive(Debug, Clone)]
pub struct CommutationCertificate {
    pub pairs_checked: usize,
    pub failures: Vec<(String, String, usize, usize)>,
}

impl CommutationCertificate {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn commutation_certificate(mats: &[(String, PolyMatrix)]) -> CommutationCertificate {
    let mut pairs_checked = 0;
    let mut failures = Vec::new();
    for i in 0..mats.len() {
        for j in i + 1..mats.len() {
            pairs_checked += 1;
            let ab = mats[i].1.mul(&mats[j].1);
            let ba = mats[j].1.mul(&mats[i].1);
            let diff = ab.sub(&ba);
            if !diff.is_zero() {
                'scan: for r in 0..9 {
                    for c in 0..9 {
                        if !diff.get(r, c).is_zero() {
                            failures.push((mats[i].0.clone(), mats[j].0.clone(), r, c));
                            break 'scan;
                        }
                    }
                }
            }
        }
    }
    CommutationCertificate { pairs_checked, failures }
}

/// Substituting M_i for x_i and r * Identity for the base variables into
/// each relation must give the zero matrix over R.
#[derive(Debug, Clone)]
pub struct RelationCertificate {
    pub relations_checked: usize,
    pub failures: Vec<(String, String)>,
}

impl RelationCertificate {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn relation_certificate(
    table1: &Table1,
    mats: &[(String, PolyMatrix)],
) -> RelationCertificate {
    let table = xring_table();
    let by_var: BTreeMap<&str, &PolyMatrix> = mats.iter().map(|(n, m)| (n.as_str(), m)).collect();
    let identity = PolyMatrix::identity(&table, 9);
    let mut failures = Vec::new();
    for (label, f) in &table1.entries {
        let mut acc = PolyMatrix::zero(&table, 9, 9);
        for (m, c) in f.terms() {
            let mut base_exps = m.exponents().to_vec();
            let mut matrix_part = identity.clone();
            for (slot, &vi) in NON_BASE_INDICES.iter().enumerate() {
                for _ in 0..m.exponents()[vi] {
                    matrix_part = matrix_part.mul(by_var[NON_BASE[slot]]);
                }
                base_exps[vi] = 0;
            }
            let scalar = MultiPoly::from_raw_terms(&table, vec![(base_exps, c.clone())]);
            acc = acc.add(&matrix_part.scale(&scalar));
        }
        if !acc.is_zero() {
            let mut first = String::new();
            'scan: for r in 0..9 {
                for c in 0..9 {
                    if !acc.get(r, c).is_zero() {
                        first = format!("entry ({r},{c}) = {}", acc.get(r, c));
                        break 'scan;
                    }
                }
            }
            failures.push((label.clone(), first));
        }
    }
    RelationCertificate { relations_checked: table1.entries.len(), failures }
}

/// Writes the seven matrices to `dir/mul_<var>.txt`, one entry per line.
pub fn dump_matrices(dir: &Path, mats: &[(String, PolyMatrix)]) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    for (name, m) in mats {
        let mut file = std::fs::File::create(dir.join(format!("mul_{name}.txt")))?;
        writeln!(file, "# multiplication by {name} on the basis 1 x2 x3 x4 x5 x5^2 x6 x8 x9")?;
        writeln!(file, "vars: s t x0 x1 x2 x3 x4 x5 x6 x7 x8 x9")?;
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                writeln!(file, "e_{r}_{c}: {}", m.get(r, c))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn fixtures() -> std::path::PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
    }

    fn system() -> (Table1, RewriteSystem) {
        let table1 = Table1::load(&fixtures().join("table1.poly")).unwrap();
        let system = RewriteSystem::from_table1(&table1).unwrap();
        (table1, system)
    }

    fn coords_of(system: &RewriteSystem, text: &str) -> Vec<MultiPoly> {
        let p = parse_poly(system.table(), text).unwrap();
        system.normal_form(&p).unwrap()
    }

    #[test]
    fn heads_cover_all_28_quadratics() {
        let (_, system) = system();
        assert_eq!(system.rule_count(), 27);
        assert_eq!(
            system.x5sq_expansion(),
            &parse_poly(system.table(), "x4*x6 + 3*z*s*x0*x1").unwrap()
        );
    }

    #[test]
    fn normal_form_examples() {
        let (_, system) = system();
        let t = system.table();
        // x2^2 = 3*z^2*x0*x4 + x1*x3.
        let c = coords_of(&system, "x2^2");
        assert_eq!(c[2], parse_poly(t, "x1").unwrap()); // x3 coordinate
        assert_eq!(c[3], parse_poly(t, "3*z^2*x0").unwrap()); // x4 coordinate
        assert!(c[0].is_zero() && c[1].is_zero() && c[5].is_zero());
        // x4*x6 = x5^2 - 3*z*s*x0*x1.
        let c = coords_of(&system, "x4*x6");
        assert_eq!(c[5], MultiPoly::one(t)); // x5^2 coordinate
        assert_eq!(c[0], parse_poly(t, "-3*z*s*x0*x1").unwrap()); // 1 coordinate
        // 1 is already a basis element.
        let c = coords_of(&system, "1");
        assert_eq!(c[0], MultiPoly::one(t));
        assert!(c[1..].iter().all(|p| p.is_zero()));
    }

    #[test]
    fn normal_form_is_idempotent_on_reexpansion() {
        let (_, system) = system();
        let t = system.table();
        let basis = basis_monomials(t);
        for text in ["x2*x5^2", "x9^2*x4", "s*x3*x6 + t*x2^2 - x5^3"] {
            let coords = coords_of(&system, text);
            let mut expansion = MultiPoly::zero(t);
            for (i, c) in coords.iter().enumerate() {
                expansion = expansion.add(&c.mul_monomial(&basis[i], &Eisenstein::one()));
            }
            let again = system.normal_form(&expansion).unwrap();
            assert_eq!(coords, again, "{text}");
        }
    }

    #[test]
    fn normal_form_is_r_linear_on_samples() {
        let (_, system) = system();
        let t = system.table();
        let r = parse_poly(t, "3*s*x0 - t*x7").unwrap();
        let p = parse_poly(t, "x2*x3").unwrap();
        let q = parse_poly(t, "x5^3 - x8*x9").unwrap();
        let lhs = system.normal_form(&r.mul(&p).add(&q)).unwrap();
        let nf_p = system.normal_form(&p).unwrap();
        let nf_q = system.normal_form(&q).unwrap();
        for i in 0..9 {
            assert_eq!(lhs[i], r.mul(&nf_p[i]).add(&nf_q[i]));
        }
    }

    #[test]
    fn multiplication_matrix_columns() {
        let (_, system) = system();
        let t = system.table();
        // Column of M2 at basis element 1 is the unit vector at x2.
        let m2 = multiplication_matrix(&system, "x2").unwrap();
        for r in 0..9 {
            let expect = if r == 1 { MultiPoly::one(t) } else { MultiPoly::zero(t) };
            assert_eq!(*m2.get(r, 0), expect);
        }
        // Column of M5 at basis element x5 (index 4) is the unit at x5^2.
        let m5 = multiplication_matrix(&system, "x5").unwrap();
        for r in 0..9 {
            let expect = if r == 5 { MultiPoly::one(t) } else { MultiPoly::zero(t) };
            assert_eq!(*m5.get(r, 4), expect);
        }
        // Column of M5 at x5^2 is the normal form of x5^3.
        let nf = coords_of(&system, "x5^3");
        for r in 0..9 {
            assert_eq!(m5.get(r, 5), &nf[r]);
        }
    }

    #[test]
    fn matrices_commute_and_satisfy_relations() {
        let (table1, system) = system();
        let mats = all_multiplication_matrices(&system).unwrap();
        let comm = commutation_certificate(&mats);
        assert_eq!(comm.pairs_checked, 21);
        assert!(comm.ok(), "{:?}", comm.failures);
        let rel = relation_certificate(&table1, &mats);
        assert_eq!(rel.relations_checked, 27);
        assert!(rel.ok(), "{:?}", rel.failures);
    }

    #[test]
    fn corrupted_relation_breaks_a_certificate() {
        let (mut table1, _) = system();
        // Corrupt f16's base-ring term; the heads stay intact but the
        // matrix algebra must notice.
        table1.entries[15].1 =
            parse_poly(&xring_table(), "3*z^2*s*x0*x1 - x5^2 + x4*x6").unwrap();
        let system = RewriteSystem::from_table1(&table1).unwrap();
        let mats = all_multiplication_matrices(&system).unwrap();
        let comm = commutation_certificate(&mats);
        let rel = relation_certificate(&table1, &mats);
        assert!(!comm.ok() || !rel.ok());
    }

    #[test]
    fn dump_writes_seven_files() {
        let (_, system) = system();
        let mats = all_multiplication_matrices(&system).unwrap();
        let dir = std::env::temp_dir().join("severi_dump_test");
        std::fs::remove_dir_all(&dir).ok();
        dump_matrices(&dir, &mats).unwrap();
        let count = std::fs::read_dir(&dir).unwrap().count();
        assert_eq!(count, 7);
        std::fs::remove_dir_all(&dir).ok();
    }
}
