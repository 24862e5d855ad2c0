//! Sparse multivariate polynomials over Q(z) with named variables, plus the
//! exact linear algebra (kernel, rank, determinant) the certificate suites
//! are built on.
//!
//! Monomials are ordered graded-lexicographically with the variable order of
//! the owning [`VarTable`]. The order is used for canonical printing and for
//! deterministic pivot selection only; no result depends on it semantically.

mod matrix;
mod parse;

pub use matrix::{
    kernel_basis, kernel_over_field, rank_over_field, rref, span_contains, span_equal, PolyMatrix,
};
pub use parse::{parse_poly, PolyParseError};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::scalars::Eisenstein;

/// Errors from polynomial arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable tables do not match: {0}")]
    TableMismatch(String),
    #[error("matrix entry at ({0}, {1}) is not constant")]
    NonConstantEntry(usize, usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("exact division failed (dividend not a multiple of divisor)")]
    ExactDivisionFailed,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("bi-weight of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("polynomial is not bi-homogeneous: monomial `{0}` has weight {1:?}, monomial `{2}` has weight {3:?}")]
    Inhomogeneous(String, (i64, i64), String, (i64, i64)),
}

/// Ordered table of distinct variable names. The order fixes the monomial
/// order of every polynomial built over the table.
#[derive(Debug, PartialEq, Eq)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    /// `z` is reserved for the cube root of unity and rejected as a name.
    pub fn new(names: &[&str]) -> Arc<VarTable> {
        let mut seen = std::collections::BTreeSet::new();
        for n in names {
            assert!(!n.is_empty(), "empty variable name");
            assert!(*n != "z", "variable name `z` is reserved for the scalar generator");
            assert!(
                n.chars().next().unwrap().is_ascii_alphabetic()
                    && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
                "invalid variable name `{n}`"
            );
            assert!(seen.insert(*n), "duplicate variable name `{n}`");
        }
        Arc::new(VarTable { names: names.iter().map(|s| s.to_string()).collect() })
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Exponent vector; `Ord` is graded lex (total degree first, then the
/// exponent of the earliest differing variable decides).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn unit(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_into(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse multivariate polynomial over Q(z).
#[derive(Clone)]
pub struct MultiPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, Eisenstein>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        *self.table == *other.table && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        MultiPoly { table: table.clone(), terms: BTreeMap::new() }
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Self::constant(table, Eisenstein::one())
    }

    pub fn constant(table: &Arc<VarTable>, c: Eisenstein) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::unit(table.arity()), c);
        }
        MultiPoly { table: table.clone(), terms }
    }

    pub fn var(table: &Arc<VarTable>, name: &str) -> Result<Self, PolyError> {
        let i = table.index_of(name).ok_or_else(|| PolyError::UnknownVariable(name.into()))?;
        let mut exps = vec![0; table.arity()];
        exps[i] = 1;
        Ok(Self::from_raw_terms(table, vec![(exps, Eisenstein::one())]))
    }

    /// Builds a polynomial from raw (exponents, coefficient) pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_raw_terms(table: &Arc<VarTable>, raw: Vec<(Vec<u32>, Eisenstein)>) -> Self {
        let mut terms: BTreeMap<Monomial, Eisenstein> = BTreeMap::new();
        for (exps, c) in raw {
            assert_eq!(exps.len(), table.arity(), "exponent vector arity mismatch");
            if c.is_zero() {
                continue;
            }
            let m = Monomial::new(exps);
            match terms.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += &c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        MultiPoly { table: table.clone(), terms }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Eisenstein)> {
        self.terms.iter()
    }

    /// Some(c) iff the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Eisenstein> {
        match self.terms.len() {
            0 => Some(Eisenstein::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.is_unit() {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn coefficient_of(&self, m: &Monomial) -> Eisenstein {
        self.terms.get(m).cloned().unwrap_or_else(Eisenstein::zero)
    }

    /// Leading (monomial, coefficient) in graded lex; None for zero.
    pub fn leading_term(&self) -> Option<(&Monomial, &Eisenstein)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exponents()[var]).max().unwrap_or(0)
    }

    fn assert_same_table(&self, other: &MultiPoly, op: &str) {
        assert!(
            *self.table == *other.table,
            "{op} on polynomials over different variable tables"
        );
    }

    pub fn scale(&self, c: &Eisenstein) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        MultiPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Eisenstein) -> Self {
        if c.is_zero() {
            return Self::zero(&self.table);
        }
        MultiPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Self {
        self.assert_same_table(other, "add");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        MultiPoly { table: self.table.clone(), terms }
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> Self {
        self.assert_same_table(other, "mul");
        let mut acc = Self::zero(&self.table);
        for (m, c) in &other.terms {
            acc = acc.add(&self.mul_monomial(m, c));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.table);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Ring-homomorphic substitution. Variables named in `assignment` map to
    /// the given polynomials over `target`; every other variable must exist
    /// in `target` (by name) and maps to itself.
    pub fn substitute(
        &self,
        target: &Arc<VarTable>,
        assignment: &[(&str, MultiPoly)],
    ) -> Result<MultiPoly, PolyError> {
        for (name, p) in assignment {
            if self.table.index_of(name).is_none() {
                return Err(PolyError::UnknownVariable((*name).into()));
            }
            if *p.table != **target {
                return Err(PolyError::TableMismatch(format!(
                    "assignment for `{name}` is over a different table than the target"
                )));
            }
        }
        // Image of each source variable.
        let mut images: Vec<MultiPoly> = Vec::with_capacity(self.table.arity());
        for i in 0..self.table.arity() {
            let name = self.table.name(i);
            if let Some((_, p)) = assignment.iter().find(|(n, _)| *n == name) {
                images.push(p.clone());
            } else {
                images.push(MultiPoly::var(target, name)?);
            }
        }
        let mut acc = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    term = term.mul(&images[i].pow(e));
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Full evaluation at a point given in table order.
    pub fn eval(&self, point: &[Eisenstein]) -> Eisenstein {
        assert_eq!(point.len(), self.table.arity(), "evaluation point arity mismatch");
        let mut acc = Eisenstein::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v *= &point[i].pow(e);
                }
            }
            acc += &v;
        }
        acc
    }

    /// Formal partial derivative with respect to the named variable.
    pub fn derivative(&self, var: &str) -> Result<MultiPoly, PolyError> {
        let i = self
            .table
            .index_of(var)
            .ok_or_else(|| PolyError::UnknownVariable(var.into()))?;
        let mut raw = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponents()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            exps[i] = e - 1;
            raw.push((exps, c * &Eisenstein::from_int(e as i64)));
        }
        Ok(Self::from_raw_terms(&self.table, raw))
    }

    /// Exact polynomial division; errors when the divisor does not divide.
    pub fn exact_div(&self, divisor: &MultiPoly) -> Result<MultiPoly, PolyError> {
        self.assert_same_table(divisor, "exact_div");
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (dm, dc) = divisor.leading_term().unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.table);
        while !rem.is_zero() {
            let (rm, rc) = rem.leading_term().unwrap();
            if !dm.divides(rm) {
                return Err(PolyError::ExactDivisionFailed);
            }
            let qm = dm.quotient_into(rm);
            let qc = rc / &dc;
            rem = rem.sub(&divisor.mul_monomial(&qm, &qc));
            quot = quot.add(&MultiPoly::from_raw_terms(
                &self.table,
                vec![(qm.exponents().to_vec(), qc)],
            ));
        }
        Ok(quot)
    }

    fn monomial_string(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 1 {
                parts.push(self.table.name(i).to_string());
            } else if e > 1 {
                parts.push(format!("{}^{}", self.table.name(i), e));
            }
        }
        parts.join("*")
    }
}

/// One (delta, epsilon) weight pair per variable of a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    table: Arc<VarTable>,
    weights: Vec<(i64, i64)>,
}

impl WeightVector {
    pub fn new(table: &Arc<VarTable>, weights: Vec<(i64, i64)>) -> Self {
        assert_eq!(weights.len(), table.arity(), "weight vector arity mismatch");
        WeightVector { table: table.clone(), weights }
    }

    pub fn of_monomial(&self, m: &Monomial) -> (i64, i64) {
        let mut w = (0i64, 0i64);
        for (i, &e) in m.exponents().iter().enumerate() {
            w.0 += self.weights[i].0 * e as i64;
            w.1 += self.weights[i].1 * e as i64;
        }
        w
    }
}

/// Common bi-weight of all terms of `p`; errors on zero input and on the
/// first pair of terms found with distinct weights.
pub fn bi_weight(p: &MultiPoly, w: &WeightVector) -> Result<(i64, i64), PolyError> {
    assert!(*p.table == *w.table, "weight vector over a different table");
    let mut found: Option<(Monomial, (i64, i64))> = None;
    for (m, _) in p.terms() {
        let mw = w.of_monomial(m);
        match &found {
            None => found = Some((m.clone(), mw)),
            Some((m0, w0)) => {
                if *w0 != mw {
                    return Err(PolyError::Inhomogeneous(
                        p.monomial_string(m0),
                        *w0,
                        p.monomial_string(m),
                        mw,
                    ));
                }
            }
        }
    }
    found.map(|(_, w)| w).ok_or(PolyError::ZeroPolynomial)
}

/// Matrix of formal partials: entry (i, j) = d polys[i] / d vars[j].
pub fn jacobian(polys: &[MultiPoly], vars: &[&str]) -> Result<PolyMatrix, PolyError> {
    assert!(!polys.is_empty(), "jacobian of an empty system");
    let table = polys[0].table().clone();
    let mut entries = Vec::with_capacity(polys.len() * vars.len());
    for p in polys {
        assert!(*p.table == *table, "jacobian over mixed tables");
        for v in vars {
            entries.push(p.derivative(v)?);
        }
    }
    Ok(PolyMatrix::new(&table, polys.len(), vars.len(), entries))
}

/// Canonical text form: graded-lex descending terms joined by ` + ` / ` - `.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_display_negative();
            let c_abs = if neg { -c } else { c.clone() };
            let sep = match (first, neg) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            first = false;
            let mono = self.monomial_string(m);
            let coeff = if mono.is_empty() {
                c_abs.to_string()
            } else if c_abs.is_one() {
                String::new()
            } else if c_abs.needs_parens_as_factor() {
                format!("({c_abs})*")
            } else {
                format!("{c_abs}*")
            };
            write!(f, "{sep}{coeff}{mono}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Eisenstein;

    fn table() -> Arc<VarTable> {
        VarTable::new(&["s", "t", "u", "v", "w"])
    }

    fn p(t: &Arc<VarTable>, s: &str) -> MultiPoly {
        parse_poly(t, s).unwrap()
    }

    #[test]
    fn substitute_is_multiplicative_on_examples() {
        let t = table();
        // s*x -> s^3*x with x spelled u here
        let cube = p(&t, "s^3");
        let q = p(&t, "s*u^2");
        let r = q.substitute(&t, &[("s", cube)]).unwrap();
        assert_eq!(r, p(&t, "s^3*u^2"));
    }

    #[test]
    fn cyclic_shift_fixes_symmetric_cubic() {
        let t = table();
        let sym = p(&t, "u^3 + v^3 + w^3 - 3*u*v*w");
        let shifted = sym
            .substitute(
                &t,
                &[
                    ("u", p(&t, "v")),
                    ("v", p(&t, "w")),
                    ("w", p(&t, "u")),
                ],
            )
            .unwrap();
        assert_eq!(shifted, sym);
    }

    #[test]
    fn derivative_examples() {
        let t = table();
        assert_eq!(p(&t, "u^2").derivative("u").unwrap(), p(&t, "2*u"));
        let f = p(&t, "s*u^2 + t*v^2 + w^2");
        assert_eq!(f.derivative("s").unwrap(), p(&t, "u^2"));
        assert_eq!(f.derivative("u").unwrap(), p(&t, "2*s*u"));
        assert!(f.derivative("q").is_err());
    }

    #[test]
    fn bi_weight_examples() {
        let t = VarTable::new(&["s", "x0"]);
        let w = WeightVector::new(&t, vec![(3, 0), (0, 3)]);
        let f = p(&t, "s*x0^2");
        assert_eq!(bi_weight(&f, &w).unwrap(), (3, 6));
        assert_eq!(bi_weight(&MultiPoly::one(&t), &w).unwrap(), (0, 0));
        assert_eq!(bi_weight(&MultiPoly::zero(&t), &w), Err(PolyError::ZeroPolynomial));
        let bad = p(&t, "s + x0");
        assert!(matches!(bi_weight(&bad, &w), Err(PolyError::Inhomogeneous(..))));
    }

    #[test]
    fn exact_division_round_trip() {
        let t = table();
        let a = p(&t, "u^2 - v^2");
        let b = p(&t, "u - v");
        assert_eq!(a.exact_div(&b).unwrap(), p(&t, "u + v"));
        assert_eq!(p(&t, "u^2 + v").exact_div(&b), Err(PolyError::ExactDivisionFailed));
    }

    #[test]
    fn display_round_trips() {
        let t = table();
        for s in [
            "1",
            "0",
            "u*v*w",
            "u^2*w + z*v*w^2 + z^2*u*v^2",
            "(2+z)/3*u - 4*w^3",
            "s^3*t^2*v - u",
        ] {
            let q = p(&t, s);
            assert_eq!(parse_poly(&t, &q.to_string()).unwrap(), q, "failed for {s}");
        }
    }

    #[test]
    fn eval_at_point() {
        let t = VarTable::new(&["x", "y"]);
        let f = p(&t, "x^2 + z*y");
        let v = f.eval(&[Eisenstein::from_int(2), Eisenstein::from_int(3)]);
        let expected = Eisenstein::from_int(4) + Eisenstein::zeta() * Eisenstein::from_int(3);
        assert_eq!(v, expected);
    }

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Eisenstein>();
        assert_send_sync::<MultiPoly>();
        assert_send_sync::<PolyMatrix>();
        assert_send_sync::<WeightVector>();
    }
}
