//! Dense matrices with polynomial entries, fraction-free (Bareiss)
//! elimination for exact rank and determinant over polynomial rings, and
//! Gauss-Jordan linear algebra over the coefficient field Q(z).
//!
//! Bareiss elimination uses the two-row cross-multiplication update
//! `a[i][j] <- (a[r][c]*a[i][j] - a[i][c]*a[r][j]) / prev`, where the
//! division by the previous pivot is exact by the Sylvester identity.
//! Pivots are always the first nonzero candidate in row order, so every
//! result is deterministic.

use std::sync::Arc;

use crate::scalars::Eisenstein;

use super::{MultiPoly, PolyError, VarTable};

/// Rectangular matrix of polynomials sharing one variable table, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    table: Arc<VarTable>,
    rows: usize,
    cols: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(table: &Arc<VarTable>, rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        for e in &entries {
            assert!(**e.table() == **table, "matrix entry over a different table");
        }
        PolyMatrix { table: table.clone(), rows, cols, entries }
    }

    pub fn zero(table: &Arc<VarTable>, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            table: table.clone(),
            rows,
            cols,
            entries: vec![MultiPoly::zero(table); rows * cols],
        }
    }

    pub fn identity(table: &Arc<VarTable>, n: usize) -> Self {
        let mut m = Self::zero(table, n, n);
        for i in 0..n {
            m.set(i, i, MultiPoly::one(table));
        }
        m
    }

    pub fn from_fn(
        table: &Arc<VarTable>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> MultiPoly,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(table, rows, cols, entries)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: MultiPoly) {
        assert!(**p.table() == *self.table, "matrix entry over a different table");
        self.entries[i * self.cols + j] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        PolyMatrix {
            table: self.table.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        PolyMatrix {
            table: self.table.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn mul(&self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        PolyMatrix::from_fn(&self.table, self.rows, rhs.cols, |i, j| {
            let mut acc = MultiPoly::zero(&self.table);
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(rhs.get(k, j)));
            }
            acc
        })
    }

    pub fn scale(&self, p: &MultiPoly) -> PolyMatrix {
        PolyMatrix {
            table: self.table.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.mul(p)).collect(),
        }
    }

    /// All entries as field constants, or the position of the first
    /// non-constant entry.
    pub fn constant_rows(&self) -> Result<Vec<Vec<Eisenstein>>, PolyError> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(
                    self.get(i, j)
                        .as_constant()
                        .ok_or(PolyError::NonConstantEntry(i, j))?,
                );
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Entry-wise evaluation at a point of the variable table.
    pub fn eval(&self, point: &[Eisenstein]) -> Vec<Vec<Eisenstein>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval(point)).collect())
            .collect()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant_fraction_free(&self) -> Result<MultiPoly, PolyError> {
        if self.rows != self.cols {
            return Err(PolyError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(MultiPoly::one(&self.table));
        }
        let mut a: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = false;
        let mut prev = MultiPoly::one(&self.table);
        for k in 0..n - 1 {
            let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return Ok(MultiPoly::zero(&self.table));
            };
            if p != k {
                a.swap(p, k);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                    a[i][j] = num.exact_div(&prev)?;
                }
                a[i][k] = MultiPoly::zero(&self.table);
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if sign { det.neg() } else { det })
    }

    /// Rank of the matrix over the fraction field of the entry ring,
    /// computed by fraction-free elimination. Deterministic.
    pub fn rank_fraction_free(&self) -> usize {
        let mut a: Vec<Vec<MultiPoly>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut prev = MultiPoly::one(&self.table);
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(p, rank);
            for i in rank + 1..self.rows {
                for j in c + 1..self.cols {
                    let num = a[rank][c].mul(&a[i][j]).sub(&a[i][c].mul(&a[rank][j]));
                    a[i][j] = num
                        .exact_div(&prev)
                        .expect("fraction-free elimination produced an inexact division");
                }
                a[i][c] = MultiPoly::zero(&self.table);
            }
            prev = a[rank][c].clone();
            rank += 1;
        }
        rank
    }
}

// ---------------------------------------------------------------------------
// Linear algebra over the field Q(z) on constant matrices.
// ---------------------------------------------------------------------------

/// In-place reduced row echelon form; returns the pivot columns and drops
/// zero rows, so afterwards `rows.len() == rank` and each row has leading
/// coefficient one, ordered by pivot position.
pub fn rref(rows: &mut Vec<Vec<Eisenstein>>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for j in c..ncols {
            let v = &rows[r][j] * &inv;
            rows[r][j] = v;
        }
        for i in 0..nrows {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            for j in c..ncols {
                let v = &rows[i][j] - &(&f * &rows[r][j]);
                rows[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank_over_field(rows: &[Vec<Eisenstein>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Canonical basis (reduced echelon rows) of the right null space of the
/// stacked constraint rows: every returned v satisfies rows * v = 0, the
/// first nonzero coordinate of each v is 1, and vectors are sorted by the
/// position of that coordinate.
pub fn kernel_basis(rows: &[Vec<Eisenstein>], ncols: usize) -> Vec<Vec<Eisenstein>> {
    for row in rows {
        assert_eq!(row.len(), ncols, "constraint row length mismatch");
    }
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for f in 0..ncols {
        if pivot_set.contains(&f) {
            continue;
        }
        let mut v = vec![Eisenstein::zero(); ncols];
        v[f] = Eisenstein::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -&m[i][f];
        }
        basis.push(v);
    }
    // Canonicalize the basis itself so span comparison is plain equality.
    rref(&mut basis);
    basis
}

/// Kernel of a matrix whose entries must all be constants.
pub fn kernel_over_field(m: &PolyMatrix) -> Result<Vec<Vec<Eisenstein>>, PolyError> {
    let rows = m.constant_rows()?;
    Ok(kernel_basis(&rows, m.cols()))
}

/// Span membership over Q(z).
pub fn span_contains(span: &[Vec<Eisenstein>], v: &[Eisenstein]) -> bool {
    let base = rank_over_field(span);
    let mut extended = span.to_vec();
    extended.push(v.to_vec());
    rank_over_field(&extended) == base
}

/// Span equality via canonical reduced echelon bases.
pub fn span_equal(a: &[Vec<Eisenstein>], b: &[Vec<Eisenstein>]) -> bool {
    let mut ra = a.to_vec();
    let mut rb = b.to_vec();
    rref(&mut ra);
    rref(&mut rb);
    ra == rb
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::parse_poly;

    fn consts(vals: &[&[i64]]) -> Vec<Vec<Eisenstein>> {
        vals.iter()
            .map(|row| row.iter().map(|&v| Eisenstein::from_int(v)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let rows = consts(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(kernel_basis(&rows, 3).is_empty());
    }

    #[test]
    fn kernel_of_row_of_ones() {
        let rows = consts(&[&[1, 1]]);
        let k = kernel_basis(&rows, 2);
        assert_eq!(k, consts(&[&[1, -1]]));
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let rows = consts(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let k = kernel_basis(&rows, 3);
        assert_eq!(k.len(), 1);
        for row in &rows {
            let mut acc = Eisenstein::zero();
            for (a, b) in row.iter().zip(&k[0]) {
                acc += &(a * b);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn bareiss_rank_examples() {
        let t = VarTable::new(&["s", "t"]);
        let z = MultiPoly::zero(&t);
        let m = PolyMatrix::new(&t, 2, 2, vec![z.clone(), z.clone(), z.clone(), z.clone()]);
        assert_eq!(m.rank_fraction_free(), 0);

        let d = PolyMatrix::from_fn(&t, 3, 3, |i, j| {
            if i != j {
                return MultiPoly::zero(&t);
            }
            parse_poly(&t, ["s", "t", "s - t"][i]).unwrap()
        });
        assert_eq!(d.rank_fraction_free(), 3);
    }

    #[test]
    fn bareiss_determinant_matches_cofactor_on_small_matrix() {
        let t = VarTable::new(&["s", "t"]);
        let e = |s: &str| parse_poly(&t, s).unwrap();
        let m = PolyMatrix::new(
            &t,
            3,
            3,
            vec![
                e("s"), e("1"), e("t"),
                e("t"), e("s + 1"), e("0"),
                e("1"), e("s*t"), e("s"),
            ],
        );
        // Cofactor expansion along the first row, written out by hand.
        let det_cof = e("s").mul(&e("(s+1)*s - 0"))
            .sub(&e("1").mul(&e("t*s - 0")))
            .add(&e("t").mul(&e("t*s*t - (s+1)")));
        assert_eq!(m.determinant_fraction_free().unwrap(), det_cof);
    }

    #[test]
    fn rank_is_invariant_under_row_scaling_and_swaps() {
        let t = VarTable::new(&["s", "t"]);
        let e = |s: &str| parse_poly(&t, s).unwrap();
        let m = PolyMatrix::new(&t, 2, 3, vec![e("s"), e("t"), e("1"), e("s^2"), e("s*t"), e("s")]);
        assert_eq!(m.rank_fraction_free(), 1);
        let swapped =
            PolyMatrix::new(&t, 2, 3, vec![e("s^2"), e("s*t"), e("s"), e("s"), e("t"), e("1")]);
        assert_eq!(swapped.rank_fraction_free(), 1);
        let scaled = PolyMatrix::new(
            &t,
            2,
            3,
            vec![e("(s-t)*s"), e("(s-t)*t"), e("s-t"), e("s^2"), e("s*t"), e("s")],
        );
        assert_eq!(scaled.rank_fraction_free(), 1);
    }
}
