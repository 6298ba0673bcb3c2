//! Dense exact linear algebra over the rationals.
//!
//! Elimination is fraction-free: every row is first scaled to integers and
//! reduced with Bareiss' algorithm, so intermediate entries are minors of the
//! input and never blow up beyond Hadamard's bound.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GeometryError, Result};
use crate::rational::{common_denominator, format_rational, parse_rational, rat, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        RationalVector(entries)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        RationalVector(values.iter().map(|&v| rat(v)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        RationalVector(vec![Rational::zero(); len])
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[i] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, s: &Rational) -> RationalVector {
        RationalVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn add(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalVector) -> RationalVector {
        RationalVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Scales so that the first nonzero entry is 1. Zero vectors are returned as is.
    pub fn normalized_leading(&self) -> RationalVector {
        match self.0.iter().find(|q| !q.is_zero()) {
            Some(lead) => self.scale(&lead.recip()),
            None => self.clone(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::rational::to_f64).collect()
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl IndexMut<usize> for RationalVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.0[i]
    }
}

impl fmt::Debug for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.0.iter().map(format_rational).collect();
        parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<String>::deserialize(d)?;
        parts
            .iter()
            .map(|p| parse_rational(p).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(RationalVector)
    }
}

/// Cross product of two 3-vectors.
pub fn cross(a: &RationalVector, b: &RationalVector) -> RationalVector {
    assert_eq!((a.len(), b.len()), (3, 3), "cross product needs 3-vectors");
    RationalVector(vec![
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ])
}

/// Row-major dense rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(GeometryError::Dimension {
                expected: format!("{} entries", rows * cols),
                got: data.len().to_string(),
            });
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[RationalVector]) -> Self {
        let cols = rows.first().map_or(0, RationalVector::len);
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().cloned()
            })
            .collect();
        RationalMatrix { rows: rows.len(), cols, data }
    }

    pub fn from_columns(columns: &[RationalVector]) -> Self {
        Self::from_rows(columns).transpose()
    }

    pub fn from_ints<const C: usize>(rows: &[[i64; C]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().map(|&v| rat(v))).collect();
        RationalMatrix { rows: rows.len(), cols: C, data }
    }

    /// Reshape a 9-vector row-major into a 3×3 matrix.
    pub fn from_vec9(v: &RationalVector) -> Self {
        assert_eq!(v.len(), 9, "vec9 needs 9 entries");
        RationalMatrix { rows: 3, cols: 3, data: v.entries().to_vec() }
    }

    /// Concatenation of the rows.
    pub fn vectorize(&self) -> RationalVector {
        RationalVector(self.data.clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn row(&self, i: usize) -> RationalVector {
        RationalVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> RationalVector {
        RationalVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<RationalVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> Self {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &RationalVector) -> RationalVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        RationalVector((0..self.rows).map(|i| self.row(i).dot(v)).collect())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn max_abs(&self) -> Rational {
        self.data.iter().map(|q| q.abs()).max().unwrap_or_else(Rational::zero)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RationalMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.data.iter().map(crate::rational::to_f64).collect()
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        bareiss_echelon(self).pivots.len()
    }

    /// Exact determinant (Bareiss). Panics on non-square input.
    pub fn det(&self) -> Rational {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 3 {
            return det3(self);
        }
        let ech = bareiss_echelon(self);
        if ech.pivots.len() < self.rows {
            return Rational::zero();
        }
        // last Bareiss pivot equals det of the integer-scaled matrix
        let n = self.rows;
        let last = &ech.rows[n - 1][n - 1];
        let mut value = Rational::from_integer(last.clone()) / Rational::from_integer(ech.row_scale.clone());
        if ech.swaps % 2 == 1 {
            value = -value;
        }
        value
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(GeometryError::Dimension { expected: "square".into(), got: format!("{}x{}", self.rows, self.cols) });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Rational::one();
        }
        let (rref, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(GeometryError::Degenerate("matrix is singular".into()));
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = rref[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let ech = bareiss_echelon(self);
        let r = ech.pivots.len();
        let mut out = Self::zeros(r, self.cols);
        for (i, &p) in ech.pivots.iter().enumerate() {
            let lead = Rational::from_integer(ech.rows[i][p].clone());
            for j in 0..self.cols {
                out[(i, j)] = Rational::from_integer(ech.rows[i][j].clone()) / &lead;
            }
        }
        for i in (0..r).rev() {
            let p = ech.pivots[i];
            for k in 0..i {
                let f = out[(k, p)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in p..self.cols {
                    let delta = &f * &out[(i, j)];
                    out[(k, j)] -= delta;
                }
            }
        }
        (out, ech.pivots)
    }

    /// Canonical basis of the right null space: one vector per free column
    /// (ascending), with a 1 in that column and zeros in the other free columns.
    pub fn kernel_basis(&self) -> Vec<RationalVector> {
        let (rref, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut v = RationalVector::zeros(self.cols);
                v[free] = Rational::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -rref[(i, free)].clone();
                }
                v
            })
            .collect()
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;
    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        self.matmul(rhs)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let parts: Vec<String> = (0..self.cols).map(|j| format_rational(&self[(i, j)])).collect();
            writeln!(f, "  [{}]", parts.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.row_vectors().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<RationalVector>::deserialize(d)?;
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len() || r.is_empty()) {
            return Err(serde::de::Error::custom("matrix rows must be nonempty and of equal length"));
        }
        Ok(RationalMatrix::from_rows(&rows))
    }
}

fn det3(m: &RationalMatrix) -> Rational {
    let a = |i, j| &m[(i, j)];
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
    /// Product of the per-row integer scale factors.
    row_scale: BigInt,
}

/// Fraction-free echelon form of the matrix with every row scaled to integers.
fn bareiss_echelon(m: &RationalMatrix) -> Echelon {
    let mut row_scale = BigInt::one();
    let mut rows: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let slice = &m.data[i * m.cols..(i + 1) * m.cols];
            let l = common_denominator(slice);
            row_scale *= &l;
            slice.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in (c + 1)..m.cols {
                let num = pivot * &row[j] - &factor * &pivot_row[j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots, swaps, row_scale }
}

/// Skew-symmetric matrix `[v]×` with `[v]× w = v × w`.
pub fn skew(v: &RationalVector) -> Result<RationalMatrix> {
    if v.len() != 3 {
        return Err(GeometryError::Dimension { expected: "3".into(), got: v.len().to_string() });
    }
    let z = Rational::zero();
    let data = vec![
        z.clone(),
        -v[2].clone(),
        v[1].clone(),
        v[2].clone(),
        z.clone(),
        -v[0].clone(),
        -v[1].clone(),
        v[0].clone(),
        z,
    ];
    RationalMatrix::from_vec(3, 3, data)
}

/// Greedy selection of the lexicographically first maximal set of linearly
/// independent rows. Returns the selected indices.
pub fn independent_rows(rows: &[RationalVector]) -> Vec<usize> {
    let mut basis = RowSpace::default();
    rows.iter().enumerate().filter(|(_, r)| basis.insert(r)).map(|(i, _)| i).collect()
}

/// Incrementally maintained row space in reduced form.
#[derive(Debug, Clone, Default)]
pub struct RowSpace {
    /// (pivot column, row with 1 at pivot and zeros at the other pivots)
    rows: Vec<(usize, RationalVector)>,
}

impl RowSpace {
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &RationalVector) -> RationalVector {
        let mut w = v.clone();
        for (p, r) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                w = w.sub(&r.scale(&f));
            }
        }
        w
    }

    pub fn contains(&self, v: &RationalVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` if it is independent of the current rows; returns whether it was added.
    pub fn insert(&mut self, v: &RationalVector) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|q| !q.is_zero()) else {
            return false;
        };
        let w = w.scale(&w[p].recip());
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = r[p].clone();
                *r = r.sub(&w.scale(&f));
            }
        }
        self.rows.push((p, w));
        true
    }
}
