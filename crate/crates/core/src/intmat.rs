//! Exact integer matrices and the lattice normal forms everything else is
//! built on: Smith form, row Hermite form, integer kernels and membership in
//! a column lattice.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// An integer column vector.
pub type IntVector = Vec<BigInt>;

/// Builds an [`IntVector`] from machine integers.
pub fn ivec(values: &[i64]) -> IntVector {
    values.iter().map(|&v| BigInt::from(v)).collect()
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[IntVector]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IntVector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Sub-block `[r0, r1) x [c0, c1)`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &IntMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        Self::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    /// Rows picked by index, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    /// Columns picked by index, in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    pub fn add(&self, other: &IntMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &IntMatrix) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| -&self[(i, j)])
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * k)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += k * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            self.data[i * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    pub(crate) fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * &rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// `S * M * T = D` with `S`, `T` unimodular and `D` diagonal with a
/// nonnegative divisor chain on its diagonal.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    /// Inverse of `s`, tracked alongside it.
    pub s_inv: IntMatrix,
    pub d: IntMatrix,
    pub t: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries `d_1 | d_2 | ... | d_rank`.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }
}

/// Smith normal form by elementary row and column operations, always
/// pivoting on an entry of least absolute value.
pub fn snf(m: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut s = IntMatrix::identity(rows);
    let mut s_inv = IntMatrix::identity(rows);
    let mut t = IntMatrix::identity(cols);

    // Row ops act on d and s; their inverses act on the columns of s_inv.
    let swap_r = |d: &mut IntMatrix, s: &mut IntMatrix, s_inv: &mut IntMatrix, a, b| {
        d.swap_rows(a, b);
        s.swap_rows(a, b);
        s_inv.swap_cols(a, b);
    };
    let add_r = |d: &mut IntMatrix, s: &mut IntMatrix, s_inv: &mut IntMatrix, dst, src, k: &BigInt| {
        d.add_row_multiple(dst, src, k);
        s.add_row_multiple(dst, src, k);
        s_inv.add_col_multiple(src, dst, &-k);
    };

    let mut rank = 0;
    for p in 0..rows.min(cols) {
        let Some((pi, pj)) = min_abs_entry(&d, p) else {
            break;
        };
        swap_r(&mut d, &mut s, &mut s_inv, p, pi);
        d.swap_cols(p, pj);
        t.swap_cols(p, pj);

        loop {
            let mut dirty = false;
            for i in p + 1..rows {
                if d[(i, p)].is_zero() {
                    continue;
                }
                let q = d[(i, p)].div_floor(&d[(p, p)]);
                add_r(&mut d, &mut s, &mut s_inv, i, p, &-q);
                if !d[(i, p)].is_zero() {
                    dirty = true;
                }
            }
            for j in p + 1..cols {
                if d[(p, j)].is_zero() {
                    continue;
                }
                let q = d[(p, j)].div_floor(&d[(p, p)]);
                d.add_col_multiple(j, p, &-&q);
                t.add_col_multiple(j, p, &-q);
                if !d[(p, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A smaller remainder appeared in the pivot row or column.
                let (bi, bj) = min_abs_in_cross(&d, p);
                swap_r(&mut d, &mut s, &mut s_inv, p, bi);
                d.swap_cols(p, bj);
                t.swap_cols(p, bj);
                continue;
            }
            // Pivot must divide the whole remaining block.
            let offender = (p + 1..rows)
                .flat_map(|i| (p + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(p, p)]));
            match offender {
                Some((i, _)) => add_r(&mut d, &mut s, &mut s_inv, p, i, &BigInt::one()),
                None => break,
            }
        }
        if d[(p, p)].is_negative() {
            d.negate_row(p);
            s.negate_row(p);
            s_inv.negate_col(p);
        }
        rank += 1;
    }

    SmithDecomposition {
        s,
        s_inv,
        d,
        t,
        rank,
    }
}

fn min_abs_entry(d: &IntMatrix, p: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in p..d.rows() {
        for j in p..d.cols() {
            let v = &d[(i, j)];
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| v.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn min_abs_in_cross(d: &IntMatrix, p: usize) -> (usize, usize) {
    let mut best = (p, p);
    let mut consider = |i: usize, j: usize| {
        let v = &d[(i, j)];
        if !v.is_zero() && (d[best].is_zero() || v.abs() < d[best].abs()) {
            best = (i, j);
        }
    };
    for i in p..d.rows() {
        consider(i, p);
    }
    for j in p..d.cols() {
        consider(p, j);
    }
    best
}

/// Row Hermite normal form: `transform * M = h`.
///
/// Convention: rows in echelon form, each pivot positive, entries above a
/// pivot reduced into `[0, pivot)`, zero rows last. Two matrices with the
/// same number of columns have the same row lattice iff their forms agree
/// after dropping zero rows.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub transform: IntMatrix,
    pub rank: usize,
}

impl HermiteForm {
    /// The nonzero rows of `h`.
    pub fn basis(&self) -> IntMatrix {
        self.h.block(0, self.rank, 0, self.h.cols())
    }
}

pub fn hnf_rows(m: &IntMatrix) -> HermiteForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(pi) = pivot else { break };
            h.swap_rows(r, pi);
            u.swap_rows(r, pi);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    HermiteForm {
        h,
        transform: u,
        rank: r,
    }
}

/// Lattice basis (as columns) of the integer kernel `{x : M x = 0}`, in
/// canonical reduced form.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let dec = snf(m);
    let n = m.cols();
    let raw = dec.t.block(0, n, dec.rank, n);
    if raw.cols() == 0 {
        return raw;
    }
    hnf_rows(&raw.transpose()).basis().transpose()
}

/// Cached Smith data for repeated membership questions against the column
/// lattice of a fixed matrix.
#[derive(Clone, Debug)]
pub struct ColumnLattice {
    generators: IntMatrix,
    dec: SmithDecomposition,
}

impl ColumnLattice {
    pub fn new(generators: IntMatrix) -> Self {
        let dec = snf(&generators);
        ColumnLattice { generators, dec }
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.dec
    }

    /// Integer `x` with `generators * x = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<IntVector>> {
        let rows = self.generators.rows();
        if b.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: b.len(),
            });
        }
        let c = self.dec.s.mul_vec(b);
        let mut y = vec![BigInt::zero(); self.generators.cols()];
        for (i, ci) in c.iter().enumerate() {
            if i < self.dec.rank {
                let (q, r) = ci.div_rem(&self.dec.d[(i, i)]);
                if !r.is_zero() {
                    return Ok(None);
                }
                y[i] = q;
            } else if !ci.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(self.dec.t.mul_vec(&y)))
    }

    pub fn contains(&self, b: &[BigInt]) -> bool {
        matches!(self.solve(b), Ok(Some(_)))
    }
}

/// Integer solution of `M x = b`, or `None` when `b` is outside the column
/// lattice of `M`.
pub fn solve_in_column_lattice(m: &IntMatrix, b: &[BigInt]) -> Result<Option<IntVector>> {
    ColumnLattice::new(m.clone()).solve(b)
}
