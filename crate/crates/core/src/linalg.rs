//! Dense exact matrices.
//!
//! The default kernels are fraction-free (Bareiss): every intermediate
//! entry is a minor of the input, so over the integers nothing but exact
//! integer division ever happens. Plain Gauss-Jordan with field division is
//! kept for [`Field`] scalars and serves as a cross-check.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Outcome of fraction-free forward elimination.
#[derive(Debug, Clone)]
pub struct Echelon<T> {
    /// Original indices of the pivot rows, in pivot order.
    pub pivot_rows: Vec<usize>,
    /// Pivot columns, increasing.
    pub pivot_cols: Vec<usize>,
    /// The last pivot, i.e. the leading principal minor on the pivot rows
    /// and columns (up to the sign of the row permutation).
    pub last_pivot: T,
    /// Parity of the row permutation applied during elimination.
    pub odd_permutation: bool,
}

impl<T> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors. A zero-row input needs `cols`
    /// spelled out, hence the separate argument.
    pub fn from_rows(cols: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Ok(Self { rows: n, cols, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&x| T::from_i64(x)).collect()).collect();
        Self::from_rows(cols, rows).expect("ragged literal matrix")
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

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rational(&self) -> Matrix<num_rational::BigRational> {
        self.map(Scalar::to_rational)
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| acc.add_ref(&self[(i, k)].mul_ref(&rhs[(k, j)])))
        }))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} against {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(T::zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b))))
            .collect())
    }

    /// `vᵀ · self`.
    pub fn vec_mul(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        Ok((0..self.cols)
            .map(|j| (0..self.rows).fold(T::zero(), |acc, i| acc.add_ref(&v[i].mul_ref(&self[(i, j)]))))
            .collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul_ref(s))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.add_ref(b))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a.sub_ref(b))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Dimension(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect() })
    }

    /// Entry `(i, j)` of the result is `self[rows[i], cols[j]]`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        for &i in rows {
            if i >= self.rows {
                return Err(Error::IndexOutOfRange { index: i, bound: self.rows });
            }
        }
        for &j in cols {
            if j >= self.cols {
                return Err(Error::IndexOutOfRange { index: j, bound: self.cols });
            }
        }
        Ok(Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone()))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Result<Self> {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    /// Fraction-free (Bareiss) forward elimination with row pivoting.
    pub fn echelon(&self) -> Echelon<T> {
        self.echelon_form().0
    }

    /// [`Matrix::echelon`] together with the eliminated matrix: its first
    /// `rank` rows are the pivot rows in pivot order, upper trapezoidal on
    /// the pivot columns, with last pivot entry `±det self[pivot rows,
    /// pivot cols]`. Each row is an integer combination of input rows.
    pub fn echelon_form(&self) -> (Echelon<T>, Self) {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut pivot_cols = Vec::new();
        let mut prev = T::one();
        let mut odd = false;
        let mut k = 0;
        for c in 0..n {
            if k == m {
                break;
            }
            let Some(p) = (k..m).find(|&r| !a[r * n + c].is_zero()) else {
                continue;
            };
            if p != k {
                for j in 0..n {
                    a.swap(p * n + j, k * n + j);
                }
                perm.swap(p, k);
                odd = !odd;
            }
            let (head, tail) = a.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..];
            let akk = &pivot_row[c];
            for row in tail.chunks_mut(n) {
                let aic = std::mem::replace(&mut row[c], T::zero());
                for j in c + 1..n {
                    row[j] = T::cross_div(akk, &row[j], &aic, &pivot_row[j], &prev);
                }
            }
            prev = akk.clone();
            pivot_cols.push(c);
            k += 1;
        }
        a.truncate(k * n);
        let reduced = Self { rows: k, cols: n, data: a };
        (Echelon { pivot_rows: perm[..k].to_vec(), pivot_cols, last_pivot: prev, odd_permutation: odd }, reduced)
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn determinant(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let e = self.echelon();
        if e.rank() < self.rows {
            return Ok(T::zero());
        }
        Ok(if e.odd_permutation { -e.last_pivot } else { e.last_pivot })
    }

    /// Index sets `(I, J)`, both increasing, with `|I| = |J| = r` and a
    /// nonzero minor `det(self[I, J])`.
    pub fn find_nonsingular_submatrix(&self, r: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let e = self.echelon();
        if e.rank() < r {
            return Err(Error::RankDeficient { required: r, actual: e.rank() });
        }
        let mut rows = e.pivot_rows[..r].to_vec();
        rows.sort_unstable();
        Ok((rows, e.pivot_cols[..r].to_vec()))
    }

    /// Fraction-free solution of a nonsingular square system with several
    /// right-hand sides. Returns `D = ±det(self)` and `X` with
    /// `self · X = D · B`, or `None` when `self` is singular. Over the
    /// integers `X` is integral.
    pub fn solve_scaled(&self, b: &Self) -> Result<Option<(T, Self)>> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if b.rows != self.rows {
            return Err(Error::Dimension(format!("{} right-hand-side rows for {} equations", b.rows, self.rows)));
        }
        let (n, k) = (self.rows, b.cols);
        let w = n + k;
        let mut a: Vec<T> = (0..n)
            .flat_map(|i| self.row(i).iter().chain(b.row(i)).cloned().collect::<Vec<_>>())
            .collect();
        let mut prev = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r * w + c].is_zero()) else {
                return Ok(None);
            };
            if p != c {
                for j in 0..w {
                    a.swap(p * w + j, c * w + j);
                }
            }
            let (head, tail) = a.split_at_mut((c + 1) * w);
            let pivot_row = &head[c * w..];
            let acc = &pivot_row[c];
            for row in tail.chunks_mut(w) {
                let aic = std::mem::replace(&mut row[c], T::zero());
                for j in c + 1..w {
                    row[j] = T::cross_div(acc, &row[j], &aic, &pivot_row[j], &prev);
                }
            }
            prev = acc.clone();
        }
        // Row i now reads a_ii x_i + sum_{j>i} a_ij x_j = b'_i, and D x is
        // integral, so each back-substitution division is exact.
        let d = prev;
        let mut x = Self::zeros(n, k);
        for col in 0..k {
            for i in (0..n).rev() {
                let mut acc = d.mul_ref(&a[i * w + n + col]);
                for j in i + 1..n {
                    let aij = &a[i * w + j];
                    if !aij.is_zero() {
                        acc = acc.sub_ref(&aij.mul_ref(&x[(j, col)]));
                    }
                }
                x[(i, col)] = acc.div_exact(&a[i * w + i]);
            }
        }
        Ok(Some((d, x)))
    }

    /// Basis of the right kernel, computed by fraction-free Gauss-Jordan.
    ///
    /// Each basis vector belongs to one free column `f`: it is nonzero at
    /// `f`, zero at every other free column, and carries the back-solved
    /// values at the pivot columns. Vectors are returned in increasing order
    /// of their free column.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        self.nullspace_with_free_columns().0
    }

    /// [`Matrix::nullspace`] together with the free column of each vector.
    pub fn nullspace_with_free_columns(&self) -> (Vec<Vec<T>>, Vec<usize>) {
        let (m, n) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivot_cols = Vec::new();
        let mut prev = T::one();
        let mut k = 0;
        for c in 0..n {
            if k == m {
                break;
            }
            let Some(p) = (k..m).find(|&r| !a[r * n + c].is_zero()) else {
                continue;
            };
            if p != k {
                for j in 0..n {
                    a.swap(p * n + j, k * n + j);
                }
            }
            let pivot_row: Vec<T> = a[k * n..(k + 1) * n].to_vec();
            for i in (0..m).filter(|&i| i != k) {
                let row = &mut a[i * n..(i + 1) * n];
                let aic = std::mem::replace(&mut row[c], T::zero());
                for j in (0..n).filter(|&j| j != c) {
                    row[j] = T::cross_div(&pivot_row[c], &row[j], &aic, &pivot_row[j], &prev);
                }
            }
            prev = pivot_row[c].clone();
            pivot_cols.push(c);
            k += 1;
        }
        // Every pivot entry now equals `prev`.
        let mut is_pivot = vec![false; n];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut v = vec![T::zero(); n];
                v[f] = prev.clone();
                for (i, &pc) in pivot_cols.iter().enumerate() {
                    v[pc] = -a[i * n + f].clone();
                }
                T::reduce_vector(&mut v);
                v
            })
            .collect();
        (basis, free)
    }

    /// The kernel parametrized by its free coordinates, from one forward
    /// elimination.
    pub fn kernel_map(&self) -> KernelMap<T> {
        let (e, u) = self.echelon_form();
        let free = (0..self.cols).filter(|c| e.pivot_cols.binary_search(c).is_err()).collect();
        KernelMap { u, pivots: e.pivot_cols, free, scale: e.last_pivot }
    }

    /// Basis of `{ w : wᵀ · self = 0 }`.
    pub fn left_nullspace(&self) -> Vec<Vec<T>> {
        self.transpose().nullspace()
    }
}

/// The kernel of a matrix as the image of its free coordinates.
///
/// Forward elimination leaves an upper-trapezoidal `U` with pivot columns
/// `P`, free columns `F` and last pivot `D = ±det` of the pivot block. A
/// vector `y` over `F` maps to the kernel vector `w` with `w_F = D y` and
/// `U[·,P] w_P = -U[·,F] w_F`, found by back substitution that stays
/// integral over the integers. The map is linear and bijective onto the
/// kernel.
#[derive(Clone)]
pub struct KernelMap<T> {
    u: Matrix<T>,
    pivots: Vec<usize>,
    free: Vec<usize>,
    scale: T,
}

impl<T: Scalar> KernelMap<T> {
    pub fn dimension(&self) -> usize {
        self.free.len()
    }

    pub fn pivot_columns(&self) -> &[usize] {
        &self.pivots
    }

    pub fn free_columns(&self) -> &[usize] {
        &self.free
    }

    /// The kernel vector for coefficients `y`, one per free column.
    pub fn vector(&self, y: &[T]) -> Vec<T> {
        assert_eq!(y.len(), self.free.len(), "one coefficient per free column");
        let mut w = vec![T::zero(); self.u.cols];
        for (&f, yf) in self.free.iter().zip(y) {
            w[f] = self.scale.mul_ref(yf);
        }
        for i in (0..self.pivots.len()).rev() {
            let row = self.u.row(i);
            let mut acc = T::zero();
            for &c in self.free.iter().chain(&self.pivots[i + 1..]) {
                if !row[c].is_zero() && !w[c].is_zero() {
                    acc = acc.add_ref(&row[c].mul_ref(&w[c]));
                }
            }
            w[self.pivots[i]] = -acc.div_exact(&row[self.pivots[i]]);
        }
        w
    }

    /// The kernel vector of the `k`-th free column alone. Its support is
    /// that column plus the pivot columns it depends on.
    pub fn basis_vector(&self, k: usize) -> Vec<T> {
        let mut y = vec![T::zero(); self.free.len()];
        y[k] = T::one();
        self.vector(&y)
    }
}

impl<T: Field> Matrix<T> {
    /// Reduced row echelon form by ordinary Gauss-Jordan elimination with
    /// field division, together with the pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut r = self.clone();
        let (m, n) = (r.rows, r.cols);
        let mut pivots = Vec::new();
        let mut k = 0;
        for c in 0..n {
            if k == m {
                break;
            }
            let Some(p) = (k..m).find(|&i| !r[(i, c)].is_zero()) else {
                continue;
            };
            for j in 0..n {
                r.data.swap(p * n + j, k * n + j);
            }
            let inv = T::one() / r[(k, c)].clone();
            for j in 0..n {
                r[(k, j)] = r[(k, j)].mul_ref(&inv);
            }
            for i in (0..m).filter(|&i| i != k) {
                let f = r[(i, c)].clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let delta = f.mul_ref(&r[(k, j)]);
                    r[(i, j)] = r[(i, j)].sub_ref(&delta);
                }
            }
            pivots.push(c);
            k += 1;
        }
        (r, pivots)
    }

    pub fn rank_by_gauss(&self) -> usize {
        self.rref().1.len()
    }

    /// Solves `self · x = b` for one solution, if any exists.
    pub fn solve(&self, b: &[T]) -> Result<Option<Vec<T>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { b[i].clone() }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![T::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(i, self.cols)].clone();
        }
        Ok(Some(x))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols].iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `true` when every entry of the vector is zero.
pub fn is_zero_vector<T: Scalar>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Dot product of two equal-length vectors.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc.add_ref(&x.mul_ref(y)))
}

#[cfg(test)]
mod tests {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::One;
    use proptest::prelude::*;

    use super::*;
    use crate::{IntegerMatrix, RationalMatrix};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Naive determinant by cofactor expansion along the first row.
    fn cofactor_det(m: &RationalMatrix) -> BigRational {
        let n = m.rows();
        if n == 0 {
            return BigRational::one();
        }
        let mut total = BigRational::zero();
        for j in 0..n {
            let rows: Vec<usize> = (1..n).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
            let minor = cofactor_det(&m.submatrix(&rows, &cols).unwrap());
            let term = m[(0, j)].clone() * minor;
            if j % 2 == 0 { total += term } else { total -= term }
        }
        total
    }

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
        assert_eq!(RationalMatrix::zeros(4, 7).rank(), 0);
        assert_eq!(RationalMatrix::zeros(0, 3).rank(), 0);
        assert!(RationalMatrix::identity(4).nullspace().is_empty());
    }

    #[test]
    fn one_by_two_kernel() {
        let m = RationalMatrix::from_i64_rows(&[&[1, 1]]);
        let k = m.nullspace();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], -k[0][1].clone());
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn determinants() {
        assert_eq!(RationalMatrix::identity(5).determinant().unwrap(), BigRational::one());
        let sing = RationalMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert!(sing.determinant().unwrap().is_zero());
        let (a, b, c, d) = (q(3, 7), q(-2, 5), q(11, 3), q(1, 9));
        let m = RationalMatrix::from_rows(2, vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]).unwrap();
        assert_eq!(m.determinant().unwrap(), a * d - b * c);
        let swap = RationalMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.determinant().unwrap(), -BigRational::one());
        assert!(matches!(
            RationalMatrix::zeros(2, 3).determinant(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn submatrix_extraction() {
        let m = RationalMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(m.submatrix(&[0, 1], &[0, 1, 2]).unwrap(), m);
        let one = m.submatrix(&[1], &[2]).unwrap();
        assert_eq!(one.rows(), 1);
        assert_eq!(one[(0, 0)], q(6, 1));
        assert!(matches!(m.submatrix(&[2], &[0]), Err(Error::IndexOutOfRange { index: 2, bound: 2 })));
        assert!(matches!(m.submatrix(&[0], &[3]), Err(Error::IndexOutOfRange { index: 3, bound: 3 })));
    }

    #[test]
    fn nonsingular_submatrix_of_identity_and_rank_one() {
        let (i, j) = RationalMatrix::identity(3).find_nonsingular_submatrix(2).unwrap();
        let det = RationalMatrix::identity(3).submatrix(&i, &j).unwrap().determinant().unwrap();
        assert!(det == BigRational::one() || det == -BigRational::one());

        let a = [0i64, 3, 0, -2];
        let outer = RationalMatrix::from_fn(4, 4, |r, c| BigRational::from_integer((a[r] * a[c]).into()));
        let (i, j) = outer.find_nonsingular_submatrix(1).unwrap();
        assert!(a[i[0]] != 0 && a[j[0]] != 0);
        assert!(matches!(outer.find_nonsingular_submatrix(2), Err(Error::RankDeficient { required: 2, actual: 1 })));
    }

    #[test]
    fn pivot_sets_give_nonzero_minor() {
        let m = RationalMatrix::from_i64_rows(&[&[0, 0, 1, 2], &[0, 0, 2, 4], &[1, 1, 0, 0], &[2, 2, 1, 3]]);
        let r = m.rank();
        assert_eq!(r, 3);
        let (i, j) = m.find_nonsingular_submatrix(r).unwrap();
        assert!(!m.submatrix(&i, &j).unwrap().determinant().unwrap().is_zero());
    }

    #[test]
    fn solve_finds_a_solution_or_none() {
        let m = RationalMatrix::from_i64_rows(&[&[1, 1], &[1, -1]]);
        assert_eq!(m.solve(&[q(3, 1), q(1, 1)]).unwrap(), Some(vec![q(2, 1), q(1, 1)]));
        let s = RationalMatrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        assert_eq!(s.solve(&[q(1, 1), q(3, 1)]).unwrap(), None);
    }

    fn small_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = RationalMatrix> {
        (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
            // Low-entropy entries make rank deficiency common.
            proptest::collection::vec((-3i64..=3, 1i64..=3), r * c).prop_map(move |v| {
                RationalMatrix::from_fn(r, c, |i, j| {
                    let (n, d) = v[i * c + j];
                    q(n, d)
                })
            })
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in small_matrix(6, 6)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn nullspace_is_a_kernel_basis(m in small_matrix(6, 7)) {
            let basis = m.nullspace();
            prop_assert_eq!(basis.len(), m.cols() - m.rank());
            for v in &basis {
                prop_assert!(is_zero_vector(&m.mul_vec(v).unwrap()));
            }
            if !basis.is_empty() {
                let stacked = RationalMatrix::from_rows(m.cols(), basis.clone()).unwrap();
                prop_assert_eq!(stacked.rank(), basis.len());
            }
        }

        #[test]
        fn determinant_vanishes_iff_rank_deficient(m in small_matrix(8, 8).prop_filter("square", |m| m.is_square())) {
            let det = m.determinant().unwrap();
            prop_assert_eq!(det.is_zero(), m.rank() < m.rows());
        }

        #[test]
        fn bareiss_agrees_with_gauss(v in proptest::collection::vec((-9i64..=9, 1i64..=5), 25)) {
            let m = RationalMatrix::from_fn(5, 5, |i, j| q(v[i * 5 + j].0, v[i * 5 + j].1));
            prop_assert_eq!(m.rank(), m.rank_by_gauss());
            prop_assert_eq!(m.determinant().unwrap(), cofactor_det(&m));
        }

        #[test]
        fn scaled_solve_matches_field_solve(v in proptest::collection::vec(-6i64..=6, 30)) {
            let a = IntegerMatrix::from_fn(5, 5, |i, j| BigInt::from(v[i * 5 + j]));
            let b = IntegerMatrix::from_fn(5, 1, |i, _| BigInt::from(v[25 + i]));
            match a.solve_scaled(&b).unwrap() {
                None => prop_assert!(a.rank() < 5),
                Some((d, x)) => {
                    prop_assert!(!d.is_zero());
                    let det = a.determinant().unwrap();
                    prop_assert_eq!(&d * &d, &det * &det);
                    prop_assert_eq!(a.mul(&x).unwrap(), b.scale(&d));
                    let xq = a.to_rational().solve(&b.to_rational().column(0)).unwrap().unwrap();
                    let dq = BigRational::from_integer(d);
                    for i in 0..5 {
                        prop_assert_eq!(&BigRational::from_integer(x[(i, 0)].clone()), &(xq[i].clone() * dq.clone()));
                    }
                }
            }
        }

        #[test]
        fn kernel_map_spans_the_kernel(v in proptest::collection::vec(-3i64..=3, 28), y in proptest::collection::vec(-50i64..=50, 7)) {
            let m = IntegerMatrix::from_fn(4, 7, |i, j| BigInt::from(v[i * 7 + j]));
            let k = m.kernel_map();
            prop_assert_eq!(k.dimension(), 7 - m.rank());
            let ys: Vec<BigInt> = y[..k.dimension()].iter().map(|&x| BigInt::from(x)).collect();
            let w = k.vector(&ys);
            prop_assert!(is_zero_vector(&m.mul_vec(&w).unwrap()));
            prop_assert_eq!(ys.iter().all(Zero::is_zero), is_zero_vector(&w));
            let basis: Vec<Vec<BigInt>> = (0..k.dimension()).map(|i| k.basis_vector(i)).collect();
            let stacked = IntegerMatrix::from_fn(basis.len(), 7, |i, j| basis[i][j].clone());
            prop_assert_eq!(stacked.rank(), k.dimension());
        }

        #[test]
        fn integer_and_rational_kernels_agree(v in proptest::collection::vec(-4i64..=4, 24)) {
            let mi = IntegerMatrix::from_fn(4, 6, |i, j| BigInt::from(v[i * 6 + j]));
            let mq = mi.to_rational();
            prop_assert_eq!(mi.rank(), mq.rank());
            let ki: Vec<Vec<BigRational>> = mi.nullspace().iter().map(|v| v.iter().map(Scalar::to_rational).collect()).collect();
            prop_assert_eq!(ki, mq.nullspace());
        }
    }
}
