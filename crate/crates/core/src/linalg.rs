//! Exact integer vectors and matrices.
//!
//! Everything here works over `i64` with every intermediate product widened to
//! `i128`. A result that does not fit back into `i64` is reported as
//! [`LinalgError::Overflow`]; nothing wraps silently.
//!
//! Convention: a [`BasisChange`] stores the new basis vectors as the *columns*
//! of its matrix, written in the old coordinates. Determinants of vector
//! tuples are likewise taken with the vectors as columns.

use std::fmt;
use std::ops::Index;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows of a matrix must all have the same length")]
    Ragged,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("index {0} selected twice")]
    DuplicateIndex(usize),
    #[error("minor selects {rows} rows but {cols} columns")]
    SelectionMismatch { rows: usize, cols: usize },
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(i64),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

fn narrow(x: i128) -> Result<i64> {
    i64::try_from(x).map_err(|_| LinalgError::Overflow)
}

/// A coordinate sequence of exact integers.
///
/// Ordering is lexicographic on the coordinates, which is what the vector-set
/// file format and every deterministic enumeration in this crate rely on.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntVector(Vec<i64>);

impl IntVector {
    pub fn new(coords: Vec<i64>) -> Self {
        IntVector(coords)
    }

    pub fn zero(n: usize) -> Self {
        IntVector(vec![0; n])
    }

    /// The `i`-th unit vector (0-based) of dimension `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        IntVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Number of nonzero coordinates.
    pub fn support_size(&self) -> usize {
        self.0.iter().filter(|&&c| c != 0).count()
    }

    pub fn checked_neg(&self) -> Result<IntVector> {
        self.0
            .iter()
            .map(|c| c.checked_neg().ok_or(LinalgError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(IntVector)
    }

    pub fn checked_add(&self, other: &IntVector) -> Result<IntVector> {
        self.zip_with(other, i64::checked_add)
    }

    pub fn checked_sub(&self, other: &IntVector) -> Result<IntVector> {
        self.zip_with(other, i64::checked_sub)
    }

    fn zip_with(&self, other: &IntVector, f: fn(i64, i64) -> Option<i64>) -> Result<IntVector> {
        if self.dim() != other.dim() {
            return Err(LinalgError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| f(a, b).ok_or(LinalgError::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(IntVector)
    }

    /// Drop the coordinate at `index`, giving a vector one dimension smaller.
    pub fn without_coord(&self, index: usize) -> IntVector {
        let mut c = self.0.clone();
        c.remove(index);
        IntVector(c)
    }
}

impl Index<usize> for IntVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for IntVector {
    fn from(v: Vec<i64>) -> Self {
        IntVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for IntVector {
    fn from(v: [i64; N]) -> Self {
        IntVector(v.to_vec())
    }
}

/// Space-separated coordinates, the same layout as one line of a vector-set file.
impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Ragged);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data: rows.iter().flatten().copied().collect() })
    }

    /// Matrix whose columns are the given vectors. Needs `dim` in case the list is empty.
    pub fn from_columns(dim: usize, columns: &[IntVector]) -> Result<Self> {
        let mut m = IntMatrix::zeros(dim, columns.len());
        for (c, v) in columns.iter().enumerate() {
            if v.dim() != dim {
                return Err(LinalgError::DimensionMismatch { expected: dim, found: v.dim() });
            }
            for r in 0..dim {
                m.set(r, c, v[r]);
            }
        }
        Ok(m)
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

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: i64) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> IntVector {
        IntVector((0..self.rows).map(|r| self.get(r, c)).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn checked_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    acc += i128::from(self.get(r, k)) * i128::from(other.get(k, c));
                }
                out.set(r, c, narrow(acc)?);
            }
        }
        Ok(out)
    }

    pub fn checked_mul_vec(&self, v: &IntVector) -> Result<IntVector> {
        if self.cols != v.dim() {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.dim() });
        }
        (0..self.rows)
            .map(|r| {
                let acc: i128 =
                    self.row(r).iter().zip(v.coords()).map(|(&a, &b)| i128::from(a) * i128::from(b)).sum();
                narrow(acc)
            })
            .collect::<Result<Vec<_>>>()
            .map(IntVector)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i64> {
        if !self.is_square() {
            return Err(LinalgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        bareiss_det(self.rows, self.data.iter().map(|&x| i128::from(x)).collect())
    }

    /// Determinant of the submatrix on the selected rows and columns.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Result<i64> {
        self.submatrix(rows, cols)?.det()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<IntMatrix> {
        if rows.len() != cols.len() {
            return Err(LinalgError::SelectionMismatch { rows: rows.len(), cols: cols.len() });
        }
        check_selection(rows, self.rows)?;
        check_selection(cols, self.cols)?;
        let mut sub = IntMatrix::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                sub.set(i, j, self.get(r, c));
            }
        }
        Ok(sub)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> Result<usize> {
        echelon_rank(self.rows, self.cols, self.data.iter().map(|&x| i128::from(x)).collect())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            writeln!(f, "{}", IntVector(self.row(r).to_vec()))?;
        }
        Ok(())
    }
}

fn check_selection(indices: &[usize], bound: usize) -> Result<()> {
    let mut seen = vec![false; bound];
    for &i in indices {
        if i >= bound {
            return Err(LinalgError::IndexOutOfRange { index: i, bound });
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(LinalgError::DuplicateIndex(i));
        }
    }
    Ok(())
}

// Entries stay minors of the input, so they are bounded by Hadamard's
// inequality; we still check every step because intermediates are products.
fn bareiss_det(n: usize, mut a: Vec<i128>) -> Result<i64> {
    if n == 0 {
        return Ok(1);
    }
    let mut sign: i128 = 1;
    let mut prev: i128 = 1;
    for k in 0..n - 1 {
        if a[k * n + k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                return Ok(0);
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let lead = a[i * n + k];
            for j in k + 1..n {
                let num = pivot
                    .checked_mul(a[i * n + j])
                    .zip(lead.checked_mul(a[k * n + j]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or(LinalgError::Overflow)?;
                a[i * n + j] = num / prev;
            }
            a[i * n + k] = 0;
        }
        prev = pivot;
    }
    narrow(sign * a[n * n - 1])
}

fn echelon_rank(m: usize, n: usize, mut a: Vec<i128>) -> Result<usize> {
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..n {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&i| a[i * n + c] != 0) else {
            continue;
        };
        if p != rank {
            for j in 0..n {
                a.swap(rank * n + j, p * n + j);
            }
        }
        let pivot = a[rank * n + c];
        for i in rank + 1..m {
            let lead = a[i * n + c];
            for j in c + 1..n {
                let num = pivot
                    .checked_mul(a[i * n + j])
                    .zip(lead.checked_mul(a[rank * n + j]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or(LinalgError::Overflow)?;
                a[i * n + j] = num / prev;
            }
            a[i * n + c] = 0;
        }
        prev = pivot;
        rank += 1;
    }
    Ok(rank)
}

/// Determinant of a tuple of vectors, taken as the columns of a square matrix.
pub fn det_of(vectors: &[IntVector]) -> Result<i64> {
    let dim = vectors.first().map_or(0, IntVector::dim);
    IntMatrix::from_columns(dim, vectors)?.det()
}

/// Rank over the rationals of a list of same-dimension vectors.
pub fn rank(vectors: &[IntVector]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let n = first.dim();
    let mut data = Vec::with_capacity(vectors.len() * n);
    for v in vectors {
        if v.dim() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, found: v.dim() });
        }
        data.extend(v.coords().iter().map(|&x| i128::from(x)));
    }
    echelon_rank(vectors.len(), n, data)
}

/// An invertible change of basis of a free Z-module: an n×n integer matrix of
/// determinant ±1 whose columns are the new basis in old coordinates.
///
/// The exact inverse is computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisChange {
    matrix: IntMatrix,
    inverse: IntMatrix,
    det: i64,
}

impl BasisChange {
    pub fn new(matrix: IntMatrix) -> Result<Self> {
        let det = matrix.det()?;
        if det.abs() != 1 {
            return Err(LinalgError::NotUnimodular(det));
        }
        let inverse = unimodular_inverse(&matrix, det)?;
        Ok(BasisChange { matrix, inverse, det })
    }

    /// Basis change whose new basis vectors are `columns`, in order.
    pub fn from_columns(columns: &[IntVector]) -> Result<Self> {
        let dim = columns.first().map_or(0, IntVector::dim);
        if columns.len() != dim {
            return Err(LinalgError::NotSquare { rows: dim, cols: columns.len() });
        }
        BasisChange::new(IntMatrix::from_columns(dim, columns)?)
    }

    pub fn identity(n: usize) -> Self {
        let m = IntMatrix::identity(n);
        BasisChange { matrix: m.clone(), inverse: m, det: 1 }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &IntMatrix {
        &self.inverse
    }

    /// The `i`-th new basis vector, in old coordinates.
    pub fn basis_vector(&self, i: usize) -> IntVector {
        self.matrix.column(i)
    }

    pub fn basis_vectors(&self) -> Vec<IntVector> {
        (0..self.dim()).map(|i| self.basis_vector(i)).collect()
    }

    pub fn inverse(&self) -> BasisChange {
        BasisChange { matrix: self.inverse.clone(), inverse: self.matrix.clone(), det: self.det }
    }

    /// `self` followed by `next`, where `next` is written in the coordinates
    /// of `self`'s basis. The product matrix is `self · next`.
    pub fn then(&self, next: &BasisChange) -> Result<BasisChange> {
        Ok(BasisChange {
            matrix: self.matrix.checked_mul(&next.matrix)?,
            inverse: next.inverse.checked_mul(&self.inverse)?,
            det: self.det * next.det,
        })
    }

    /// Coordinates of `v` (given in old coordinates) with respect to the new basis.
    pub fn express(&self, v: &IntVector) -> Result<IntVector> {
        self.inverse.checked_mul_vec(v)
    }

    /// Old coordinates of the vector whose new-basis coordinates are `coords`.
    pub fn apply(&self, coords: &IntVector) -> Result<IntVector> {
        self.matrix.checked_mul_vec(coords)
    }
}

// inverse = det · adj(m) since det = ±1; adjugate entries are signed
// (n-1)-minors, which keeps the computation exact without any division.
fn unimodular_inverse(m: &IntMatrix, det: i64) -> Result<IntMatrix> {
    let n = m.rows();
    let mut inv = IntMatrix::zeros(n, n);
    if n == 1 {
        inv.set(0, 0, det);
        return Ok(inv);
    }
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let cof = m.minor(&rows, &cols)?;
            let signed = if (i + j) % 2 == 0 { cof } else { -cof };
            inv.set(i, j, signed * det);
        }
    }
    Ok(inv)
}

/// Free-function form of [`BasisChange::inverse`] that also validates a raw matrix.
pub fn inverse_unimodular(m: &IntMatrix) -> Result<IntMatrix> {
    Ok(BasisChange::new(m.clone())?.inverse)
}

/// Coordinates of `v` in the basis `b`; applying `b` to the result gives `v` back.
pub fn express_in_basis(v: &IntVector, b: &BasisChange) -> Result<IntVector> {
    if v.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch { expected: b.dim(), found: v.dim() });
    }
    b.express(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    // Laplace expansion along the first row; test-only oracle.
    fn cofactor_det(a: &IntMatrix) -> i64 {
        let n = a.rows();
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return a.get(0, 0);
        }
        (0..n)
            .map(|c| {
                let rows: Vec<usize> = (1..n).collect();
                let cols: Vec<usize> = (0..n).filter(|&k| k != c).collect();
                let sub = a.submatrix(&rows, &cols).unwrap();
                let s = if c % 2 == 0 { 1 } else { -1 };
                s * a.get(0, c) * cofactor_det(&sub)
            })
            .sum()
    }

    #[test]
    fn determinants_of_forbidden_configurations() {
        assert_eq!(m(&[&[1, 1], &[1, -1]]).det(), Ok(-2));
        assert_eq!(m(&[&[1, 1, 0], &[-1, 0, 1], &[0, -1, 1]]).det(), Ok(2));
        assert_eq!(m(&[&[1, 1, 1, 1], &[-1, -1, 0, 0], &[-1, 0, -1, 0], &[-1, 0, 0, -1]]).det(), Ok(2));
        for n in 0..7 {
            assert_eq!(IntMatrix::identity(n).det(), Ok(1));
        }
    }

    #[test]
    fn det_needs_square() {
        assert_eq!(IntMatrix::zeros(2, 3).det(), Err(LinalgError::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn det_pivots_through_zero_leading_entry() {
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), Ok(-1));
        assert_eq!(m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]).det(), Ok(-1));
        assert_eq!(m(&[&[0, 0], &[0, 5]]).det(), Ok(0));
    }

    #[test]
    fn det_matches_cofactor_expansion_exhaustively_for_2x2_and_3x3() {
        // all 2x2 with entries in -2..=2
        let vals = [-2i64, -1, 0, 1, 2];
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        let mat = m(&[&[a, b], &[c, d]]);
                        assert_eq!(mat.det().unwrap(), a * d - b * c);
                    }
                }
            }
        }
        // 3x3 with entries in -1..=1 (19683 matrices)
        for code in 0..3i64.pow(9) {
            let mut x = code;
            let mut rows = vec![vec![0; 3]; 3];
            for r in rows.iter_mut() {
                for e in r.iter_mut() {
                    *e = x % 3 - 1;
                    x /= 3;
                }
            }
            let mat = IntMatrix::from_rows(&rows).unwrap();
            assert_eq!(mat.det().unwrap(), cofactor_det(&mat), "{rows:?}");
        }
    }

    #[test]
    fn det_overflow_is_reported() {
        let big = i64::MAX / 2;
        assert_eq!(m(&[&[big, -big], &[big, big]]).det(), Err(LinalgError::Overflow));
    }

    #[test]
    fn rank_examples() {
        let vs: Vec<IntVector> = vec![[1, 0].into(), [0, 1].into(), [1, -1].into()];
        assert_eq!(rank(&vs), Ok(2));
        assert_eq!(rank(&[]), Ok(0));
        let a2: Vec<IntVector> = vec![
            [1, 0].into(),
            [-1, 0].into(),
            [0, 1].into(),
            [0, -1].into(),
            [1, -1].into(),
            [-1, 1].into(),
        ];
        assert_eq!(rank(&a2), Ok(2));
        let mixed: Vec<IntVector> = vec![[1, 0].into(), [1, 0, 0].into()];
        assert!(matches!(rank(&mixed), Err(LinalgError::DimensionMismatch { .. })));
        let line: Vec<IntVector> = vec![[2, 4, 6].into(), [-1, -2, -3].into(), [0, 0, 0].into()];
        assert_eq!(rank(&line), Ok(1));
    }

    #[test]
    fn minors() {
        let a = m(&[&[3, 5], &[7, 2]]);
        assert_eq!(a.minor(&[0], &[1]), Ok(5));
        assert_eq!(a.minor(&[0, 1], &[0, 1]), a.det());
        // component matrix of {e_i + e_j, e_i - e_j} inside a rank-4 frame, rows i=1, j=3
        let comp = IntMatrix::from_columns(4, &[[0, 1, 0, 1].into(), [0, 1, 0, -1].into()]).unwrap();
        assert_eq!(comp.minor(&[1, 3], &[0, 1]), Ok(-2));
        assert!(matches!(a.minor(&[0, 2], &[0, 1]), Err(LinalgError::IndexOutOfRange { .. })));
        assert_eq!(a.minor(&[0, 0], &[0, 1]), Err(LinalgError::DuplicateIndex(0)));
        assert!(matches!(a.minor(&[0], &[0, 1]), Err(LinalgError::SelectionMismatch { .. })));
    }

    #[test]
    fn pij_is_an_involution() {
        // e_2 -> e_1 - e_2 in a rank-3 frame (0-based: column 2 becomes e_1 - e_2)
        let p = m(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, -1]]);
        let b = BasisChange::new(p.clone()).unwrap();
        assert_eq!(b.inverse_matrix(), &p);
        assert_eq!(p.checked_mul(&p).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn inverse_of_identity_and_rejects_non_unimodular() {
        assert_eq!(inverse_unimodular(&IntMatrix::identity(4)), Ok(IntMatrix::identity(4)));
        assert_eq!(inverse_unimodular(&m(&[&[2, 0], &[0, 1]])), Err(LinalgError::NotUnimodular(2)));
        assert_eq!(inverse_unimodular(&m(&[&[1, 1], &[1, 1]])), Err(LinalgError::NotUnimodular(0)));
    }

    #[test]
    fn express_in_basis_gives_coordinates() {
        let v: IntVector = [1, -1, 0].into();
        let b = BasisChange::from_columns(&[[1, 0, 0].into(), [1, -1, 0].into(), [0, 0, 1].into()]).unwrap();
        assert_eq!(express_in_basis(&v, &b), Ok([0, 1, 0].into()));
        assert_eq!(express_in_basis(&v, &BasisChange::identity(3)), Ok(v.clone()));
        assert!(matches!(express_in_basis(&[1, 2].into(), &b), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn vector_arithmetic_is_checked() {
        let a: IntVector = [i64::MAX, 0].into();
        assert_eq!(a.checked_add(&[1, 0].into()), Err(LinalgError::Overflow));
        assert_eq!(IntVector::from([i64::MIN]).checked_neg(), Err(LinalgError::Overflow));
        assert_eq!(IntVector::from([1, 2, 3]).to_string(), "1 2 3");
    }
}
