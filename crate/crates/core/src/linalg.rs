//! Dense matrices and Gaussian elimination over any [`Scalar`] field.
//!
//! Ranks, kernels and spans are computed by exact elimination when the
//! backend is exact, so every dimension reported by the verifier is an exact
//! integer.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.data[r * self.cols..(r + 1) * self.cols]
                .iter()
                .map(|x| format!("{x:?}"))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { S::one() } else { S::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == m), "ragged rows");
        Matrix {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: &[S]) -> Self {
        let n = entries.len();
        Self::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { S::zero() })
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

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a.clone() - b.clone())
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if !b.is_zero() {
                        out[(r, c)] = out[(r, c)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..self.cols).all(|c| (self[(r, c)].clone() + self[(c, r)].clone()).is_zero()))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(S::abs_f64).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Restriction to the given row and column indices.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    pub fn rank(&self) -> usize {
        row_echelon(self.clone()).1.len()
    }

    /// Basis of the null space `{v : Av = 0}`.
    pub fn kernel(&self) -> Vec<Vec<S>> {
        let (reduced, pivots) = row_echelon(self.clone());
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -reduced[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `Ax = b` for square nonsingular `A`.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert!(self.is_square() && b.len() == self.rows, "shape mismatch");
        let n = self.rows;
        let augmented = Self::from_fn(n, n + 1, |r, c| if c < n { self[(r, c)].clone() } else { b[r].clone() });
        let (reduced, pivots) = row_echelon(augmented);
        if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some((0..n).map(|r| reduced[(r, n)].clone()).collect())
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(S::to_f64).collect(),
        }
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Reduced row echelon form; returns the reduced matrix and the pivot columns.
fn row_echelon<S: Scalar>(mut m: Matrix<S>) -> (Matrix<S>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols {
        if row == m.rows {
            break;
        }
        // largest magnitude pivot keeps the float backend stable
        let Some(pivot_row) = (row..m.rows)
            .filter(|&r| !m[(r, col)].is_zero())
            .max_by(|&a, &b| m[(a, col)].abs_f64().total_cmp(&m[(b, col)].abs_f64()))
        else {
            continue;
        };
        if pivot_row != row {
            for c in 0..m.cols {
                m.data.swap(pivot_row * m.cols + c, row * m.cols + c);
            }
        }
        let inv = m[(row, col)].inv().expect("pivot is nonzero");
        for c in col..m.cols {
            m[(row, c)] = m[(row, c)].clone() * inv.clone();
        }
        for r in 0..m.rows {
            if r == row || m[(r, col)].is_zero() {
                continue;
            }
            let factor = m[(r, col)].clone();
            for c in col..m.cols {
                let delta = factor.clone() * m[(row, c)].clone();
                m[(r, c)] = m[(r, c)].clone() - delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}

/// Incrementally maintained basis of a subspace of `S^n`.
///
/// Keeps the inserted independent vectors as given, together with a reduced
/// echelon copy used for membership tests.
#[derive(Clone, Debug)]
pub struct SpanBasis<S> {
    len: usize,
    originals: Vec<Vec<S>>,
    reduced: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> SpanBasis<S> {
    pub fn new(len: usize) -> Self {
        SpanBasis {
            len,
            originals: Vec::new(),
            reduced: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.originals.len()
    }

    pub fn vectors(&self) -> &[Vec<S>] {
        &self.originals
    }

    fn residual(&self, v: &[S]) -> Vec<S> {
        let mut v = v.to_vec();
        for (p, row) in &self.reduced {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.residual(v).iter().all(S::is_zero)
    }

    /// Adds `v` if it is independent of the current basis; returns whether it was added.
    pub fn insert(&mut self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.len, "vector length mismatch");
        let mut r = self.residual(v);
        let Some(p) = (0..self.len)
            .filter(|&i| !r[i].is_zero())
            .max_by(|&a, &b| r[a].abs_f64().total_cmp(&r[b].abs_f64()))
        else {
            return false;
        };
        let inv = r[p].inv().expect("nonzero pivot");
        for x in r.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.reduced.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        self.reduced.push((p, r));
        self.originals.push(v.to_vec());
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Surd;

    fn m(rows: &[&[i64]]) -> Matrix<Surd> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Surd::integer(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn kernel_and_rank() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn solve_exact() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = a.solve(&[Surd::integer(3), Surd::integer(5)]).unwrap();
        assert_eq!(x, vec![Surd::frac(4, 5), Surd::frac(7, 5)]);
        assert!(m(&[&[1, 2], &[2, 4]]).solve(&[Surd::one(), Surd::one()]).is_none());
    }

    #[test]
    fn span_basis_membership() {
        let mut span = SpanBasis::<Surd>::new(3);
        assert!(span.insert(&[Surd::integer(1), Surd::integer(1), Surd::zero()]));
        assert!(span.insert(&[Surd::zero(), Surd::integer(1), Surd::integer(1)]));
        assert!(!span.insert(&[Surd::integer(1), Surd::integer(2), Surd::integer(1)]));
        assert!(span.contains(&[Surd::integer(2), Surd::zero(), Surd::integer(-2)]));
        assert!(!span.contains(&[Surd::integer(1), Surd::zero(), Surd::zero()]));
        assert_eq!(span.dim(), 2);
    }

    #[test]
    fn commutator_of_rotations() {
        let a = m(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 0]]);
        let b = m(&[&[0, 0, -1], &[0, 0, 0], &[1, 0, 0]]);
        let c = a.commutator(&b);
        assert!(c.is_antisymmetric());
        assert_eq!(c, m(&[&[0, 0, 0], &[0, 0, -1], &[0, 1, 0]]));
    }
}
