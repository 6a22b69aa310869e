//! Dense exact matrices and Gaussian elimination over a [`Field`].

use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{rat, Field, Rat};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

/// Result of reducing a matrix to row echelon form.
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Shape-explicit constructor, so that `0 x n` matrices keep their width.
    pub fn from_rows_shaped(rows: usize, cols: usize, data: Vec<Vec<Rat>>) -> Self {
        assert_eq!(data.len(), rows);
        assert!(data.iter().all(|row| row.len() == cols), "ragged rows");
        Matrix { rows, cols, data: data.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    pub fn from_cols(rows: usize, cols: &[Vec<Rat>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[Rat]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rat> {
        self.data.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn reduce(&self, f: Field) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| f.reduce(x.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix, f: Field) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        if f != Field::Rational {
            out = out.reduce(f);
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat], f: Field) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let s = self.row(i).iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b);
                f.reduce(s)
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix, f: Field) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in sum");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix, f: Field) -> Matrix {
        assert_eq!(self.shape(), other.shape(), "shape mismatch in difference");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat, f: Field) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<Vec<Rat>> = idx.iter().map(|&j| self.col(j)).collect();
        Matrix::from_cols(self.rows, &cols)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_rows_shaped(idx.len(), self.cols, idx.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut cols: Vec<Vec<Rat>> = (0..self.cols).map(|j| self.col(j)).collect();
        cols.extend((0..other.cols).map(|j| other.col(j)));
        Matrix::from_cols(self.rows, &cols)
    }

    /// Reduced row echelon form; pivots are taken column by column in order.
    pub fn echelon(&self, f: Field) -> Echelon {
        let mut m = self.reduce(f);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(&m[(r, c)]).expect("nonzero pivot");
            for j in c..m.cols {
                let v = f.mul(&m[(r, j)], &inv);
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = m[(i, c)].clone();
                for j in c..m.cols {
                    let v = f.sub(&m[(i, j)], &f.mul(&factor, &m[(r, j)]));
                    m[(i, j)] = v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, f: Field) -> usize {
        self.echelon(f).pivots.len()
    }

    /// Indices of the first maximal set of linearly independent columns.
    pub fn pivot_columns(&self, f: Field) -> Vec<usize> {
        self.echelon(f).pivots
    }

    /// Basis of the right kernel, as the columns of the returned matrix.
    pub fn kernel(&self, f: Field) -> Matrix {
        let Echelon { reduced, pivots } = self.echelon(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis[(fc, k)] = Rat::one();
            for (r, &pc) in pivots.iter().enumerate() {
                basis[(pc, k)] = f.neg(&reduced[(r, fc)]);
            }
        }
        basis
    }

    pub fn inverse(&self, f: Field) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let Echelon { reduced, pivots } = aug.echelon(f);
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        Some(reduced.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn det(&self, f: Field) -> Rat {
        assert!(self.is_square());
        let mut m = self.reduce(f);
        let n = self.rows;
        let mut det = Rat::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Rat::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = f.neg(&det);
            }
            let pivot = m[(c, c)].clone();
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot).expect("nonzero pivot");
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let factor = f.mul(&m[(i, c)], &inv);
                for j in c..n {
                    let v = f.sub(&m[(i, j)], &f.mul(&factor, &m[(c, j)]));
                    m[(i, j)] = v;
                }
            }
        }
        det
    }

    /// Solves `self * X = rhs`; `None` when inconsistent. Picks the solution
    /// with zero free variables.
    pub fn solve(&self, rhs: &Matrix, f: Field) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = self.hstack(rhs);
        let Echelon { reduced, pivots } = aug.echelon(f);
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(pc, j)] = reduced[(r, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    /// `selfᵀ · g · other`, the Gram matrix of two column sets.
    pub fn gram_of(&self, g: &Matrix, other: &Matrix, f: Field) -> Matrix {
        self.transpose().mul(&g.mul(other, f), f)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rat;
    fn index(&self, (r, c): (usize, usize)) -> &Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rat {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}
