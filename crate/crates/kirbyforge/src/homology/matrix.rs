//! Dense matrices over an exact ring.

use std::fmt;

use super::ring::{Domain, Ring};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<R> {
    pub rows: usize,
    pub cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![R::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = R::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.mul(&other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(&prod);
                }
            }
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let c = self.cols;
            self.data.swap(a * c + j, b * c + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let c = self.cols;
            self.data.swap(i * c + a, i * c + b);
        }
    }

    /// row[a] += q * row[b]
    pub fn add_row_mul(&mut self, a: usize, b: usize, q: &R) {
        for j in 0..self.cols {
            let t = self[(b, j)].mul(q);
            self[(a, j)] = self[(a, j)].add(&t);
        }
    }

    /// col[a] += q * col[b]
    pub fn add_col_mul(&mut self, a: usize, b: usize, q: &R) {
        for i in 0..self.rows {
            let t = self[(i, b)].mul(q);
            self[(i, a)] = self[(i, a)].add(&t);
        }
    }

    pub fn scale_row(&mut self, i: usize, q: &R) {
        for j in 0..self.cols {
            self[(i, j)] = self[(i, j)].mul(q);
        }
    }
}

impl<R: Domain> Matrix<R> {
    /// Exact determinant by Bareiss fraction-free elimination.  Panics if the
    /// ring divisions that Bareiss guarantees to be exact are not — that
    /// would be a bug, not an input condition.
    pub fn det(&self) -> R {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return R::one();
        }
        let mut m = self.clone();
        let mut sign_flip = false;
        let mut prev = R::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[(i, k)].is_zero()) else {
                    return R::zero();
                };
                m.swap_rows(k, p);
                sign_flip = !sign_flip;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let a = m[(k, k)].mul(&m[(i, j)]);
                    let b = m[(i, k)].mul(&m[(k, j)]);
                    let num = a.sub(&b);
                    m[(i, j)] = num
                        .exact_div(&prev)
                        .expect("Bareiss division must be exact");
                }
            }
            for i in k + 1..n {
                m[(i, k)] = R::zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        if sign_flip {
            d.neg()
        } else {
            d
        }
    }
}

impl<R> std::ops::Index<(usize, usize)> for Matrix<R> {
    type Output = R;
    fn index(&self, (i, j): (usize, usize)) -> &R {
        &self.data[i * self.cols + j]
    }
}

impl<R> std::ops::IndexMut<(usize, usize)> for Matrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut R {
        &mut self.data[i * self.cols + j]
    }
}

impl<R: fmt::Display> fmt::Display for Matrix<R> {
    /// Plain row-per-line format: entries separated by single spaces.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl<R: fmt::Debug> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "{:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(rows: Vec<Vec<i64>>) -> Matrix<BigInt> {
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    #[test]
    fn det_small() {
        assert_eq!(m(vec![vec![2, 0], vec![0, 3]]).det(), BigInt::from(6));
        assert_eq!(m(vec![vec![0, 1], vec![1, 0]]).det(), BigInt::from(-1));
        assert_eq!(
            m(vec![vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).det(),
            BigInt::from(0)
        );
        assert_eq!(m(vec![]).det(), BigInt::from(1));
    }
}
