//! Small exact linear algebra: ranks over Q and square integer matrices.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Rank of a dense rational matrix by Gaussian elimination.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = m[rank][col].recip();
        for c in col..ncols {
            m[rank][c] = &m[rank][c] * &inv;
        }
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..ncols {
                    let delta = &factor * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

/// Square matrix over the integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::pre("matrix rows must form a square"));
        }
        Ok(Self {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds the matrix whose `k`-th column is `cols[k]`.
    pub fn from_columns(cols: &[Vec<i64>]) -> Result<Self> {
        let n = cols.len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::pre("columns must form a square matrix"));
        }
        let mut m = Self::zeros(n);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[i64]>::to_vec)
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::pre("matrix sizes differ"));
        }
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc: i64 = 0;
                for k in 0..self.n {
                    let term = self
                        .get(i, k)
                        .checked_mul(other.get(k, j))
                        .ok_or(Error::Overflow("integer matrix product"))?;
                    acc = acc
                        .checked_add(term)
                        .ok_or(Error::Overflow("integer matrix product"))?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n).try_fold(0i64, |acc, k| {
                    self.get(i, k)
                        .checked_mul(v[k])
                        .and_then(|t| acc.checked_add(t))
                        .ok_or(Error::Overflow("matrix-vector product"))
                })
            })
            .collect()
    }

    /// Exact determinant (Bareiss elimination over big integers).
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }

    /// Inverse of a unimodular matrix; fails when the determinant is not a unit.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            BigRational::from_integer(self.get(i, j).into())
                        } else if j - n == i {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or_else(|| Error::cert("matrix is singular"))?;
            a.swap(col, pivot);
            let inv = a[col][col].recip();
            for c in 0..2 * n {
                a[col][c] = &a[col][c] * &inv;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for c in 0..2 * n {
                        let d = &f * &a[col][c];
                        a[r][c] -= d;
                    }
                }
            }
        }
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let v = &a[i][n + j];
                if !v.is_integer() {
                    return Err(Error::cert(
                        "inverse is not integral; matrix is not unimodular",
                    ));
                }
                let v = v
                    .to_integer()
                    .to_i64()
                    .ok_or(Error::Overflow("matrix inverse"))?;
                out.set(i, j, v);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(i64::to_string).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[vec![q(0), q(0)]]), 0);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(2), q(4)]]), 1);
        assert_eq!(rank(&[vec![q(1), q(2)], vec![q(3), q(4)]]), 2);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = IntMatrix::from_rows(vec![vec![2, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntMatrix::identity(2));
        let singular = IntMatrix::from_rows(vec![vec![2, 4], vec![1, 2]]).unwrap();
        assert_eq!(singular.determinant(), BigInt::from(0));
        assert!(IntMatrix::from_rows(vec![vec![2, 0], vec![0, 1]])
            .unwrap()
            .inverse()
            .is_err());
    }

    #[test]
    fn determinant_with_pivoting() {
        let m = IntMatrix::from_rows(vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 3]]).unwrap();
        assert_eq!(m.determinant(), BigInt::from(-3));
    }
}
