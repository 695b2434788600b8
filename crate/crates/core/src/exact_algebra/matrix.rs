//! Dense exact matrices and fraction-free elimination.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::{Ring, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix whose entries all share one ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    ring: Ring,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    /// Build from row-major entries; every entry must lie in `ring`.
    pub fn new(rows: usize, cols: usize, ring: Ring, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if let Some(bad) = entries.iter().find(|e| e.ring() != ring) {
            return Err(Error::RingMismatch(format!("entry {bad} is not in {ring}")));
        }
        Ok(ExactMatrix { rows, cols, ring, entries })
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        Self::new(rows, cols, Ring::Integers, values.iter().map(|&v| Scalar::int(v)).collect())
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let entries = rows.iter().flat_map(|r| r.iter().cloned().map(Scalar::Int)).collect();
        ExactMatrix { rows: rows.len(), cols, ring: Ring::Integers, entries }
    }

    pub fn from_rat_rows(rows: &[Vec<BigRational>], cols: usize) -> Self {
        let entries = rows.iter().flat_map(|r| r.iter().cloned().map(Scalar::Rat)).collect();
        ExactMatrix { rows: rows.len(), cols, ring: Ring::Rationals, entries }
    }

    pub fn zeros(rows: usize, cols: usize, ring: Ring) -> Self {
        ExactMatrix { rows, cols, ring, entries: vec![Scalar::zero_in(ring); rows * cols] }
    }

    pub fn identity(n: usize, ring: Ring) -> Self {
        let mut m = Self::zeros(n, n, ring);
        for i in 0..n {
            m.entries[i * n + i] = Scalar::one_in(ring);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) -> Result<()> {
        self.entries[i * self.cols + j] = value.convert(self.ring)?;
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        ExactMatrix { rows: self.cols, cols: self.rows, ring: self.ring, entries }
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.ring != other.ring {
            return Err(Error::RingMismatch(format!("{} times {}", self.ring, other.ring)));
        }
        let mut out = Self::zeros(self.rows, other.cols, self.ring);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] = out.entries[idx].add(&a.mul(other.get(k, j))?)?;
                }
            }
        }
        Ok(out)
    }

    /// Integer entries as nested rows.
    pub fn int_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        if self.ring != Ring::Integers {
            return Err(Error::NotInteger);
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_integer().expect("integer ring")).collect())
            .collect())
    }

    /// Rational entries as nested rows; integers are embedded.
    pub fn rat_rows(&self) -> Result<Vec<Vec<BigRational>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(self.get(i, j).to_rational()?);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Convert an integral rational matrix to an integer one.
    pub fn to_integer_matrix(&self) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.to_integer().map(Scalar::Int)).collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, ring: Ring::Integers, entries })
    }

    pub fn convert(&self, ring: Ring) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.convert(ring)).collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, ring, entries })
    }

    /// Rows `rs` and columns `cs` of this matrix.
    pub fn submatrix(&self, rs: &[usize], cs: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rs.len() * cs.len());
        for &i in rs {
            for &j in cs {
                entries.push(self.get(i, j).clone());
            }
        }
        ExactMatrix { rows: rs.len(), cols: cs.len(), ring: self.ring, entries }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Clear denominators row by row so that ranks and zero patterns survive.
pub(crate) fn clear_denominators(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Bareiss elimination in place. Returns the rank and, for square input,
/// the determinant.
pub(crate) fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> (usize, Option<BigInt>) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut sign = 1i32;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        if p != rank {
            a.swap(p, rank);
            sign = -sign;
        }
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &a[rank][c] * &a[i][j] - &a[i][c] * &a[rank][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    let det = if rows == cols {
        Some(if rank < rows { BigInt::zero() } else if sign < 0 { -prev } else { prev })
    } else {
        None
    };
    (rank, det)
}

/// Rank over ℚ of an integer or rational matrix.
pub fn rank_over_q(a: &ExactMatrix) -> Result<usize> {
    let rows = clear_denominators(&a.rat_rows()?);
    Ok(bareiss(rows, a.cols()).0)
}

/// Determinant over ℚ of a square integer or rational matrix.
pub fn determinant(a: &ExactMatrix) -> Result<BigRational> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let rat = a.rat_rows()?;
    let mut scale = BigInt::one();
    for r in &rat {
        scale *= r.iter().fold(BigInt::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
    }
    let (_, det) = bareiss(clear_denominators(&rat), a.cols());
    Ok(BigRational::new(det.unwrap_or_else(BigInt::one), scale))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_mixed_rings() {
        let e = vec![Scalar::int(1), Scalar::rat(1, 2)];
        assert!(ExactMatrix::new(1, 2, Ring::Integers, e).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_over_q(&ExactMatrix::zeros(3, 4, Ring::Integers)).unwrap(), 0);
        assert_eq!(rank_over_q(&ExactMatrix::identity(5, Ring::Integers)).unwrap(), 5);
        let c4 = ExactMatrix::from_i64(4, 4, &[2, -1, 0, -1, -1, 2, -1, 0, 0, -1, 2, -1, -1, 0, -1, 2]).unwrap();
        assert_eq!(rank_over_q(&c4).unwrap(), 3);
    }

    #[test]
    fn determinant_with_fractions() {
        let m = ExactMatrix::new(2, 2, Ring::Rationals, vec![Scalar::rat(1, 2), Scalar::rat(1, 3), Scalar::rat(1, 4), Scalar::rat(1, 5)]).unwrap();
        assert_eq!(determinant(&m).unwrap(), BigRational::new(1.into(), 10.into()) - BigRational::new(1.into(), 12.into()));
        let s = ExactMatrix::from_i64(2, 2, &[0, 1, 1, 0]).unwrap();
        assert_eq!(determinant(&s).unwrap(), BigRational::from_integer((-1).into()));
    }

    #[test]
    fn product_and_transpose() {
        let a = ExactMatrix::from_i64(2, 3, &[1, 2, 3, 4, 5, 6]).unwrap();
        let p = a.mul(&a.transpose()).unwrap();
        assert_eq!(p, ExactMatrix::from_i64(2, 2, &[14, 32, 32, 77]).unwrap());
    }
}
