//! Characteristic polynomials and a few univariate helpers over ℚ.
//!
//! Polynomials are coefficient vectors with the leading coefficient first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::{bareiss, ExactMatrix};
use crate::error::{Error, Result};

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
    }
    p
}

/// `det(zI − A)`, monic, by interpolation at `z = 0..=n`.
pub fn charpoly(a: &ExactMatrix) -> Result<Vec<BigInt>> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    let base = a.int_rows()?;
    let samples: Vec<BigInt> = (0..=n)
        .map(|k| {
            let m: Vec<Vec<BigInt>> = (0..n)
                .map(|i| (0..n).map(|j| {
                    let diag = if i == j { BigInt::from(k) } else { BigInt::zero() };
                    diag - &base[i][j]
                }).collect())
                .collect();
            bareiss(m, n).1.unwrap_or_else(BigInt::one)
        })
        .collect();
    // Newton divided differences on nodes 0..=n.
    let mut coef: Vec<BigRational> = samples.iter().cloned().map(BigRational::from_integer).collect();
    for level in 1..=n {
        for i in (level..=n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / BigRational::from_integer(BigInt::from(level));
        }
    }
    // Expand Newton form, ascending coefficients.
    let mut poly = vec![BigRational::zero(); n + 1];
    for i in (0..=n).rev() {
        let mut next = vec![BigRational::zero(); n + 1];
        for d in 0..n {
            if !poly[d].is_zero() {
                next[d + 1] += &poly[d];
                next[d] -= &poly[d] * BigRational::from_integer(BigInt::from(i));
            }
        }
        next[0] += &coef[i];
        poly = next;
    }
    poly.reverse();
    poly.into_iter()
        .map(|c| if c.is_integer() { Ok(c.to_integer()) } else { Err(Error::Internal("non-integral charpoly".into())) })
        .collect()
}

pub fn to_rational(p: &[BigInt]) -> Vec<BigRational> {
    p.iter().cloned().map(BigRational::from_integer).collect()
}

/// Evaluate at a rational point.
pub fn evaluate(p: &[BigInt], x: &BigRational) -> BigRational {
    p.iter().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
}

/// Quotient and remainder of `a / b` over ℚ.
pub fn div_rem(a: &[BigRational], b: &[BigRational]) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let b = trim(b.to_vec());
    if b.len() == 1 && b[0].is_zero() {
        return Err(Error::NotInvertible("zero polynomial".into()));
    }
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return Ok((vec![BigRational::zero()], r));
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    for i in 0..q.len() {
        let c = &r[i] / &b[0];
        for (j, bj) in b.iter().enumerate() {
            r[i + j] = &r[i + j] - &c * bj;
        }
        q[i] = c;
    }
    let rem = trim(r[q.len()..].to_vec());
    Ok((q, if rem.is_empty() { vec![BigRational::zero()] } else { rem }))
}

/// Whether `b` divides `a` over ℚ.
pub fn divides(b: &[BigRational], a: &[BigRational]) -> Result<bool> {
    let (_, r) = div_rem(a, b)?;
    Ok(r.iter().all(|c| c.is_zero()))
}

/// `p(s·z)` for a scalar `s`.
pub fn scale_argument(p: &[BigInt], s: &BigInt) -> Vec<BigInt> {
    let deg = p.len().saturating_sub(1);
    p.iter().enumerate().map(|(i, c)| c * num_traits::pow(s.clone(), deg - i)).collect()
}

/// Multiplicity of the rational root `x` in `p`.
pub fn root_multiplicity(p: &[BigInt], x: &BigRational) -> usize {
    let mut q = to_rational(p);
    let lin = vec![BigRational::one(), -x.clone()];
    let mut k = 0;
    loop {
        if q.iter().all(|c| c.is_zero()) {
            return k;
        }
        let (quot, rem) = div_rem(&q, &lin).expect("nonzero divisor");
        if !rem.iter().all(|c| c.is_zero()) {
            return k;
        }
        q = quot;
        k += 1;
    }
}
