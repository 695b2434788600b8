//! Smith normal form and the module decompositions read off from it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::matrix::ExactMatrix;
use crate::error::{Error, Result};

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal in divisibility order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: ExactMatrix,
    pub s: ExactMatrix,
    pub v: ExactMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// Nonzero diagonal entries of `S`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).to_integer().expect("integer")).collect()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Option<Vec<Vec<BigInt>>>,
    v: Option<Vec<Vec<BigInt>>>,
    rows: usize,
    cols: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            self.a.swap(i, j);
            if let Some(u) = &mut self.u {
                u.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i != j {
            for r in &mut self.a {
                r.swap(i, j);
            }
            if let Some(v) = &mut self.v {
                for r in v.iter_mut() {
                    r.swap(i, j);
                }
            }
        }
    }

    /// row_i -= q·row_j
    fn row_axpy(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let t = &self.a[j][c] * q;
            self.a[i][c] -= t;
        }
        if let Some(u) = &mut self.u {
            for c in 0..self.rows {
                let t = &u[j][c] * q;
                u[i][c] -= t;
            }
        }
    }

    /// col_i -= q·col_j
    fn col_axpy(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in 0..self.rows {
            let t = &self.a[r][j] * q;
            self.a[r][i] -= t;
        }
        if let Some(v) = &mut self.v {
            for r in v.iter_mut() {
                let t = &r[j] * q;
                r[i] -= t;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = &mut self.u {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn run(&mut self) -> usize {
        let mut t = 0;
        while t < self.rows.min(self.cols) {
            let Some((pi, pj)) = self.min_pivot(t) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].div_floor(&self.a[t][t]);
                        self.row_axpy(i, t, &q);
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].div_floor(&self.a[t][t]);
                        self.col_axpy(j, t, &q);
                    }
                }
                let mut smaller = None;
                for i in t + 1..self.rows {
                    if !self.a[i][t].is_zero() && smaller.is_none_or(|(a, b): (usize, usize)| self.a[i][t].abs() < self.a[a][b].abs()) {
                        smaller = Some((i, t));
                    }
                }
                for j in t + 1..self.cols {
                    if !self.a[t][j].is_zero() && smaller.is_none_or(|(a, b): (usize, usize)| self.a[t][j].abs() < self.a[a][b].abs()) {
                        smaller = Some((t, j));
                    }
                }
                if let Some((i, j)) = smaller {
                    self.swap_rows(t, i);
                    self.swap_cols(t, j);
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..self.rows).find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.row_axpy(t, i, &-BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
        t
    }
}

fn int_input(a: &ExactMatrix) -> Result<Vec<Vec<BigInt>>> {
    a.int_rows()
}

/// Smith normal form with unimodular transforms.
pub fn snf(a: &ExactMatrix) -> Result<SnfResult> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work { a: int_input(a)?, u: Some(identity(rows)), v: Some(identity(cols)), rows, cols };
    let rank = w.run();
    Ok(SnfResult {
        u: ExactMatrix::from_int_rows(&w.u.take().expect("tracked"), rows),
        s: ExactMatrix::from_int_rows(&w.a, cols),
        v: ExactMatrix::from_int_rows(&w.v.take().expect("tracked"), cols),
        rank,
    })
}

/// Nonzero Smith diagonal without tracking the transforms.
pub fn smith_diagonal(a: &ExactMatrix) -> Result<Vec<BigInt>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut w = Work { a: int_input(a)?, u: None, v: None, rows, cols };
    let rank = w.run();
    Ok((0..rank).map(|i| w.a[i][i].clone()).collect())
}

/// `ℤ^free_rank ⊕ ⊕ ℤ/fᵢ` with `fᵢ | fᵢ₊₁` and every `fᵢ > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct ModuleDecomposition {
    pub free_rank: usize,
    #[serde(serialize_with = "big_list")]
    pub invariant_factors: Vec<BigInt>,
}

fn big_list<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl ModuleDecomposition {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        ModuleDecomposition { free_rank: rank, invariant_factors: Vec::new() }
    }

    /// Canonical form of `ℤ^free ⊕ ⊕ ℤ/oᵢ` for arbitrary positive orders.
    pub fn from_cyclic_orders(free_rank: usize, orders: impl IntoIterator<Item = BigInt>) -> Self {
        let mut o: Vec<BigInt> = orders.into_iter().map(|x| x.abs()).filter(|x| !x.is_one()).collect();
        let mut free = free_rank;
        free += o.iter().filter(|x| x.is_zero()).count();
        o.retain(|x| !x.is_zero());
        for i in 0..o.len() {
            for j in i + 1..o.len() {
                let g = o[i].gcd(&o[j]);
                let l = o[i].lcm(&o[j]);
                o[i] = g;
                o[j] = l;
            }
        }
        o.retain(|x| !x.is_one());
        ModuleDecomposition { free_rank: free, invariant_factors: o }
    }

    pub fn from_i64(free_rank: usize, factors: &[i64]) -> Self {
        Self::from_cyclic_orders(free_rank, factors.iter().map(|&f| BigInt::from(f)))
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// Torsion submodule.
    pub fn torsion(&self) -> Self {
        ModuleDecomposition { free_rank: 0, invariant_factors: self.invariant_factors.clone() }
    }

    /// Direct sum.
    pub fn sum(&self, other: &Self) -> Self {
        Self::from_cyclic_orders(
            self.free_rank + other.free_rank,
            self.invariant_factors.iter().chain(&other.invariant_factors).cloned(),
        )
    }

    pub fn factors_string(&self) -> String {
        let f: Vec<String> = self.invariant_factors.iter().map(|x| x.to_string()).collect();
        format!("[{}]", f.join(", "))
    }
}

impl fmt::Display for ModuleDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.invariant_factors.iter().map(|x| format!("Z/{x}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Cokernel `ℤ^rows / A·ℤ^cols`.
pub fn cokernel(a: &ExactMatrix) -> Result<ModuleDecomposition> {
    let d = smith_diagonal(a)?;
    Ok(ModuleDecomposition::from_cyclic_orders(a.rows() - d.len(), d))
}

fn check_modulus(n: &BigInt) -> Result<()> {
    if *n < BigInt::from(2) {
        return Err(Error::BadModulus(n.to_string()));
    }
    Ok(())
}

/// Kernel of `A` acting on `(ℤ/n)^cols`.
pub fn kernel_mod_n(a: &ExactMatrix, n: &BigInt) -> Result<ModuleDecomposition> {
    check_modulus(n)?;
    let d = smith_diagonal(a)?;
    let trailing = a.cols() - d.len();
    let orders = d.iter().map(|x| x.gcd(n)).chain(std::iter::repeat_n(n.clone(), trailing));
    Ok(ModuleDecomposition::from_cyclic_orders(0, orders))
}

/// Kernel of `A` acting on `(ℚ/ℤ)^cols`, which is finite exactly when `A`
/// has full column rank.
pub fn kernel_q_mod_z_torsion(a: &ExactMatrix) -> Result<ModuleDecomposition> {
    let d = smith_diagonal(a)?;
    if d.len() < a.cols() {
        return Err(Error::DivisibleKernel { rank: d.len(), cols: a.cols() });
    }
    Ok(ModuleDecomposition::from_cyclic_orders(0, d))
}

/// Generators of the kernel of `A` on `(ℤ/n)^cols`, one per nontrivial
/// cyclic summand, each returned with its order.
pub fn kernel_generators_mod_n(a: &ExactMatrix, n: &BigInt) -> Result<Vec<(Vec<BigInt>, BigInt)>> {
    check_modulus(n)?;
    let r = snf(a)?;
    let diag = r.diagonal();
    let mut out = Vec::new();
    for j in 0..a.cols() {
        let dj = diag.get(j).cloned().unwrap_or_else(BigInt::zero);
        let g = dj.gcd(n);
        if g.is_one() {
            continue;
        }
        let scale = n / &g;
        let col: Vec<BigInt> = (0..a.cols())
            .map(|i| (r.v.get(i, j).to_integer().expect("integer") * &scale).mod_floor(n))
            .collect();
        out.push((col, g));
    }
    Ok(out)
}
