//! Exact linear algebra over ℤ, ℚ and ℤ/n.

mod matrix;
mod poly;
mod scalar;
mod snf;

pub use matrix::{determinant, rank_over_q, ExactMatrix};
pub use poly::{charpoly, div_rem, divides, evaluate, root_multiplicity, scale_argument, to_rational};
pub use scalar::{Ring, Scalar};
pub use snf::{
    cokernel, kernel_generators_mod_n, kernel_mod_n, kernel_q_mod_z_torsion, smith_diagonal, snf, ModuleDecomposition,
    SnfResult,
};

