//! The fundamental module Υ, its reduced form, critical groups and
//! spectral invariants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact_algebra::{
    charpoly, cokernel, determinant, divides, rank_over_q, scale_argument, to_rational, ExactMatrix, ModuleDecomposition, Ring, Scalar,
};
use crate::network::{validate_network_morphism, Network};
use crate::partial_graph::{DGraphMorphism, PartialGraph};

/// Υ together with its presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpsilonReport {
    pub decomposition: ModuleDecomposition,
    /// The `V × V°` block of the Laplacian.
    pub presentation: ExactMatrix,
    pub nondegenerate: bool,
}

fn require_integer(n: &Network) -> Result<()> {
    if n.ring() != Ring::Integers {
        return Err(Error::RingMismatch("integer weights required".into()));
    }
    Ok(())
}

/// Υ(G, L) = ℤV / L(ℤV°).
pub fn upsilon(n: &Network) -> Result<UpsilonReport> {
    require_integer(n)?;
    let presentation = n.interior_block();
    let decomposition = cokernel(&presentation)?;
    let nondegenerate = n.is_nondegenerate()?;
    let boundary = n.graph().boundary_vertices().len();
    if nondegenerate && decomposition.free_rank != boundary {
        return Err(Error::Internal(format!("free rank {} differs from |boundary| = {boundary}", decomposition.free_rank)));
    }
    Ok(UpsilonReport { decomposition, presentation, nondegenerate })
}

/// Υ̃(G, L) = ker ε / L(ℤV°) in the basis `xᵢ − x₀`, `x₀` the lowest id.
pub fn upsilon_reduced(n: &Network) -> Result<ModuleDecomposition> {
    require_integer(n)?;
    if !n.has_zero_offsets() {
        return Err(Error::Precondition("the reduced module needs d = 0".into()));
    }
    let g = n.graph();
    if g.num_vertices() == 0 {
        return Ok(ModuleDecomposition::trivial());
    }
    let rows: Vec<usize> = (1..g.num_vertices()).collect();
    cokernel(&n.laplacian_matrix(&rows, &g.interior_vertices())?)
}

fn require_connected_boundaryless(g: &PartialGraph) -> Result<()> {
    if !g.boundary_vertices().is_empty() {
        return Err(Error::Precondition("graph must have no boundary vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Precondition("graph must be connected".into()));
    }
    Ok(())
}

/// Crit(G) of a connected graph without boundary, computed as the torsion
/// of Υ and again with one vertex moved to the boundary.
pub fn critical_group(g: &PartialGraph) -> Result<ModuleDecomposition> {
    require_connected_boundaryless(g)?;
    let direct = upsilon(&Network::standard(g.clone())?)?.decomposition.torsion();
    if g.num_vertices() == 0 {
        return Ok(direct);
    }
    let pinned = upsilon(&Network::standard(g.with_boundary(&[0]))?)?.decomposition;
    if pinned.free_rank != 1 || pinned.torsion() != direct {
        return Err(Error::Internal(format!("critical group {direct} disagrees with the pinned computation {pinned}")));
    }
    Ok(direct)
}

/// The three descriptions of the torsion of Υ for a non-degenerate network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionViews {
    pub upsilon_torsion: ModuleDecomposition,
    pub transpose_cokernel: ModuleDecomposition,
    pub u0_q_mod_z: ModuleDecomposition,
}

impl TorsionViews {
    pub fn agree(&self) -> bool {
        self.upsilon_torsion == self.transpose_cokernel && self.transpose_cokernel == self.u0_q_mod_z
    }
}

pub fn torsion_views(n: &Network) -> Result<TorsionViews> {
    require_integer(n)?;
    if !n.is_nondegenerate()? {
        return Err(Error::Degenerate("torsion comparison needs a non-degenerate network".into()));
    }
    let block = n.interior_block();
    Ok(TorsionViews {
        upsilon_torsion: cokernel(&block)?.torsion(),
        transpose_cokernel: cokernel(&block.transpose())?,
        u0_q_mod_z: n.u0_q_mod_z()?,
    })
}

/// Whether the three torsion descriptions coincide.
pub fn torsion_crosscheck(n: &Network) -> Result<bool> {
    Ok(torsion_views(n)?.agree())
}

/// Number of spanning trees, as a reduced Laplacian determinant.
pub fn spanning_tree_count(g: &PartialGraph) -> Result<BigInt> {
    require_connected_boundaryless(g)?;
    if g.num_vertices() <= 1 {
        return Ok(BigInt::one());
    }
    let n = Network::standard(g.clone())?;
    let rest: Vec<usize> = (1..g.num_vertices()).collect();
    Ok(determinant(&n.laplacian_matrix(&rest, &rest)?)?.to_integer())
}

/// Dimension of the λ-eigenspace of the full Laplacian over ℚ.
pub fn eigen_multiplicity(n: &Network, lambda: &BigRational) -> Result<usize> {
    let l = n.full_laplacian();
    let size = l.rows();
    let mut shifted = ExactMatrix::zeros(size, size, Ring::Rationals);
    for i in 0..size {
        for j in 0..size {
            let mut v = l.get(i, j).to_rational()?;
            v = -v;
            if i == j {
                v += lambda;
            }
            shifted.set(i, j, Scalar::Rat(v))?;
        }
    }
    Ok(size - rank_over_q(&shifted)?)
}

/// `det(zI − L)` with the leading coefficient first.
pub fn laplacian_charpoly(n: &Network) -> Result<Vec<BigInt>> {
    require_integer(n)?;
    charpoly(&n.full_laplacian())
}

/// For a morphism of boundaryless networks with `deg(f, x) = k` everywhere,
/// test `det(zI − L₂) | det(kzI − L₁)`.
pub fn charpoly_divisibility_check(f: &DGraphMorphism, n1: &Network, n2: &Network) -> Result<bool> {
    let deg = validate_network_morphism(f, n1, n2)?;
    if !n1.graph().boundary_vertices().is_empty() || !n2.graph().boundary_vertices().is_empty() {
        return Err(Error::Precondition("graphs must have no boundary vertices".into()));
    }
    let k = deg.first().copied().unwrap_or(1);
    if deg.iter().any(|&d| d != k) {
        return Err(Error::Precondition(format!("degree is not constant: {deg:?}")));
    }
    let p1 = scale_argument(&laplacian_charpoly(n1)?, &BigInt::from(k));
    let p2 = laplacian_charpoly(n2)?;
    divides(&to_rational(&p2), &to_rational(&p1))
}
