//! Networks: a ∂-graph with edge weights `w` and diagonal offsets `d`,
//! the generalized Laplacian they define, and harmonic-function modules.

use num_bigint::BigInt;

use crate::exact_algebra::{kernel_mod_n, kernel_q_mod_z_torsion, rank_over_q, ExactMatrix, ModuleDecomposition, Ring, Scalar};
use crate::error::{Error, Result};
use crate::partial_graph::{DGraphMorphism, EdgeImage, PartialGraph};

/// Values of a function `V → M`, indexed by vertex id.
pub type VertexFunction = Vec<Scalar>;

/// An R-network over ℤ, ℚ or ℤ/n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    graph: PartialGraph,
    w: Vec<Scalar>,
    d: Vec<Scalar>,
    ring: Ring,
}

fn common_ring(values: &[Scalar]) -> Result<Ring> {
    let mut ring = Ring::Integers;
    for v in values {
        ring = match (ring, v.ring()) {
            (a, b) if a == b => a,
            (Ring::Integers, b) => b,
            (Ring::Rationals, Ring::Integers) => Ring::Rationals,
            (Ring::Residues(n), Ring::Integers) => Ring::Residues(n),
            (a, b) => return Err(Error::RingMismatch(format!("weights mix {a} and {b}"))),
        };
    }
    Ok(ring)
}

impl Network {
    /// Build from per-dart weights and per-vertex offsets.
    pub fn new(graph: PartialGraph, w: Vec<Scalar>, d: Vec<Scalar>) -> Result<Self> {
        graph.validate()?;
        if w.len() != graph.num_darts() || d.len() != graph.num_vertices() {
            return Err(Error::InvalidNetwork("weight or offset table has the wrong length".into()));
        }
        let all: Vec<Scalar> = w.iter().chain(&d).cloned().collect();
        let ring = common_ring(&all)?;
        let w = w.iter().map(|x| x.convert(ring)).collect::<Result<Vec<_>>>()?;
        let d = d.iter().map(|x| x.convert(ring)).collect::<Result<Vec<_>>>()?;
        for e in 0..graph.num_darts() {
            if w[e] != w[graph.rev(e)] {
                return Err(Error::InvalidNetwork(format!("weight of dart {e} differs from its reversal")));
            }
        }
        Ok(Network { graph, w, d, ring })
    }

    /// Weights given per edge in [`PartialGraph::edges`] order.
    pub fn from_edge_weights(graph: PartialGraph, edge_w: Vec<Scalar>, d: Vec<Scalar>) -> Result<Self> {
        let edges = graph.edges();
        if edge_w.len() != edges.len() {
            return Err(Error::InvalidNetwork("one weight per edge expected".into()));
        }
        let mut w = vec![Scalar::int(0); graph.num_darts()];
        for (e, x) in edges.into_iter().zip(edge_w) {
            w[graph.rev(e)] = x.clone();
            w[e] = x;
        }
        Self::new(graph, w, d)
    }

    /// Standard Laplacian: unit weights, zero offsets.
    pub fn standard(graph: PartialGraph) -> Result<Self> {
        let w = vec![Scalar::int(1); graph.num_darts()];
        let d = vec![Scalar::int(0); graph.num_vertices()];
        Self::new(graph, w, d)
    }

    /// Weights `−1` and offsets `deg(x)`, so that `L` is the adjacency operator.
    pub fn adjacency(graph: PartialGraph) -> Result<Self> {
        let w = vec![Scalar::int(-1); graph.num_darts()];
        let d = (0..graph.num_vertices()).map(|x| Scalar::int(graph.degree(x) as i64)).collect();
        Self::new(graph, w, d)
    }

    pub fn graph(&self) -> &PartialGraph {
        &self.graph
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn weight(&self, e: usize) -> &Scalar {
        &self.w[e]
    }

    pub fn weights(&self) -> &[Scalar] {
        &self.w
    }

    pub fn offset(&self, x: usize) -> &Scalar {
        &self.d[x]
    }

    pub fn offsets(&self) -> &[Scalar] {
        &self.d
    }

    /// Same weights on a graph with a different boundary.
    pub fn with_graph(&self, graph: PartialGraph) -> Result<Self> {
        Self::new(graph, self.w.clone(), self.d.clone())
    }

    /// Every weight is a unit of the ring.
    pub fn is_unit_weight(&self) -> bool {
        self.w.iter().all(|x| x.is_unit())
    }

    pub fn has_zero_offsets(&self) -> bool {
        self.d.iter().all(|x| x.is_zero())
    }

    /// Entry of the Laplacian: coefficient of `y` in `L x`.
    fn entry(&self, y: usize, x: usize) -> Scalar {
        let g = &self.graph;
        let mut s = if x == y { self.d[x].clone() } else { Scalar::zero_in(self.ring) };
        for &e in g.out(x) {
            if x == y {
                s = s.add(&self.w[e]).expect("one ring");
            }
            if g.head(e) == y {
                s = s.sub(&self.w[e]).expect("one ring");
            }
        }
        s
    }

    /// Rows `rows`, columns `cols` of the Laplacian matrix.
    pub fn laplacian_matrix(&self, rows: &[usize], cols: &[usize]) -> Result<ExactMatrix> {
        let n = self.graph.num_vertices();
        if let Some(&bad) = rows.iter().chain(cols).find(|&&v| v >= n) {
            return Err(Error::UnknownVertex(bad));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &y in rows {
            for &x in cols {
                entries.push(self.entry(y, x));
            }
        }
        ExactMatrix::new(rows.len(), cols.len(), self.ring, entries)
    }

    pub fn full_laplacian(&self) -> ExactMatrix {
        let all: Vec<usize> = (0..self.graph.num_vertices()).collect();
        self.laplacian_matrix(&all, &all).expect("valid ids")
    }

    /// The `V × V°` block presenting Υ.
    pub fn interior_block(&self) -> ExactMatrix {
        let all: Vec<usize> = (0..self.graph.num_vertices()).collect();
        self.laplacian_matrix(&all, &self.graph.interior_vertices()).expect("valid ids")
    }

    /// `(Lu)(x) = d(x)u(x) + Σ w(e)(u(x) − u(e₋))`.
    pub fn apply(&self, u: &[Scalar]) -> Result<VertexFunction> {
        let g = &self.graph;
        if u.len() != g.num_vertices() {
            return Err(Error::Dimension("function does not cover every vertex".into()));
        }
        (0..g.num_vertices())
            .map(|x| {
                let mut s = self.d[x].mul(&u[x])?;
                for &e in g.out(x) {
                    s = s.add(&self.w[e].mul(&u[x].sub(&u[g.head(e)])?)?)?;
                }
                Ok(s)
            })
            .collect()
    }

    /// `Lu` vanishes at every interior vertex.
    pub fn is_harmonic(&self, u: &[Scalar]) -> Result<bool> {
        let lu = self.apply(u)?;
        Ok(self.graph.interior_vertices().iter().all(|&x| lu[x].is_zero()))
    }

    /// Harmonic with `u` and `Lu` both zero on the boundary.
    pub fn in_u0(&self, u: &[Scalar]) -> Result<bool> {
        let lu = self.apply(u)?;
        Ok(lu.iter().all(|x| x.is_zero()) && self.graph.boundary_vertices().iter().all(|&x| u[x].is_zero()))
    }

    fn require_rational(&self) -> Result<()> {
        if let Ring::Residues(_) = self.ring {
            return Err(Error::RingMismatch("this operation needs integer or rational weights".into()));
        }
        Ok(())
    }

    fn require_integer(&self) -> Result<()> {
        if self.ring != Ring::Integers {
            return Err(Error::RingMismatch("this operation needs integer weights".into()));
        }
        Ok(())
    }

    /// `L` restricted to interior chains is injective over ℚ.
    pub fn is_nondegenerate(&self) -> Result<bool> {
        self.require_rational()?;
        Ok(rank_over_q(&self.interior_block())? == self.graph.interior_vertices().len())
    }

    /// U₀(G, L, ℤ/n).
    pub fn u0_mod_n(&self, n: &BigInt) -> Result<ModuleDecomposition> {
        self.require_integer()?;
        kernel_mod_n(&self.interior_block(), n)
    }

    /// U₀(G, L, ℚ/ℤ), finite when the network is non-degenerate.
    pub fn u0_q_mod_z(&self) -> Result<ModuleDecomposition> {
        self.require_integer()?;
        kernel_q_mod_z_torsion(&self.interior_block()).map_err(|e| match e {
            Error::DivisibleKernel { .. } => Error::Degenerate("U0 over Q/Z has a divisible part".into()),
            other => other,
        })
    }
}

/// Check the weight and offset conditions for a network morphism.
pub fn validate_network_morphism(f: &DGraphMorphism, n1: &Network, n2: &Network) -> Result<Vec<usize>> {
    if f.source != *n1.graph() || f.target != *n2.graph() {
        return Err(Error::InvalidMorphism("morphism graphs differ from the network graphs".into()));
    }
    let deg = f.validate()?;
    for (e, im) in f.dart_map.iter().enumerate() {
        if let EdgeImage::Dart(t) = *im {
            if n1.weight(e) != &n2.weight(t).convert(n1.ring())? {
                return Err(Error::InvalidMorphism(format!("weight of dart {e} differs from the weight of its image {t}")));
            }
        }
    }
    for x in n1.graph().interior_vertices() {
        let want = n2.offset(f.vertex_map[x]).mul(&Scalar::int(deg[x] as i64))?.convert(n1.ring())?;
        if n1.offset(x) != &want {
            return Err(Error::InvalidMorphism(format!("offset at vertex {x} is not deg times the offset of its image")));
        }
    }
    Ok(deg)
}

/// `f* u = u ∘ f` for `u` harmonic on the target.
pub fn pullback_harmonic(f: &DGraphMorphism, n1: &Network, n2: &Network, u: &[Scalar]) -> Result<VertexFunction> {
    validate_network_morphism(f, n1, n2)?;
    if !n2.is_harmonic(u)? {
        return Err(Error::NotHarmonic("input to the pullback".into()));
    }
    let v: VertexFunction = f.vertex_map.iter().map(|&y| u[y].clone()).collect();
    if !n1.is_harmonic(&v)? {
        return Err(Error::Internal("pullback is not harmonic".into()));
    }
    Ok(v)
}

/// `(f_* u)(y) = Σ_{x ∈ f⁻¹(y)} deg(f, x) u(x)` for `u ∈ U₀` of the source.
pub fn pushforward_u0(f: &DGraphMorphism, n1: &Network, n2: &Network, u: &[Scalar]) -> Result<VertexFunction> {
    let deg = validate_network_morphism(f, n1, n2)?;
    if !n1.in_u0(u)? {
        return Err(Error::NotHarmonic("input to the pushforward is not in U0".into()));
    }
    let zero = u.first().map(|s| Scalar::zero_in(s.ring())).unwrap_or_else(|| Scalar::zero_in(n2.ring()));
    let mut v = vec![zero; n2.graph().num_vertices()];
    for (x, &y) in f.vertex_map.iter().enumerate() {
        v[y] = v[y].add(&u[x].mul(&Scalar::int(deg[x] as i64))?)?;
    }
    if !n2.in_u0(&v)? {
        return Err(Error::Internal("pushforward left U0".into()));
    }
    Ok(v)
}

/// Pushforward along a covering map, `(f_* u)(y) = Σ_{x ∈ f⁻¹(y)} u(x)`,
/// defined on all harmonic functions.
pub fn pushforward_covering(f: &DGraphMorphism, n1: &Network, n2: &Network, u: &[Scalar]) -> Result<VertexFunction> {
    validate_network_morphism(f, n1, n2)?;
    if !f.is_covering_map()? {
        return Err(Error::Precondition("morphism is not a covering map".into()));
    }
    if !n1.is_harmonic(u)? {
        return Err(Error::NotHarmonic("input to the pushforward".into()));
    }
    let zero = u.first().map(|s| Scalar::zero_in(s.ring())).unwrap_or_else(|| Scalar::zero_in(n2.ring()));
    let mut v = vec![zero; n2.graph().num_vertices()];
    for (x, &y) in f.vertex_map.iter().enumerate() {
        v[y] = v[y].add(&u[x])?;
    }
    if !n2.is_harmonic(&v)? {
        return Err(Error::Internal("pushforward is not harmonic".into()));
    }
    Ok(v)
}

/// Residues of `values` modulo `n`.
pub fn residues(values: &[i64], n: u64) -> Result<VertexFunction> {
    values.iter().map(|&v| Scalar::residue(v, n)).collect()
}

/// Whether every entry of a function is zero.
pub fn is_zero_function(u: &[Scalar]) -> bool {
    u.iter().all(|x| x.is_zero())
}

/// Integer scalars from machine integers.
pub fn integers(values: &[i64]) -> VertexFunction {
    values.iter().map(|&v| Scalar::int(v)).collect()
}
