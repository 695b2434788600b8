//! Harmonic continuation along layerable filtrations.
//!
//! Boundary data `(u ∘ ℓ; Lu ∘ ℓ)` is carried from one stage to the next by
//! symplectic `2m × 2m` matrices. Index arguments are 0-based.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact_algebra::{kernel_mod_n, kernel_q_mod_z_torsion, ExactMatrix, ModuleDecomposition, Ring, Scalar};
use crate::fundamental::eigen_multiplicity;
use crate::layering::{interiorize, reduce_to_flower, standard_form_filtration, Filtration, LayerOp};
use crate::network::{Network, VertexFunction};
use crate::partial_graph::PartialGraph;

/// Which display a transform instantiates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformKind {
    Initial(Vec<BigRational>),
    Spike { index: usize, w: BigRational, d: BigRational },
    Edge { i: usize, j: usize, w: BigRational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryTransform {
    pub kind: TransformKind,
    pub matrix: ExactMatrix,
}

impl BoundaryTransform {
    /// Half the side length.
    pub fn size(&self) -> usize {
        self.matrix.rows() / 2
    }
}

fn identity_rows(n: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

fn check_index(m: usize, i: usize) -> Result<()> {
    if i >= m {
        return Err(Error::Dimension(format!("index {i} out of range for {m} boundary vertices")));
    }
    Ok(())
}

/// `[[I, w⁻¹E_jj], [dE_jj, I + dw⁻¹E_jj]]`.
pub fn spike_transform(m: usize, index: usize, w: &BigRational, d: &BigRational) -> Result<BoundaryTransform> {
    check_index(m, index)?;
    if w.is_zero() {
        return Err(Error::NotInvertible("spike weight is zero".into()));
    }
    let winv = w.recip();
    let mut rows = identity_rows(2 * m);
    rows[index][m + index] = winv.clone();
    rows[m + index][index] = d.clone();
    rows[m + index][m + index] += d * &winv;
    Ok(BoundaryTransform {
        kind: TransformKind::Spike { index, w: w.clone(), d: d.clone() },
        matrix: ExactMatrix::from_rat_rows(&rows, 2 * m),
    })
}

/// `[[I, 0], [w(E_ii + E_jj − E_ij − E_ji), I]]`.
pub fn edge_transform(m: usize, i: usize, j: usize, w: &BigRational) -> Result<BoundaryTransform> {
    check_index(m, i)?;
    check_index(m, j)?;
    if i == j {
        return Err(Error::Precondition("edge transform needs two distinct indices".into()));
    }
    if w.is_zero() {
        return Err(Error::NotInvertible("edge weight is zero".into()));
    }
    let mut rows = identity_rows(2 * m);
    rows[m + i][i] += w;
    rows[m + j][j] += w;
    rows[m + i][j] -= w;
    rows[m + j][i] -= w;
    Ok(BoundaryTransform {
        kind: TransformKind::Edge { i, j, w: w.clone() },
        matrix: ExactMatrix::from_rat_rows(&rows, 2 * m),
    })
}

/// `[[I, 0], [D, I]]`.
pub fn initial_transform(d: &[BigRational]) -> BoundaryTransform {
    let m = d.len();
    let mut rows = identity_rows(2 * m);
    for (i, di) in d.iter().enumerate() {
        rows[m + i][i] = di.clone();
    }
    BoundaryTransform { kind: TransformKind::Initial(d.to_vec()), matrix: ExactMatrix::from_rat_rows(&rows, 2 * m) }
}

/// `J = [[0, −I], [I, 0]]`.
pub fn symplectic_form(m: usize) -> ExactMatrix {
    let mut rows = vec![vec![BigRational::zero(); 2 * m]; 2 * m];
    for i in 0..m {
        rows[i][m + i] = -BigRational::one();
        rows[m + i][i] = BigRational::one();
    }
    ExactMatrix::from_rat_rows(&rows, 2 * m)
}

/// Exact test of `Tᵗ J T = J`.
pub fn is_symplectic(t: &ExactMatrix) -> Result<bool> {
    if !t.is_square() || !t.rows().is_multiple_of(2) {
        return Ok(false);
    }
    let t = t.convert(Ring::Rationals)?;
    let j = symplectic_form(t.rows() / 2);
    Ok(t.transpose().mul(&j)?.mul(&t)? == j)
}

fn rational(s: &Scalar) -> Result<BigRational> {
    s.to_rational()
}

/// A network with a standard-form filtration of its graph and the
/// transforms `T₀, T₁, …, Tₙ` (initial first, then one per adjoined op).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuationPlan {
    pub network: Network,
    pub filtration: Filtration,
    pub transforms: Vec<BoundaryTransform>,
}

impl ContinuationPlan {
    pub fn new(network: &Network, filtration: &Filtration) -> Result<Self> {
        if &filtration.parent != network.graph() {
            return Err(Error::Precondition("filtration is not of the network's graph".into()));
        }
        filtration.validate()?;
        let g = network.graph();
        let m = filtration.boundary_size();
        let d0: Vec<BigRational> = filtration.labels[0].iter().map(|&x| rational(network.offset(x))).collect::<Result<_>>()?;
        let mut transforms = vec![initial_transform(&d0)];
        for (j, &op) in filtration.ops.iter().enumerate() {
            let lo = &filtration.labels[j];
            let pos = |v: usize| lo.iter().position(|&x| x == v).expect("labelled boundary vertex");
            let t = match op {
                LayerOp::ContractBoundarySpike(e) => {
                    spike_transform(m, pos(g.head(e)), &rational(network.weight(e))?, &rational(network.offset(g.tail(e)))?)?
                }
                LayerOp::DeleteBoundaryEdge(e) => edge_transform(m, pos(g.tail(e)), pos(g.head(e)), &rational(network.weight(e))?)?,
                LayerOp::DeleteIsolatedBoundaryVertex(_) => {
                    return Err(Error::Precondition("filtration is not in standard form".into()));
                }
            };
            transforms.push(t);
        }
        Ok(ContinuationPlan { network: network.clone(), filtration: filtration.clone(), transforms })
    }

    pub fn boundary_size(&self) -> usize {
        self.filtration.boundary_size()
    }

    /// `Tₙ ⋯ T₁ T₀`, mapping base data to top data.
    pub fn product(&self) -> Result<ExactMatrix> {
        let mut p = self.transforms[0].matrix.clone();
        for t in &self.transforms[1..] {
            p = t.matrix.mul(&p)?;
        }
        Ok(p)
    }

    /// The harmonic function with `u ∘ ℓ₀ = φ` on the base, over the ring
    /// of `φ` (ℚ or ℤ/n).
    pub fn continue_harmonic(&self, phi: &[Scalar]) -> Result<VertexFunction> {
        let m = self.boundary_size();
        if phi.len() != m {
            return Err(Error::Dimension(format!("expected {m} boundary values, got {}", phi.len())));
        }
        let ring = match phi.first() {
            Some(s) => s.ring(),
            None => Ring::Rationals,
        };
        if ring == Ring::Integers {
            return Err(Error::RingMismatch("continuation needs ℚ or ℤ/n values".into()));
        }
        let n = self.network.graph().num_vertices();
        let mut u: Vec<Option<Scalar>> = vec![None; n];
        let mut state: Vec<Scalar> = phi.iter().map(|s| s.convert(ring)).collect::<Result<_>>()?;
        state.extend((0..m).map(|_| Scalar::zero_in(ring)));
        for (j, t) in self.transforms.iter().enumerate() {
            let mat = t.matrix.convert(ring).map_err(|_| Error::NotInvertible(format!("transform {j} has a denominator that is not a unit in {ring}")))?;
            state = mat_vec(&mat, &state)?;
            for (i, &x) in self.filtration.labels[j].iter().enumerate() {
                u[x].get_or_insert_with(|| state[i].clone());
            }
        }
        u.into_iter()
            .enumerate()
            .map(|(x, v)| v.ok_or_else(|| Error::Internal(format!("vertex {x} never reached the boundary"))))
            .collect()
    }
}

fn mat_vec(a: &ExactMatrix, v: &[Scalar]) -> Result<Vec<Scalar>> {
    (0..a.rows())
        .map(|i| {
            let mut s = Scalar::zero_in(a.ring());
            for (j, vj) in v.iter().enumerate() {
                s = s.add(&a.get(i, j).mul(vj)?)?;
            }
            Ok(s)
        })
        .collect()
}

fn check_s(g: &PartialGraph, s: &[usize]) -> Result<()> {
    let mut seen = vec![false; g.num_vertices()];
    for &x in s {
        if x >= g.num_vertices() {
            return Err(Error::UnknownVertex(x));
        }
        if std::mem::replace(&mut seen[x], true) {
            return Err(Error::Precondition(format!("vertex {x} repeated in S")));
        }
    }
    Ok(())
}

/// Layerable filtration of `G_{S→∂}` with the top labelling `S` then `∂V`.
pub fn layering_filtration(g: &PartialGraph, s: &[usize]) -> Result<Filtration> {
    check_s(g, s)?;
    let mut f = standard_form_filtration(&interiorize(g, s)?)?;
    let order: Vec<usize> = s.iter().copied().chain(g.boundary_vertices()).collect();
    f.relabel_top(&order)?;
    Ok(f)
}

/// The complementary filtration `Hₙ ⊂ … ⊂ H₀`: `H_j` has vertices
/// `V ∖ V°(G_j)`, the edges absent from `G_j`, and boundary `∂V(G_j)`.
/// Its labellings coincide with those of `f`, reversed.
pub fn complementary_filtration(g: &PartialGraph, f: &Filtration) -> Result<Filtration> {
    let gp = &f.parent;
    let h0 = g.all_interior().with_boundary(&f.labels[0]);
    let ops: Vec<LayerOp> = f
        .ops
        .iter()
        .map(|&op| match op {
            LayerOp::ContractBoundarySpike(e) => LayerOp::ContractBoundarySpike(gp.rev(e)),
            other => other,
        })
        .collect();
    let mut h = Filtration::from_strip_sequence(&h0, &ops)?;
    h.relabel_top(&f.labels[0])?;
    let n = f.len();
    for j in 0..=n {
        let st = &h.stages[n - j];
        let gj = &f.stages[j];
        for x in 0..g.num_vertices() {
            let want = !gj.is_interior(x);
            if st.vertices[x] != want || st.is_boundary(x) != gj.is_boundary(x) {
                return Err(Error::Internal(format!("complementary stage {j} differs at vertex {x}")));
            }
        }
        if h.labels[n - j] != f.labels[j] {
            return Err(Error::Internal(format!("complementary labelling {j} is inconsistent")));
        }
    }
    Ok(h)
}

/// `A = (0, I) T₀ T₁ ⋯ Tₙ (I; 0)` computed along an explicit filtration of
/// `G_{S→∂}` whose top labelling lists `S` first.
pub fn u0_matrix_a_with(n: &Network, s: &[usize], f: &Filtration) -> Result<ExactMatrix> {
    let g = n.graph();
    check_s(g, s)?;
    if f.parent != interiorize(g, s)? {
        return Err(Error::Precondition("filtration is not of G with S moved to the boundary".into()));
    }
    let top = f.top_labels();
    if top.len() != s.len() + g.boundary_vertices().len() || top[..s.len()] != *s {
        return Err(Error::Precondition("top labelling must list S first".into()));
    }
    let h = complementary_filtration(g, f)?;
    let hn = n.with_graph(h.parent.clone())?;
    let p = ContinuationPlan::new(&hn, &h)?.product()?;
    let m = top.len();
    let rows: Vec<usize> = (m..2 * m).collect();
    let cols: Vec<usize> = (0..s.len()).collect();
    Ok(p.submatrix(&rows, &cols))
}

/// The matrix `A` with `ker A ≅ U₀(G, L, M)`, of size `(|S| + |∂V|) × |S|`.
pub fn u0_matrix_a(n: &Network, s: &[usize]) -> Result<ExactMatrix> {
    let f = layering_filtration(n.graph(), s)?;
    u0_matrix_a_with(n, s, &f)
}

/// A second presentation of U₀ by forward continuation from the base of
/// the filtration: `m` columns, and rows the top values on `∂V` together
/// with all top Laplacian values.
pub fn u0_matrix_forward(n: &Network, s: &[usize]) -> Result<ExactMatrix> {
    let g = n.graph();
    let f = layering_filtration(g, s)?;
    let net = n.with_graph(f.parent.clone())?;
    let p = ContinuationPlan::new(&net, &f)?.product()?;
    let m = f.boundary_size();
    let rows: Vec<usize> = (s.len()..m).chain(m..2 * m).collect();
    let cols: Vec<usize> = (0..m).collect();
    Ok(p.submatrix(&rows, &cols))
}

/// U₀(G, L, ℚ/ℤ) as the torsion of `ker A`.
pub fn u0_via_continuation(n: &Network, s: &[usize]) -> Result<ModuleDecomposition> {
    let a = u0_matrix_a(n, s)?.to_integer_matrix()?;
    kernel_q_mod_z_torsion(&a).map_err(|e| match e {
        Error::DivisibleKernel { .. } => Error::Degenerate("U0 over Q/Z has a divisible part".into()),
        other => other,
    })
}

/// U₀(G, L, ℤ/n) as `ker(A mod n)`.
pub fn u0_mod_n_via_continuation(n: &Network, s: &[usize], modulus: &BigInt) -> Result<ModuleDecomposition> {
    kernel_mod_n(&u0_matrix_a(n, s)?.to_integer_matrix()?, modulus)
}

/// Greedy set `S ⊆ V°` with `G_{S→∂}` layerable. Not minimal in general.
pub fn find_layering_set(g: &PartialGraph) -> Vec<usize> {
    let mut s: Vec<usize> = Vec::new();
    loop {
        let gp = g.with_boundary(&s);
        let red = reduce_to_flower(&gp);
        if red.is_empty() {
            return s;
        }
        let fl = &red.flower;
        let interior: Vec<usize> = fl.vertex_ids().into_iter().filter(|&x| fl.is_interior(x)).collect();
        let pick = interior
            .iter()
            .copied()
            .find(|&x| fl.out(&gp, x).any(|e| fl.is_boundary(gp.head(e))))
            .or_else(|| interior.first().copied())
            .expect("a non-empty flower has an interior vertex");
        s.push(pick);
    }
}

/// The invariant-factor bound `|S| − 1` for Crit(G), after checking that
/// `G` with `S` on the boundary is layerable.
pub fn invariant_factor_bound(g: &PartialGraph, s: &[usize]) -> Result<usize> {
    crit_setup(g, s).map(|(_, rest)| rest.len())
}

fn crit_setup(g: &PartialGraph, s: &[usize]) -> Result<(PartialGraph, Vec<usize>)> {
    if !g.boundary_vertices().is_empty() || !g.is_connected() {
        return Err(Error::Precondition("graph must be connected with no boundary vertices".into()));
    }
    check_s(g, s)?;
    let (&x, rest) = s.split_first().ok_or_else(|| Error::Precondition("S must be non-empty".into()))?;
    let gx = g.with_boundary(&[x]);
    if reduce_to_flower(&interiorize(&gx, rest)?).is_empty() {
        Ok((gx, rest.to_vec()))
    } else {
        Err(Error::NotLayerable("G with S on the boundary is not layerable".into()))
    }
}

/// Crit(G) as U₀ of `G` with the first vertex of `S` on the boundary,
/// computed through the matrix `A`.
pub fn critical_group_via_continuation(g: &PartialGraph, s: &[usize]) -> Result<ModuleDecomposition> {
    let (gx, rest) = crit_setup(g, s)?;
    u0_via_continuation(&Network::standard(gx)?, &rest)
}

/// Whether the λ-eigenspace of a boundaryless network has dimension at
/// most `|S|`.
pub fn multiplicity_bound_check(n: &Network, s: &[usize], lambda: &BigRational) -> Result<bool> {
    let g = n.graph();
    if !g.boundary_vertices().is_empty() {
        return Err(Error::Precondition("graph must have no boundary vertices".into()));
    }
    check_s(g, s)?;
    if !reduce_to_flower(&interiorize(g, s)?).is_empty() {
        return Err(Error::NotLayerable("G with S on the boundary is not layerable".into()));
    }
    Ok(eigen_multiplicity(n, lambda)? <= s.len())
}


#[cfg(test)]
mod worked_example {
    use super::*;
    use crate::exact_algebra::smith_diagonal;

    #[test]
    fn five_vertex_example() {
        // v, w, x, y interior; z boundary.
        let mut g = PartialGraph::with_vertices(vec![false, false, true, false, false]);
        for (a, b) in [(0, 1), (1, 2), (1, 4), (0, 4), (0, 3), (2, 4), (3, 4), (2, 3)] {
            g.add_edge(a, b);
        }
        let n = Network::standard(g.clone()).unwrap();
        let s = [3, 4];
        let strip = [
            LayerOp::DeleteBoundaryEdge(14),
            LayerOp::DeleteBoundaryEdge(12),
            LayerOp::DeleteBoundaryEdge(10),
            LayerOp::ContractBoundarySpike(9),
            LayerOp::DeleteBoundaryEdge(6),
            LayerOp::ContractBoundarySpike(5),
            LayerOp::DeleteBoundaryEdge(2),
            LayerOp::DeleteBoundaryEdge(0),
        ];
        let f = Filtration::from_strip_sequence(&interiorize(&g, &s).unwrap(), &strip).unwrap();
        assert_eq!(f.top_labels(), &[3, 4, 2]);
        let a = u0_matrix_a_with(&n, &s, &f).unwrap();
        let want = ExactMatrix::from_i64(3, 2, &[12, -9, -15, 15, 3, -6]).unwrap();
        assert_eq!(a.to_integer_matrix().unwrap(), want);
        assert_eq!(smith_diagonal(&want).unwrap(), vec![BigInt::from(3), BigInt::from(15)]);
        let expected = ModuleDecomposition::from_i64(0, &[3, 15]);
        assert_eq!(u0_via_continuation(&n, &s).unwrap(), expected);
        assert_eq!(n.u0_q_mod_z().unwrap(), expected);
        for (values, modulus) in [([0, -1, 0, 1, 0], 3), ([-1, -1, 0, 0, 1], 3), ([0, 2, 0, 2, 1], 5)] {
            let u = crate::network::residues(&values, modulus).unwrap();
            let nm = Network::new(g.clone(), vec![Scalar::residue(1, modulus).unwrap(); g.num_darts()], vec![Scalar::residue(0, modulus).unwrap(); 5]).unwrap();
            assert!(nm.in_u0(&u).unwrap());
        }
    }
}
