//! Generators for the graph families used throughout the crate, with
//! embeddings where duality applies.

use crate::error::{Error, Result};
use crate::partial_graph::{DGraphMorphism, EdgeImage, PartialGraph};
use crate::planar::EmbeddedPartialGraph;

fn flags(n: usize, boundary: &[usize]) -> Result<Vec<bool>> {
    let mut b = vec![false; n];
    for &x in boundary {
        if x >= n {
            return Err(Error::UnknownVertex(x));
        }
        b[x] = true;
    }
    Ok(b)
}

/// `Kₙ` with the given boundary vertices.
pub fn complete_graph(n: usize, boundary: &[usize]) -> Result<PartialGraph> {
    let mut g = PartialGraph::with_vertices(flags(n, boundary)?);
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(i, j);
        }
    }
    Ok(g)
}

/// `K_{m,n}` with boundary part `0..m` and interior part `m..m+n`.
pub fn complete_bipartite_bi(m: usize, n: usize) -> PartialGraph {
    let mut g = PartialGraph::with_vertices((0..m + n).map(|x| x < m).collect());
    for i in 0..m {
        for j in 0..n {
            g.add_edge(i, m + j);
        }
    }
    g
}

/// `Cₙ` with edges `k ~ k+1`.
pub fn cycle(n: usize, boundary: &[usize]) -> Result<PartialGraph> {
    if n < 3 {
        return Err(Error::Precondition("a cycle needs at least 3 vertices".into()));
    }
    let mut g = PartialGraph::with_vertices(flags(n, boundary)?);
    for k in 0..n {
        g.add_edge(k, (k + 1) % n);
    }
    Ok(g)
}

/// The `n`-cube, vertices labelled by bit strings.
pub fn cube(n: u32) -> Result<PartialGraph> {
    if n > 16 {
        return Err(Error::Precondition("cube dimension is too large".into()));
    }
    let size = 1usize << n;
    let mut g = PartialGraph::with_vertices(vec![false; size]);
    for x in 0..size {
        for i in 0..n {
            let y = x ^ (1 << i);
            if x < y {
                g.add_edge(x, y);
            }
        }
    }
    Ok(g)
}

/// The facet `{0} × {0,1}^{n−1}`: vertices with the top bit clear.
pub fn cube_facet(n: u32) -> Vec<usize> {
    (0..1usize << n.saturating_sub(1)).collect()
}

/// `Wₙ`: hub `0`, rim `1..=n`, spokes first and then the rim edges.
pub fn wheel(n: usize, hub_boundary: bool) -> Result<EmbeddedPartialGraph> {
    if n < 3 {
        return Err(Error::Precondition("a wheel needs at least 3 rim vertices".into()));
    }
    let mut b = vec![false; n + 1];
    b[0] = hub_boundary;
    let mut g = PartialGraph::with_vertices(b);
    for k in 0..n {
        g.add_edge(0, k + 1);
    }
    for k in 0..n {
        g.add_edge(k + 1, (k + 1) % n + 1);
    }
    let spoke = |k: usize| 2 * k;
    let rim_next = |k: usize| 2 * (n + k);
    let rim_prev = |k: usize| 2 * (n + (k + n - 1) % n) + 1;
    let mut rotation = vec![(0..n).map(spoke).collect::<Vec<_>>()];
    for k in 0..n {
        rotation.push(vec![rim_next(k), spoke(k) + 1, rim_prev(k)]);
    }
    let order = if hub_boundary { vec![0] } else { vec![] };
    EmbeddedPartialGraph::new(g, rotation, order)
}

/// Vertex id of `(j, k)` in `CLF(m, n)`.
pub fn clf_id(m: usize, j: usize, k: usize) -> usize {
    k * m + j
}

/// `CLF(m, n)`: vertices `ℤ/m × {0..n}`, boundary row `k = 0`. Column `j`
/// contributes `2n + 1` edges: `(j,k) ~ (j+1, n−k+1)` for `k = 1..n`, then
/// `(j,k) ~ (j+1, n−k)` for `k = 0..n`.
pub fn clf(m: usize, n: usize) -> Result<PartialGraph> {
    if m < 2 || n < 1 {
        return Err(Error::Precondition("CLF(m, n) needs m ≥ 2 and n ≥ 1".into()));
    }
    let mut g = PartialGraph::with_vertices((0..m * (n + 1)).map(|x| x < m).collect());
    for j in 0..m {
        let next = (j + 1) % m;
        for k in 1..=n {
            g.add_edge(clf_id(m, j, k), clf_id(m, next, n - k + 1));
        }
        for k in 0..=n {
            g.add_edge(clf_id(m, j, k), clf_id(m, next, n - k));
        }
    }
    Ok(g)
}

/// Vertex id of `(x, y)` in `CLF′(m, n)`, for `x + y` even.
pub fn clf_prime_id(m: usize, x: usize, y: usize) -> usize {
    y * m + x / 2
}

/// `CLF′(m, n)`: vertices `(x, y) ∈ ℤ/2m × {0..n+1}` with `x + y` even,
/// boundary rows `0` and `n + 1`, edges `(x, y) ~ (x+1, y±1)`.
pub fn clf_prime(m: usize, n: usize) -> Result<PartialGraph> {
    if m < 1 || n < 1 {
        return Err(Error::Precondition("CLF′(m, n) needs m ≥ 1 and n ≥ 1".into()));
    }
    let rows = n + 2;
    let mut g = PartialGraph::with_vertices((0..rows * m).map(|id| id / m == 0 || id / m == n + 1).collect());
    for y in 0..rows {
        for x in (y % 2..2 * m).step_by(2) {
            let nx = (x + 1) % (2 * m);
            if y + 1 < rows {
                g.add_edge(clf_prime_id(m, x, y), clf_prime_id(m, nx, y + 1));
            }
            if y >= 1 {
                g.add_edge(clf_prime_id(m, x, y), clf_prime_id(m, nx, y - 1));
            }
        }
    }
    Ok(g)
}

/// The vertex map `CLF(2m, n) → CLF′(m, 2n)`: `(j, k) ↦ (j, 2k)` for even
/// `j` and `(j, 2n+1−2k)` for odd `j`.
pub fn clf_to_clf_prime(m: usize, n: usize) -> Vec<usize> {
    let cols = 2 * m;
    let mut map = vec![0; cols * (n + 1)];
    for j in 0..cols {
        for k in 0..=n {
            let y = if j % 2 == 0 { 2 * k } else { 2 * n + 1 - 2 * k };
            map[clf_id(cols, j, k)] = clf_prime_id(m, j, y);
        }
    }
    map
}

/// Whether a vertex bijection preserves boundary flags and all edge
/// multiplicities.
pub fn is_isomorphism(g1: &PartialGraph, g2: &PartialGraph, map: &[usize]) -> bool {
    let n = g1.num_vertices();
    if n != g2.num_vertices() || map.len() != n || g1.num_edges() != g2.num_edges() {
        return false;
    }
    let mut seen = vec![false; n];
    for &y in map {
        if y >= n || std::mem::replace(&mut seen[y], true) {
            return false;
        }
    }
    (0..n).all(|a| g1.is_boundary(a) == g2.is_boundary(map[a]) && (0..n).all(|b| g1.multiplicity(a, b) == g2.multiplicity(map[a], map[b])))
}

/// The quotient of `CLF(km, n)` by rotation through `m` columns.
pub fn rotation_quotient(k: usize, m: usize, n: usize) -> Result<DGraphMorphism> {
    if k < 1 {
        return Err(Error::Precondition("the group order must be positive".into()));
    }
    let source = clf(k * m, n)?;
    let target = clf(m, n)?;
    let big = k * m;
    let vertex_map = (0..source.num_vertices()).map(|x| clf_id(m, (x % big) % m, x / big)).collect();
    let per_col = 2 * n + 1;
    let dart_map = (0..source.num_darts())
        .map(|e| {
            let (edge, side) = (e / 2, e % 2);
            let (j, t) = (edge / per_col, edge % per_col);
            EdgeImage::Dart(2 * ((j % m) * per_col + t) + side)
        })
        .collect();
    let f = DGraphMorphism { source, target, vertex_map, dart_map };
    f.validate()?;
    Ok(f)
}

/// Small ∂-graphs and morphisms used as worked examples.
pub mod figures {
    use super::*;

    fn build(boundary: &[bool], edges: &[(usize, usize)]) -> PartialGraph {
        let mut g = PartialGraph::with_vertices(boundary.to_vec());
        for &(a, b) in edges {
            g.add_edge(a, b);
        }
        g
    }

    /// The square with two opposite boundary vertices.
    pub fn torsion_square() -> PartialGraph {
        build(&[true, false, true, false], &[(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    /// The five-vertex graph with boundary `z` used for the explicit
    /// algorithm: ids `v, w, z, x, y = 0..5`.
    pub fn algorithm_example() -> PartialGraph {
        build(&[false, false, true, false, false], &[(0, 1), (1, 2), (1, 4), (0, 4), (0, 3), (2, 4), (3, 4), (2, 3)])
    }

    /// Its layering set `{x, y}`.
    pub const ALGORITHM_EXAMPLE_S: [usize; 2] = [3, 4];

    /// Square with one boundary side, before adjoining a spike.
    pub fn spike_before() -> PartialGraph {
        build(&[true, true, false, false], &[(0, 1), (1, 3), (3, 2), (2, 0)])
    }

    /// The same square with a boundary spike `4 → 0` attached.
    pub fn spike_after() -> PartialGraph {
        build(&[false, true, false, false, true], &[(0, 1), (1, 3), (3, 2), (2, 0), (4, 0)])
    }

    /// A layerable extension: interior `00` with boundary `01`, `10`, then a
    /// new boundary vertex `11` joined to both, then a spike at `11`.
    /// Ids `00, 01, 10, 11, 21 = 0..5`.
    pub fn layerable_extension() -> PartialGraph {
        build(&[false, true, true, false, true], &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
    }

    /// Four boundary petals around an interior 4-cycle `A, B, C, D = 4..8`.
    pub fn flower() -> PartialGraph {
        let mut edges = vec![(4, 0), (0, 5), (5, 1), (1, 6), (6, 2), (2, 7), (7, 3), (3, 4)];
        edges.extend([(4, 5), (5, 6), (6, 7), (7, 4)]);
        build(&[true, true, true, true, false, false, false, false], &edges)
    }

    /// The completely reducible example with ids `A, C, D, E, F, G, H = 0..7`.
    pub fn completely_reducible() -> PartialGraph {
        build(
            &[true, false, true, true, false, false, true],
            &[(5, 6), (6, 5), (5, 0), (0, 1), (1, 2), (1, 3), (2, 4), (3, 4)],
        )
    }

    /// Six boundary leaves folded onto three; degree 2 at the centre.
    pub fn star_fold() -> DGraphMorphism {
        let source = build(&[false, true, true, true, true, true, true], &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]);
        let target = build(&[false, true, true, true], &[(0, 1), (0, 2), (0, 3)]);
        let vertex_map = vec![0, 1, 2, 3, 1, 2, 3];
        let dart_map = (0..12).map(|e| EdgeImage::Dart(2 * ((e / 2) % 3) + e % 2)).collect();
        DGraphMorphism { source, target, vertex_map, dart_map }
    }

    /// Two copies of the path `1 − 2 − 3` joined by rungs, projected onto
    /// the path with the rungs collapsed.
    pub fn ladder_projection() -> DGraphMorphism {
        let source = build(&[true, false, true, true, false, true], &[(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)]);
        let target = build(&[true, false, true], &[(0, 1), (1, 2)]);
        let vertex_map = vec![0, 1, 2, 0, 1, 2];
        let mut dart_map: Vec<EdgeImage> = (0..8).map(|e| EdgeImage::Dart(e % 4)).collect();
        for v in 0..3 {
            dart_map.push(EdgeImage::Vertex(v));
            dart_map.push(EdgeImage::Vertex(v));
        }
        DGraphMorphism { source, target, vertex_map, dart_map }
    }

    /// Two interior vertices joined to boundary `1` and `3` and to each
    /// other, projected onto the path with the middle edge collapsed.
    pub fn modified_projection() -> DGraphMorphism {
        let source = build(&[true, false, true, false], &[(0, 1), (1, 2), (0, 3), (3, 2), (1, 3)]);
        let target = build(&[true, false, true], &[(0, 1), (1, 2)]);
        let vertex_map = vec![0, 1, 2, 1];
        let mut dart_map: Vec<EdgeImage> = (0..8).map(|e| EdgeImage::Dart(e % 4)).collect();
        dart_map.extend([EdgeImage::Vertex(1), EdgeImage::Vertex(1)]);
        DGraphMorphism { source, target, vertex_map, dart_map }
    }
}
