//! Graphs with boundary, their morphisms, and the standard constructions.
//!
//! Edges are stored as oriented darts. Dart `e` runs from `tail(e)` (written
//! e₊) to `head(e)` (e₋) and `rev(e)` is the same edge traversed backwards.
//! Graphs built through [`PartialGraph::add_edge`] pair darts `2k` and `2k+1`.

use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};

/// A finite ∂-graph: vertices split into boundary and interior, edges as
/// pairs of opposite darts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PartialGraph {
    boundary: Vec<bool>,
    tail: Vec<usize>,
    head: Vec<usize>,
    rev: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl PartialGraph {
    /// Graph with the given vertices and no edges.
    pub fn with_vertices(boundary: Vec<bool>) -> Self {
        let out = vec![Vec::new(); boundary.len()];
        PartialGraph { boundary, tail: Vec::new(), head: Vec::new(), rev: Vec::new(), out }
    }

    /// Graph assembled from raw dart data; call [`validate`](Self::validate)
    /// before trusting it.
    pub fn from_raw(boundary: Vec<bool>, tail: Vec<usize>, head: Vec<usize>, rev: Vec<usize>) -> Self {
        let mut out = vec![Vec::new(); boundary.len()];
        for (e, &t) in tail.iter().enumerate() {
            if t < out.len() {
                out[t].push(e);
            }
        }
        PartialGraph { boundary, tail, head, rev, out }
    }

    pub fn add_vertex(&mut self, boundary: bool) -> usize {
        self.boundary.push(boundary);
        self.out.push(Vec::new());
        self.boundary.len() - 1
    }

    /// Add an edge and return the dart running from `a` to `b`.
    pub fn add_edge(&mut self, a: usize, b: usize) -> usize {
        let e = self.tail.len();
        self.tail.extend([a, b]);
        self.head.extend([b, a]);
        self.rev.extend([e + 1, e]);
        self.out[a].push(e);
        self.out[b].push(e + 1);
        e
    }

    pub fn set_boundary(&mut self, x: usize, boundary: bool) {
        self.boundary[x] = boundary;
    }

    pub fn num_vertices(&self) -> usize {
        self.boundary.len()
    }

    pub fn num_darts(&self) -> usize {
        self.tail.len()
    }

    pub fn num_edges(&self) -> usize {
        self.tail.len() / 2
    }

    pub fn is_boundary(&self, x: usize) -> bool {
        self.boundary[x]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn tail(&self, e: usize) -> usize {
        self.tail[e]
    }

    pub fn head(&self, e: usize) -> usize {
        self.head[e]
    }

    pub fn rev(&self, e: usize) -> usize {
        self.rev[e]
    }

    /// ℰ(x): darts leaving `x`.
    pub fn out(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.out[x].len()
    }

    pub fn boundary_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&x| self.boundary[x]).collect()
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&x| !self.boundary[x]).collect()
    }

    /// One dart per edge: the one with the smaller index.
    pub fn edges(&self) -> Vec<usize> {
        (0..self.num_darts()).filter(|&e| e < self.rev[e]).collect()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.tail[e] == self.head[e]
    }

    /// Number of edges joining `a` and `b`.
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        self.out[a].iter().filter(|&&e| self.head[e] == b).count()
    }

    /// Check the involution and partition invariants.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vertices();
        let m = self.num_darts();
        if self.head.len() != m || self.rev.len() != m {
            return Err(Error::InvalidGraph("dart arrays have different lengths".into()));
        }
        for e in 0..m {
            if self.tail[e] >= n || self.head[e] >= n {
                return Err(Error::InvalidGraph(format!("dart {e} has a dangling endpoint")));
            }
            let r = self.rev[e];
            if r >= m {
                return Err(Error::InvalidGraph(format!("dart {e} has a dangling reversal")));
            }
            if r == e {
                return Err(Error::InvalidGraph(format!("dart {e} is its own reversal")));
            }
            if self.rev[r] != e {
                return Err(Error::InvalidGraph(format!("reversal of dart {e} is not an involution")));
            }
            if self.tail[r] != self.head[e] || self.head[r] != self.tail[e] {
                return Err(Error::InvalidGraph(format!("reversal of dart {e} does not swap its endpoints")));
            }
        }
        Ok(())
    }

    /// Connected components as a vertex labelling and a count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let n = self.num_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &e in &self.out[x] {
                    let y = self.head[e];
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.components().1 <= 1
    }

    /// Copy with the given vertices moved to the boundary.
    pub fn with_boundary(&self, extra: &[usize]) -> Self {
        let mut g = self.clone();
        for &x in extra {
            g.boundary[x] = true;
        }
        g
    }

    /// Copy with every vertex interior.
    pub fn all_interior(&self) -> Self {
        let mut g = self.clone();
        g.boundary.iter_mut().for_each(|b| *b = false);
        g
    }
}

/// A sub-∂-graph of a fixed parent, stored as masks over the parent's ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubGraph {
    pub vertices: Vec<bool>,
    pub darts: Vec<bool>,
    pub boundary: Vec<bool>,
}

/// A sub-∂-graph copied out with fresh ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extracted {
    pub graph: PartialGraph,
    /// New vertex id to parent vertex id.
    pub vertex_ids: Vec<usize>,
    /// New dart id to parent dart id.
    pub dart_ids: Vec<usize>,
}

impl Extracted {
    /// Parent vertex id to new vertex id.
    pub fn vertex_lookup(&self) -> BTreeMap<usize, usize> {
        self.vertex_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect()
    }

    /// Inclusion of the extracted graph into the parent.
    pub fn inclusion(&self, parent: &PartialGraph) -> DGraphMorphism {
        DGraphMorphism {
            source: self.graph.clone(),
            target: parent.clone(),
            vertex_map: self.vertex_ids.clone(),
            dart_map: self.dart_ids.iter().map(|&e| EdgeImage::Dart(e)).collect(),
        }
    }
}

impl SubGraph {
    pub fn full(g: &PartialGraph) -> Self {
        SubGraph {
            vertices: vec![true; g.num_vertices()],
            darts: vec![true; g.num_darts()],
            boundary: g.boundary.clone(),
        }
    }

    pub fn empty(g: &PartialGraph) -> Self {
        SubGraph {
            vertices: vec![false; g.num_vertices()],
            darts: vec![false; g.num_darts()],
            boundary: vec![false; g.num_vertices()],
        }
    }

    pub fn vertex_ids(&self) -> Vec<usize> {
        (0..self.vertices.len()).filter(|&x| self.vertices[x]).collect()
    }

    pub fn dart_ids(&self) -> Vec<usize> {
        (0..self.darts.len()).filter(|&e| self.darts[e]).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.vertices.iter().any(|&b| b)
    }

    pub fn is_boundary(&self, x: usize) -> bool {
        self.vertices[x] && self.boundary[x]
    }

    pub fn is_interior(&self, x: usize) -> bool {
        self.vertices[x] && !self.boundary[x]
    }

    /// Live darts leaving `x`.
    pub fn out<'a>(&'a self, g: &'a PartialGraph, x: usize) -> impl Iterator<Item = usize> + 'a {
        g.out(x).iter().copied().filter(move |&e| self.darts[e])
    }

    pub fn degree(&self, g: &PartialGraph, x: usize) -> usize {
        self.out(g, x).count()
    }

    /// Check that the masks describe a sub-∂-graph of `g`.
    pub fn validate(&self, g: &PartialGraph) -> Result<()> {
        if self.vertices.len() != g.num_vertices() || self.boundary.len() != g.num_vertices() || self.darts.len() != g.num_darts() {
            return Err(Error::InvalidGraph("mask sizes do not match the parent".into()));
        }
        for e in 0..g.num_darts() {
            if self.darts[e] {
                if !self.darts[g.rev(e)] {
                    return Err(Error::InvalidGraph(format!("dart {e} present without its reversal")));
                }
                if !self.vertices[g.tail(e)] || !self.vertices[g.head(e)] {
                    return Err(Error::InvalidGraph(format!("dart {e} has an endpoint outside the subgraph")));
                }
            }
        }
        for x in 0..g.num_vertices() {
            if self.is_interior(x) {
                if g.is_boundary(x) {
                    return Err(Error::InvalidGraph(format!("vertex {x} is interior in the subgraph but boundary in the parent")));
                }
                if g.out(x).iter().any(|&e| !self.darts[e]) {
                    return Err(Error::InvalidGraph(format!("interior vertex {x} is missing some of its edges")));
                }
            }
        }
        Ok(())
    }

    /// Intersection of two sub-∂-graphs of the same parent.
    pub fn intersect(&self, other: &SubGraph) -> SubGraph {
        let n = self.vertices.len();
        SubGraph {
            vertices: (0..n).map(|x| self.vertices[x] && other.vertices[x]).collect(),
            darts: self.darts.iter().zip(&other.darts).map(|(a, b)| *a && *b).collect(),
            boundary: (0..n).map(|x| self.vertices[x] && other.vertices[x] && (self.boundary[x] || other.boundary[x])).collect(),
        }
    }

    /// Copy out with fresh ids, keeping edges in parent order.
    pub fn extract(&self, g: &PartialGraph) -> Extracted {
        let vertex_ids = self.vertex_ids();
        let mut index = vec![usize::MAX; g.num_vertices()];
        for (i, &v) in vertex_ids.iter().enumerate() {
            index[v] = i;
        }
        let mut graph = PartialGraph::with_vertices(vertex_ids.iter().map(|&v| self.boundary[v]).collect());
        let mut dart_ids = Vec::new();
        for e in g.edges() {
            if self.darts[e] {
                graph.add_edge(index[g.tail(e)], index[g.head(e)]);
                dart_ids.extend([e, g.rev(e)]);
            }
        }
        Extracted { graph, vertex_ids, dart_ids }
    }
}

/// Where a morphism sends a dart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeImage {
    Dart(usize),
    /// The edge is collapsed onto this vertex.
    Vertex(usize),
}

/// A map of ∂-graphs given on vertex and dart ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DGraphMorphism {
    pub source: PartialGraph,
    pub target: PartialGraph,
    pub vertex_map: Vec<usize>,
    pub dart_map: Vec<EdgeImage>,
}

impl DGraphMorphism {
    pub fn identity(g: &PartialGraph) -> Self {
        DGraphMorphism {
            source: g.clone(),
            target: g.clone(),
            vertex_map: (0..g.num_vertices()).collect(),
            dart_map: (0..g.num_darts()).map(EdgeImage::Dart).collect(),
        }
    }

    /// Number of darts at `x` sent to each dart of ℰ(f(x)).
    fn fiber_sizes(&self, x: usize) -> Vec<usize> {
        let y = self.vertex_map[x];
        self.target
            .out(y)
            .iter()
            .map(|&t| self.source.out(x).iter().filter(|&&e| self.dart_map[e] == EdgeImage::Dart(t)).count())
            .collect()
    }

    /// Check every morphism axiom and return deg(f, x) for each source vertex.
    pub fn validate(&self) -> Result<Vec<usize>> {
        let (s, t) = (&self.source, &self.target);
        let bad = |m: String| Err(Error::InvalidMorphism(m));
        if self.vertex_map.len() != s.num_vertices() || self.dart_map.len() != s.num_darts() {
            return bad("map sizes do not match the source".into());
        }
        for (x, &y) in self.vertex_map.iter().enumerate() {
            if y >= t.num_vertices() {
                return bad(format!("vertex {x} maps outside the target"));
            }
            if !s.is_boundary(x) && t.is_boundary(y) {
                return bad(format!("interior vertex {x} maps to boundary vertex {y}"));
            }
        }
        for e in 0..s.num_darts() {
            let (a, b) = (self.vertex_map[s.tail(e)], self.vertex_map[s.head(e)]);
            match self.dart_map[e] {
                EdgeImage::Dart(d) => {
                    if d >= t.num_darts() {
                        return bad(format!("dart {e} maps outside the target"));
                    }
                    if t.tail(d) != a || t.head(d) != b {
                        return bad(format!("dart {e} maps to dart {d} with incompatible endpoints"));
                    }
                    if self.dart_map[s.rev(e)] != EdgeImage::Dart(t.rev(d)) {
                        return bad(format!("reversal of dart {e} does not map to the reversal of its image"));
                    }
                }
                EdgeImage::Vertex(y) => {
                    if a != y || b != y || self.dart_map[s.rev(e)] != EdgeImage::Vertex(y) {
                        return bad(format!("collapsed dart {e} is not compatible with vertex {y}"));
                    }
                }
            }
        }
        let mut deg = Vec::with_capacity(s.num_vertices());
        for x in 0..s.num_vertices() {
            let sizes = self.fiber_sizes(x);
            let max = sizes.iter().copied().max().unwrap_or(0);
            if !s.is_boundary(x) && sizes.iter().any(|&k| k != max) {
                return bad(format!("fiber sizes at interior vertex {x} are not constant: {sizes:?}"));
            }
            deg.push(max);
        }
        Ok(deg)
    }

    /// `g ∘ f`.
    pub fn then(&self, g: &DGraphMorphism) -> Result<DGraphMorphism> {
        if self.target != g.source {
            return Err(Error::InvalidMorphism("target of the first map is not the source of the second".into()));
        }
        Ok(DGraphMorphism {
            source: self.source.clone(),
            target: g.target.clone(),
            vertex_map: self.vertex_map.iter().map(|&y| g.vertex_map[y]).collect(),
            dart_map: self
                .dart_map
                .iter()
                .map(|im| match *im {
                    EdgeImage::Dart(d) => g.dart_map[d],
                    EdgeImage::Vertex(y) => EdgeImage::Vertex(g.vertex_map[y]),
                })
                .collect(),
        })
    }

    pub fn is_unramified(&self) -> Result<bool> {
        let deg = self.validate()?;
        Ok((0..self.source.num_vertices()).all(|x| if self.source.is_boundary(x) { deg[x] <= 1 } else { deg[x] == 1 }))
    }

    pub fn is_covering_map(&self) -> Result<bool> {
        self.validate()?;
        let (s, t) = (&self.source, &self.target);
        let mut hit_v = vec![false; t.num_vertices()];
        let mut hit_e = vec![false; t.num_darts()];
        for x in 0..s.num_vertices() {
            let y = self.vertex_map[x];
            hit_v[y] = true;
            if s.is_boundary(x) != t.is_boundary(y) {
                return Ok(false);
            }
            let mut images = Vec::new();
            for &e in s.out(x) {
                match self.dart_map[e] {
                    EdgeImage::Dart(d) => images.push(d),
                    EdgeImage::Vertex(_) => return Ok(false),
                }
            }
            images.sort_unstable();
            let mut star = t.out(y).to_vec();
            star.sort_unstable();
            if images != star {
                return Ok(false);
            }
            for d in images {
                hit_e[d] = true;
            }
        }
        Ok(hit_v.into_iter().all(|b| b) && hit_e.into_iter().all(|b| b))
    }

    /// Size of each vertex fiber |f⁻¹(y)|.
    pub fn vertex_fiber_sizes(&self) -> Vec<usize> {
        let mut c = vec![0; self.target.num_vertices()];
        for &y in &self.vertex_map {
            c[y] += 1;
        }
        c
    }
}

/// `f⁻¹(H′)` as a sub-∂-graph of the source of `f`.
pub fn pullback_subgraph(f: &DGraphMorphism, h: &SubGraph) -> Result<SubGraph> {
    h.validate(&f.target)?;
    let s = &f.source;
    let vertices: Vec<bool> = f.vertex_map.iter().map(|&y| h.vertices[y]).collect();
    let darts = f
        .dart_map
        .iter()
        .map(|im| match *im {
            EdgeImage::Dart(d) => h.darts[d],
            EdgeImage::Vertex(y) => h.vertices[y],
        })
        .collect();
    let boundary = (0..s.num_vertices())
        .map(|x| vertices[x] && !(h.is_interior(f.vertex_map[x]) && !s.is_boundary(x)))
        .collect();
    Ok(SubGraph { vertices, darts, boundary })
}

/// Box product with its two projections. Vertex `(a, b)` gets id `a·|V₂| + b`.
pub fn box_product(g1: &PartialGraph, g2: &PartialGraph) -> (PartialGraph, DGraphMorphism, DGraphMorphism) {
    let n2 = g2.num_vertices();
    let id = |a: usize, b: usize| a * n2 + b;
    let mut boundary = Vec::with_capacity(g1.num_vertices() * n2);
    for a in 0..g1.num_vertices() {
        for b in 0..n2 {
            boundary.push(g1.is_boundary(a) || g2.is_boundary(b));
        }
    }
    let mut g = PartialGraph::with_vertices(boundary);
    let mut p1 = Vec::new();
    let mut p2 = Vec::new();
    for e in g1.edges() {
        for b in 0..n2 {
            g.add_edge(id(g1.tail(e), b), id(g1.head(e), b));
            p1.extend([EdgeImage::Dart(e), EdgeImage::Dart(g1.rev(e))]);
            p2.extend([EdgeImage::Vertex(b), EdgeImage::Vertex(b)]);
        }
    }
    for a in 0..g1.num_vertices() {
        for e in g2.edges() {
            g.add_edge(id(a, g2.tail(e)), id(a, g2.head(e)));
            p1.extend([EdgeImage::Vertex(a), EdgeImage::Vertex(a)]);
            p2.extend([EdgeImage::Dart(e), EdgeImage::Dart(g2.rev(e))]);
        }
    }
    let vm1 = (0..g.num_vertices()).map(|v| v / n2.max(1)).collect();
    let vm2 = (0..g.num_vertices()).map(|v| v % n2.max(1)).collect();
    let f1 = DGraphMorphism { source: g.clone(), target: g1.clone(), vertex_map: vm1, dart_map: p1 };
    let f2 = DGraphMorphism { source: g.clone(), target: g2.clone(), vertex_map: vm2, dart_map: p2 };
    (g, f1, f2)
}

/// Disjoint union; vertices and darts of `g2` are shifted past those of `g1`.
pub fn disjoint_union(g1: &PartialGraph, g2: &PartialGraph) -> PartialGraph {
    let mut g = g1.clone();
    let off = g1.num_vertices();
    for x in 0..g2.num_vertices() {
        g.add_vertex(g2.is_boundary(x));
    }
    for e in g2.edges() {
        g.add_edge(g2.tail(e) + off, g2.head(e) + off);
    }
    g
}

/// Glue boundary vertex `x1` of `g1` to boundary vertex `x2` of `g2`.
/// Returns the glued graph and the new ids of the vertices of `g2`.
pub fn wedge_sum(g1: &PartialGraph, x1: usize, g2: &PartialGraph, x2: usize) -> Result<(PartialGraph, Vec<usize>)> {
    if x1 >= g1.num_vertices() || !g1.is_boundary(x1) || x2 >= g2.num_vertices() || !g2.is_boundary(x2) {
        return Err(Error::Precondition("wedge sums are taken at boundary vertices".into()));
    }
    let mut g = g1.clone();
    let mut map = vec![0; g2.num_vertices()];
    for x in 0..g2.num_vertices() {
        map[x] = if x == x2 { x1 } else { g.add_vertex(g2.is_boundary(x)) };
    }
    for e in g2.edges() {
        g.add_edge(map[g2.tail(e)], map[g2.head(e)]);
    }
    Ok((g, map))
}

/// Bipartite double cover: vertex `(v, s)` gets id `2v + s`.
pub fn bipartite_double_cover(g: &PartialGraph) -> (PartialGraph, DGraphMorphism) {
    let mut c = PartialGraph::with_vertices(g.boundary.iter().flat_map(|&b| [b, b]).collect());
    let mut dart_map = Vec::new();
    for e in g.edges() {
        let (a, b) = (g.tail(e), g.head(e));
        for s in 0..2 {
            c.add_edge(2 * a + s, 2 * b + (1 - s));
            dart_map.extend([EdgeImage::Dart(e), EdgeImage::Dart(g.rev(e))]);
        }
    }
    let f = DGraphMorphism {
        source: c.clone(),
        target: g.clone(),
        vertex_map: (0..c.num_vertices()).map(|v| v / 2).collect(),
        dart_map,
    };
    (c, f)
}

/// Search for a vertex bijection preserving boundary flags and edge
/// multiplicities. Returns the map from `g1` ids to `g2` ids.
pub fn find_isomorphism(g1: &PartialGraph, g2: &PartialGraph) -> Option<Vec<usize>> {
    let n = g1.num_vertices();
    if n != g2.num_vertices() || g1.num_edges() != g2.num_edges() {
        return None;
    }
    let signature = |g: &PartialGraph, x: usize| {
        let mut nd: Vec<usize> = g.out(x).iter().map(|&e| g.degree(g.head(e))).collect();
        nd.sort_unstable();
        (g.is_boundary(x), g.degree(x), g.multiplicity(x, x), nd)
    };
    let s1: Vec<_> = (0..n).map(|x| signature(g1, x)).collect();
    let s2: Vec<_> = (0..n).map(|x| signature(g2, x)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Place vertices adjacent to already placed ones early.
    let mut placed = vec![false; n];
    let mut seq = Vec::with_capacity(n);
    while seq.len() < n {
        let next = order
            .iter()
            .copied()
            .filter(|&x| !placed[x])
            .max_by_key(|&x| (g1.out(x).iter().filter(|&&e| placed[g1.head(e)]).count(), g1.degree(x), usize::MAX - x))
            .expect("unplaced vertex");
        placed[next] = true;
        seq.push(next);
    }
    order = seq;
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        k: usize,
        order: &[usize],
        g1: &PartialGraph,
        g2: &PartialGraph,
        s1: &[(bool, usize, usize, Vec<usize>)],
        s2: &[(bool, usize, usize, Vec<usize>)],
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let x = order[k];
        for y in 0..g2.num_vertices() {
            if used[y] || s1[x] != s2[y] {
                continue;
            }
            let ok = order[..k].iter().all(|&p| g1.multiplicity(x, p) == g2.multiplicity(y, map[p]));
            if !ok {
                continue;
            }
            map[x] = y;
            used[y] = true;
            if go(k + 1, order, g1, g2, s1, s2, map, used) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }
    if go(0, &order, g1, g2, &s1, &s2, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}
