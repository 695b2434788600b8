//! Layer-stripping: the three removal operations, flowers, standard-form
//! filtrations, complete reducibility and the degenerate networks that
//! certify failure of either property.
//!
//! All states are sub-∂-graphs of a fixed parent graph, so vertex and dart
//! ids never change while stripping.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exact_algebra::Scalar;
use crate::network::{Network, VertexFunction};
use crate::partial_graph::{Extracted, PartialGraph, SubGraph};

/// One layer-stripping move, addressed by parent ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LayerOp {
    DeleteIsolatedBoundaryVertex(usize),
    /// Dart `e` with `e₊` a boundary vertex of degree one and `e₋` interior.
    ContractBoundarySpike(usize),
    /// An edge between two boundary vertices, named by its smaller dart.
    DeleteBoundaryEdge(usize),
}

/// A sub-∂-graph of `graph` that is being stripped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerState {
    graph: PartialGraph,
    sub: SubGraph,
}

impl LayerState {
    pub fn new(graph: &PartialGraph) -> Self {
        LayerState { sub: SubGraph::full(graph), graph: graph.clone() }
    }

    pub fn from_sub(graph: &PartialGraph, sub: SubGraph) -> Result<Self> {
        sub.validate(graph)?;
        Ok(LayerState { graph: graph.clone(), sub })
    }

    pub fn graph(&self) -> &PartialGraph {
        &self.graph
    }

    pub fn sub(&self) -> &SubGraph {
        &self.sub
    }

    pub fn into_sub(self) -> SubGraph {
        self.sub
    }

    pub fn is_empty(&self) -> bool {
        self.sub.is_empty()
    }

    pub fn extract(&self) -> Extracted {
        self.sub.extract(&self.graph)
    }

    fn spike_at(&self, p: usize) -> Option<usize> {
        if !self.sub.is_boundary(p) {
            return None;
        }
        let mut darts = self.sub.out(&self.graph, p);
        let e = darts.next()?;
        if darts.next().is_some() {
            return None;
        }
        self.sub.is_interior(self.graph.head(e)).then_some(e)
    }

    /// Every applicable operation: isolated vertices, then spikes, then
    /// boundary edges, each in increasing id order.
    pub fn strippable(&self) -> Vec<LayerOp> {
        let g = &self.graph;
        let mut ops = Vec::new();
        for x in self.sub.vertex_ids() {
            if self.sub.is_boundary(x) && self.sub.degree(g, x) == 0 {
                ops.push(LayerOp::DeleteIsolatedBoundaryVertex(x));
            }
        }
        let mut spikes: Vec<usize> = self.sub.vertex_ids().into_iter().filter_map(|p| self.spike_at(p)).collect();
        spikes.sort_unstable();
        ops.extend(spikes.into_iter().map(LayerOp::ContractBoundarySpike));
        for e in g.edges() {
            if self.sub.darts[e] && self.sub.is_boundary(g.tail(e)) && self.sub.is_boundary(g.head(e)) {
                ops.push(LayerOp::DeleteBoundaryEdge(e));
            }
        }
        ops
    }

    pub fn is_applicable(&self, op: LayerOp) -> bool {
        let g = &self.graph;
        match op {
            LayerOp::DeleteIsolatedBoundaryVertex(x) => {
                x < g.num_vertices() && self.sub.is_boundary(x) && self.sub.degree(g, x) == 0
            }
            LayerOp::ContractBoundarySpike(e) => e < g.num_darts() && self.spike_at(g.tail(e)) == Some(e),
            LayerOp::DeleteBoundaryEdge(e) => {
                e < g.num_darts()
                    && e < g.rev(e)
                    && self.sub.darts[e]
                    && self.sub.is_boundary(g.tail(e))
                    && self.sub.is_boundary(g.head(e))
            }
        }
    }

    pub fn apply(&mut self, op: LayerOp) -> Result<()> {
        if !self.is_applicable(op) {
            return Err(Error::Precondition(format!("{op:?} does not apply")));
        }
        let g = &self.graph;
        match op {
            LayerOp::DeleteIsolatedBoundaryVertex(x) => {
                self.sub.vertices[x] = false;
                self.sub.boundary[x] = false;
            }
            LayerOp::ContractBoundarySpike(e) => {
                let (p, q) = (g.tail(e), g.head(e));
                self.sub.vertices[p] = false;
                self.sub.boundary[p] = false;
                self.sub.darts[e] = false;
                self.sub.darts[g.rev(e)] = false;
                self.sub.boundary[q] = true;
            }
            LayerOp::DeleteBoundaryEdge(e) => {
                self.sub.darts[e] = false;
                self.sub.darts[g.rev(e)] = false;
            }
        }
        Ok(())
    }

    /// Strip greedily, lowest op first, until nothing applies.
    pub fn strip_all(&mut self) -> Vec<LayerOp> {
        let mut done = Vec::new();
        while let Some(&op) = self.strippable().first() {
            self.apply(op).expect("listed op applies");
            done.push(op);
        }
        done
    }
}

/// Find all applicable operations on a whole graph.
pub fn find_strippable(g: &PartialGraph) -> Vec<LayerOp> {
    LayerState::new(g).strippable()
}

/// Apply one operation and return the smaller graph with fresh ids.
pub fn apply_op(g: &PartialGraph, op: LayerOp) -> Result<Extracted> {
    let mut s = LayerState::new(g);
    s.apply(op)?;
    Ok(s.extract())
}

/// Apply one operation to a network; a contracted spike must carry a unit
/// weight. Returns the smaller network and the id bookkeeping.
pub fn apply_op_network(n: &Network, op: LayerOp) -> Result<(Network, Extracted)> {
    if let LayerOp::ContractBoundarySpike(e) = op {
        if e < n.graph().num_darts() && !n.weight(e).is_unit() {
            return Err(Error::Precondition(format!("spike weight {} is not a unit", n.weight(e))));
        }
    }
    let ex = apply_op(n.graph(), op)?;
    Ok((subnetwork(n, &ex)?, ex))
}

/// Restrict a network to an extracted sub-∂-graph.
pub fn subnetwork(n: &Network, ex: &Extracted) -> Result<Network> {
    let w = ex.dart_ids.iter().map(|&e| n.weight(e).clone()).collect();
    let d = ex.vertex_ids.iter().map(|&x| n.offset(x).clone()).collect();
    Network::new(ex.graph.clone(), w, d)
}

/// Result of stripping a graph as far as possible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowerReduction {
    pub flower: SubGraph,
    pub ops: Vec<LayerOp>,
}

impl FlowerReduction {
    pub fn is_empty(&self) -> bool {
        self.flower.is_empty()
    }
}

/// Strip greedily to the flower.
pub fn reduce_to_flower(g: &PartialGraph) -> FlowerReduction {
    let mut s = LayerState::new(g);
    let ops = s.strip_all();
    FlowerReduction { flower: s.into_sub(), ops }
}

/// Strip choosing uniformly among applicable operations.
pub fn reduce_to_flower_random<R: Rng>(g: &PartialGraph, rng: &mut R) -> FlowerReduction {
    let mut s = LayerState::new(g);
    let mut ops = Vec::new();
    loop {
        let avail = s.strippable();
        if avail.is_empty() {
            break;
        }
        let op = avail[rng.gen_range(0..avail.len())];
        s.apply(op).expect("listed op applies");
        ops.push(op);
    }
    FlowerReduction { flower: s.into_sub(), ops }
}

pub fn is_layerable(g: &PartialGraph) -> bool {
    reduce_to_flower(g).is_empty()
}

/// `G_{S→∂}`: the vertices of `s` become boundary vertices.
pub fn interiorize(g: &PartialGraph, s: &[usize]) -> Result<PartialGraph> {
    for &x in s {
        if x >= g.num_vertices() || g.is_boundary(x) {
            return Err(Error::Precondition(format!("vertex {x} is not an interior vertex")));
        }
    }
    Ok(g.with_boundary(s))
}

/// A standard-form layerable filtration `G₀ ⊂ G₁ ⊂ … ⊂ Gₙ = G`.
///
/// `G₀` consists of isolated boundary vertices; `ops[j]` strips
/// `stages[j+1]` down to `stages[j]`; `labels[j][i]` is the boundary vertex
/// of stage `j` carrying index `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Filtration {
    pub parent: PartialGraph,
    pub stages: Vec<SubGraph>,
    pub ops: Vec<LayerOp>,
    pub labels: Vec<Vec<usize>>,
}

impl Filtration {
    /// Build from a strip sequence of spikes and boundary edges that ends
    /// at isolated boundary vertices.
    pub fn from_strip_sequence(g: &PartialGraph, ops: &[LayerOp]) -> Result<Filtration> {
        let mut s = LayerState::new(g);
        let mut stages = vec![s.sub().clone()];
        for &op in ops {
            if let LayerOp::DeleteIsolatedBoundaryVertex(_) = op {
                return Err(Error::Precondition("standard form keeps isolated vertices in the base".into()));
            }
            s.apply(op)?;
            stages.push(s.sub().clone());
        }
        let base = s.sub();
        if let Some(x) = base.vertex_ids().into_iter().find(|&x| !base.is_boundary(x) || base.degree(g, x) > 0) {
            return Err(Error::NotLayerable(format!("vertex {x} remains after stripping")));
        }
        stages.reverse();
        let mut ops = ops.to_vec();
        ops.reverse();
        let mut labels = vec![base.vertex_ids()];
        for &op in &ops {
            let mut next = labels.last().expect("base labels").clone();
            if let LayerOp::ContractBoundarySpike(e) = op {
                let i = next.iter().position(|&v| v == g.head(e)).expect("spike end is labelled");
                next[i] = g.tail(e);
            }
            labels.push(next);
        }
        Ok(Filtration { parent: g.clone(), stages, ops, labels })
    }

    /// Number of operations `n`.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Common size of every stage's boundary.
    pub fn boundary_size(&self) -> usize {
        self.labels[0].len()
    }

    pub fn top_labels(&self) -> &[usize] {
        self.labels.last().expect("at least one stage")
    }

    /// Permute every labelling so that the top one lists `order`.
    pub fn relabel_top(&mut self, order: &[usize]) -> Result<()> {
        let top = self.top_labels().to_vec();
        let mut sorted_a = top.clone();
        let mut sorted_b = order.to_vec();
        sorted_a.sort_unstable();
        sorted_b.sort_unstable();
        if sorted_a != sorted_b {
            return Err(Error::Precondition("new order is not a permutation of the top boundary".into()));
        }
        let perm: Vec<usize> = order.iter().map(|v| top.iter().position(|t| t == v).expect("present")).collect();
        for l in &mut self.labels {
            *l = perm.iter().map(|&p| l[p]).collect();
        }
        Ok(())
    }

    /// Check the stage chain, the operations and the label consistency.
    pub fn validate(&self) -> Result<()> {
        let g = &self.parent;
        if self.stages.len() != self.ops.len() + 1 || self.labels.len() != self.stages.len() {
            return Err(Error::Internal("filtration arrays have inconsistent lengths".into()));
        }
        for (j, st) in self.stages.iter().enumerate() {
            st.validate(g)?;
            let mut b: Vec<usize> = st.vertex_ids().into_iter().filter(|&x| st.is_boundary(x)).collect();
            let mut l = self.labels[j].clone();
            b.sort_unstable();
            l.sort_unstable();
            if b != l {
                return Err(Error::Internal(format!("labels of stage {j} are not its boundary")));
            }
        }
        for (j, &op) in self.ops.iter().enumerate() {
            let mut s = LayerState::from_sub(g, self.stages[j + 1].clone())?;
            s.apply(op)?;
            if s.sub() != &self.stages[j] {
                return Err(Error::Internal(format!("operation {j} does not produce the previous stage")));
            }
            let (lo, hi) = (&self.labels[j], &self.labels[j + 1]);
            for i in 0..lo.len() {
                let ok = match op {
                    LayerOp::ContractBoundarySpike(e) if lo[i] == g.head(e) => hi[i] == g.tail(e),
                    _ => lo[i] == hi[i],
                };
                if !ok {
                    return Err(Error::Internal(format!("labels of stages {j} and {} are inconsistent", j + 1)));
                }
            }
        }
        Ok(())
    }
}

/// Greedy standard-form filtration, or an error naming a leftover vertex.
pub fn standard_form_filtration(g: &PartialGraph) -> Result<Filtration> {
    let mut s = LayerState::new(g);
    let mut ops = Vec::new();
    loop {
        let next = s.strippable().into_iter().find(|op| !matches!(op, LayerOp::DeleteIsolatedBoundaryVertex(_)));
        match next {
            Some(op) => {
                s.apply(op)?;
                ops.push(op);
            }
            None => break,
        }
    }
    Filtration::from_strip_sequence(g, &ops)
}

/// One node of a complete-reducibility trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionStep {
    Empty,
    Strip { ops: Vec<LayerOp>, rest: Box<ReductionTrace> },
    SplitDisjoint(Vec<ReductionTrace>),
    SplitWedge { at: usize, pieces: Vec<ReductionTrace> },
    Irreducible,
}

/// A reduction of `part` (a sub-∂-graph of the input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub part: SubGraph,
    pub step: ReductionStep,
}

impl ReductionTrace {
    /// Whether every leaf is empty.
    pub fn is_complete(&self) -> bool {
        match &self.step {
            ReductionStep::Empty => true,
            ReductionStep::Irreducible => false,
            ReductionStep::Strip { rest, .. } => rest.is_complete(),
            ReductionStep::SplitDisjoint(c) | ReductionStep::SplitWedge { pieces: c, .. } => c.iter().all(|t| t.is_complete()),
        }
    }

    /// Irreducible leaves.
    pub fn irreducible_parts(&self) -> Vec<&SubGraph> {
        match &self.step {
            ReductionStep::Empty => vec![],
            ReductionStep::Irreducible => vec![&self.part],
            ReductionStep::Strip { rest, .. } => rest.irreducible_parts(),
            ReductionStep::SplitDisjoint(c) | ReductionStep::SplitWedge { pieces: c, .. } => {
                c.iter().flat_map(|t| t.irreducible_parts()).collect()
            }
        }
    }
}

fn part_components(g: &PartialGraph, part: &SubGraph, removed: Option<usize>) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.num_vertices()];
    let mut comps = Vec::new();
    for s in part.vertex_ids() {
        if seen[s] || Some(s) == removed {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![s];
        let mut comp = vec![s];
        while let Some(x) = stack.pop() {
            for e in part.out(g, x) {
                let y = g.head(e);
                if !seen[y] && Some(y) != removed {
                    seen[y] = true;
                    stack.push(y);
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

fn piece(g: &PartialGraph, part: &SubGraph, verts: &[usize], extra: Option<usize>) -> SubGraph {
    let mut s = SubGraph::empty(g);
    for &x in verts.iter().chain(extra.iter()) {
        s.vertices[x] = true;
        s.boundary[x] = part.boundary[x];
    }
    for e in part.dart_ids() {
        let (a, b) = (g.tail(e), g.head(e));
        let inside = |v: usize| verts.contains(&v);
        let keep = match extra {
            None => inside(a) && inside(b),
            Some(x) => (inside(a) || a == x) && (inside(b) || b == x) && (inside(a) || inside(b)),
        };
        if keep {
            s.darts[e] = true;
        }
    }
    s
}

fn boundary_cut_vertex(g: &PartialGraph, part: &SubGraph) -> Option<(usize, Vec<Vec<usize>>)> {
    part.vertex_ids()
        .into_iter()
        .filter(|&x| part.is_boundary(x))
        .find_map(|x| {
            let comps = part_components(g, part, Some(x));
            (comps.len() >= 2).then_some((x, comps))
        })
}

fn reduce_part(g: &PartialGraph, part: SubGraph) -> ReductionTrace {
    let mut s = LayerState::from_sub(g, part.clone()).expect("valid part");
    let ops = s.strip_all();
    if !ops.is_empty() {
        let rest = reduce_part(g, s.into_sub());
        return ReductionTrace { part, step: ReductionStep::Strip { ops, rest: Box::new(rest) } };
    }
    if part.is_empty() {
        return ReductionTrace { part, step: ReductionStep::Empty };
    }
    let comps = part_components(g, &part, None);
    if comps.len() >= 2 {
        let children = comps.iter().map(|c| reduce_part(g, piece(g, &part, c, None))).collect();
        return ReductionTrace { part, step: ReductionStep::SplitDisjoint(children) };
    }
    if let Some((x, comps)) = boundary_cut_vertex(g, &part) {
        let mut pieces: Vec<SubGraph> = comps.iter().map(|c| piece(g, &part, c, Some(x))).collect();
        // Loops at the cut vertex go with the first piece.
        for e in part.dart_ids() {
            if g.tail(e) == x && g.head(e) == x {
                pieces[0].darts[e] = true;
            }
        }
        let children = pieces.into_iter().map(|p| reduce_part(g, p)).collect();
        return ReductionTrace { part, step: ReductionStep::SplitWedge { at: x, pieces: children } };
    }
    ReductionTrace { part, step: ReductionStep::Irreducible }
}

/// Decide complete reducibility, returning the reduction tree.
pub fn is_completely_reducible(g: &PartialGraph) -> (bool, ReductionTrace) {
    let t = reduce_part(g, SubGraph::full(g));
    (t.is_complete(), t)
}

fn union_of(g: &PartialGraph, parts: &[&SubGraph]) -> SubGraph {
    let mut u = SubGraph::empty(g);
    for p in parts {
        for x in p.vertex_ids() {
            u.vertices[x] = true;
            u.boundary[x] |= p.boundary[x];
        }
        for e in p.dart_ids() {
            u.darts[e] = true;
        }
    }
    u
}

/// Check that a trace rebuilds its input, node by node.
pub fn replay(g: &PartialGraph, t: &ReductionTrace) -> Result<()> {
    let fail = |m: &str| Err(Error::Internal(format!("trace replay failed: {m}")));
    t.part.validate(g)?;
    match &t.step {
        ReductionStep::Empty => {
            if !t.part.is_empty() {
                return fail("non-empty leaf marked empty");
            }
        }
        ReductionStep::Strip { ops, rest } => {
            let mut s = LayerState::from_sub(g, t.part.clone())?;
            for &op in ops {
                s.apply(op)?;
            }
            if s.sub() != &rest.part {
                return fail("stripping does not produce the child");
            }
            replay(g, rest)?;
        }
        ReductionStep::SplitDisjoint(children) => {
            let parts: Vec<&SubGraph> = children.iter().map(|c| &c.part).collect();
            let total: usize = parts.iter().map(|p| p.vertex_ids().len()).sum();
            if union_of(g, &parts) != t.part || total != t.part.vertex_ids().len() {
                return fail("components do not partition the part");
            }
            for c in children {
                replay(g, c)?;
            }
        }
        ReductionStep::SplitWedge { at, pieces } => {
            if !t.part.is_boundary(*at) {
                return fail("wedge point is not a boundary vertex");
            }
            let parts: Vec<&SubGraph> = pieces.iter().map(|c| &c.part).collect();
            let total: usize = parts.iter().map(|p| p.vertex_ids().len()).sum();
            if union_of(g, &parts) != t.part || total != t.part.vertex_ids().len() + parts.len() - 1 {
                return fail("pieces do not glue back to the part");
            }
            if parts.iter().any(|p| !p.vertices[*at]) {
                return fail("a piece misses the wedge point");
            }
            for c in pieces {
                replay(g, c)?;
            }
        }
        ReductionStep::Irreducible => {
            let s = LayerState::from_sub(g, t.part.clone())?;
            if !s.strippable().is_empty() || part_components(g, &t.part, None).len() != 1 || boundary_cut_vertex(g, &t.part).is_some() {
                return fail("leaf marked irreducible can still be reduced");
            }
        }
    }
    Ok(())
}

fn rat(n: i64) -> Scalar {
    Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
}

/// Degenerate weights on a non-empty flower: at a boundary vertex of
/// degree `k` the weights are `1, …, 1, −(k−1)`; interior edges get `1`;
/// `d` cancels the boundary contributions. The witness is `0` on the
/// boundary and `1` inside.
pub fn degenerate_weights_general(flower: &PartialGraph) -> Result<(Network, VertexFunction)> {
    if flower.num_vertices() == 0 || !find_strippable(flower).is_empty() {
        return Err(Error::Precondition("input is not a non-empty flower".into()));
    }
    let mut w = vec![rat(1); flower.num_darts()];
    for x in flower.boundary_vertices() {
        let out = flower.out(x);
        let k = out.len() as i64;
        for (i, &e) in out.iter().enumerate() {
            let v = if i + 1 == out.len() { rat(-(k - 1)) } else { rat(1) };
            w[e] = v.clone();
            w[flower.rev(e)] = v;
        }
    }
    let mut d = vec![rat(0); flower.num_vertices()];
    for x in flower.interior_vertices() {
        let mut s = BigRational::zero();
        for &e in flower.out(x) {
            if flower.is_boundary(flower.head(e)) {
                s -= w[e].to_rational()?;
            }
        }
        d[x] = Scalar::Rat(s);
    }
    let u: VertexFunction = (0..flower.num_vertices()).map(|x| if flower.is_boundary(x) { rat(0) } else { rat(1) }).collect();
    let n = Network::new(flower.clone(), w, d)?;
    if !n.in_u0(&u)? || u.iter().all(|x| x.is_zero()) {
        return Err(Error::Internal("flower witness is not a nonzero element of U0".into()));
    }
    Ok((n, u))
}

/// For a non-layerable graph, degenerate weights on the whole graph built
/// from its flower, with a nonzero element of U₀. `None` when layerable.
pub fn layerability_witness(g: &PartialGraph) -> Result<Option<(Network, VertexFunction)>> {
    let red = reduce_to_flower(g);
    if red.is_empty() {
        return Ok(None);
    }
    let ex = red.flower.extract(g);
    let (fnet, fu) = degenerate_weights_general(&ex.graph)?;
    let mut w = vec![rat(1); g.num_darts()];
    for (i, &e) in ex.dart_ids.iter().enumerate() {
        w[e] = fnet.weight(i).clone();
    }
    let mut d = vec![rat(0); g.num_vertices()];
    let mut u = vec![rat(0); g.num_vertices()];
    for (i, &x) in ex.vertex_ids.iter().enumerate() {
        d[x] = fnet.offset(i).clone();
        u[x] = fu[i].clone();
    }
    let n = Network::new(g.clone(), w, d)?;
    if !n.in_u0(&u)? {
        return Err(Error::Internal("lifted witness is not in U0".into()));
    }
    Ok(Some((n, u)))
}

/// Edges lying on some cycle, as a mask over darts.
fn cycle_edges(g: &PartialGraph) -> Vec<bool> {
    // An edge lies on a cycle exactly when removing it keeps its endpoints connected.
    let mut on_cycle = vec![false; g.num_darts()];
    for e in g.edges() {
        let (a, b) = (g.tail(e), g.head(e));
        let mut seen = vec![false; g.num_vertices()];
        seen[a] = true;
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            for &f in g.out(x) {
                if f == e || f == g.rev(e) {
                    continue;
                }
                let y = g.head(f);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if seen[b] {
            on_cycle[e] = true;
            on_cycle[g.rev(e)] = true;
        }
    }
    on_cycle
}

/// Oriented fundamental cycles (as dart lists) of a spanning forest.
fn fundamental_cycles(g: &PartialGraph) -> Vec<Vec<usize>> {
    let n = g.num_vertices();
    let mut parent_dart: Vec<Option<usize>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = vec![false; g.num_darts()];
    for s in 0..n {
        if depth[s] != usize::MAX {
            continue;
        }
        depth[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &e in g.out(x) {
                let y = g.head(e);
                if depth[y] == usize::MAX {
                    depth[y] = depth[x] + 1;
                    parent_dart[y] = Some(e);
                    tree[e] = true;
                    tree[g.rev(e)] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    let mut cycles = Vec::new();
    for e in g.edges() {
        if tree[e] {
            continue;
        }
        // Walk e from a to b, then back up the tree from b to a.
        let (a, b) = (g.tail(e), g.head(e));
        let (mut x, mut y) = (b, a);
        let mut from_b = Vec::new();
        let mut from_a = Vec::new();
        while depth[x] > depth[y] {
            let p = parent_dart[x].expect("non-root");
            from_b.push(g.rev(p));
            x = g.tail(p);
        }
        while depth[y] > depth[x] {
            let p = parent_dart[y].expect("non-root");
            from_a.push(p);
            y = g.tail(p);
        }
        while x != y {
            let p = parent_dart[x].expect("non-root");
            from_b.push(g.rev(p));
            x = g.tail(p);
            let q = parent_dart[y].expect("non-root");
            from_a.push(q);
            y = g.tail(q);
        }
        let mut cycle = vec![e];
        cycle.extend(from_b);
        from_a.reverse();
        cycle.extend(from_a);
        cycles.push(cycle);
    }
    cycles
}

/// Degenerate normalized weights (`d = 0`) on an irreducible graph, with a
/// witness in U₀ that is nonzero at every interior vertex.
pub fn degenerate_weights_normalized(g: &PartialGraph) -> Result<(Network, VertexFunction)> {
    let (reducible, trace) = is_completely_reducible(g);
    if reducible || trace.step != ReductionStep::Irreducible {
        return Err(Error::Precondition("input is not irreducible".into()));
    }
    let on_cycle = cycle_edges(g);
    // Components of the graph with the cycle edges removed.
    let mut comp = vec![usize::MAX; g.num_vertices()];
    let mut count = 0;
    for s in 0..g.num_vertices() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &e in g.out(x) {
                let y = g.head(e);
                if !on_cycle[e] && comp[y] == usize::MAX {
                    comp[y] = count;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    let mut value = vec![None; count];
    for x in g.boundary_vertices() {
        value[comp[x]] = Some(0i64);
    }
    let mut next = 1;
    for v in value.iter_mut() {
        if v.is_none() {
            *v = Some(next);
            next += 1;
        }
    }
    let u: Vec<BigRational> = (0..g.num_vertices()).map(|x| BigRational::from_integer(value[comp[x]].expect("set").into())).collect();
    let du = |e: usize| &u[g.tail(e)] - &u[g.head(e)];

    let mut total = vec![BigRational::zero(); g.num_darts()];
    for cycle in fundamental_cycles(g) {
        let wj: Vec<(usize, BigRational)> = cycle.iter().map(|&e| (e, BigRational::one() / du(e))).collect();
        let mut alpha = BigRational::one();
        while wj.iter().any(|(e, w)| (&total[*e] + &alpha * w).is_zero()) {
            alpha += BigRational::one();
        }
        for (e, w) in wj {
            let add = &alpha * &w;
            total[e] += &add;
            total[g.rev(e)] += add;
        }
    }
    let w: Vec<Scalar> = (0..g.num_darts())
        .map(|e| if on_cycle[e] { Scalar::Rat(total[e].clone()) } else { rat(1) })
        .collect();
    if w.iter().any(|x| x.is_zero()) {
        return Err(Error::Internal("a combined cycle weight vanished".into()));
    }
    let n = Network::new(g.clone(), w, vec![rat(0); g.num_vertices()])?;
    let witness: VertexFunction = u.into_iter().map(Scalar::Rat).collect();
    if !n.in_u0(&witness)? {
        return Err(Error::Internal("normalized witness is not in U0".into()));
    }
    if g.interior_vertices().iter().any(|&x| witness[x].is_zero()) {
        return Err(Error::Internal("normalized witness vanishes at an interior vertex".into()));
    }
    Ok((n, witness))
}
