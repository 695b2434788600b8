//! Circular planar ∂-graphs: disk embeddings given by rotation systems,
//! face tracing, duals with reciprocal weights, and harmonic conjugates.
//!
//! The disk boundary between consecutive boundary vertices is modelled by
//! virtual arcs. At a boundary vertex the rotation list is linear: it starts
//! just after the outward direction and runs counterclockwise. A graph with
//! no boundary vertices is embedded with vertex 0 on the circle.

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use std::cmp::Ordering;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::exact_algebra::{ModuleDecomposition, Scalar};
use crate::fundamental::upsilon_reduced;
use crate::network::{Network, VertexFunction};
use crate::partial_graph::PartialGraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedPartialGraph {
    pub graph: PartialGraph,
    /// Counterclockwise outgoing darts at each vertex.
    pub rotation: Vec<Vec<usize>>,
    /// Boundary vertices in counterclockwise order around the circle.
    pub boundary_order: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    Exterior,
    /// A face with a side along the circle, between circle vertices `i` and `i + 1`.
    Boundary(usize),
    Interior,
}

/// Faces of the augmented map. Darts `0..2E` are real; dart `2E + 2i` is the
/// virtual arc from circle vertex `i` to circle vertex `i + 1` and
/// `2E + 2i + 1` is its reverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Faces {
    pub walks: Vec<Vec<usize>>,
    pub kinds: Vec<FaceKind>,
    pub face_of: Vec<usize>,
}

impl Faces {
    /// Index of the face to the right of a dart.
    pub fn right_of(&self, e: usize) -> usize {
        self.face_of[e]
    }
}

fn rotate_linear(list: &[usize], start: usize) -> Vec<usize> {
    list[start..].iter().chain(&list[..start]).copied().collect()
}

impl EmbeddedPartialGraph {
    pub fn new(graph: PartialGraph, rotation: Vec<Vec<usize>>, boundary_order: Vec<usize>) -> Result<Self> {
        let eg = EmbeddedPartialGraph { graph, rotation, boundary_order };
        eg.validate()?;
        Ok(eg)
    }

    /// The vertices placed on the circle.
    pub fn circle_vertices(&self) -> Vec<usize> {
        if self.boundary_order.is_empty() && self.graph.num_vertices() > 0 {
            vec![0]
        } else {
            self.boundary_order.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.graph;
        g.validate()?;
        if g.num_vertices() == 0 {
            return Err(Error::InvalidEmbedding("empty graph".into()));
        }
        if !g.is_connected() {
            return Err(Error::InvalidEmbedding("disconnected graphs have no unique dual".into()));
        }
        if self.rotation.len() != g.num_vertices() {
            return Err(Error::InvalidEmbedding("rotation must list every vertex".into()));
        }
        for x in 0..g.num_vertices() {
            let mut a = self.rotation[x].clone();
            let mut b = g.out(x).to_vec();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::InvalidEmbedding(format!("rotation at {x} does not list its outgoing darts")));
            }
        }
        let mut order = self.boundary_order.clone();
        order.sort_unstable();
        if order != g.boundary_vertices() {
            return Err(Error::InvalidEmbedding("boundary order is not a permutation of the boundary".into()));
        }
        let faces = self.trace_faces()?;
        let v = g.num_vertices() as i64;
        let e = (g.num_edges() + self.circle_vertices().len()) as i64;
        let f = faces.walks.len() as i64;
        if v - e + f != 2 {
            return Err(Error::InvalidEmbedding(format!("Euler characteristic {} is not that of a disk", v - e + f)));
        }
        Ok(())
    }

    fn augmented_rotation(&self) -> Vec<Vec<usize>> {
        let g = &self.graph;
        let circle = self.circle_vertices();
        let k = circle.len();
        let base = g.num_darts();
        let mut rot = self.rotation.clone();
        for (i, &b) in circle.iter().enumerate() {
            let prev = (i + k - 1) % k;
            let mut list = vec![base + 2 * i];
            list.extend(&self.rotation[b]);
            list.push(base + 2 * prev + 1);
            rot[b] = list;
        }
        rot
    }

    /// Trace faces with `next(e) = σ(rev e)`, so each face lies to the right
    /// of its darts and bounded faces are walked clockwise.
    pub fn trace_faces(&self) -> Result<Faces> {
        let g = &self.graph;
        let k = self.circle_vertices().len();
        let base = g.num_darts();
        let total = base + 2 * k;
        let rev = |e: usize| if e < base { g.rev(e) } else { base + ((e - base) ^ 1) };
        let rot = self.augmented_rotation();
        let mut succ = vec![usize::MAX; total];
        for list in &rot {
            for (i, &e) in list.iter().enumerate() {
                succ[e] = list[(i + 1) % list.len()];
            }
        }
        if succ.contains(&usize::MAX) {
            return Err(Error::InvalidEmbedding("a dart is missing from the rotation".into()));
        }
        let mut face_of = vec![usize::MAX; total];
        let mut walks = Vec::new();
        let mut kinds = Vec::new();
        for s in 0..total {
            if face_of[s] != usize::MAX {
                continue;
            }
            let id = walks.len();
            let mut walk = Vec::new();
            let mut e = s;
            loop {
                face_of[e] = id;
                walk.push(e);
                let r = rev(e);
                e = succ[r];
                if e == s {
                    break;
                }
                if face_of[e] != usize::MAX {
                    return Err(Error::InvalidEmbedding("face tracing does not close".into()));
                }
            }
            let forward = walk.iter().filter(|&&e| e >= base && (e - base).is_multiple_of(2)).count();
            let reverse: Vec<usize> = walk.iter().filter(|&&e| e >= base && (e - base) % 2 == 1).map(|&e| (e - base) / 2).collect();
            let kind = if forward == walk.len() {
                FaceKind::Exterior
            } else if forward > 0 || reverse.len() > 1 {
                return Err(Error::InvalidEmbedding("a face touches the circle more than once".into()));
            } else if let Some(&i) = reverse.first() {
                FaceKind::Boundary(i)
            } else {
                FaceKind::Interior
            };
            walks.push(walk);
            kinds.push(kind);
        }
        if kinds.iter().filter(|k| **k == FaceKind::Exterior).count() != 1 {
            return Err(Error::InvalidEmbedding("the circle does not bound a single exterior face".into()));
        }
        Ok(Faces { walks, kinds, face_of })
    }
}

/// The dual network together with its embedding. Dart `e` of the dual is
/// `e†`, running from the face right of `e` to the face left of `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualNetwork {
    pub embedded: EmbeddedPartialGraph,
    pub network: Network,
    /// Primal face walk (augmented darts) for each dual vertex.
    pub faces: Vec<Vec<usize>>,
}

fn check_network(n: &Network, eg: &EmbeddedPartialGraph) -> Result<()> {
    if n.graph() != &eg.graph {
        return Err(Error::Precondition("network and embedding have different graphs".into()));
    }
    if !n.has_zero_offsets() {
        return Err(Error::Precondition("duality needs d = 0".into()));
    }
    Ok(())
}

/// The dual embedded ∂-graph, with dual vertex ids given to faces in order
/// of their smallest dart.
pub fn dual_graph(eg: &EmbeddedPartialGraph) -> Result<(EmbeddedPartialGraph, Vec<Vec<usize>>)> {
    let g = &eg.graph;
    let base = g.num_darts();
    let faces = eg.trace_faces()?;
    let keep: Vec<usize> = (0..faces.walks.len()).filter(|&f| faces.kinds[f] != FaceKind::Exterior).collect();
    let mut id = vec![usize::MAX; faces.walks.len()];
    for (i, &f) in keep.iter().enumerate() {
        id[f] = i;
    }
    let boundary: Vec<bool> = keep.iter().map(|&f| matches!(faces.kinds[f], FaceKind::Boundary(_))).collect();
    let tail: Vec<usize> = (0..base).map(|e| id[faces.right_of(e)]).collect();
    let head: Vec<usize> = (0..base).map(|e| id[faces.right_of(g.rev(e))]).collect();
    let rev: Vec<usize> = (0..base).map(|e| g.rev(e)).collect();
    let dual = PartialGraph::from_raw(boundary, tail, head, rev);
    let mut rotation = Vec::with_capacity(keep.len());
    let mut boundary_order = vec![(usize::MAX, 0); 0];
    for &f in &keep {
        let walk = &faces.walks[f];
        let list: Vec<usize> = match faces.kinds[f] {
            FaceKind::Boundary(i) => {
                let start = walk.iter().position(|&e| e >= base).expect("boundary face has an arc");
                boundary_order.push((i, id[f]));
                rotate_linear(walk, start)[1..].iter().rev().copied().collect()
            }
            _ => walk.iter().rev().copied().collect(),
        };
        rotation.push(list);
    }
    boundary_order.sort_unstable();
    let order = boundary_order.into_iter().map(|(_, v)| v).collect();
    let walks = keep.iter().map(|&f| faces.walks[f].clone()).collect();
    Ok((EmbeddedPartialGraph::new(dual, rotation, order)?, walks))
}

/// The circular planar dual with `w(e†) = w(e)⁻¹`.
pub fn dual(n: &Network, eg: &EmbeddedPartialGraph) -> Result<DualNetwork> {
    check_network(n, eg)?;
    let (embedded, faces) = dual_graph(eg)?;
    let inv: Vec<BigRational> = n
        .weights()
        .iter()
        .map(|w| {
            let r = w.to_rational()?;
            if r.is_zero() {
                Err(Error::NotInvertible("zero weight has no reciprocal".into()))
            } else {
                Ok(r.recip())
            }
        })
        .collect::<Result<_>>()?;
    let integral = inv.iter().all(|r| r.is_integer());
    let to_scalar = |r: &BigRational| if integral { Scalar::Int(r.to_integer()) } else { Scalar::Rat(r.clone()) };
    let w = inv.iter().map(to_scalar).collect();
    let zero = if integral { Scalar::int(0) } else { Scalar::rat(0, 1) };
    let network = Network::new(embedded.graph.clone(), w, vec![zero; embedded.graph.num_vertices()])?;
    Ok(DualNetwork { embedded, network, faces })
}

/// Check that `G††` is `G` via `tail_{G††}(e) ↦ head_G(e)`, including the
/// boundary flags of the embedded graph.
pub fn double_dual_check(eg: &EmbeddedPartialGraph) -> Result<bool> {
    let (d1, _) = dual_graph(eg)?;
    let (d2, _) = dual_graph(&d1)?;
    let g = &eg.graph;
    if d2.graph.num_vertices() != g.num_vertices() || d2.graph.num_darts() != g.num_darts() {
        return Ok(false);
    }
    let mut map = vec![usize::MAX; g.num_vertices()];
    for e in 0..g.num_darts() {
        let x = d2.graph.tail(e);
        if map[x] != usize::MAX && map[x] != g.head(e) {
            return Ok(false);
        }
        map[x] = g.head(e);
    }
    let circle = eg.circle_vertices();
    for e in 0..g.num_darts() {
        if map[d2.graph.head(e)] != g.tail(e) {
            return Ok(false);
        }
    }
    Ok((0..g.num_vertices()).all(|x| d2.graph.is_boundary(x) == circle.contains(&map[x])))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub primal: ModuleDecomposition,
    pub dual: ModuleDecomposition,
}

impl DualityReport {
    pub fn agree(&self) -> bool {
        self.primal == self.dual
    }
}

/// Υ̃ of a normalized network and of its dual.
pub fn duality_report(n: &Network, eg: &EmbeddedPartialGraph) -> Result<DualityReport> {
    let d = dual(n, eg)?;
    Ok(DualityReport { primal: upsilon_reduced(n)?, dual: upsilon_reduced(&d.network)? })
}

pub fn verify_duality(n: &Network, eg: &EmbeddedPartialGraph) -> Result<bool> {
    Ok(duality_report(n, eg)?.agree())
}

/// A function `v` on the dual with `w(e) du(e) = dv(e†)`, normalized by
/// `v = 0` at dual vertex 0. Fails with `NotHarmonic` when no such `v`
/// exists.
pub fn harmonic_conjugate(n: &Network, eg: &EmbeddedPartialGraph, u: &[Scalar]) -> Result<(DualNetwork, VertexFunction)> {
    let d = dual(n, eg)?;
    let g = n.graph();
    if u.len() != g.num_vertices() {
        return Err(Error::Dimension("function does not cover every vertex".into()));
    }
    let ring = u[0].ring();
    let w: Vec<Scalar> = n.weights().iter().map(|x| x.convert(ring)).collect::<Result<_>>()?;
    let flow = |e: usize| -> Result<Scalar> { w[e].mul(&u[g.tail(e)].sub(&u[g.head(e)])?) };
    let dg = &d.embedded.graph;
    let mut v: Vec<Option<Scalar>> = vec![None; dg.num_vertices()];
    v[0] = Some(Scalar::zero_in(ring));
    let mut queue = VecDeque::from([0usize]);
    while let Some(f) = queue.pop_front() {
        let vf = v[f].clone().expect("visited");
        for &e in dg.out(f) {
            let h = dg.head(e);
            if v[h].is_none() {
                v[h] = Some(vf.sub(&flow(e)?)?);
                queue.push_back(h);
            }
        }
    }
    let v: VertexFunction = v.into_iter().map(|x| x.expect("dual is connected")).collect();
    for e in 0..dg.num_darts() {
        if v[dg.tail(e)].sub(&v[dg.head(e)])? != flow(e)? {
            return Err(Error::NotHarmonic(format!("conjugate form is not closed around dart {e}")));
        }
    }
    Ok((d, v))
}

fn half(r: (i64, i64), v: (i64, i64)) -> u8 {
    let cross = r.0 * v.1 - r.1 * v.0;
    let dot = r.0 * v.0 + r.1 * v.1;
    if cross > 0 || (cross == 0 && dot > 0) {
        0
    } else {
        1
    }
}

/// Order direction vectors counterclockwise starting just after `r`.
fn ccw_from(r: (i64, i64), a: (i64, i64), b: (i64, i64)) -> Ordering {
    half(r, a).cmp(&half(r, b)).then_with(|| {
        let cross = a.0 * b.1 - a.1 * b.0;
        0.cmp(&cross)
    })
}

/// Rotation system of a straight-line drawing with integer coordinates.
/// Boundary lists start just after the outward radial direction.
pub fn rotation_from_coordinates(g: &PartialGraph, pos: &[(i64, i64)]) -> Vec<Vec<usize>> {
    (0..g.num_vertices())
        .map(|x| {
            let r = if g.is_boundary(x) { pos[x] } else { (1, 0) };
            let dir = |e: usize| (pos[g.head(e)].0 - pos[x].0, pos[g.head(e)].1 - pos[x].1);
            let mut list = g.out(x).to_vec();
            list.sort_by(|&a, &b| ccw_from(r, dir(a), dir(b)));
            list
        })
        .collect()
}

const CIRCLE: [(i64, i64); 12] =
    [(5, 0), (4, 3), (3, 4), (0, 5), (-3, 4), (-4, 3), (-5, 0), (-4, -3), (-3, -4), (0, -5), (3, -4), (4, -3)];

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn strictly_inside_segment(p: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    orient(a, b, p) == 0 && p != a && p != b && (p.0 - a.0) * (p.0 - b.0) <= 0 && (p.1 - a.1) * (p.1 - b.1) <= 0
}

fn properly_cross(a: (i64, i64), b: (i64, i64), c: (i64, i64), d: (i64, i64)) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0 && o3 * o4 < 0
}

/// A random connected circular planar ∂-graph with at most `max_vertices`
/// vertices, drawn with straight segments inside a circle of radius 5.
pub fn random_circular_planar<R: Rng>(rng: &mut R, max_vertices: usize) -> EmbeddedPartialGraph {
    let max_vertices = max_vertices.max(2);
    let total = rng.gen_range(2..=max_vertices);
    let k = rng.gen_range(1..=total.min(5));
    let mut slots: Vec<usize> = (0..CIRCLE.len()).collect();
    for i in (1..slots.len()).rev() {
        slots.swap(i, rng.gen_range(0..=i));
    }
    let mut chosen: Vec<usize> = slots[..k].to_vec();
    chosen.sort_unstable();
    let mut pos: Vec<(i64, i64)> = chosen.iter().map(|&i| CIRCLE[i]).collect();
    while pos.len() < total {
        let p = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        if !pos.contains(&p) {
            pos.push(p);
        }
    }
    let mut flags = vec![false; total];
    flags[..k].iter_mut().for_each(|b| *b = true);
    let mut pairs: Vec<(usize, usize)> = (0..total).flat_map(|a| (a + 1..total).map(move |b| (a, b))).collect();
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.gen_range(0..=i));
    }
    let mut segs: Vec<(usize, usize)> = Vec::new();
    for (a, b) in pairs {
        let blocked = (0..total).any(|p| strictly_inside_segment(pos[p], pos[a], pos[b]))
            || segs.iter().any(|&(c, d)| properly_cross(pos[a], pos[b], pos[c], pos[d]));
        if !blocked {
            segs.push((a, b));
        }
    }
    let build = |segs: &[(usize, usize)]| {
        let mut g = PartialGraph::with_vertices(flags.clone());
        for &(a, b) in segs {
            g.add_edge(a, b);
        }
        g
    };
    let mut i = 0;
    while i < segs.len() {
        if rng.gen_bool(0.4) {
            let mut trial = segs.clone();
            trial.remove(i);
            if build(&trial).is_connected() {
                segs = trial;
                continue;
            }
        }
        i += 1;
    }
    let g = build(&segs);
    let rotation = rotation_from_coordinates(&g, &pos);
    EmbeddedPartialGraph::new(g, rotation, (0..k).collect()).expect("straight-line drawing is a disk embedding")
}

/// Random `±1` weights with `d = 0`.
pub fn random_unit_network<R: Rng>(rng: &mut R, eg: &EmbeddedPartialGraph) -> Network {
    let w = (0..eg.graph.num_edges()).map(|_| Scalar::int(if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
    Network::from_edge_weights(eg.graph.clone(), w, vec![Scalar::int(0); eg.graph.num_vertices()]).expect("unit weights")
}

/// The number of vertices with the circle adjacent, as a quick summary.
pub fn boundary_face_count(eg: &EmbeddedPartialGraph) -> Result<usize> {
    Ok(eg.trace_faces()?.kinds.iter().filter(|k| matches!(k, FaceKind::Boundary(_))).count())
}
