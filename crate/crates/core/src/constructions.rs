//! Inductive moves on orbit graphs.
//!
//! A gain-modified edge pinch `K*(6, n, j)` adds a body `z` to a body-bar
//! graph: `j` existing edges are cut through `z`, `n - j` loops are placed on
//! `z`, and `6 - n` new edges join `z` to existing bodies. Every new edge set
//! has to respect the sparsity count. Starting from one body with three
//! independent loops, pinches generate exactly the tight sparse graphs; the
//! reducer here runs that induction backwards by splitting off pairs of edges
//! at a low-degree body.
//!
//! Vertex additions and edge splits are the corresponding moves for bar-joint
//! orbit graphs.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gain::GainVector;
use crate::graph::{BodyBarOrbitGraph, BodyId, EdgeId, OrientedEdge};
use crate::lattice::lattice_rank;
use crate::rigidity::{BarJointOrbitGraph, RankConfig};
use crate::sparsity::{check_sparsity, check_sparsity_bruteforce, is_sparse, SparsityEngine};

/// An edge cut through the new body: `<a, b; m>`, read from `a = tail`,
/// becomes `<a, z; first_gain>` and `<z, b; m - first_gain>`, with ids
/// `first_id` and `second_id`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PinchedEdge {
    pub edge: EdgeId,
    pub tail: BodyId,
    pub first_gain: GainVector,
    pub first_id: EdgeId,
    pub second_id: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NewLoop {
    pub id: EdgeId,
    pub gain: GainVector,
}

/// `<z, target; gain>`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NewBar {
    pub id: EdgeId,
    pub target: BodyId,
    pub gain: GainVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PinchSpec {
    pub body: BodyId,
    pub label: String,
    pub pinched: Vec<PinchedEdge>,
    pub loops: Vec<NewLoop>,
    pub new_edges: Vec<NewBar>,
    /// New edges stored as `<y, x; -m>` instead of the `<x, y; m>` written above.
    #[cfg_attr(feature = "serde", serde(default))]
    pub reversed: Vec<EdgeId>,
}

impl PinchSpec {
    /// A spec whose new body and edges take the next free ids of `h`.
    pub fn fresh(
        h: &BodyBarOrbitGraph,
        pinched: &[(EdgeId, GainVector)],
        loops: &[GainVector],
        new_edges: &[(BodyId, GainVector)],
    ) -> Self {
        let body = h.next_body_id();
        let mut label = format!("B{}", body.0);
        while h.body_by_label(&label).is_some() {
            label.push('\'');
        }
        let mut next = h.next_edge_id().0;
        let mut fresh = || {
            next += 1;
            EdgeId(next - 1)
        };
        PinchSpec {
            body,
            label,
            pinched: pinched
                .iter()
                .map(|&(edge, first_gain)| PinchedEdge {
                    edge,
                    tail: h.edge(edge).map_or(BodyId(u32::MAX), |e| e.tail),
                    first_gain,
                    first_id: fresh(),
                    second_id: fresh(),
                })
                .collect(),
            loops: loops.iter().map(|&gain| NewLoop { id: fresh(), gain }).collect(),
            new_edges: new_edges.iter().map(|&(target, gain)| NewBar { id: fresh(), target, gain }).collect(),
            reversed: Vec::new(),
        }
    }

    /// `6 - (number of new edges)`; the new body ends with degree `6 + n`.
    pub fn n(&self) -> usize {
        self.pinched.len() + self.loops.len()
    }

    pub fn j(&self) -> usize {
        self.pinched.len()
    }

    fn new_edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.pinched
            .iter()
            .flat_map(|p| [p.first_id, p.second_id])
            .chain(self.loops.iter().map(|l| l.id))
            .chain(self.new_edges.iter().map(|b| b.id))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PinchViolation {
    ItemCount {
        count: usize,
    },
    Shape {
        n: usize,
        j: usize,
    },
    UnknownEdge(EdgeId),
    NotIncident {
        edge: EdgeId,
        body: BodyId,
    },
    RepeatedEdge(EdgeId),
    UnknownBody(BodyId),
    BodyInUse(BodyId),
    LabelInUse(String),
    EdgeIdInUse(EdgeId),
    /// A `reversed` entry that is not a new edge, or is listed twice.
    BadReversal(EdgeId),
    /// A set of new edges breaking the count.
    NotSparse(Vec<EdgeId>),
}

impl fmt::Display for PinchViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PinchViolation::ItemCount { count } => {
                write!(f, "pinched edges, loops and new edges number {count}, expected 6")
            }
            PinchViolation::Shape { n, j } => write!(f, "K*(6,{n},{j}) needs j <= n <= 5 and n - j <= 3"),
            PinchViolation::UnknownEdge(e) => write!(f, "pinched edge {e} does not exist"),
            PinchViolation::NotIncident { edge, body } => write!(f, "edge {edge} does not end at body {body}"),
            PinchViolation::RepeatedEdge(e) => write!(f, "edge {e} is pinched twice"),
            PinchViolation::UnknownBody(b) => write!(f, "new edge targets missing body {b}"),
            PinchViolation::BodyInUse(b) => write!(f, "body id {b} is taken"),
            PinchViolation::LabelInUse(l) => write!(f, "body label {l:?} is taken"),
            PinchViolation::EdgeIdInUse(e) => write!(f, "edge id {e} is taken"),
            PinchViolation::BadReversal(e) => write!(f, "reversed edge {e} is not a distinct new edge"),
            PinchViolation::NotSparse(w) => write!(f, "new edges {w:?} violate the sparsity count"),
        }
    }
}

fn structural_checks(h: &BodyBarOrbitGraph, spec: &PinchSpec) -> core::result::Result<(), PinchViolation> {
    let count = spec.pinched.len() + spec.loops.len() + spec.new_edges.len();
    if count != 6 {
        return Err(PinchViolation::ItemCount { count });
    }
    let (n, j) = (spec.n(), spec.j());
    if n > 5 || n - j > 3 {
        return Err(PinchViolation::Shape { n, j });
    }
    if h.contains_body(spec.body) {
        return Err(PinchViolation::BodyInUse(spec.body));
    }
    if h.body_by_label(&spec.label).is_some() {
        return Err(PinchViolation::LabelInUse(spec.label.clone()));
    }
    let mut pinched = BTreeSet::new();
    for p in &spec.pinched {
        match h.edge(p.edge) {
            None => return Err(PinchViolation::UnknownEdge(p.edge)),
            Some(e) if e.from_end(p.tail).is_none() => {
                return Err(PinchViolation::NotIncident { edge: p.edge, body: p.tail })
            }
            Some(_) => {}
        }
        if !pinched.insert(p.edge) {
            return Err(PinchViolation::RepeatedEdge(p.edge));
        }
    }
    if let Some(b) = spec.new_edges.iter().find(|b| !h.contains_body(b.target)) {
        return Err(PinchViolation::UnknownBody(b.target));
    }
    // Ids of pinched edges are released and may be reused.
    let mut taken: BTreeSet<EdgeId> = h.edge_ids().filter(|e| !pinched.contains(e)).collect();
    for id in spec.new_edge_ids() {
        if !taken.insert(id) {
            return Err(PinchViolation::EdgeIdInUse(id));
        }
    }
    let mut flipped = BTreeSet::new();
    for &id in &spec.reversed {
        if !spec.new_edge_ids().any(|e| e == id) || !flipped.insert(id) {
            return Err(PinchViolation::BadReversal(id));
        }
    }
    Ok(())
}

fn build_pinch(h: &BodyBarOrbitGraph, spec: &PinchSpec) -> Result<BodyBarOrbitGraph> {
    let mut g = h.clone();
    let z = spec.body;
    g.insert_body(z, spec.label.clone())?;
    for p in &spec.pinched {
        let e = g.remove_edge(p.edge)?.from_end(p.tail).expect("incidence checked");
        g.insert_edge(OrientedEdge::new(p.first_id, e.tail, z, p.first_gain))?;
        g.insert_edge(OrientedEdge::new(p.second_id, z, e.head, e.gain - p.first_gain))?;
    }
    for l in &spec.loops {
        g.insert_edge(OrientedEdge::new(l.id, z, z, l.gain))?;
    }
    for b in &spec.new_edges {
        g.insert_edge(OrientedEdge::new(b.id, z, b.target, b.gain))?;
    }
    for &id in &spec.reversed {
        let e = g.remove_edge(id)?;
        g.insert_edge(e.reversed())?;
    }
    Ok(g)
}

/// Checks the shape of `spec` against `h` and that every subset of the new
/// edges (pinched halves included) satisfies the count in the pinched graph.
pub fn validate_pinch(h: &BodyBarOrbitGraph, spec: &PinchSpec) -> Result<()> {
    structural_checks(h, spec)?;
    let pinched = build_pinch(h, spec)?;
    let mut local = BodyBarOrbitGraph::new();
    for (b, label) in pinched.labelled_bodies() {
        local.insert_body(b, label.into())?;
    }
    for id in spec.new_edge_ids() {
        local.insert_edge(*pinched.edge(id).expect("new edge was inserted"))?;
    }
    let verdict = check_sparsity_bruteforce(&local)?;
    match verdict.witness {
        Some(w) => Err(PinchViolation::NotSparse(w).into()),
        None => Ok(()),
    }
}

/// The pinched graph: one more body and six more edges.
pub fn apply_pinch(h: &BodyBarOrbitGraph, spec: &PinchSpec) -> Result<BodyBarOrbitGraph> {
    validate_pinch(h, spec)?;
    build_pinch(h, spec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveViolation {
    UnknownVertex(usize),
    UnknownEdge(EdgeId),
    /// Two new edges to `target` with the same gain.
    RepeatedGain {
        target: usize,
        gain: GainVector,
    },
    /// Three new edges to `target` whose gains span a gain space of rank < 2.
    DegenerateGainSpace {
        target: usize,
        gains: [GainVector; 3],
    },
}

impl fmt::Display for MoveViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveViolation::UnknownVertex(v) => write!(f, "vertex {v} does not exist"),
            MoveViolation::UnknownEdge(e) => write!(f, "edge {e} does not exist"),
            MoveViolation::RepeatedGain { target, gain } => {
                write!(f, "two new edges to vertex {target} share the gain {gain}")
            }
            MoveViolation::DegenerateGainSpace { target, gains: [a, b, c] } => {
                write!(f, "new edges to vertex {target} with gains {a}, {b}, {c} span a gain space of rank < 2")
            }
        }
    }
}

/// New edges `<v0, target; gain>` of a vertex addition.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VertexAdditionSpec {
    pub edges: [(usize, GainVector); 3],
}

/// Split of `edge = <v1, v2; m>` into `<v1, v0; 0>`, `<v0, v2; m>` plus two
/// further edges `<v0, target; gain>`.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeSplitSpec {
    pub edge: EdgeId,
    pub extra: [(usize, GainVector); 2],
}

/// Conditions on the edges leaving the new vertex: equal targets need
/// distinct gains, and three edges to one target need a gain space of rank 2.
fn check_new_star(star: &[(usize, GainVector)]) -> core::result::Result<(), MoveViolation> {
    for (i, a) in star.iter().enumerate() {
        if let Some(b) = star[i + 1..].iter().find(|b| b == &a) {
            return Err(MoveViolation::RepeatedGain { target: b.0, gain: b.1 });
        }
    }
    for (i, a) in star.iter().enumerate() {
        for (k, b) in star.iter().enumerate().skip(i + 1) {
            for c in star.iter().skip(k + 1) {
                if a.0 == b.0 && b.0 == c.0 {
                    let d = |x: GainVector| (x - a.1).0.map(i128::from);
                    if lattice_rank(&[d(b.1), d(c.1)]) < 2 {
                        return Err(MoveViolation::DegenerateGainSpace { target: a.0, gains: [a.1, b.1, c.1] });
                    }
                }
            }
        }
    }
    Ok(())
}

fn attach(g: &mut BarJointOrbitGraph, star: &[(usize, GainVector)]) -> Result<usize> {
    if let Some(&(v, _)) = star.iter().find(|(v, _)| *v >= g.vertex_count()) {
        return Err(MoveViolation::UnknownVertex(v).into());
    }
    check_new_star(star)?;
    let v0 = g.add_vertex();
    for &(target, gain) in star {
        g.add_edge(v0, target, gain)?;
    }
    Ok(v0)
}

/// Adds a vertex of degree 3; returns the new graph and the new vertex.
pub fn vertex_addition(g: &BarJointOrbitGraph, spec: &VertexAdditionSpec) -> Result<(BarJointOrbitGraph, usize)> {
    let mut out = g.clone();
    let v0 = attach(&mut out, &spec.edges)?;
    Ok((out, v0))
}

/// Replaces an edge by a vertex of degree 4 on it.
pub fn edge_split(g: &BarJointOrbitGraph, spec: &EdgeSplitSpec) -> Result<(BarJointOrbitGraph, usize)> {
    let mut out = g.clone();
    let e = out.remove_edge(spec.edge).map_err(|_| MoveViolation::UnknownEdge(spec.edge))?;
    // <v1, v0; 0> seen from v0 is <v0, v1; 0>
    let star = [(e.tail, GainVector::ZERO), (e.head, e.gain), spec.extra[0], spec.extra[1]];
    let v0 = attach(&mut out, &star)?;
    Ok((out, v0))
}

/// Default number of rejected samples tolerated per pinch by the generator.
pub const DEFAULT_RETRY_BUDGET: usize = 10_000;
/// Generator gains are drawn coordinatewise from `-GAIN_RANGE..=GAIN_RANGE`.
pub const GAIN_RANGE: i64 = 2;

/// The one-body seed graph with loops `(1,0,0)`, `(0,1,0)`, `(0,0,1)`.
pub fn seed_graph() -> BodyBarOrbitGraph {
    BodyBarOrbitGraph::from_edges(1, &[(0, 0, [1, 0, 0]), (0, 0, [0, 1, 0]), (0, 0, [0, 0, 1])])
        .expect("seed graph is well formed")
}

pub fn random_tight_graph(n_bodies: usize, seed: u64) -> Result<BodyBarOrbitGraph> {
    random_tight_graph_with_budget(n_bodies, seed, DEFAULT_RETRY_BUDGET)
}

/// Grows the seed graph by `n_bodies - 1` random valid pinches.
pub fn random_tight_graph_with_budget(n_bodies: usize, seed: u64, budget: usize) -> Result<BodyBarOrbitGraph> {
    if n_bodies == 0 {
        return Err(Error::Domain("at least one body is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = seed_graph();
    for _ in 1..n_bodies {
        g = random_pinch(&g, &mut rng, budget)?;
    }
    Ok(g)
}

fn random_gain<R: Rng>(rng: &mut R) -> GainVector {
    GainVector([(); 3].map(|_| rng.gen_range(-GAIN_RANGE..=GAIN_RANGE)))
}

fn random_pinch<R: Rng>(g: &BodyBarOrbitGraph, rng: &mut R, budget: usize) -> Result<BodyBarOrbitGraph> {
    let shapes: Vec<(usize, usize)> = (0..=5usize)
        .flat_map(|n| (n.saturating_sub(3)..=n).map(move |j| (n, j)))
        .filter(|&(_, j)| j <= g.edge_count())
        .collect();
    let edges: Vec<EdgeId> = g.edge_ids().collect();
    let bodies: Vec<BodyId> = g.bodies().collect();
    for _ in 0..budget {
        let (n, j) = shapes[rng.gen_range(0..shapes.len())];
        let pinched: Vec<(EdgeId, GainVector)> =
            sample(rng, edges.len(), j).into_iter().map(|i| (edges[i], random_gain(rng))).collect();
        let loops: Vec<GainVector> = (0..n - j).map(|_| random_gain(rng)).collect();
        let bars: Vec<(BodyId, GainVector)> =
            (0..6 - n).map(|_| (bodies[rng.gen_range(0..bodies.len())], random_gain(rng))).collect();
        let spec = PinchSpec::fresh(g, &pinched, &loops, &bars);
        match validate_pinch(g, &spec) {
            Ok(()) => return build_pinch(g, &spec),
            Err(Error::Pinch(_)) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::SamplingExhausted { attempts: budget })
}

/// The endpoint shared by two non-loop edges, when there is exactly one.
fn shared_endpoint(e: &OrientedEdge, f: &OrientedEdge) -> Result<BodyId> {
    let common: BTreeSet<BodyId> = [e.tail, e.head].into_iter().filter(|b| *b == f.tail || *b == f.head).collect();
    match common.len() {
        1 => Ok(*common.first().expect("one element")),
        0 => Err(Error::Domain(format!("edges {} and {} are not adjacent", e.id, f.id))),
        _ => Err(Error::Domain(format!("edges {} and {} share both endpoints; name the split body", e.id, f.id))),
    }
}

fn split_edges(h: &BodyBarOrbitGraph, e: EdgeId, f: EdgeId) -> Result<(OrientedEdge, OrientedEdge)> {
    if e == f {
        return Err(Error::Domain(format!("cannot split edge {e} off itself")));
    }
    let ee = *h.edge(e).ok_or(Error::UnknownEdge(e))?;
    let ff = *h.edge(f).ok_or(Error::UnknownEdge(f))?;
    if let Some(l) = [ee, ff].iter().find(|x| x.is_loop()) {
        return Err(Error::Domain(format!("edge {} is a loop", l.id)));
    }
    Ok((ee, ff))
}

/// `split_off_at` at the single body shared by `e` and `f`.
pub fn split_off(h: &BodyBarOrbitGraph, e: EdgeId, f: EdgeId) -> Result<(BodyBarOrbitGraph, EdgeId)> {
    let (ee, ff) = split_edges(h, e, f)?;
    split_off_at(h, shared_endpoint(&ee, &ff)?, e, f)
}

/// Replaces `e = <u, v; m_e>` and `f = <u, w; m_f>` (both read from `u`) by
/// `h = <v, w; m_f - m_e>`, which takes the next free edge id.
pub fn split_off_at(h: &BodyBarOrbitGraph, u: BodyId, e: EdgeId, f: EdgeId) -> Result<(BodyBarOrbitGraph, EdgeId)> {
    let (ee, ff) = split_edges(h, e, f)?;
    let not_at = |x: &OrientedEdge| Error::Domain(format!("edge {} is not incident to body {u}", x.id));
    let ee = ee.from_end(u).ok_or_else(|| not_at(&ee))?;
    let ff = ff.from_end(u).ok_or_else(|| not_at(&ff))?;
    let mut g = h.clone();
    let id = g.next_edge_id();
    g.remove_edge(e)?;
    g.remove_edge(f)?;
    g.insert_edge(OrientedEdge::new(id, ee.head, ff.head, ff.gain - ee.gain))?;
    Ok((g, id))
}

/// Whether splitting off `e`, `f` keeps the graph sparse.
pub fn admissible(h: &BodyBarOrbitGraph, e: EdgeId, f: EdgeId, cfg: &RankConfig) -> Result<bool> {
    is_sparse(&split_off(h, e, f)?.0, cfg)
}

pub fn admissible_at(h: &BodyBarOrbitGraph, u: BodyId, e: EdgeId, f: EdgeId, cfg: &RankConfig) -> Result<bool> {
    is_sparse(&split_off_at(h, u, e, f)?.0, cfg)
}

/// One reduction: the graph with a body removed, and the pinch that restores it.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReductionStep {
    pub removed: BodyId,
    pub inverse: PinchSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    /// In the order the bodies were removed.
    pub steps: Vec<ReductionStep>,
    /// A single body with three loops.
    pub terminal: BodyBarOrbitGraph,
}

impl ReductionTrace {
    /// Applies the inverse pinches from the terminal graph back up.
    pub fn replay(&self) -> Result<BodyBarOrbitGraph> {
        self.steps.iter().rev().try_fold(self.terminal.clone(), |g, step| apply_pinch(&g, &step.inverse))
    }
}

fn check_tight_sparse(h: &BodyBarOrbitGraph, cfg: &RankConfig) -> Result<()> {
    if !h.is_tight() {
        let expected = (6 * h.body_count()).saturating_sub(3);
        return Err(Error::NotTight { edges: h.edge_count(), expected });
    }
    let verdict = check_sparsity(h, SparsityEngine::auto(h.edge_count()), cfg)?;
    match verdict.witness {
        Some(witness) => Err(Error::NotSparse { witness }),
        None => Ok(()),
    }
}

/// Removes one body of a tight sparse graph with at least two bodies.
pub fn reduce_step(h: &BodyBarOrbitGraph, cfg: &RankConfig) -> Result<(BodyBarOrbitGraph, ReductionStep)> {
    check_tight_sparse(h, cfg)?;
    reduce_step_unchecked(h, cfg)
}

fn reduce_step_unchecked(h: &BodyBarOrbitGraph, cfg: &RankConfig) -> Result<(BodyBarOrbitGraph, ReductionStep)> {
    if h.body_count() < 2 {
        return Err(Error::Domain("reduction needs at least two bodies".into()));
    }
    let s = h.bodies().min_by_key(|b| (h.degree(*b), *b)).expect("graph has bodies");
    let degree = h.degree(s);
    let loops = h.loop_count(s);
    if !(6..=11).contains(&degree) || degree - 6 < loops {
        return Err(Error::Domain(format!("body {s} has degree {degree} with {loops} loops")));
    }
    let n = degree - 6;
    let j = n - loops;
    let star: Vec<EdgeId> = h.incident(s).filter(|e| !e.is_loop()).map(|e| e.id).collect();

    let mut pairs = Vec::new();
    let reduced = match split_search(h, s, &star, 0, j, cfg, &mut pairs)? {
        Some(g) => g,
        None => return Err(Error::ExhaustedSearch { body: s, graph: alloc::boxed::Box::new(h.clone()) }),
    };

    let mut g = reduced;
    let removed = g.remove_body(s)?;
    let mut inverse = PinchSpec {
        body: s,
        label: h.label(s).unwrap_or_default().into(),
        pinched: pairs
            .iter()
            .map(|&(split, e, f)| {
                let ee = h.edge(e).and_then(|x| x.from_end(s)).expect("star edge");
                PinchedEdge { edge: split, tail: ee.head, first_gain: -ee.gain, first_id: e, second_id: f }
            })
            .collect(),
        loops: removed.iter().filter(|e| e.is_loop()).map(|e| NewLoop { id: e.id, gain: e.gain }).collect(),
        new_edges: removed
            .iter()
            .filter(|e| !e.is_loop())
            .map(|e| {
                let e = e.from_end(s).expect("incident edge");
                NewBar { id: e.id, target: e.head, gain: e.gain }
            })
            .collect(),
        reversed: Vec::new(),
    };
    let built = build_pinch(&g, &inverse)?;
    inverse.reversed = inverse.new_edge_ids().filter(|id| built.edge(*id) != h.edge(*id)).collect();
    Ok((g, ReductionStep { removed: s, inverse }))
}

/// Depth-first search for `remaining` disjoint admissible pairs among the
/// unused edges of `star`, in lexicographic order of edge position.
fn split_search(
    h: &BodyBarOrbitGraph,
    s: BodyId,
    star: &[EdgeId],
    from: usize,
    remaining: usize,
    cfg: &RankConfig,
    pairs: &mut Vec<(EdgeId, EdgeId, EdgeId)>,
) -> Result<Option<BodyBarOrbitGraph>> {
    if remaining == 0 {
        return Ok(Some(h.clone()));
    }
    let used = |e: EdgeId, pairs: &[(EdgeId, EdgeId, EdgeId)]| pairs.iter().any(|p| p.1 == e || p.2 == e);
    for a in from..star.len() {
        if used(star[a], pairs) {
            continue;
        }
        for b in a + 1..star.len() {
            if used(star[b], pairs) {
                continue;
            }
            let (g, split) = split_off_at(h, s, star[a], star[b])?;
            if !is_sparse(&g, cfg)? {
                continue;
            }
            pairs.push((split, star[a], star[b]));
            if let Some(done) = split_search(&g, s, star, a + 1, remaining - 1, cfg, pairs)? {
                return Ok(Some(done));
            }
            pairs.pop();
        }
    }
    Ok(None)
}

/// Reduces a tight sparse graph to a single body, one body per step.
pub fn reduce_to_seed(h: &BodyBarOrbitGraph, cfg: &RankConfig) -> Result<ReductionTrace> {
    check_tight_sparse(h, cfg)?;
    let mut g = h.clone();
    let mut steps = Vec::new();
    while g.body_count() > 1 {
        let (next, step) = reduce_step_unchecked(&g, cfg)?;
        steps.push(step);
        g = next;
    }
    Ok(ReductionTrace { steps, terminal: g })
}
