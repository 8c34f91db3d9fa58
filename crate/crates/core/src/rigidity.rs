//! Induced bar-joint frameworks and the periodic rigidity matrix.
//!
//! The row of a bar `{v_i, v_j; m}` carries `p_i - (p_j + m)` in the columns
//! of `v_i` and `(p_j + m) - p_i` in those of `v_j`. The lattice is the
//! identity, so there are no lattice columns. A framework on `n` vertices is
//! minimally rigid when the matrix has `3n - 3` rows and rank `3n - 3`; the
//! three translations are always in the kernel.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField, Rationals, MERSENNE_61};
use crate::gain::GainVector;
use crate::graph::{BodyBarOrbitGraph, BodyId, EdgeId, EdgeSubset, OrientedEdge};
use crate::matrix::{EchelonBasis, Matrix};

pub const DEFAULT_TRIALS: u32 = 3;
pub const DEFAULT_SEED: u64 = 1;
/// Exact mode samples integer coordinates below this bound.
pub const EXACT_SAMPLE_BOUND: u64 = 1 << 32;

pub type BarJointEdge = OrientedEdge<usize>;

/// A periodic orbit graph of joints `0..vertex_count` and gained bars.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BarJointOrbitGraph {
    vertex_count: usize,
    edges: BTreeMap<EdgeId, BarJointEdge>,
}

impl BarJointOrbitGraph {
    pub fn new(vertex_count: usize) -> Self {
        BarJointOrbitGraph { vertex_count, edges: BTreeMap::new() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &BarJointEdge> + '_ {
        self.edges.values()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&BarJointEdge> {
        self.edges.get(&id)
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.edges.keys().next_back().map_or(EdgeId(0), |e| EdgeId(e.0 + 1))
    }

    pub fn add_vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    pub fn add_edge(&mut self, tail: usize, head: usize, gain: GainVector) -> Result<EdgeId> {
        let id = self.next_edge_id();
        self.insert_edge(OrientedEdge::new(id, tail, head, gain))?;
        Ok(id)
    }

    /// Rejects loops, unknown vertices, reused ids and a second bar with the
    /// same endpoints and gain as an existing one.
    pub fn insert_edge(&mut self, e: BarJointEdge) -> Result<()> {
        if e.tail >= self.vertex_count || e.head >= self.vertex_count {
            return Err(Error::Domain(format!("edge {} references a missing vertex", e.id)));
        }
        if e.is_loop() {
            return Err(Error::Domain(format!("edge {} is a loop", e.id)));
        }
        if self.edges.contains_key(&e.id) {
            return Err(Error::DuplicateEdge(e.id));
        }
        let c = e.canonical();
        if let Some(other) = self.edges.values().find(|o| {
            let o = o.canonical();
            (o.tail, o.head, o.gain) == (c.tail, c.head, c.gain)
        }) {
            return Err(Error::Domain(format!("edges {} and {} are parallel with equal gain", other.id, e.id)));
        }
        self.edges.insert(e.id, e);
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<BarJointEdge> {
        self.edges.remove(&id).ok_or(Error::UnknownEdge(id))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.values().filter(|e| e.tail == v || e.head == v).count()
    }

    pub fn is_tight(&self) -> bool {
        self.edges.len() + 3 == 3 * self.vertex_count
    }
}

/// The bar-joint framework obtained by replacing every body by a generically
/// isostatic cluster of joints and every body edge by a bar between joints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedFramework {
    pub graph: BarJointOrbitGraph,
    pub body_of_vertex: Vec<BodyId>,
    pub body_vertices: BTreeMap<BodyId, Range<usize>>,
    /// Internal gain-zero edges of the bodies.
    pub body_edges: BTreeSet<EdgeId>,
    /// Body-graph edge id to bar id.
    pub bar_edges: BTreeMap<EdgeId, EdgeId>,
}

impl InducedFramework {
    /// `"<body label>:<index within body>"`.
    pub fn vertex_label(&self, h: &BodyBarOrbitGraph, v: usize) -> String {
        let body = self.body_of_vertex[v];
        let start = self.body_vertices[&body].start;
        format!("{}:{}", h.label(body).unwrap_or(""), v - start)
    }
}

/// Internal edges on `n >= 3` local vertices: a triangle, then each further
/// vertex joined to the three before it (the tetrahedron at `n = 4`).
fn isostatic_body(n: usize) -> Vec<(usize, usize)> {
    let mut edges = alloc::vec![(0, 1), (0, 2), (1, 2)];
    for k in 3..n {
        edges.extend([(k - 3, k), (k - 2, k), (k - 1, k)]);
    }
    edges
}

pub fn induce_bar_joint(h: &BodyBarOrbitGraph) -> InducedFramework {
    let mut body_vertices = BTreeMap::new();
    let mut body_of_vertex = Vec::new();
    for b in h.bodies() {
        let endpoints: usize = h.incident(b).map(|e| if e.is_loop() { 2 } else { 1 }).sum();
        let n = endpoints.max(3);
        let start = body_of_vertex.len();
        body_of_vertex.extend(core::iter::repeat_n(b, n));
        body_vertices.insert(b, start..start + n);
    }
    let mut graph = BarJointOrbitGraph::new(body_of_vertex.len());
    let mut next = 0u32;
    let mut body_edges = BTreeSet::new();
    for range in body_vertices.values() {
        for (a, b) in isostatic_body(range.len()) {
            let e = OrientedEdge::new(EdgeId(next), range.start + a, range.start + b, GainVector::ZERO);
            graph.edges.insert(e.id, e);
            body_edges.insert(e.id);
            next += 1;
        }
    }
    // Bars are stored without the parallel-bar check: a zero-gain loop on a
    // body may duplicate an internal edge, which only makes its row dependent.
    let mut cursor: BTreeMap<BodyId, usize> = body_vertices.iter().map(|(b, r)| (*b, r.start)).collect();
    let mut take = |b: BodyId| {
        let c = cursor.get_mut(&b).expect("edge endpoints are bodies");
        *c += 1;
        *c - 1
    };
    let mut bar_edges = BTreeMap::new();
    for e in h.edges() {
        let (t, hd) = (take(e.tail), take(e.head));
        let bar = OrientedEdge::new(EdgeId(next), t, hd, e.gain);
        graph.edges.insert(bar.id, bar);
        bar_edges.insert(e.id, bar.id);
        next += 1;
    }
    InducedFramework { graph, body_of_vertex, body_vertices, body_edges, bar_edges }
}

/// Rows ordered by edge id, with `row_edges[r]` naming the edge of row `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicRigidityMatrix<E> {
    pub matrix: Matrix<E>,
    pub row_edges: Vec<EdgeId>,
}

fn bar_row<F: Field>(field: &F, e: &BarJointEdge, positions: &[[F::Elem; 3]], row: &mut [F::Elem]) {
    for k in 0..3 {
        let shifted = field.add(&positions[e.head][k], &field.int(e.gain.0[k]));
        let d = field.sub(&positions[e.tail][k], &shifted);
        row[3 * e.head + k] = field.neg(&d);
        row[3 * e.tail + k] = d;
    }
}

fn check_positions<E>(vertex_count: usize, positions: &[E]) -> Result<()> {
    if positions.len() < vertex_count {
        return Err(Error::Domain(format!("missing position for vertex {}", positions.len())));
    }
    Ok(())
}

pub fn assemble_matrix<F: Field>(
    graph: &BarJointOrbitGraph,
    positions: &[[F::Elem; 3]],
    field: &F,
) -> Result<PeriodicRigidityMatrix<F::Elem>> {
    check_positions(graph.vertex_count, positions)?;
    let cols = 3 * graph.vertex_count;
    let mut matrix = Matrix::filled(graph.edge_count(), cols, field.zero());
    let mut row = alloc::vec![field.zero(); cols];
    for (r, e) in graph.edges().enumerate() {
        row.iter_mut().for_each(|x| *x = field.zero());
        bar_row(field, e, positions, &mut row);
        for (c, v) in row.iter().enumerate() {
            if !field.is_zero(v) {
                matrix.set(r, c, v.clone());
            }
        }
    }
    Ok(PeriodicRigidityMatrix { matrix, row_edges: graph.edges.keys().copied().collect() })
}

/// Whether the three infinitesimal translations lie in the kernel.
pub fn translations_in_kernel<F: Field>(field: &F, m: &Matrix<F::Elem>) -> bool {
    (0..3).all(|axis| {
        let t: Vec<F::Elem> = (0..m.cols()).map(|c| if c % 3 == axis { field.one() } else { field.zero() }).collect();
        m.mul_vec(field, &t).iter().all(|x| field.is_zero(x))
    })
}

/// Sampling parameters for generic rank computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RankConfig {
    pub prime: u64,
    pub trials: u32,
    pub seed: u64,
    /// Row-reduce over the rationals at integer points instead of `F_p`.
    pub exact: bool,
}

impl Default for RankConfig {
    fn default() -> Self {
        RankConfig { prime: MERSENNE_61, trials: DEFAULT_TRIALS, seed: DEFAULT_SEED, exact: false }
    }
}

impl RankConfig {
    pub fn with_seed(seed: u64) -> Self {
        RankConfig { seed, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("at least one trial is required".into()));
        }
        if !self.exact {
            PrimeField::new(self.prime)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RigidityVerdict {
    pub rank: usize,
    pub rows: usize,
    pub vertices: usize,
    /// Kernel dimension minus the three translations.
    pub dof: i64,
    pub minimally_rigid: bool,
    pub trials: u32,
    pub seed: u64,
    /// `None` in exact mode.
    pub prime: Option<u64>,
}

/// Generic rank of `graph` restricted to `rows` (all rows when `None`),
/// maximised over `cfg.trials` random realizations.
fn sampled_rank(graph: &BarJointOrbitGraph, rows: Option<&BTreeSet<EdgeId>>, cfg: &RankConfig) -> Result<usize> {
    cfg.validate()?;
    let selected: Vec<&BarJointEdge> = graph.edges().filter(|e| rows.is_none_or(|r| r.contains(&e.id))).collect();
    let ceiling = selected.len().min((3 * graph.vertex_count).saturating_sub(3));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best = 0;
    for _ in 0..cfg.trials {
        let rank = if cfg.exact {
            let positions: Vec<[BigRational; 3]> = (0..graph.vertex_count)
                .map(|_| [(); 3].map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(0..EXACT_SAMPLE_BOUND)))))
                .collect();
            rank_at(&Rationals, &selected, graph.vertex_count, &positions)
        } else {
            let field = PrimeField::new(cfg.prime)?;
            let positions = sample_positions(&mut rng, graph.vertex_count, cfg.prime);
            rank_at(&field, &selected, graph.vertex_count, &positions)
        };
        best = best.max(rank);
        if best >= ceiling {
            break;
        }
    }
    Ok(best)
}

fn sample_positions(rng: &mut ChaCha8Rng, vertex_count: usize, prime: u64) -> Vec<[u64; 3]> {
    (0..vertex_count).map(|_| [(); 3].map(|_| rng.gen_range(0..prime))).collect()
}

/// The positions used by the first trial of a field-mode rank computation
/// with this `seed`.
pub fn field_positions(vertex_count: usize, prime: u64, seed: u64) -> Vec<[u64; 3]> {
    sample_positions(&mut ChaCha8Rng::seed_from_u64(seed), vertex_count, prime)
}

fn rank_at<F: Field>(field: &F, rows: &[&BarJointEdge], vertex_count: usize, positions: &[[F::Elem; 3]]) -> usize {
    let cols = 3 * vertex_count;
    let mut basis = EchelonBasis::new(cols);
    for e in rows {
        let mut row = alloc::vec![field.zero(); cols];
        bar_row(field, e, positions, &mut row);
        basis.insert(field, row);
    }
    basis.rank()
}

pub fn generic_rank(graph: &BarJointOrbitGraph, cfg: &RankConfig) -> Result<RigidityVerdict> {
    let rank = sampled_rank(graph, None, cfg)?;
    let n = graph.vertex_count;
    let rows = graph.edge_count();
    let target = (3 * n).saturating_sub(3);
    Ok(RigidityVerdict {
        rank,
        rows,
        vertices: n,
        dof: 3 * n as i64 - rank as i64 - 3,
        minimally_rigid: n > 0 && rank == target && rows == target,
        trials: cfg.trials,
        seed: cfg.seed,
        prime: (!cfg.exact).then_some(cfg.prime),
    })
}

/// `3|V| - rank`, the dimension of the space of infinitesimal motions.
pub fn motion_space_dim(graph: &BarJointOrbitGraph, cfg: &RankConfig) -> Result<usize> {
    Ok(3 * graph.vertex_count - sampled_rank(graph, None, cfg)?)
}

/// Generic independence of the bars of `y` together with all body rows.
pub fn edge_row_independence(h: &BodyBarOrbitGraph, y: &EdgeSubset<'_>, cfg: &RankConfig) -> Result<bool> {
    if y.is_empty() {
        return Err(Error::EmptySubset);
    }
    let f = induce_bar_joint(h);
    let mut rows = f.body_edges.clone();
    rows.extend(y.ids().map(|id| f.bar_edges[&id]));
    Ok(sampled_rank(&f.graph, Some(&rows), cfg)? == rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn example1() -> BodyBarOrbitGraph {
        let mut edges: Vec<(u32, u32, [i64; 3])> = vec![(0, 1, [1, 0, 0]), (0, 1, [1, 0, 0]), (0, 1, [0, 1, 0])];
        edges.extend([(0, 1, [0, 0, 0]); 6]);
        BodyBarOrbitGraph::from_edges(2, &edges).unwrap()
    }

    fn p3(gains: [[i64; 3]; 3]) -> BodyBarOrbitGraph {
        let edges: Vec<(u32, u32, [i64; 3])> = gains.iter().map(|g| (0, 0, *g)).collect();
        BodyBarOrbitGraph::from_edges(1, &edges).unwrap()
    }

    #[test]
    fn induced_counts() {
        let f = induce_bar_joint(&example1());
        assert_eq!(f.graph.vertex_count(), 18);
        assert_eq!(f.graph.edge_count(), 51);
        assert_eq!(f.body_edges.len(), 42);
        assert_eq!(f.bar_edges.len(), 9);

        let f = induce_bar_joint(&p3([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        assert_eq!((f.graph.vertex_count(), f.graph.edge_count()), (6, 15));

        let mut lone = BodyBarOrbitGraph::new();
        lone.add_body();
        let f = induce_bar_joint(&lone);
        assert_eq!((f.graph.vertex_count(), f.graph.edge_count()), (3, 3));
    }

    #[test]
    fn loop_endpoints_are_distinct() {
        let f = induce_bar_joint(&p3([[1, 0, 0], [0, 1, 0], [0, 0, 1]]));
        let mut seen = BTreeSet::new();
        for bar in f.bar_edges.values() {
            let e = f.graph.edge(*bar).unwrap();
            assert_ne!(e.tail, e.head);
            assert!(seen.insert(e.tail) && seen.insert(e.head));
        }
    }

    #[test]
    fn body_edge_counts_follow_3n_minus_6() {
        for n in 3..12 {
            let edges = isostatic_body(n);
            assert_eq!(edges.len(), 3 * n - 6);
            let mut g = BarJointOrbitGraph::new(n);
            for (a, b) in edges {
                g.add_edge(a, b, GainVector::ZERO).unwrap();
            }
            // finite isostatic: rank 3n - 6 regardless of periodicity
            assert_eq!(generic_rank(&g, &RankConfig::default()).unwrap().rank, 3 * n - 6);
        }
    }

    #[test]
    fn assembled_rows() {
        let f = PrimeField::new(101).unwrap();
        let pos = [[0, 0, 0], [1, 0, 0]];
        let mut g = BarJointOrbitGraph::new(2);
        g.add_edge(0, 1, GainVector::ZERO).unwrap();
        let m = assemble_matrix(&g, &pos, &f).unwrap();
        assert_eq!(m.matrix.row(0), &[f.int(-1), 0, 0, 1, 0, 0]);

        let mut g = BarJointOrbitGraph::new(2);
        g.add_edge(0, 1, GainVector::new(1, 0, 0)).unwrap();
        let m = assemble_matrix(&g, &pos, &f).unwrap();
        assert_eq!(m.matrix.row(0), &[f.int(-2), 0, 0, 2, 0, 0]);

        // p1 = p2 + m gives a zero row
        let m = assemble_matrix(&g, &[[2, 0, 0], [1, 0, 0]], &f).unwrap();
        assert!(m.matrix.row(0).iter().all(|x| *x == 0));

        assert!(matches!(assemble_matrix(&g, &pos[..1], &f), Err(Error::Domain(_))));
    }

    #[test]
    fn invalid_bar_joint_edges() {
        let mut g = BarJointOrbitGraph::new(2);
        assert!(g.add_edge(0, 0, GainVector::new(1, 0, 0)).is_err());
        g.add_edge(0, 1, GainVector::new(1, 0, 0)).unwrap();
        assert!(g.add_edge(1, 0, GainVector::new(-1, 0, 0)).is_err());
        assert!(g.add_edge(1, 0, GainVector::new(1, 0, 0)).is_ok());
        assert!(g.add_edge(0, 2, GainVector::ZERO).is_err());
    }

    #[test]
    fn example_rank() {
        let h = example1();
        let f = induce_bar_joint(&h);
        let v = generic_rank(&f.graph, &RankConfig::default()).unwrap();
        assert_eq!((v.rank, v.dof, v.minimally_rigid), (51, 0, true));
        assert_eq!(motion_space_dim(&f.graph, &RankConfig::default()), Ok(3));

        let mut g = f.graph.clone();
        g.remove_edge(f.bar_edges[&EdgeId(0)]).unwrap();
        let v = generic_rank(&g, &RankConfig::default()).unwrap();
        assert_eq!((v.rank, v.dof, v.minimally_rigid), (50, 1, false));
    }

    #[test]
    fn exact_mode_agrees() {
        let f = induce_bar_joint(&example1());
        let cfg = RankConfig { exact: true, trials: 1, ..RankConfig::default() };
        let v = generic_rank(&f.graph, &cfg).unwrap();
        assert_eq!(v.rank, 51);
        assert_eq!(v.prime, None);
    }

    #[test]
    fn collinear_loops_lose_rank() {
        let f = induce_bar_joint(&p3([[1, 0, 0], [2, 0, 0], [3, 0, 0]]));
        let v = generic_rank(&f.graph, &RankConfig::default()).unwrap();
        assert!(v.rank <= 14);
        assert!(!v.minimally_rigid);
    }

    #[test]
    fn motion_spaces_of_free_bodies() {
        let mut two = BodyBarOrbitGraph::new();
        two.add_body();
        two.add_body();
        let f = induce_bar_joint(&two);
        let v = generic_rank(&f.graph, &RankConfig::default()).unwrap();
        assert_eq!(motion_space_dim(&f.graph, &RankConfig::default()), Ok(12));
        assert_eq!(v.dof, 9);

        let mut one = BodyBarOrbitGraph::new();
        one.add_body();
        let f = induce_bar_joint(&one);
        assert_eq!(motion_space_dim(&f.graph, &RankConfig::default()), Ok(6));
    }

    #[test]
    fn independence_examples() {
        let cfg = RankConfig::default();
        let zero_loop = BodyBarOrbitGraph::from_edges(1, &[(0, 0, [0, 0, 0])]).unwrap();
        assert_eq!(edge_row_independence(&zero_loop, &zero_loop.all_edges(), &cfg), Ok(false));
        let h = example1();
        assert_eq!(edge_row_independence(&h, &h.all_edges(), &cfg), Ok(true));
        for id in h.edge_ids() {
            assert_eq!(edge_row_independence(&h, &h.subset([id]).unwrap(), &cfg), Ok(true));
        }
        assert_eq!(edge_row_independence(&h, &h.subset([]).unwrap(), &cfg), Err(Error::EmptySubset));
    }

    #[test]
    fn config_errors() {
        let f = induce_bar_joint(&example1());
        let bad = RankConfig { prime: 1 << 61, ..RankConfig::default() };
        assert!(matches!(generic_rank(&f.graph, &bad), Err(Error::Config(_))));
        let none = RankConfig { trials: 0, ..RankConfig::default() };
        assert!(matches!(generic_rank(&f.graph, &none), Err(Error::Config(_))));
    }

    #[test]
    fn translations_and_body_rows() {
        let h = example1();
        let f = induce_bar_joint(&h);
        let field = PrimeField::mersenne61();
        let positions: Vec<[u64; 3]> = (0..18u64).map(|v| [v * 7 + 1, v * v + 3, 11 * v + 5]).collect();
        let m = assemble_matrix(&f.graph, &positions, &field).unwrap();
        assert!(translations_in_kernel(&field, &m.matrix));
        // a gain-zero row is the finite rigidity row p_i - p_j
        let e = f.graph.edge(EdgeId(0)).unwrap();
        for k in 0..3 {
            let d = field.sub(&positions[e.tail][k], &positions[e.head][k]);
            assert_eq!(*m.matrix.get(0, 3 * e.tail + k), d);
            assert_eq!(*m.matrix.get(0, 3 * e.head + k), field.neg(&d));
        }
    }

    #[test]
    fn seeds_are_deterministic() {
        let f = induce_bar_joint(&p3([[1, 0, 0], [2, 0, 0], [3, 0, 0]]));
        let cfg = RankConfig::with_seed(99);
        assert_eq!(generic_rank(&f.graph, &cfg), generic_rank(&f.graph, &cfg));
    }
}
