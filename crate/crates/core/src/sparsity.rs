//! The `[6,3]` gain-sparsity count.
//!
//! For a non-empty edge set `Y` with gain space of rank `g`, the deficiency is
//!
//! ```text
//! b(Y) = 6|V(Y)| - 6 + bonus(g) - |Y|,    bonus(g) = sum_{i=1..g} (3 - i)
//! ```
//!
//! A graph is sparse when every non-empty edge set has `b(Y) >= 0`, and tight
//! when additionally `|E| = 6|V| - 3`.
//!
//! Three engines decide sparsity: a sweep over all `2^|E|` subsets, a sweep
//! over connected subsets only, and generic independence of the induced
//! rigidity matrix (see [`crate::rigidity`]). The first two are exact; the
//! third is the only one usable on large graphs.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{BodyBarOrbitGraph, EdgeId, EdgeSubset};
use crate::lattice::{lattice_rank, IntVec3};
use crate::rigidity::{edge_row_independence, RankConfig};

/// Default largest edge count for the full subset sweep.
pub const BRUTE_CAP: usize = 22;
/// Default largest edge count for the connected-subset sweep.
pub const CONNECTED_CAP: usize = 26;
/// Hard limit of the bitmask representation used by both sweeps.
pub const MASK_LIMIT: usize = 63;

/// `sum_{i=1..g} (3 - i)`: 0, 2, 3, 3 for `g = 0..=3`.
pub fn bonus(g: usize) -> Result<i64> {
    match g {
        0 => Ok(0),
        1 => Ok(2),
        2 | 3 => Ok(3),
        _ => Err(Error::Domain(format!("gain space rank {g} is outside 0..=3"))),
    }
}

/// `b(Y) = 6|V(Y)| - 6 + bonus(rank) - |Y|`.
pub fn deficiency(y: &EdgeSubset<'_>) -> Result<i64> {
    let rank = y.gain_space_rank()?;
    Ok(6 * y.bodies().len() as i64 - 6 + bonus(rank)? - y.len() as i64)
}

/// `|E(H)| = 6|V(H)| - 3`.
pub fn is_tight(h: &BodyBarOrbitGraph) -> bool {
    h.is_tight()
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SparsityVerdict {
    pub tight: bool,
    pub sparse: bool,
    /// A violating edge set, present exactly when `sparse` is false.
    pub witness: Option<Vec<EdgeId>>,
    pub checked_subsets: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SparsityEngine {
    BruteForce,
    Connected,
    Matroid,
}

impl SparsityEngine {
    /// Cheapest exact engine within the default caps, the matroid otherwise.
    pub fn auto(edge_count: usize) -> Self {
        Self::auto_with_caps(edge_count, BRUTE_CAP, CONNECTED_CAP)
    }

    pub fn auto_with_caps(edge_count: usize, brute_cap: usize, connected_cap: usize) -> Self {
        if edge_count <= brute_cap {
            SparsityEngine::BruteForce
        } else if edge_count <= connected_cap {
            SparsityEngine::Connected
        } else {
            SparsityEngine::Matroid
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SparsityEngine::BruteForce => "brute-force",
            SparsityEngine::Connected => "connected",
            SparsityEngine::Matroid => "matroid",
        }
    }
}

/// Runs `engine` with its default cap.
pub fn check_sparsity(h: &BodyBarOrbitGraph, engine: SparsityEngine, rank: &RankConfig) -> Result<SparsityVerdict> {
    match engine {
        SparsityEngine::BruteForce => check_sparsity_bruteforce(h),
        SparsityEngine::Connected => check_sparsity_connected(h),
        SparsityEngine::Matroid => check_sparsity_matroid(h, rank),
    }
}

/// Sparse iff no edge set violates the count; used by the reducer and the
/// generator, so it stays exact below [`BRUTE_CAP`] and uses the matroid above.
pub fn is_sparse(h: &BodyBarOrbitGraph, rank: &RankConfig) -> Result<bool> {
    if h.edge_count() <= BRUTE_CAP {
        Ok(check_sparsity_bruteforce(h)?.sparse)
    } else {
        independence_matroid(h, &h.all_edges(), rank)
    }
}

pub fn check_sparsity_bruteforce(h: &BodyBarOrbitGraph) -> Result<SparsityVerdict> {
    check_sparsity_bruteforce_with_cap(h, BRUTE_CAP)
}

/// Visits every non-empty subset in increasing bitmask order (bit `i` is the
/// `i`-th edge by id) and stops at the first violation, which is therefore
/// the smallest violating bitmask.
pub fn check_sparsity_bruteforce_with_cap(h: &BodyBarOrbitGraph, cap: usize) -> Result<SparsityVerdict> {
    let kernel = SubsetKernel::new(h, cap.min(MASK_LIMIT))?;
    let full: u64 = if kernel.len() == 64 { u64::MAX } else { (1u64 << kernel.len()) - 1 };
    let mut scratch = Scratch::default();
    let mut checked = 0u64;
    let mut witness = None;
    for mask in 1..=full {
        checked += 1;
        if kernel.deficiency(mask, &mut scratch) < 0 {
            witness = Some(mask);
            break;
        }
    }
    Ok(kernel.verdict(h, witness, checked))
}

pub fn check_sparsity_connected(h: &BodyBarOrbitGraph) -> Result<SparsityVerdict> {
    check_sparsity_connected_with_cap(h, CONNECTED_CAP)
}

/// Visits every connected edge subset exactly once (ESU enumeration on the
/// line graph) and reports the smallest violating bitmask among them.
///
/// Restricting to connected sets loses nothing: for `Y` with `k >= 2`
/// components `Y_i`, `b(Y) >= sum b(Y_i) + 6(k - 1) - 3k >= sum b(Y_i)`, so a
/// violating `Y` has a violating component.
pub fn check_sparsity_connected_with_cap(h: &BodyBarOrbitGraph, cap: usize) -> Result<SparsityVerdict> {
    let kernel = SubsetKernel::new(h, cap.min(MASK_LIMIT))?;
    let m = kernel.len();
    let adjacency: Vec<u64> = (0..m)
        .map(|i| {
            (0..m)
                .filter(|&j| j != i && kernel.body_mask[i] & kernel.body_mask[j] != 0)
                .fold(0u64, |acc, j| acc | 1 << j)
        })
        .collect();
    let mut search = ConnectedSearch {
        kernel: &kernel,
        adjacency: &adjacency,
        scratch: Scratch::default(),
        checked: 0,
        witness: None,
    };
    for v in 0..m {
        let above = !((2u64 << v) - 1);
        search.extend(1 << v, adjacency[v] & above, (1 << v) | adjacency[v], above);
    }
    let (witness, checked) = (search.witness, search.checked);
    Ok(kernel.verdict(h, witness, checked))
}

struct ConnectedSearch<'a> {
    kernel: &'a SubsetKernel,
    adjacency: &'a [u64],
    scratch: Scratch,
    checked: u64,
    witness: Option<u64>,
}

impl ConnectedSearch<'_> {
    fn extend(&mut self, sub: u64, mut ext: u64, closed: u64, above: u64) {
        self.checked += 1;
        if self.witness.is_none_or(|w| sub < w) && self.kernel.deficiency(sub, &mut self.scratch) < 0 {
            self.witness = Some(sub);
        }
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let fresh = self.adjacency[w] & !closed & above;
            self.extend(sub | 1 << w, ext | fresh, closed | self.adjacency[w], above);
        }
    }
}

/// Sparsity of the whole graph read off generic row independence. When
/// dependent, a circuit (minimal dependent edge set) is returned as witness.
pub fn check_sparsity_matroid(h: &BodyBarOrbitGraph, rank: &RankConfig) -> Result<SparsityVerdict> {
    let tight = h.is_tight();
    if h.edge_count() == 0 {
        return Ok(SparsityVerdict { tight, sparse: true, witness: None, checked_subsets: 0 });
    }
    let all = h.all_edges();
    let mut checked = 1u64;
    if edge_row_independence(h, &all, rank)? {
        return Ok(SparsityVerdict { tight, sparse: true, witness: None, checked_subsets: checked });
    }
    let mut circuit: Vec<EdgeId> = all.ids().collect();
    let mut i = 0;
    while i < circuit.len() {
        let mut trial = circuit.clone();
        trial.remove(i);
        checked += 1;
        let dependent = !trial.is_empty() && !edge_row_independence(h, &h.subset(trial.iter().copied())?, rank)?;
        if dependent {
            circuit = trial;
        } else {
            i += 1;
        }
    }
    Ok(SparsityVerdict { tight, sparse: false, witness: Some(circuit), checked_subsets: checked })
}

/// Generic independence of the rows of `Y` in the induced rigidity matrix.
/// Sparse edge sets are exactly the independent ones.
pub fn independence_matroid(h: &BodyBarOrbitGraph, y: &EdgeSubset<'_>, rank: &RankConfig) -> Result<bool> {
    edge_row_independence(h, y, rank)
}

/// Edge data flattened for bitmask sweeps: local body indices and bitmasks.
struct SubsetKernel {
    ids: Vec<EdgeId>,
    ends: Vec<(u8, u8)>,
    gains: Vec<IntVec3>,
    body_mask: Vec<u128>,
}

struct Scratch {
    parent: [u8; 128],
    offset: [IntVec3; 128],
    gens: Vec<IntVec3>,
}

impl Default for Scratch {
    fn default() -> Self {
        Scratch { parent: [0; 128], offset: [[0; 3]; 128], gens: Vec::new() }
    }
}

impl SubsetKernel {
    fn new(h: &BodyBarOrbitGraph, cap: usize) -> Result<Self> {
        let m = h.edge_count();
        if m > cap {
            return Err(Error::CapExceeded { edges: m, cap });
        }
        let mut local = alloc::collections::BTreeMap::new();
        let mut index = |b| {
            let next = local.len() as u8;
            *local.entry(b).or_insert(next)
        };
        let mut kernel = SubsetKernel { ids: Vec::new(), ends: Vec::new(), gains: Vec::new(), body_mask: Vec::new() };
        for e in h.edges() {
            let (t, hd) = (index(e.tail), index(e.head));
            kernel.ids.push(e.id);
            kernel.ends.push((t, hd));
            kernel.gains.push(e.gain.0.map(i128::from));
            kernel.body_mask.push((1u128 << t) | (1u128 << hd));
        }
        Ok(kernel)
    }

    fn len(&self) -> usize {
        self.ids.len()
    }

    fn deficiency(&self, mask: u64, scratch: &mut Scratch) -> i64 {
        let mut bodies = 0u128;
        let mut bits = mask;
        while bits != 0 {
            bodies |= self.body_mask[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        let base = 6 * bodies.count_ones() as i64 - 6 - mask.count_ones() as i64;
        if base >= 0 {
            return base;
        }
        if base < -3 {
            return base;
        }
        base + bonus(self.gain_rank(mask, bodies, scratch)).expect("rank is at most 3")
    }

    /// Gain space rank via union-find with potentials: `offset[x]` is the gain
    /// of the tree path from `x`'s parent to `x`.
    fn gain_rank(&self, mask: u64, bodies: u128, s: &mut Scratch) -> usize {
        let mut b = bodies;
        while b != 0 {
            let i = b.trailing_zeros() as usize;
            s.parent[i] = i as u8;
            s.offset[i] = [0; 3];
            b &= b - 1;
        }
        s.gens.clear();
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (t, h) = self.ends[e];
            let (rt, pt) = find(s, t as usize);
            let (rh, ph) = find(s, h as usize);
            let m = self.gains[e];
            if rt == rh {
                s.gens.push([m[0] - (ph[0] - pt[0]), m[1] - (ph[1] - pt[1]), m[2] - (ph[2] - pt[2])]);
            } else {
                // potential(h) = potential(t) + m
                s.parent[rh] = rt as u8;
                s.offset[rh] = [pt[0] + m[0] - ph[0], pt[1] + m[1] - ph[1], pt[2] + m[2] - ph[2]];
            }
        }
        lattice_rank(&s.gens)
    }

    fn verdict(&self, h: &BodyBarOrbitGraph, witness: Option<u64>, checked: u64) -> SparsityVerdict {
        let witness =
            witness.map(|mask| (0..self.len()).filter(|i| mask >> i & 1 == 1).map(|i| self.ids[i]).collect::<Vec<_>>());
        SparsityVerdict { tight: h.is_tight(), sparse: witness.is_none(), witness, checked_subsets: checked }
    }
}

/// Root of `x` and the potential of `x` relative to it.
fn find(s: &Scratch, mut x: usize) -> (usize, IntVec3) {
    let mut acc = [0i128; 3];
    while s.parent[x] as usize != x {
        let o = s.offset[x];
        acc = [acc[0] + o[0], acc[1] + o[1], acc[2] + o[2]];
        x = s.parent[x] as usize;
    }
    (x, acc)
}
