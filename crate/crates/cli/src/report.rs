//! Machine-readable results of `check` and `rank`.

use bodybar_core::rigidity::{generic_rank, induce_bar_joint, RankConfig, RigidityVerdict};
use bodybar_core::sparsity::{
    check_sparsity_bruteforce_with_cap, check_sparsity_connected_with_cap, check_sparsity_matroid, SparsityEngine,
    SparsityVerdict, BRUTE_CAP, CONNECTED_CAP,
};
use bodybar_core::BodyBarOrbitGraph;
use serde::{Deserialize, Serialize};

use crate::document::{from_graph, EdgeRecord};
use crate::error::{exit, Result};

/// Engine choice and caps for `check`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    /// `None` picks by edge count.
    pub engine: Option<SparsityEngine>,
    pub brute_cap: usize,
    pub connected_cap: usize,
    pub rank: RankConfig,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { engine: None, brute_cap: BRUTE_CAP, connected_cap: CONNECTED_CAP, rank: RankConfig::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsityReport {
    pub engine: SparsityEngine,
    pub brute_cap: usize,
    pub connected_cap: usize,
    pub tight: bool,
    pub sparse: bool,
    pub witness: Option<Vec<EdgeRecord>>,
    pub checked_subsets: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub rank: usize,
    pub rows: usize,
    pub vertices: usize,
    pub dof: i64,
    pub minimally_rigid: bool,
    pub trials: u32,
    pub seed: u64,
    pub prime: Option<u64>,
    pub exact: bool,
}

impl From<RigidityVerdict> for RigidityReport {
    fn from(v: RigidityVerdict) -> Self {
        RigidityReport {
            rank: v.rank,
            rows: v.rows,
            vertices: v.vertices,
            dof: v.dof,
            minimally_rigid: v.minimally_rigid,
            trials: v.trials,
            seed: v.seed,
            prime: v.prime,
            exact: v.prime.is_none(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    MinimallyRigid,
    NotMinimallyRigid,
    /// Combinatorial and linear answers differ.
    Disagreement,
    /// `rank` only: the linear answer.
    FullRank,
    Flexible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub bodies: usize,
    pub edges: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<SparsityReport>,
    pub rigidity: RigidityReport,
    pub verdict: Verdict,
    pub exit_code: i32,
    /// Wall-clock time, only when requested, so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        crate::document::compact_json(self)
    }
}

pub fn sparsity_with(h: &BodyBarOrbitGraph, opts: &CheckOptions) -> Result<(SparsityEngine, SparsityVerdict)> {
    let engine = opts
        .engine
        .unwrap_or_else(|| SparsityEngine::auto_with_caps(h.edge_count(), opts.brute_cap, opts.connected_cap));
    let verdict = match engine {
        SparsityEngine::BruteForce => check_sparsity_bruteforce_with_cap(h, opts.brute_cap)?,
        SparsityEngine::Connected => check_sparsity_connected_with_cap(h, opts.connected_cap)?,
        SparsityEngine::Matroid => check_sparsity_matroid(h, &opts.rank)?,
    };
    Ok((engine, verdict))
}

pub fn rigidity_of(h: &BodyBarOrbitGraph, cfg: &RankConfig) -> Result<RigidityVerdict> {
    Ok(generic_rank(&induce_bar_joint(h).graph, cfg)?)
}

/// Both verdicts on `h`, with the exit code of the pair.
pub fn check_graph(h: &BodyBarOrbitGraph, digest: String, opts: &CheckOptions) -> Result<Report> {
    let (engine, sv) = sparsity_with(h, opts)?;
    let rv = rigidity_of(h, &opts.rank)?;
    let combinatorial = sv.tight && sv.sparse;
    let (verdict, exit_code) = match (combinatorial, rv.minimally_rigid) {
        (true, true) => (Verdict::MinimallyRigid, exit::OK),
        (false, false) => (Verdict::NotMinimallyRigid, exit::NEGATIVE),
        _ => (Verdict::Disagreement, exit::DISAGREEMENT),
    };
    let witness = sv.witness.as_ref().map(|ids| {
        let records = from_graph(h).edges;
        records.into_iter().filter(|r| ids.iter().any(|id| Some(id.0) == r.id)).collect()
    });
    Ok(Report {
        command: "check".into(),
        input_digest: digest,
        bodies: h.body_count(),
        edges: h.edge_count(),
        sparsity: Some(SparsityReport {
            engine,
            brute_cap: opts.brute_cap,
            connected_cap: opts.connected_cap,
            tight: sv.tight,
            sparse: sv.sparse,
            witness,
            checked_subsets: sv.checked_subsets,
        }),
        rigidity: rv.into(),
        verdict,
        exit_code,
        timing_ms: None,
    })
}

/// Generic rank alone; exits 1 when the framework has a non-trivial motion.
pub fn rank_graph(h: &BodyBarOrbitGraph, digest: String, cfg: &RankConfig) -> Result<Report> {
    let rv = rigidity_of(h, cfg)?;
    let (verdict, exit_code) =
        if rv.dof == 0 { (Verdict::FullRank, exit::OK) } else { (Verdict::Flexible, exit::NEGATIVE) };
    Ok(Report {
        command: "rank".into(),
        input_digest: digest,
        bodies: h.body_count(),
        edges: h.edge_count(),
        sparsity: None,
        rigidity: rv.into(),
        verdict,
        exit_code,
        timing_ms: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use bodybar_core::GainVector;

    fn example(gains: [[i64; 3]; 3]) -> BodyBarOrbitGraph {
        let mut g = BodyBarOrbitGraph::new();
        let a = g.add_body();
        let b = g.add_body();
        for gain in gains {
            g.add_edge(a, b, GainVector(gain)).unwrap();
        }
        for _ in 0..6 {
            g.add_edge(a, b, GainVector::ZERO).unwrap();
        }
        g
    }

    #[test]
    fn example_is_minimally_rigid() {
        let r =
            check_graph(&example([[1, 0, 0], [1, 0, 0], [0, 1, 0]]), String::new(), &CheckOptions::default()).unwrap();
        assert_eq!(r.exit_code, exit::OK);
        assert_eq!(r.rigidity.rank, 51);
        let s = r.sparsity.unwrap();
        assert_eq!(s.engine, SparsityEngine::BruteForce);
        assert!(s.witness.is_none());
    }

    #[test]
    fn collinear_gains_fail_with_full_witness() {
        let r =
            check_graph(&example([[1, 0, 0], [2, 0, 0], [3, 0, 0]]), String::new(), &CheckOptions::default()).unwrap();
        assert_eq!(r.exit_code, exit::NEGATIVE);
        assert_eq!(r.verdict, Verdict::NotMinimallyRigid);
        assert_eq!(r.sparsity.unwrap().witness.unwrap().len(), 9);
        assert!(r.rigidity.rank <= 50);
    }

    #[test]
    fn forced_engines_agree() {
        let g = example([[1, 0, 0], [1, 0, 0], [0, 1, 0]]);
        for engine in [SparsityEngine::BruteForce, SparsityEngine::Connected, SparsityEngine::Matroid] {
            let opts = CheckOptions { engine: Some(engine), ..CheckOptions::default() };
            let r = check_graph(&g, String::new(), &opts).unwrap();
            assert_eq!(r.exit_code, exit::OK, "{engine:?}");
        }
    }

    #[test]
    fn rank_report() {
        let r = rank_graph(&example([[1, 0, 0], [2, 0, 0], [3, 0, 0]]), String::new(), &RankConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Flexible);
        assert!(r.sparsity.is_none());
        assert!(!r.to_json().contains("sparsity"));
    }
}
