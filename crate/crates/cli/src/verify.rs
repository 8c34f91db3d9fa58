//! The cross-validation harness behind `verify`.
//!
//! Every corpus item runs the combinatorial and linear checks against each
//! other; a share of generator outputs runs the construction and reduction
//! round trip. Items are split across threads and merged by index.

use std::thread;

use bodybar_core::constructions::{random_tight_graph, reduce_to_seed};
use bodybar_core::field::PrimeField;
use bodybar_core::rigidity::{translations_in_kernel, RankConfig};
use bodybar_core::sparsity::{
    check_sparsity_bruteforce, check_sparsity_connected, deficiency, independence_matroid, SparsityVerdict,
};
use bodybar_core::BodyBarOrbitGraph;
use serde::{Deserialize, Serialize};

use crate::corpus::CorpusSpec;
use crate::document::{canonical, parse_graph};
use crate::error::exit;
use crate::matrix_csv::field_matrix;
use crate::report::rigidity_of;
use crate::trace::{from_document, parse_trace, to_document, write_trace};

pub const DEFAULT_CORPUS_SIZE: usize = 200;
pub const DEFAULT_MAX_BODIES: usize = 3;
pub const DEFAULT_MAX_EDGES: usize = 12;
pub const RANK_SEEDS: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub corpus_size: usize,
    pub max_bodies: usize,
    pub max_edges: usize,
    /// Generator outputs for the round trip; bodies range over `2..=max(2, max_bodies)`.
    pub generated: usize,
    pub seed: u64,
    pub threads: usize,
}

impl VerifyOptions {
    pub fn new(corpus_size: usize, max_bodies: usize, seed: u64) -> Self {
        VerifyOptions {
            corpus_size,
            max_bodies,
            max_edges: DEFAULT_MAX_EDGES,
            generated: corpus_size.div_ceil(10),
            seed,
            threads: thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    pub fn rank_seeds(&self) -> Vec<u64> {
        (0..RANK_SEEDS).map(|k| self.seed.wrapping_add(k)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// Tight and sparse iff minimally rigid, at every rank seed.
    Equivalence,
    /// Brute force and connected sweeps give the same booleans.
    Pruning,
    /// Brute-force sparsity iff the bars are generically independent.
    MatroidOracle,
    /// Every witness breaks the count.
    Witness,
    /// Translations lie in the kernel of the assembled matrix.
    Kernel,
    /// Tight sparse graphs have a body of degree at most 11.
    DegreeBound,
    /// parse(serialize(G)) serializes to the same bytes.
    DocumentRoundTrip,
    /// Generator outputs are tight, sparse and minimally rigid.
    Generator,
    /// Reduction takes `|V| - 1` steps and its replay restores the graph.
    Reduction,
    /// The trace survives JSON and still replays.
    TraceRoundTrip,
}

const PROPERTIES: [Property; 10] = [
    Property::Equivalence,
    Property::Pruning,
    Property::MatroidOracle,
    Property::Witness,
    Property::Kernel,
    Property::DegreeBound,
    Property::DocumentRoundTrip,
    Property::Generator,
    Property::Reduction,
    Property::TraceRoundTrip,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub item: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub checked: u64,
    pub failures: u64,
    pub first_failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub command: String,
    pub corpus_size: usize,
    pub max_bodies: usize,
    pub max_edges: usize,
    pub generated: usize,
    pub seed: u64,
    pub rank_seeds: Vec<u64>,
    pub properties: Vec<PropertyReport>,
    /// Items where the combinatorial and linear verdicts differ.
    pub disagreements: u64,
    pub exit_code: i32,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        crate::document::compact_json(self)
    }

    pub fn property(&self, p: Property) -> &PropertyReport {
        self.properties.iter().find(|r| r.property == p).expect("every property is reported")
    }
}

/// Outcomes of one item, in the order they were checked.
type Outcomes = Vec<(Property, Result<(), String>)>;

#[derive(Debug, Clone, Copy)]
enum Item {
    Corpus(u64),
    Generated(u64),
}

impl Item {
    fn name(&self) -> String {
        match self {
            Item::Corpus(i) => format!("corpus[{i}]"),
            Item::Generated(i) => format!("generated[{i}]"),
        }
    }
}

fn expect(ok: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn run_item(opts: &VerifyOptions, item: Item) -> Outcomes {
    match item {
        Item::Corpus(i) => {
            let spec = CorpusSpec { seed: opts.seed, max_bodies: opts.max_bodies, max_edges: opts.max_edges };
            corpus_item(&spec.item(i), &opts.rank_seeds())
        }
        Item::Generated(i) => {
            let bodies = 2 + (i as usize) % (opts.max_bodies.max(2) - 1);
            generated_item(bodies, opts.seed.wrapping_add(i), opts.seed)
        }
    }
}

fn failed<E: std::fmt::Display>(e: E) -> String {
    format!("error: {e}")
}

fn corpus_item(g: &BodyBarOrbitGraph, rank_seeds: &[u64]) -> Outcomes {
    let mut out = Outcomes::new();
    let brute = match check_sparsity_bruteforce(g) {
        Ok(v) => v,
        Err(e) => return vec![(Property::Equivalence, Err(failed(e)))],
    };
    let combinatorial = brute.tight && brute.sparse;

    for &seed in rank_seeds {
        let cfg = RankConfig::with_seed(seed);
        let eq = rigidity_of(g, &cfg).map_err(failed).and_then(|r| {
            expect(r.minimally_rigid == combinatorial, || {
                format!("seed {seed}: tight={} sparse={} rank={} of {}", brute.tight, brute.sparse, r.rank, r.rows)
            })
        });
        out.push((Property::Equivalence, eq));
        let mo = independence_matroid(g, &g.all_edges(), &cfg).map_err(failed).and_then(|ind| {
            expect(ind == brute.sparse, || format!("seed {seed}: sparse={} independent={ind}", brute.sparse))
        });
        out.push((Property::MatroidOracle, mo));
    }

    let pruning = check_sparsity_connected(g).map_err(failed).and_then(|c| {
        expect((c.tight, c.sparse) == (brute.tight, brute.sparse), || {
            format!("brute ({}, {}) connected ({}, {})", brute.tight, brute.sparse, c.tight, c.sparse)
        })
    });
    out.push((Property::Pruning, pruning));

    if let Some(w) = &brute.witness {
        out.push((Property::Witness, witness_violates(g, w)));
    }

    let kernel = field_matrix(g, bodybar_core::field::MERSENNE_61, rank_seeds[0]).map_err(failed).and_then(|m| {
        expect(translations_in_kernel(&PrimeField::mersenne61(), &m.matrix), || "translation not in kernel".into())
    });
    out.push((Property::Kernel, kernel));

    if combinatorial {
        let min_degree = g.bodies().map(|b| g.degree(b)).min().unwrap_or(0);
        out.push((Property::DegreeBound, expect(min_degree <= 11, || format!("minimum degree {min_degree}"))));
    }

    out.push((Property::DocumentRoundTrip, document_round_trip(g)));
    out
}

fn witness_violates(g: &BodyBarOrbitGraph, witness: &[bodybar_core::EdgeId]) -> Result<(), String> {
    let y = g.subset(witness.iter().copied()).map_err(failed)?;
    let b = deficiency(&y).map_err(failed)?;
    expect(b < 0, || format!("witness {witness:?} has deficiency {b}"))
}

fn document_round_trip(g: &BodyBarOrbitGraph) -> Result<(), String> {
    let text = canonical(g);
    let back = parse_graph(&text).map_err(failed)?;
    expect(canonical(&back) == text, || "canonical text changed".into())
}

fn generated_item(bodies: usize, gen_seed: u64, rank_seed: u64) -> Outcomes {
    let mut out = Outcomes::new();
    let g = match random_tight_graph(bodies, gen_seed) {
        Ok(g) => g,
        Err(e) => return vec![(Property::Generator, Err(failed(e)))],
    };
    let cfg = RankConfig::with_seed(rank_seed);
    let checked: Result<SparsityVerdict, String> = check_sparsity_bruteforce(&g).map_err(failed);
    let generator = checked.and_then(|v| {
        let r = rigidity_of(&g, &cfg).map_err(failed)?;
        expect(v.tight && v.sparse && r.minimally_rigid, || {
            format!("{bodies} bodies, seed {gen_seed}: tight={} sparse={} rank={}", v.tight, v.sparse, r.rank)
        })
    });
    out.push((Property::Generator, generator));

    let trace = match reduce_to_seed(&g, &cfg) {
        Ok(t) => t,
        Err(e) => {
            out.push((Property::Reduction, Err(format!("{bodies} bodies, seed {gen_seed}: {e}"))));
            return out;
        }
    };
    let reduction = trace.replay().map_err(failed).and_then(|back| {
        expect(trace.steps.len() + 1 == bodies && back == g, || {
            format!("{bodies} bodies, seed {gen_seed}: {} steps, replay equal: {}", trace.steps.len(), back == g)
        })
    });
    out.push((Property::Reduction, reduction));

    let text = write_trace(&to_document(&g, &trace, String::new(), rank_seed));
    let json = parse_trace(&text)
        .map_err(failed)
        .and_then(|doc| from_document(&doc).map_err(failed))
        .and_then(|t| t.replay().map_err(failed))
        .and_then(|back| expect(canonical(&back) == canonical(&g), || "replayed graph differs".into()));
    out.push((Property::TraceRoundTrip, json));
    out
}

pub fn run(opts: &VerifyOptions) -> VerifyReport {
    let items: Vec<Item> =
        (0..opts.corpus_size as u64).map(Item::Corpus).chain((0..opts.generated as u64).map(Item::Generated)).collect();
    let threads = opts.threads.clamp(1, items.len().max(1));
    let chunk = items.len().div_ceil(threads).max(1);
    let outcomes: Vec<(Item, Outcomes)> = thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|&it| (it, run_item(opts, it))).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("verify worker panicked")).collect()
    });

    let mut reports: Vec<PropertyReport> = PROPERTIES
        .iter()
        .map(|&property| PropertyReport { property, checked: 0, failures: 0, first_failure: None })
        .collect();
    let mut disagreements = 0;
    for (item, results) in &outcomes {
        let mut disagreed = false;
        for (property, result) in results {
            let r = reports.iter_mut().find(|r| r.property == *property).expect("known property");
            r.checked += 1;
            if let Err(detail) = result {
                r.failures += 1;
                disagreed |= *property == Property::Equivalence;
                r.first_failure.get_or_insert_with(|| Failure { item: item.name(), detail: detail.clone() });
            }
        }
        disagreements += u64::from(disagreed);
    }

    let exit_code = if disagreements > 0 {
        exit::DISAGREEMENT
    } else if reports.iter().any(|r| r.failures > 0) {
        exit::INTERNAL
    } else {
        exit::OK
    };
    VerifyReport {
        command: "verify".into(),
        corpus_size: opts.corpus_size,
        max_bodies: opts.max_bodies,
        max_edges: opts.max_edges,
        generated: opts.generated,
        seed: opts.seed,
        rank_seeds: opts.rank_seeds(),
        properties: reports,
        disagreements,
        exit_code,
    }
}
