//! JSON form of a reduction trace, with bodies named by label.
//!
//! `steps` are in removal order; replay applies their pinches in reverse,
//! starting from `terminal`. A pinch cuts each `pinched` edge at the restored
//! body, adds its `loops`, and joins it to each `new_edges` target.

use std::collections::BTreeSet;

use bodybar_core::constructions::{NewBar, NewLoop, PinchSpec, PinchedEdge, ReductionStep, ReductionTrace};
use bodybar_core::{BodyBarOrbitGraph, BodyId, EdgeId, GainVector, DEFAULT_GAIN_CAP};
use serde::{Deserialize, Serialize};

use crate::document::{from_graph, parse_json, GraphDocument};
use crate::error::Diagnostic;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDocument {
    pub input_digest: String,
    pub seed: u64,
    pub steps: Vec<StepRecord>,
    pub terminal: GraphDocument,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepRecord {
    pub removed: String,
    pub n: usize,
    pub j: usize,
    pub pinched: Vec<PinchedRecord>,
    pub loops: Vec<LoopRecord>,
    pub new_edges: Vec<BarRecord>,
    /// New edges stored in the opposite direction to the one written.
    pub reversed: Vec<u32>,
}

/// Edge `edge`, read from `tail`, is cut by the restored body into
/// `first_id` (gain `first_gain`) and `second_id`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PinchedRecord {
    pub edge: u32,
    pub tail: String,
    pub first_gain: [i64; 3],
    pub first_id: u32,
    pub second_id: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopRecord {
    pub id: u32,
    pub gain: [i64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarRecord {
    pub id: u32,
    pub target: String,
    pub gain: [i64; 3],
}

/// Labels resolve against the input graph, which holds every body of the trace.
pub fn to_document(input: &BodyBarOrbitGraph, trace: &ReductionTrace, digest: String, seed: u64) -> TraceDocument {
    let label = |b: BodyId| input.label(b).expect("trace bodies come from the input").to_string();
    let steps = trace
        .steps
        .iter()
        .map(|s| {
            let p = &s.inverse;
            StepRecord {
                removed: label(s.removed),
                n: p.n(),
                j: p.j(),
                pinched: p
                    .pinched
                    .iter()
                    .map(|e| PinchedRecord {
                        edge: e.edge.0,
                        tail: label(e.tail),
                        first_gain: e.first_gain.0,
                        first_id: e.first_id.0,
                        second_id: e.second_id.0,
                    })
                    .collect(),
                loops: p.loops.iter().map(|l| LoopRecord { id: l.id.0, gain: l.gain.0 }).collect(),
                new_edges: p
                    .new_edges
                    .iter()
                    .map(|b| BarRecord { id: b.id.0, target: label(b.target), gain: b.gain.0 })
                    .collect(),
                reversed: p.reversed.iter().map(|e| e.0).collect(),
            }
        })
        .collect();
    TraceDocument { input_digest: digest, seed, steps, terminal: from_graph(&trace.terminal) }
}

pub fn write_trace(doc: &TraceDocument) -> String {
    crate::document::compact_json(doc)
}

pub fn parse_trace(text: &str) -> Result<TraceDocument, Diagnostic> {
    parse_json(text)
}

/// Rebuilds the core trace. Body ids follow the sorted order of every label
/// in the trace, matching the ids the input document would have received.
pub fn from_document(doc: &TraceDocument) -> Result<ReductionTrace, Diagnostic> {
    let mut labels: BTreeSet<&str> = doc.terminal.bodies.iter().map(String::as_str).collect();
    for (i, s) in doc.steps.iter().enumerate() {
        if !labels.insert(&s.removed) {
            return Err(Diagnostic::at_field(
                format!("steps[{i}].removed"),
                format!("body {:?} appears twice", s.removed),
            ));
        }
    }
    let ids: Vec<&str> = labels.into_iter().collect();
    let id_of = |label: &str, field: String| {
        ids.binary_search(&label)
            .map(|k| BodyId(k as u32))
            .map_err(|_| Diagnostic::at_field(field, format!("unknown body {label:?}")))
    };
    let gain = |g: [i64; 3], field: String| {
        GainVector::bounded(g, DEFAULT_GAIN_CAP).map_err(|e| Diagnostic::at_field(field, e.to_string()))
    };

    let mut terminal = BodyBarOrbitGraph::new();
    for label in &doc.terminal.bodies {
        terminal
            .insert_body(id_of(label, "terminal.bodies".into())?, label.clone())
            .map_err(|e| Diagnostic::at_field("terminal.bodies", e.to_string()))?;
    }
    for (i, e) in doc.terminal.edges.iter().enumerate() {
        let field = |f: &str| format!("terminal.edges[{i}]{f}");
        let id = e.id.ok_or_else(|| Diagnostic::at_field(field(".id"), "trace edges need ids"))?;
        let edge = bodybar_core::OrientedEdge::new(
            EdgeId(id),
            id_of(&e.u, field(".u"))?,
            id_of(&e.v, field(".v"))?,
            gain(e.gain, field(".gain"))?,
        );
        terminal.insert_edge(edge).map_err(|err| Diagnostic::at_field(field(""), err.to_string()))?;
    }

    let mut steps = Vec::with_capacity(doc.steps.len());
    for (i, s) in doc.steps.iter().enumerate() {
        let at = |f: String| format!("steps[{i}].{f}");
        let pinched = s
            .pinched
            .iter()
            .enumerate()
            .map(|(k, p)| {
                Ok(PinchedEdge {
                    edge: EdgeId(p.edge),
                    tail: id_of(&p.tail, at(format!("pinched[{k}].tail")))?,
                    first_gain: gain(p.first_gain, at(format!("pinched[{k}].first_gain")))?,
                    first_id: EdgeId(p.first_id),
                    second_id: EdgeId(p.second_id),
                })
            })
            .collect::<Result<Vec<_>, Diagnostic>>()?;
        let loops = s
            .loops
            .iter()
            .enumerate()
            .map(|(k, l)| Ok(NewLoop { id: EdgeId(l.id), gain: gain(l.gain, at(format!("loops[{k}].gain")))? }))
            .collect::<Result<Vec<_>, Diagnostic>>()?;
        let new_edges = s
            .new_edges
            .iter()
            .enumerate()
            .map(|(k, b)| {
                Ok(NewBar {
                    id: EdgeId(b.id),
                    target: id_of(&b.target, at(format!("new_edges[{k}].target")))?,
                    gain: gain(b.gain, at(format!("new_edges[{k}].gain")))?,
                })
            })
            .collect::<Result<Vec<_>, Diagnostic>>()?;
        let inverse = PinchSpec {
            body: id_of(&s.removed, at("removed".into()))?,
            label: s.removed.clone(),
            pinched,
            loops,
            new_edges,
            reversed: s.reversed.iter().map(|&e| EdgeId(e)).collect(),
        };
        if (inverse.n(), inverse.j()) != (s.n, s.j) {
            return Err(Diagnostic::at_field(at("n".into()), "n and j do not match the listed edges"));
        }
        steps.push(ReductionStep { removed: inverse.body, inverse });
    }
    Ok(ReductionTrace { steps, terminal })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::document::{canonical, parse_graph};
    use bodybar_core::constructions::{random_tight_graph, reduce_to_seed};
    use bodybar_core::rigidity::RankConfig;

    #[test]
    fn json_round_trip_replays() {
        for seed in 0..4 {
            let g = parse_graph(&canonical(&random_tight_graph(3, seed).unwrap())).unwrap();
            let trace = reduce_to_seed(&g, &RankConfig::default()).unwrap();
            let doc = to_document(&g, &trace, "sha256:x".into(), 1);
            assert_eq!(doc.steps.len(), 2);
            let text = write_trace(&doc);
            let back = parse_trace(&text).unwrap();
            assert_eq!(back, doc);
            let rebuilt = from_document(&back).unwrap();
            assert_eq!(rebuilt, trace);
            assert_eq!(canonical(&rebuilt.replay().unwrap()), canonical(&g));
        }
    }

    #[test]
    fn unknown_label_is_reported() {
        let g = random_tight_graph(2, 3).unwrap();
        let trace = reduce_to_seed(&g, &RankConfig::default()).unwrap();
        let mut doc = to_document(&g, &trace, String::new(), 1);
        doc.steps[0].new_edges[0].target = "nowhere".into();
        let d = from_document(&doc).unwrap_err();
        assert_eq!(d.field, "steps[0].new_edges[0].target");
    }
}
