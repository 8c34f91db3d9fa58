//! The JSON graph format.
//!
//! ```json
//! {
//!   "dim": 3,
//!   "bodies": ["B0", "B1"],
//!   "edges": [
//!     {"id": 0, "u": "B0", "v": "B1", "gain": [1, 0, 0]}
//!   ]
//! }
//! ```
//!
//! Bodies are string labels. An edge runs from `u` to `v` and wraps `gain`
//! unit cells; `id` is optional on input. The canonical form lists bodies in
//! lexicographic order, edges by id, one edge per line.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use bodybar_core::{BodyBarOrbitGraph, BodyId, EdgeId, GainVector, OrientedEdge, DEFAULT_GAIN_CAP};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Diagnostic;

pub const DIM: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub dim: u32,
    pub bodies: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<u32>,
    pub u: String,
    pub v: String,
    pub gain: [i64; 3],
}

/// Parses JSON text into any document type, reporting the failing field and
/// position.
pub fn parse_json<'de, T: Deserialize<'de>>(text: &'de str) -> Result<T, Diagnostic> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let field = e.path().to_string();
        json_diagnostic(field, e.into_inner())
    })?;
    de.end().map_err(|e| json_diagnostic(String::new(), e))?;
    Ok(value)
}

fn json_diagnostic(field: String, e: serde_json::Error) -> Diagnostic {
    let full = e.to_string();
    let suffix = format!(" at line {} column {}", e.line(), e.column());
    let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
    Diagnostic { field, line: Some(e.line()), column: Some(e.column()), message }
}

pub fn parse_document(text: &str) -> Result<GraphDocument, Diagnostic> {
    parse_json(text)
}

/// Parses and validates a document, assigning body ids in label order and
/// free edge ids, in document order, to edges without one.
pub fn parse_graph(text: &str) -> Result<BodyBarOrbitGraph, Diagnostic> {
    to_graph(&parse_document(text)?, DEFAULT_GAIN_CAP)
}

pub fn to_graph(doc: &GraphDocument, gain_cap: i64) -> Result<BodyBarOrbitGraph, Diagnostic> {
    if doc.dim != DIM {
        return Err(Diagnostic::at_field("dim", format!("dimension {} is not supported, expected {DIM}", doc.dim)));
    }
    let mut labels: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, label) in doc.bodies.iter().enumerate() {
        if label.is_empty() {
            return Err(Diagnostic::at_field(format!("bodies[{i}]"), "body label is empty"));
        }
        if let Some(first) = labels.insert(label, i) {
            return Err(Diagnostic::at_field(
                format!("bodies[{i}]"),
                format!("label {label:?} repeats bodies[{first}]"),
            ));
        }
    }
    let mut g = BodyBarOrbitGraph::new();
    let mut ids = BTreeMap::new();
    for (k, label) in labels.keys().enumerate() {
        let id = BodyId(k as u32);
        g.insert_body(id, (*label).to_string()).expect("labels are distinct");
        ids.insert(*label, id);
    }

    let mut used = BTreeMap::new();
    for (i, e) in doc.edges.iter().enumerate() {
        if let Some(id) = e.id {
            if let Some(first) = used.insert(id, i) {
                return Err(Diagnostic::at_field(format!("edges[{i}].id"), format!("id {id} repeats edges[{first}]")));
            }
        }
    }
    let mut free = (0u32..).filter(|id| !used.contains_key(id));
    for (i, e) in doc.edges.iter().enumerate() {
        let end = |name: &str, label: &str| {
            ids.get(label)
                .copied()
                .ok_or_else(|| Diagnostic::at_field(format!("edges[{i}].{name}"), format!("unknown body {label:?}")))
        };
        let (tail, head) = (end("u", &e.u)?, end("v", &e.v)?);
        let gain = GainVector::bounded(e.gain, gain_cap)
            .map_err(|err| Diagnostic::at_field(format!("edges[{i}].gain"), err.to_string()))?;
        let id = e.id.unwrap_or_else(|| free.next().expect("ids are unbounded"));
        g.insert_edge(OrientedEdge::new(EdgeId(id), tail, head, gain))
            .map_err(|err| Diagnostic::at_field(format!("edges[{i}]"), err.to_string()))?;
    }
    Ok(g)
}

/// The canonical document of a graph; edges keep their stored orientation.
pub fn from_graph(g: &BodyBarOrbitGraph) -> GraphDocument {
    let mut bodies: Vec<String> = g.labelled_bodies().map(|(_, l)| l.to_string()).collect();
    bodies.sort();
    let label = |b| g.label(b).expect("edge endpoints are bodies").to_string();
    let edges = g
        .edges()
        .map(|e| EdgeRecord { id: Some(e.id.0), u: label(e.tail), v: label(e.head), gain: e.gain.0 })
        .collect();
    GraphDocument { dim: DIM, bodies, edges }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// Writes `doc` as is (no reordering) in the canonical layout.
pub fn write_document(doc: &GraphDocument) -> String {
    let mut out = String::new();
    let bodies: Vec<String> = doc.bodies.iter().map(|b| json_str(b)).collect();
    let _ = writeln!(out, "{{\n  \"dim\": {},\n  \"bodies\": [{}],", doc.dim, bodies.join(", "));
    if doc.edges.is_empty() {
        out.push_str("  \"edges\": []\n}\n");
        return out;
    }
    out.push_str("  \"edges\": [\n");
    for (i, e) in doc.edges.iter().enumerate() {
        out.push_str("    {");
        if let Some(id) = e.id {
            let _ = write!(out, "\"id\": {id}, ");
        }
        let [a, b, c] = e.gain;
        let _ = write!(out, "\"u\": {}, \"v\": {}, \"gain\": [{a}, {b}, {c}]}}", json_str(&e.u), json_str(&e.v));
        out.push_str(if i + 1 == doc.edges.len() { "\n" } else { ",\n" });
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn canonical(g: &BodyBarOrbitGraph) -> String {
    write_document(&from_graph(g))
}

/// Collapsed groups must fit in this many characters.
const INLINE_WIDTH: usize = 72;

/// Pretty JSON with every short nested array or object on one line.
pub fn compact_json<T: Serialize>(value: &T) -> String {
    let pretty = serde_json::to_string_pretty(value).expect("plain data serializes");
    let mut out = String::with_capacity(pretty.len());
    let mut open = Vec::new();
    let (mut in_string, mut escaped) = (false, false);
    for c in pretty.chars() {
        out.push(c);
        if in_string {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_string = true,
            '[' | '{' => open.push(out.len() - 1),
            ']' | '}' => {
                let start = open.pop().expect("brackets balance");
                let mut flat = String::new();
                for (i, line) in out[start..].split('\n').enumerate() {
                    let line = if i == 0 { line } else { line.trim_start() };
                    if flat.ends_with(',') {
                        flat.push(' ');
                    }
                    flat.push_str(line);
                }
                if !open.is_empty() && flat.len() <= INLINE_WIDTH {
                    out.truncate(start);
                    out.push_str(&flat);
                }
            }
            _ => {}
        }
    }
    out.push('\n');
    out
}

/// `sha256:<hex>` of the raw input bytes.
pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// Vertex labels `<body>:<k>` and bars of an induced bar-joint framework, in
/// vertex and edge order.
pub fn bar_joint_document(h: &BodyBarOrbitGraph) -> GraphDocument {
    let f = bodybar_core::rigidity::induce_bar_joint(h);
    let labels: Vec<String> = (0..f.graph.vertex_count()).map(|v| f.vertex_label(h, v)).collect();
    let edges = f
        .graph
        .edges()
        .map(|e| EdgeRecord { id: Some(e.id.0), u: labels[e.tail].clone(), v: labels[e.head].clone(), gain: e.gain.0 })
        .collect();
    GraphDocument { dim: DIM, bodies: labels, edges }
}

/// Labels of a body-id set, sorted.
pub fn labels_of(g: &BodyBarOrbitGraph, bodies: impl IntoIterator<Item = BodyId>) -> Vec<String> {
    let set: BTreeSet<String> = bodies.into_iter().filter_map(|b| g.label(b)).map(str::to_string).collect();
    set.into_iter().collect()
}
