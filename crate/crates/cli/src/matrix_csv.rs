//! CSV dump of the periodic rigidity matrix of the induced framework.
//!
//! One row per bar-joint edge, three columns per vertex. Vertex `k` is the
//! `k`-th entry of `bodies` in the `induce` output. Entries are residues in
//! `0..p` at the positions of the first rank trial for the given seed.

use std::fmt::Write as _;

use bodybar_core::field::PrimeField;
use bodybar_core::rigidity::{assemble_matrix, field_positions, induce_bar_joint, PeriodicRigidityMatrix};
use bodybar_core::BodyBarOrbitGraph;

use crate::error::Result;

pub fn field_matrix(h: &BodyBarOrbitGraph, prime: u64, seed: u64) -> Result<PeriodicRigidityMatrix<u64>> {
    let field = PrimeField::new(prime)?;
    let graph = induce_bar_joint(h).graph;
    let positions = field_positions(graph.vertex_count(), prime, seed);
    Ok(assemble_matrix(&graph, &positions, &field)?)
}

pub fn to_csv(m: &PeriodicRigidityMatrix<u64>) -> String {
    let mut out = String::from("edge_id");
    for v in 0..m.matrix.cols() / 3 {
        let _ = write!(out, ",v:{v}:x,v:{v}:y,v:{v}:z");
    }
    out.push('\n');
    for (r, id) in m.row_edges.iter().enumerate() {
        let _ = write!(out, "{}", id.0);
        for x in m.matrix.row(r) {
            let _ = write!(out, ",{x}");
        }
        out.push('\n');
    }
    out
}
