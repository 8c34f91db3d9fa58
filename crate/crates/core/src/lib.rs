//! Generic rigidity of periodic body-bar frameworks on the fixed 3-torus.
//!
//! A periodic body-bar framework is recorded by its quotient: a multigraph
//! whose vertices are bodies and whose edges carry lattice translations in
//! `Z^3` (a *gain graph*). This crate decides whether such a graph is
//! generically minimally rigid on the fixed unit torus in two independent
//! ways:
//!
//! * combinatorially, through the `[6,3]` gain-sparsity count in
//!   [`sparsity`], where every edge set `Y` must satisfy
//!   `|Y| <= 6|V(Y)| - 6 + bonus(rank of the gain space of Y)`;
//! * linearly, by inducing a bar-joint framework and computing the rank of its
//!   periodic rigidity matrix at random points of a large prime field
//!   ([`rigidity`]).
//!
//! [`constructions`] carries the inductive moves (gain-modified edge pinches,
//! periodic vertex additions and edge splits), a random generator of tight
//! sparse graphs and the splitting-off reducer that inverts the pinches.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constructions;
pub mod error;
pub mod field;
pub mod gain;
pub mod graph;
pub mod lattice;
pub mod matrix;
pub mod rigidity;
pub mod sparsity;

pub use error::{Error, Result};
pub use gain::{GainVector, DEFAULT_GAIN_CAP};
pub use graph::{BodyBarOrbitGraph, BodyId, EdgeId, EdgeSubset, OrientedEdge};
