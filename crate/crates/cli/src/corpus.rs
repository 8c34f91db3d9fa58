//! Random small gain graphs for cross-validation.
//!
//! Item `i` of a corpus depends only on `(seed, i)`. About half the items
//! have the tight edge count when it fits under the edge limit, so both
//! verdicts are exercised on either side; gains mix generic, planar,
//! collinear and mostly-zero draws so that many tight items fail sparsity.

use bodybar_core::{BodyBarOrbitGraph, BodyId, GainVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub max_bodies: usize,
    pub max_edges: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum GainStyle {
    Generic,
    Planar,
    Collinear,
    MostlyZero,
}

impl CorpusSpec {
    pub fn item(&self, index: u64) -> BodyBarOrbitGraph {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        let n = rng.gen_range(1..=self.max_bodies.max(1));
        let tight = 6 * n - 3;
        let m =
            if tight <= self.max_edges && rng.gen_bool(0.5) { tight } else { rng.gen_range(1..=self.max_edges.max(1)) };
        let style = match rng.gen_range(0..4) {
            0 => GainStyle::Generic,
            1 => GainStyle::Planar,
            2 => GainStyle::Collinear,
            _ => GainStyle::MostlyZero,
        };
        let mut g = BodyBarOrbitGraph::new();
        for _ in 0..n {
            g.add_body();
        }
        for _ in 0..m {
            let tail = BodyId(rng.gen_range(0..n as u32));
            let head = BodyId(rng.gen_range(0..n as u32));
            let gain = draw_gain(&mut rng, style);
            g.add_edge(tail, head, gain).expect("bodies exist");
        }
        g
    }

    pub fn items(&self, count: usize) -> impl Iterator<Item = BodyBarOrbitGraph> + '_ {
        (0..count as u64).map(|i| self.item(i))
    }
}

fn draw_gain(rng: &mut ChaCha8Rng, style: GainStyle) -> GainVector {
    let mut c = || rng.gen_range(-2..=2);
    match style {
        GainStyle::Generic => GainVector([c(), c(), c()]),
        GainStyle::Planar => GainVector([c(), c(), 0]),
        GainStyle::Collinear => GainVector([c(), 0, 0]),
        GainStyle::MostlyZero => {
            if rng.gen_bool(0.6) {
                GainVector::ZERO
            } else {
                GainVector([(); 3].map(|_| rng.gen_range(-1..=1)))
            }
        }
    }
}
