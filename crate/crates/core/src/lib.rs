//! Path-based explainable sequential recommendation over a heterogeneous
//! user/item/brand/category interaction graph.
//!
//! The pipeline, end to end:
//!
//! 1. [`hin`] — ingest interactions and metadata into an inverse-closed
//!    typed multigraph and per-user temporal sequences with a
//!    bridge/train/test split.
//! 2. [`embedding`] — truncated random walks on the user-item bipartite
//!    subgraph plus skip-gram with negative sampling to learn node vectors;
//!    a second skip-gram pass over mined path corpora covers attribute
//!    nodes.
//! 3. [`explorer`] — a policy-gradient walker mines scored path instances
//!    between consecutive items (and user to first item).
//! 4. [`attention`] — multi-head self-attention pools each transition's
//!    path set into a context vector; gated two-layer updates carry
//!    sequential information between item representations.
//! 5. [`recommender`] — fuses user, item, and context representations and
//!    scores candidates with a sigmoid MLP tower, trained with sampled
//!    negatives.
//! 6. [`evaluation`] — HR@K / NDCG@K under the sampled-negative ranking
//!    protocol.
//! 7. [`explain`] — per-transition explanation records pairing mined paths
//!    with their attention weights.

pub mod attention;
pub mod embedding;
pub mod evaluation;
pub mod explain;
pub mod explorer;
pub mod hin;
pub mod linalg;
pub mod recommender;
pub mod synth;

/// Derives an independent RNG seed from a base seed and a sequence of
/// context tags (splitmix64 chain). Used so that per-node, per-pair and
/// per-instance generators are reproducible regardless of execution order.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    let mut state = base ^ 0x9e37_79b9_7f4a_7c15;
    let mix = |mut z: u64| {
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    state = mix(state);
    for &p in parts {
        state = mix(state.wrapping_add(p).wrapping_mul(0x2545_f491_4f6c_dd1d));
    }
    state
}
