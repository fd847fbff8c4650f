//! Commutation structure of degree sets, compatibility covers, the cover
//! score and sample allocation across cover subsets.

mod allocate;
mod cover;
mod graph;

pub use allocate::{allocate_batches, allocate_sizes, allocation_objective, batch_weights, BatchPlan};
pub use cover::{best_cover, cover_score, greedy_cover, Cover, CoverStrategy, DEFAULT_RESTARTS, EXHAUSTIVE_MAX};
pub use graph::{build_commutation_graph, pauli_commute, reference_effects, CommutationGraph};
