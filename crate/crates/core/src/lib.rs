//! Hamiltonicity decision by vertex growth over a 0/1-cost travelling
//! salesman reduction.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`graph`]: graphs, edges, tours and the 0/1 cost function,
//! - [`oracle`]: exact ground truth (backtracking, Held–Karp, enumeration),
//! - [`moves`]: 2-opt / 3-opt / double-bridge exchange generators,
//! - [`closure`]: the optimizing-edge closures (OER and MOER),
//! - [`growth`]: the m → m+1 growth loop and the final decision.
//!
//! IO, file formats, random instance generation and the falsification
//! harness live in the companion `hamgrow` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod closure;
mod error;
pub mod graph;
pub mod growth;
pub mod moves;
pub mod oracle;

pub use closure::{moer_closure, oer_closure, ClosureConfig, ClosureResult, ClosureStatus};
pub use error::Error;
pub use graph::{reduce_to_tsp, CostFn, Edge, Graph, Tour, Vertex};
pub use growth::{
    construct_tour, decide_hamiltonian, grow, insertion_context, is_hamiltonian_cycle, predict_cost, rebuild_edge_set,
    select_initial_quad, Construction, Decision, GrowOutcome, GrowthConfig, GrowthState, InsertionContext, Provider,
    QuadSelection, TraceRow, Verdict,
};
pub use moves::{double_bridge_moves, three_opt_moves, two_opt_moves, Move, MoveKind};
pub use oracle::{
    count_hamiltonian_cycles, enumerate_optimal_tours, exact_optimizing_edges, hc_exists, held_karp, is_connected,
    opt_graph, OptGraph, OptimizingEdgeSet, Regime,
};

pub type Result<T> = core::result::Result<T, Error>;
