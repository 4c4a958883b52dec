//! Optimizing-edge closures.
//!
//! Both closures run a FIFO work list over witness tours. Expanding a
//! tour enumerates every 2-opt, 3-opt and double-bridge exchange and keeps
//! the ones whose cost delta fits the closure's rule. A reached tour that
//! certifies at least one edge not yet in the set becomes the witness of
//! those edges and joins the work list; other reached tours are dropped.
//! The loop stops when the list drains (a fixpoint) or the expansion
//! budget runs out.
//!
//! Invariant kept by the work list: every cost-1 edge of a queued positive
//! regime tour, and every edge of a queued cost-0 tour, is already in the
//! set. New edges can therefore only appear among a move's added edges,
//! except for cost-1 → cost-0 moves where the kept cost-0 edges of the
//! source may be new as well.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use crate::graph::{CostFn, Edge, Tour, Vertex};
use crate::moves::{for_each_exchange, Exchange};
use crate::oracle::{OptimizingEdgeSet, Regime};
use crate::{Error, Result};

/// Limits for a single closure run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureConfig {
    /// Maximum number of work-list tours expanded.
    pub max_tours_expanded: u64,
}

impl Default for ClosureConfig {
    fn default() -> Self {
        ClosureConfig { max_tours_expanded: 1_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureStatus {
    Fixpoint,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureResult {
    pub edge_set: OptimizingEdgeSet,
    /// Exchanges evaluated, whatever their delta.
    pub moves_examined: u64,
    /// Distinct witness tours that entered the work list, seeds included.
    pub tours_discovered: u64,
    pub tours_expanded: u64,
    pub status: ClosureStatus,
}

struct WorkList {
    queue: VecDeque<(Tour, u32)>,
    queued: BTreeSet<Tour>,
}

impl WorkList {
    fn new() -> Self {
        WorkList { queue: VecDeque::new(), queued: BTreeSet::new() }
    }

    fn push(&mut self, t: Tour, cost: u32) {
        if self.queued.insert(t.clone()) {
            self.queue.push_back((t, cost));
        }
    }
}

fn check_covers(t: &Tour, subset: &[Vertex]) -> Result<()> {
    if t.vertex_set() != subset {
        return Err(Error::InvalidInput("tour does not cover the sub-problem"));
    }
    Ok(())
}

/// Grows the positive-regime optimizing-edge set reachable from `seed` by
/// cost-preserving exchanges.
///
/// Every cost-1 edge of the seed and of the seed set's witnesses is
/// recorded up front; afterwards only exchanges with delta 0 are followed.
pub fn oer_closure(c: &CostFn, seed: &Tour, seed_set: &OptimizingEdgeSet, cfg: ClosureConfig) -> Result<ClosureResult> {
    if seed_set.regime() != Regime::Positive {
        return Err(Error::InvalidInput("OER needs a positive-regime seed set"));
    }
    check_covers(seed, seed_set.subset())?;
    if c.tour_cost(seed)? != seed_set.optimum() {
        return Err(Error::InvariantViolation("seed cost differs from the stated optimum"));
    }
    if !seed.edges().any(|e| seed_set.contains(e)) {
        return Err(Error::InvalidInput("seed tour carries no edge of the seed set"));
    }
    seed_set.validate(c)?;

    let mut set = seed_set.clone();
    let mut work = WorkList::new();
    let mut initial: Vec<Tour> = set.witness_tours().into_iter().cloned().collect();
    initial.insert(0, seed.canonicalize());
    for t in initial {
        for e in t.edges() {
            if c.edge_cost(e) == 1 {
                set.insert(e, t.clone());
            }
        }
        work.push(t, set.optimum());
    }

    let mut stats = Stats::default();
    let status = drain(c, &mut set, &mut work, &mut stats, cfg, |set, _, _, x, found| {
        if x.delta(c) != 0 {
            return None;
        }
        for &e in x.in_edges() {
            if c.edge_cost(e) == 1 && !set.contains(e) {
                found.push(e);
            }
        }
        Some(set.optimum())
    })?;

    Ok(ClosureResult {
        edge_set: set,
        moves_examined: stats.moves,
        tours_discovered: work.queued.len() as u64,
        tours_expanded: stats.expanded,
        status,
    })
}

/// Builds the zero-regime optimizing-edge set reachable from a cost-0 seed.
///
/// Four exchange rules run over a pool of cost-0 tours and a pool of
/// cost-1 tours:
///
/// - cost 0 → 0: edges of the reached tour join the set,
/// - cost 0 → 1: the added cost-1 edge joins the set,
/// - cost 1 → 0: edges of the reached cost-0 tour join the set,
/// - cost 1 → 1: the added cost-1 edge joins the set.
pub fn moer_closure(c: &CostFn, seed: &Tour, cfg: ClosureConfig) -> Result<ClosureResult> {
    if c.tour_cost(seed)? != 0 {
        return Err(Error::InvariantViolation("MOER seed must cost 0"));
    }
    let seed = seed.canonicalize();
    let mut set = OptimizingEdgeSet::new(&seed.vertex_set(), 0);
    for e in seed.edges() {
        set.insert(e, seed.clone());
    }
    let mut work = WorkList::new();
    work.push(seed, 0);

    let mut stats = Stats::default();
    let status = drain(c, &mut set, &mut work, &mut stats, cfg, |set, order, source_cost, x, found| {
        let target = source_cost as i32 + x.delta(c);
        match (source_cost, target) {
            (0, 0) | (0, 1) | (1, 1) => {
                for &e in x.in_edges() {
                    if c.edge_cost(e) == target as u32 && !set.contains(e) {
                        found.push(e);
                    }
                }
            }
            (1, 0) => {
                // kept cost-0 edges of a cost-1 source may be unrecorded
                let out = x.out_edges();
                let m = order.len();
                for i in 0..m {
                    let e = Edge::new(order[i], order[(i + 1) % m]);
                    if !out.contains(&e) && !set.contains(e) {
                        found.push(e);
                    }
                }
                for &e in x.in_edges() {
                    if !set.contains(e) {
                        found.push(e);
                    }
                }
            }
            _ => return None,
        }
        Some(target as u32)
    })?;

    Ok(ClosureResult {
        edge_set: set,
        moves_examined: stats.moves,
        tours_discovered: work.queued.len() as u64,
        tours_expanded: stats.expanded,
        status,
    })
}

#[derive(Default)]
struct Stats {
    moves: u64,
    expanded: u64,
}

/// Shared work-list loop.
///
/// `accept` inspects an exchange from a source tour of the given cost and
/// returns the target cost when the exchange is admissible, pushing any
/// new edges into `found`. Found edges are stored with the materialised
/// tour as witness.
fn drain<A>(
    c: &CostFn,
    set: &mut OptimizingEdgeSet,
    work: &mut WorkList,
    stats: &mut Stats,
    cfg: ClosureConfig,
    mut accept: A,
) -> Result<ClosureStatus>
where
    A: FnMut(&OptimizingEdgeSet, &[Vertex], u32, &Exchange, &mut Vec<Edge>) -> Option<u32>,
{
    let mut found = Vec::new();
    let mut reached = Vec::new();
    while let Some((tour, cost)) = work.queue.pop_front() {
        if stats.expanded >= cfg.max_tours_expanded {
            return Ok(ClosureStatus::BudgetExhausted);
        }
        stats.expanded += 1;
        let order = tour.order();
        for_each_exchange(order, |x| {
            stats.moves += 1;
            found.clear();
            let Some(target) = accept(set, order, cost, x, &mut found) else {
                return;
            };
            if found.is_empty() {
                return;
            }
            found.sort_unstable();
            found.dedup();
            let next = Tour::from_order_unchecked(x.apply(order)).canonicalize();
            debug_assert_eq!(c.cost_of(&next), target);
            for &e in &found {
                set.insert(e, next.clone());
            }
            reached.push((next, target));
        });
        for (next, target) in reached.drain(..) {
            work.push(next, target);
        }
    }
    Ok(ClosureStatus::Fixpoint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{reduce_to_tsp, Graph};
    use crate::oracle::exact_optimizing_edges;
    use alloc::vec;

    fn edges(list: &[(usize, usize)]) -> BTreeSet<Edge> {
        list.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    fn seed_set(c: &CostFn, t: &Tour) -> OptimizingEdgeSet {
        let cost = c.tour_cost(t).unwrap();
        let mut s = OptimizingEdgeSet::new(&t.vertex_set(), cost);
        for e in t.edges().filter(|&e| c.edge_cost(e) == 1) {
            s.insert(e, t.canonicalize());
        }
        s
    }

    #[test]
    fn oer_on_a_path() {
        let c = reduce_to_tsp(&Graph::path(5));
        let seed = Tour::new((0..5).collect()).unwrap();
        let r = oer_closure(&c, &seed, &seed_set(&c, &seed), ClosureConfig::default()).unwrap();
        assert_eq!(r.edge_set.edge_set(), edges(&[(0, 4)]));
        assert_eq!(r.status, ClosureStatus::Fixpoint);
        assert_eq!(r.tours_discovered, 1);
    }

    #[test]
    fn oer_on_a_star() {
        let c = reduce_to_tsp(&Graph::star(4));
        let seed = Tour::new(vec![0, 1, 2, 3]).unwrap();
        let r = oer_closure(&c, &seed, &seed_set(&c, &seed), ClosureConfig::default()).unwrap();
        assert_eq!(r.edge_set.optimum(), 2);
        assert_eq!(r.edge_set.edge_set(), edges(&[(1, 2), (1, 3), (2, 3)]));
        r.edge_set.validate(&c).unwrap();
    }

    #[test]
    fn oer_rejects_a_wrong_optimum() {
        let c = reduce_to_tsp(&Graph::path(4));
        let seed = Tour::new(vec![0, 2, 1, 3]).unwrap();
        let mut s = OptimizingEdgeSet::new(&[0, 1, 2, 3], 1);
        s.insert(Edge::new(0, 2), seed.clone());
        assert!(matches!(oer_closure(&c, &seed, &s, ClosureConfig::default()), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn moer_on_a_square() {
        let c = reduce_to_tsp(&Graph::cycle(4));
        let seed = Tour::new(vec![0, 1, 2, 3]).unwrap();
        let r = moer_closure(&c, &seed, ClosureConfig::default()).unwrap();
        assert_eq!(r.edge_set.edge_set(), edges(&[(0, 1), (1, 2), (2, 3), (0, 3)]));
        assert_eq!(r.edge_set.regime(), Regime::Zero);
    }

    #[test]
    fn moer_on_k4_finds_all_edges() {
        let c = reduce_to_tsp(&Graph::complete(4));
        let seed = Tour::new(vec![0, 2, 1, 3]).unwrap();
        let r = moer_closure(&c, &seed, ClosureConfig::default()).unwrap();
        assert_eq!(r.edge_set.len(), 6);
        r.edge_set.validate(&c).unwrap();
    }

    #[test]
    fn moer_on_a_pentagon_matches_the_oracle() {
        let c = reduce_to_tsp(&Graph::cycle(5));
        let seed = Tour::new((0..5).collect()).unwrap();
        let r = moer_closure(&c, &seed, ClosureConfig::default()).unwrap();
        let exact = exact_optimizing_edges(&c, &[0, 1, 2, 3, 4]).unwrap();
        let zero: BTreeSet<_> = r.edge_set.edges().filter(|&e| c.edge_cost(e) == 0).collect();
        assert_eq!(zero, edges(&[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]));
        assert_eq!(r.edge_set.edge_set(), exact.edge_set());
        r.edge_set.validate(&c).unwrap();
    }

    #[test]
    fn moer_rejects_a_costly_seed() {
        let c = reduce_to_tsp(&Graph::path(4));
        let seed = Tour::new(vec![0, 1, 2, 3]).unwrap();
        assert!(matches!(moer_closure(&c, &seed, ClosureConfig::default()), Err(Error::InvariantViolation(_))));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let c = reduce_to_tsp(&Graph::complete(6));
        let seed = Tour::new((0..6).collect()).unwrap();
        let r = moer_closure(&c, &seed, ClosureConfig { max_tours_expanded: 1 }).unwrap();
        assert_eq!(r.status, ClosureStatus::BudgetExhausted);
        assert_eq!(r.tours_expanded, 1);
        r.edge_set.validate(&c).unwrap();
    }

    #[test]
    fn closures_are_deterministic() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 5), (2, 6)]).unwrap();
        let c = reduce_to_tsp(&g);
        let seed = Tour::new((0..7).collect()).unwrap();
        let a = oer_closure(&c, &seed, &seed_set(&c, &seed), ClosureConfig::default());
        let b = oer_closure(&c, &seed, &seed_set(&c, &seed), ClosureConfig::default());
        assert_eq!(a, b);
    }
}
