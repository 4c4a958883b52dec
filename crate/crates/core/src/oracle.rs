//! Exact ground truth for small instances.
//!
//! Everything here is exponential and capped: Held–Karp at
//! [`HELD_KARP_CAP`] vertices, full tour enumeration at
//! [`ENUMERATION_CAP`]. The growth procedure and the closures are checked
//! against these, never the other way round.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use crate::graph::{CostFn, Edge, Graph, Tour, Vertex};
use crate::{Error, Result};

/// Largest subset accepted by [`held_karp`].
pub const HELD_KARP_CAP: usize = 18;
/// Largest subset accepted by the tour enumerators.
pub const ENUMERATION_CAP: usize = 11;

/// Searches for a Hamiltonian cycle by backtracking.
///
/// Graphs with fewer than three vertices have no Hamiltonian cycle by
/// convention. The returned witness is canonical and uses graph edges only.
pub fn hc_exists(g: &Graph) -> Option<Tour> {
    let n = g.n();
    if n < 3 || (0..n).any(|v| g.degree(v) < 2) {
        return None;
    }
    let degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let adjacency: Vec<Vec<Vertex>> = (0..n)
        .map(|v| {
            let mut ns: Vec<Vertex> = g.neighbors(v).collect();
            ns.sort_by_key(|&w| (degree[w], w));
            ns
        })
        .collect();
    let start = (0..n).min_by_key(|&v| (degree[v], v)).expect("n >= 3");

    let mut search = HcSearch {
        g,
        adjacency: &adjacency,
        start,
        path: Vec::with_capacity(n),
        on_path: vec![false; n],
        open_at_start: degree[start],
    };
    search.path.push(start);
    search.on_path[start] = true;
    if search.extend() {
        Some(Tour::from_order_unchecked(search.path).canonicalize())
    } else {
        None
    }
}

struct HcSearch<'a> {
    g: &'a Graph,
    adjacency: &'a [Vec<Vertex>],
    start: Vertex,
    path: Vec<Vertex>,
    on_path: Vec<bool>,
    // neighbours of `start` not yet on the path; the cycle must close through one
    open_at_start: usize,
}

impl HcSearch<'_> {
    fn extend(&mut self) -> bool {
        let n = self.g.n();
        let last = *self.path.last().expect("path starts non-empty");
        if self.path.len() == n {
            return self.g.has_edge(last, self.start);
        }
        if self.open_at_start == 0 {
            return false;
        }
        for &next in &self.adjacency[last] {
            if self.on_path[next] {
                continue;
            }
            let closes = self.g.has_edge(next, self.start);
            // taking the last free neighbour of start too early strands it
            if closes && self.open_at_start == 1 && self.path.len() + 1 < n {
                continue;
            }
            self.on_path[next] = true;
            self.path.push(next);
            if closes {
                self.open_at_start -= 1;
            }
            if self.extend() {
                return true;
            }
            if closes {
                self.open_at_start += 1;
            }
            self.path.pop();
            self.on_path[next] = false;
        }
        false
    }
}

fn normalize_subset(c: &CostFn, subset: &[Vertex]) -> Result<Vec<Vertex>> {
    let mut s = subset.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != subset.len() {
        return Err(Error::InvalidInput("subset repeats a vertex"));
    }
    if s.last().is_some_and(|&v| v >= c.n()) {
        return Err(Error::InvalidInput("subset vertex out of range"));
    }
    Ok(s)
}

fn local_costs(c: &CostFn, s: &[Vertex]) -> Vec<u8> {
    let k = s.len();
    let mut m = vec![0u8; k * k];
    for i in 0..k {
        for j in 0..k {
            if i != j {
                m[i * k + j] = c.cost(s[i], s[j]) as u8;
            }
        }
    }
    m
}

/// Exact optimum tour cost over `subset` by subset dynamic programming.
///
/// States are (visited set, last vertex), anchored at the smallest vertex.
pub fn held_karp(c: &CostFn, subset: &[Vertex]) -> Result<u32> {
    let s = normalize_subset(c, subset)?;
    let k = s.len();
    if k < 3 {
        return Err(Error::InvalidInput("tour needs at least 3 vertices"));
    }
    if k > HELD_KARP_CAP {
        return Err(Error::Capacity { requested: k, limit: HELD_KARP_CAP });
    }
    let cost = local_costs(c, &s);
    let others = k - 1;
    let full = (1usize << others) - 1;
    const INF: u8 = u8::MAX;
    let mut dp = vec![INF; (full + 1) * others];
    for j in 0..others {
        dp[(1 << j) * others + j] = cost[j + 1];
    }
    for mask in 1..=full {
        for last in 0..others {
            let here = dp[mask * others + last];
            if here == INF || mask >> last & 1 == 0 {
                continue;
            }
            let mut free = full & !mask;
            while free != 0 {
                let next = free.trailing_zeros() as usize;
                free &= free - 1;
                let slot = &mut dp[(mask | 1 << next) * others + next];
                let cand = here + cost[(last + 1) * k + next + 1];
                if cand < *slot {
                    *slot = cand;
                }
            }
        }
    }
    let best = (0..others).map(|j| dp[full * others + j] + cost[(j + 1) * k]).min().expect("k >= 3");
    Ok(u32::from(best))
}

/// Visits every canonical tour over `subset` whose cost is at most `bound`,
/// in lexicographic order of the canonical vertex sequence.
pub fn for_each_tour_within<F>(c: &CostFn, subset: &[Vertex], bound: u32, mut visit: F) -> Result<()>
where
    F: FnMut(&[Vertex], u32) -> ControlFlow<()>,
{
    let s = normalize_subset(c, subset)?;
    let k = s.len();
    if k < 3 {
        return Err(Error::InvalidInput("tour needs at least 3 vertices"));
    }
    if k > ENUMERATION_CAP {
        return Err(Error::Capacity { requested: k, limit: ENUMERATION_CAP });
    }
    let mut e = Enumerator {
        k,
        cost: local_costs(c, &s),
        bound,
        path: Vec::with_capacity(k),
        used: vec![false; k],
        out: Vec::with_capacity(k),
        subset: &s,
    };
    e.path.push(0);
    e.used[0] = true;
    let _ = e.descend(0, &mut visit);
    Ok(())
}

struct Enumerator<'a> {
    k: usize,
    cost: Vec<u8>,
    bound: u32,
    path: Vec<usize>,
    used: Vec<bool>,
    out: Vec<Vertex>,
    subset: &'a [Vertex],
}

impl Enumerator<'_> {
    fn descend<F>(&mut self, partial: u32, visit: &mut F) -> ControlFlow<()>
    where
        F: FnMut(&[Vertex], u32) -> ControlFlow<()>,
    {
        let k = self.k;
        let last = *self.path.last().expect("anchored");
        if self.path.len() == k {
            // canonical direction: second element below the last one
            if self.path[1] > self.path[k - 1] {
                return ControlFlow::Continue(());
            }
            let total = partial + u32::from(self.cost[last * k]);
            if total > self.bound {
                return ControlFlow::Continue(());
            }
            self.out.clear();
            self.out.extend(self.path.iter().map(|&i| self.subset[i]));
            return visit(&self.out, total);
        }
        for next in 1..k {
            if self.used[next] {
                continue;
            }
            let step = partial + u32::from(self.cost[last * k + next]);
            if step > self.bound {
                continue;
            }
            self.used[next] = true;
            self.path.push(next);
            let flow = self.descend(step, visit);
            self.path.pop();
            self.used[next] = false;
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn check_enumeration_size(subset: &[Vertex]) -> Result<()> {
    if subset.len() < 4 {
        return Err(Error::InvalidInput("enumeration needs at least 4 vertices"));
    }
    if subset.len() > ENUMERATION_CAP {
        return Err(Error::Capacity { requested: subset.len(), limit: ENUMERATION_CAP });
    }
    Ok(())
}

/// The exact optimum and every canonical optimal tour over `subset`.
pub fn enumerate_optimal_tours(c: &CostFn, subset: &[Vertex]) -> Result<(u32, Vec<Tour>)> {
    check_enumeration_size(subset)?;
    let optimum = held_karp(c, subset)?;
    let mut tours = Vec::new();
    for_each_tour_within(c, subset, optimum, |order, _| {
        tours.push(Tour::from_order_unchecked(order.to_vec()));
        ControlFlow::Continue(())
    })?;
    Ok((optimum, tours))
}

/// Number of distinct Hamiltonian cycles of `g` (up to rotation and reflection).
pub fn count_hamiltonian_cycles(g: &Graph) -> Result<u64> {
    let n = g.n();
    if n < 3 {
        return Ok(0);
    }
    let c = crate::reduce_to_tsp(g);
    let all: Vec<Vertex> = (0..n).collect();
    let mut count = 0;
    for_each_tour_within(&c, &all, 0, |_, _| {
        count += 1;
        ControlFlow::Continue(())
    })?;
    Ok(count)
}

/// Which optimizing-edge set a sub-problem carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Regime {
    /// Optimum at least 1: cost-1 edges of optimal tours.
    Positive,
    /// Optimum 0: cost-0 edges of cost-0 tours and cost-1 edges of cost-1 tours.
    Zero,
}

impl Regime {
    pub fn of(optimum: u32) -> Regime {
        if optimum == 0 {
            Regime::Zero
        } else {
            Regime::Positive
        }
    }
}

/// Optimizing edges of one sub-problem, each with a witness tour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimizingEdgeSet {
    subset: Vec<Vertex>,
    optimum: u32,
    witnesses: BTreeMap<Edge, Tour>,
}

impl OptimizingEdgeSet {
    /// Empty set for `subset` (sorted internally) at the given optimum.
    pub fn new(subset: &[Vertex], optimum: u32) -> Self {
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        OptimizingEdgeSet { subset, optimum, witnesses: BTreeMap::new() }
    }

    pub fn regime(&self) -> Regime {
        Regime::of(self.optimum)
    }

    pub fn optimum(&self) -> u32 {
        self.optimum
    }

    /// Sorted vertex set of the sub-problem.
    pub fn subset(&self) -> &[Vertex] {
        &self.subset
    }

    /// Records `e` with witness `w` unless `e` is already present.
    pub fn insert(&mut self, e: Edge, w: Tour) -> bool {
        match self.witnesses.entry(e) {
            alloc::collections::btree_map::Entry::Occupied(_) => false,
            alloc::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(w);
                true
            }
        }
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.witnesses.contains_key(&e)
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.witnesses.keys().copied()
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.witnesses.keys().copied().collect()
    }

    pub fn witness(&self, e: Edge) -> Option<&Tour> {
        self.witnesses.get(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, &Tour)> {
        self.witnesses.iter().map(|(e, t)| (*e, t))
    }

    /// Distinct witness tours, ordered by the first edge they certify.
    pub fn witness_tours(&self) -> Vec<&Tour> {
        let mut seen = BTreeSet::new();
        self.witnesses.values().filter(|t| seen.insert(*t)).collect()
    }

    /// Checks every invariant of the set against `c`.
    pub fn validate(&self, c: &CostFn) -> Result<()> {
        for (&e, w) in &self.witnesses {
            if !w.is_canonical() {
                return Err(Error::InvariantViolation("witness is not canonical"));
            }
            if w.vertex_set() != self.subset {
                return Err(Error::InvariantViolation("witness does not cover the subset"));
            }
            if !w.contains_edge(e) {
                return Err(Error::InvariantViolation("witness does not contain its edge"));
            }
            let edge_cost = c.edge_cost(e);
            let tour_cost = c.cost_of(w);
            let ok = match self.regime() {
                Regime::Positive => edge_cost == 1 && tour_cost == self.optimum,
                Regime::Zero => tour_cost == edge_cost,
            };
            if !ok {
                return Err(Error::InvariantViolation("witness cost breaks the regime rule"));
            }
        }
        Ok(())
    }
}

/// Exact optimizing edges of `subset`, from full enumeration.
///
/// Witnesses are the lexicographically first canonical tour certifying
/// each edge.
pub fn exact_optimizing_edges(c: &CostFn, subset: &[Vertex]) -> Result<OptimizingEdgeSet> {
    check_enumeration_size(subset)?;
    let optimum = held_karp(c, subset)?;
    let mut set = OptimizingEdgeSet::new(subset, optimum);
    let s = set.subset.clone();
    let mut total_pairs = 0;
    let mut unit_pairs = 0;
    for (i, &a) in s.iter().enumerate() {
        for &b in &s[i + 1..] {
            total_pairs += 1;
            unit_pairs += c.cost(a, b) as usize;
        }
    }
    let (bound, reachable) = match set.regime() {
        Regime::Positive => (optimum, unit_pairs),
        Regime::Zero => (1, total_pairs),
    };
    for_each_tour_within(c, &s, bound, |order, cost| {
        let m = order.len();
        let mut tour = None;
        for i in 0..m {
            let e = Edge::new(order[i], order[(i + 1) % m]);
            let keep = match set.regime() {
                Regime::Positive => c.edge_cost(e) == 1,
                Regime::Zero => c.edge_cost(e) == cost,
            };
            if keep && !set.contains(e) {
                let w = tour.get_or_insert_with(|| Tour::from_order_unchecked(order.to_vec()));
                set.insert(e, w.clone());
            }
        }
        if set.len() == reachable {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(set)
}

/// Graph on the optimizing vertices whose links are the optimizing edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OptGraph {
    pub vertices: BTreeSet<Vertex>,
    pub links: BTreeSet<Edge>,
}

pub fn opt_graph(es: &OptimizingEdgeSet) -> OptGraph {
    let links = es.edge_set();
    let vertices = links.iter().flat_map(|e| [e.u(), e.v()]).collect();
    OptGraph { vertices, links }
}

/// At most one connected component; the empty graph counts as connected.
pub fn is_connected(og: &OptGraph) -> bool {
    let Some(&root) = og.vertices.first() else {
        return true;
    };
    let mut adjacency: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for e in &og.links {
        adjacency.entry(e.u()).or_default().push(e.v());
        adjacency.entry(e.v()).or_default().push(e.u());
    }
    let mut seen = BTreeSet::from([root]);
    let mut stack = vec![root];
    while let Some(v) = stack.pop() {
        for &w in adjacency.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    seen.len() == og.vertices.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduce_to_tsp;

    fn edges(list: &[(usize, usize)]) -> BTreeSet<Edge> {
        list.iter().map(|&(a, b)| Edge::new(a, b)).collect()
    }

    fn all(n: usize) -> Vec<Vertex> {
        (0..n).collect()
    }

    #[test]
    fn hc_fixtures() {
        let w = hc_exists(&Graph::cycle(5)).unwrap();
        assert_eq!(w.order(), &[0, 1, 2, 3, 4]);
        assert!(hc_exists(&Graph::petersen()).is_none());
        let k33 = Graph::complete_bipartite(3, 3);
        let w = hc_exists(&k33).unwrap();
        assert!(w.edges().all(|e| k33.has_edge(e.u(), e.v())));
        assert!(hc_exists(&Graph::complete(2)).is_none());
        assert!(hc_exists(&Graph::path(6)).is_none());
        assert!(hc_exists(&Graph::complete(3)).is_some());
    }

    #[test]
    fn held_karp_fixtures() {
        assert_eq!(held_karp(&reduce_to_tsp(&Graph::complete(6)), &all(6)), Ok(0));
        assert_eq!(held_karp(&reduce_to_tsp(&Graph::path(4)), &all(4)), Ok(1));
        assert_eq!(held_karp(&reduce_to_tsp(&Graph::petersen()), &all(10)), Ok(1));
        let big = reduce_to_tsp(&Graph::empty(19));
        assert_eq!(held_karp(&big, &all(19)), Err(Error::Capacity { requested: 19, limit: HELD_KARP_CAP }));
        assert!(held_karp(&big, &[0, 0, 1]).is_err());
    }

    #[test]
    fn enumeration_fixtures() {
        let (opt, tours) = enumerate_optimal_tours(&reduce_to_tsp(&Graph::cycle(4)), &all(4)).unwrap();
        assert_eq!(opt, 0);
        assert_eq!(tours, vec![Tour::new(vec![0, 1, 2, 3]).unwrap()]);

        let (opt, tours) = enumerate_optimal_tours(&reduce_to_tsp(&Graph::path(4)), &all(4)).unwrap();
        assert_eq!(opt, 1);
        assert_eq!(tours, vec![Tour::new(vec![0, 1, 2, 3]).unwrap()]);

        let (opt, tours) = enumerate_optimal_tours(&reduce_to_tsp(&Graph::complete(5)), &all(5)).unwrap();
        assert_eq!(opt, 0);
        assert_eq!(tours.len(), 12);
        assert!(tours.iter().all(Tour::is_canonical));

        let c = reduce_to_tsp(&Graph::complete(12));
        assert!(matches!(enumerate_optimal_tours(&c, &all(12)), Err(Error::Capacity { .. })));
        assert!(enumerate_optimal_tours(&c, &all(3)).is_err());
    }

    #[test]
    fn optimizing_edge_fixtures() {
        let c = reduce_to_tsp(&Graph::path(4));
        let es = exact_optimizing_edges(&c, &all(4)).unwrap();
        assert_eq!(es.regime(), Regime::Positive);
        assert_eq!(es.optimum(), 1);
        assert_eq!(es.edge_set(), edges(&[(0, 3)]));
        assert_eq!(es.witness(Edge::new(0, 3)).unwrap().order(), &[0, 1, 2, 3]);

        let c = reduce_to_tsp(&Graph::cycle(4));
        let es = exact_optimizing_edges(&c, &all(4)).unwrap();
        assert_eq!(es.regime(), Regime::Zero);
        assert_eq!(es.edge_set(), edges(&[(0, 1), (1, 2), (2, 3), (0, 3)]));

        let c = reduce_to_tsp(&Graph::complete(4));
        let es = exact_optimizing_edges(&c, &all(4)).unwrap();
        assert_eq!(es.len(), 6);
        es.validate(&c).unwrap();

        let c = reduce_to_tsp(&Graph::path(5));
        let es = exact_optimizing_edges(&c, &all(5)).unwrap();
        assert_eq!(es.edge_set(), edges(&[(0, 4)]));
    }

    #[test]
    fn optimizing_edges_on_a_subset() {
        // subset {1,2,3,4} of P6 is the path 1-2-3-4
        let c = reduce_to_tsp(&Graph::path(6));
        let es = exact_optimizing_edges(&c, &[4, 2, 1, 3]).unwrap();
        assert_eq!(es.subset(), &[1, 2, 3, 4]);
        assert_eq!(es.edge_set(), edges(&[(1, 4)]));
        es.validate(&c).unwrap();
    }

    #[test]
    fn validation_catches_bad_witnesses() {
        let c = reduce_to_tsp(&Graph::path(4));
        let mut es = OptimizingEdgeSet::new(&all(4), 1);
        es.insert(Edge::new(0, 2), Tour::new(vec![0, 2, 1, 3]).unwrap());
        assert!(es.validate(&c).is_err());
        let mut es = OptimizingEdgeSet::new(&all(4), 1);
        es.insert(Edge::new(0, 3), Tour::new(vec![1, 2, 3, 0]).unwrap());
        assert!(es.validate(&c).is_err());
    }

    #[test]
    fn hamiltonian_cycle_counts() {
        assert_eq!(count_hamiltonian_cycles(&Graph::complete(5)), Ok(12));
        assert_eq!(count_hamiltonian_cycles(&Graph::cycle(4)), Ok(1));
        assert_eq!(count_hamiltonian_cycles(&Graph::petersen()), Ok(0));
    }

    #[test]
    fn opt_graph_connectivity() {
        let mut es = OptimizingEdgeSet::new(&all(4), 1);
        es.insert(Edge::new(0, 3), Tour::new(vec![0, 1, 2, 3]).unwrap());
        let og = opt_graph(&es);
        assert_eq!(og.vertices, BTreeSet::from([0, 3]));
        assert!(is_connected(&og));

        let empty = opt_graph(&OptimizingEdgeSet::new(&all(4), 1));
        assert_eq!(empty, OptGraph::default());
        assert!(is_connected(&empty));

        let og = |links: &[(usize, usize)]| {
            let links = edges(links);
            let vertices = links.iter().flat_map(|e| [e.u(), e.v()]).collect();
            OptGraph { vertices, links }
        };
        assert!(is_connected(&og(&[(0, 1), (1, 2)])));
        assert!(!is_connected(&og(&[(0, 1), (2, 3)])));
    }
}
