//! The vertex-growth procedure.
//!
//! Start from a 4-vertex sub-problem with positive optimum, then absorb
//! one vertex at a time: measure how cheaply the new vertex can be spliced
//! between two current vertices, predict the new optimum from the cost
//! table, splice it into a stored witness tour, and rebuild the optimizing
//! edge set from the new tour. A final optimum of 0 means the graph is
//! Hamiltonian.
//!
//! Construction never silently diverges from the prediction: when the
//! spliced tour does not cost what the table says, the step is flagged in
//! the trace and the run continues from the tour actually built.

use alloc::vec::Vec;

use crate::closure::{moer_closure, oer_closure, ClosureConfig, ClosureStatus};
use crate::graph::{reduce_to_tsp, CostFn, Edge, Graph, Tour, Vertex};
use crate::oracle::{exact_optimizing_edges, OptimizingEdgeSet};
use crate::{Error, Result};

/// How each step's optimizing-edge set is rebuilt.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Provider {
    /// OER / MOER closure from the constructed tour.
    #[default]
    Closure,
    /// Exact enumeration (sub-problems of at most 11 vertices).
    OracleExact,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GrowthConfig {
    pub provider: Provider,
    pub closure: ClosureConfig,
}

/// Cheapest ways to splice a new vertex between two current vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InsertionContext {
    pub new_vertex: Vertex,
    /// Minimum of `c(new, i) + c(new, j)` over current pairs.
    pub d_star: u32,
    /// Pairs achieving `d_star`, sorted.
    pub omega: Vec<Edge>,
    /// Pairs achieving `d_star + 1`, sorted; only filled when the current
    /// optimum is positive and `d_star == 0`.
    pub omega_s: Option<Vec<Edge>>,
}

impl InsertionContext {
    pub fn in_omega(&self, e: Edge) -> bool {
        self.omega.binary_search(&e).is_ok()
    }

    pub fn in_omega_s(&self, e: Edge) -> bool {
        self.omega_s.as_ref().is_some_and(|s| s.binary_search(&e).is_ok())
    }
}

/// One row per absorbed vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    /// Sub-problem size before the insertion.
    pub m: usize,
    pub new_vertex: Vertex,
    pub d_star: u32,
    pub omega_size: usize,
    /// Optimum before the insertion.
    pub c_star: u32,
    /// Table prediction for the grown sub-problem.
    pub predicted: u32,
    /// Cost of the tour actually built.
    pub constructed: u32,
    /// Optimum of the rebuilt edge set. Equals `constructed` under the
    /// closure provider; the exact optimum under the oracle provider.
    pub c_star_next: u32,
    /// Optimizing edges after the rebuild.
    pub h_size: usize,
    /// `constructed` differs from `predicted` or from `c_star_next`.
    pub construction_mismatch: bool,
    /// The splice did not come from the case's designated candidates.
    pub fallback_splice: bool,
    pub closure_budget_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthState {
    /// Absorbed vertices in absorption order.
    pub subset: Vec<Vertex>,
    pub optimum: u32,
    pub edge_set: OptimizingEdgeSet,
    pub provider: Provider,
    pub trace: Vec<TraceRow>,
}

impl GrowthState {
    /// Stored witness of cost 0, if the state is in the zero regime.
    pub fn zero_cost_witness(&self, c: &CostFn) -> Option<&Tour> {
        if self.optimum != 0 {
            return None;
        }
        self.edge_set.iter().find(|(e, _)| c.edge_cost(*e) == 0).map(|(_, t)| t)
    }

    fn check(&self, c: &CostFn) -> Result<()> {
        let mut sorted = self.subset.clone();
        sorted.sort_unstable();
        if sorted != self.edge_set.subset() || self.optimum != self.edge_set.optimum() {
            return Err(Error::InvariantViolation("growth state out of sync with its edge set"));
        }
        if self.edge_set.is_empty() {
            return Err(Error::InvariantViolation("growth state has no witness tour"));
        }
        self.edge_set.validate(c)
    }
}

/// Outcome of the initial selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuadSelection {
    Quad {
        quad: [Vertex; 4],
        edge_set: OptimizingEdgeSet,
    },
    /// Every 4-vertex sub-problem has a cost-0 tour.
    AllZeroShortcut,
}

/// Scans 4-subsets in lexicographic order for the first one whose optimum
/// is positive, returning its exact optimizing edges.
pub fn select_initial_quad(c: &CostFn) -> Result<QuadSelection> {
    let n = c.n();
    if n < 4 {
        return Err(Error::InvalidInput("initial selection needs at least 4 vertices"));
    }
    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                for e in d + 1..n {
                    let quad = [a, b, d, e];
                    if quad_has_zero_tour(c, quad) {
                        continue;
                    }
                    let edge_set = exact_optimizing_edges(c, &quad)?;
                    return Ok(QuadSelection::Quad { quad, edge_set });
                }
            }
        }
    }
    Ok(QuadSelection::AllZeroShortcut)
}

fn quad_has_zero_tour(c: &CostFn, [a, b, d, e]: [Vertex; 4]) -> bool {
    let zero = |x, y| c.cost(x, y) == 0;
    let tour = |p, q, r, s| zero(p, q) && zero(q, r) && zero(r, s) && zero(s, p);
    tour(a, b, d, e) || tour(a, b, e, d) || tour(a, d, b, e)
}

pub fn insertion_context(state: &GrowthState, c: &CostFn, new_vertex: Vertex) -> Result<InsertionContext> {
    if state.subset.contains(&new_vertex) {
        return Err(Error::InvalidInput("vertex already absorbed"));
    }
    let mut current = state.subset.clone();
    current.sort_unstable();
    let reach: Vec<u32> = current.iter().map(|&v| c.cost(new_vertex, v)).collect();
    let zero_partners = reach.iter().filter(|&&r| r == 0).count();
    let d_star = match zero_partners {
        0 => 2,
        1 => 1,
        _ => 0,
    };
    let pairs_at = |target: u32| {
        let mut out = Vec::new();
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                if reach[i] + reach[j] == target {
                    out.push(Edge::new(current[i], current[j]));
                }
            }
        }
        out
    };
    let omega = pairs_at(d_star);
    let omega_s = (state.optimum >= 1 && d_star == 0).then(|| pairs_at(1));
    if d_star == 1 && !omega.iter().all(|e| e.contains(sole_zero_partner(&current, &reach))) {
        return Err(Error::InvariantViolation("d* = 1 with more than one zero-cost partner"));
    }
    Ok(InsertionContext { new_vertex, d_star, omega, omega_s })
}

fn sole_zero_partner(current: &[Vertex], reach: &[u32]) -> Vertex {
    current[reach.iter().position(|&r| r == 0).expect("one zero partner")]
}

/// The cost table: optimum after absorbing `ctx.new_vertex`.
pub fn predict_cost(c_m: u32, edge_set: &OptimizingEdgeSet, ctx: &InsertionContext) -> u32 {
    let meets_omega = edge_set.edges().any(|e| ctx.in_omega(e));
    match (ctx.d_star, c_m) {
        (0, 0) => u32::from(!meets_omega),
        (0, _) if meets_omega => c_m - 1,
        (0, _) if edge_set.edges().any(|e| ctx.in_omega_s(e)) => c_m,
        (0, _) => c_m + 1,
        (1, 0) => 1,
        (1, _) if meets_omega => c_m,
        (1, _) => c_m + 1,
        (_, 0) => 2,
        (_, _) => c_m + 1,
    }
}

/// A spliced tour and how it was chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub tour: Tour,
    pub cost: u32,
    pub fallback: bool,
}

#[derive(Clone, Copy)]
struct Splice<'a> {
    witness: &'a Tour,
    witness_cost: u32,
    at: Edge,
}

impl Splice<'_> {
    fn cost(&self, c: &CostFn, v: Vertex) -> u32 {
        self.witness_cost - c.edge_cost(self.at) + c.cost(v, self.at.u()) + c.cost(v, self.at.v())
    }
}

/// Builds a tour over the current subset plus `ctx.new_vertex` by splicing
/// the new vertex into a stored witness.
///
/// The cheapest of the case's designated splices is taken (first among
/// ties). Only when that misses `predicted` from above is every edge of
/// every witness considered, and a strictly cheaper splice from there is
/// marked as a fallback.
pub fn construct_tour(state: &GrowthState, c: &CostFn, ctx: &InsertionContext, predicted: u32) -> Result<Construction> {
    let v = ctx.new_vertex;
    let es = &state.edge_set;
    let witnesses: Vec<(&Tour, u32)> = es.witness_tours().into_iter().map(|t| (t, c.cost_of(t))).collect();
    if witnesses.is_empty() {
        return Err(Error::InvalidInput("no witness tour to splice into"));
    }
    let by_edge = |e: Edge| {
        let w = es.witness(e).expect("edge of the set");
        Splice { witness: w, witness_cost: c.cost_of(w), at: e }
    };
    fn around<'a>(witnesses: &[(&'a Tour, u32)], x: Vertex, out: &mut Vec<Splice<'a>>) {
        for &(w, wc) in witnesses {
            if let Some((succ, pred)) = w.neighbors_of(x) {
                out.push(Splice { witness: w, witness_cost: wc, at: Edge::new(x, succ) });
                out.push(Splice { witness: w, witness_cost: wc, at: Edge::new(x, pred) });
            }
        }
    }

    let mut designated: Vec<Splice<'_>> = Vec::new();
    let positive = state.optimum >= 1;
    match ctx.d_star {
        2 => {
            if positive {
                designated.extend(es.edges().map(by_edge));
            } else {
                for &(w, wc) in witnesses.iter().filter(|(_, wc)| *wc == 0) {
                    designated.extend(w.edges().map(|at| Splice { witness: w, witness_cost: wc, at }));
                }
            }
        }
        1 => {
            let l = ctx.omega.first().map(|e| pair_anchor(ctx, *e)).expect("omega is non-empty");
            let incident: Vec<Edge> = es.edges().filter(|e| e.contains(l) && ctx.in_omega(*e)).collect();
            if positive && !incident.is_empty() {
                designated.extend(incident.into_iter().map(by_edge));
            } else {
                around(&witnesses, l, &mut designated);
            }
        }
        _ => {
            let meets: Vec<Edge> = es.edges().filter(|e| ctx.in_omega(*e)).collect();
            let meets_s: Vec<Edge> = es.edges().filter(|e| ctx.in_omega_s(*e)).collect();
            if !meets.is_empty() {
                designated.extend(meets.into_iter().map(by_edge));
            } else if positive && !meets_s.is_empty() {
                designated.extend(meets_s.into_iter().map(by_edge));
            } else {
                let mut partners: Vec<Vertex> = state.subset.iter().copied().filter(|&x| c.cost(v, x) == 0).collect();
                partners.sort_unstable();
                for x in partners {
                    around(&witnesses, x, &mut designated);
                }
            }
        }
    }

    let mut general: Vec<Splice<'_>> = Vec::new();
    for &(w, wc) in &witnesses {
        general.extend(w.edges().map(|at| Splice { witness: w, witness_cost: wc, at }));
    }

    let cheapest_d = designated.iter().copied().min_by_key(|s| s.cost(c, v));
    let cheapest_g = general.iter().copied().min_by_key(|s| s.cost(c, v));
    let pick = match (cheapest_d, cheapest_g) {
        (Some(d), Some(g)) if d.cost(c, v) > predicted && g.cost(c, v) < d.cost(c, v) => (g, true),
        (Some(d), _) => (d, false),
        (None, Some(g)) => (g, true),
        (None, None) => unreachable!("witnesses are non-empty"),
    };
    let (splice, fallback) = pick;
    let tour = splice.witness.splice(splice.at.u(), splice.at.v(), v)?.canonicalize();
    let cost = c.cost_of(&tour);
    debug_assert_eq!(cost, splice.cost(c, v));
    Ok(Construction { tour, cost, fallback })
}

// with d* = 1 every omega pair contains the unique zero-cost partner
fn pair_anchor(ctx: &InsertionContext, e: Edge) -> Vertex {
    if ctx.omega.iter().all(|x| x.contains(e.u())) {
        e.u()
    } else {
        e.v()
    }
}

/// Rebuilds the optimizing edges of the grown sub-problem from `tour`.
///
/// Returns the new set and whether a closure ran out of budget.
pub fn rebuild_edge_set(
    c: &CostFn,
    tour: &Tour,
    tour_cost: u32,
    cfg: &GrowthConfig,
) -> Result<(OptimizingEdgeSet, bool)> {
    match cfg.provider {
        Provider::OracleExact => Ok((exact_optimizing_edges(c, &tour.vertex_set())?, false)),
        Provider::Closure if tour_cost == 0 => {
            let r = moer_closure(c, tour, cfg.closure)?;
            Ok((r.edge_set, r.status == ClosureStatus::BudgetExhausted))
        }
        Provider::Closure => {
            let seed = tour.canonicalize();
            let mut seed_set = OptimizingEdgeSet::new(&seed.vertex_set(), tour_cost);
            for e in seed.edges().filter(|&e| c.edge_cost(e) == 1) {
                seed_set.insert(e, seed.clone());
            }
            let r = oer_closure(c, &seed, &seed_set, cfg.closure)?;
            Ok((r.edge_set, r.status == ClosureStatus::BudgetExhausted))
        }
    }
}

/// Absorbs one vertex.
pub fn step(state: &mut GrowthState, c: &CostFn, v: Vertex, cfg: &GrowthConfig) -> Result<()> {
    let ctx = insertion_context(state, c, v)?;
    let predicted = predict_cost(state.optimum, &state.edge_set, &ctx);
    let built = construct_tour(state, c, &ctx, predicted)?;
    let (edge_set, exhausted) = rebuild_edge_set(c, &built.tour, built.cost, cfg)?;
    let row = TraceRow {
        m: state.subset.len(),
        new_vertex: v,
        d_star: ctx.d_star,
        omega_size: ctx.omega.len(),
        c_star: state.optimum,
        predicted,
        constructed: built.cost,
        c_star_next: edge_set.optimum(),
        h_size: edge_set.len(),
        construction_mismatch: built.cost != predicted || built.cost != edge_set.optimum(),
        fallback_splice: built.fallback,
        closure_budget_exhausted: exhausted,
    };
    state.subset.push(v);
    state.optimum = edge_set.optimum();
    state.edge_set = edge_set;
    state.trace.push(row);
    state.check(c)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GrowOutcome {
    Grown(GrowthState),
    AllZeroShortcut,
}

/// Runs the full growth loop.
///
/// Without an explicit order the initial quad is selected by
/// [`select_initial_quad`] and the remaining vertices follow in ascending
/// id. An explicit order must be a permutation of all vertices; its first
/// four vertices form the initial sub-problem whatever its optimum.
pub fn grow(g: &Graph, order: Option<&[Vertex]>, cfg: &GrowthConfig) -> Result<GrowOutcome> {
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidInput("growth needs at least 4 vertices"));
    }
    let c = reduce_to_tsp(g);
    let (order, edge_set) = match order {
        Some(order) => {
            check_permutation(order, n)?;
            let edge_set = exact_optimizing_edges(&c, &order[..4])?;
            (order.to_vec(), edge_set)
        }
        None => match select_initial_quad(&c)? {
            QuadSelection::AllZeroShortcut => return Ok(GrowOutcome::AllZeroShortcut),
            QuadSelection::Quad { quad, edge_set } => (default_order(n, quad), edge_set),
        },
    };
    let mut state = GrowthState {
        subset: order[..4].to_vec(),
        optimum: edge_set.optimum(),
        edge_set,
        provider: cfg.provider,
        trace: Vec::with_capacity(n - 4),
    };
    state.check(&c)?;
    for &v in &order[4..] {
        step(&mut state, &c, v, cfg)?;
    }
    Ok(GrowOutcome::Grown(state))
}

/// The quad followed by every other vertex in ascending id.
pub fn default_order(n: usize, quad: [Vertex; 4]) -> Vec<Vertex> {
    let mut order = quad.to_vec();
    order.extend((0..n).filter(|v| !quad.contains(v)));
    order
}

pub fn check_permutation(order: &[Vertex], n: usize) -> Result<()> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted.len() != n || sorted.iter().enumerate().any(|(i, &v)| i != v) {
        return Err(Error::InvalidInput("vertex order is not a permutation of the graph's vertices"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Re-verified Hamiltonian cycle.
    Hamiltonian(Tour),
    /// The procedure's claim; `final_cost` is absent below 3 vertices.
    NotHamiltonian { final_cost: Option<u32> },
    /// Every 4-vertex sub-problem had a cost-0 tour, so growth never ran.
    HamiltonianByQuadShortcut,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub final_state: Option<GrowthState>,
}

/// Decides Hamiltonicity with the growth procedure.
///
/// Positive verdicts carry a cycle that has been checked against the
/// graph's adjacency; negative verdicts are the procedure's claim only.
pub fn decide_hamiltonian(g: &Graph, order: Option<&[Vertex]>, cfg: &GrowthConfig) -> Result<Decision> {
    let n = g.n();
    if n < 3 {
        return Ok(Decision { verdict: Verdict::NotHamiltonian { final_cost: None }, final_state: None });
    }
    if n == 3 {
        let triangle = Tour::from_order_unchecked(alloc::vec![0, 1, 2]);
        let cost = reduce_to_tsp(g).cost_of(&triangle);
        let verdict =
            if cost == 0 { Verdict::Hamiltonian(triangle) } else { Verdict::NotHamiltonian { final_cost: Some(cost) } };
        return Ok(Decision { verdict, final_state: None });
    }
    let state = match grow(g, order, cfg)? {
        GrowOutcome::AllZeroShortcut => {
            return Ok(Decision { verdict: Verdict::HamiltonianByQuadShortcut, final_state: None })
        }
        GrowOutcome::Grown(state) => state,
    };
    let c = reduce_to_tsp(g);
    let verdict = if state.optimum == 0 {
        let w =
            state.zero_cost_witness(&c).ok_or(Error::InvariantViolation("zero optimum without a cost-0 witness"))?;
        if !is_hamiltonian_cycle(g, w) {
            return Err(Error::InvariantViolation("claimed Hamiltonian cycle fails re-verification"));
        }
        Verdict::Hamiltonian(w.clone())
    } else {
        Verdict::NotHamiltonian { final_cost: Some(state.optimum) }
    };
    Ok(Decision { verdict, final_state: Some(state) })
}

/// True when `t` visits every vertex of `g` once along graph edges.
pub fn is_hamiltonian_cycle(g: &Graph, t: &Tour) -> bool {
    t.len() == g.n()
        && t.vertex_set().iter().enumerate().all(|(i, &v)| i == v)
        && t.edges().all(|e| g.has_edge(e.u(), e.v()))
}
