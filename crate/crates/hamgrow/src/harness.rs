//! Falsification campaigns.
//!
//! Each campaign checks one claim of the growth procedure against the exact
//! oracles, trial by trial. Trials are derived from a master seed, may run
//! in parallel, and write their records to the sink in trial order, so a
//! configuration always produces the same bytes.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use hamgrow_core::growth::{check_permutation, default_order};
use hamgrow_core::{
    construct_tour, count_hamiltonian_cycles, decide_hamiltonian, exact_optimizing_edges, hc_exists, held_karp,
    insertion_context, is_connected, is_hamiltonian_cycle, opt_graph, predict_cost, rebuild_edge_set, reduce_to_tsp,
    select_initial_quad, ClosureConfig, CostFn, Graph, GrowthConfig, GrowthState, OptimizingEdgeSet, Provider,
    QuadSelection, Regime, Tour, Verdict, Vertex,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::generate::{
    connected_masks, gnp_with, graph_from_mask, planted_with, rng_from_seed, shuffled_order, trial_seed,
    EXHAUSTIVE_MAX_N,
};
use crate::record::{edge_list, edges_json, tour_json, Campaign, DiscrepancyKind, DiscrepancyRecord, SCHEMA_VERSION};

/// Largest graph the enumeration-based campaigns accept.
pub const EXACT_MAX_N: usize = 11;
/// Largest graph the Hamiltonian-cycle count is run on.
pub const COUNT_MAX_N: usize = 10;
/// Largest graph the end-to-end campaign accepts.
pub const END_TO_END_MAX_N: usize = 18;

const CHUNK: usize = 256;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("unsupported schema version {0}")]
    UnknownSchema(u32),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("{0}")]
    Core(hamgrow_core::Error),
    #[error("sink write failed after {} trials: {source}", partial.trials_run)]
    Sink { partial: Box<CampaignReport>, source: std::io::Error },
}

impl From<hamgrow_core::Error> for HarnessError {
    fn from(e: hamgrow_core::Error) -> Self {
        match e {
            hamgrow_core::Error::InvariantViolation(msg) => HarnessError::Invariant(msg.to_string()),
            other => HarnessError::Core(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// An explicit instance in a campaign configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl EdgeList {
    pub fn of(g: &Graph) -> Self {
        EdgeList { n: g.n(), edges: edge_list(g) }
    }

    pub fn to_graph(&self) -> std::result::Result<Graph, hamgrow_core::Error> {
        Graph::from_edges(self.n, self.edges.iter().map(|&[u, v]| (u, v)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum Generator {
    /// G(n, p) with n drawn uniformly from the range.
    Gnp { p: f64 },
    /// Planted Hamiltonian cycle plus extra edges, n drawn uniformly.
    Planted { extra_p: f64 },
    /// Every connected labeled graph for each n in the range, ascending.
    Exhaustive,
    /// A fixed instance list.
    Graphs { graphs: Vec<EdgeList> },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderPolicy {
    /// Selected quad, then ascending ids.
    #[default]
    Default,
    /// Selected quad, then a seeded shuffle of the rest.
    Shuffle,
}

/// A campaign. For `Exhaustive` and `Graphs`, `trials` caps the number of
/// instances taken in order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub campaign: Campaign,
    pub n_range: (usize, usize),
    pub generator: Generator,
    pub trials: u64,
    pub master_seed: u64,
    pub order_policy: OrderPolicy,
    /// Treat construction mismatches in the end-to-end campaign as invariant violations.
    pub strict: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    /// Every 4-vertex sub-problem has a cost-0 tour; growth never starts.
    Shortcut,
    /// The claim does not apply to this instance.
    NotApplicable,
    /// The instance exceeds an oracle's size limit.
    Capacity,
    /// Every checked sub-problem had optimum 0.
    Vacuous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrialStatus {
    Agreement,
    Discrepant,
    Skipped(SkipReason),
}

/// Everything a verify operation needs; reconstructible from a record.
#[derive(Clone, Debug)]
pub struct TrialInput {
    pub seed: u64,
    pub graph: Graph,
    pub order: Option<Vec<Vertex>>,
    pub strict: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub status: TrialStatus,
    pub records: Vec<DiscrepancyRecord>,
    pub steps_checked: u64,
    pub steps_agreed: u64,
    pub witnesses_validated: u64,
    pub construction_mismatches: u64,
    pub closure_budget_exhausted: u64,
}

impl TrialOutcome {
    fn skipped(reason: SkipReason) -> Self {
        TrialOutcome {
            status: TrialStatus::Skipped(reason),
            records: Vec::new(),
            steps_checked: 0,
            steps_agreed: 0,
            witnesses_validated: 0,
            construction_mismatches: 0,
            closure_budget_exhausted: 0,
        }
    }

    fn finish(mut self, empty: SkipReason) -> Self {
        self.status = if !self.records.is_empty() {
            TrialStatus::Discrepant
        } else if self.steps_checked == 0 {
            TrialStatus::Skipped(empty)
        } else {
            TrialStatus::Agreement
        };
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: ExperimentConfig,
    pub trials_run: u64,
    /// Trials where every check agreed with the oracle.
    pub agreements: u64,
    /// Trials with at least one record.
    pub discrepant_trials: u64,
    pub skipped: u64,
    pub skips: BTreeMap<SkipReason, u64>,
    /// Records emitted, by kind.
    pub discrepancies: BTreeMap<DiscrepancyKind, u64>,
    pub steps_checked: u64,
    pub steps_agreed: u64,
    /// `steps_agreed / steps_checked`; absent when nothing was checked.
    pub agreement_rate: Option<f64>,
    pub witnesses_validated: u64,
    pub construction_mismatches: u64,
    pub closure_budget_exhausted: u64,
    pub runtime_seconds: f64,
}

impl CampaignReport {
    fn new(config: ExperimentConfig) -> Self {
        CampaignReport {
            config,
            trials_run: 0,
            agreements: 0,
            discrepant_trials: 0,
            skipped: 0,
            skips: BTreeMap::new(),
            discrepancies: BTreeMap::new(),
            steps_checked: 0,
            steps_agreed: 0,
            agreement_rate: None,
            witnesses_validated: 0,
            construction_mismatches: 0,
            closure_budget_exhausted: 0,
            runtime_seconds: 0.0,
        }
    }

    fn absorb(&mut self, o: &TrialOutcome) {
        self.trials_run += 1;
        match o.status {
            TrialStatus::Agreement => self.agreements += 1,
            TrialStatus::Discrepant => self.discrepant_trials += 1,
            TrialStatus::Skipped(r) => {
                self.skipped += 1;
                *self.skips.entry(r).or_default() += 1;
            }
        }
        for r in &o.records {
            *self.discrepancies.entry(r.kind).or_default() += 1;
        }
        self.steps_checked += o.steps_checked;
        self.steps_agreed += o.steps_agreed;
        self.witnesses_validated += o.witnesses_validated;
        self.construction_mismatches += o.construction_mismatches;
        self.closure_budget_exhausted += o.closure_budget_exhausted;
        self.agreement_rate = (self.steps_checked > 0).then(|| self.steps_agreed as f64 / self.steps_checked as f64);
    }

    pub fn discrepancy_total(&self) -> u64 {
        self.discrepancies.values().sum()
    }
}

enum Resolved {
    Order(Vec<Vertex>),
    Shortcut,
}

impl TrialInput {
    fn resolve(&self, c: &CostFn) -> Result<Resolved> {
        if let Some(order) = &self.order {
            check_permutation(order, self.graph.n())?;
            return Ok(Resolved::Order(order.clone()));
        }
        Ok(match select_initial_quad(c)? {
            QuadSelection::Quad { quad, .. } => Resolved::Order(default_order(self.graph.n(), quad)),
            QuadSelection::AllZeroShortcut => Resolved::Shortcut,
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn record(
        &self,
        campaign: Campaign,
        kind: DiscrepancyKind,
        order: &[Vertex],
        step_m: Option<usize>,
        expected: Value,
        actual: Value,
        witness: Value,
    ) -> DiscrepancyRecord {
        DiscrepancyRecord {
            schema_version: SCHEMA_VERSION,
            campaign,
            kind,
            trial_seed: self.seed,
            n: self.graph.n(),
            graph_edges: edge_list(&self.graph),
            vertex_order: order.to_vec(),
            step_m,
            expected,
            actual,
            witness,
        }
    }
}

fn open() -> TrialOutcome {
    TrialOutcome::skipped(SkipReason::NotApplicable)
}

fn state_of(subset: &[Vertex], edge_set: OptimizingEdgeSet) -> GrowthState {
    GrowthState {
        subset: subset.to_vec(),
        optimum: edge_set.optimum(),
        edge_set,
        provider: Provider::OracleExact,
        trace: Vec::new(),
    }
}

fn optimal_tour<'a>(c: &CostFn, es: &'a OptimizingEdgeSet) -> Option<&'a Tour> {
    es.witness_tours().into_iter().find(|t| c.tour_cost(t).ok() == Some(es.optimum()))
}

/// Shared gate for the enumeration-based campaigns.
fn exact_gate(input: &TrialInput) -> Option<TrialOutcome> {
    let n = input.graph.n();
    if n < 4 {
        Some(TrialOutcome::skipped(SkipReason::NotApplicable))
    } else if n > EXACT_MAX_N {
        Some(TrialOutcome::skipped(SkipReason::Capacity))
    } else {
        None
    }
}

/// Compares each cost-table prediction with Held–Karp on the grown subset,
/// predicting from the exact optimizing edges of the current subset.
pub fn verify_table1(input: &TrialInput) -> Result<TrialOutcome> {
    if let Some(skip) = exact_gate(input) {
        return Ok(skip);
    }
    let c = reduce_to_tsp(&input.graph);
    let Resolved::Order(order) = input.resolve(&c)? else {
        return Ok(TrialOutcome::skipped(SkipReason::Shortcut));
    };
    let mut out = open();
    let mut es = exact_optimizing_edges(&c, &order[..4])?;
    for k in 4..order.len() {
        let state = state_of(&order[..k], es);
        let ctx = insertion_context(&state, &c, order[k])?;
        let predicted = predict_cost(state.optimum, &state.edge_set, &ctx);
        let truth = held_karp(&c, &order[..=k])?;
        let next = exact_optimizing_edges(&c, &order[..=k])?;
        out.steps_checked += 1;
        if predicted == truth {
            out.steps_agreed += 1;
        } else {
            let witness = json!({
                "new_vertex": ctx.new_vertex,
                "c_star": state.optimum,
                "d_star": ctx.d_star,
                "omega": edges_json(ctx.omega.iter().copied()),
                "omega_s": ctx.omega_s.as_ref().map(|s| edges_json(s.iter().copied())),
                "optimizing_edges": edges_json(state.edge_set.edges()),
                "optimal_tour": tour_json(optimal_tour(&c, &next)),
            });
            out.records.push(input.record(
                Campaign::Table1,
                DiscrepancyKind::CostMismatch,
                &order,
                Some(k + 1),
                json!(truth),
                json!(predicted),
                witness,
            ));
        }
        es = next;
    }
    Ok(out.finish(SkipReason::NotApplicable))
}

/// Runs the closure from the initial optimal tour and from every tour the
/// construction builds, comparing with the exact optimizing edges.
pub fn verify_closure(input: &TrialInput) -> Result<TrialOutcome> {
    if let Some(skip) = exact_gate(input) {
        return Ok(skip);
    }
    let c = reduce_to_tsp(&input.graph);
    let Resolved::Order(order) = input.resolve(&c)? else {
        return Ok(TrialOutcome::skipped(SkipReason::Shortcut));
    };
    let cfg = GrowthConfig { provider: Provider::Closure, closure: ClosureConfig::default() };
    let mut out = open();

    let es = exact_optimizing_edges(&c, &order[..4])?;
    let seed =
        optimal_tour(&c, &es).ok_or_else(|| HarnessError::Invariant("exact set without an optimal tour".into()))?;
    compare_closure(input, &c, &cfg, &order, 4, seed, &es, &mut out)?;
    let mut state = state_of(&order[..4], es);

    for k in 4..order.len() {
        let ctx = insertion_context(&state, &c, order[k])?;
        let predicted = predict_cost(state.optimum, &state.edge_set, &ctx);
        let built = construct_tour(&state, &c, &ctx, predicted)?;
        let next = exact_optimizing_edges(&c, &order[..=k])?;
        if built.cost != next.optimum() {
            out.construction_mismatches += 1;
            let witness = json!({
                "tour": tour_json(Some(&built.tour)),
                "predicted": predicted,
                "fallback_splice": built.fallback,
            });
            out.records.push(input.record(
                Campaign::Closure,
                DiscrepancyKind::ConstructionMismatch,
                &order,
                Some(k + 1),
                json!(next.optimum()),
                json!(built.cost),
                witness,
            ));
        } else {
            compare_closure(input, &c, &cfg, &order, k + 1, &built.tour, &next, &mut out)?;
        }
        state = state_of(&order[..=k], next);
    }
    Ok(out.finish(SkipReason::NotApplicable))
}

#[allow(clippy::too_many_arguments)]
fn compare_closure(
    input: &TrialInput,
    c: &CostFn,
    cfg: &GrowthConfig,
    order: &[Vertex],
    step_m: usize,
    seed: &Tour,
    exact: &OptimizingEdgeSet,
    out: &mut TrialOutcome,
) -> Result<()> {
    let cost = c.tour_cost(seed)?;
    let (closure, exhausted) = rebuild_edge_set(c, seed, cost, cfg)?;
    closure.validate(c).map_err(|e| HarnessError::Invariant(format!("closure witness failed re-validation: {e}")))?;
    out.witnesses_validated += closure.len() as u64;
    out.closure_budget_exhausted += u64::from(exhausted);

    let found = closure.edge_set();
    let truth = exact.edge_set();
    if let Some(extra) = found.difference(&truth).next() {
        return Err(HarnessError::Invariant(format!("closure emitted non-optimizing edge {extra:?}")));
    }
    out.steps_checked += 1;
    if found.len() == truth.len() {
        out.steps_agreed += 1;
        return Ok(());
    }
    let witness = json!({
        "seed_tour": tour_json(Some(seed)),
        "missing": edges_json(truth.difference(&found).copied()),
        "budget_exhausted": exhausted,
    });
    out.records.push(input.record(
        Campaign::Closure,
        DiscrepancyKind::ClosureIncomplete,
        order,
        Some(step_m),
        edges_json(truth.iter().copied()),
        edges_json(found.iter().copied()),
        witness,
    ));
    Ok(())
}

/// Checks that the exact positive-regime optimizing edges of every prefix
/// span a connected graph.
pub fn verify_connectivity(input: &TrialInput) -> Result<TrialOutcome> {
    if let Some(skip) = exact_gate(input) {
        return Ok(skip);
    }
    let c = reduce_to_tsp(&input.graph);
    let Resolved::Order(order) = input.resolve(&c)? else {
        return Ok(TrialOutcome::skipped(SkipReason::Shortcut));
    };
    let mut out = open();
    for k in 4..=order.len() {
        let es = exact_optimizing_edges(&c, &order[..k])?;
        if es.regime() != Regime::Positive {
            continue;
        }
        out.steps_checked += 1;
        let og = opt_graph(&es);
        if is_connected(&og) {
            out.steps_agreed += 1;
            continue;
        }
        let witness = json!({
            "vertices": og.vertices.iter().collect::<Vec<_>>(),
            "links": edges_json(og.links.iter().copied()),
        });
        out.records.push(input.record(
            Campaign::Connectivity,
            DiscrepancyKind::OptgraphDisconnected,
            &order,
            Some(k),
            json!(true),
            json!(false),
            witness,
        ));
    }
    Ok(out.finish(SkipReason::Vacuous))
}

/// When every quad has a cost-0 tour, counts the Hamiltonian cycles that
/// the shortcut claims exist in multiples.
pub fn verify_quad_shortcut(input: &TrialInput) -> Result<TrialOutcome> {
    let g = &input.graph;
    if g.n() < 4 {
        return Ok(TrialOutcome::skipped(SkipReason::NotApplicable));
    }
    if g.n() > COUNT_MAX_N {
        return Ok(TrialOutcome::skipped(SkipReason::Capacity));
    }
    let c = reduce_to_tsp(g);
    if let QuadSelection::Quad { .. } = select_initial_quad(&c)? {
        return Ok(TrialOutcome::skipped(SkipReason::NotApplicable));
    }
    let count = count_hamiltonian_cycles(g)?;
    let mut out = open();
    out.steps_checked = 1;
    let kind = match count {
        0 => DiscrepancyKind::VerdictMismatch,
        1 => DiscrepancyKind::ShortcutClaimViolated,
        _ => {
            out.steps_agreed = 1;
            return Ok(out.finish(SkipReason::NotApplicable));
        }
    };
    let cycle = hc_exists(g);
    out.records.push(input.record(
        Campaign::QuadShortcut,
        kind,
        &[],
        None,
        json!({ "hamiltonian_cycles": count }),
        json!({ "verdict": "hamiltonian_by_quad_shortcut", "claimed_cycles": "multiple" }),
        json!({ "cycle": tour_json(cycle.as_ref()) }),
    ));
    Ok(out.finish(SkipReason::NotApplicable))
}

fn verdict_label(v: &Verdict) -> &'static str {
    match v {
        Verdict::Hamiltonian(_) => "hamiltonian",
        Verdict::NotHamiltonian { .. } => "not_hamiltonian",
        Verdict::HamiltonianByQuadShortcut => "hamiltonian_by_quad_shortcut",
    }
}

/// Runs the full procedure with the closure provider and compares its
/// verdict with the backtracking oracle.
pub fn verify_end_to_end(input: &TrialInput) -> Result<TrialOutcome> {
    let g = &input.graph;
    if g.n() > END_TO_END_MAX_N {
        return Ok(TrialOutcome::skipped(SkipReason::Capacity));
    }
    let cfg = GrowthConfig { provider: Provider::Closure, closure: ClosureConfig::default() };
    let decision = decide_hamiltonian(g, input.order.as_deref(), &cfg)?;
    let mut out = open();
    let order = match (&decision.final_state, &input.order) {
        (Some(s), _) => s.subset.clone(),
        (None, Some(o)) => o.clone(),
        (None, None) => Vec::new(),
    };
    if let Some(state) = &decision.final_state {
        for row in &state.trace {
            out.construction_mismatches += u64::from(row.construction_mismatch);
            out.closure_budget_exhausted += u64::from(row.closure_budget_exhausted);
        }
        out.witnesses_validated += state.edge_set.len() as u64;
    }
    if input.strict && out.construction_mismatches > 0 {
        return Err(HarnessError::Invariant(format!(
            "{} construction mismatch step(s) under strict mode",
            out.construction_mismatches
        )));
    }
    let claims = match &decision.verdict {
        Verdict::Hamiltonian(t) => {
            if !is_hamiltonian_cycle(g, t) {
                return Err(HarnessError::Invariant(format!("Hamiltonian verdict with invalid witness {t:?}")));
            }
            out.witnesses_validated += 1;
            true
        }
        Verdict::HamiltonianByQuadShortcut => true,
        Verdict::NotHamiltonian { .. } => false,
    };
    let oracle = hc_exists(g);
    out.steps_checked = 1;
    if claims == oracle.is_some() {
        out.steps_agreed = 1;
        return Ok(out.finish(SkipReason::NotApplicable));
    }
    let final_cost = match &decision.verdict {
        Verdict::NotHamiltonian { final_cost } => json!(final_cost),
        Verdict::Hamiltonian(_) => json!(0),
        Verdict::HamiltonianByQuadShortcut => Value::Null,
    };
    out.records.push(input.record(
        Campaign::EndToEnd,
        DiscrepancyKind::VerdictMismatch,
        &order,
        None,
        json!(oracle.is_some()),
        json!(verdict_label(&decision.verdict)),
        json!({ "oracle_cycle": tour_json(oracle.as_ref()), "final_cost": final_cost }),
    ));
    Ok(out.finish(SkipReason::NotApplicable))
}

pub fn verify(campaign: Campaign, input: &TrialInput) -> Result<TrialOutcome> {
    match campaign {
        Campaign::Table1 => verify_table1(input),
        Campaign::Closure => verify_closure(input),
        Campaign::EndToEnd => verify_end_to_end(input),
        Campaign::QuadShortcut => verify_quad_shortcut(input),
        Campaign::Connectivity => verify_connectivity(input),
    }
}

enum Source {
    Random,
    Masks(Vec<(usize, u64)>),
    Graphs(Vec<Graph>),
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.n_range;
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if lo > hi {
            return bad(format!("empty vertex range {lo}..{hi}"));
        }
        match &self.generator {
            Generator::Gnp { p } | Generator::Planted { extra_p: p } if !(0.0..=1.0).contains(p) => {
                bad(format!("edge probability {p} outside [0, 1]"))
            }
            Generator::Planted { .. } if lo < 3 => bad("planted cycles need n >= 3".into()),
            Generator::Exhaustive if hi > EXHAUSTIVE_MAX_N => {
                bad(format!("exhaustive enumeration is limited to n <= {EXHAUSTIVE_MAX_N}"))
            }
            _ => Ok(()),
        }
    }

    fn source(&self) -> Result<(Source, u64)> {
        Ok(match &self.generator {
            Generator::Gnp { .. } | Generator::Planted { .. } => (Source::Random, self.trials),
            Generator::Exhaustive => {
                let (lo, hi) = self.n_range;
                let masks: Vec<(usize, u64)> =
                    (lo..=hi).flat_map(|n| connected_masks(n).into_iter().map(move |m| (n, m))).collect();
                let total = self.trials.min(masks.len() as u64);
                (Source::Masks(masks), total)
            }
            Generator::Graphs { graphs } => {
                let graphs = graphs
                    .iter()
                    .map(|g| g.to_graph().map_err(|e| HarnessError::Config(format!("instance: {e}"))))
                    .collect::<Result<Vec<_>>>()?;
                let total = self.trials.min(graphs.len() as u64);
                (Source::Graphs(graphs), total)
            }
        })
    }

    fn trial_input(&self, source: &Source, index: u64) -> Result<TrialInput> {
        let seed = trial_seed(self.master_seed, index);
        let mut rng = rng_from_seed(seed);
        let (lo, hi) = self.n_range;
        let graph = match (source, &self.generator) {
            (Source::Random, Generator::Gnp { p }) => {
                let n = rand::Rng::gen_range(&mut rng, lo..=hi);
                gnp_with(&mut rng, n, *p)
            }
            (Source::Random, Generator::Planted { extra_p }) => {
                let n = rand::Rng::gen_range(&mut rng, lo..=hi);
                planted_with(&mut rng, n, *extra_p)
            }
            (Source::Masks(masks), _) => {
                let (n, mask) = masks[index as usize];
                graph_from_mask(n, mask)
            }
            (Source::Graphs(graphs), _) => graphs[index as usize].clone(),
            (Source::Random, _) => unreachable!("random source only for random generators"),
        };
        let order = match self.order_policy {
            OrderPolicy::Default => None,
            OrderPolicy::Shuffle if graph.n() < 4 => None,
            OrderPolicy::Shuffle => match select_initial_quad(&reduce_to_tsp(&graph))? {
                QuadSelection::Quad { quad, .. } => Some(shuffled_order(&mut rng, graph.n(), quad)),
                QuadSelection::AllZeroShortcut => None,
            },
        };
        Ok(TrialInput { seed, graph, order, strict: self.strict })
    }

    pub fn trial(&self, index: u64) -> Result<TrialInput> {
        self.validate()?;
        let (source, _) = self.source()?;
        self.trial_input(&source, index)
    }
}

/// Runs every trial and writes the records as JSON lines, in trial order.
pub fn run_campaign<W: Write>(cfg: &ExperimentConfig, sink: &mut W) -> Result<CampaignReport> {
    cfg.validate()?;
    let start = Instant::now();
    let (source, total) = cfg.source()?;
    let mut report = CampaignReport::new(cfg.clone());
    let mut first = 0;
    while first < total {
        let last = (first + CHUNK as u64).min(total);
        let outcomes: Vec<Result<TrialOutcome>> = (first..last)
            .into_par_iter()
            .map(|i| cfg.trial_input(&source, i).and_then(|input| verify(cfg.campaign, &input)))
            .collect();
        for outcome in outcomes {
            let outcome = outcome?;
            let written = outcome.records.iter().try_for_each(|r| {
                serde_json::to_writer(&mut *sink, r).map_err(std::io::Error::from)?;
                sink.write_all(b"\n")
            });
            if let Err(source) = written {
                report.runtime_seconds = start.elapsed().as_secs_f64();
                return Err(HarnessError::Sink { partial: Box::new(report), source });
            }
            report.absorb(&outcome);
        }
        first = last;
    }
    if let Err(source) = sink.flush() {
        report.runtime_seconds = start.elapsed().as_secs_f64();
        return Err(HarnessError::Sink { partial: Box::new(report), source });
    }
    report.runtime_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReplayOutcome {
    pub reproduced: bool,
    /// Records the re-run produced.
    pub records: Vec<DiscrepancyRecord>,
}

/// Re-runs the trial a record came from and checks that it is emitted again.
pub fn replay(record: &DiscrepancyRecord) -> Result<ReplayOutcome> {
    if record.schema_version != SCHEMA_VERSION {
        return Err(HarnessError::UnknownSchema(record.schema_version));
    }
    let graph = EdgeList { n: record.n, edges: record.graph_edges.clone() }
        .to_graph()
        .map_err(|e| HarnessError::InvalidRecord(e.to_string()))?;
    let order = (!record.vertex_order.is_empty()).then(|| record.vertex_order.clone());
    let input = TrialInput { seed: record.trial_seed, graph, order, strict: false };
    let outcome = verify(record.campaign, &input)?;
    let reproduced = outcome.records.iter().any(|r| r == record);
    Ok(ReplayOutcome { reproduced, records: outcome.records })
}

/// Parses JSON lines, skipping blank ones. Errors carry the 1-based line number.
pub fn parse_records(text: &str) -> std::result::Result<Vec<DiscrepancyRecord>, (usize, serde_json::Error)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| (i + 1, e)))
        .collect()
}
