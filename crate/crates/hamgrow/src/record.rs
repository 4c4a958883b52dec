//! Discrepancy records: one JSON object per line.

use hamgrow_core::{Edge, Graph, Tour};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Campaign {
    #[serde(rename = "table1")]
    Table1,
    #[serde(rename = "closure")]
    Closure,
    #[serde(rename = "endtoend")]
    EndToEnd,
    #[serde(rename = "quad")]
    QuadShortcut,
    #[serde(rename = "connectivity")]
    Connectivity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscrepancyKind {
    CostMismatch,
    ClosureIncomplete,
    VerdictMismatch,
    ShortcutClaimViolated,
    OptgraphDisconnected,
    ConstructionMismatch,
}

/// A self-contained, replayable disagreement between the procedure and an oracle.
///
/// `vertex_order` is the absorption order the trial used. It is empty when
/// no growth took place (shortcut, fewer than 4 vertices, quad campaign);
/// replay then uses the default selection. `step_m` is the size of the
/// sub-problem the record is about, absent for whole-graph checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyRecord {
    pub schema_version: u32,
    pub campaign: Campaign,
    pub kind: DiscrepancyKind,
    pub trial_seed: u64,
    pub n: usize,
    pub graph_edges: Vec<[usize; 2]>,
    pub vertex_order: Vec<usize>,
    pub step_m: Option<usize>,
    pub expected: Value,
    pub actual: Value,
    pub witness: Value,
}

pub fn edge_list(g: &Graph) -> Vec<[usize; 2]> {
    g.edges().map(|e| [e.u(), e.v()]).collect()
}

pub(crate) fn edges_json<I: IntoIterator<Item = Edge>>(edges: I) -> Value {
    Value::from(edges.into_iter().map(|e| vec![e.u(), e.v()]).collect::<Vec<_>>())
}

pub(crate) fn tour_json(t: Option<&Tour>) -> Value {
    t.map_or(Value::Null, |t| Value::from(t.order().to_vec()))
}
