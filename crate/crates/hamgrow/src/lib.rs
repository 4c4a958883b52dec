//! Std companion to `hamgrow-core`: graph files, seeded generators and the
//! falsification campaigns behind the `hamgrow` binary.

pub mod format;
pub mod generate;
pub mod harness;
pub mod record;

pub use hamgrow_core as core;

pub use format::{parse_graph, serialize_graph, ParseError, ParseErrorKind};
pub use harness::{
    replay, run_campaign, verify, CampaignReport, ExperimentConfig, Generator, HarnessError, OrderPolicy, SkipReason,
    TrialInput, TrialOutcome, TrialStatus,
};
pub use record::{Campaign, DiscrepancyKind, DiscrepancyRecord, SCHEMA_VERSION};
