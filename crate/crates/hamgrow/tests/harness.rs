use hamgrow::generate::{connected_masks, gen_gnp, gen_planted_hamiltonian, graph_from_mask, trial_seed};
use hamgrow::harness::{
    parse_records, verify_closure, verify_connectivity, verify_end_to_end, verify_quad_shortcut, verify_table1,
    EdgeList,
};
use hamgrow::{
    parse_graph, replay, run_campaign, serialize_graph, Campaign, DiscrepancyKind, ExperimentConfig, Generator,
    HarnessError, OrderPolicy, SkipReason, TrialInput, TrialStatus, SCHEMA_VERSION,
};
use hamgrow_core::{hc_exists, Graph};
use proptest::prelude::*;

fn input(g: Graph) -> TrialInput {
    TrialInput { seed: 0, graph: g, order: None, strict: false }
}

fn cfg(campaign: Campaign, n_range: (usize, usize), generator: Generator, trials: u64) -> ExperimentConfig {
    ExperimentConfig {
        campaign,
        n_range,
        generator,
        trials,
        master_seed: 11,
        order_policy: OrderPolicy::Default,
        strict: false,
    }
}

fn run(c: &ExperimentConfig) -> (hamgrow::CampaignReport, Vec<u8>) {
    let mut sink = Vec::new();
    let report = run_campaign(c, &mut sink).unwrap();
    (report, sink)
}

#[test]
fn table1_on_c5_agrees() {
    let out = verify_table1(&input(Graph::cycle(5))).unwrap();
    assert_eq!(out.status, TrialStatus::Agreement);
    assert_eq!((out.steps_checked, out.steps_agreed), (1, 1));
}

#[test]
fn complete_graphs_take_the_shortcut() {
    let out = verify_table1(&input(Graph::complete(6))).unwrap();
    assert_eq!(out.status, TrialStatus::Skipped(SkipReason::Shortcut));
}

#[test]
fn closure_on_p5_and_k4_agrees() {
    let out = verify_closure(&input(Graph::path(5))).unwrap();
    assert_eq!(out.status, TrialStatus::Agreement);
    assert_eq!(out.steps_checked, 2);

    let k4 = TrialInput { order: Some(vec![0, 1, 2, 3]), ..input(Graph::complete(4)) };
    let out = verify_closure(&k4).unwrap();
    assert_eq!(out.status, TrialStatus::Agreement);
    assert_eq!(out.witnesses_validated, 6);
}

#[test]
fn connectivity_examples() {
    let out = verify_connectivity(&input(Graph::path(5))).unwrap();
    assert_eq!(out.status, TrialStatus::Agreement);
    // Every prefix of C5 along 0..4 past the quad has optimum 0 except the quad itself.
    let out = verify_connectivity(&input(Graph::cycle(5))).unwrap();
    assert_eq!(out.steps_checked, 1);
    let out = verify_connectivity(&TrialInput { order: Some(vec![0, 1, 2, 3]), ..input(Graph::cycle(4)) }).unwrap();
    assert_eq!(out.status, TrialStatus::Skipped(SkipReason::Vacuous));
}

#[test]
fn quad_shortcut_examples() {
    let c4 = verify_quad_shortcut(&input(Graph::cycle(4))).unwrap();
    assert_eq!(c4.status, TrialStatus::Discrepant);
    assert_eq!(c4.records.len(), 1);
    assert_eq!(c4.records[0].kind, DiscrepancyKind::ShortcutClaimViolated);

    let k5 = verify_quad_shortcut(&input(Graph::complete(5))).unwrap();
    assert_eq!(k5.status, TrialStatus::Agreement);

    let p = verify_quad_shortcut(&input(Graph::path(6))).unwrap();
    assert_eq!(p.status, TrialStatus::Skipped(SkipReason::NotApplicable));

    let big = verify_quad_shortcut(&input(Graph::complete(11))).unwrap();
    assert_eq!(big.status, TrialStatus::Skipped(SkipReason::Capacity));
}

#[test]
fn end_to_end_examples() {
    let c5 = verify_end_to_end(&input(Graph::cycle(5))).unwrap();
    assert_eq!(c5.status, TrialStatus::Agreement);
    assert_eq!(c5.witnesses_validated, 6);

    let p = verify_end_to_end(&input(Graph::petersen())).unwrap();
    assert_eq!(p.steps_checked, 1);
    if let Some(r) = p.records.first() {
        assert_eq!(r.expected, serde_json::json!(false));
    }

    let big = verify_end_to_end(&input(Graph::cycle(19))).unwrap();
    assert_eq!(big.status, TrialStatus::Skipped(SkipReason::Capacity));
}

#[test]
fn exact_campaigns_skip_above_capacity() {
    for verify in [verify_table1, verify_closure, verify_connectivity] {
        let out = verify(&input(Graph::path(12))).unwrap();
        assert_eq!(out.status, TrialStatus::Skipped(SkipReason::Capacity));
    }
}

#[test]
fn strict_mode_turns_mismatches_into_violations() {
    // Find an instance with a construction mismatch under the closure provider.
    let g = (0..500)
        .map(|i| gen_gnp(9, 0.5, trial_seed(3, i)))
        .find(|g| verify_end_to_end(&input(g.clone())).unwrap().construction_mismatches > 0)
        .expect("some G(9, 0.5) instance mispredicts");
    let strict = TrialInput { strict: true, ..input(g) };
    assert!(matches!(verify_end_to_end(&strict), Err(HarnessError::Invariant(_))));
}

#[test]
fn zero_trials_give_an_empty_report() {
    let (report, sink) = run(&cfg(Campaign::Table1, (5, 5), Generator::Gnp { p: 0.5 }, 0));
    assert!(sink.is_empty());
    assert_eq!(report.trials_run, 0);
    assert_eq!(report.agreement_rate, None);
}

#[test]
fn exhaustive_enumerates_every_connected_labeled_graph() {
    let (report, _) = run(&cfg(Campaign::Table1, (5, 5), Generator::Exhaustive, u64::MAX));
    assert_eq!(report.trials_run, 728);
    let (report, _) = run(&cfg(Campaign::Table1, (5, 5), Generator::Exhaustive, 10));
    assert_eq!(report.trials_run, 10);
}

#[test]
fn campaigns_are_byte_deterministic_and_replay() {
    for campaign in [Campaign::Table1, Campaign::Closure, Campaign::EndToEnd, Campaign::Connectivity] {
        for policy in [OrderPolicy::Default, OrderPolicy::Shuffle] {
            let c = ExperimentConfig { order_policy: policy, ..cfg(campaign, (6, 9), Generator::Gnp { p: 0.5 }, 300) };
            let (a, bytes) = run(&c);
            let (_, again) = run(&c);
            assert_eq!(bytes, again);
            assert_eq!(a.trials_run, a.agreements + a.discrepant_trials + a.skipped);
            let records = parse_records(std::str::from_utf8(&bytes).unwrap()).unwrap();
            assert_eq!(records.len() as u64, a.discrepancy_total());
            for r in &records {
                assert!(replay(r).unwrap().reproduced, "{r:?}");
            }
        }
    }
}

fn some_record() -> hamgrow::DiscrepancyRecord {
    let (_, bytes) = run(&cfg(Campaign::Table1, (5, 5), Generator::Exhaustive, u64::MAX));
    parse_records(std::str::from_utf8(&bytes).unwrap()).unwrap().remove(0)
}

#[test]
fn tampered_records_do_not_reproduce() {
    let mut r = some_record();
    assert!(replay(&r).unwrap().reproduced);
    r.expected = serde_json::json!(99);
    assert!(!replay(&r).unwrap().reproduced);
}

#[test]
fn unknown_schema_is_rejected() {
    let mut r = some_record();
    r.schema_version = SCHEMA_VERSION + 1;
    assert!(matches!(replay(&r), Err(HarnessError::UnknownSchema(v)) if v == SCHEMA_VERSION + 1));
}

#[test]
fn records_embed_the_order_they_used() {
    let r = some_record();
    assert_eq!(r.vertex_order.len(), r.n);
    assert_eq!(r.step_m.map(|m| m <= r.n), Some(true));
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = [
        cfg(Campaign::Table1, (6, 5), Generator::Gnp { p: 0.5 }, 1),
        cfg(Campaign::Table1, (5, 6), Generator::Gnp { p: 1.5 }, 1),
        cfg(Campaign::Table1, (2, 6), Generator::Planted { extra_p: 0.1 }, 1),
        cfg(Campaign::Table1, (5, 9), Generator::Exhaustive, 1),
    ];
    for c in bad {
        assert!(matches!(run_campaign(&c, &mut Vec::new()), Err(HarnessError::Config(_))));
    }
}

#[test]
fn explicit_graph_sets() {
    let graphs = vec![EdgeList::of(&Graph::cycle(4)), EdgeList::of(&Graph::complete(5)), EdgeList::of(&Graph::path(5))];
    let (report, bytes) = run(&cfg(Campaign::QuadShortcut, (4, 5), Generator::Graphs { graphs }, u64::MAX));
    assert_eq!((report.trials_run, report.agreements, report.discrepant_trials, report.skipped), (3, 1, 1, 1));
    assert_eq!(bytes.iter().filter(|&&b| b == b'\n').count(), 1);
}

struct FailingSink;

impl std::io::Write for FailingSink {
    fn write(&mut self, _: &[u8]) -> std::io::Result<usize> {
        Err(std::io::Error::other("disk full"))
    }
    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

#[test]
fn sink_failure_returns_the_partial_report() {
    let c = cfg(Campaign::Table1, (5, 5), Generator::Exhaustive, u64::MAX);
    match run_campaign(&c, &mut FailingSink) {
        Err(HarnessError::Sink { partial, .. }) => assert!(partial.trials_run < 728),
        other => panic!("expected a sink error, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_files_round_trip(n in 0usize..12, p in 0.0f64..=1.0, seed: u64) {
        let g = gen_gnp(n, p, seed);
        prop_assert_eq!(parse_graph(&serialize_graph(&g)).unwrap(), g);
    }

    #[test]
    fn planted_graphs_are_hamiltonian(n in 3usize..12, p in 0.0f64..0.5, seed: u64) {
        prop_assert!(hc_exists(&gen_planted_hamiltonian(n, p, seed)).is_some());
    }

    #[test]
    fn generators_are_deterministic(n in 3usize..12, p in 0.0f64..=1.0, seed: u64) {
        prop_assert_eq!(gen_gnp(n, p, seed), gen_gnp(n, p, seed));
        prop_assert_eq!(gen_planted_hamiltonian(n, p, seed), gen_planted_hamiltonian(n, p, seed));
    }

    #[test]
    fn masks_decode_to_connected_graphs(i in 0usize..728) {
        let g = graph_from_mask(5, connected_masks(5)[i]);
        let mut seen = [false; 5];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in g.neighbors(v) {
                if !seen[w] { seen[w] = true; stack.push(w); }
            }
        }
        prop_assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn conservation_holds(campaign in prop_oneof![
        Just(Campaign::Table1), Just(Campaign::Closure), Just(Campaign::EndToEnd),
        Just(Campaign::QuadShortcut), Just(Campaign::Connectivity)
    ], lo in 3usize..8, span in 0usize..3, seed: u64, p in 0.2f64..0.9) {
        let c = ExperimentConfig { master_seed: seed, ..cfg(campaign, (lo, lo + span), Generator::Gnp { p }, 20) };
        let (r, _) = run(&c);
        prop_assert_eq!(r.trials_run, 20);
        prop_assert_eq!(r.trials_run, r.agreements + r.discrepant_trials + r.skipped);
        prop_assert_eq!(r.skipped, r.skips.values().sum::<u64>());
    }
}
