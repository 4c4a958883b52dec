use std::collections::BTreeSet;

use hamgrow_core::{double_bridge_moves, reduce_to_tsp, three_opt_moves, two_opt_moves, Graph, Move, Tour};
use proptest::prelude::*;

fn tour_and_graph() -> impl Strategy<Value = (Tour, Graph)> {
    (4usize..=12).prop_flat_map(|m| {
        let pairs = m * (m - 1) / 2;
        (Just((0..m).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), pairs)).prop_map(
            move |(order, bits)| {
                let mut g = Graph::empty(m);
                let mut k = 0;
                for u in 0..m {
                    for v in u + 1..m {
                        if bits[k] {
                            g.add_edge(u, v).unwrap();
                        }
                        k += 1;
                    }
                }
                (Tour::new(order).unwrap(), g)
            },
        )
    })
}

fn check(src: &Tour, mv: &Move, arity: usize) -> Result<(), TestCaseError> {
    prop_assert_eq!(mv.out_edges.len(), arity);
    prop_assert_eq!(mv.in_edges.len(), arity);
    let out: BTreeSet<_> = mv.out_edges.iter().copied().collect();
    let inn: BTreeSet<_> = mv.in_edges.iter().copied().collect();
    prop_assert!(out.is_disjoint(&inn));
    prop_assert_eq!(mv.result.vertex_set(), src.vertex_set());
    prop_assert!(mv.result.is_canonical());
    let mut expected = src.edge_set();
    for e in &out {
        prop_assert!(expected.remove(e));
    }
    expected.extend(inn);
    prop_assert_eq!(mv.result.edge_set(), expected);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn generated_moves_are_valid((src, g) in tour_and_graph()) {
        let c = reduce_to_tsp(&g);
        let base = c.tour_cost(&src).unwrap() as i32;
        let m = src.len();
        let two: Vec<_> = two_opt_moves(&src).collect();
        prop_assert_eq!(two.len(), m * (m - 3) / 2);
        for mv in &two {
            check(&src, mv, 2)?;
            prop_assert_eq!(c.tour_cost(&mv.result).unwrap() as i32 - base, mv.delta(&c));
        }
        for mv in three_opt_moves(&src) {
            check(&src, &mv, 3)?;
            prop_assert_eq!(c.tour_cost(&mv.result).unwrap() as i32 - base, mv.delta(&c));
        }
        for mv in double_bridge_moves(&src) {
            check(&src, &mv, 4)?;
            prop_assert_eq!(c.tour_cost(&mv.result).unwrap() as i32 - base, mv.delta(&c));
        }
    }
}

#[test]
fn three_opt_results_are_unique_per_cut_triple() {
    let src = Tour::new((0..9).collect()).unwrap();
    let mut seen = BTreeSet::new();
    let moves: Vec<_> = three_opt_moves(&src).collect();
    for mv in &moves {
        assert!(seen.insert((mv.out_edges.clone(), mv.result.clone())));
    }
    // four pure reconnections per triple of pairwise non-adjacent cuts
    assert!(moves.len() <= 84 * 4);
}

#[test]
fn double_bridge_count_with_long_segments() {
    // every choice of 4 cut edges is genuine once all segments have 2+ vertices
    let src = Tour::new((0..8).collect()).unwrap();
    let long_segments = double_bridge_moves(&src)
        .filter(|mv| {
            let cuts: Vec<usize> =
                (0..8).filter(|&i| mv.out_edges.contains(&hamgrow_core::Edge::new(i, (i + 1) % 8))).collect();
            cuts.windows(2).all(|w| w[1] - w[0] >= 2) && cuts[0] + 8 - cuts[3] >= 2
        })
        .count();
    assert_eq!(long_segments, 2);
}
