//! Edge-exchange moves on a tour: sequential 2-opt and 3-opt, and the
//! non-sequential double bridge.
//!
//! A move is addressed by the positions of the removed tour edges, where
//! position `i` names the edge `(order[i], order[i + 1 mod m])`. Generators
//! walk positions in ascending lexicographic order, so the move stream of
//! a given tour is fully deterministic.

use alloc::vec::Vec;

use crate::graph::{CostFn, Edge, Tour, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    TwoOpt,
    ThreeOpt,
    DoubleBridge,
}

impl MoveKind {
    /// Number of edges removed (and added) by a move of this kind.
    pub fn arity(self) -> usize {
        match self {
            MoveKind::TwoOpt => 2,
            MoveKind::ThreeOpt => 3,
            MoveKind::DoubleBridge => 4,
        }
    }
}

/// A fully materialised exchange.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Move {
    pub kind: MoveKind,
    /// Removed edges, sorted.
    pub out_edges: Vec<Edge>,
    /// Added edges, sorted.
    pub in_edges: Vec<Edge>,
    /// Canonical resulting tour.
    pub result: Tour,
}

impl Move {
    pub fn delta(&self, c: &CostFn) -> i32 {
        let sum = |es: &[Edge]| es.iter().map(|&e| c.edge_cost(e) as i32).sum::<i32>();
        sum(&self.in_edges) - sum(&self.out_edges)
    }
}

/// 3-opt reconnection of the segments `A B C` with `A` held fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Reconnect {
    /// `A B' C'`
    ReverseBoth,
    /// `A C B`
    Swap,
    /// `A C B'`
    SwapReverseB,
    /// `A C' B`
    SwapReverseC,
}

const RECONNECTS: [Reconnect; 4] =
    [Reconnect::ReverseBoth, Reconnect::Swap, Reconnect::SwapReverseB, Reconnect::SwapReverseC];

/// Lightweight move descriptor: positions plus exchanged edges, no tour.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Exchange {
    pub kind: MoveKind,
    cuts: [usize; 4],
    reconnect: Reconnect,
    out: [Edge; 4],
    inn: [Edge; 4],
}

impl Exchange {
    pub fn out_edges(&self) -> &[Edge] {
        &self.out[..self.kind.arity()]
    }

    pub fn in_edges(&self) -> &[Edge] {
        &self.inn[..self.kind.arity()]
    }

    pub fn delta(&self, c: &CostFn) -> i32 {
        let sum = |es: &[Edge]| es.iter().map(|&e| c.edge_cost(e) as i32).sum::<i32>();
        sum(self.in_edges()) - sum(self.out_edges())
    }

    /// The resulting vertex order (not canonicalised).
    pub fn apply(&self, order: &[Vertex]) -> Vec<Vertex> {
        let m = order.len();
        let mut out = Vec::with_capacity(m);
        let [i, j, k, l] = self.cuts;
        match self.kind {
            MoveKind::TwoOpt => {
                out.extend_from_slice(&order[..=i]);
                out.extend(order[i + 1..=j].iter().rev());
                out.extend_from_slice(&order[j + 1..]);
            }
            MoveKind::ThreeOpt => {
                let b = &order[i + 1..=j];
                let c = &order[j + 1..=k];
                out.extend_from_slice(&order[..=i]);
                match self.reconnect {
                    Reconnect::ReverseBoth => {
                        out.extend(b.iter().rev());
                        out.extend(c.iter().rev());
                    }
                    Reconnect::Swap => {
                        out.extend_from_slice(c);
                        out.extend_from_slice(b);
                    }
                    Reconnect::SwapReverseB => {
                        out.extend_from_slice(c);
                        out.extend(b.iter().rev());
                    }
                    Reconnect::SwapReverseC => {
                        out.extend(c.iter().rev());
                        out.extend_from_slice(b);
                    }
                }
                out.extend_from_slice(&order[k + 1..]);
            }
            MoveKind::DoubleBridge => {
                out.extend_from_slice(&order[..=i]);
                out.extend_from_slice(&order[k + 1..=l]);
                out.extend_from_slice(&order[j + 1..=k]);
                out.extend_from_slice(&order[i + 1..=j]);
                out.extend_from_slice(&order[l + 1..]);
            }
        }
        out
    }

    pub fn materialize(&self, order: &[Vertex]) -> Move {
        let mut out_edges = self.out_edges().to_vec();
        let mut in_edges = self.in_edges().to_vec();
        out_edges.sort_unstable();
        in_edges.sort_unstable();
        Move {
            kind: self.kind,
            out_edges,
            in_edges,
            result: Tour::from_order_unchecked(self.apply(order)).canonicalize(),
        }
    }

    fn is_genuine(&self) -> bool {
        let out = self.out_edges();
        !self.in_edges().iter().any(|e| out.contains(e))
    }
}

fn placeholder() -> Edge {
    Edge::new(0, 1)
}

/// Visits every non-degenerate 2-opt exchange of `order`.
pub(crate) fn for_each_two_opt(order: &[Vertex], mut visit: impl FnMut(&Exchange)) {
    let m = order.len();
    if m < 4 {
        return;
    }
    let at = |p: usize| order[p % m];
    for i in 0..m - 2 {
        let j_end = if i == 0 { m - 1 } else { m };
        for j in i + 2..j_end {
            let x = Exchange {
                kind: MoveKind::TwoOpt,
                cuts: [i, j, 0, 0],
                reconnect: Reconnect::Swap,
                out: [Edge::new(at(i), at(i + 1)), Edge::new(at(j), at(j + 1)), placeholder(), placeholder()],
                inn: [Edge::new(at(i), at(j)), Edge::new(at(i + 1), at(j + 1)), placeholder(), placeholder()],
            };
            if x.is_genuine() {
                visit(&x);
            }
        }
    }
}

/// Visits every pure 3-opt exchange of `order`: exactly three edges change,
/// and reconnections of one cut triple that give the same tour are merged.
pub(crate) fn for_each_three_opt(order: &[Vertex], mut visit: impl FnMut(&Exchange)) {
    let m = order.len();
    if m < 5 {
        return;
    }
    let at = |p: usize| order[p % m];
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let out = [Edge::new(at(i), at(i + 1)), Edge::new(at(j), at(j + 1)), Edge::new(at(k), at(k + 1))];
                let (ai, ai1, aj, aj1, ak, ak1) = (at(i), at(i + 1), at(j), at(j + 1), at(k), at(k + 1));
                let mut seen: [[Edge; 3]; 4] = [[placeholder(); 3]; 4];
                let mut n_seen = 0;
                for reconnect in RECONNECTS {
                    let inn = match reconnect {
                        Reconnect::ReverseBoth => [(ai, aj), (ai1, ak), (aj1, ak1)],
                        Reconnect::Swap => [(ai, aj1), (ak, ai1), (aj, ak1)],
                        Reconnect::SwapReverseB => [(ai, aj1), (ak, aj), (ai1, ak1)],
                        Reconnect::SwapReverseC => [(ai, ak), (aj1, ai1), (aj, ak1)],
                    };
                    if inn.iter().any(|&(a, b)| a == b) {
                        continue;
                    }
                    let inn = inn.map(|(a, b)| Edge::new(a, b));
                    let x = Exchange {
                        kind: MoveKind::ThreeOpt,
                        cuts: [i, j, k, 0],
                        reconnect,
                        out: [out[0], out[1], out[2], placeholder()],
                        inn: [inn[0], inn[1], inn[2], placeholder()],
                    };
                    if !x.is_genuine() {
                        continue;
                    }
                    let mut key = inn;
                    key.sort_unstable();
                    if seen[..n_seen].contains(&key) {
                        continue;
                    }
                    seen[n_seen] = key;
                    n_seen += 1;
                    visit(&x);
                }
            }
        }
    }
}

/// Visits every double bridge of `order`: four cut edges split the tour
/// into `S1 S2 S3 S4`, reconnected as `S1 S4 S3 S2` with orientations kept.
pub(crate) fn for_each_double_bridge(order: &[Vertex], mut visit: impl FnMut(&Exchange)) {
    let m = order.len();
    if m < 4 {
        return;
    }
    let at = |p: usize| order[p % m];
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    let x = Exchange {
                        kind: MoveKind::DoubleBridge,
                        cuts: [i, j, k, l],
                        reconnect: Reconnect::Swap,
                        out: [
                            Edge::new(at(i), at(i + 1)),
                            Edge::new(at(j), at(j + 1)),
                            Edge::new(at(k), at(k + 1)),
                            Edge::new(at(l), at(l + 1)),
                        ],
                        inn: [
                            Edge::new(at(i), at(k + 1)),
                            Edge::new(at(l), at(j + 1)),
                            Edge::new(at(k), at(i + 1)),
                            Edge::new(at(j), at(l + 1)),
                        ],
                    };
                    if x.is_genuine() {
                        visit(&x);
                    }
                }
            }
        }
    }
}

/// Visits all exchanges in the fixed order 2-opt, 3-opt, double bridge.
pub(crate) fn for_each_exchange(order: &[Vertex], mut visit: impl FnMut(&Exchange)) {
    for_each_two_opt(order, &mut visit);
    for_each_three_opt(order, &mut visit);
    for_each_double_bridge(order, &mut visit);
}

type Visitor = fn(&[Vertex], &mut dyn FnMut(&Exchange));

fn collect(t: &Tour, gen: Visitor) -> Vec<Move> {
    let mut moves = Vec::new();
    gen(t.order(), &mut |x| moves.push(x.materialize(t.order())));
    moves
}

/// All 2-opt moves of `t`; there are `m(m-3)/2` of them.
pub fn two_opt_moves(t: &Tour) -> impl Iterator<Item = Move> {
    collect(t, |o, f| for_each_two_opt(o, f)).into_iter()
}

/// All pure sequential 3-opt moves of `t`, deduplicated per cut triple.
pub fn three_opt_moves(t: &Tour) -> impl Iterator<Item = Move> {
    collect(t, |o, f| for_each_three_opt(o, f)).into_iter()
}

/// All genuine 4-edge double-bridge moves of `t`.
pub fn double_bridge_moves(t: &Tour) -> impl Iterator<Item = Move> {
    collect(t, |o, f| for_each_double_bridge(o, f)).into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{reduce_to_tsp, Graph};
    use alloc::collections::BTreeSet;

    fn t(order: &[usize]) -> Tour {
        Tour::new(order.to_vec()).unwrap()
    }

    fn es(list: &[(usize, usize)]) -> Vec<Edge> {
        let mut v: Vec<Edge> = list.iter().map(|&(a, b)| Edge::new(a, b)).collect();
        v.sort_unstable();
        v
    }

    fn check_identity(src: &Tour, mv: &Move) {
        let mut expected = src.edge_set();
        for e in &mv.out_edges {
            assert!(expected.remove(e));
        }
        for e in &mv.in_edges {
            assert!(expected.insert(*e));
        }
        assert_eq!(mv.result.edge_set(), expected);
        assert_eq!(mv.result.vertex_set(), src.vertex_set());
    }

    #[test]
    fn two_opt_on_a_square() {
        let src = t(&[0, 1, 2, 3]);
        let moves: Vec<_> = two_opt_moves(&src).collect();
        assert_eq!(moves.len(), 2);
        assert_eq!(moves[0].out_edges, es(&[(0, 1), (2, 3)]));
        assert_eq!(moves[0].in_edges, es(&[(0, 2), (1, 3)]));
        assert_eq!(moves[1].out_edges, es(&[(1, 2), (0, 3)]));
        assert_eq!(moves[1].in_edges, es(&[(0, 2), (1, 3)]));
        for mv in &moves {
            check_identity(&src, mv);
        }
    }

    #[test]
    fn two_opt_counts() {
        for m in 4..12 {
            let src = Tour::new((0..m).collect()).unwrap();
            let moves: Vec<_> = two_opt_moves(&src).collect();
            assert_eq!(moves.len(), m * (m - 3) / 2);
            moves.iter().for_each(|mv| check_identity(&src, mv));
        }
    }

    #[test]
    fn three_opt_changes_exactly_three_edges() {
        let src = t(&[0, 1, 2, 3, 4]);
        let c = reduce_to_tsp(&Graph::complete(5));
        let moves: Vec<_> = three_opt_moves(&src).collect();
        assert!(!moves.is_empty());
        assert!(moves.len() <= 10 * 4);
        let mut results = BTreeSet::new();
        for mv in &moves {
            check_identity(&src, mv);
            let common = src.edge_set().intersection(&mv.result.edge_set()).count();
            assert_eq!(common, 2);
            assert_eq!(c.tour_cost(&mv.result).unwrap(), 0);
            results.insert((mv.out_edges.clone(), mv.result.clone()));
        }
        assert_eq!(results.len(), moves.len());
    }

    #[test]
    fn three_opt_needs_five_vertices() {
        assert_eq!(three_opt_moves(&t(&[0, 1, 2, 3])).count(), 0);
    }

    #[test]
    fn double_bridge_fixture() {
        let src = t(&[0, 1, 2, 3, 4, 5, 6, 7]);
        let mv = double_bridge_moves(&src).find(|mv| mv.out_edges == es(&[(1, 2), (3, 4), (5, 6), (0, 7)])).unwrap();
        assert_eq!(mv.result, t(&[0, 1, 6, 7, 4, 5, 2, 3]).canonicalize());
        assert_eq!(mv.in_edges, es(&[(1, 6), (4, 7), (2, 5), (0, 3)]));
        for mv in double_bridge_moves(&src) {
            assert_eq!(mv.out_edges.len(), 4);
            assert_eq!(mv.in_edges.len(), 4);
            check_identity(&src, &mv);
        }
    }

    #[test]
    fn double_bridge_on_a_square_degenerates() {
        assert_eq!(double_bridge_moves(&t(&[0, 1, 2, 3])).count(), 0);
    }

    #[test]
    fn delta_matches_recomputed_cost() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 5), (3, 4), (4, 6), (0, 6), (1, 5)]).unwrap();
        let c = reduce_to_tsp(&g);
        let src = t(&[0, 3, 1, 6, 2, 5, 4]);
        let base = c.tour_cost(&src).unwrap() as i32;
        let all: Vec<_> = two_opt_moves(&src).chain(three_opt_moves(&src)).chain(double_bridge_moves(&src)).collect();
        assert!(all.len() > 50);
        for mv in all {
            assert_eq!(c.tour_cost(&mv.result).unwrap() as i32 - base, mv.delta(&c));
        }
    }
}
