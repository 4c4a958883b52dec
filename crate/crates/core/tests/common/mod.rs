#![allow(dead_code)]

//! Brute-force reference implementations, independent of the crate's
//! enumerators: plain permutation recursion over every vertex order.

use std::collections::BTreeSet;

use hamgrow_core::{CostFn, Edge, Graph};

/// Every cyclic order starting at `subset[0]`, both directions included.
pub fn all_orders(subset: &[usize]) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            prefix.push(v);
            rec(prefix, rest, out);
            prefix.pop();
            rest.insert(i, v);
        }
    }
    let mut out = Vec::new();
    let mut prefix = vec![subset[0]];
    let mut rest = subset[1..].to_vec();
    rec(&mut prefix, &mut rest, &mut out);
    out
}

pub fn order_cost(c: &CostFn, order: &[usize]) -> u32 {
    let m = order.len();
    (0..m).map(|i| c.cost(order[i], order[(i + 1) % m])).sum()
}

pub fn brute_optimum(c: &CostFn, subset: &[usize]) -> u32 {
    all_orders(subset).iter().map(|o| order_cost(c, o)).min().unwrap()
}

pub fn order_edges(order: &[usize]) -> Vec<Edge> {
    let m = order.len();
    (0..m).map(|i| Edge::new(order[i], order[(i + 1) % m])).collect()
}

/// Optimizing edges straight from the definitions.
pub fn brute_optimizing_edges(c: &CostFn, subset: &[usize]) -> (u32, BTreeSet<Edge>) {
    let orders = all_orders(subset);
    let opt = orders.iter().map(|o| order_cost(c, o)).min().unwrap();
    let mut edges = BTreeSet::new();
    for o in &orders {
        let cost = order_cost(c, o);
        for e in order_edges(o) {
            let ce = c.edge_cost(e);
            let member = if opt >= 1 { cost == opt && ce == 1 } else { cost <= 1 && ce == cost };
            if member {
                edges.insert(e);
            }
        }
    }
    (opt, edges)
}

pub fn brute_hc(g: &Graph) -> bool {
    let c = hamgrow_core::reduce_to_tsp(g);
    g.n() >= 3 && brute_optimum(&c, &(0..g.n()).collect::<Vec<_>>()) == 0
}

/// Graph on `n` vertices from a bit mask over the pairs in lexicographic order.
pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut g = Graph::empty(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
            bit += 1;
        }
    }
    g
}
