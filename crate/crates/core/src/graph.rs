//! Graphs, edges, tours and the 0/1 cost function derived from a graph.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Dense 0-based vertex id.
pub type Vertex = usize;

/// Unordered vertex pair stored as `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    /// Builds the canonical edge for `{a, b}`. Panics on `a == b`.
    pub fn new(a: Vertex, b: Vertex) -> Self {
        assert_ne!(a, b, "self-loop edge");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn try_new(a: Vertex, b: Vertex) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidInput("self-loop"));
        }
        Ok(Edge::new(a, b))
    }

    pub fn u(&self) -> Vertex {
        self.u
    }

    pub fn v(&self) -> Vertex {
        self.v
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`, if `x` is an endpoint.
    pub fn other(&self, x: Vertex) -> Option<Vertex> {
        if self.u == x {
            Some(self.v)
        } else if self.v == x {
            Some(self.u)
        } else {
            None
        }
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

impl From<(Vertex, Vertex)> for Edge {
    fn from((a, b): (Vertex, Vertex)) -> Self {
        Edge::new(a, b)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct BitRows {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitRows {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitRows { n, words, bits: vec![0; words * n] }
    }

    #[inline]
    fn get(&self, u: Vertex, v: Vertex) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    fn set(&mut self, u: Vertex, v: Vertex) {
        self.bits[u * self.words + v / 64] |= 1 << (v % 64);
    }

    fn row_count(&self, u: Vertex) -> usize {
        self.bits[u * self.words..(u + 1) * self.words].iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Simple undirected graph over the vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BitRows,
    edge_count: usize,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph { adj: BitRows::new(n), edge_count: 0 }
    }

    /// Builds a graph, rejecting self-loops, out-of-range endpoints and duplicates.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::empty(n);
        for (a, b) in edges {
            if !g.add_edge(a, b)? {
                return Err(Error::InvalidInput("duplicate edge"));
            }
        }
        Ok(g)
    }

    /// Adds `{a, b}`; returns `false` if it was already present.
    pub fn add_edge(&mut self, a: Vertex, b: Vertex) -> Result<bool> {
        if a == b {
            return Err(Error::InvalidInput("self-loop"));
        }
        if a >= self.n() || b >= self.n() {
            return Err(Error::InvalidInput("vertex out of range"));
        }
        if self.adj.get(a, b) {
            return Ok(false);
        }
        self.adj.set(a, b);
        self.adj.set(b, a);
        self.edge_count += 1;
        Ok(true)
    }

    pub fn n(&self) -> usize {
        self.adj.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        a != b && a < self.n() && b < self.n() && self.adj.get(a, b)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.row_count(v)
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.n()).filter(move |&w| self.adj.get(v, w))
    }

    /// Edges in ascending canonical order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let n = self.n();
        (0..n).flat_map(move |u| (u + 1..n).filter(move |&v| self.adj.get(u, v)).map(move |v| Edge { u, v }))
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("in range");
            }
        }
        g
    }

    /// `0-1-...-(n-1)-0`; needs `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0).expect("in range");
        }
        g
    }

    /// `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u).expect("in range");
        }
        g
    }

    /// Star `K_{1,n-1}` centred on vertex 0.
    pub fn star(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 1..n {
            g.add_edge(0, u).expect("in range");
        }
        g
    }

    /// Complete bipartite graph with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Graph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v).expect("in range");
            }
        }
        g
    }

    /// Petersen graph: outer cycle 0..5, inner pentagram 5..10, spokes `i - i+5`.
    pub fn petersen() -> Self {
        let mut g = Graph::empty(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5).expect("in range");
            g.add_edge(5 + i, 5 + (i + 2) % 5).expect("in range");
            g.add_edge(i, i + 5).expect("in range");
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n()).field("edges", &self.edges().collect::<Vec<_>>()).finish()
    }
}

/// Symmetric 0/1 cost over all pairs of distinct vertices.
///
/// Cost 0 marks a graph edge, cost 1 a non-edge.
#[derive(Clone, PartialEq, Eq)]
pub struct CostFn {
    adj: BitRows,
}

/// Completes `g` and prices its edges 0 and every missing pair 1.
pub fn reduce_to_tsp(g: &Graph) -> CostFn {
    CostFn { adj: g.adj.clone() }
}

impl CostFn {
    pub fn n(&self) -> usize {
        self.adj.n
    }

    /// Cost of the pair `{a, b}`, `a != b`.
    #[inline]
    pub fn cost(&self, a: Vertex, b: Vertex) -> u32 {
        debug_assert_ne!(a, b);
        u32::from(!self.adj.get(a, b))
    }

    #[inline]
    pub fn edge_cost(&self, e: Edge) -> u32 {
        self.cost(e.u, e.v)
    }

    /// Checked total cost of a tour.
    pub fn tour_cost(&self, t: &Tour) -> Result<u32> {
        if t.len() < 3 {
            return Err(Error::InvalidInput("tour shorter than 3"));
        }
        if t.order.iter().any(|&v| v >= self.n()) {
            return Err(Error::InvalidInput("tour vertex out of range"));
        }
        Ok(self.cost_of_order(&t.order))
    }

    /// Cost of a cyclic vertex sequence; the caller guarantees validity.
    pub(crate) fn cost_of_order(&self, order: &[Vertex]) -> u32 {
        let m = order.len();
        (0..m).map(|i| self.cost(order[i], order[(i + 1) % m])).sum()
    }

    pub(crate) fn cost_of(&self, t: &Tour) -> u32 {
        self.cost_of_order(&t.order)
    }
}

impl fmt::Debug for CostFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CostFn(n={})", self.n())
    }
}

/// Cyclic visiting order of distinct vertices (at least three).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tour {
    order: Vec<Vertex>,
}

impl Tour {
    /// Validates and wraps an order. The order is kept as given.
    pub fn new(order: Vec<Vertex>) -> Result<Self> {
        if order.len() < 3 {
            return Err(Error::InvalidInput("tour shorter than 3"));
        }
        let mut sorted = order.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("tour repeats a vertex"));
        }
        Ok(Tour { order })
    }

    /// Validates, then canonicalizes.
    pub fn canonical(order: Vec<Vertex>) -> Result<Self> {
        Tour::new(order).map(|t| t.canonicalize())
    }

    pub(crate) fn from_order_unchecked(order: Vec<Vertex>) -> Self {
        debug_assert!(Tour::new(order.clone()).is_ok());
        Tour { order }
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn into_order(self) -> Vec<Vertex> {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Smallest vertex first; of the two directions, the one whose second
    /// element is smaller.
    pub fn canonicalize(&self) -> Tour {
        let m = self.order.len();
        let start = (0..m).min_by_key(|&i| self.order[i]).expect("non-empty tour");
        let next = self.order[(start + 1) % m];
        let prev = self.order[(start + m - 1) % m];
        let order = if next <= prev {
            (0..m).map(|k| self.order[(start + k) % m]).collect()
        } else {
            (0..m).map(|k| self.order[(start + m - k) % m]).collect()
        };
        Tour { order }
    }

    pub fn is_canonical(&self) -> bool {
        let m = self.order.len();
        let first = self.order[0];
        self.order.iter().all(|&v| v >= first) && self.order[1] <= self.order[m - 1]
    }

    /// The `m` cyclic edges, in tour order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let m = self.order.len();
        (0..m).map(move |i| Edge::new(self.order[i], self.order[(i + 1) % m]))
    }

    /// The cyclic edges as a set.
    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().any(|x| x == e)
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.order.iter().position(|&x| x == v)
    }

    /// The two tour neighbours of `v` (successor first).
    pub fn neighbors_of(&self, v: Vertex) -> Option<(Vertex, Vertex)> {
        let m = self.order.len();
        self.position(v).map(|i| (self.order[(i + 1) % m], self.order[(i + m - 1) % m]))
    }

    /// Sorted vertex set covered by the tour.
    pub fn vertex_set(&self) -> Vec<Vertex> {
        let mut vs = self.order.clone();
        vs.sort_unstable();
        vs
    }

    /// Inserts `v` between the adjacent tour vertices `a` and `b`.
    pub fn splice(&self, a: Vertex, b: Vertex, v: Vertex) -> Result<Tour> {
        let m = self.order.len();
        let i = self.position(a).ok_or(Error::InvalidInput("splice endpoint not on tour"))?;
        if self.order.contains(&v) {
            return Err(Error::InvalidInput("spliced vertex already on tour"));
        }
        let mut order = self.order.clone();
        if self.order[(i + 1) % m] == b {
            order.insert(i + 1, v);
        } else if self.order[(i + m - 1) % m] == b {
            order.insert(i, v);
        } else {
            return Err(Error::InvalidInput("splice endpoints are not adjacent"));
        }
        Ok(Tour { order })
    }
}

impl fmt::Debug for Tour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tour{:?}", self.order)
    }
}
