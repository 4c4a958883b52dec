//! Seeded instance generators.
//!
//! Every generator draws from a [`SplitMix64`] stream, so a `(parameters,
//! seed)` pair always produces the same graph on every platform.

use hamgrow_core::{Graph, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

/// Largest vertex count the exhaustive enumerator accepts.
pub const EXHAUSTIVE_MAX_N: usize = 8;

/// One SplitMix64 output for state `x`.
pub fn splitmix64(x: u64) -> u64 {
    SplitMix64::seed_from_u64(x).next_u64()
}

/// Seed of trial `index` in a campaign.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    splitmix64(master_seed ^ index)
}

pub fn rng_from_seed(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// G(n, p): each canonical pair, in ascending order, is kept with probability `p`.
pub fn gnp_with<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "edge probability {p} outside [0, 1]");
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("fresh pair");
            }
        }
    }
    g
}

pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Graph {
    gnp_with(&mut rng_from_seed(seed), n, p)
}

/// A random Hamiltonian cycle plus each remaining pair with probability `extra_p`.
pub fn planted_with<R: Rng + ?Sized>(rng: &mut R, n: usize, extra_p: f64) -> Graph {
    assert!(n >= 3, "a planted cycle needs at least 3 vertices");
    assert!((0.0..=1.0).contains(&extra_p), "edge probability {extra_p} outside [0, 1]");
    let mut perm: Vec<Vertex> = (0..n).collect();
    perm.shuffle(rng);
    let mut g = Graph::empty(n);
    for i in 0..n {
        g.add_edge(perm[i], perm[(i + 1) % n]).expect("distinct cycle edges");
    }
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(extra_p) {
                g.add_edge(u, v).expect("fresh pair");
            }
        }
    }
    g
}

pub fn gen_planted_hamiltonian(n: usize, extra_p: f64, seed: u64) -> Graph {
    planted_with(&mut rng_from_seed(seed), n, extra_p)
}

/// The quad first, then the remaining vertices in random order.
pub fn shuffled_order<R: Rng + ?Sized>(rng: &mut R, n: usize, quad: [Vertex; 4]) -> Vec<Vertex> {
    let mut rest: Vec<Vertex> = (0..n).filter(|v| !quad.contains(v)).collect();
    rest.shuffle(rng);
    quad.into_iter().chain(rest).collect()
}

/// Canonical pairs of `0..n` in ascending order; bit `k` of a mask is pair `k`.
pub fn pair_list(n: usize) -> Vec<(Vertex, Vertex)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

pub fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs = pair_list(n);
    let mut g = Graph::empty(n);
    for (k, &(u, v)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 {
            g.add_edge(u, v).expect("fresh pair");
        }
    }
    g
}

fn mask_connected(n: usize, pairs: &[(Vertex, Vertex)], mask: u64) -> bool {
    let mut rows = [0u8; EXHAUSTIVE_MAX_N];
    for (k, &(u, v)) in pairs.iter().enumerate() {
        if mask >> k & 1 == 1 {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
    }
    let all = ((1u16 << n) - 1) as u8;
    let mut seen = 1u8;
    let mut frontier = 1u8;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let fresh = rows[v] & !seen;
        seen |= fresh;
        frontier |= fresh;
    }
    seen == all
}

/// Edge masks of every connected labeled graph on `n` vertices, ascending.
///
/// Panics above [`EXHAUSTIVE_MAX_N`].
pub fn connected_masks(n: usize) -> Vec<u64> {
    assert!(n <= EXHAUSTIVE_MAX_N, "exhaustive enumeration is limited to n <= {EXHAUSTIVE_MAX_N}");
    if n == 0 {
        return Vec::new();
    }
    let pairs = pair_list(n);
    (0..1u64 << pairs.len()).filter(|&m| mask_connected(n, &pairs, m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_value() {
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
        assert_eq!(trial_seed(7, 3), splitmix64(4));
    }

    #[test]
    fn gnp_extremes() {
        assert_eq!(gen_gnp(6, 0.0, 1), Graph::empty(6));
        assert_eq!(gen_gnp(6, 1.0, 1), Graph::complete(6));
        assert_eq!(gen_gnp(8, 0.5, 42), gen_gnp(8, 0.5, 42));
    }

    #[test]
    fn planted_extremes() {
        let g = gen_planted_hamiltonian(5, 0.0, 9);
        assert_eq!(g.edge_count(), 5);
        assert!((0..5).all(|v| g.degree(v) == 2));
        assert_eq!(gen_planted_hamiltonian(7, 1.0, 9), Graph::complete(7));
    }

    #[test]
    fn connected_counts() {
        // Connected labeled graphs: OEIS A001187.
        let counts: Vec<usize> = (1..=6).map(|n| connected_masks(n).len()).collect();
        assert_eq!(counts, [1, 1, 4, 38, 728, 26704]);
    }
}
