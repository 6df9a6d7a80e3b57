//! Independent sets: exact maximum by branch and bound, greedy maximal.

use super::{Graph, Vertex};
use crate::error::{Error, Result};

/// Largest graph accepted by the exact solver unless a limit is passed
/// explicitly.
pub const DEFAULT_EXACT_LIMIT: usize = 40;

/// Bitmask representation caps the exact solver regardless of the limit.
const HARD_LIMIT: usize = 64;

/// Independence number `α_G`, exact. Refuses graphs above
/// [`DEFAULT_EXACT_LIMIT`] vertices.
pub fn independence_number_exact(g: &Graph) -> Result<usize> {
    maximum_independent_set_exact(g, DEFAULT_EXACT_LIMIT).map(|s| s.len())
}

/// A maximum independent set, found by branch and bound. The bound at each
/// node is a greedy partition of the remaining candidates into cliques: an
/// independent set takes at most one vertex per clique.
pub fn maximum_independent_set_exact(g: &Graph, limit: usize) -> Result<Vec<Vertex>> {
    let limit = limit.min(HARD_LIMIT);
    if g.n() > limit {
        return Err(Error::ExactLimit { n: g.n(), limit });
    }
    if g.n() == 0 {
        return Ok(Vec::new());
    }
    let open = g.bit_rows();
    let closed: Vec<u64> = open.iter().enumerate().map(|(v, m)| m | (1 << v)).collect();

    let mut search = Search {
        open: &open,
        closed: &closed,
        best: 0,
        best_size: 0,
    };
    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    search.expand(0, 0, all);
    Ok(bits(search.best))
}

struct Search<'a> {
    open: &'a [u64],
    closed: &'a [u64],
    best: u64,
    best_size: u32,
}

impl Search<'_> {
    fn expand(&mut self, chosen: u64, size: u32, mut cand: u64) {
        if cand == 0 {
            if size > self.best_size {
                self.best = chosen;
                self.best_size = size;
            }
            return;
        }
        let (order, bound) = self.clique_partition(cand);
        for i in (0..order.len()).rev() {
            // order[..=i] is covered by bound[i] cliques.
            if size + bound[i] <= self.best_size {
                return;
            }
            let v = order[i];
            self.expand(chosen | (1 << v), size + 1, cand & !self.closed[v]);
            cand &= !(1 << v);
        }
    }

    /// Greedy clique partition of `cand` in ascending vertex order. Returns the
    /// vertices grouped by clique and, per vertex, the index (1-based) of its
    /// clique.
    fn clique_partition(&self, cand: u64) -> (Vec<usize>, Vec<u32>) {
        let mut order = Vec::with_capacity(cand.count_ones() as usize);
        let mut bound = Vec::with_capacity(order.capacity());
        let mut rest = cand;
        let mut k = 0;
        while rest != 0 {
            k += 1;
            let mut open = rest;
            while open != 0 {
                let v = open.trailing_zeros() as usize;
                open &= self.open[v];
                rest &= !(1 << v);
                order.push(v);
                bound.push(k);
            }
        }
        (order, bound)
    }
}

fn bits(mut mask: u64) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Greedy maximal independent set, scanning vertices in ascending order.
pub fn maximal_independent_set(g: &Graph) -> Vec<Vertex> {
    let mut blocked = vec![false; g.n()];
    let mut out = Vec::new();
    for v in 0..g.n() {
        if blocked[v] {
            continue;
        }
        out.push(v);
        for &w in g.neighbors(v) {
            blocked[w] = true;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};
    use proptest::prelude::*;

    /// Exhaustive oracle over all subsets.
    fn alpha_brute(g: &Graph) -> usize {
        let n = g.n();
        let rows = g.bit_rows();
        (0u64..1 << n)
            .filter(|&s| (0..n).all(|v| s & (1 << v) == 0 || rows[v] & s == 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    fn fam(f: GraphFamily) -> Graph {
        generate(&f, 0).unwrap()
    }

    #[test]
    fn named_graphs() {
        assert_eq!(independence_number_exact(&fam(GraphFamily::Complete { n: 5 })), Ok(1));
        assert_eq!(independence_number_exact(&fam(GraphFamily::Edgeless { n: 7 })), Ok(7));
        let c5 = fam(GraphFamily::Cycle { n: 5 });
        assert_eq!(alpha_brute(&c5), 2);
        assert_eq!(independence_number_exact(&c5), Ok(2));
        assert_eq!(independence_number_exact(&fam(GraphFamily::Star { n: 10 })), Ok(9));
        assert_eq!(independence_number_exact(&Graph::edgeless(0)), Ok(0));
    }

    #[test]
    fn refuses_above_limit() {
        let g = Graph::edgeless(41);
        assert_eq!(
            independence_number_exact(&g),
            Err(Error::ExactLimit { n: 41, limit: 40 })
        );
        assert_eq!(maximum_independent_set_exact(&g, 64).unwrap().len(), 41);
        assert!(maximum_independent_set_exact(&Graph::edgeless(65), 100).is_err());
    }

    #[test]
    fn large_sparse_graph_within_limit() {
        let g = generate(&GraphFamily::Gnp { n: 40, p: 0.15 }, 5).unwrap();
        let set = maximum_independent_set_exact(&g, 40).unwrap();
        assert!(g.is_independent(&set));
        assert!(set.len() >= maximal_independent_set(&g).len());
    }

    #[test]
    fn maximal_examples() {
        assert_eq!(maximal_independent_set(&fam(GraphFamily::Star { n: 4 })), vec![0]);
        assert_eq!(maximal_independent_set(&Graph::edgeless(3)), vec![0, 1, 2]);
        assert_eq!(maximal_independent_set(&fam(GraphFamily::Complete { n: 4 })), vec![0]);
        assert_eq!(
            maximal_independent_set(&fam(GraphFamily::Cliques { count: 3, size: 4 })),
            vec![0, 4, 8]
        );
    }

    proptest! {
        #[test]
        fn exact_matches_brute_force(n in 0usize..=16, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = generate(&GraphFamily::Gnp { n, p }, seed).unwrap();
            let set = maximum_independent_set_exact(&g, DEFAULT_EXACT_LIMIT).unwrap();
            prop_assert!(g.is_independent(&set));
            prop_assert_eq!(set.len(), alpha_brute(&g));
        }

        #[test]
        fn maximal_is_independent_and_maximal(n in 0usize..=30, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = generate(&GraphFamily::Gnp { n, p }, seed).unwrap();
            let set = maximal_independent_set(&g);
            prop_assert!(g.is_independent(&set));
            for v in 0..n {
                if !set.contains(&v) {
                    prop_assert!(set.iter().any(|&u| g.are_adjacent(u, v)));
                }
            }
        }
    }
}
