//! Clique covers, dominating sets, and the closed-neighborhood ratio bound.

use super::{independence_number_exact, Graph, Vertex};
use crate::error::{Error, Result};

/// Partition of the vertex set into cliques.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCover {
    blocks: Vec<Vec<Vertex>>,
    block_of: Vec<usize>,
}

impl CliqueCover {
    /// Validates that `blocks` partition `0..g.n()` into nonempty cliques.
    pub fn new(g: &Graph, blocks: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; g.n()];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::validation(format!("clique cover block {b} is empty")));
            }
            for &v in block {
                g.check_vertex(v)?;
                if block_of[v] != usize::MAX {
                    return Err(Error::validation(format!(
                        "vertex {v} appears in more than one block"
                    )));
                }
                block_of[v] = b;
            }
            if !g.is_clique(block) {
                return Err(Error::validation(format!("block {b} is not a clique")));
            }
        }
        if let Some(v) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::validation(format!("vertex {v} is not covered")));
        }
        Ok(CliqueCover { blocks, block_of })
    }

    pub fn blocks(&self) -> &[Vec<Vertex>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn num_vertices(&self) -> usize {
        self.block_of.len()
    }

    /// The block `K(v)` containing `v`.
    pub fn block_containing(&self, v: Vertex) -> &[Vertex] {
        &self.blocks[self.block_of[v]]
    }

    pub fn block_index(&self, v: Vertex) -> usize {
        self.block_of[v]
    }
}

/// Greedy clique cover: take the lowest uncovered vertex, then add every
/// higher uncovered vertex adjacent to all current members, in ascending order.
pub fn greedy_clique_cover(g: &Graph) -> CliqueCover {
    let n = g.n();
    let mut covered = vec![false; n];
    let mut blocks = Vec::new();
    for v in 0..n {
        if covered[v] {
            continue;
        }
        covered[v] = true;
        let mut block = vec![v];
        #[allow(clippy::needless_range_loop)]
        for w in v + 1..n {
            if !covered[w] && block.iter().all(|&u| g.are_adjacent(u, w)) {
                covered[w] = true;
                block.push(w);
            }
        }
        blocks.push(block);
    }
    CliqueCover::new(g, blocks).expect("greedy blocks are cliques partitioning V")
}

pub const EXACT_COVER_LIMIT: usize = 12;

/// Minimum clique cover size by dynamic programming over vertex subsets.
pub fn clique_cover_number_exact(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > EXACT_COVER_LIMIT {
        return Err(Error::TooLarge(format!(
            "exact clique cover limited to {EXACT_COVER_LIMIT} vertices, got {n}"
        )));
    }
    let rows = g.bit_rows();
    let full = (1usize << n) - 1;
    let is_clique: Vec<bool> = (0..=full)
        .map(|s| (0..n).all(|v| s & (1 << v) == 0 || (s & !(1 << v)) as u64 & !rows[v] == 0))
        .collect();
    let mut best = vec![usize::MAX; full + 1];
    best[0] = 0;
    for s in 1..=full {
        // Fix the lowest vertex inside the clique that covers it.
        let low = s & s.wrapping_neg();
        let rest = s & !low;
        let mut sub = rest;
        loop {
            let clique = sub | low;
            if is_clique[clique] && best[s & !clique] != usize::MAX {
                best[s] = best[s].min(best[s & !clique] + 1);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    Ok(best[full])
}

/// Greedy dominating set: repeatedly take the vertex whose closed
/// neighborhood covers the most undominated vertices (lowest index on ties).
pub fn greedy_dominating_set(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let mut dominated = vec![false; n];
    let mut remaining = n;
    let mut out = Vec::new();
    while remaining > 0 {
        let gain = |v: Vertex| {
            usize::from(!dominated[v]) + g.neighbors(v).iter().filter(|&&w| !dominated[w]).count()
        };
        let best = (0..n)
            .max_by_key(|&v| (gain(v), std::cmp::Reverse(v)))
            .expect("n > 0 while vertices remain");
        out.push(best);
        for w in std::iter::once(best).chain(g.neighbors(best).iter().copied()) {
            if !dominated[w] {
                dominated[w] = true;
                remaining -= 1;
            }
        }
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioBound {
    /// `Σ_v q_v / Q_v` with `Q_v` the closed-neighborhood mass.
    pub sum: f64,
    pub alpha: usize,
    pub holds: bool,
}

/// Evaluates `Σ_v q_v / Q_v` for a distribution `q` on the vertices, where
/// `Q_v = Σ_{w ∈ N_v} q_w`, and compares it with the exact independence
/// number.
pub fn verify_ratio_bound(g: &Graph, q: &[f64]) -> Result<RatioBound> {
    if q.len() != g.n() {
        return Err(Error::validation(format!(
            "distribution has {} entries for {} vertices",
            q.len(),
            g.n()
        )));
    }
    if q.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::validation("distribution entries must be finite and nonnegative"));
    }
    let total: f64 = q.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::validation(format!("distribution sums to {total}, not 1")));
    }
    let mut sum = 0.0;
    for v in 0..g.n() {
        let mass = q[v] + g.neighbors(v).iter().map(|&w| q[w]).sum::<f64>();
        if mass <= 0.0 {
            return Err(Error::Precondition(format!(
                "vertex {v} has zero closed-neighborhood mass"
            )));
        }
        sum += q[v] / mass;
    }
    let alpha = independence_number_exact(g)?;
    Ok(RatioBound {
        sum,
        alpha,
        holds: sum <= alpha as f64 + 1e-9,
    })
}
