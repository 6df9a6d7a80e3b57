use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Named graph families. Only `Gnp` consumes the seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphFamily {
    /// Center `0`, leaves `1..n`.
    Star { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Edgeless { n: usize },
    Path { n: usize },
    Gnp { n: usize, p: f64 },
    /// `count` disjoint cliques of `size` vertices each; vertices of clique
    /// `c` are `c*size .. (c+1)*size`. Independence number is `count`.
    Cliques { count: usize, size: usize },
}

pub fn generate(family: &GraphFamily, seed: u64) -> Result<Graph> {
    match *family {
        GraphFamily::Star { n } => {
            let edges: Vec<_> = (1..n).map(|leaf| (0, leaf)).collect();
            Graph::new(n, &edges)
        }
        GraphFamily::Cycle { n } => {
            if n < 3 {
                return Err(Error::validation(format!("cycle needs n >= 3, got {n}")));
            }
            let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
            Graph::new(n, &edges)
        }
        GraphFamily::Complete { n } => {
            let edges: Vec<_> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            Graph::new(n, &edges)
        }
        GraphFamily::Edgeless { n } => Ok(Graph::edgeless(n)),
        GraphFamily::Path { n } => {
            let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            Graph::new(n, &edges)
        }
        GraphFamily::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::validation(format!(
                    "edge probability must lie in [0, 1], got {p}"
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(n, &edges)
        }
        GraphFamily::Cliques { count, size } => {
            if size == 0 {
                return Err(Error::validation("clique size must be positive"));
            }
            let mut edges = Vec::new();
            for c in 0..count {
                let base = c * size;
                for u in base..base + size {
                    for v in u + 1..base + size {
                        edges.push((u, v));
                    }
                }
            }
            Graph::new(count * size, &edges)
        }
    }
}
