//! Mirror-descent agents and feedback routing.
//!
//! Agents never see the active set: [`AgentState::update`] takes only the
//! loss, so paid and free feedback are indistinguishable to them.

use crate::error::{Error, Result};
use crate::geometry::{Geometry, Loss};
use crate::graph::{CliqueCover, Graph, Vertex};

/// One lazy mirror-descent instance.
#[derive(Debug, Clone, PartialEq)]
pub struct AgentState {
    /// Minus the sum of all observed gradients.
    theta: Vec<f64>,
    /// Number of feedbacks received so far.
    local_count: u64,
    eta: f64,
}

impl AgentState {
    pub fn new(dim: usize, eta: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::validation(format!("learning rate must be positive, got {eta}")));
        }
        Ok(AgentState {
            theta: vec![0.0; dim],
            local_count: 0,
            eta,
        })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn local_count(&self) -> u64 {
        self.local_count
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// The current prediction. It uses the regularizer indexed by
    /// `local_count + 1`, the index the next update will carry.
    pub fn predict(&self, geom: &Geometry) -> Result<Vec<f64>> {
        geom.mirror_map(&self.theta, self.eta, self.local_count + 1)
    }

    /// Applies one feedback: the gradient is taken at this agent's own
    /// current prediction.
    pub fn update(&mut self, loss: &Loss, geom: &Geometry) -> Result<()> {
        let owned;
        let gradient: &[f64] = match loss {
            Loss::LinearSimplex { coefficients: g } | Loss::LinearBall { gradient: g } => g,
            Loss::QuadraticBall { .. } => {
                owned = loss.gradient(&self.predict(geom)?)?;
                &owned
            }
        };
        if gradient.len() != self.theta.len() {
            return Err(Error::validation(format!(
                "gradient has dimension {}, agent has {}",
                gradient.len(),
                self.theta.len()
            )));
        }
        if let Some(i) = gradient.iter().position(|g| !g.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite gradient coordinate {i} ({}) after {} updates; theta = {:?}",
                gradient[i], self.local_count, self.theta
            )));
        }
        for (t, g) in self.theta.iter_mut().zip(gradient) {
            *t -= g;
        }
        self.local_count += 1;
        Ok(())
    }
}

/// How an agent decides which feedback to use.
#[derive(Debug, Clone, PartialEq)]
pub enum InterfacePolicy {
    /// Use every feedback received from any neighbor.
    Oblivious,
    /// Use only feedback originating inside the agent's own cover block.
    CliqueCover(CliqueCover),
}

impl InterfacePolicy {
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        match self {
            InterfacePolicy::Oblivious => Ok(()),
            InterfacePolicy::CliqueCover(cover) => {
                if cover.num_vertices() != g.n() {
                    return Err(Error::validation(format!(
                        "clique cover spans {} vertices, graph has {}",
                        cover.num_vertices(),
                        g.n()
                    )));
                }
                CliqueCover::new(g, cover.blocks().to_vec()).map(|_| ())
            }
        }
    }
}

/// Agents that update this round, ascending and without repetition.
pub fn feedback_recipients(
    g: &Graph,
    active: &[Vertex],
    policy: &InterfacePolicy,
) -> Result<Vec<Vertex>> {
    for &v in active {
        g.check_vertex(v)?;
    }
    match policy {
        InterfacePolicy::Oblivious => {
            let mut hit = vec![false; g.n()];
            for &v in active {
                hit[v] = true;
                for &w in g.neighbors(v) {
                    hit[w] = true;
                }
            }
            Ok((0..g.n()).filter(|&v| hit[v]).collect())
        }
        InterfacePolicy::CliqueCover(cover) => match active {
            [] => Ok(Vec::new()),
            [v] => Ok(cover.block_containing(*v).to_vec()),
            _ => Err(Error::Unsupported(format!(
                "clique-cover interface needs at most one active agent per round, got {}",
                active.len()
            ))),
        },
    }
}
