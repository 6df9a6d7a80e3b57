//! The round protocol and network-regret accounting.
//!
//! Each round: the environment emits `(S_t, ℓ_t)`; every active agent
//! predicts from its pre-round state; the system pays the average loss of
//! the active agents (zero when `S_t` is empty); then every feedback
//! recipient applies one update.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::agent::{feedback_recipients, AgentState, InterfacePolicy};
use crate::environment::{Environment, Round};
use crate::error::{Error, Result};
use crate::geometry::{dot, l2, Geometry, Loss};
use crate::graph::{Graph, Vertex};
use crate::rng::replicate_seed;

/// Everything a run needs besides the environment.
#[derive(Debug, Clone, Copy)]
pub struct Setup<'a> {
    pub graph: &'a Graph,
    pub geometry: &'a Geometry,
    pub policy: &'a InterfacePolicy,
    pub eta: f64,
}

impl Setup<'_> {
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.policy.check_graph(self.graph)?;
        if !(self.eta > 0.0) || !self.eta.is_finite() {
            return Err(Error::validation(format!(
                "learning rate must be positive, got {}",
                self.eta
            )));
        }
        Ok(())
    }
}

/// What happened in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// 1-based round index.
    pub t: usize,
    pub active: Vec<Vertex>,
    /// `ℓ_t(x_t(v))` for each active agent, in the order of `active`.
    pub active_losses: Vec<f64>,
    pub system_loss: f64,
    pub recipients: Vec<Vertex>,
    pub loss: Loss,
}

/// The agents of one run.
#[derive(Debug, Clone)]
pub struct Network<'a> {
    setup: Setup<'a>,
    agents: Vec<AgentState>,
    round: usize,
}

impl<'a> Network<'a> {
    pub fn new(setup: Setup<'a>) -> Result<Self> {
        setup.validate()?;
        let dim = setup.geometry.dim();
        let agents = (0..setup.graph.n())
            .map(|_| AgentState::new(dim, setup.eta))
            .collect::<Result<_>>()?;
        Ok(Network {
            setup,
            agents,
            round: 0,
        })
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn predict(&self, v: Vertex) -> Result<Vec<f64>> {
        self.agents[v].predict(self.setup.geometry)
    }

    /// Plays one round.
    pub fn step(&mut self, round: Round) -> Result<RoundRecord> {
        self.round += 1;
        let t = self.round;
        self.play(round).map_err(|e| e.at_round(t))
    }

    fn play(&mut self, round: Round) -> Result<RoundRecord> {
        let Setup {
            graph,
            geometry,
            policy,
            ..
        } = self.setup;
        round.loss.check_compatible(geometry)?;
        let mut active = round.active;
        active.sort_unstable();
        active.dedup();

        // Predictions and losses come from pre-round states.
        let mut active_losses = Vec::with_capacity(active.len());
        for &v in &active {
            graph.check_vertex(v)?;
            let x = self.agents[v].predict(geometry)?;
            active_losses.push(round.loss.value(&x)?);
        }
        let system_loss = if active.is_empty() {
            0.0
        } else {
            active_losses.iter().sum::<f64>() / active.len() as f64
        };

        let recipients = feedback_recipients(graph, &active, policy)?;
        for &v in &recipients {
            self.agents[v].update(&round.loss, geometry)?;
        }
        if cfg!(debug_assertions) {
            if let InterfacePolicy::CliqueCover(_) = policy {
                self.check_clique_coherence()?;
            }
        }
        Ok(RoundRecord {
            t: self.round,
            active,
            active_losses,
            system_loss,
            recipients,
            loss: round.loss,
        })
    }

    /// Under the clique-cover interface, agents of one block share
    /// `(θ, local_count)` exactly.
    pub fn check_clique_coherence(&self) -> Result<()> {
        let InterfacePolicy::CliqueCover(cover) = self.setup.policy else {
            return Ok(());
        };
        for block in cover.blocks() {
            let first = &self.agents[block[0]];
            if let Some(&v) = block[1..].iter().find(|&&v| self.agents[v] != *first) {
                return Err(Error::Numeric(format!(
                    "agents {} and {v} of one cover block diverged",
                    block[0]
                )));
            }
        }
        Ok(())
    }
}

/// Sufficient statistics of a loss sequence for evaluating `Σ_t ℓ_t(x)`.
///
/// With linear parts summing to `G`, and `k` quadratic parts with targets
/// summing to `S` and `Σ ½‖target‖² = c`, the total is
/// `(k/2)‖x‖² + ⟨G − S, x⟩ + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTotals {
    linear: Vec<f64>,
    quad_count: u64,
    quad_targets: Vec<f64>,
    quad_const: f64,
}

impl LossTotals {
    pub fn new(dim: usize) -> Self {
        LossTotals {
            linear: vec![0.0; dim],
            quad_count: 0,
            quad_targets: vec![0.0; dim],
            quad_const: 0.0,
        }
    }

    pub fn add(&mut self, loss: &Loss) {
        match loss {
            Loss::LinearSimplex { coefficients: c } | Loss::LinearBall { gradient: c } => {
                for (s, v) in self.linear.iter_mut().zip(c) {
                    *s += v;
                }
            }
            Loss::QuadraticBall { target } => {
                self.quad_count += 1;
                for (s, v) in self.quad_targets.iter_mut().zip(target) {
                    *s += v;
                }
                self.quad_const += 0.5 * dot(target, target);
            }
        }
    }

    pub fn value_at(&self, x: &[f64]) -> f64 {
        let k = self.quad_count as f64;
        let lin: f64 = (0..x.len())
            .map(|i| (self.linear[i] - self.quad_targets[i]) * x[i])
            .sum();
        0.5 * k * dot(x, x) + lin + self.quad_const
    }

    /// `inf_{x ∈ X} Σ_t ℓ_t(x)` and a minimizer, in closed form.
    pub fn minimum(&self, geom: &Geometry) -> (f64, Vec<f64>) {
        match *geom {
            Geometry::Simplex { dim } => {
                let (i, _) = self
                    .linear
                    .iter()
                    .enumerate()
                    .fold((0, f64::INFINITY), |best, (i, &v)| if v < best.1 { (i, v) } else { best });
                let mut x = vec![0.0; dim];
                x[i] = 1.0;
                (self.value_at(&x), x)
            }
            Geometry::Ball { radius, .. } => {
                let x = if self.quad_count == 0 {
                    let norm = l2(&self.linear);
                    if norm == 0.0 {
                        vec![0.0; self.linear.len()]
                    } else {
                        self.linear.iter().map(|g| -radius * g / norm).collect()
                    }
                } else {
                    let k = self.quad_count as f64;
                    let mut x: Vec<f64> = self
                        .quad_targets
                        .iter()
                        .zip(&self.linear)
                        .map(|(s, g)| (s - g) / k)
                        .collect();
                    Geometry::project_ball(radius, &mut x);
                    x
                };
                (self.value_at(&x), x)
            }
        }
    }
}

/// Comparator against which regret is measured.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Comparator {
    /// The best fixed decision in hindsight over all rounds.
    #[default]
    Best,
    /// The environment's good action (a simplex vertex).
    GoodAction,
    /// A given point of the decision set.
    Point(Vec<f64>),
}

/// Totals of a finished run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub horizon: usize,
    pub system_loss: f64,
    pub comparator_loss: f64,
    pub regret: f64,
}

/// Per-round record of a run plus its metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub seed: u64,
    pub eta: f64,
    pub good_action: Option<usize>,
    pub rounds: Vec<RoundRecord>,
    /// Running sum of system losses.
    pub cumulative: Vec<f64>,
}

impl SimulationTrace {
    pub fn horizon(&self) -> usize {
        self.rounds.len()
    }

    pub fn total_loss(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    pub fn loss_totals(&self, dim: usize) -> LossTotals {
        let mut totals = LossTotals::new(dim);
        for r in &self.rounds {
            totals.add(&r.loss);
        }
        totals
    }

    /// `t,active_set,system_loss,cumulative_loss,num_recipients`, one row
    /// per round; active sets are semicolon-joined.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,active_set,system_loss,cumulative_loss,num_recipients\n");
        for (r, cum) in self.rounds.iter().zip(&self.cumulative) {
            let set: Vec<String> = r.active.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.t,
                set.join(";"),
                r.system_loss,
                cum,
                r.recipients.len()
            );
        }
        out
    }
}

/// Runs `horizon` rounds and keeps every round.
pub fn run_simulation(
    setup: Setup<'_>,
    env: &mut Environment,
    horizon: usize,
    seed: u64,
) -> Result<SimulationTrace> {
    let mut net = Network::new(setup)?;
    check_environment(&setup, env, horizon)?;
    let mut rounds = Vec::with_capacity(horizon);
    let mut cumulative = Vec::with_capacity(horizon);
    let mut total = 0.0;
    for t in 1..=horizon {
        let round = env.next_round().map_err(|e| e.at_round(t))?;
        let record = net.step(round)?;
        total += record.system_loss;
        cumulative.push(total);
        rounds.push(record);
    }
    Ok(SimulationTrace {
        seed,
        eta: setup.eta,
        good_action: env.good_action(),
        rounds,
        cumulative,
    })
}

/// Runs `horizon` rounds keeping only the totals needed for regret.
pub fn run_regret(
    setup: Setup<'_>,
    env: &mut Environment,
    horizon: usize,
    comparator: &Comparator,
) -> Result<RunSummary> {
    let mut net = Network::new(setup)?;
    check_environment(&setup, env, horizon)?;
    let mut totals = LossTotals::new(setup.geometry.dim());
    let mut system_loss = 0.0;
    for t in 1..=horizon {
        let round = env.next_round().map_err(|e| e.at_round(t))?;
        totals.add(&round.loss);
        system_loss += net.step(round)?.system_loss;
    }
    let comparator_loss = comparator_loss(&totals, setup.geometry, comparator, env.good_action())?;
    Ok(RunSummary {
        horizon,
        system_loss,
        comparator_loss,
        regret: system_loss - comparator_loss,
    })
}

fn check_environment(setup: &Setup<'_>, env: &Environment, horizon: usize) -> Result<()> {
    if let InterfacePolicy::CliqueCover(_) = setup.policy {
        if !env.at_most_one_active() {
            return Err(Error::Unsupported(
                "clique-cover interface requires single-activation environments".into(),
            ));
        }
    }
    if let Some(avail) = env.rounds_available() {
        if avail < horizon {
            return Err(Error::validation(format!(
                "environment provides {avail} rounds, horizon is {horizon}"
            )));
        }
    }
    Ok(())
}

/// Loss of the comparator over the full realized sequence (rounds with
/// `S_t = ∅` included).
pub fn comparator_loss(
    totals: &LossTotals,
    geom: &Geometry,
    comparator: &Comparator,
    good_action: Option<usize>,
) -> Result<f64> {
    match comparator {
        Comparator::Best => Ok(totals.minimum(geom).0),
        Comparator::GoodAction => {
            let j = good_action.ok_or_else(|| {
                Error::Unsupported("environment has no good action to compare against".into())
            })?;
            let Geometry::Simplex { dim } = *geom else {
                return Err(Error::Unsupported("good-action comparator needs the simplex".into()));
            };
            let mut x = vec![0.0; dim];
            x[j] = 1.0;
            Ok(totals.value_at(&x))
        }
        Comparator::Point(x) => {
            if !geom.contains(x, 1e-9) {
                return Err(Error::validation(format!("comparator {x:?} is outside the decision set")));
            }
            Ok(totals.value_at(x))
        }
    }
}

/// Regret of a recorded trace.
pub fn network_regret(
    trace: &SimulationTrace,
    geom: &Geometry,
    comparator: &Comparator,
) -> Result<RunSummary> {
    let totals = trace.loss_totals(geom.dim());
    let comparator_loss = comparator_loss(&totals, geom, comparator, trace.good_action)?;
    let system_loss = trace.total_loss();
    Ok(RunSummary {
        horizon: trace.horizon(),
        system_loss,
        comparator_loss,
        regret: system_loss - comparator_loss,
    })
}

/// Aggregate over independent replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub master_seed: u64,
    pub runs: Vec<RunSummary>,
    pub mean: f64,
    /// Standard error of the mean (sample standard deviation over `√n`).
    pub std_error: f64,
    pub min: f64,
    pub max: f64,
}

impl MonteCarloSummary {
    pub fn regrets(&self) -> Vec<f64> {
        self.runs.iter().map(|r| r.regret).collect()
    }
}

/// Runs `replicates` copies of `run`, replicate `r` receiving
/// `replicate_seed(master_seed, r)`. Replicates run in parallel; results are
/// gathered in replicate order so the summary does not depend on scheduling.
pub fn monte_carlo<F>(replicates: usize, master_seed: u64, run: F) -> Result<MonteCarloSummary>
where
    F: Fn(u64) -> Result<RunSummary> + Sync,
{
    if replicates == 0 {
        return Err(Error::validation("at least one replicate is required"));
    }
    let runs: Vec<RunSummary> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            run(replicate_seed(master_seed, r as u64)).map_err(|e| Error::AtReplicate {
                replicate: r,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;
    let regrets: Vec<f64> = runs.iter().map(|r| r.regret).collect();
    let (mean, std_error) = mean_and_se(&regrets);
    Ok(MonteCarloSummary {
        master_seed,
        mean,
        std_error,
        min: regrets.iter().cloned().fold(f64::INFINITY, f64::min),
        max: regrets.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        runs,
    })
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Mean and standard error of the mean; the error is zero for one sample.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = compensated_sum(values.iter().copied()) / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = compensated_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::{ActivationModel, LossModel};
    use crate::graph::{generate, greedy_clique_cover, GraphFamily};

    fn lin(c: &[f64]) -> Loss {
        Loss::linear_simplex(c.to_vec()).unwrap()
    }

    #[test]
    fn simplex_comparator() {
        let geom = Geometry::Simplex { dim: 2 };
        let mut t = LossTotals::new(2);
        for _ in 0..10 {
            t.add(&lin(&[0.0, 1.0]));
        }
        assert_eq!(t.minimum(&geom).0, 0.0);
        let mut t = LossTotals::new(2);
        t.add(&Loss::LinearSimplex { coefficients: vec![7.0, 4.0] });
        assert_eq!(t.minimum(&geom), (4.0, vec![0.0, 1.0]));
    }

    #[test]
    fn ball_linear_comparator() {
        let geom = Geometry::Ball { dim: 2, radius: 1.0 };
        let mut t = LossTotals::new(2);
        t.add(&Loss::LinearBall { gradient: vec![1.0, 1.0] });
        t.add(&Loss::LinearBall { gradient: vec![2.0, 3.0] });
        let (v, x) = t.minimum(&geom);
        assert!((v + 5.0).abs() < 1e-12);
        assert!((x[0] + 0.6).abs() < 1e-12 && (x[1] + 0.8).abs() < 1e-12);
    }

    /// Projected gradient descent with restarts as an independent oracle for
    /// mixed linear/quadratic sequences on the ball.
    #[test]
    fn ball_mixed_comparator_matches_projected_gradient() {
        let geom = Geometry::Ball { dim: 3, radius: 0.8 };
        let losses = vec![
            Loss::QuadraticBall { target: vec![1.0, 0.2, -0.3] },
            Loss::LinearBall { gradient: vec![-0.5, 0.4, 0.1] },
            Loss::QuadraticBall { target: vec![0.9, -0.7, 0.6] },
            Loss::LinearBall { gradient: vec![0.3, 0.3, -0.9] },
            Loss::QuadraticBall { target: vec![2.0, 1.0, 0.0] },
        ];
        let mut totals = LossTotals::new(3);
        for l in &losses {
            totals.add(l);
        }
        let (closed, _) = totals.minimum(&geom);

        let f = |x: &[f64]| losses.iter().map(|l| l.value(x).unwrap()).sum::<f64>();
        let grad = |x: &[f64]| {
            let mut g = vec![0.0; 3];
            for l in &losses {
                for (gi, v) in g.iter_mut().zip(l.gradient(x).unwrap()) {
                    *gi += v;
                }
            }
            g
        };
        let starts = [[0.0, 0.0, 0.0], [0.8, 0.0, 0.0], [0.0, -0.8, 0.0], [-0.4, 0.4, 0.4]];
        for start in starts {
            let mut x = start.to_vec();
            for _ in 0..20_000 {
                let g = grad(&x);
                for (xi, gi) in x.iter_mut().zip(&g) {
                    *xi -= 0.05 * gi;
                }
                Geometry::project_ball(0.8, &mut x);
            }
            assert!((f(&x) - closed).abs() < 1e-9, "{} vs {closed}", f(&x));
        }
    }

    fn setup_parts(n: usize) -> (Graph, Geometry, InterfacePolicy) {
        (
            generate(&GraphFamily::Star { n }, 0).unwrap(),
            Geometry::Simplex { dim: 2 },
            InterfacePolicy::Oblivious,
        )
    }

    #[test]
    fn zero_horizon() {
        let (g, geom, policy) = setup_parts(4);
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 1.0 };
        let mut env = Environment::star_adversary(4, 0.5, 0).unwrap();
        let trace = run_simulation(setup, &mut env, 0, 0).unwrap();
        assert!(trace.rounds.is_empty());
        let r = network_regret(&trace, &geom, &Comparator::Best).unwrap();
        assert_eq!(r.regret, 0.0);
    }

    #[test]
    fn single_round_regret() {
        let g = Graph::edgeless(1);
        let geom = Geometry::Simplex { dim: 2 };
        let policy = InterfacePolicy::Oblivious;
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 1.0 };
        let mut env = Environment::composed(
            ActivationModel::Schedule(vec![vec![0]]),
            LossModel::Replay(vec![lin(&[0.0, 1.0])]),
            1,
            0,
        )
        .unwrap();
        let trace = run_simulation(setup, &mut env, 1, 0).unwrap();
        let r = network_regret(&trace, &geom, &Comparator::Best).unwrap();
        assert_eq!(r.regret, 0.5);
    }

    #[test]
    fn empty_rounds_cost_nothing() {
        let (g, geom, policy) = setup_parts(5);
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 1.0 };
        let mut env = Environment::composed(
            ActivationModel::Schedule(vec![vec![]; 20]),
            LossModel::Cycle(vec![lin(&[1.0, 0.0]), lin(&[0.0, 1.0])]),
            5,
            0,
        )
        .unwrap();
        let trace = run_simulation(setup, &mut env, 20, 0).unwrap();
        assert!(trace.rounds.iter().all(|r| r.system_loss == 0.0 && r.recipients.is_empty()));
        // comparator still sees all 20 rounds
        let r = network_regret(&trace, &geom, &Comparator::Best).unwrap();
        assert_eq!(r.comparator_loss, 10.0);
        assert_eq!(r.regret, -10.0);
    }

    #[test]
    fn zero_losses_zero_regret() {
        let (g, geom, policy) = setup_parts(6);
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 0.8 };
        let mut env = Environment::composed(
            ActivationModel::MultiStochastic(vec![0.4; 6]),
            LossModel::Cycle(vec![lin(&[0.0, 0.0])]),
            6,
            3,
        )
        .unwrap();
        let r = run_regret(setup, &mut env, 500, &Comparator::Best).unwrap();
        assert_eq!(r.regret, 0.0);
    }

    #[test]
    fn trace_decomposition_and_range() {
        let g = generate(&GraphFamily::Gnp { n: 9, p: 0.3 }, 1).unwrap();
        let geom = Geometry::Simplex { dim: 3 };
        let policy = InterfacePolicy::Oblivious;
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 0.9 };
        let mut env = Environment::composed(
            ActivationModel::MultiStochastic(vec![0.25; 9]),
            LossModel::Bernoulli { means: vec![0.3, 0.5, 0.7] },
            9,
            8,
        )
        .unwrap();
        let trace = run_simulation(setup, &mut env, 2000, 8).unwrap();
        let mut recomputed = 0.0;
        for r in &trace.rounds {
            if !r.active.is_empty() {
                recomputed += r.active_losses.iter().sum::<f64>() / r.active.len() as f64;
            }
        }
        assert!((recomputed - trace.total_loss()).abs() <= 1e-10);
        let rep = network_regret(&trace, &geom, &Comparator::Best).unwrap();
        assert!(rep.regret <= trace.horizon() as f64);
        assert!(rep.regret >= -rep.comparator_loss);

        // the light runner agrees with the trace
        let mut env2 = Environment::composed(
            ActivationModel::MultiStochastic(vec![0.25; 9]),
            LossModel::Bernoulli { means: vec![0.3, 0.5, 0.7] },
            9,
            8,
        )
        .unwrap();
        let light = run_regret(setup, &mut env2, 2000, &Comparator::Best).unwrap();
        assert_eq!(light, rep);
    }

    #[test]
    fn clique_cover_rejects_multi_activation() {
        let g = generate(&GraphFamily::Cycle { n: 6 }, 0).unwrap();
        let geom = Geometry::Simplex { dim: 2 };
        let policy = InterfacePolicy::CliqueCover(greedy_clique_cover(&g));
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 1.0 };
        let mut env = Environment::composed(
            ActivationModel::MultiStochastic(vec![0.5; 6]),
            LossModel::Bernoulli { means: vec![0.5, 0.5] },
            6,
            0,
        )
        .unwrap();
        assert!(matches!(
            run_regret(setup, &mut env, 10, &Comparator::Best),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn errors_carry_round_index() {
        let g = Graph::edgeless(2);
        let geom = Geometry::Simplex { dim: 2 };
        let policy = InterfacePolicy::Oblivious;
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 1.0 };
        let mut env = Environment::composed(
            ActivationModel::Schedule(vec![vec![0], vec![1], vec![0]]),
            LossModel::Replay(vec![lin(&[0.0, 1.0]), lin(&[0.0, 1.0]), Loss::LinearSimplex { coefficients: vec![0.0] }]),
            2,
            0,
        )
        .unwrap();
        match run_simulation(setup, &mut env, 3, 0) {
            Err(Error::AtRound { round: 3, .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn good_action_comparator() {
        let (g, geom, policy) = setup_parts(10);
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 1.0 };
        let mut env = Environment::star_adversary(10, 0.5, 4).unwrap();
        let r = run_regret(setup, &mut env, 100, &Comparator::GoodAction).unwrap();
        assert!(r.comparator_loss <= 100.0);
        let mut env = Environment::composed(
            ActivationModel::SingleStochastic(vec![0.1; 10]),
            LossModel::Bernoulli { means: vec![0.5, 0.5] },
            10,
            0,
        )
        .unwrap();
        assert!(run_regret(setup, &mut env, 10, &Comparator::GoodAction).is_err());
    }

    #[test]
    fn monte_carlo_basics() {
        let (g, geom, policy) = setup_parts(5);
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 1.0 };
        let run = |seed: u64| {
            let mut env = Environment::star_adversary(5, 0.5, seed)?;
            run_regret(setup, &mut env, 300, &Comparator::GoodAction)
        };
        let one = monte_carlo(1, 77, run).unwrap();
        assert_eq!(one.std_error, 0.0);
        assert_eq!(one.runs[0], run(replicate_seed(77, 0)).unwrap());
        let a = monte_carlo(16, 77, run).unwrap();
        let b = monte_carlo(16, 77, run).unwrap();
        assert_eq!(a, b);
        assert!(monte_carlo(0, 77, run).is_err());

        // point-mass activation with a fixed loss has no variance
        let fixed = |seed: u64| {
            let mut env = Environment::composed(
                ActivationModel::SingleStochastic(vec![0.0, 1.0, 0.0, 0.0, 0.0]),
                LossModel::Cycle(vec![lin(&[0.2, 0.9])]),
                5,
                seed,
            )?;
            run_regret(setup, &mut env, 200, &Comparator::Best)
        };
        let s = monte_carlo(10, 1, fixed).unwrap();
        assert_eq!(s.std_error, 0.0);
        assert_eq!(s.min, s.max);
    }

    #[test]
    fn failing_replicate_is_named() {
        let err = monte_carlo(4, 0, |seed| {
            if seed == replicate_seed(0, 2) {
                Err(Error::validation("boom"))
            } else {
                Ok(RunSummary { horizon: 0, system_loss: 0.0, comparator_loss: 0.0, regret: 0.0 })
            }
        })
        .unwrap_err();
        assert!(matches!(err, Error::AtReplicate { replicate: 2, .. }));
    }

    #[test]
    fn stats_helpers() {
        let (m, se) = mean_and_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(compensated_sum([1e16, 1.0, -1e16]), 1.0);
    }

    #[test]
    fn trace_csv_format() {
        let g = Graph::edgeless(3);
        let geom = Geometry::Simplex { dim: 2 };
        let policy = InterfacePolicy::Oblivious;
        let setup = Setup { graph: &g, geometry: &geom, policy: &policy, eta: 1.0 };
        let mut env = Environment::composed(
            ActivationModel::Schedule(vec![vec![0, 2], vec![]]),
            LossModel::Replay(vec![lin(&[0.0, 1.0]), lin(&[1.0, 1.0])]),
            3,
            0,
        )
        .unwrap();
        let trace = run_simulation(setup, &mut env, 2, 0).unwrap();
        assert_eq!(
            trace.to_csv(),
            "t,active_set,system_loss,cumulative_loss,num_recipients\n1,0;2,0.5,0.5,2\n2,,0,0.5,0\n"
        );
    }
}
