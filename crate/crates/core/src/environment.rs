//! Generators of the round sequence `(S_t, ℓ_t)`.
//!
//! Every environment owns its random stream, so a run is reproducible from
//! the seed it was built with. Draw order within a round is fixed: the
//! activation first, then the loss.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::Loss;
use crate::graph::{maximal_independent_set, Graph, Vertex};
use crate::rng::{stream, SimRng};

/// One round as produced by an environment.
#[derive(Debug, Clone, PartialEq)]
pub struct Round {
    pub active: Vec<Vertex>,
    pub loss: Loss,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ActivationModel {
    /// Exactly one agent per round, drawn from the distribution `q`.
    SingleStochastic(Vec<f64>),
    /// Each agent active independently with its own probability.
    MultiStochastic(Vec<f64>),
    /// Explicit active sets, replayed in order.
    Schedule(Vec<Vec<Vertex>>),
}

impl ActivationModel {
    fn validate(&self, n: usize) -> Result<()> {
        match self {
            ActivationModel::SingleStochastic(q) => {
                check_len(q.len(), n)?;
                check_distribution(q)
            }
            ActivationModel::MultiStochastic(q) => {
                check_len(q.len(), n)?;
                check_probabilities(q)
            }
            ActivationModel::Schedule(sets) => {
                for set in sets {
                    if let Some(&v) = set.iter().find(|&&v| v >= n) {
                        return Err(Error::VertexOutOfRange { vertex: v, n });
                    }
                }
                Ok(())
            }
        }
    }
}

fn check_len(len: usize, n: usize) -> Result<()> {
    if len == n {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "activation vector has {len} entries for {n} agents"
        )))
    }
}

fn check_probabilities(q: &[f64]) -> Result<()> {
    match q.iter().position(|p| !(0.0..=1.0).contains(p)) {
        Some(i) => Err(Error::validation(format!(
            "activation probability q[{i}] = {} outside [0, 1]",
            q[i]
        ))),
        None => Ok(()),
    }
}

fn check_distribution(q: &[f64]) -> Result<()> {
    check_probabilities(q)?;
    let total: f64 = q.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::validation(format!(
            "activation distribution sums to {total}, not 1"
        )));
    }
    Ok(())
}

/// Draws one vertex with probability `q[v]`.
pub fn draw_single<R: Rng + ?Sized>(q: &[f64], rng: &mut R) -> Result<Vertex> {
    check_distribution(q)?;
    Ok(sample_index(q, rng))
}

fn sample_index<R: Rng + ?Sized>(q: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (v, &p) in q.iter().enumerate() {
        acc += p;
        if u < acc {
            return v;
        }
    }
    // Rounding left `u` above the accumulated mass.
    q.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Independent Bernoulli activation of every vertex.
pub fn draw_multi<R: Rng + ?Sized>(q: &[f64], rng: &mut R) -> Result<Vec<Vertex>> {
    check_probabilities(q)?;
    Ok(sample_bernoulli_set(q, rng))
}

fn sample_bernoulli_set<R: Rng + ?Sized>(q: &[f64], rng: &mut R) -> Vec<Vertex> {
    q.iter()
        .enumerate()
        .filter_map(|(v, &p)| rng.random_bool(p).then_some(v))
        .collect()
}

/// Loss generators for composed environments.
#[derive(Debug, Clone, PartialEq)]
pub enum LossModel {
    /// Linear simplex losses with independent Bernoulli coordinates.
    Bernoulli { means: Vec<f64> },
    /// Bernoulli coordinates with mean `1/2`, except a hidden good action
    /// (drawn uniformly once per environment) with mean `1/2 − gap`.
    HiddenGap { dim: usize, gap: f64 },
    /// A fixed loss sequence repeated cyclically.
    Cycle(Vec<Loss>),
    /// A finite recorded sequence.
    Replay(Vec<Loss>),
}

impl LossModel {
    fn validate(&self) -> Result<()> {
        match self {
            LossModel::Bernoulli { means } => {
                if means.is_empty() {
                    return Err(Error::validation("Bernoulli losses need at least one coordinate"));
                }
                check_probabilities(means)
            }
            LossModel::HiddenGap { dim, gap } => {
                if *dim < 2 {
                    return Err(Error::validation("a hidden good action needs dim >= 2"));
                }
                if !(0.0..=0.5).contains(gap) {
                    return Err(Error::validation(format!("gap must lie in [0, 1/2], got {gap}")));
                }
                Ok(())
            }
            LossModel::Cycle(seq) => {
                if seq.is_empty() {
                    Err(Error::validation("cyclic loss sequence is empty"))
                } else {
                    Ok(())
                }
            }
            LossModel::Replay(_) => Ok(()),
        }
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Composed {
        activation: ActivationModel,
        losses: LossModel,
        /// Per-coordinate Bernoulli means once any hidden action is drawn.
        means: Option<Vec<f64>>,
        good: Option<usize>,
    },
    IndependentSetLb {
        set: Vec<Vertex>,
        means: [f64; 2],
        good: usize,
    },
    StarAdversary {
        n: usize,
        epsilon: f64,
        good: usize,
    },
}

/// Activation regime, which decides the applicable regret guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// One agent per round, i.i.d. across rounds.
    SingleStochastic,
    /// Independent per-agent activations.
    MultiStochastic,
    /// Activation chosen by an (oblivious) adversary.
    Adversarial,
}

#[derive(Debug, Clone)]
pub struct Environment {
    kind: Kind,
    rng: SimRng,
    round: usize,
}

impl Environment {
    pub fn composed(
        activation: ActivationModel,
        losses: LossModel,
        n: usize,
        seed: u64,
    ) -> Result<Self> {
        activation.validate(n)?;
        losses.validate()?;
        let mut rng = stream(seed);
        let (means, good) = match &losses {
            LossModel::Bernoulli { means } => (Some(means.clone()), unique_argmin(means)),
            LossModel::HiddenGap { dim, gap } => {
                let good = rng.random_range(0..*dim);
                let mut means = vec![0.5; *dim];
                means[good] -= gap;
                (Some(means), (*gap > 0.0).then_some(good))
            }
            _ => (None, None),
        };
        Ok(Environment {
            kind: Kind::Composed {
                activation,
                losses,
                means,
                good,
            },
            rng,
            round: 0,
        })
    }

    /// Activations uniform over the lowest-index-first maximal independent
    /// set; two-action simplex losses with Bernoulli(1/2) coordinates, except
    /// that a hidden good action (drawn once) has mean `1/2 − gap`.
    pub fn independent_set_lb(graph: &Graph, gap: f64, seed: u64) -> Result<Self> {
        if !(0.0..=0.5).contains(&gap) {
            return Err(Error::validation(format!("gap must lie in [0, 1/2], got {gap}")));
        }
        let set = maximal_independent_set(graph);
        if set.is_empty() {
            return Err(Error::validation("graph has no vertices"));
        }
        let mut rng = stream(seed);
        let good = rng.random_range(0..2);
        let mut means = [0.5; 2];
        means[good] -= gap;
        Ok(Environment {
            kind: Kind::IndependentSetLb { set, means, good },
            rng,
            round: 0,
        })
    }

    /// Two-action adversary on the star with center `0` and `n − 1`
    /// peripheral agents. Each round, with the losses written as
    /// `(ℓ(good), ℓ(bad))`:
    ///
    /// | loss  | active agent        | probability       |
    /// |-------|---------------------|-------------------|
    /// | (0,1) | uniform peripheral  | 1/2               |
    /// | (1,0) | center              | ε/(n−1)           |
    /// | (1,0) | uniform peripheral  | 1/2 − ε           |
    /// | (0,0) | uniform peripheral  | ε − ε/(n−1)       |
    ///
    /// The good action is drawn uniformly once at construction.
    pub fn star_adversary(n: usize, epsilon: f64, seed: u64) -> Result<Self> {
        if n < 4 {
            return Err(Error::validation(format!("star adversary needs n >= 4, got {n}")));
        }
        if !(epsilon > 0.0 && epsilon <= 0.5) {
            return Err(Error::validation(format!(
                "star adversary needs epsilon in (0, 1/2], got {epsilon}"
            )));
        }
        let mut rng = stream(seed);
        let good = rng.random_range(0..2);
        Ok(Environment {
            kind: Kind::StarAdversary { n, epsilon, good },
            rng,
            round: 0,
        })
    }

    pub fn regime(&self) -> Regime {
        match &self.kind {
            Kind::Composed { activation, .. } => match activation {
                ActivationModel::SingleStochastic(_) => Regime::SingleStochastic,
                ActivationModel::MultiStochastic(_) => Regime::MultiStochastic,
                ActivationModel::Schedule(_) => Regime::Adversarial,
            },
            Kind::IndependentSetLb { .. } => Regime::SingleStochastic,
            Kind::StarAdversary { .. } => Regime::Adversarial,
        }
    }

    /// Whether every round activates at most one agent.
    pub fn at_most_one_active(&self) -> bool {
        match &self.kind {
            Kind::Composed { activation, .. } => match activation {
                ActivationModel::SingleStochastic(_) => true,
                ActivationModel::MultiStochastic(q) => q.iter().filter(|&&p| p > 0.0).count() <= 1,
                ActivationModel::Schedule(sets) => sets.iter().all(|s| s.len() <= 1),
            },
            _ => true,
        }
    }

    /// Index of the good action, when the construction has one.
    pub fn good_action(&self) -> Option<usize> {
        match &self.kind {
            Kind::Composed { good, .. } => *good,
            Kind::IndependentSetLb { means, good, .. } => (means[0] != means[1]).then_some(*good),
            Kind::StarAdversary { good, .. } => Some(*good),
        }
    }

    /// Number of rounds the environment can produce, if finite.
    pub fn rounds_available(&self) -> Option<usize> {
        match &self.kind {
            Kind::Composed {
                activation,
                losses,
                ..
            } => {
                let a = match activation {
                    ActivationModel::Schedule(s) => Some(s.len()),
                    _ => None,
                };
                let l = match losses {
                    LossModel::Replay(s) => Some(s.len()),
                    _ => None,
                };
                match (a, l) {
                    (Some(a), Some(l)) => Some(a.min(l)),
                    (a, l) => a.or(l),
                }
            }
            _ => None,
        }
    }

    /// The active vertex set when it is fixed at construction
    /// (independent-set environment).
    pub fn activation_support(&self) -> Option<&[Vertex]> {
        match &self.kind {
            Kind::IndependentSetLb { set, .. } => Some(set),
            _ => None,
        }
    }

    pub fn next_round(&mut self) -> Result<Round> {
        let t = self.round;
        let rng = &mut self.rng;
        let round = match &self.kind {
            Kind::Composed {
                activation,
                losses,
                means,
                ..
            } => {
                let active = match activation {
                    ActivationModel::SingleStochastic(q) => vec![sample_index(q, rng)],
                    ActivationModel::MultiStochastic(q) => sample_bernoulli_set(q, rng),
                    ActivationModel::Schedule(sets) => sets
                        .get(t)
                        .cloned()
                        .ok_or_else(|| exhausted(t, sets.len()))?,
                };
                let loss = match losses {
                    LossModel::Bernoulli { .. } | LossModel::HiddenGap { .. } => {
                        bernoulli_loss(means.as_deref().expect("means set for Bernoulli"), rng)
                    }
                    LossModel::Cycle(seq) => seq[t % seq.len()].clone(),
                    LossModel::Replay(seq) => {
                        seq.get(t).cloned().ok_or_else(|| exhausted(t, seq.len()))?
                    }
                };
                Round { active, loss }
            }
            Kind::IndependentSetLb { set, means, .. } => {
                let v = set[rng.random_range(0..set.len())];
                Round {
                    active: vec![v],
                    loss: bernoulli_loss(means, rng),
                }
            }
            Kind::StarAdversary { n, epsilon, good } => {
                let (n, eps) = (*n, *epsilon);
                let per = n as f64 - 1.0;
                let u: f64 = rng.random();
                let (good_loss, bad_loss, center) = if u < 0.5 {
                    (0.0, 1.0, false)
                } else if u < 0.5 + eps / per {
                    (1.0, 0.0, true)
                } else if u < 1.0 - eps + eps / per {
                    (1.0, 0.0, false)
                } else {
                    (0.0, 0.0, false)
                };
                let v = if center { 0 } else { rng.random_range(1..n) };
                let mut coefficients = vec![bad_loss; 2];
                coefficients[*good] = good_loss;
                Round {
                    active: vec![v],
                    loss: Loss::LinearSimplex { coefficients },
                }
            }
        };
        self.round += 1;
        Ok(round)
    }
}

fn exhausted(t: usize, len: usize) -> Error {
    Error::validation(format!(
        "recorded sequence has {len} rounds, round {} requested",
        t + 1
    ))
}

fn bernoulli_loss(means: &[f64], rng: &mut SimRng) -> Loss {
    Loss::LinearSimplex {
        coefficients: means
            .iter()
            .map(|&p| if rng.random_bool(p) { 1.0 } else { 0.0 })
            .collect(),
    }
}

fn unique_argmin(v: &[f64]) -> Option<usize> {
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hits = v.iter().enumerate().filter(|(_, &x)| x == min);
    let first = hits.next()?.0;
    hits.next().is_none().then_some(first)
}

/// Contents of a schedule file.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub n: usize,
    pub dim: usize,
    pub active: Vec<Vec<Vertex>>,
    pub losses: Vec<Loss>,
}

impl Schedule {
    /// Parses `T N d` followed by one line per round, `k v1 … vk | c1 … cd`.
    /// Lines starting with `#` and blank lines are skipped.
    pub fn parse(text: &str, source: &str) -> Result<Schedule> {
        let err = |line: usize, message: String| Error::Parse {
            path: source.to_string(),
            line,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| err(1, "missing header \"T N d\"".into()))?;
        let head: Vec<usize> = header
            .split_whitespace()
            .map(|s| s.parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err(hline, format!("bad header {header:?}")))?;
        let [rounds, n, dim] = head[..] else {
            return Err(err(hline, format!("expected \"T N d\", got {header:?}")));
        };
        if dim == 0 {
            return Err(err(hline, "loss dimension must be positive".into()));
        }

        let mut active = Vec::with_capacity(rounds);
        let mut losses = Vec::with_capacity(rounds);
        for (line, body) in lines {
            let (left, right) = body
                .split_once('|')
                .ok_or_else(|| err(line, "missing '|' separator".into()))?;
            let left: Vec<usize> = left
                .split_whitespace()
                .map(|s| s.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err(line, format!("bad active set {left:?}")))?;
            let (&k, set) = left
                .split_first()
                .ok_or_else(|| err(line, "missing active-set size".into()))?;
            if set.len() != k {
                return Err(err(line, format!("declared {k} active agents, found {}", set.len())));
            }
            if let Some(&v) = set.iter().find(|&&v| v >= n) {
                return Err(err(line, format!("vertex {v} out of range for N = {n}")));
            }
            let mut set = set.to_vec();
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(err(line, "duplicate vertex in active set".into()));
            }
            let coefficients: Vec<f64> = right
                .split_whitespace()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| err(line, format!("bad loss vector {right:?}")))?;
            if coefficients.len() != dim {
                return Err(err(
                    line,
                    format!("expected {dim} loss coordinates, found {}", coefficients.len()),
                ));
            }
            let loss = Loss::linear_simplex(coefficients).map_err(|e| err(line, e.to_string()))?;
            active.push(set);
            losses.push(loss);
        }
        if active.len() != rounds {
            return Err(err(
                hline,
                format!("header declares {rounds} rounds, found {}", active.len()),
            ));
        }
        Ok(Schedule {
            n,
            dim,
            active,
            losses,
        })
    }

    pub fn read(path: &Path) -> Result<Schedule> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Schedule::parse(&text, &path.display().to_string())
    }

    /// Serializes in the format accepted by [`Schedule::parse`]. Only linear
    /// simplex losses are representable.
    pub fn render(&self) -> Result<String> {
        let mut out = format!("{} {} {}\n", self.active.len(), self.n, self.dim);
        for (set, loss) in self.active.iter().zip(&self.losses) {
            let Loss::LinearSimplex { coefficients } = loss else {
                return Err(Error::Unsupported(
                    "schedule files hold linear simplex losses only".into(),
                ));
            };
            let _ = write!(out, "{}", set.len());
            for v in set {
                let _ = write!(out, " {v}");
            }
            out.push_str(" |");
            for c in coefficients {
                let _ = write!(out, " {c}");
            }
            out.push('\n');
        }
        Ok(out)
    }

    pub fn into_environment(self, seed: u64) -> Result<Environment> {
        Environment::composed(
            ActivationModel::Schedule(self.active),
            LossModel::Replay(self.losses),
            self.n,
            seed,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphFamily};

    const DRAWS: usize = 100_000;

    fn coeffs(loss: &Loss) -> &[f64] {
        match loss {
            Loss::LinearSimplex { coefficients } => coefficients,
            _ => panic!("expected simplex loss"),
        }
    }

    #[test]
    fn single_point_mass_and_zero_weight() {
        let mut rng = stream(1);
        for _ in 0..1000 {
            assert_eq!(draw_single(&[0.0, 1.0, 0.0], &mut rng).unwrap(), 1);
        }
        let q = [0.5, 0.0, 0.5];
        assert!((0..DRAWS).all(|_| draw_single(&q, &mut rng).unwrap() != 1));
        assert!(draw_single(&[0.5, 0.6], &mut rng).is_err());
        assert!(draw_single(&[1.5, -0.5], &mut rng).is_err());
    }

    #[test]
    fn single_uniform_frequency() {
        let mut rng = stream(2);
        let hits = (0..DRAWS).filter(|_| draw_single(&[0.5, 0.5], &mut rng).unwrap() == 0).count();
        let freq = hits as f64 / DRAWS as f64;
        assert!((freq - 0.5).abs() <= 0.01, "{freq}");
    }

    #[test]
    fn multi_extremes_and_pair_frequency() {
        let mut rng = stream(3);
        assert_eq!(draw_multi(&[1.0; 4], &mut rng).unwrap(), vec![0, 1, 2, 3]);
        assert!(draw_multi(&[0.0; 4], &mut rng).unwrap().is_empty());
        assert!(draw_multi(&[0.5, 1.2], &mut rng).is_err());
        let both = (0..DRAWS)
            .filter(|_| draw_multi(&[0.5, 0.5], &mut rng).unwrap().len() == 2)
            .count();
        let freq = both as f64 / DRAWS as f64;
        assert!((freq - 0.25).abs() <= 0.01, "{freq}");
    }

    #[test]
    fn independent_set_lb_shapes() {
        let edgeless = Graph::edgeless(5);
        let mut env = Environment::independent_set_lb(&edgeless, 0.0, 4).unwrap();
        let mut seen = [0usize; 5];
        for _ in 0..10_000 {
            seen[env.next_round().unwrap().active[0]] += 1;
        }
        assert!(seen.iter().all(|&c| c > 1800), "{seen:?}");

        let complete = generate(&GraphFamily::Complete { n: 6 }, 0).unwrap();
        let mut env = Environment::independent_set_lb(&complete, 0.0, 4).unwrap();
        assert!((0..100).all(|_| env.next_round().unwrap().active == vec![0]));
    }

    #[test]
    fn independent_set_lb_marginals() {
        let g = generate(&GraphFamily::Cliques { count: 3, size: 2 }, 0).unwrap();
        let mut env = Environment::independent_set_lb(&g, 0.0, 5).unwrap();
        let mut sums = [0.0; 2];
        for _ in 0..DRAWS {
            let r = env.next_round().unwrap();
            for (s, c) in sums.iter_mut().zip(coeffs(&r.loss)) {
                *s += c;
            }
        }
        for s in sums {
            assert!((s / DRAWS as f64 - 0.5).abs() <= 0.01, "{s}");
        }
        assert_eq!(env.good_action(), None);
    }

    #[test]
    fn independent_set_lb_never_activates_adjacent() {
        let g = generate(&GraphFamily::Gnp { n: 15, p: 0.3 }, 9).unwrap();
        let mut env = Environment::independent_set_lb(&g, 0.1, 5).unwrap();
        let mut activated = std::collections::BTreeSet::new();
        for _ in 0..5000 {
            activated.extend(env.next_round().unwrap().active);
        }
        let set: Vec<_> = activated.into_iter().collect();
        assert!(g.is_independent(&set));
    }

    #[test]
    fn star_validation() {
        assert!(Environment::star_adversary(3, 0.5, 0).is_err());
        assert!(Environment::star_adversary(10, 0.0, 0).is_err());
        assert!(Environment::star_adversary(10, 0.6, 0).is_err());
        assert!(Environment::star_adversary(4, 0.5, 0).is_ok());
    }

    /// Loss vector in (good, bad) order.
    fn relative(loss: &Loss, good: usize) -> (f64, f64) {
        let c = coeffs(loss);
        (c[good], c[1 - good])
    }

    #[test]
    fn star_event_frequencies() {
        let n = 10;
        let mut env = Environment::star_adversary(n, 0.5, 11).unwrap();
        let good = env.good_action().unwrap();
        let mut center = 0usize;
        let (mut a, mut b, mut c, mut d) = (0usize, 0usize, 0usize, 0usize);
        for _ in 0..DRAWS {
            let r = env.next_round().unwrap();
            let is_center = r.active == vec![0];
            center += usize::from(is_center);
            match (relative(&r.loss, good), is_center) {
                ((0.0, 1.0), false) => a += 1,
                ((1.0, 0.0), true) => b += 1,
                ((1.0, 0.0), false) => c += 1,
                ((0.0, 0.0), false) => d += 1,
                other => panic!("impossible event {other:?}"),
            }
        }
        let f = |k: usize| k as f64 / DRAWS as f64;
        assert!((f(center) - 1.0 / 18.0).abs() <= 0.005, "{}", f(center));
        assert!((f(a) - 0.5).abs() <= 0.01);
        assert_eq!(c, 0);
        assert!((f(d) - (0.5 - 1.0 / 18.0)).abs() <= 0.01);
        assert_eq!(a + b + c + d, DRAWS);
    }

    /// Conditioned on a peripheral agent receiving a nonzero loss, (0,1) and
    /// (1,0) are equally likely.
    #[test]
    fn star_peripheral_feedback_is_symmetric() {
        for (eps, seed) in [(0.5, 21), (0.3, 22), (0.1, 23)] {
            let mut env = Environment::star_adversary(10, eps, seed).unwrap();
            let good = env.good_action().unwrap();
            let (mut zero_one, mut one_zero) = (0u64, 0u64);
            for _ in 0..DRAWS {
                let r = env.next_round().unwrap();
                // agent 1 receives feedback when it or the center is active
                if r.active[0] == 0 || r.active[0] == 1 {
                    match relative(&r.loss, good) {
                        (0.0, 1.0) => zero_one += 1,
                        (1.0, 0.0) => one_zero += 1,
                        _ => {}
                    }
                }
            }
            let diff = zero_one as f64 - one_zero as f64;
            let chi2 = diff * diff / (zero_one + one_zero) as f64;
            // chi-square, one degree of freedom, significance 0.01
            assert!(chi2 < 6.635, "eps {eps}: chi2 = {chi2} ({zero_one} vs {one_zero})");
        }
    }

    #[test]
    fn schedule_parse_and_replay() {
        let text = "# header\n3 4 2\n2 0 3 | 0 1\n0 | 1 1\n1 2 | 0.25 0.75\n";
        let s = Schedule::parse(text, "sched").unwrap();
        assert_eq!(s.active, vec![vec![0, 3], vec![], vec![2]]);
        let mut env = s.clone().into_environment(0).unwrap();
        assert_eq!(env.rounds_available(), Some(3));
        assert_eq!(env.regime(), Regime::Adversarial);
        for (set, loss) in s.active.iter().zip(&s.losses) {
            let r = env.next_round().unwrap();
            assert_eq!(&r.active, set);
            assert_eq!(&r.loss, loss);
        }
        assert!(env.next_round().is_err());
        assert_eq!(Schedule::parse(&s.render().unwrap(), "again").unwrap(), s);
    }

    #[test]
    fn schedule_errors_carry_line_numbers() {
        let cases = [
            ("2 3 2\n1 0 | 0 1\n1 5 | 0 1\n", 3),
            ("1 3 2\n1 0 0 1\n", 2),
            ("1 3 2\n2 0 | 0 1\n", 2),
            ("1 3 2\n1 0 | 0 2\n", 2),
            ("1 3 2\n1 0 | 0\n", 2),
            ("2 3 2\n1 0 | 0 1\n", 1),
            ("3 2\n", 1),
        ];
        for (text, line) in cases {
            match Schedule::parse(text, "s") {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn reproducible_streams() {
        let g = generate(&GraphFamily::Cycle { n: 7 }, 0).unwrap();
        let run = |seed| {
            let mut env = Environment::composed(
                ActivationModel::MultiStochastic(vec![0.3; 7]),
                LossModel::HiddenGap { dim: 3, gap: 0.1 },
                g.n(),
                seed,
            )
            .unwrap();
            (0..200).map(|_| env.next_round().unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(run(5), run(5));
        assert_ne!(run(5), run(6));
    }

    #[test]
    fn composed_validation() {
        assert!(Environment::composed(
            ActivationModel::SingleStochastic(vec![0.5, 0.4]),
            LossModel::Bernoulli { means: vec![0.5, 0.5] },
            2,
            0
        )
        .is_err());
        assert!(Environment::composed(
            ActivationModel::Schedule(vec![vec![3]]),
            LossModel::Bernoulli { means: vec![0.5, 0.5] },
            2,
            0
        )
        .is_err());
        let env = Environment::composed(
            ActivationModel::SingleStochastic(vec![1.0, 0.0]),
            LossModel::Bernoulli { means: vec![0.3, 0.5] },
            2,
            0,
        )
        .unwrap();
        assert_eq!(env.good_action(), Some(0));
    }
}
