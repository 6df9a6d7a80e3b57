//! Experiment configuration, reports, and sweeps.
//!
//! A configuration is a TOML document:
//!
//! ```toml
//! horizon = 10000
//! replicates = 100
//! seed = 7
//! eta = "tuned"            # or a positive number
//! policy = "oblivious"     # or "clique-cover"
//! comparator = "best"      # or "good-action"
//!
//! [graph]
//! kind = "star"            # star, cycle, complete, edgeless, path, gnp, cliques, file
//! n = 10
//!
//! [geometry]
//! kind = "simplex"         # or "ball" with `radius`
//! dim = 2
//!
//! [environment]
//! kind = "star-adversary"  # single-stochastic, multi-stochastic,
//! epsilon = 0.5            # independent-set-lb, star-adversary, schedule
//! ```
//!
//! Unknown keys are rejected. Relative paths resolve against the directory
//! holding the configuration file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::agent::InterfacePolicy;
use crate::analysis::{q_constant, ActivationProfile};
use crate::environment::{ActivationModel, Environment, LossModel, Regime, Schedule};
use crate::error::{Error, Result};
use crate::geometry::{theory_bound, tuned_eta, Geometry, Loss};
use crate::graph::{
    generate, greedy_clique_cover, greedy_dominating_set, independence_number_exact,
    maximal_independent_set, clique_cover_number_exact, Graph, GraphFamily, EXACT_COVER_LIMIT,
};
use crate::rng::{replicate_seed, RNG_NAME};
use crate::simulator::{
    monte_carlo, run_regret, run_simulation, Comparator, MonteCarloSummary, Setup, SimulationTrace,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub horizon: usize,
    #[serde(default = "one")]
    pub replicates: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub eta: EtaSpec,
    #[serde(default)]
    pub policy: PolicySpec,
    #[serde(default)]
    pub comparator: ComparatorSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    pub graph: GraphSpec,
    pub geometry: Geometry,
    pub environment: EnvironmentSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Star { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Edgeless { n: usize },
    Path { n: usize },
    Gnp {
        n: usize,
        p: f64,
        #[serde(default)]
        seed: u64,
    },
    Cliques { count: usize, size: usize },
    /// Edge-list file: a header `n m`, then one `u v` pair per line.
    File { path: PathBuf },
}

impl GraphSpec {
    pub fn build(&self, base: &Path) -> Result<Graph> {
        let (family, seed) = match *self {
            GraphSpec::Star { n } => (GraphFamily::Star { n }, 0),
            GraphSpec::Cycle { n } => (GraphFamily::Cycle { n }, 0),
            GraphSpec::Complete { n } => (GraphFamily::Complete { n }, 0),
            GraphSpec::Edgeless { n } => (GraphFamily::Edgeless { n }, 0),
            GraphSpec::Path { n } => (GraphFamily::Path { n }, 0),
            GraphSpec::Gnp { n, p, seed } => (GraphFamily::Gnp { n, p }, seed),
            GraphSpec::Cliques { count, size } => (GraphFamily::Cliques { count, size }, 0),
            GraphSpec::File { ref path } => return Graph::read_edge_list(&base.join(path)),
        };
        generate(&family, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnvironmentSpec {
    /// One agent per round drawn from `q`.
    SingleStochastic {
        #[serde(default)]
        q: QSpec,
        losses: LossSpec,
    },
    /// Every agent active independently with its own probability.
    MultiStochastic { q: QSpec, losses: LossSpec },
    /// Activations uniform over a maximal independent set, two-action
    /// Bernoulli losses with an optional hidden gap.
    IndependentSetLb {
        #[serde(default)]
        gap: GapSpec,
    },
    StarAdversary { epsilon: f64 },
    /// Activation sets and losses replayed from a schedule file.
    Schedule { path: PathBuf },
}

/// Activation probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QSpec {
    /// `"uniform"`: `1/N` each for single activation.
    Named(QName),
    /// The same probability for every agent (multi-activation only).
    Scalar(f64),
    PerVertex(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QName {
    Uniform,
}

impl Default for QSpec {
    fn default() -> Self {
        QSpec::Named(QName::Uniform)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LossSpec {
    Bernoulli { means: Vec<f64> },
    /// All coordinates Bernoulli(1/2) except one hidden good action.
    HiddenGap {
        #[serde(default)]
        gap: GapSpec,
    },
    /// The given losses repeated cyclically.
    Cycle { losses: Vec<Loss> },
}

/// Mean advantage of the good action.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GapSpec {
    Value(f64),
    /// `scale · √(m/T)` with `m` the number of agents that never share
    /// feedback: `α` for stochastic activation, the set size for the
    /// independent-set environment. Capped at `1/2`.
    Scaled { scale: f64 },
}

impl Default for GapSpec {
    fn default() -> Self {
        GapSpec::Value(0.0)
    }
}

impl GapSpec {
    fn resolve(self, independent: usize, horizon: usize) -> Result<f64> {
        let gap = match self {
            GapSpec::Value(g) => g,
            GapSpec::Scaled { scale } => {
                if !(scale >= 0.0) || !scale.is_finite() {
                    return Err(Error::validation(format!("gap scale must be nonnegative, got {scale}")));
                }
                if horizon == 0 {
                    0.0
                } else {
                    (scale * (independent as f64 / horizon as f64).sqrt()).min(0.5)
                }
            }
        };
        if !(0.0..=0.5).contains(&gap) {
            return Err(Error::validation(format!("gap must lie in [0, 1/2], got {gap}")));
        }
        Ok(gap)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EtaSpec {
    Named(EtaName),
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EtaName {
    /// `√(2σD)/L`.
    Tuned,
}

impl Default for EtaSpec {
    fn default() -> Self {
        EtaSpec::Named(EtaName::Tuned)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicySpec {
    #[default]
    Oblivious,
    /// Restrict feedback to the blocks of the greedy clique cover.
    CliqueCover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparatorSpec {
    #[default]
    Best,
    GoodAction,
}

/// Sweep axis, read by [`sweep`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum SweepSpec {
    Horizons(Vec<usize>),
    Graphs(Vec<GraphSpec>),
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, source: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].lines().count().max(1))
                .unwrap_or(0);
            Error::Parse {
                path: source.to_string(),
                line,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        if self.seed > i64::MAX as u64 {
            return Err(Error::validation(format!(
                "seed {} does not fit a TOML integer (max {})",
                self.seed,
                i64::MAX
            )));
        }
        toml::to_string(self).map_err(|e| Error::validation(format!("cannot serialize config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, &path.display().to_string())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?).map_err(|e| Error::io(path, e))
    }

    fn referenced_files(&self) -> Vec<&Path> {
        let mut out = Vec::new();
        if let GraphSpec::File { path } = &self.graph {
            out.push(path.as_path());
        }
        if let EnvironmentSpec::Schedule { path } = &self.environment {
            out.push(path.as_path());
        }
        out
    }

    /// SHA-256 over the canonical TOML with the seed and output directory
    /// cleared, followed by the bytes of every referenced file. Together
    /// with the seed it pins down the report.
    pub fn hash(&self, base: &Path, heuristic: bool) -> Result<String> {
        let mut canonical = self.clone();
        canonical.seed = 0;
        canonical.out_dir = None;
        let mut hasher = Sha256::new();
        hasher.update(canonical.to_toml()?.as_bytes());
        hasher.update(format!("heuristic={heuristic}\nrng={RNG_NAME}\n").as_bytes());
        for file in self.referenced_files() {
            let path = base.join(file);
            let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
            hasher.update(&bytes);
        }
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(16);
        for b in &digest[..8] {
            let _ = write!(hex, "{b:02x}");
        }
        Ok(hex)
    }
}

/// Independence number, exact or replaced by the greedy cover size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlphaEstimate {
    pub value: usize,
    /// True when `value` is the greedy clique-cover size, an upper bound.
    pub heuristic: bool,
}

impl AlphaEstimate {
    pub fn label(&self) -> &'static str {
        if self.heuristic {
            "heuristic"
        } else {
            "exact"
        }
    }
}

pub fn estimate_alpha(g: &Graph, heuristic: bool) -> Result<AlphaEstimate> {
    match independence_number_exact(g) {
        Ok(value) => Ok(AlphaEstimate {
            value,
            heuristic: false,
        }),
        Err(Error::ExactLimit { .. }) if heuristic => Ok(AlphaEstimate {
            value: greedy_clique_cover(g).len(),
            heuristic: true,
        }),
        Err(e) => Err(e),
    }
}

/// Which regret guarantee applies to a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// Complete graph or a single agent: one shared learner.
    Single,
    /// Single stochastic activation under the oblivious interface.
    Alpha,
    /// Clique-cover interface, any single-activation sequence.
    Cover,
    /// Independent multi-activation under the oblivious interface.
    Q,
    /// No guarantee (adversarial activation under the oblivious interface).
    None,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Single => "single",
            BoundKind::Alpha => "alpha",
            BoundKind::Cover => "cover",
            BoundKind::Q => "q",
            BoundKind::None => "none",
        }
    }
}

#[derive(Debug, Clone)]
enum EnvRecipe {
    Composed {
        activation: ActivationModel,
        losses: LossModel,
    },
    IndependentSetLb {
        gap: f64,
    },
    StarAdversary {
        epsilon: f64,
    },
    Schedule(Schedule),
}

/// A validated configuration with every derived quantity computed.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub graph: Graph,
    pub policy: InterfacePolicy,
    pub alpha: AlphaEstimate,
    pub cover_size: usize,
    pub q_constant: Option<f64>,
    pub lipschitz: f64,
    pub eta: f64,
    pub regime: Regime,
    pub bound_kind: BoundKind,
    recipe: EnvRecipe,
}

impl Experiment {
    /// `base` is the directory relative paths resolve against.
    pub fn prepare(config: ExperimentConfig, base: &Path, heuristic: bool) -> Result<Self> {
        config.geometry.validate()?;
        if config.replicates == 0 {
            return Err(Error::validation("replicates must be at least 1"));
        }
        let graph = config.graph.build(base)?;
        if graph.n() == 0 {
            return Err(Error::validation("graph has no vertices"));
        }
        let n = graph.n();
        let dim = config.geometry.dim();
        let alpha = estimate_alpha(&graph, heuristic)?;
        let cover = greedy_clique_cover(&graph);
        let cover_size = cover.len();
        let simplex_only = |what: &str| -> Result<()> {
            match config.geometry {
                Geometry::Simplex { dim: 2 } => Ok(()),
                _ => Err(Error::validation(format!("{what} needs geometry simplex with dim = 2"))),
            }
        };

        let (recipe, lipschitz) = match &config.environment {
            EnvironmentSpec::SingleStochastic { q, losses } => {
                let q = match q {
                    QSpec::Named(QName::Uniform) => vec![1.0 / n as f64; n],
                    QSpec::PerVertex(q) => q.clone(),
                    QSpec::Scalar(_) => {
                        return Err(Error::validation(
                            "environment.q: single activation needs \"uniform\" or a distribution",
                        ))
                    }
                };
                let activation = ActivationModel::SingleStochastic(q);
                let (losses, l) = loss_model(losses, &config.geometry, alpha.value, config.horizon)?;
                (EnvRecipe::Composed { activation, losses }, l)
            }
            EnvironmentSpec::MultiStochastic { q, losses } => {
                let q = match q {
                    QSpec::Scalar(p) => vec![*p; n],
                    QSpec::PerVertex(q) => q.clone(),
                    QSpec::Named(_) => {
                        return Err(Error::validation(
                            "environment.q: multi activation needs a probability or a list",
                        ))
                    }
                };
                let activation = ActivationModel::MultiStochastic(q);
                let (losses, l) = loss_model(losses, &config.geometry, alpha.value, config.horizon)?;
                (EnvRecipe::Composed { activation, losses }, l)
            }
            EnvironmentSpec::IndependentSetLb { gap } => {
                simplex_only("independent-set-lb")?;
                let m = maximal_independent_set(&graph).len();
                let gap = gap.resolve(m, config.horizon)?;
                (EnvRecipe::IndependentSetLb { gap }, 1.0)
            }
            EnvironmentSpec::StarAdversary { epsilon } => {
                simplex_only("star-adversary")?;
                let expected = generate(&GraphFamily::Star { n }, 0)?;
                if graph != expected {
                    return Err(Error::validation(
                        "star-adversary needs a star graph with center 0",
                    ));
                }
                (EnvRecipe::StarAdversary { epsilon: *epsilon }, 1.0)
            }
            EnvironmentSpec::Schedule { path } => {
                let schedule = Schedule::read(&base.join(path))?;
                if schedule.n != n || schedule.dim != dim {
                    return Err(Error::validation(format!(
                        "schedule is for N = {}, d = {}; configuration has N = {n}, d = {dim}",
                        schedule.n, schedule.dim
                    )));
                }
                if schedule.active.len() < config.horizon {
                    return Err(Error::validation(format!(
                        "schedule has {} rounds, horizon is {}",
                        schedule.active.len(),
                        config.horizon
                    )));
                }
                let l = max_gradient_bound(&schedule.losses, &config.geometry)?;
                (EnvRecipe::Schedule(schedule), l)
            }
        };

        let eta = match config.eta {
            EtaSpec::Value(v) => {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::validation(format!("eta must be positive, got {v}")));
                }
                v
            }
            EtaSpec::Named(EtaName::Tuned) => {
                if lipschitz == 0.0 {
                    return Err(Error::validation(
                        "eta = \"tuned\" needs nonzero losses; set eta explicitly",
                    ));
                }
                tuned_eta(
                    config.geometry.range_bound(),
                    config.geometry.strong_convexity(),
                    lipschitz,
                )
                .map_err(|e| Error::validation(format!("eta = \"tuned\": {e}")))?
            }
        };

        let policy = match config.policy {
            PolicySpec::Oblivious => InterfacePolicy::Oblivious,
            PolicySpec::CliqueCover => InterfacePolicy::CliqueCover(cover),
        };

        let mut experiment = Experiment {
            config_hash: config.hash(base, heuristic)?,
            graph,
            policy,
            alpha,
            cover_size,
            q_constant: None,
            lipschitz,
            eta,
            regime: Regime::Adversarial,
            bound_kind: BoundKind::None,
            recipe,
            config,
        };
        let probe = experiment.environment(0)?;
        experiment.regime = probe.regime();
        if let InterfacePolicy::CliqueCover(_) = experiment.policy {
            if !probe.at_most_one_active() {
                return Err(Error::validation(
                    "policy = \"clique-cover\" needs a single-activation environment",
                ));
            }
        }
        if let EnvRecipe::Composed {
            activation: ActivationModel::MultiStochastic(q),
            ..
        } = &experiment.recipe
        {
            let profile = ActivationProfile::new(experiment.graph.clone(), q.clone())?;
            experiment.q_constant = Some(q_constant(&profile)?);
        }
        experiment.bound_kind = match (&experiment.policy, experiment.regime) {
            _ if experiment.graph.is_complete() => BoundKind::Single,
            (InterfacePolicy::CliqueCover(_), _) => BoundKind::Cover,
            (InterfacePolicy::Oblivious, Regime::SingleStochastic) => BoundKind::Alpha,
            (InterfacePolicy::Oblivious, Regime::MultiStochastic) => BoundKind::Q,
            (InterfacePolicy::Oblivious, Regime::Adversarial) => BoundKind::None,
        };
        Ok(experiment)
    }

    pub fn setup(&self) -> Setup<'_> {
        Setup {
            graph: &self.graph,
            geometry: &self.config.geometry,
            policy: &self.policy,
            eta: self.eta,
        }
    }

    pub fn comparator(&self) -> Comparator {
        match self.config.comparator {
            ComparatorSpec::Best => Comparator::Best,
            ComparatorSpec::GoodAction => Comparator::GoodAction,
        }
    }

    /// A fresh environment for one run.
    pub fn environment(&self, seed: u64) -> Result<Environment> {
        match &self.recipe {
            EnvRecipe::Composed { activation, losses } => {
                Environment::composed(activation.clone(), losses.clone(), self.graph.n(), seed)
            }
            EnvRecipe::IndependentSetLb { gap } => {
                Environment::independent_set_lb(&self.graph, *gap, seed)
            }
            EnvRecipe::StarAdversary { epsilon } => {
                Environment::star_adversary(self.graph.n(), *epsilon, seed)
            }
            EnvRecipe::Schedule(s) => s.clone().into_environment(seed),
        }
    }

    /// `(D/η + ηL²/(2σ))·√(m·T)`.
    pub fn bound_with(&self, multiplier: f64) -> Result<f64> {
        if self.config.horizon == 0 {
            return Ok(0.0);
        }
        let g = &self.config.geometry;
        theory_bound(
            g.range_bound(),
            g.strong_convexity(),
            self.lipschitz,
            self.eta,
            multiplier,
            self.config.horizon as f64,
        )
    }

    /// The multiplier of the applicable guarantee.
    pub fn multiplier(&self) -> Option<f64> {
        match self.bound_kind {
            BoundKind::Single => Some(1.0),
            BoundKind::Alpha => Some(self.alpha.value as f64),
            BoundKind::Cover => Some(self.cover_size as f64),
            BoundKind::Q => self.q_constant,
            BoundKind::None => None,
        }
    }

    /// Full trace of replicate `r`.
    pub fn trace(&self, replicate: usize) -> Result<SimulationTrace> {
        let seed = replicate_seed(self.config.seed, replicate as u64);
        let mut env = self.environment(seed)?;
        run_simulation(self.setup(), &mut env, self.config.horizon, seed)
    }

    pub fn run(&self) -> Result<RunReport> {
        let setup = self.setup();
        let comparator = self.comparator();
        let horizon = self.config.horizon;
        let summary = monte_carlo(self.config.replicates, self.config.seed, |seed| {
            let mut env = self.environment(seed)?;
            run_regret(setup, &mut env, horizon, &comparator)
        })?;
        let theory_bound = self.multiplier().map(|m| self.bound_with(m)).transpose()?;
        let verdict = match theory_bound {
            None => Verdict::NotApplicable,
            Some(b) if summary.mean <= b + 3.0 * summary.std_error => Verdict::Pass,
            Some(_) => Verdict::Fail,
        };
        Ok(RunReport {
            config_hash: self.config_hash.clone(),
            horizon,
            n: self.graph.n(),
            alpha: self.alpha,
            cover_size: self.cover_size,
            q_constant: self.q_constant,
            eta: self.eta,
            theory_bound,
            bound_kind: self.bound_kind,
            bound_alpha: self.bound_with(self.alpha.value as f64)?,
            bound_cover: self.bound_with(self.cover_size as f64)?,
            verdict,
            summary,
        })
    }
}

fn loss_model(spec: &LossSpec, geom: &Geometry, alpha: usize, horizon: usize) -> Result<(LossModel, f64)> {
    let dim = geom.dim();
    let simplex = matches!(geom, Geometry::Simplex { .. });
    match spec {
        LossSpec::Bernoulli { means } => {
            if !simplex || means.len() != dim {
                return Err(Error::validation(format!(
                    "Bernoulli losses need a simplex of dimension {}",
                    means.len()
                )));
            }
            Ok((LossModel::Bernoulli { means: means.clone() }, 1.0))
        }
        LossSpec::HiddenGap { gap } => {
            if !simplex {
                return Err(Error::validation("hidden-gap losses need the simplex"));
            }
            let gap = gap.resolve(alpha, horizon)?;
            Ok((LossModel::HiddenGap { dim, gap }, 1.0))
        }
        LossSpec::Cycle { losses } => {
            let l = max_gradient_bound(losses, geom)?;
            Ok((LossModel::Cycle(losses.clone()), l))
        }
    }
}

fn max_gradient_bound(losses: &[Loss], geom: &Geometry) -> Result<f64> {
    let mut l = 0.0f64;
    for (i, loss) in losses.iter().enumerate() {
        loss.check_compatible(geom)
            .map_err(|e| Error::validation(format!("loss {}: {e}", i + 1)))?;
        l = l.max(loss.gradient_bound(geom));
    }
    Ok(l)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config_hash: String,
    pub horizon: usize,
    pub n: usize,
    pub alpha: AlphaEstimate,
    pub cover_size: usize,
    pub q_constant: Option<f64>,
    pub eta: f64,
    /// Bound of the applicable guarantee.
    pub theory_bound: Option<f64>,
    pub bound_kind: BoundKind,
    pub bound_alpha: f64,
    pub bound_cover: f64,
    /// `mean ≤ bound + 3·SE`.
    pub verdict: Verdict,
    pub summary: MonteCarloSummary,
}

pub const REPORT_HEADER: &str = "config_hash,T,N,alpha,cover_size,Q,eta,regret_mean,regret_se,\
theory_bound,seed,bound_kind,bound_alpha,bound_cover,alpha_kind,regret_min,regret_max,replicates,verdict";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunReport {
    pub fn csv_row(&self) -> String {
        let s = &self.summary;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.config_hash,
            self.horizon,
            self.n,
            self.alpha.value,
            self.cover_size,
            opt(self.q_constant),
            self.eta,
            s.mean,
            s.std_error,
            opt(self.theory_bound),
            s.master_seed,
            self.bound_kind.as_str(),
            self.bound_alpha,
            self.bound_cover,
            self.alpha.label(),
            s.min,
            s.max,
            s.runs.len(),
            self.verdict.as_str()
        )
    }

    pub fn to_csv(&self) -> String {
        format!("{REPORT_HEADER}\n{}\n", self.csv_row())
    }

    /// `replicate,seed,system_loss,comparator_loss,regret`.
    pub fn replicates_csv(&self) -> String {
        let mut out = String::from("replicate,seed,system_loss,comparator_loss,regret\n");
        for (r, run) in self.summary.runs.iter().enumerate() {
            let _ = writeln!(
                out,
                "{r},{},{},{},{}",
                replicate_seed(self.summary.master_seed, r as u64),
                run.system_loss,
                run.comparator_loss,
                run.regret
            );
        }
        out
    }
}

/// Structural measurements of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphMetrics {
    pub n: usize,
    pub edges: usize,
    pub alpha: AlphaEstimate,
    pub greedy_cover: usize,
    /// Minimum clique cover, for graphs small enough to enumerate.
    pub exact_cover: Option<usize>,
    pub greedy_dominating: usize,
    /// `Σ_v 1/|N_v|`.
    pub sum_inverse_neighborhoods: f64,
}

pub fn graph_metrics(g: &Graph, heuristic: bool) -> Result<GraphMetrics> {
    Ok(GraphMetrics {
        n: g.n(),
        edges: g.num_edges(),
        alpha: estimate_alpha(g, heuristic)?,
        greedy_cover: greedy_clique_cover(g).len(),
        exact_cover: (g.n() <= EXACT_COVER_LIMIT)
            .then(|| clique_cover_number_exact(g))
            .transpose()?,
        greedy_dominating: greedy_dominating_set(g).len(),
        sum_inverse_neighborhoods: crate::analysis::q_uniform_limit(g),
    })
}

impl GraphMetrics {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n                   {}", self.n);
        let _ = writeln!(out, "edges               {}", self.edges);
        let _ = writeln!(out, "alpha               {} ({})", self.alpha.value, self.alpha.label());
        let _ = writeln!(out, "clique cover        {} (greedy)", self.greedy_cover);
        if let Some(c) = self.exact_cover {
            let _ = writeln!(out, "clique cover        {c} (exact)");
        }
        let _ = writeln!(out, "dominating set      {} (greedy)", self.greedy_dominating);
        let _ = writeln!(out, "sum 1/|N_v|         {}", self.sum_inverse_neighborhoods);
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    /// `T` for horizon sweeps, `α` for graph sweeps.
    pub x: f64,
    pub report: RunReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub axis: &'static str,
    pub points: Vec<SweepPoint>,
    /// Least-squares slope of `ln(mean regret)` against `ln x`.
    pub slope: f64,
    pub intercept: f64,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{REPORT_HEADER}\n", self.axis);
        for p in &self.points {
            let _ = writeln!(out, "{},{}", p.x, p.report.csv_row());
        }
        out
    }
}

/// Runs the configuration once per sweep value. The axis comes from
/// `axis` or, failing that, from the configuration's `sweep` entry.
pub fn sweep(
    config: &ExperimentConfig,
    axis: Option<&SweepSpec>,
    base: &Path,
    heuristic: bool,
) -> Result<SweepTable> {
    let axis = axis
        .or(config.sweep.as_ref())
        .ok_or_else(|| Error::validation("no sweep axis: give horizons or graphs"))?;
    let configs: Vec<ExperimentConfig> = match axis {
        SweepSpec::Horizons(ts) => ts
            .iter()
            .map(|&t| ExperimentConfig { horizon: t, sweep: None, ..config.clone() })
            .collect(),
        SweepSpec::Graphs(gs) => gs
            .iter()
            .map(|g| ExperimentConfig { graph: g.clone(), sweep: None, ..config.clone() })
            .collect(),
    };
    if configs.len() < 3 {
        return Err(Error::validation(format!(
            "a sweep needs at least 3 points, got {}",
            configs.len()
        )));
    }
    let mut points = Vec::with_capacity(configs.len());
    for c in configs {
        let exp = Experiment::prepare(c, base, heuristic)?;
        let x = match axis {
            SweepSpec::Horizons(_) => exp.config.horizon as f64,
            SweepSpec::Graphs(_) => exp.alpha.value as f64,
        };
        points.push(SweepPoint { x, report: exp.run()? });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.report.summary.mean).collect();
    let (slope, intercept) = log_log_fit(&xs, &ys)?;
    Ok(SweepTable {
        axis: match axis {
            SweepSpec::Horizons(_) => "T",
            SweepSpec::Graphs(_) => "alpha",
        },
        points,
        slope,
        intercept,
    })
}

/// Least-squares line through `(ln x, ln y)`.
pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::validation("a fit needs at least two paired points"));
    }
    if let Some(i) = (0..xs.len()).find(|&i| !(xs[i] > 0.0 && ys[i] > 0.0)) {
        return Err(Error::Numeric(format!(
            "point {} has x = {}, y = {}; logs need positive values",
            i + 1,
            xs[i],
            ys[i]
        )));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Numeric("all sweep values are equal".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}
