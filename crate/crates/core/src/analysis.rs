//! Constants of the independent multi-activation model and their checks.
//!
//! Each agent `v` is active independently with probability `q_v`.
//! * `Q_v = 1 − ∏_{w∈N_v}(1 − q_w)` is the probability that `v` receives
//!   feedback in a round.
//! * `c_v = E[1/(1 + Σ_{w≠v} X(w))] = ∫₀¹ ∏_{w≠v}(q_w x + 1 − q_w) dx`.
//! * `Q = Σ_{v: q_v>0} q_v c_v / Q_v` multiplies the horizon in the regret
//!   bound and is at most `(α + 1)/(1 − e⁻¹)`.

use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{
    generate, independence_number_exact, verify_ratio_bound, Graph, GraphFamily, Vertex,
};
use crate::rng::{replicate_seed, stream, SimRng};

/// Largest agent count for [`c_coefficient_bruteforce`].
pub const BRUTEFORCE_LIMIT: usize = 20;

/// A graph with per-vertex activation probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationProfile {
    graph: Graph,
    q: Vec<f64>,
}

impl ActivationProfile {
    pub fn new(graph: Graph, q: Vec<f64>) -> Result<Self> {
        if q.len() != graph.n() {
            return Err(Error::validation(format!(
                "{} activation probabilities for {} vertices",
                q.len(),
                graph.n()
            )));
        }
        check_probabilities(&q)?;
        Ok(ActivationProfile { graph, q })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Vertices with `q_v > 0`, ascending.
    pub fn support(&self) -> Vec<Vertex> {
        (0..self.q.len()).filter(|&v| self.q[v] > 0.0).collect()
    }
}

fn check_probabilities(q: &[f64]) -> Result<()> {
    match q.iter().position(|p| !(0.0..=1.0).contains(p)) {
        Some(v) => Err(Error::validation(format!(
            "activation probability of vertex {v} is {}, outside [0, 1]",
            q[v]
        ))),
        None => Ok(()),
    }
}

/// `Q_v = 1 − ∏_{w∈N_v}(1 − q_w)`.
pub fn update_probability(profile: &ActivationProfile, v: Vertex) -> Result<f64> {
    let miss: f64 = profile
        .graph
        .closed_neighborhood(v)?
        .iter()
        .map(|&w| 1.0 - profile.q[w])
        .product();
    Ok(1.0 - miss)
}

/// `c_v`, by expanding `∏_{w≠v}(q_w x + 1 − q_w)` into monomials and
/// integrating term by term. All coefficients are nonnegative, so nothing
/// cancels.
pub fn c_coefficient(q: &[f64], v: Vertex) -> Result<f64> {
    check_probabilities(q)?;
    if v >= q.len() {
        return Err(Error::VertexOutOfRange { vertex: v, n: q.len() });
    }
    let mut poly = Vec::with_capacity(q.len());
    poly.push(1.0);
    for (w, &p) in q.iter().enumerate() {
        if w == v {
            continue;
        }
        poly.push(0.0);
        for k in (0..poly.len()).rev() {
            let lower = if k > 0 { poly[k - 1] } else { 0.0 };
            poly[k] = poly[k] * (1.0 - p) + lower * p;
        }
    }
    Ok(poly
        .iter()
        .enumerate()
        .map(|(k, a)| a / (k + 1) as f64)
        .sum())
}

/// `c_v` by summing over every subset of the other agents.
pub fn c_coefficient_bruteforce(q: &[f64], v: Vertex) -> Result<f64> {
    check_probabilities(q)?;
    if v >= q.len() {
        return Err(Error::VertexOutOfRange { vertex: v, n: q.len() });
    }
    if q.len() > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge(format!(
            "subset enumeration over {} agents exceeds the limit of {BRUTEFORCE_LIMIT}",
            q.len()
        )));
    }
    let others: Vec<f64> = q
        .iter()
        .enumerate()
        .filter(|&(w, _)| w != v)
        .map(|(_, &p)| p)
        .collect();
    let mut total = 0.0;
    for mask in 0u32..(1 << others.len()) {
        let mut prob = 1.0;
        for (i, &p) in others.iter().enumerate() {
            prob *= if mask >> i & 1 == 1 { p } else { 1.0 - p };
        }
        total += prob / (1 + mask.count_ones()) as f64;
    }
    Ok(total)
}

/// `E[X(v)/Σ_w X(w)] = q_v c_v`, the ratio being zero when `X(v) = 0`.
pub fn expected_activation_share(q: &[f64], v: Vertex) -> Result<f64> {
    let c = c_coefficient(q, v)?;
    Ok(if q[v] == 0.0 { 0.0 } else { q[v] * c })
}

/// `Q = Σ_{v: q_v>0} q_v c_v / Q_v`.
pub fn q_constant(profile: &ActivationProfile) -> Result<f64> {
    let mut total = 0.0;
    for v in profile.support() {
        let qv = update_probability(profile, v)?;
        if !(qv > 0.0) {
            return Err(Error::Precondition(format!(
                "vertex {v} is in the support but receives feedback with probability {qv}"
            )));
        }
        total += profile.q[v] * c_coefficient(&profile.q, v)? / qv;
    }
    Ok(total)
}

/// `1 − (1 − q)^k`, accurate for small `q`.
fn hit_probability(q: f64, k: usize) -> f64 {
    -(k as f64 * (-q).ln_1p()).exp_m1()
}

/// `Q` for uniform `q ∈ (0, 1]`:
/// `(1/N) Σ_v (1 − (1−q)^N)/(1 − (1−q)^{|N_v|})`.
pub fn q_uniform_closed_form(g: &Graph, q: f64) -> Result<f64> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(Error::validation(format!(
            "uniform activation probability must lie in (0, 1], got {q}; \
             the q → 0 limit is q_uniform_limit"
        )));
    }
    let n = g.n();
    if n == 0 {
        return Ok(0.0);
    }
    let top = hit_probability(q, n);
    let sum: f64 = (0..n)
        .map(|v| top / hit_probability(q, g.closed_neighborhood_size(v)))
        .sum();
    Ok(sum / n as f64)
}

/// `lim_{q→0⁺} Q(q) = Σ_v 1/|N_v|`.
pub fn q_uniform_limit(g: &Graph) -> f64 {
    (0..g.n())
        .map(|v| 1.0 / g.closed_neighborhood_size(v) as f64)
        .sum()
}

/// `(α + 1)/(1 − e⁻¹)`, the upper bound on `Q`.
pub fn q_constant_bound(alpha: usize) -> f64 {
    (alpha as f64 + 1.0) / (-(-1.0f64).exp_m1())
}

/// The families of checks run by [`verify_constants`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    /// `Σ q_v/Q_v ≤ α` for a distribution `q` with neighborhood masses `Q_v`.
    RatioBound,
    /// Polynomial `c_v` against subset enumeration.
    CExact,
    /// `Q ≤ (α+1)/(1−e⁻¹)`.
    QBound,
    /// Closed form against the general `Q` for uniform `q`.
    UniformClosedForm,
    /// `Q(q)` non-increasing along the grid.
    UniformMonotone,
    /// `1 ≤ Q(q) ≤ Σ 1/|N_v|`.
    UniformRange,
    /// `Q(1) = 1` and `Q(q) → Σ 1/|N_v|` as `q → 0`.
    UniformLimits,
    /// `Q ≤ max{3, α}` when `Σ q_v = 1`; reported, never gating.
    QMaxThreeAlpha,
}

impl CheckId {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::RatioBound => "ratio-bound",
            CheckId::CExact => "c-exact",
            CheckId::QBound => "q-bound",
            CheckId::UniformClosedForm => "uniform-closed-form",
            CheckId::UniformMonotone => "uniform-monotone",
            CheckId::UniformRange => "uniform-range",
            CheckId::UniformLimits => "uniform-limits",
            CheckId::QMaxThreeAlpha => "q-max-three-alpha",
        }
    }

    pub fn is_gating(self) -> bool {
        self != CheckId::QMaxThreeAlpha
    }

    pub const ALL: [CheckId; 8] = [
        CheckId::RatioBound,
        CheckId::CExact,
        CheckId::QBound,
        CheckId::UniformClosedForm,
        CheckId::UniformMonotone,
        CheckId::UniformRange,
        CheckId::UniformLimits,
        CheckId::QMaxThreeAlpha,
    ];
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub check: CheckId,
    pub sample: usize,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    /// Instance description, filled only for failures.
    pub counterexample: Option<String>,
}

/// Sample sizes and seed of a verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub ratio_samples: usize,
    pub c_samples: usize,
    pub q_samples: usize,
    pub uniform_graphs: usize,
    /// Flips the ratio-bound comparison; exercises the failure path.
    pub inject_fault: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0x5EED,
            ratio_samples: 1000,
            c_samples: 500,
            q_samples: 1000,
            uniform_graphs: 40,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    /// Gating failures.
    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.pass && e.check.is_gating())
    }

    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    /// `check,sample,value,bound,pass`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,sample,value,bound,pass\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{},{},{:e},{:e},{}",
                e.check.as_str(),
                e.sample,
                e.value,
                e.bound,
                e.pass
            );
        }
        out
    }

    /// One line per check with counts, then the first counterexample of
    /// each failing check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for id in CheckId::ALL {
            let rows: Vec<&CheckEntry> = self.entries.iter().filter(|e| e.check == id).collect();
            if rows.is_empty() {
                continue;
            }
            let failed = rows.iter().filter(|e| !e.pass).count();
            let status = match (failed, id.is_gating()) {
                (0, _) => "PASS",
                (_, true) => "FAIL",
                (_, false) => "NOTE",
            };
            let _ = writeln!(
                out,
                "{status} {:<20} {:>6} rows, {failed} violations",
                id.as_str(),
                rows.len()
            );
            if let Some(e) = rows.iter().find(|e| !e.pass) {
                let _ = writeln!(
                    out,
                    "     sample {}: value {} vs bound {}; {}",
                    e.sample,
                    e.value,
                    e.bound,
                    e.counterexample.as_deref().unwrap_or("")
                );
            }
        }
        out
    }
}

fn entry(check: CheckId, sample: usize, value: f64, bound: f64, pass: bool, describe: impl FnOnce() -> String) -> CheckEntry {
    CheckEntry {
        check,
        sample,
        value,
        bound,
        pass,
        counterexample: (!pass).then(describe),
    }
}

fn describe(g: &Graph, q: &[f64]) -> String {
    format!("n={} edges={:?} q={:?}", g.n(), g.edges(), q)
}

/// A random graph on `1..=max_n` vertices with a random edge density.
fn random_graph(rng: &mut SimRng, max_n: usize) -> Result<Graph> {
    let n = rng.random_range(1..=max_n);
    let p: f64 = rng.random();
    generate(&GraphFamily::Gnp { n, p }, rng.random())
}

/// A uniform draw from the probability simplex, as normalized Exp(1)
/// variables.
fn dirichlet(rng: &mut SimRng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = e.iter().sum();
    e.iter().map(|x| x / total).collect()
}

/// Independent probabilities in `[0, 1]`, with exact zeros and ones mixed in.
fn mixed_probabilities(rng: &mut SimRng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| match rng.random_range(0..10) {
            0 => 0.0,
            1 => 1.0,
            _ => rng.random(),
        })
        .collect()
}

fn sample_stream(seed: u64, check: CheckId, sample: usize) -> SimRng {
    stream(replicate_seed(seed ^ ((check as u64) << 56), sample as u64))
}

/// Runs every check on a seeded random corpus. Samples are independent and
/// evaluated in parallel; entries come back in a fixed order.
pub fn verify_constants(opts: &VerifyOptions) -> Result<VerificationReport> {
    let mut entries = Vec::new();

    let ratio: Vec<CheckEntry> = (0..opts.ratio_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_stream(opts.seed, CheckId::RatioBound, i);
            let g = random_graph(&mut rng, 7)?;
            let q = dirichlet(&mut rng, g.n());
            let r = verify_ratio_bound(&g, &q)?;
            let bound = r.alpha as f64;
            let pass = if opts.inject_fault {
                r.sum > bound + 1e-9
            } else {
                r.sum <= bound + 1e-9
            };
            Ok(entry(CheckId::RatioBound, i, r.sum, bound, pass, || describe(&g, &q)))
        })
        .collect::<Result<_>>()?;
    entries.extend(ratio);

    let c: Vec<CheckEntry> = (0..opts.c_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_stream(opts.seed, CheckId::CExact, i);
            let n = rng.random_range(1..=12);
            let q = mixed_probabilities(&mut rng, n);
            let v = rng.random_range(0..n);
            let diff = (c_coefficient(&q, v)? - c_coefficient_bruteforce(&q, v)?).abs();
            Ok(entry(CheckId::CExact, i, diff, 1e-10, diff <= 1e-10, || {
                format!("v={v} q={q:?}")
            }))
        })
        .collect::<Result<_>>()?;
    entries.extend(c);

    let q_rows: Vec<Vec<CheckEntry>> = (0..opts.q_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_stream(opts.seed, CheckId::QBound, i);
            let g = random_graph(&mut rng, 12)?;
            let on_simplex = i % 2 == 1;
            let q = if on_simplex {
                dirichlet(&mut rng, g.n())
            } else {
                mixed_probabilities(&mut rng, g.n())
            };
            let alpha = independence_number_exact(&g)?;
            let profile = ActivationProfile::new(g.clone(), q.clone())?;
            let value = q_constant(&profile)?;
            let bound = q_constant_bound(alpha);
            let mut rows = vec![entry(CheckId::QBound, i, value, bound, value <= bound + 1e-9, || {
                describe(&g, &q)
            })];
            if on_simplex {
                let bound = alpha.max(3) as f64;
                rows.push(entry(CheckId::QMaxThreeAlpha, i, value, bound, value <= bound + 1e-9, || {
                    describe(&g, &q)
                }));
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    entries.extend(q_rows.into_iter().flatten());

    let uniform: Vec<Vec<CheckEntry>> = uniform_corpus(opts)?
        .into_par_iter()
        .enumerate()
        .map(|(i, g)| uniform_checks(i, &g))
        .collect::<Result<_>>()?;
    entries.extend(uniform.into_iter().flatten());

    Ok(VerificationReport { entries })
}

fn uniform_corpus(opts: &VerifyOptions) -> Result<Vec<Graph>> {
    let mut graphs = vec![
        generate(&GraphFamily::Complete { n: 6 }, 0)?,
        generate(&GraphFamily::Edgeless { n: 5 }, 0)?,
        generate(&GraphFamily::Star { n: 10 }, 0)?,
        generate(&GraphFamily::Cycle { n: 5 }, 0)?,
        generate(&GraphFamily::Cliques { count: 4, size: 3 }, 0)?,
    ];
    for i in 0..opts.uniform_graphs {
        let mut rng = sample_stream(opts.seed, CheckId::UniformClosedForm, i);
        graphs.push(random_graph(&mut rng, 12)?);
    }
    Ok(graphs)
}

/// Grid `q ∈ {0.05, 0.10, …, 1}`.
fn uniform_grid() -> Vec<f64> {
    (1..=20).map(|k| k as f64 / 20.0).collect()
}

fn uniform_checks(sample: usize, g: &Graph) -> Result<Vec<CheckEntry>> {
    let limit = q_uniform_limit(g);
    let mut rows = Vec::new();
    let mut prev = f64::INFINITY;
    for q in uniform_grid() {
        let closed = q_uniform_closed_form(g, q)?;
        let general = q_constant(&ActivationProfile::new(g.clone(), vec![q; g.n()])?)?;
        let desc = || format!("q={q} n={} edges={:?}", g.n(), g.edges());
        let diff = (closed - general).abs();
        rows.push(entry(CheckId::UniformClosedForm, sample, diff, 1e-10, diff <= 1e-10, desc));
        rows.push(entry(CheckId::UniformMonotone, sample, closed, prev, closed <= prev + 1e-12, desc));
        let in_range = closed >= 1.0 - 1e-9 && closed <= limit + 1e-9;
        rows.push(entry(CheckId::UniformRange, sample, closed, limit, in_range, desc));
        prev = closed;
    }
    let at_one = q_uniform_closed_form(g, 1.0)?;
    rows.push(entry(CheckId::UniformLimits, sample, at_one, 1.0, (at_one - 1.0).abs() <= 1e-12, || {
        format!("Q(1) on n={} edges={:?}", g.n(), g.edges())
    }));
    let near_zero = q_uniform_closed_form(g, 1e-12)?;
    let gap = (near_zero - limit).abs();
    rows.push(entry(CheckId::UniformLimits, sample, near_zero, limit, gap <= 1e-9 * limit, || {
        format!("Q(1e-12) on n={} edges={:?}", g.n(), g.edges())
    }));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::draw_multi;
    use crate::graph::maximal_independent_set;
    use proptest::prelude::*;

    fn star(n: usize) -> Graph {
        generate(&GraphFamily::Star { n }, 0).unwrap()
    }

    fn profile(g: Graph, q: f64) -> ActivationProfile {
        let n = g.n();
        ActivationProfile::new(g, vec![q; n]).unwrap()
    }

    #[test]
    fn update_probability_examples() {
        let p = profile(star(4), 0.5);
        assert_eq!(update_probability(&p, 0).unwrap(), 0.9375);
        assert_eq!(update_probability(&p, 2).unwrap(), 0.75);
        let p = ActivationProfile::new(star(4), vec![0.2, 1.0, 0.3, 0.0]).unwrap();
        assert_eq!(update_probability(&p, 1).unwrap(), 1.0);
        assert!(update_probability(&p, 4).is_err());
        assert!(ActivationProfile::new(star(3), vec![0.2, 1.5, 0.0]).is_err());
        assert!(ActivationProfile::new(star(3), vec![0.2]).is_err());
    }

    #[test]
    fn c_examples() {
        assert_eq!(c_coefficient(&[0.4], 0).unwrap(), 1.0);
        assert_eq!(c_coefficient(&[0.4, 1.0], 0).unwrap(), 0.5);
        assert_eq!(c_coefficient(&[0.4, 0.5], 0).unwrap(), 0.75);
        assert_eq!(c_coefficient_bruteforce(&[0.0; 5], 2).unwrap(), 1.0);
        assert!((c_coefficient_bruteforce(&[1.0; 5], 2).unwrap() - 0.2).abs() < 1e-15);
        assert!(matches!(c_coefficient_bruteforce(&[0.5; 21], 0), Err(Error::TooLarge(_))));
        assert!(c_coefficient(&[0.5; 3], 3).is_err());
    }

    #[test]
    fn share_examples() {
        let q = [0.3; 6];
        let expected = (1.0 - 0.7f64.powi(6)) / 6.0;
        for v in 0..6 {
            assert!((expected_activation_share(&q, v).unwrap() - expected).abs() < 1e-14);
        }
        assert_eq!(expected_activation_share(&[0.0, 0.5], 0).unwrap(), 0.0);
        assert_eq!(expected_activation_share(&[1.0, 1.0], 1).unwrap(), 0.5);
    }

    #[test]
    fn q_constant_examples() {
        for g in [star(7), generate(&GraphFamily::Cycle { n: 5 }, 0).unwrap(), Graph::edgeless(4)] {
            assert!((q_constant(&profile(g, 1.0)).unwrap() - 1.0).abs() < 1e-14);
        }
        let e = Graph::edgeless(6);
        assert!((q_constant(&profile(e.clone(), 1e-9)).unwrap() - 6.0).abs() < 1e-6);
        assert!((q_uniform_limit(&e) - 6.0).abs() < 1e-15);
        assert_eq!(q_constant(&ActivationProfile::new(star(3), vec![0.0; 3]).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_examples() {
        let s = star(10);
        assert!((q_uniform_closed_form(&s, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let limit = 1.0 / 10.0 + 9.0 / 2.0;
        assert!((q_uniform_limit(&s) - limit).abs() < 1e-14);
        assert!((q_uniform_closed_form(&s, 1e-12).unwrap() - limit).abs() < 1e-9);
        for q in [0.01, 0.3, 0.77, 1.0] {
            let k = generate(&GraphFamily::Complete { n: 7 }, 0).unwrap();
            assert!((q_uniform_closed_form(&k, q).unwrap() - 1.0).abs() < 1e-14);
        }
        assert!(q_uniform_closed_form(&s, 0.0).is_err());
        assert!(q_uniform_closed_form(&s, 1.2).is_err());
        // edgeless(5): decreasing from 5 toward 1
        let e = Graph::edgeless(5);
        let vals: Vec<f64> = uniform_grid().iter().map(|&q| q_uniform_closed_form(&e, q).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(vals[0] < 5.0 && vals[0] > 4.0);
        assert!((vals[19] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bound_values() {
        assert!((q_constant_bound(1) - 3.163953413738653).abs() < 1e-12);
        assert!((q_constant_bound(9) - 15.819767068693265).abs() < 1e-11);
        for a in 1..50 {
            assert!(q_constant_bound(a) <= 1.6 * (a as f64 + 1.0));
        }
    }

    fn enumerate_nonempty(q: &[f64]) -> f64 {
        let n = q.len();
        let mut total = 0.0;
        for mask in 1u32..(1 << n) {
            total += (0..n)
                .map(|i| if mask >> i & 1 == 1 { q[i] } else { 1.0 - q[i] })
                .product::<f64>();
        }
        total
    }

    proptest! {
        #[test]
        fn shares_sum_to_nonempty_probability(q in prop::collection::vec(0.0f64..=1.0, 1..=12)) {
            let sum: f64 = (0..q.len()).map(|v| expected_activation_share(&q, v).unwrap()).sum();
            let direct = 1.0 - q.iter().map(|p| 1.0 - p).product::<f64>();
            prop_assert!((sum - enumerate_nonempty(&q)).abs() <= 1e-12);
            prop_assert!((sum - direct).abs() <= 1e-12);
        }

        #[test]
        fn c_matches_enumeration(q in prop::collection::vec(0.0f64..=1.0, 1..=12), pick in 0usize..12) {
            let v = pick % q.len();
            let a = c_coefficient(&q, v).unwrap();
            prop_assert!((a - c_coefficient_bruteforce(&q, v).unwrap()).abs() <= 1e-12);
            prop_assert!(a > 0.0 && a <= 1.0);
        }

        #[test]
        fn c_is_monotone(q in prop::collection::vec(0.0f64..=1.0, 2..=10), pick in 0usize..10,
                         bump in 0.0f64..=1.0) {
            let v = pick % q.len();
            let w = (v + 1) % q.len();
            let mut higher = q.clone();
            higher[w] = q[w] + (1.0 - q[w]) * bump;
            prop_assert!(c_coefficient(&higher, v).unwrap() <= c_coefficient(&q, v).unwrap() + 1e-15);
        }

        #[test]
        fn support_restriction(n in 1usize..=10, p in 0.0f64..=1.0, seed in any::<u64>(),
                               q in prop::collection::vec(0.0f64..=1.0, 10), zero in prop::collection::vec(any::<bool>(), 10)) {
            let g = generate(&GraphFamily::Gnp { n, p }, seed).unwrap();
            let q: Vec<f64> = (0..n).map(|i| if zero[i] { 0.0 } else { q[i] }).collect();
            let full = ActivationProfile::new(g.clone(), q.clone()).unwrap();
            let support = full.support();
            let sub = ActivationProfile::new(
                g.induced_subgraph(&support).unwrap(),
                support.iter().map(|&v| q[v]).collect(),
            ).unwrap();
            prop_assert!((q_constant(&full).unwrap() - q_constant(&sub).unwrap()).abs() <= 1e-12);
        }

        #[test]
        fn q_bound_holds(n in 1usize..=10, p in 0.0f64..=1.0, seed in any::<u64>(),
                         q in prop::collection::vec(0.0f64..=1.0, 10)) {
            let g = generate(&GraphFamily::Gnp { n, p }, seed).unwrap();
            let alpha = independence_number_exact(&g).unwrap();
            let value = q_constant(&ActivationProfile::new(g, q[..n].to_vec()).unwrap()).unwrap();
            prop_assert!(value <= q_constant_bound(alpha) + 1e-9);
        }
    }

    /// Monte Carlo estimate of `E[X(v)/Σ X(w)]` over 10⁶ draws.
    #[test]
    fn share_monte_carlo() {
        let q = [0.7, 0.2, 0.45, 0.9, 0.05, 0.3];
        let v = 2;
        let mut rng = stream(11);
        let draws = 1_000_000;
        let (mut sum, mut sq) = (0.0, 0.0);
        for _ in 0..draws {
            let s = draw_multi(&q, &mut rng).unwrap();
            let x = if s.contains(&v) { 1.0 / s.len() as f64 } else { 0.0 };
            sum += x;
            sq += x * x;
        }
        let mean = sum / draws as f64;
        let se = ((sq / draws as f64 - mean * mean) / draws as f64).sqrt();
        let exact = expected_activation_share(&q, v).unwrap();
        assert!((mean - exact).abs() <= 4.0 * se, "{mean} vs {exact} (se {se})");
    }

    #[test]
    fn verification_passes_and_is_reproducible() {
        let opts = VerifyOptions {
            ratio_samples: 200,
            c_samples: 100,
            q_samples: 200,
            uniform_graphs: 8,
            ..VerifyOptions::default()
        };
        let a = verify_constants(&opts).unwrap();
        assert!(a.all_passed(), "{}", a.summary());
        assert_eq!(a.to_csv(), verify_constants(&opts).unwrap().to_csv());
        assert!(a.entries.iter().any(|e| e.check == CheckId::QMaxThreeAlpha));
    }

    #[test]
    fn injected_fault_is_reported() {
        let opts = VerifyOptions {
            ratio_samples: 20,
            c_samples: 5,
            q_samples: 5,
            uniform_graphs: 1,
            inject_fault: true,
            ..VerifyOptions::default()
        };
        let r = verify_constants(&opts).unwrap();
        assert!(!r.all_passed());
        let first = r.failures().next().unwrap();
        assert_eq!(first.check, CheckId::RatioBound);
        assert!(first.counterexample.as_ref().unwrap().contains("edges="));
        assert!(r.summary().contains("FAIL ratio-bound"));
    }

    #[test]
    fn complete_graphs_have_unit_q() {
        for n in 1..=8 {
            let g = generate(&GraphFamily::Complete { n }, 0).unwrap();
            for q in uniform_grid() {
                assert!((q_constant(&profile(g.clone(), q)).unwrap() - 1.0).abs() < 1e-12);
            }
            // a maximal independent set of a complete graph is a single vertex
            assert_eq!(maximal_independent_set(&g).len(), 1);
        }
    }
}
