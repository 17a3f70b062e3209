//! Two-phase controller: large steps cut the maximum degree by a constant
//! fraction, small steps work on the top `log n` degree classes.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::augment::{aug_seq_deg_red, AugmentError, DegRedReport};
use crate::certificate::{build_certificate, CertificateError, LowerBoundCertificate};
use crate::graph::Graph;
use crate::tree::{bfs_tree, SpanningTree};

/// Internal accuracy is the user's divided by this.
pub const EPS_SCALE: f64 = 8.0;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("epsilon {0} is outside (0, 1/6)")]
    EpsilonOutOfRange(f64),
}

/// Overrides for the phase entry thresholds, so small graphs can exercise
/// both phases in tests.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseThresholds {
    pub large_step: Option<f64>,
    pub small_step: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub eps_user: f64,
    pub seed: u64,
    pub time_limit: Option<Duration>,
    pub thresholds: PhaseThresholds,
}

impl RunConfig {
    pub fn new(eps_user: f64) -> Result<RunConfig, ConfigError> {
        if !(eps_user > 0.0 && eps_user < 1.0 / 6.0) {
            return Err(ConfigError::EpsilonOutOfRange(eps_user));
        }
        Ok(RunConfig { eps_user, seed: 0, time_limit: None, thresholds: PhaseThresholds::default() })
    }

    pub fn with_seed(mut self, seed: u64) -> RunConfig {
        self.seed = seed;
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps_user / EPS_SCALE
    }

    /// `10 log²n / ε³` with the internal ε.
    pub fn large_step_threshold(&self, n: usize) -> f64 {
        let l = log2(n);
        self.thresholds.large_step.unwrap_or(10.0 * l * l / self.eps().powi(3))
    }

    /// `5 log n / (16 ε²)` with the user's ε: the additive term of the final
    /// guarantee.
    pub fn small_step_threshold(&self, n: usize) -> f64 {
        self.thresholds
            .small_step
            .unwrap_or(5.0 * log2(n) / (16.0 * self.eps_user * self.eps_user))
    }
}

fn log2(n: usize) -> f64 {
    (n.max(1) as f64).log2()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    LargeStepReturn,
    SmallStepReturn,
    SmallStepExit,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::LargeStepReturn => "large-step-return",
            Phase::SmallStepReturn => "small-step-return",
            Phase::SmallStepExit => "small-step-exit",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Large,
    Small,
}

/// One degree-reduction call as seen by the driver.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CallTrace {
    pub phase: StepKind,
    pub k: usize,
    pub d_before: usize,
    pub d_after: usize,
    pub delta_before: usize,
    pub delta_after: usize,
    pub modifications: usize,
    pub h_non_increase: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub degred_calls: usize,
    pub large_step_calls: usize,
    pub small_step_calls: usize,
    pub modifications: usize,
    pub wall_ms: f64,
    pub trace: Vec<CallTrace>,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub tree: SpanningTree,
    pub delta: usize,
    pub certificate: Option<LowerBoundCertificate>,
    pub phase: Phase,
    pub stats: RunStats,
}

#[derive(Debug, Error)]
pub enum DriverError {
    #[error("time limit exceeded (best tree degree {})", .0.delta)]
    TimedOut(Box<RunResult>),
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

/// Whether a call reduced `d_k` by less than the fraction `ε² / (2 log n)`.
pub fn failure_test(d_before: usize, d_after: usize, eps: f64, n: usize) -> bool {
    let gained = d_before.saturating_sub(d_after) as f64;
    gained * 2.0 * log2(n) < eps * eps * d_before as f64
}

/// The `k` in `[Δ + 1 - ⌊log₂n⌋, Δ]` maximizing `c^k |N_k|` with
/// `c = 6 (2 + log_{1+ε} n)`, compared in log space; near-ties go to the
/// larger `k`.
pub fn argmax_k(t: &SpanningTree, eps: f64) -> usize {
    argmax_from(t, eps, 1)
}

fn argmax_from(t: &SpanningTree, eps: f64, floor: usize) -> usize {
    let n = t.n();
    let delta = t.max_degree();
    let width = n.max(1).ilog2() as usize;
    let lo = (delta + 1).saturating_sub(width).max(floor).min(delta);
    let ln_c = (6.0 * (2.0 + (n.max(1) as f64).ln() / (1.0 + eps).ln())).ln();
    let mut best = (f64::NEG_INFINITY, delta);
    for i in lo..=delta {
        let count = t.count_exactly(i);
        if count == 0 {
            continue;
        }
        let score = i as f64 * ln_c + (count as f64).ln();
        if score >= best.0 - 1e-12 {
            best = (score, i);
        }
    }
    best.1
}

struct Run<'a> {
    g: &'a Graph,
    cfg: &'a RunConfig,
    tree: SpanningTree,
    stats: RunStats,
    start: Instant,
}

enum Outcome {
    Continue,
    Certified(Box<LowerBoundCertificate>),
}

impl Run<'_> {
    fn call(&mut self, k: usize, phase: StepKind) -> Result<Outcome, DriverError> {
        if let Some(limit) = self.cfg.time_limit {
            if self.start.elapsed() > limit {
                return Err(DriverError::TimedOut(Box::new(self.result(None, Phase::SmallStepExit))));
            }
        }
        let delta_before = self.tree.max_degree();
        let eps = self.cfg.eps();
        let r: DegRedReport = aug_seq_deg_red(self.g, &mut self.tree, k, eps)?;
        self.stats.degred_calls += 1;
        match phase {
            StepKind::Large => self.stats.large_step_calls += 1,
            StepKind::Small => self.stats.small_step_calls += 1,
        }
        self.stats.modifications += r.modifications;
        self.stats.trace.push(CallTrace {
            phase,
            k,
            d_before: r.d_before,
            d_after: r.d_after,
            delta_before,
            delta_after: self.tree.max_degree(),
            modifications: r.modifications,
            h_non_increase: r.h_non_increase,
        });
        if failure_test(r.d_before, r.d_after, eps, self.g.n()) {
            let state = r.final_state.as_ref().ok_or(CertificateError::NotTerminal)?;
            let cert = build_certificate(state, &self.tree)?;
            return Ok(Outcome::Certified(Box::new(cert)));
        }
        Ok(Outcome::Continue)
    }

    fn stats_now(&self) -> RunStats {
        let mut stats = self.stats.clone();
        stats.wall_ms = self.start.elapsed().as_secs_f64() * 1e3;
        stats
    }

    fn result(&self, certificate: Option<LowerBoundCertificate>, phase: Phase) -> RunResult {
        RunResult { tree: self.tree.clone(), delta: self.tree.max_degree(), certificate, phase, stats: self.stats_now() }
    }

    fn finish(self, certificate: Option<LowerBoundCertificate>, phase: Phase) -> RunResult {
        let stats = self.stats_now();
        RunResult { delta: self.tree.max_degree(), tree: self.tree, certificate, phase, stats }
    }

    fn large_steps(&mut self) -> Result<Option<LowerBoundCertificate>, DriverError> {
        let n = self.g.n();
        let eps = self.cfg.eps();
        let threshold = self.cfg.large_step_threshold(n);
        loop {
            let delta = self.tree.max_degree();
            if delta < 3 || (delta as f64) < threshold {
                return Ok(None);
            }
            let mut k = (((1.0 - 2.0 * eps) * delta as f64).ceil() as usize + 1).clamp(3, delta);
            while self.tree.degree_sum_at_least(k) > 0 {
                if self.tree.degree_sum_at_least(k - 1) <= 2 * self.tree.degree_sum_at_least(k) {
                    if let Outcome::Certified(c) = self.call(k, StepKind::Large)? {
                        return Ok(Some(*c));
                    }
                } else {
                    k += 1;
                }
            }
            if self.tree.max_degree() >= delta {
                // nothing moved this round; leave the rest to small steps
                return Ok(None);
            }
        }
    }

    fn small_steps(&mut self) -> Result<Option<LowerBoundCertificate>, DriverError> {
        let n = self.g.n();
        let eps = self.cfg.eps();
        let threshold = self.cfg.small_step_threshold(n);
        loop {
            let delta = self.tree.max_degree();
            if delta < 3 || (delta as f64) < threshold {
                return Ok(None);
            }
            while self.tree.max_degree() == delta {
                let k = argmax_from(&self.tree, eps, 3);
                if let Outcome::Certified(c) = self.call(k, StepKind::Small)? {
                    return Ok(Some(*c));
                }
            }
        }
    }
}

/// Runs both phases from a BFS tree rooted at a seed-chosen vertex.
pub fn improved_mdst(g: &Graph, cfg: &RunConfig) -> Result<RunResult, DriverError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let root = rng.gen_range(0..g.n());
    let mut run = Run { g, cfg, tree: bfs_tree(g, root), stats: RunStats::default(), start: Instant::now() };
    if let Some(c) = run.large_steps()? {
        return Ok(run.finish(Some(c), Phase::LargeStepReturn));
    }
    if let Some(c) = run.small_steps()? {
        return Ok(run.finish(Some(c), Phase::SmallStepReturn));
    }
    Ok(run.finish(None, Phase::SmallStepExit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_certificate;
    use num_bigint::BigUint;
    use num_traits::One;

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::new(n, e).unwrap()
    }

    fn forced(eps: f64) -> RunConfig {
        let mut c = RunConfig::new(eps).unwrap();
        c.thresholds = PhaseThresholds { large_step: Some(0.0), small_step: Some(0.0) };
        c
    }

    #[test]
    fn epsilon_range() {
        assert!(RunConfig::new(0.1).is_ok());
        assert_eq!(RunConfig::new(0.2), Err(ConfigError::EpsilonOutOfRange(0.2)));
        assert!(RunConfig::new(0.0).is_err());
        assert!(RunConfig::new(f64::NAN).is_err());
        assert_eq!(RunConfig::new(0.08).unwrap().eps(), 0.01);
    }

    #[test]
    fn cycle_exits_immediately() {
        let g = Graph::new(50, (0..50).map(|i| (i, (i + 1) % 50)).collect()).unwrap();
        let r = improved_mdst(&g, &RunConfig::new(0.1).unwrap()).unwrap();
        assert_eq!(r.phase, Phase::SmallStepExit);
        assert!(r.delta <= 2);
        assert_eq!(r.stats.degred_calls, 0);
    }

    #[test]
    fn tree_input_returns_certificate() {
        let g = Graph::new(7, vec![(0, 1), (0, 2), (0, 3), (3, 4), (3, 5), (3, 6)]).unwrap();
        let r = improved_mdst(&g, &forced(0.1)).unwrap();
        assert_eq!(r.delta, 4);
        let cert = r.certificate.expect("certificate");
        let b = verify_certificate(&g, &r.tree, &cert).unwrap();
        assert!(b <= 4);
        assert!(cert.pigeonhole_holds());
    }

    #[test]
    fn forced_phases_reach_hamiltonian_on_complete() {
        let g = complete(40);
        let r = improved_mdst(&g, &forced(0.1)).unwrap();
        r.tree.check(&g).unwrap();
        assert!(r.stats.large_step_calls > 0);
        if let Some(c) = &r.certificate {
            verify_certificate(&g, &r.tree, c).unwrap();
        }
        assert!(r.delta <= 3, "delta {}", r.delta);
    }

    #[test]
    fn large_step_delta_decreases() {
        let g = complete(60);
        let mut cfg = forced(0.1);
        cfg.thresholds.small_step = Some(f64::INFINITY);
        let r = improved_mdst(&g, &cfg).unwrap();
        let mut last = usize::MAX;
        for c in r.stats.trace.iter().filter(|c| c.phase == StepKind::Large) {
            assert!(c.d_after < c.d_before || r.certificate.is_some());
            assert!(c.delta_after <= c.delta_before);
            assert!(c.delta_before <= last);
            last = c.delta_before;
        }
    }

    #[test]
    fn argmax_edge_cases() {
        // star: only N_Δ nonempty in the window
        let g = Graph::new(9, (1..9).map(|v| (0, v)).collect()).unwrap();
        let t = bfs_tree(&g, 0);
        assert_eq!(argmax_k(&t, 0.01), 8);
    }

    #[test]
    fn argmax_matches_big_integers() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 10_000usize;
        let eps = 0.0125;
        for _ in 0..200 {
            // random tree by attaching each vertex to an earlier one, skewed
            let mut edges = Vec::new();
            let hubs = rng.gen_range(1..40);
            for v in 1..n {
                let u = if rng.gen_bool(0.7) { rng.gen_range(0..hubs.min(v)) } else { rng.gen_range(0..v) };
                edges.push((u, v));
            }
            let g = Graph::new(n, edges).unwrap();
            let t = bfs_tree(&g, 0);
            let delta = t.max_degree();
            let lo = (delta + 1).saturating_sub(n.ilog2() as usize).max(1);
            let c_real = 6.0 * (2.0 + (n as f64).ln() / (1.0f64 + eps).ln());
            // scores are compared as c^i |N_i| with c rounded to a big rational p/q
            let q = BigUint::from(1u64 << 40);
            let p = BigUint::from((c_real * (1u64 << 40) as f64) as u64);
            let mut best: Option<(BigUint, usize)> = None;
            for i in lo..=delta {
                let cnt = t.count_exactly(i);
                if cnt == 0 {
                    continue;
                }
                // c^i |N_i| scaled by q^delta so all terms are integers
                let mut s = BigUint::one();
                for _ in 0..i {
                    s *= &p;
                }
                for _ in i..delta {
                    s *= &q;
                }
                s *= BigUint::from(cnt);
                if best.as_ref().is_none_or(|b| s >= b.0) {
                    best = Some((s, i));
                }
            }
            let (_, want) = best.unwrap();
            assert_eq!(argmax_k(&t, eps), want);
        }
    }

    #[test]
    fn failure_test_threshold() {
        // eps² / (2 log n) with n = 1024, eps = 0.1 is 1/2000
        assert!(failure_test(2000, 2000, 0.1, 1024));
        assert!(!failure_test(2000, 1998, 0.1, 1024));
        assert!(failure_test(1_000_000, 999_600, 0.1, 1024));
        assert!(!failure_test(10, 0, 0.1, 1024));
    }
}
