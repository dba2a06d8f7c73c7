//! Monte Carlo simulation of random graphs (permutation model) and multigraphs (uniform
//! model) at a fixed edge count, with post hoc component classification.

pub mod classify;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::census::ForbiddenSet;
use crate::error::{Error, Result};
use crate::oracle::brute::with_workers;
use crate::probability::ComponentProfile;

pub use classify::{classify_component, ComponentClass, DEFAULT_SEARCH_BUDGET};

/// Upper bound on `n · trials` for a single run.
pub const WORK_LIMIT: u64 = 20_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProcessModel {
    /// A uniformly random `m`-subset of the `C(n,2)` possible edges.
    Permutation,
    /// `m` independent uniform ordered pairs; loops and repeats kept.
    Uniform,
}

impl FromStr for ProcessModel {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "permutation" | "graph" => Ok(ProcessModel::Permutation),
            "uniform" | "multigraph" => Ok(ProcessModel::Uniform),
            other => Err(Error::Parse(format!("unknown process model '{other}'"))),
        }
    }
}

impl fmt::Display for ProcessModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProcessModel::Permutation => "permutation",
            ProcessModel::Uniform => "uniform",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeTarget {
    Count(usize),
    /// `m = round((n/2)(1 + μ n^{-1/3}))`.
    Window(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProcessConfig {
    pub n: usize,
    pub edges: EdgeTarget,
    pub model: ProcessModel,
    pub forbidden: ForbiddenSet,
    pub trials: u64,
    pub seed: u64,
    pub max_excess_tracked: usize,
    pub search_budget: u64,
}

impl ProcessConfig {
    /// `m = ⌊n/2⌋`, nothing forbidden, three excess levels tracked.
    pub fn new(n: usize, model: ProcessModel, trials: u64, seed: u64) -> Self {
        ProcessConfig {
            n,
            edges: EdgeTarget::Count(n / 2),
            model,
            forbidden: ForbiddenSet::none(),
            trials,
            seed,
            max_excess_tracked: 3,
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }

    pub fn with_forbidden(mut self, forbidden: ForbiddenSet) -> Self {
        self.forbidden = forbidden;
        self
    }

    pub fn edge_count(&self) -> Result<usize> {
        match self.edges {
            EdgeTarget::Count(m) => Ok(m),
            EdgeTarget::Window(mu) => {
                let nf = self.n as f64;
                if mu.abs() > nf.powf(1.0 / 12.0) {
                    return Err(Error::OutOfRange(format!("|μ| = {} exceeds n^(1/12)", mu.abs())));
                }
                Ok((nf / 2.0 * (1.0 + mu * nf.powf(-1.0 / 3.0))).round() as usize)
            }
        }
    }

    pub fn validate(&self) -> Result<usize> {
        if self.n == 0 || self.trials == 0 {
            return Err(Error::OutOfRange("need n >= 1 and trials >= 1".into()));
        }
        if self.n > u32::MAX as usize {
            return Err(Error::ResourceLimit("n must fit in 32 bits".into()));
        }
        let m = self.edge_count()?;
        if self.model == ProcessModel::Permutation && m as u64 > (self.n as u64 * (self.n as u64 - 1)) / 2 {
            return Err(Error::OutOfRange(format!("m = {m} exceeds C(n, 2)")));
        }
        if (self.n as u64).saturating_mul(self.trials) > WORK_LIMIT {
            return Err(Error::ResourceLimit(format!("n · trials exceeds {WORK_LIMIT}")));
        }
        Ok(m)
    }
}

/// Classification of one simulated graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Component counts for excess `1..=max_excess_tracked`.
    pub profile: ComponentProfile,
    pub has_higher_cyclic: bool,
    pub max_excess: i64,
    /// One flag per forbidden member (polygons first): some component contains a copy.
    pub forbidden_hits: Vec<bool>,
    /// A copy search ran out of budget; the trial is discarded from estimates.
    pub discarded: bool,
}

impl TrialOutcome {
    pub fn any_forbidden(&self) -> bool {
        self.forbidden_hits.iter().any(|&hit| hit)
    }

    /// Every component has excess at most the tracked level and contains no forbidden member.
    pub fn all_low_and_free(&self) -> bool {
        !self.has_higher_cyclic && !self.any_forbidden()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    /// Every component has excess at most `k`.
    MaxExcess(i64),
    /// Every component has excess at most `k` and no forbidden member occurs.
    MaxExcessFree(i64),
    /// Exactly this profile, nothing above it, nothing forbidden.
    Profile(ComponentProfile),
}

impl Event {
    pub fn holds(&self, outcome: &TrialOutcome) -> bool {
        match self {
            Event::MaxExcess(k) => outcome.max_excess <= *k,
            Event::MaxExcessFree(k) => outcome.max_excess <= *k && !outcome.any_forbidden(),
            Event::Profile(profile) => {
                let width = profile.counts.len().max(outcome.profile.counts.len());
                let padded = |p: &ComponentProfile| (0..width).map(|i| p.counts.get(i).copied().unwrap_or(0)).collect::<Vec<_>>();
                outcome.all_low_and_free() && padded(profile) == padded(&outcome.profile)
            }
        }
    }
}

impl FromStr for Event {
    type Err = Error;

    /// `maxexcess:K`, `free:K` or `profile:r1,r2,...`.
    fn from_str(text: &str) -> Result<Self> {
        let (head, tail) = text.trim().split_once(':').ok_or_else(|| Error::Parse(format!("event '{text}' lacks ':'")))?;
        let bad = |_| Error::Parse(format!("bad event argument '{tail}'"));
        match head.to_ascii_lowercase().as_str() {
            "maxexcess" => Ok(Event::MaxExcess(tail.trim().parse().map_err(bad)?)),
            "free" => Ok(Event::MaxExcessFree(tail.trim().parse().map_err(bad)?)),
            "profile" => {
                let counts = tail.split(',').map(|c| c.trim().parse::<u32>().map_err(bad)).collect::<Result<Vec<_>>>()?;
                Ok(Event::Profile(ComponentProfile::new(counts)))
            }
            other => Err(Error::Parse(format!("unknown event '{other}'"))),
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::MaxExcess(k) => write!(f, "maxexcess:{k}"),
            Event::MaxExcessFree(k) => write!(f, "free:{k}"),
            Event::Profile(p) => {
                let parts: Vec<String> = p.counts.iter().map(u32::to_string).collect();
                write!(f, "profile:{}", parts.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub p_hat: f64,
    pub stderr: f64,
    /// Trials counted in the estimate (discarded ones excluded).
    pub trials: u64,
    pub discarded: u64,
    pub seed: u64,
    pub event: String,
}

impl Estimate {
    fn from_counts(hits: u64, used: u64, discarded: u64, seed: u64, event: &Event) -> Self {
        let p_hat = if used == 0 { 0.0 } else { hits as f64 / used as f64 };
        let stderr = if used == 0 { 0.0 } else { (p_hat * (1.0 - p_hat) / used as f64).sqrt() };
        Estimate { p_hat, stderr, trials: used, discarded, seed, event: event.to_string() }
    }
}

/// Per-worker buffers reused across trials.
struct Workspace {
    parent: Vec<u32>,
    size: Vec<u32>,
    edge_total: Vec<u32>,
    edges: Vec<(u32, u32)>,
    seen: HashSet<u64>,
    /// Index of each cyclic root among the classified components, `u32::MAX` otherwise.
    slot: Vec<u32>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace { parent: vec![0; n], size: vec![0; n], edge_total: vec![0; n], edges: Vec::new(), seen: HashSet::new(), slot: vec![u32::MAX; n] }
    }

    fn reset(&mut self) {
        for (i, p) in self.parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        self.size.fill(1);
        self.edge_total.fill(0);
        self.edges.clear();
        self.seen.clear();
        self.slot.fill(u32::MAX);
    }

    fn find(&mut self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            let grand = self.parent[self.parent[v as usize] as usize];
            self.parent[v as usize] = grand;
            v = grand;
        }
        v
    }

    fn add_edge(&mut self, u: u32, v: u32) {
        let (mut a, mut b) = (self.find(u), self.find(v));
        if a != b {
            if self.size[a as usize] < self.size[b as usize] {
                std::mem::swap(&mut a, &mut b);
            }
            self.parent[b as usize] = a;
            self.size[a as usize] += self.size[b as usize];
            self.edge_total[a as usize] += self.edge_total[b as usize];
        }
        self.edge_total[a as usize] += 1;
        self.edges.push((u, v));
    }

    fn excess_of_root(&self, root: u32) -> i64 {
        self.edge_total[root as usize] as i64 - self.size[root as usize] as i64
    }
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn sample_edges(config: &ProcessConfig, m: usize, rng: &mut ChaCha8Rng, work: &mut Workspace) {
    let n = config.n as u32;
    match config.model {
        ProcessModel::Uniform => {
            for _ in 0..m {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                work.add_edge(u, v);
            }
        }
        ProcessModel::Permutation => {
            while work.edges.len() < m {
                let u = rng.gen_range(0..n);
                let v = rng.gen_range(0..n);
                if u == v {
                    continue;
                }
                let (a, b) = if u < v { (u, v) } else { (v, u) };
                if work.seen.insert((a as u64) << 32 | b as u64) {
                    work.add_edge(a, b);
                }
            }
        }
    }
}

fn simulate(config: &ProcessConfig, m: usize, trial: u64, work: &mut Workspace) -> Result<TrialOutcome> {
    work.reset();
    let mut rng = trial_rng(config.seed, trial);
    sample_edges(config, m, &mut rng, work);
    let n = config.n;
    let roots: Vec<u32> = (0..n as u32).filter(|&v| work.parent[v as usize] == v).collect();
    if n <= 4096 {
        let total: i64 = roots.iter().map(|&r| work.excess_of_root(r)).sum();
        if total != m as i64 - n as i64 {
            return Err(Error::Consistency(format!("component excess sum {total} != m - n = {}", m as i64 - n as i64)));
        }
    }
    let tracked = config.max_excess_tracked;
    let mut counts = vec![0u32; tracked];
    let mut max_excess = i64::MIN;
    let mut has_higher_cyclic = false;
    let mut cyclic = 0usize;
    for &root in &roots {
        let excess = work.excess_of_root(root);
        max_excess = max_excess.max(excess);
        if excess >= 1 {
            if excess as usize <= tracked {
                counts[excess as usize - 1] += 1;
            } else {
                has_higher_cyclic = true;
            }
        }
        if excess >= 0 {
            work.slot[root as usize] = cyclic as u32;
            cyclic += 1;
        }
    }
    while counts.last() == Some(&0) {
        counts.pop();
    }
    let members = config.forbidden.polygon_set().len() + config.forbidden.others().len();
    let mut forbidden_hits = vec![false; members];
    let mut discarded = false;
    if members > 0 && cyclic > 0 {
        let mut vertex_lists: Vec<Vec<usize>> = vec![Vec::new(); cyclic];
        let mut edge_lists: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cyclic];
        for v in 0..n as u32 {
            let root = work.find(v);
            let slot = work.slot[root as usize];
            if slot != u32::MAX {
                vertex_lists[slot as usize].push(v as usize);
            }
        }
        for i in 0..work.edges.len() {
            let (u, v) = work.edges[i];
            let root = work.find(u);
            let slot = work.slot[root as usize];
            if slot != u32::MAX {
                edge_lists[slot as usize].push((u as usize, v as usize));
            }
        }
        for (vertices, edges) in vertex_lists.iter().zip(&edge_lists) {
            let class = classify_component(vertices, edges, &config.forbidden, config.search_budget);
            discarded |= class.exhausted;
            for (flag, hit) in forbidden_hits.iter_mut().zip(class.hits) {
                *flag |= hit;
            }
        }
    }
    Ok(TrialOutcome { profile: ComponentProfile::new(counts), has_higher_cyclic, max_excess, forbidden_hits, discarded })
}

/// Runs trial number `trial` of the configuration on its own.
pub fn simulate_trial(config: &ProcessConfig, trial: u64) -> Result<TrialOutcome> {
    let m = config.validate()?;
    simulate(config, m, trial, &mut Workspace::new(config.n))
}

/// Every trial outcome, in trial order.
pub fn run_outcomes(config: &ProcessConfig, workers: Option<usize>) -> Result<Vec<TrialOutcome>> {
    let m = config.validate()?;
    with_workers(workers, || {
        (0..config.trials)
            .into_par_iter()
            .map_init(|| Workspace::new(config.n), |work, trial| simulate(config, m, trial, work))
            .collect::<Result<Vec<_>>>()
    })?
}

/// Frequency estimate of `event`; trials keyed by `(seed, index)` so the result does not
/// depend on scheduling or worker count.
pub fn run_trials(config: &ProcessConfig, event: &Event, workers: Option<usize>) -> Result<Estimate> {
    let m = config.validate()?;
    let (hits, discarded) = with_workers(workers, || {
        (0..config.trials)
            .into_par_iter()
            .map_init(
                || Workspace::new(config.n),
                |work, trial| {
                    simulate(config, m, trial, work).map(|outcome| {
                        if outcome.discarded {
                            (0u64, 1u64)
                        } else {
                            (event.holds(&outcome) as u64, 0)
                        }
                    })
                },
            )
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))
    })??;
    Ok(Estimate::from_counts(hits, config.trials - discarded, discarded, config.seed, event))
}
