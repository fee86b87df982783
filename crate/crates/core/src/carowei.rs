//! Sampling estimators for the Caro-Wei bound `λ = Σ 1/(deg(v)+1)`.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::index;
use rand::Rng;
use thiserror::Error;

use crate::hash::{HashError, MinWiseHash, VertexPriority, DEFAULT_INDEPENDENCE_CONSTANT};
use crate::report::{EstimateReport, Flag, Parameter};
use crate::seed;
use crate::sketch::{CountMinHH, LinearSketch, SketchError};
use crate::stream::{Model, StreamSequence, StreamUpdate, VertexId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CwError {
    #[error("edge deletions are not supported by this estimator")]
    DeletionUnsupported,
    #[error("estimator needs a {expected} stream, got {found}")]
    IncompatibleModel { expected: &'static str, found: &'static str },
    #[error("all {instances} instances aborted (largest stored count {max_stored}, limit {limit})")]
    AllInstancesAborted {
        instances: usize,
        max_stored: usize,
        limit: f64,
    },
    #[error("counter {count} exceeded limit {limit}")]
    CounterOverflowAbort { count: u64, limit: f64 },
    #[error("no estimates to combine")]
    EmptyInput,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Hash(#[from] HashError),
    #[error(transparent)]
    Sketch(#[from] SketchError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleMode {
    /// Exactly `ceil(pn)` vertices.
    WithoutReplacement,
    /// Each vertex independently with probability `p`.
    Bernoulli,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CwConfig {
    pub epsilon: f64,
    /// Upper bound `d̄` on the average degree.
    pub avg_degree_bound: f64,
    pub seed: u64,
    pub sample_mode: SampleMode,
    /// Storage limit multiplier for the unbounded-degree variant.
    pub abort_factor: f64,
    /// `c_h` in the hash independence `c_h * ceil(log2(1/ε))`.
    pub independence_constant: u32,
    /// Known bound on the maximum degree, checked against `ε²n/(3(d̄+1)³)`.
    pub max_degree: Option<u64>,
    /// Replaces `4(d̄+1)/(ε²n)`.
    pub sampling_probability: Option<f64>,
}

impl CwConfig {
    pub fn new(epsilon: f64, avg_degree_bound: f64, seed: u64) -> Result<Self, CwError> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(CwError::InvalidConfig(format!("epsilon {epsilon} not in (0, 1)")));
        }
        if !(avg_degree_bound >= 0.0 && avg_degree_bound.is_finite()) {
            return Err(CwError::InvalidConfig(format!(
                "average degree bound {avg_degree_bound} must be a non-negative number"
            )));
        }
        Ok(Self {
            epsilon,
            avg_degree_bound,
            seed,
            sample_mode: SampleMode::WithoutReplacement,
            abort_factor: 10.0,
            independence_constant: DEFAULT_INDEPENDENCE_CONSTANT,
            max_degree: None,
            sampling_probability: None,
        })
    }

    pub fn sample_mode(mut self, mode: SampleMode) -> Self {
        self.sample_mode = mode;
        self
    }

    pub fn max_degree(mut self, bound: u64) -> Self {
        self.max_degree = Some(bound);
        self
    }

    pub fn with_sampling_probability(mut self, p: f64) -> Result<Self, CwError> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(CwError::InvalidConfig(format!("sampling probability {p} not in (0, 1]")));
        }
        self.sampling_probability = Some(p);
        Ok(self)
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// `p = min(1, 4(d̄+1)/(ε²n))`.
    pub fn probability(&self, n: usize) -> f64 {
        if let Some(p) = self.sampling_probability {
            return p;
        }
        let raw = 4.0 * (self.avg_degree_bound + 1.0) / (self.epsilon * self.epsilon * n.max(1) as f64);
        raw.min(1.0)
    }

    /// Largest maximum degree covered by the high-probability guarantee.
    pub fn degree_limit(&self, n: usize) -> f64 {
        self.epsilon * self.epsilon * n as f64 / (3.0 * (self.avg_degree_bound + 1.0).powi(3))
    }

    fn degree_flag(&self, n: usize) -> Option<Flag> {
        match self.max_degree {
            None => Some(Flag::DegreeConstraintUnverified),
            Some(d) if d as f64 > self.degree_limit(n) => Some(Flag::DegreeConstraintViolated),
            Some(_) => None,
        }
    }

    fn hash(&self, n: usize, tag: u64) -> Result<MinWiseHash, CwError> {
        let domain = n.max(2) as u64;
        let eps = self.epsilon.max(1.0 / (domain * domain) as f64);
        Ok(MinWiseHash::with_independence_constant(
            eps,
            domain,
            seed::derive(self.seed, tag),
            self.independence_constant,
        )?)
    }

    fn sample(&self, n: usize, p: f64, tag: u64) -> HashSet<VertexId> {
        let mut rng = seed::rng(seed::derive(self.seed, tag));
        if p >= 1.0 {
            return (1..=n as VertexId).collect();
        }
        match self.sample_mode {
            SampleMode::WithoutReplacement => {
                let amount = ((p * n as f64).ceil() as usize).min(n);
                index::sample(&mut rng, n, amount)
                    .into_iter()
                    .map(|i| i as VertexId + 1)
                    .collect()
            }
            SampleMode::Bernoulli => (1..=n as VertexId).filter(|_| rng.gen_bool(p)).collect(),
        }
    }
}

/// Outcome of one Caro-Wei estimator run.
#[derive(Debug, Clone, PartialEq)]
pub struct CwEstimate {
    pub lambda_hat: f64,
    pub p: f64,
    pub sampled: usize,
    pub retained: usize,
    pub space_bytes: usize,
    pub flags: Vec<Flag>,
    /// Heavy hitters removed by the unbounded-degree variant.
    pub heavy: Vec<VertexId>,
    pub instances: usize,
    pub aborted: usize,
}

impl CwEstimate {
    fn new(lambda_hat: f64, p: f64, sampled: usize, retained: usize, space_bytes: usize) -> Self {
        let mut flags = Vec::new();
        if p >= 1.0 {
            flags.push(Flag::ExactSampling);
        }
        Self {
            lambda_hat,
            p,
            sampled,
            retained,
            space_bytes,
            flags,
            heavy: Vec::new(),
            instances: 1,
            aborted: 0,
        }
    }

    fn flag(&mut self, flag: Option<Flag>) {
        if let Some(f) = flag {
            if !self.flags.contains(&f) {
                self.flags.push(f);
                self.flags.sort();
            }
        }
    }

    pub fn to_report(&self, cfg: &CwConfig, n: usize, delta: f64, passes: u8) -> EstimateReport {
        let mut r = lambda_report(self.lambda_hat, cfg.epsilon, delta, n, cfg.seed);
        r.passes = passes;
        r.flags = self.flags.clone();
        r.space_bytes = self.space_bytes;
        r
    }
}

/// One-pass λ report with interval `[λ̂/(1+3ε), min(n, λ̂/(1-3ε))]`.
fn lambda_report(point: f64, eps: f64, delta: f64, n: usize, seed: u64) -> EstimateReport {
    let upper = if 3.0 * eps >= 1.0 {
        n as f64
    } else {
        (point / (1.0 - 3.0 * eps)).min(n as f64).max(point)
    };
    EstimateReport {
        parameter: Parameter::Lambda,
        point,
        lower: point / (1.0 + 3.0 * eps),
        upper,
        factor: 1.0,
        epsilon: eps,
        delta,
        passes: 1,
        flags: Vec::new(),
        seed,
        space_bytes: 0,
        wall_ms: None,
    }
}

fn insertion_edges(stream: &StreamSequence) -> Result<impl Iterator<Item = (VertexId, VertexId)> + '_, CwError> {
    if stream.has_deletions() {
        return Err(CwError::DeletionUnsupported);
    }
    Ok(stream.edge_events().map(|(u, v, _)| (u, v)))
}

const SET_ENTRY_BYTES: usize = 8;

/// One-pass estimate `|S|/p`, where `S` keeps each sampled vertex that
/// precedes all its neighbours under a min-wise hash.
pub fn cw_base(stream: &StreamSequence, cfg: &CwConfig) -> Result<CwEstimate, CwError> {
    let h = cfg.hash(stream.n(), 1)?;
    let space = h.space_bytes();
    let mut est = cw_base_with(stream, cfg, &h)?;
    est.space_bytes += space;
    Ok(est)
}

/// [`cw_base`] with the vertex order supplied by the caller.
pub fn cw_base_with<P: VertexPriority + ?Sized>(
    stream: &StreamSequence,
    cfg: &CwConfig,
    order: &P,
) -> Result<CwEstimate, CwError> {
    let n = stream.n();
    let p = cfg.probability(n);
    let mut s = cfg.sample(n, p, 2);
    let sampled = s.len();
    for (u, v) in insertion_edges(stream)? {
        if order.precedes(u, v) {
            s.remove(&v);
        } else {
            s.remove(&u);
        }
    }
    let mut est = CwEstimate::new(s.len() as f64 / p, p, sampled, s.len(), sampled * SET_ENTRY_BYTES);
    est.flag(cfg.degree_flag(n));
    Ok(est)
}

/// Online independent set: all bits start true, and for each edge the bit
/// of the later endpoint (in hash order) is cleared for good.
#[derive(Debug, Clone)]
pub struct OnlineIndependentSet<P> {
    order: P,
    bits: Vec<bool>,
    size: usize,
}

impl<P: VertexPriority> OnlineIndependentSet<P> {
    pub fn new(n: usize, order: P) -> Self {
        Self {
            order,
            bits: vec![true; n + 1],
            size: n,
        }
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) {
        let loser = if self.order.precedes(u, v) { v } else { u };
        let bit = &mut self.bits[loser as usize];
        if *bit {
            *bit = false;
            self.size -= 1;
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v != 0 && self.bits.get(v as usize).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn members(&self) -> Vec<VertexId> {
        (1..self.bits.len() as VertexId).filter(|&v| self.bits[v as usize]).collect()
    }

    /// Solution bits indexed by vertex id; index 0 is unused.
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn order(&self) -> &P {
        &self.order
    }
}

pub fn cw_online(
    stream: &StreamSequence,
    epsilon: f64,
    seed: u64,
) -> Result<OnlineIndependentSet<MinWiseHash>, CwError> {
    let cfg = CwConfig::new(epsilon, 0.0, seed)?;
    let h = cfg.hash(stream.n(), 1)?;
    let mut sol = OnlineIndependentSet::new(stream.n(), h);
    for (u, v) in insertion_edges(stream)? {
        sol.insert_edge(u, v);
    }
    Ok(sol)
}

/// [`cw_online`] summarised as a report on the final set size. Space is the
/// hash alone; the solution bits are write-only output.
pub fn cw_online_report(stream: &StreamSequence, epsilon: f64, delta: f64, seed: u64) -> Result<EstimateReport, CwError> {
    let sol = cw_online(stream, epsilon, seed)?;
    let mut r = lambda_report(sol.len() as f64, epsilon, delta, stream.n(), seed);
    r.space_bytes = sol.order().space_bytes();
    Ok(r)
}

/// Heavy-hitter thresholds `ψ = τ = ε²/(6(d̄+1)⁴)`.
pub fn heavy_hitter_threshold(cfg: &CwConfig) -> f64 {
    cfg.epsilon * cfg.epsilon / (6.0 * (cfg.avg_degree_bound + 1.0).powi(4))
}

struct Instance<H> {
    hash: H,
    lists: HashMap<VertexId, Vec<VertexId>>,
    stored: usize,
    aborted: bool,
}

/// Caro-Wei estimate without a maximum-degree constraint. One pass feeds a
/// Count-Min heavy-hitter sketch and `ceil(c' log2 n)` instances that keep
/// neighbour lists for sampled vertices; heavy vertices are discarded in
/// post-processing and the largest surviving `|S|/p` is returned.
pub fn cw_unbounded(stream: &StreamSequence, cfg: &CwConfig, c_prime: f64) -> Result<CwEstimate, CwError> {
    let (heavy, hh_space) = heavy_vertices(stream, cfg, c_prime)?;
    let mut est = unbounded_instances(stream, cfg, c_prime, &heavy, false)?;
    est.space_bytes += hh_space;
    est.flag(heavy_regime_flag(stream, cfg)?);
    Ok(est)
}

/// Two-pass form: the first pass finds heavy vertices, the second skips them
/// while building neighbour lists.
pub fn cw_unbounded_two_pass(stream: &StreamSequence, cfg: &CwConfig, c_prime: f64) -> Result<CwEstimate, CwError> {
    let (heavy, hh_space) = heavy_vertices(stream, cfg, c_prime)?;
    let mut est = unbounded_instances(stream, cfg, c_prime, &heavy, true)?;
    est.space_bytes += hh_space;
    est.flag(heavy_regime_flag(stream, cfg)?);
    Ok(est)
}

/// Runs the instances against an externally supplied heavy set.
pub fn cw_unbounded_with_heavy(
    stream: &StreamSequence,
    cfg: &CwConfig,
    c_prime: f64,
    heavy: &BTreeSet<VertexId>,
) -> Result<CwEstimate, CwError> {
    unbounded_instances(stream, cfg, c_prime, heavy, true)
}

fn heavy_regime_flag(stream: &StreamSequence, cfg: &CwConfig) -> Result<Option<Flag>, CwError> {
    let mass = 2 * insertion_edges(stream)?.count();
    Ok((heavy_hitter_threshold(cfg) * (mass as f64) < 1.0).then_some(Flag::HeavyThresholdBelowOne))
}

fn heavy_vertices(stream: &StreamSequence, cfg: &CwConfig, c_prime: f64) -> Result<(BTreeSet<VertexId>, usize), CwError> {
    if !(c_prime > 0.0) {
        return Err(CwError::InvalidConfig(format!("c' = {c_prime} must be positive")));
    }
    let n = stream.n().max(1);
    let psi = heavy_hitter_threshold(cfg);
    let delta = (n as f64).powf(-c_prime).clamp(f64::MIN_POSITIVE, 0.5);
    let mut cm = CountMinHH::new(n as u64, psi, psi, delta, seed::derive(cfg.seed, 3))?;
    for (u, v) in insertion_edges(stream)? {
        cm.update(u as u64, 1)?;
        cm.update(v as u64, 1)?;
    }
    let heavy = cm.query().into_iter().map(|(i, _)| i as VertexId).collect();
    Ok((heavy, cm.space_bytes()))
}

fn unbounded_instances(
    stream: &StreamSequence,
    cfg: &CwConfig,
    c_prime: f64,
    heavy: &BTreeSet<VertexId>,
    skip_heavy: bool,
) -> Result<CwEstimate, CwError> {
    let n = stream.n();
    let p = cfg.probability(n);
    let count = ((c_prime * (n.max(2) as f64).log2()).ceil() as usize).max(1);
    let limit = cfg.abort_factor * cfg.avg_degree_bound.max(1.0) * p * n as f64;
    let mut instances = Vec::with_capacity(count);
    for j in 0..count {
        let tag = 100 + 2 * j as u64;
        let lists: HashMap<VertexId, Vec<VertexId>> =
            cfg.sample(n, p, tag + 1).into_iter().map(|u| (u, Vec::new())).collect();
        let stored = lists.len();
        instances.push(Instance {
            hash: cfg.hash(n, tag)?,
            aborted: stored as f64 > limit,
            lists,
            stored,
        });
    }
    let mut max_stored = 0;
    for (u, v) in insertion_edges(stream)? {
        if skip_heavy && (heavy.contains(&u) || heavy.contains(&v)) {
            continue;
        }
        for inst in instances.iter_mut().filter(|i| !i.aborted) {
            for (a, b) in [(u, v), (v, u)] {
                if let Some(list) = inst.lists.get_mut(&a) {
                    list.push(b);
                    inst.stored += 1;
                }
            }
            max_stored = max_stored.max(inst.stored);
            if inst.stored as f64 > limit {
                inst.aborted = true;
                inst.lists = HashMap::new();
            }
        }
    }
    let aborted = instances.iter().filter(|i| i.aborted).count();
    let space = instances
        .iter()
        .map(|i| i.hash.space_bytes() + i.stored * SET_ENTRY_BYTES)
        .sum::<usize>();
    let mut best: Option<(usize, usize)> = None;
    for inst in instances.iter().filter(|i| !i.aborted) {
        let sampled = inst.lists.len();
        let kept = inst
            .lists
            .iter()
            .filter(|(u, list)| {
                !heavy.contains(u)
                    && list
                        .iter()
                        .filter(|w| !heavy.contains(w))
                        .all(|&w| inst.hash.precedes(**u, w))
            })
            .count();
        if best.map_or(true, |(k, _)| kept > k) {
            best = Some((kept, sampled));
        }
    }
    let Some((kept, sampled)) = best else {
        return Err(CwError::AllInstancesAborted {
            instances: count,
            max_stored,
            limit,
        });
    };
    let mut est = CwEstimate::new(kept as f64 / p, p, sampled, kept, space);
    est.heavy = heavy.iter().copied().collect();
    est.instances = count;
    est.aborted = aborted;
    if aborted > 0 {
        est.flag(Some(Flag::InstancesAborted));
    }
    Ok(est)
}

/// Random-order vertex-arrival estimate: each arriving vertex with no earlier
/// neighbour is counted with probability `p`; returns `count/p`.
pub fn cw_vertex_random(stream: &StreamSequence, cfg: &CwConfig) -> Result<CwEstimate, CwError> {
    if stream.model() != Model::VertexArrival {
        return Err(CwError::IncompatibleModel {
            expected: Model::VertexArrival.as_str(),
            found: stream.model().as_str(),
        });
    }
    let n = stream.n();
    let p = cfg.probability(n);
    let limit = cfg.abort_factor * p * n as f64;
    let mut rng = seed::rng(seed::derive(cfg.seed, 4));
    let mut count = 0u64;
    for up in stream.updates() {
        if let StreamUpdate::VertexArrival { neighbors, .. } = up {
            if neighbors.is_empty() && (p >= 1.0 || rng.gen_bool(p)) {
                count += 1;
                if count as f64 > limit {
                    return Err(CwError::CounterOverflowAbort { count, limit });
                }
            }
        }
    }
    let mut est = CwEstimate::new(count as f64 / p, p, n, count as usize, 8);
    est.flag(Some(Flag::OrderAssumptionUnverified));
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoostMode {
    Median,
    Max,
}

/// Lower median or maximum of the estimates.
pub fn boost(estimates: &[f64], mode: BoostMode) -> Result<f64, CwError> {
    if estimates.is_empty() {
        return Err(CwError::EmptyInput);
    }
    let mut v = estimates.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(match mode {
        BoostMode::Median => v[(v.len() - 1) / 2],
        BoostMode::Max => v[v.len() - 1],
    })
}

/// `max(1, ceil(c_b * log2(1/δ)))`.
pub fn boost_trials(delta: f64, c_b: f64) -> usize {
    ((c_b * (1.0 / delta).log2()).ceil() as usize).max(1)
}

/// Combines full estimates: picks the one [`boost`] selects, sums space and
/// merges flags.
pub fn boost_estimates(estimates: Vec<CwEstimate>, mode: BoostMode) -> Result<CwEstimate, CwError> {
    let values: Vec<f64> = estimates.iter().map(|e| e.lambda_hat).collect();
    let target = boost(&values, mode)?;
    let space: usize = estimates.iter().map(|e| e.space_bytes).sum();
    let mut flags: Vec<Flag> = estimates.iter().flat_map(|e| e.flags.iter().copied()).collect();
    flags.sort();
    flags.dedup();
    let mut chosen = estimates
        .into_iter()
        .find(|e| e.lambda_hat == target)
        .expect("boost returns an element");
    chosen.space_bytes = space;
    chosen.flags = flags;
    Ok(chosen)
}
