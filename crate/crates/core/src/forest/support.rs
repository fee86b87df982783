//! Two-pass subroutines: support counting by vertex sampling, and exact
//! recovery of a small non-leaf core.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::index;

use crate::seed;
use crate::sketch::{LinearSketch, SparseRecoverySketch};
use crate::stream::{replay, Abort, EdgeCounter, PassConsumer, StreamSequence, StreamUpdate, VertexId};

use super::ForestError;

#[derive(Debug, Clone, PartialEq)]
pub struct SupportLargeParams {
    pub k1: f64,
    pub c1: f64,
    pub epsilon1: f64,
    pub seed: u64,
    /// Fixed sample `I`, overriding random sampling.
    pub sample: Option<Vec<VertexId>>,
}

impl SupportLargeParams {
    pub fn new(k1: f64, c1: f64, epsilon1: f64, seed: u64) -> Self {
        Self {
            k1,
            c1,
            epsilon1,
            seed,
            sample: None,
        }
    }

    /// `min(n, ceil(c1 n / (ε1² K1)))`.
    pub fn sample_size(&self, n: usize) -> usize {
        let raw = self.c1 * n as f64 / (self.epsilon1 * self.epsilon1 * self.k1);
        (raw.ceil() as usize).clamp(1, n.max(1))
    }
}

const SAMPLE_BYTES: usize = 4 + 24;
const ENTRY_BYTES: usize = 4;
const DEGREE_BYTES: usize = 4 + 8;

/// Samples `I`, keeps each sampled vertex's neighbour set by toggling in
/// pass 1, then counts exact degrees of `I ∪ N(I)` in pass 2. A sampled
/// vertex is a support vertex iff some neighbour has degree one.
#[derive(Debug, Clone)]
pub struct SupportLarge {
    n: usize,
    growth: f64,
    lists: HashMap<VertexId, Vec<VertexId>>,
    entries: usize,
    edges: EdgeCounter,
    degrees: HashMap<VertexId, i64>,
    peak: usize,
    aborted: Option<Abort>,
}

impl SupportLarge {
    pub fn new(n: usize, params: &SupportLargeParams) -> Result<Self, ForestError> {
        if !(params.k1 > 0.0 && params.c1 > 0.0 && params.epsilon1 > 0.0) {
            return Err(ForestError::InvalidParams("K1, c1 and ε1 must be positive".into()));
        }
        let sample: Vec<VertexId> = match &params.sample {
            Some(s) => s.clone(),
            None => {
                let mut rng = seed::rng(seed::derive(params.seed, 0x5332));
                index::sample(&mut rng, n.max(1), params.sample_size(n).min(n))
                    .into_iter()
                    .map(|i| i as VertexId + 1)
                    .collect()
            }
        };
        let lists: HashMap<_, _> = sample.into_iter().map(|u| (u, Vec::new())).collect();
        let peak = lists.len() * SAMPLE_BYTES;
        Ok(Self {
            n,
            growth: (params.c1 / 3.0).exp(),
            lists,
            entries: 0,
            edges: EdgeCounter::default(),
            degrees: HashMap::new(),
            peak,
            aborted: None,
        })
    }

    pub fn sample_len(&self) -> usize {
        self.lists.len()
    }

    pub fn aborted(&self) -> Option<&Abort> {
        self.aborted.as_ref()
    }

    fn current_bytes(&self) -> usize {
        self.lists.len() * SAMPLE_BYTES + self.entries * ENTRY_BYTES + self.degrees.len() * DEGREE_BYTES
    }

    pub fn peak_bytes(&self) -> usize {
        self.peak
    }

    /// Abort once the stored entries reach `max(1, 2m|I|/n) * e^(c1/3)`,
    /// with `m` the running edge count.
    fn threshold(&self) -> f64 {
        let expected = 2.0 * self.edges.m() as f64 * self.lists.len() as f64 / self.n.max(1) as f64;
        expected.max(1.0) * self.growth
    }

    fn toggle(&mut self, a: VertexId, b: VertexId) {
        if let Some(list) = self.lists.get_mut(&a) {
            if let Some(pos) = list.iter().position(|&x| x == b) {
                list.swap_remove(pos);
                self.entries -= 1;
            } else {
                list.push(b);
                self.entries += 1;
            }
        }
    }

    pub fn edge(&mut self, pass: usize, u: VertexId, v: VertexId, sign: i64) -> Result<(), ForestError> {
        if self.aborted.is_some() {
            return Ok(());
        }
        if pass == 0 {
            self.edges.apply(sign)?;
            self.toggle(u, v);
            self.toggle(v, u);
            self.peak = self.peak.max(self.current_bytes());
            if self.entries as f64 >= self.threshold() {
                self.aborted = Some(Abort::new(format!(
                    "{} stored neighbours reached the limit {:.1}",
                    self.entries,
                    self.threshold()
                )));
                self.lists.clear();
                self.entries = 0;
            }
        } else {
            for w in [u, v] {
                if let Some(d) = self.degrees.get_mut(&w) {
                    *d += sign;
                }
            }
        }
        Ok(())
    }

    pub fn end_pass(&mut self, pass: usize) {
        if pass == 0 && self.aborted.is_none() {
            for (&u, list) in &self.lists {
                self.degrees.insert(u, 0);
                for &w in list {
                    self.degrees.insert(w, 0);
                }
            }
            self.peak = self.peak.max(self.current_bytes());
        }
    }

    /// `|C| * n / |I|`, or the abort reason.
    pub fn finish(&self) -> Result<f64, Abort> {
        if let Some(a) = &self.aborted {
            return Err(a.clone());
        }
        if self.lists.is_empty() {
            return Ok(0.0);
        }
        let supports = self
            .lists
            .values()
            .filter(|list| list.iter().any(|w| self.degrees.get(w) == Some(&1)))
            .count();
        Ok(supports as f64 * self.n as f64 / self.lists.len() as f64)
    }
}

/// Exact `(supp, deg_ge2)` from a successful small-core recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SmallCore {
    pub supp: u64,
    pub deg_ge2: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmallCoreFail {
    Decode(String),
    NonPositiveEntry(VertexId),
    SanityCheck { twice_m: i64, expected: i64 },
}

impl std::fmt::Display for SmallCoreFail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SmallCoreFail::Decode(r) => write!(f, "sparse recovery failed: {r}"),
            SmallCoreFail::NonPositiveEntry(v) => write!(f, "recovered non-positive entry at {v}"),
            SmallCoreFail::SanityCheck { twice_m, expected } => {
                write!(f, "2m = {twice_m} but n - |R| + Σd = {expected}")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct CoreVertex {
    degree: i64,
    leaves: i64,
}

/// Recovers the non-leaf set `R` from a `K2`-sparse sketch of `D - 1`, then
/// counts degrees and leaf neighbours of `R` exactly in pass 2.
#[derive(Debug, Clone)]
pub struct SmallCoreRecovery {
    n: usize,
    sketch: Option<SparseRecoverySketch>,
    core: BTreeMap<VertexId, CoreVertex>,
    outside_edges: i64,
    m: i64,
    peak: usize,
    failed: Option<SmallCoreFail>,
}

impl SmallCoreRecovery {
    /// Sketch with `k = K2` and failure probability `1/c2`.
    pub fn new(n: usize, k2: usize, c2: f64, seed: u64) -> Result<Self, ForestError> {
        if !(c2 > 1.0) {
            return Err(ForestError::InvalidParams(format!("c2 = {c2} must exceed 1")));
        }
        let sketch = SparseRecoverySketch::new(n.max(1) as u64, k2.max(1), 1.0 / c2, seed::derive(seed, 0x5333))?;
        let peak = sketch.space_bytes();
        Ok(Self {
            n,
            sketch: Some(sketch),
            core: BTreeMap::new(),
            outside_edges: 0,
            m: 0,
            peak,
            failed: None,
        })
    }

    pub fn peak_bytes(&self) -> usize {
        self.peak
    }

    pub fn edge(&mut self, pass: usize, u: VertexId, v: VertexId, sign: i64) -> Result<(), ForestError> {
        if self.failed.is_some() {
            return Ok(());
        }
        if pass == 0 {
            let s = self.sketch.as_mut().expect("sketch lives through pass 1");
            s.update(u as u64, sign)?;
            s.update(v as u64, sign)?;
            return Ok(());
        }
        self.m += sign;
        let in_u = self.core.contains_key(&u);
        let in_v = self.core.contains_key(&v);
        if !in_u && !in_v {
            self.outside_edges += sign;
        }
        for (a, in_b) in [(u, in_v), (v, in_u)] {
            if let Some(cv) = self.core.get_mut(&a) {
                cv.degree += sign;
                if !in_b {
                    cv.leaves += sign;
                }
            }
        }
        Ok(())
    }

    pub fn end_pass(&mut self, pass: usize) {
        if pass != 0 || self.failed.is_some() {
            return;
        }
        let mut sketch = self.sketch.take().expect("sketch lives through pass 1");
        sketch.apply_uniform_offset(-1);
        match sketch.decode() {
            Err(e) => self.failed = Some(SmallCoreFail::Decode(e.to_string())),
            Ok(map) => {
                if let Some((&i, _)) = map.iter().find(|(_, &x)| x <= 0) {
                    self.failed = Some(SmallCoreFail::NonPositiveEntry(i as VertexId));
                } else {
                    self.core = map.keys().map(|&i| (i as VertexId, CoreVertex::default())).collect();
                }
            }
        }
        self.peak = self.peak.max(self.core.len() * (4 + 16));
    }

    pub fn finish(&self) -> Result<SmallCore, SmallCoreFail> {
        if let Some(f) = &self.failed {
            return Err(f.clone());
        }
        let degree_sum: i64 = self.core.values().map(|c| c.degree).sum();
        let expected = self.n as i64 - self.core.len() as i64 + degree_sum;
        if 2 * self.m != expected {
            return Err(SmallCoreFail::SanityCheck {
                twice_m: 2 * self.m,
                expected,
            });
        }
        let supp = self.core.values().filter(|c| c.leaves >= 1).count() as i64 + 2 * self.outside_edges;
        Ok(SmallCore {
            supp: supp as u64,
            deg_ge2: self.core.len() as u64,
        })
    }
}

struct Driver<'a, T>(&'a mut T, fn(&mut T, usize, VertexId, VertexId, i64) -> Result<(), ForestError>, fn(&mut T, usize));

impl<T> PassConsumer for Driver<'_, T> {
    fn update(&mut self, pass: usize, update: &StreamUpdate) -> Result<(), Abort> {
        let mut res = Ok(());
        update.for_each_edge(|u, v, s| {
            if res.is_ok() {
                res = (self.1)(self.0, pass, u, v, s);
            }
        });
        res.map_err(|e| Abort::new(e.to_string()))
    }

    fn end_pass(&mut self, pass: usize) -> Result<(), Abort> {
        (self.2)(self.0, pass);
        Ok(())
    }
}

/// Outcome of [`estimate_supp_large`] when the subroutine aborts.
#[derive(Debug, Clone, PartialEq)]
pub enum SupportOutcome {
    Estimate(f64),
    Abort(Abort),
}

/// Two passes of the support-sampling subroutine.
pub fn estimate_supp_large(stream: &StreamSequence, params: &SupportLargeParams) -> Result<SupportOutcome, ForestError> {
    let mut sub = SupportLarge::new(stream.n(), params)?;
    replay(stream, 2, Driver(&mut sub, SupportLarge::edge, SupportLarge::end_pass))?;
    Ok(match sub.finish() {
        Ok(x) => SupportOutcome::Estimate(x),
        Err(a) => SupportOutcome::Abort(a),
    })
}

/// Two passes of small-core recovery.
pub fn recover_small_core(
    stream: &StreamSequence,
    k2: usize,
    c2: f64,
    seed: u64,
) -> Result<Result<SmallCore, SmallCoreFail>, ForestError> {
    let mut sub = SmallCoreRecovery::new(stream.n(), k2, c2, seed)?;
    replay(stream, 2, Driver(&mut sub, SmallCoreRecovery::edge, SmallCoreRecovery::end_pass))?;
    Ok(sub.finish())
}

/// Vertices of the final graph with at least one leaf neighbour, computed
/// directly. Used by tests as a reference.
pub fn support_vertices(stream: &StreamSequence) -> HashSet<VertexId> {
    let edges = stream.final_edges();
    let mut deg = vec![0u32; stream.n() + 1];
    for &(u, v) in &edges {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
    }
    let mut out = HashSet::new();
    for (u, v) in edges {
        if deg[v as usize] == 1 {
            out.insert(u);
        }
        if deg[u as usize] == 1 {
            out.insert(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{generate_forest, parse_stream, GeneratorSpec, Shape};

    fn s(text: &str) -> StreamSequence {
        parse_stream(text.as_bytes()).unwrap()
    }

    fn full(seed: u64) -> SupportLargeParams {
        // c1 n / (ε1² K1) ≥ n forces I = V.
        SupportLargeParams::new(1.0, 10.0, 0.5, seed)
    }

    #[test]
    fn full_sampling_is_exact() {
        for seed in 0..5 {
            let spec = GeneratorSpec::new(Shape::UniformRandomTree, Some(300), seed);
            let (stream, truth) = generate_forest(&spec).unwrap();
            match estimate_supp_large(&stream, &full(seed)).unwrap() {
                SupportOutcome::Estimate(x) => assert_eq!(x, truth.supp as f64),
                SupportOutcome::Abort(a) => panic!("{a}"),
            }
            assert_eq!(support_vertices(&stream).len() as u64, truth.supp);
        }
    }

    #[test]
    fn p3_spider_full_sampling() {
        let spec = GeneratorSpec::new(Shape::P3Spider { legs: 3 }, None, 1);
        let (stream, truth) = generate_forest(&spec).unwrap();
        assert_eq!(truth.supp, 3);
        assert_eq!(estimate_supp_large(&stream, &full(2)).unwrap(), SupportOutcome::Estimate(3.0));
    }

    #[test]
    fn star_aborts_with_hub_sample() {
        let text: String = std::iter::once("# n=200\n".to_string())
            .chain((2..=200).map(|l| format!("+ 1 {l}\n")))
            .collect();
        let mut params = SupportLargeParams::new(1.0, 1.0, 1.0, 0);
        params.sample = Some(vec![1]);
        assert!(matches!(estimate_supp_large(&s(&text), &params).unwrap(), SupportOutcome::Abort(_)));
    }

    #[test]
    fn small_core_p2_forest() {
        let p2 = s("# n=6\n+ 1 2\n+ 3 4\n+ 5 6\n");
        assert_eq!(
            recover_small_core(&p2, 4, 10.0, 0).unwrap(),
            Ok(SmallCore { supp: 6, deg_ge2: 0 })
        );
    }

    #[test]
    fn small_core_p4() {
        let p4 = s("# n=4\n+ 1 2\n+ 2 3\n+ 3 4\n");
        assert_eq!(
            recover_small_core(&p4, 4, 10.0, 0).unwrap(),
            Ok(SmallCore { supp: 2, deg_ge2: 2 })
        );
    }

    #[test]
    fn small_core_with_deletions() {
        let t = s("# n=5\n+ 1 2\n+ 2 3\n+ 3 1\n- 3 1\n+ 3 4\n+ 2 5\n");
        assert_eq!(
            recover_small_core(&t, 4, 10.0, 3).unwrap(),
            Ok(SmallCore { supp: 2, deg_ge2: 2 })
        );
    }

    #[test]
    fn small_core_over_budget_fails() {
        let k2 = 20;
        let mut fails = 0;
        for seed in 0..50 {
            let spec = GeneratorSpec::new(Shape::LeafyTree { core: k2 + 15 }, Some(200), seed);
            let (stream, truth) = generate_forest(&spec).unwrap();
            assert!(truth.deg_ge2 >= (k2 + 5) as u64);
            match recover_small_core(&stream, k2, 10.0, seed).unwrap() {
                Err(_) => fails += 1,
                Ok(got) => assert_eq!((got.supp, got.deg_ge2), (truth.supp, truth.deg_ge2)),
            }
        }
        assert!(fails >= 45, "{fails}");
    }
}
