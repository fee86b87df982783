//! One-pass leaf and non-leaf counters over the degree vector.

use crate::seed;
use crate::sketch::{L0Sketch, L1Sketch, LinearSketch, SketchError};
use crate::stream::{replay, Abort, EdgeCounter, PassConsumer, StreamSequence, StreamUpdate};

use super::ForestError;

fn abort(e: impl std::fmt::Display) -> Abort {
    Abort::new(e.to_string())
}

/// `|Deg≥2|` as the support size of `D - 1`, where `D` is the degree vector.
#[derive(Debug, Clone)]
pub struct DegGe2Counter {
    sketch: L0Sketch,
    edges: EdgeCounter,
}

impl DegGe2Counter {
    pub fn new(n: usize, epsilon: f64, delta: f64, seed: u64) -> Result<Self, SketchError> {
        Ok(Self {
            sketch: L0Sketch::new(n.max(1) as u64, epsilon, delta, seed::derive(seed, 0x4432))?,
            edges: EdgeCounter::default(),
        })
    }

    pub fn edge(&mut self, u: u32, v: u32, sign: i64) -> Result<(), Abort> {
        self.edges.apply(sign).map_err(abort)?;
        self.sketch.update(u as u64, sign).map_err(abort)?;
        self.sketch.update(v as u64, sign).map_err(abort)
    }

    pub fn m(&self) -> u64 {
        self.edges.m()
    }

    pub fn space_bytes(&self) -> usize {
        self.sketch.space_bytes() + EdgeCounter::SPACE_BYTES
    }

    pub(crate) fn checkpoint(&self) -> Vec<u8> {
        self.sketch.to_bytes()
    }

    pub(crate) fn restore(&mut self, bytes: &[u8]) -> Result<(), SketchError> {
        self.sketch = L0Sketch::from_bytes(bytes)?;
        Ok(())
    }

    pub fn finish(mut self) -> f64 {
        self.sketch.apply_uniform_offset(-1);
        self.sketch.estimate()
    }
}

/// `|Deg1| = ‖D - 2‖₁/2 + c`.
#[derive(Debug, Clone)]
pub struct Deg1Counter {
    n: usize,
    sketch: L1Sketch,
    edges: EdgeCounter,
}

impl Deg1Counter {
    pub fn new(n: usize, epsilon: f64, delta: f64, seed: u64) -> Result<Self, SketchError> {
        Ok(Self {
            n,
            sketch: L1Sketch::new(n.max(1) as u64, epsilon, delta, seed::derive(seed, 0x4431))?,
            edges: EdgeCounter::default(),
        })
    }

    pub fn edge(&mut self, u: u32, v: u32, sign: i64) -> Result<(), Abort> {
        self.edges.apply(sign).map_err(abort)?;
        self.sketch.update(u as u64, sign).map_err(abort)?;
        self.sketch.update(v as u64, sign).map_err(abort)
    }

    pub fn m(&self) -> u64 {
        self.edges.m()
    }

    pub fn space_bytes(&self) -> usize {
        self.sketch.space_bytes() + EdgeCounter::SPACE_BYTES
    }

    pub(crate) fn checkpoint(&self) -> Vec<u8> {
        self.sketch.to_bytes()
    }

    pub(crate) fn restore(&mut self, bytes: &[u8]) -> Result<(), SketchError> {
        self.sketch = L1Sketch::from_bytes(bytes)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<f64, ForestError> {
        let c = self.edges.components(self.n)?;
        self.sketch.apply_uniform_offset(-2);
        Ok(self.sketch.estimate() / 2.0 + c as f64)
    }
}

struct Single<F>(F);

impl<F: FnMut(u32, u32, i64) -> Result<(), Abort>> PassConsumer for Single<F> {
    fn update(&mut self, _pass: usize, update: &StreamUpdate) -> Result<(), Abort> {
        let mut res = Ok(());
        update.for_each_edge(|u, v, s| {
            if res.is_ok() {
                res = (self.0)(u, v, s);
            }
        });
        res
    }
}

/// `(1±ε)`-estimate of the number of non-leaves, with probability `1-δ`.
pub fn estimate_deg_ge2(stream: &StreamSequence, epsilon: f64, delta: f64, seed: u64) -> Result<f64, ForestError> {
    let mut counter = DegGe2Counter::new(stream.n(), epsilon, delta, seed)?;
    replay(stream, 1, Single(|u, v, s| counter.edge(u, v, s)))?;
    Ok(counter.finish())
}

/// `(1±ε)`-estimate of the number of leaves, with probability `1-δ`.
pub fn estimate_deg1(stream: &StreamSequence, epsilon: f64, delta: f64, seed: u64) -> Result<f64, ForestError> {
    let mut counter = Deg1Counter::new(stream.n(), epsilon, delta, seed)?;
    replay(stream, 1, Single(|u, v, s| counter.edge(u, v, s)))?;
    counter.finish()
}
