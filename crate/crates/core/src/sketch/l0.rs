//! Distinct-count (L0) estimation from geometrically subsampled levels. Each
//! level hashes coordinates into `B` buckets holding a random linear
//! fingerprint mod `2^61 - 1`, so a bucket is nonzero exactly when some
//! coordinate in it is (up to a `1/p` failure). The occupied-bucket count is
//! inverted as in linear counting.

use super::codec::{Kind, Reader, Writer};
use super::{check_unit, check_update, median, repetitions, LinearSketch, SketchError};
use crate::hash::KWiseHash;
use crate::seed;

/// Level `j` holds coordinates whose 32-bit level hash has at least `j`
/// trailing zeros, so the level count depends only on the id width.
const LEVELS: usize = 33;
const P: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn signed_mod(x: i64) -> u64 {
    x.rem_euclid(P as i64) as u64
}

fn hash(domain: u64, codomain: u64, seed: u64) -> Result<KWiseHash, SketchError> {
    KWiseHash::new(2, domain, codomain, seed).map_err(|e| SketchError::InvalidParams(e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
struct Repetition {
    level_hash: KWiseHash,
    bucket_hash: KWiseHash,
    fingerprint: KWiseHash,
    levels: Vec<Vec<u64>>,
}

impl Repetition {
    fn level_of(&self, i: u64) -> usize {
        let g = self.level_hash.eval_unchecked(i) as u32;
        g.trailing_zeros() as usize
    }

    fn add(&mut self, i: u64, delta: i64) {
        let top = self.level_of(i);
        let b = self.bucket_hash.eval_unchecked(i) as usize;
        let x = mul_mod(signed_mod(delta), self.fingerprint.eval_unchecked(i) + 1);
        for cells in &mut self.levels[..=top] {
            cells[b] = (cells[b] + x) % P;
        }
    }

    /// `2^j * round(t)`, where `t` inverts the occupancy of the first level
    /// that is at most half full.
    fn estimate(&self) -> f64 {
        for (j, cells) in self.levels.iter().enumerate() {
            let b = cells.len() as f64;
            let occupied = cells.iter().filter(|&&c| c != 0).count() as f64;
            if 2.0 * occupied <= b {
                let t = if b > 1.0 {
                    (1.0 - occupied / b).ln() / (1.0 - 1.0 / b).ln()
                } else {
                    occupied
                };
                return t.round() * (1u64 << j) as f64;
            }
        }
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct L0Sketch {
    n: u64,
    epsilon: f64,
    delta: f64,
    seed: u64,
    bound: u64,
    buckets: usize,
    reps: Vec<Repetition>,
}

fn buckets(epsilon: f64) -> usize {
    (8.0 / (epsilon * epsilon)).ceil() as usize
}

impl L0Sketch {
    /// `ceil(8/ε²)` buckets per level, median over `2*ceil(ln(1/δ))+1` repetitions.
    pub fn new(n: u64, epsilon: f64, delta: f64, seed: u64) -> Result<Self, SketchError> {
        check_unit("epsilon", epsilon)?;
        check_unit("delta", delta)?;
        if n == 0 {
            return Err(SketchError::InvalidParams("n must be positive".into()));
        }
        let width = buckets(epsilon);
        let reps = (0..repetitions(delta))
            .map(|r| {
                let s = seed::derive(seed, r as u64);
                Ok(Repetition {
                    level_hash: hash(n, 1 << 32, seed::derive(s, 1))?,
                    bucket_hash: hash(n, width as u64, seed::derive(s, 2))?,
                    fingerprint: hash(n, P - 1, seed::derive(s, 3))?,
                    levels: vec![vec![0; width]; LEVELS],
                })
            })
            .collect::<Result<Vec<_>, SketchError>>()?;
        Ok(Self {
            n,
            epsilon,
            delta,
            seed,
            bound: n,
            buckets: width,
            reps,
        })
    }

    pub fn with_magnitude_bound(mut self, bound: u64) -> Self {
        self.bound = bound.min(P - 1);
        self
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn repetitions(&self) -> usize {
        self.reps.len()
    }

    fn add(&mut self, i: u64, delta: i64) {
        for rep in &mut self.reps {
            rep.add(i, delta);
        }
    }

    /// Median over repetitions, capped at `n`.
    pub fn estimate(&self) -> f64 {
        let mut ests: Vec<f64> = self.reps.iter().map(Repetition::estimate).collect();
        median(&mut ests).min(self.n as f64)
    }

    /// Adds `offset` to every coordinate; `O(n)` work, no extra space.
    pub fn apply_uniform_offset(&mut self, offset: i64) {
        if offset == 0 {
            return;
        }
        for i in 1..=self.n {
            self.add(i, offset);
        }
    }
}

/// Free-function form of [`L0Sketch::estimate`].
pub fn l0_estimate(s: &L0Sketch) -> f64 {
    s.estimate()
}

impl LinearSketch for L0Sketch {
    fn update(&mut self, i: u64, delta: i64) -> Result<(), SketchError> {
        check_update(i, delta, self.n, self.bound)?;
        self.add(i, delta);
        Ok(())
    }

    fn merge(&mut self, other: &Self) -> Result<(), SketchError> {
        if self.n != other.n
            || self.buckets != other.buckets
            || self.seed != other.seed
            || self.reps.len() != other.reps.len()
        {
            return Err(SketchError::IncompatibleMerge);
        }
        for (a, b) in self.reps.iter_mut().zip(&other.reps) {
            for (la, lb) in a.levels.iter_mut().zip(&b.levels) {
                for (x, y) in la.iter_mut().zip(lb) {
                    *x = (*x + y) % P;
                }
            }
        }
        Ok(())
    }

    fn space_bytes(&self) -> usize {
        self.reps
            .iter()
            .map(|r| {
                r.levels.len() * r.levels[0].len() * 8
                    + r.level_hash.space_bytes()
                    + r.bucket_hash.space_bytes()
                    + r.fingerprint.space_bytes()
            })
            .sum::<usize>()
            + 48
    }

    fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(Kind::L0);
        w.u64(self.n)
            .f64(self.epsilon)
            .f64(self.delta)
            .u64(self.seed)
            .u64(self.bound);
        for rep in &self.reps {
            for cells in &rep.levels {
                for &c in cells {
                    w.u64(c);
                }
            }
        }
        w.finish()
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self, SketchError> {
        let mut r = Reader::new(bytes, Kind::L0)?;
        let n = r.u64()?;
        let epsilon = r.f64()?;
        let delta = r.f64()?;
        let seed = r.u64()?;
        let bound = r.u64()?;
        check_unit("epsilon", epsilon)?;
        check_unit("delta", delta)?;
        r.expect_remaining(repetitions(delta) * LEVELS * buckets(epsilon) * 8)?;
        let mut s = Self::new(n, epsilon, delta, seed)?.with_magnitude_bound(bound);
        for rep in &mut s.reps {
            for level in &mut rep.levels {
                for c in level.iter_mut() {
                    let v = r.u64()?;
                    if v >= P {
                        return Err(SketchError::Codec("cell out of field".into()));
                    }
                    *c = v;
                }
            }
        }
        r.finish()?;
        Ok(s)
    }
}
