//! L1 norm estimation with Cauchy (1-stable) projections.
//!
//! Projection entries are regenerated on demand from a counter-based
//! generator and quantised to fixed point, so the sketch is exactly linear
//! and order-independent.

use super::codec::{Kind, Reader, Writer};
use super::{check_unit, check_update, median, LinearSketch, SketchError};
use crate::seed::{derive, mix64};

const FRACTION_BITS: u32 = 24;
const SCALE: f64 = (1u64 << FRACTION_BITS) as f64;

/// Shape constants. Rows are split into `groups` groups of
/// `ceil(group_factor / ε²)`; the estimate is the median of group medians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Params {
    pub group_factor: f64,
    /// Groups = `2 * ceil(group_log_factor * ln(1/δ)) + 1`.
    pub group_log_factor: f64,
    /// Divisor applied to medians; the median of |Cauchy| is 1.
    pub median_scale: f64,
}

impl Default for L1Params {
    fn default() -> Self {
        Self {
            group_factor: 4.0,
            group_log_factor: 1.0,
            median_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct L1Sketch {
    n: u64,
    epsilon: f64,
    delta: f64,
    seed: u64,
    bound: u64,
    params: L1Params,
    group_size: usize,
    key: u64,
    acc: Vec<i128>,
    ones: Option<Vec<i128>>,
}

/// Fixed-point standard Cauchy variates for one coordinate, one per row in
/// row order: slopes of uniform points in the upper half disk, drawn from a
/// SplitMix stream seeded by `(key, i)`.
struct Column {
    state: u64,
}

impl Column {
    fn new(key: u64, i: u64) -> Self {
        Self {
            state: mix64(key ^ mix64(i)),
        }
    }

    #[inline]
    fn next(&mut self) -> i64 {
        loop {
            self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
            let z = mix64(self.state);
            let x = (z >> 32) as f64 / (1u64 << 31) as f64 - 1.0;
            let y = ((z & 0xFFFF_FFFF) as f64 + 0.5) / (1u64 << 32) as f64;
            if x * x + y * y <= 1.0 {
                return (x / y * SCALE).round() as i64;
            }
        }
    }
}

impl L1Sketch {
    pub fn new(n: u64, epsilon: f64, delta: f64, seed: u64) -> Result<Self, SketchError> {
        Self::with_params(n, epsilon, delta, seed, L1Params::default())
    }

    pub fn with_params(
        n: u64,
        epsilon: f64,
        delta: f64,
        seed: u64,
        params: L1Params,
    ) -> Result<Self, SketchError> {
        check_unit("epsilon", epsilon)?;
        check_unit("delta", delta)?;
        if n == 0 || n > u32::MAX as u64 {
            return Err(SketchError::InvalidParams(format!("n = {n} outside [1, 2^32)")));
        }
        if !(params.group_factor > 0.0 && params.group_log_factor > 0.0 && params.median_scale > 0.0) {
            return Err(SketchError::InvalidParams("L1 constants must be positive".into()));
        }
        let group_size = (params.group_factor / (epsilon * epsilon)).ceil() as usize;
        let groups = 2 * (params.group_log_factor * (1.0 / delta).ln()).ceil().max(1.0) as usize + 1;
        Ok(Self {
            n,
            epsilon,
            delta,
            seed,
            bound: n,
            params,
            group_size,
            key: derive(seed, 0x4C31),
            acc: vec![0; group_size * groups],
            ones: None,
        })
    }

    pub fn with_magnitude_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }

    pub fn rows(&self) -> usize {
        self.acc.len()
    }

    pub fn estimate(&self) -> f64 {
        let mut group_medians: Vec<f64> = self
            .acc
            .chunks(self.group_size)
            .map(|g| {
                let mut abs: Vec<f64> = g.iter().map(|&y| (y as f64).abs() / SCALE).collect();
                median(&mut abs)
            })
            .collect();
        median(&mut group_medians) / self.params.median_scale
    }

    /// Adds `offset` to every coordinate through the all-ones projection,
    /// computed once on first use.
    pub fn apply_uniform_offset(&mut self, offset: i64) {
        if offset == 0 {
            return;
        }
        if self.ones.is_none() {
            let mut ones = vec![0i128; self.acc.len()];
            for i in 1..=self.n {
                let mut col = Column::new(self.key, i);
                for o in ones.iter_mut() {
                    *o += col.next() as i128;
                }
            }
            self.ones = Some(ones);
        }
        let ones = self.ones.as_ref().expect("just computed");
        for (y, &o) in self.acc.iter_mut().zip(ones) {
            *y += offset as i128 * o;
        }
    }
}

/// Free-function form of [`L1Sketch::estimate`].
pub fn l1_estimate(s: &L1Sketch) -> f64 {
    s.estimate()
}

impl LinearSketch for L1Sketch {
    fn update(&mut self, i: u64, delta: i64) -> Result<(), SketchError> {
        check_update(i, delta, self.n, self.bound)?;
        let d = delta as i128;
        let mut col = Column::new(self.key, i);
        for y in self.acc.iter_mut() {
            *y += d * col.next() as i128;
        }
        Ok(())
    }

    fn merge(&mut self, other: &Self) -> Result<(), SketchError> {
        if self.n != other.n || self.key != other.key || self.acc.len() != other.acc.len() {
            return Err(SketchError::IncompatibleMerge);
        }
        for (a, b) in self.acc.iter_mut().zip(&other.acc) {
            *a += b;
        }
        Ok(())
    }

    fn space_bytes(&self) -> usize {
        let ones = self.ones.as_ref().map_or(0, |o| o.len() * 16);
        self.acc.len() * 16 + ones + 96
    }

    fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(Kind::L1);
        w.u64(self.n)
            .f64(self.epsilon)
            .f64(self.delta)
            .u64(self.seed)
            .u64(self.bound)
            .f64(self.params.group_factor)
            .f64(self.params.group_log_factor)
            .f64(self.params.median_scale)
            .u64(self.acc.len() as u64);
        for &y in &self.acc {
            w.i128(y);
        }
        w.finish()
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self, SketchError> {
        let mut r = Reader::new(bytes, Kind::L1)?;
        let n = r.u64()?;
        let epsilon = r.f64()?;
        let delta = r.f64()?;
        let seed = r.u64()?;
        let bound = r.u64()?;
        let params = L1Params {
            group_factor: r.f64()?,
            group_log_factor: r.f64()?,
            median_scale: r.f64()?,
        };
        let rows = r.usize()?;
        let mut s = Self::with_params(n, epsilon, delta, seed, params)?.with_magnitude_bound(bound);
        if rows != s.acc.len() {
            return Err(SketchError::Codec("row count mismatch".into()));
        }
        r.expect_remaining(rows * 16)?;
        for y in s.acc.iter_mut() {
            *y = r.i128()?;
        }
        r.finish()?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_quartiles() {
        // Quartiles of the standard Cauchy are ±1.
        let mut xs: Vec<f64> = (0..40_000).map(|i| Column::new(77, i).next() as f64 / SCALE).collect();
        xs.sort_by(f64::total_cmp);
        let q1 = xs[10_000];
        let q3 = xs[30_000];
        assert!((q1 + 1.0).abs() < 0.05 && (q3 - 1.0).abs() < 0.05, "{q1} {q3}");
    }

    #[test]
    fn small_examples() {
        let mut s = L1Sketch::new(10, 0.2, 0.1, 1).unwrap();
        assert_eq!(s.estimate(), 0.0);
        s.update(1, 3).unwrap();
        s.update(2, -2).unwrap();
        let e = s.estimate();
        assert!((e - 5.0).abs() <= 1.0, "{e}");
    }

    #[test]
    fn star_offset() {
        // K_{1,3} degrees (3,1,1,1) minus 2 gives (1,-1,-1,-1).
        let mut hits = 0;
        for seed in 0..20 {
            let mut s = L1Sketch::new(4, 0.2, 0.1, seed).unwrap();
            for leaf in 2..=4 {
                s.update(1, 1).unwrap();
                s.update(leaf, 1).unwrap();
            }
            s.apply_uniform_offset(-2);
            if (s.estimate() - 4.0).abs() <= 0.8 {
                hits += 1;
            }
        }
        assert!(hits >= 18, "{hits}");
    }

    #[test]
    fn linear_and_order_free() {
        let fresh = L1Sketch::new(100, 0.3, 0.2, 4).unwrap();
        let mut s = fresh.clone();
        s.update(17, 1).unwrap();
        s.update(17, -1).unwrap();
        assert_eq!(s, fresh);
        let mut a = fresh.clone();
        let mut b = fresh.clone();
        let ups: Vec<(u64, i64)> = (0..300).map(|t| (1 + (t * 37) % 100, (t as i64 % 7) - 3)).collect();
        for &(i, d) in &ups {
            a.update(i, d).unwrap();
        }
        for &(i, d) in ups.iter().rev() {
            b.update(i, d).unwrap();
        }
        assert_eq!(a, b);
        assert_eq!(L1Sketch::from_bytes(&a.to_bytes()).unwrap(), a);
    }
}
