//! Hierarchical Count-Min for heavy hitters over non-negative vectors.

use super::codec::{Kind, Reader, Writer};
use super::{check_unit, check_update, LinearSketch, SketchError};
use crate::hash::KWiseHash;
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
struct Level {
    domain: u64,
    width: usize,
    /// Empty when the level is stored exactly (width equals domain).
    hashes: Vec<KWiseHash>,
    table: Vec<i64>,
}

impl Level {
    fn exact(&self) -> bool {
        self.hashes.is_empty()
    }

    fn add(&mut self, node: u64, delta: i64) {
        if self.exact() {
            self.table[node as usize - 1] += delta;
            return;
        }
        for (r, h) in self.hashes.iter().enumerate() {
            let b = h.eval_unchecked(node) as usize;
            self.table[r * self.width + b] += delta;
        }
    }

    fn query(&self, node: u64) -> i64 {
        if self.exact() {
            return self.table[node as usize - 1];
        }
        self.hashes
            .iter()
            .enumerate()
            .map(|(r, h)| self.table[r * self.width + h.eval_unchecked(node) as usize])
            .min()
            .unwrap_or(0)
    }
}

/// Reports every coordinate with `x_i >= (ψ+τ)‖x‖₁` and, with probability
/// `1-δ`, none with `x_i < τ‖x‖₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountMinHH {
    n: u64,
    psi: f64,
    tau: f64,
    delta: f64,
    seed: u64,
    bound: u64,
    total: i64,
    levels: Vec<Level>,
}

impl CountMinHH {
    /// Width `ceil(e/ψ)` per level, depth `ceil(ln(2(L+1)/(δ(ψ+τ))))` over
    /// `L+1` dyadic levels, `L = ceil(log2 n)`.
    pub fn new(n: u64, psi: f64, tau: f64, delta: f64, seed: u64) -> Result<Self, SketchError> {
        check_unit("psi", psi)?;
        check_unit("tau", tau)?;
        check_unit("delta", delta)?;
        if n == 0 {
            return Err(SketchError::InvalidParams("n must be positive".into()));
        }
        let top = 64 - (n - 1).leading_zeros() as usize;
        let width = (std::f64::consts::E / psi).ceil() as usize;
        let depth = ((2.0 * (top + 1) as f64 / (delta * (psi + tau))).ln().ceil() as usize).max(1);
        let mut levels = Vec::with_capacity(top + 1);
        for l in 0..=top {
            let domain = ((n - 1) >> l) + 1;
            let level = if width as u64 >= domain {
                Level {
                    domain,
                    width: domain as usize,
                    hashes: Vec::new(),
                    table: vec![0; domain as usize],
                }
            } else {
                let hashes = (0..depth)
                    .map(|r| KWiseHash::new(2, domain, width as u64, seed::derive(seed, (l * 1024 + r) as u64)))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| SketchError::InvalidParams(e.to_string()))?;
                Level {
                    domain,
                    width,
                    hashes,
                    table: vec![0; depth * width],
                }
            };
            levels.push(level);
        }
        Ok(Self {
            n,
            psi,
            tau,
            delta,
            seed,
            bound: n,
            total: 0,
            levels,
        })
    }

    pub fn with_magnitude_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }

    pub fn total(&self) -> i64 {
        self.total
    }

    /// Heavy coordinates with their (over-)estimates, in increasing order.
    pub fn query(&self) -> Vec<(u64, i64)> {
        if self.total <= 0 {
            return Vec::new();
        }
        let threshold = (self.psi + self.tau) * self.total as f64;
        let top = self.levels.len() - 1;
        let mut frontier: Vec<u64> = (1..=self.levels[top].domain).collect();
        for l in (0..=top).rev() {
            let level = &self.levels[l];
            let heavy: Vec<u64> = frontier
                .into_iter()
                .filter(|&node| level.query(node) as f64 >= threshold)
                .collect();
            if l == 0 {
                return heavy.into_iter().map(|i| (i, level.query(i))).collect();
            }
            let below = self.levels[l - 1].domain;
            frontier = heavy
                .into_iter()
                .flat_map(|p| [2 * p - 1, 2 * p])
                .filter(|&c| c <= below)
                .collect();
        }
        unreachable!("level 0 returns")
    }
}

/// Free-function form of [`CountMinHH::query`].
pub fn hh_query(s: &CountMinHH) -> Vec<(u64, i64)> {
    s.query()
}

impl LinearSketch for CountMinHH {
    fn update(&mut self, i: u64, delta: i64) -> Result<(), SketchError> {
        check_update(i, delta, self.n, self.bound)?;
        self.total += delta;
        for (l, level) in self.levels.iter_mut().enumerate() {
            level.add(((i - 1) >> l) + 1, delta);
        }
        Ok(())
    }

    fn merge(&mut self, other: &Self) -> Result<(), SketchError> {
        if self.n != other.n
            || self.seed != other.seed
            || self.psi != other.psi
            || self.tau != other.tau
            || self.delta != other.delta
        {
            return Err(SketchError::IncompatibleMerge);
        }
        self.total += other.total;
        for (a, b) in self.levels.iter_mut().zip(&other.levels) {
            for (x, y) in a.table.iter_mut().zip(&b.table) {
                *x += y;
            }
        }
        Ok(())
    }

    fn space_bytes(&self) -> usize {
        self.levels
            .iter()
            .map(|l| l.table.len() * 8 + l.hashes.iter().map(KWiseHash::space_bytes).sum::<usize>())
            .sum::<usize>()
            + 64
    }

    fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(Kind::CountMin);
        w.u64(self.n)
            .f64(self.psi)
            .f64(self.tau)
            .f64(self.delta)
            .u64(self.seed)
            .u64(self.bound)
            .i64(self.total);
        for level in &self.levels {
            for &c in &level.table {
                w.i64(c);
            }
        }
        w.finish()
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self, SketchError> {
        let mut r = Reader::new(bytes, Kind::CountMin)?;
        let n = r.u64()?;
        let psi = r.f64()?;
        let tau = r.f64()?;
        let delta = r.f64()?;
        let seed = r.u64()?;
        let bound = r.u64()?;
        let total = r.i64()?;
        let mut s = Self::new(n, psi, tau, delta, seed)?.with_magnitude_bound(bound);
        s.total = total;
        let cells: usize = s.levels.iter().map(|l| l.table.len()).sum();
        r.expect_remaining(cells * 8)?;
        for level in s.levels.iter_mut() {
            for c in level.table.iter_mut() {
                *c = r.i64()?;
            }
        }
        r.finish()?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_item_reported() {
        let mut s = CountMinHH::new(1000, 0.1, 0.1, 0.1, 1).unwrap();
        s.update(777, 5).unwrap();
        assert_eq!(s.query(), vec![(777, 5)]);
    }

    #[test]
    fn uniform_vector_reports_nothing() {
        let mut clean = 0;
        for seed in 0..30 {
            let mut s = CountMinHH::new(1000, 0.01, 0.01, 0.1, seed).unwrap();
            for i in 1..=1000 {
                s.update(i, 1).unwrap();
            }
            if s.query().is_empty() {
                clean += 1;
            }
        }
        assert!(clean >= 27, "{clean}");
    }

    #[test]
    fn star_center_found() {
        let mut s = CountMinHH::new(51, 0.25, 0.25, 0.1, 3).unwrap();
        for leaf in 2..=51 {
            s.update(1, 1).unwrap();
            s.update(leaf, 1).unwrap();
        }
        let got: Vec<u64> = s.query().into_iter().map(|(i, _)| i).collect();
        assert_eq!(got, vec![1]);
    }

    #[test]
    fn codec_round_trip() {
        let mut s = CountMinHH::new(5000, 0.001, 0.001, 0.1, 3).unwrap();
        s.update(4000, 9).unwrap();
        assert_eq!(CountMinHH::from_bytes(&s.to_bytes()).unwrap(), s);
    }
}
