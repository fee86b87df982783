//! k-sparse recovery by peeling an invertible table of
//! (count, id-sum, fingerprint) cells.

use std::collections::{BTreeMap, VecDeque};

use rand::Rng;

use super::codec::{Kind, Reader, Writer};
use super::{check_unit, check_update, LinearSketch, SketchError};
use crate::hash::KWiseHash;
use crate::seed;

const P61: u64 = (1 << 61) - 1;

#[inline]
fn mul61(a: u64, b: u64) -> u64 {
    let p = a as u128 * b as u128;
    let lo = (p as u64) & P61;
    let hi = (p >> 61) as u64;
    let s = lo + hi;
    let s = (s & P61) + (s >> 61);
    if s >= P61 {
        s - P61
    } else {
        s
    }
}

fn pow61(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul61(r, a);
        }
        a = mul61(a, a);
        e >>= 1;
    }
    r
}

#[inline]
fn signed61(v: i64) -> u64 {
    let m = v.rem_euclid(P61 as i64);
    m as u64
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct Cell {
    count: i64,
    id_sum: i64,
    fp: u64,
}

impl Cell {
    #[inline]
    fn add(&mut self, i: u64, delta: i64, zi: u64) {
        self.count = self.count.wrapping_add(delta);
        self.id_sum = self.id_sum.wrapping_add(delta.wrapping_mul(i as i64));
        let t = mul61(signed61(delta), zi);
        self.fp = (self.fp + t) % P61;
    }

    pub(crate) fn merge(&mut self, other: &Cell) {
        self.count = self.count.wrapping_add(other.count);
        self.id_sum = self.id_sum.wrapping_add(other.id_sum);
        self.fp = (self.fp + other.fp) % P61;
    }

    fn is_zero(&self) -> bool {
        self.count == 0 && self.id_sum == 0 && self.fp == 0
    }

    pub const BYTES: usize = 24;
}

/// Hash functions and fingerprint base shared by one or more cell tables.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Layout {
    n: u64,
    width: usize,
    hashes: Vec<KWiseHash>,
    z: u64,
}

impl Layout {
    pub fn new(n: u64, rows: usize, width: usize, seed: u64) -> Result<Self, SketchError> {
        let hashes = (0..rows)
            .map(|r| KWiseHash::new(2, n, width as u64, seed::derive(seed, r as u64)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| SketchError::InvalidParams(e.to_string()))?;
        let z = seed::rng(seed::derive(seed, u64::MAX)).gen_range(2..P61);
        Ok(Self { n, width, hashes, z })
    }

    pub fn rows(&self) -> usize {
        self.hashes.len()
    }

    pub fn cells(&self) -> usize {
        self.rows() * self.width
    }

    #[inline]
    pub fn zpow(&self, i: u64) -> u64 {
        pow61(self.z, i)
    }

    #[inline]
    pub fn add(&self, cells: &mut [Cell], i: u64, delta: i64, zi: u64) {
        for (r, h) in self.hashes.iter().enumerate() {
            let b = h.eval_unchecked(i) as usize;
            cells[r * self.width + b].add(i, delta, zi);
        }
    }

    fn pure(&self, cells: &[Cell], idx: usize) -> Option<(u64, i64)> {
        let c = cells[idx];
        if c.count == 0 {
            return None;
        }
        if c.id_sum.checked_rem(c.count)? != 0 {
            return None;
        }
        let i = c.id_sum.checked_div(c.count)?;
        if i < 1 || i as u64 > self.n {
            return None;
        }
        let i = i as u64;
        let row = idx / self.width;
        if self.hashes[row].eval_unchecked(i) as usize != idx % self.width {
            return None;
        }
        if c.fp != mul61(signed61(c.count), self.zpow(i)) {
            return None;
        }
        Some((i, c.count))
    }

    /// Peels a copy of `cells`. Fails if peeling stalls, recovers more than
    /// `k` coordinates, or a coordinate is recovered twice.
    pub fn decode(&self, cells: &[Cell], k: usize) -> Result<BTreeMap<u64, i64>, SketchError> {
        let mut work = cells.to_vec();
        let mut out = BTreeMap::new();
        let mut queue: VecDeque<usize> = (0..work.len()).filter(|&j| work[j].count != 0).collect();
        while let Some(idx) = queue.pop_front() {
            let Some((i, value)) = self.pure(&work, idx) else {
                continue;
            };
            if out.insert(i, value).is_some() {
                return Err(SketchError::DecodeFailure(format!("coordinate {i} recovered twice")));
            }
            if out.len() > k {
                return Err(SketchError::DecodeFailure(format!("more than {k} nonzeros")));
            }
            let zi = self.zpow(i);
            for (r, h) in self.hashes.iter().enumerate() {
                let j = r * self.width + h.eval_unchecked(i) as usize;
                work[j].add(i, -value, zi);
                if work[j].count != 0 {
                    queue.push_back(j);
                }
            }
        }
        if work.iter().any(|c| !c.is_zero()) {
            return Err(SketchError::DecodeFailure("peeling stalled".into()));
        }
        Ok(out)
    }

    pub fn space_bytes(&self) -> usize {
        self.hashes.iter().map(KWiseHash::space_bytes).sum::<usize>() + 24
    }
}

pub(crate) fn write_cells(w: &mut Writer, cells: &[Cell]) {
    for c in cells {
        w.i64(c.count).i64(c.id_sum).u64(c.fp);
    }
}

pub(crate) fn read_cells(r: &mut Reader<'_>, count: usize) -> Result<Vec<Cell>, SketchError> {
    r.expect_remaining(count.saturating_mul(Cell::BYTES))?;
    (0..count)
        .map(|_| {
            Ok(Cell {
                count: r.i64()?,
                id_sum: r.i64()?,
                fp: r.u64()?,
            })
        })
        .collect()
}

/// Recovers any vector with at most `k` nonzeros exactly, or reports failure.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRecoverySketch {
    k: usize,
    delta: f64,
    seed: u64,
    bound: u64,
    layout: Layout,
    cells: Vec<Cell>,
}

impl SparseRecoverySketch {
    /// `rows = max(3, ceil(log2(1/δ)) + 1)` tables of width `2k`.
    pub fn new(n: u64, k: usize, delta: f64, seed: u64) -> Result<Self, SketchError> {
        check_unit("delta", delta)?;
        let rows = ((1.0 / delta).log2().ceil() as usize + 1).max(3);
        Self::with_shape(n, k, delta, rows, (2 * k).max(4), seed)
    }

    pub fn with_shape(
        n: u64,
        k: usize,
        delta: f64,
        rows: usize,
        width: usize,
        seed: u64,
    ) -> Result<Self, SketchError> {
        if n == 0 || rows == 0 || width == 0 {
            return Err(SketchError::InvalidParams(format!("n={n} rows={rows} width={width}")));
        }
        let layout = Layout::new(n, rows, width, seed)?;
        let cells = vec![Cell::default(); layout.cells()];
        Ok(Self {
            k,
            delta,
            seed,
            bound: n,
            layout,
            cells,
        })
    }

    /// Overrides the per-update magnitude bound (default `n`).
    pub fn with_magnitude_bound(mut self, bound: u64) -> Self {
        self.bound = bound;
        self
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> u64 {
        self.layout.n
    }

    pub fn rows(&self) -> usize {
        self.layout.rows()
    }

    pub fn width(&self) -> usize {
        self.layout.width
    }

    pub fn decode(&self) -> Result<BTreeMap<u64, i64>, SketchError> {
        self.layout.decode(&self.cells, self.k)
    }

    /// Adds `offset` to every coordinate (`n` updates).
    pub fn apply_uniform_offset(&mut self, offset: i64) {
        if offset == 0 {
            return;
        }
        for i in 1..=self.layout.n {
            let zi = self.layout.zpow(i);
            self.layout.add(&mut self.cells, i, offset, zi);
        }
    }
}

/// Free-function form of [`SparseRecoverySketch::decode`].
pub fn sparse_decode(s: &SparseRecoverySketch) -> Result<BTreeMap<u64, i64>, SketchError> {
    s.decode()
}

impl LinearSketch for SparseRecoverySketch {
    fn update(&mut self, i: u64, delta: i64) -> Result<(), SketchError> {
        check_update(i, delta, self.layout.n, self.bound)?;
        let zi = self.layout.zpow(i);
        self.layout.add(&mut self.cells, i, delta, zi);
        Ok(())
    }

    fn merge(&mut self, other: &Self) -> Result<(), SketchError> {
        if self.layout != other.layout || self.k != other.k {
            return Err(SketchError::IncompatibleMerge);
        }
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            a.merge(b);
        }
        Ok(())
    }

    fn space_bytes(&self) -> usize {
        self.cells.len() * Cell::BYTES + self.layout.space_bytes() + 32
    }

    fn to_bytes(&self) -> Vec<u8> {
        let mut w = Writer::new(Kind::SparseRecovery);
        w.u64(self.layout.n)
            .u64(self.k as u64)
            .f64(self.delta)
            .u64(self.layout.rows() as u64)
            .u64(self.layout.width as u64)
            .u64(self.seed)
            .u64(self.bound);
        write_cells(&mut w, &self.cells);
        w.finish()
    }

    fn from_bytes(bytes: &[u8]) -> Result<Self, SketchError> {
        let mut r = Reader::new(bytes, Kind::SparseRecovery)?;
        let n = r.u64()?;
        let k = r.usize()?;
        let delta = r.f64()?;
        let rows = r.usize()?;
        let width = r.usize()?;
        let seed = r.u64()?;
        let bound = r.u64()?;
        r.expect_remaining(rows.saturating_mul(width).saturating_mul(Cell::BYTES))?;
        let mut s = Self::with_shape(n, k, delta, rows, width, seed)?.with_magnitude_bound(bound);
        s.cells = read_cells(&mut r, rows * width)?;
        r.finish()?;
        Ok(s)
    }
}
