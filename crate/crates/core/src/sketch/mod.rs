//! Linear sketches for turnstile vectors over coordinates `[1, n]`.

mod codec;
mod countmin;
mod l0;
mod l1;
mod sparse;

use thiserror::Error;

pub use countmin::{hh_query, CountMinHH};
pub use l0::{l0_estimate, L0Sketch};
pub use l1::{l1_estimate, L1Params, L1Sketch};
pub use sparse::{sparse_decode, SparseRecoverySketch};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SketchError {
    #[error("coordinate {i} outside [1, {n}]")]
    CoordinateOutOfRange { i: u64, n: u64 },
    #[error("update magnitude {delta} exceeds bound {bound}")]
    MagnitudeExceeded { delta: i64, bound: u64 },
    #[error("decode failure: {0}")]
    DecodeFailure(String),
    #[error("sketches differ in parameters or seed")]
    IncompatibleMerge,
    #[error("invalid sketch parameters: {0}")]
    InvalidParams(String),
    #[error("codec: {0}")]
    Codec(String),
}

/// Operations shared by every sketch.
pub trait LinearSketch: Sized {
    fn update(&mut self, i: u64, delta: i64) -> Result<(), SketchError>;
    fn merge(&mut self, other: &Self) -> Result<(), SketchError>;
    fn space_bytes(&self) -> usize;
    fn to_bytes(&self) -> Vec<u8>;
    fn from_bytes(bytes: &[u8]) -> Result<Self, SketchError>;
}

/// Free-function form of [`LinearSketch::update`].
pub fn sketch_update<S: LinearSketch>(s: &mut S, i: u64, delta: i64) -> Result<(), SketchError> {
    s.update(i, delta)
}

pub(crate) fn check_update(i: u64, delta: i64, n: u64, bound: u64) -> Result<(), SketchError> {
    if i == 0 || i > n {
        return Err(SketchError::CoordinateOutOfRange { i, n });
    }
    if delta.unsigned_abs() > bound {
        return Err(SketchError::MagnitudeExceeded { delta, bound });
    }
    Ok(())
}

pub(crate) fn check_unit(name: &str, x: f64) -> Result<(), SketchError> {
    if !(x > 0.0 && x < 1.0) {
        return Err(SketchError::InvalidParams(format!("{name} = {x} must lie in (0, 1)")));
    }
    Ok(())
}

/// Median of a non-empty slice (mean of the middle pair for even lengths).
pub(crate) fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let k = values.len();
    if k % 2 == 1 {
        values[k / 2]
    } else {
        (values[k / 2 - 1] + values[k / 2]) / 2.0
    }
}

/// Odd repetition count `2 * ceil(ln(1/δ)) + 1` for median amplification.
pub(crate) fn repetitions(delta: f64) -> usize {
    2 * (1.0 / delta).ln().ceil().max(1.0) as usize + 1
}
