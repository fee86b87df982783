//! Small-space streaming estimators for the Caro-Wei bound of general graphs
//! and for independence, domination and matching numbers of forests.
//!
//! The crate is organised bottom-up: [`stream`] carries the input model,
//! [`hash`] and [`sketch`] the randomised primitives, [`carowei`] and
//! [`forest`] the estimators, and [`oracle`] exact reference computations.

#![forbid(unsafe_code)]

pub mod carowei;
pub mod forest;
pub mod hash;
pub mod oracle;
pub mod report;
pub mod sketch;
pub mod stream;

mod seed;

pub use report::{EstimateReport, Flag, Parameter};
pub use stream::{Model, StreamSequence, StreamUpdate, VertexId};
