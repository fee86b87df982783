//! Estimators for β, γ and φ of a streamed forest.
//!
//! One-pass estimators sketch the degree vector and report the sandwich
//! interval from leaf or non-leaf counts. Two-pass estimators add support
//! counting by vertex sampling and exact recovery of a small non-leaf core.

pub mod bounds;
mod counts;
mod estimators;
mod support;

use thiserror::Error;

use crate::sketch::SketchError;
use crate::stream::{GroundTruth, ReplayError, StreamError};

pub use counts::{estimate_deg1, estimate_deg_ge2, Deg1Counter, DegGe2Counter};
pub use estimators::{
    estimate, estimate_beta_onepass, estimate_beta_twopass, estimate_gamma_onepass, estimate_gamma_twopass,
    estimate_phi_onepass, estimate_phi_twopass, one_pass_counts, report_from_counts, two_pass_counts, TwoPassPlan,
};
pub use support::{
    estimate_supp_large, recover_small_core, support_vertices, SmallCore, SmallCoreFail, SmallCoreRecovery,
    SupportLarge, SupportLargeParams, SupportOutcome,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForestError {
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Sketch(#[from] SketchError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Counts gathered by a run. Estimates are absent when the run did not
/// compute them; `exact_small` is present only when small-core recovery
/// succeeded and holds `(supp, deg_ge2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestCounts {
    pub n: usize,
    pub deg1_hat: Option<f64>,
    pub deg_ge2_hat: Option<f64>,
    pub supp_hat: Option<f64>,
    pub components: u64,
    pub m: u64,
    pub exact_small: Option<(u64, u64)>,
}

impl ForestCounts {
    /// Oracle counts, as if every subroutine had succeeded exactly.
    pub fn exact(t: &GroundTruth) -> Self {
        Self {
            n: t.n,
            deg1_hat: Some(t.deg1 as f64),
            deg_ge2_hat: Some(t.deg_ge2 as f64),
            supp_hat: Some(t.supp as f64),
            components: t.components,
            m: t.m as u64,
            exact_small: Some((t.supp, t.deg_ge2)),
        }
    }
}
