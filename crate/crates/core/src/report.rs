//! The record every estimator returns.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    Lambda,
    Beta,
    Gamma,
    Phi,
}

impl Parameter {
    pub fn as_str(self) -> &'static str {
        match self {
            Parameter::Lambda => "lambda",
            Parameter::Beta => "beta",
            Parameter::Gamma => "gamma",
            Parameter::Phi => "phi",
        }
    }

    /// Claimed approximation factor for the given pass count.
    pub fn factor(self, passes: u8) -> f64 {
        match (self, passes) {
            (Parameter::Lambda, _) => 1.0,
            (Parameter::Beta, 1) => 1.5,
            (Parameter::Beta, _) => 4.0 / 3.0,
            (Parameter::Gamma, 1) => 3.0,
            (Parameter::Gamma, _) => 2.0,
            (Parameter::Phi, 1) => 2.0,
            (Parameter::Phi, _) => 1.5,
        }
    }
}

/// Conditions attached to a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flag {
    /// Sampling probability reached 1; every vertex was sampled.
    ExactSampling,
    /// No maximum-degree bound was supplied, so `Δ ≤ ε²n/(3(d̄+1)³)` is unchecked.
    DegreeConstraintUnverified,
    /// The supplied maximum degree exceeds `ε²n/(3(d̄+1)³)`.
    DegreeConstraintViolated,
    /// Vertex-arrival order is assumed uniformly random but cannot be checked.
    OrderAssumptionUnverified,
    /// Some boosted or parallel instances aborted.
    InstancesAborted,
    /// The support-sampling subroutine aborted.
    SupportLargeAborted,
    /// Small-core recovery returned FAIL.
    SmallCoreFailed,
    /// Small-core recovery succeeded; counts in the point are exact.
    SmallCoreExact,
    /// Both two-pass subroutines failed; the one-pass interval is reported.
    Degraded,
    /// `upper > factor * lower`: the certified interval is wider than the claimed factor.
    WideInterval,
    /// The final graph has isolated vertices, outside the forest estimators' precondition.
    IsolatedVertices,
    /// The heavy-hitter threshold `ψ·2m` is below one edge, so every
    /// non-isolated vertex may be reported heavy and removed.
    HeavyThresholdBelowOne,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub parameter: Parameter,
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub factor: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub passes: u8,
    pub flags: Vec<Flag>,
    pub seed: u64,
    pub space_bytes: usize,
    /// Only filled when timing is requested, so reports stay reproducible.
    pub wall_ms: Option<f64>,
}

impl EstimateReport {
    pub fn has_flag(&self, flag: Flag) -> bool {
        self.flags.contains(&flag)
    }

    pub(crate) fn push_flag(&mut self, flag: Flag) {
        if !self.flags.contains(&flag) {
            self.flags.push(flag);
            self.flags.sort();
        }
    }

    /// Whether `truth` is consistent with the report's guarantee at its ε:
    /// `|point - λ| ≤ 3ελ` for λ, `[(1-ε)lower, (1+ε)upper]` for one-pass or
    /// degraded reports, and `[lower, upper]` for two-pass reports, whose
    /// interval already includes ε.
    pub fn accepts(&self, truth: f64) -> bool {
        let eps = self.epsilon;
        if self.parameter == Parameter::Lambda {
            return (self.point - truth).abs() <= 3.0 * eps * truth;
        }
        if self.passes == 1 || self.has_flag(Flag::Degraded) {
            (1.0 - eps) * self.lower <= truth && truth <= (1.0 + eps) * self.upper
        } else {
            self.lower <= truth && truth <= self.upper
        }
    }

    /// `truth / point`, or 1 when both are zero.
    pub fn ratio(&self, truth: f64) -> f64 {
        if self.point == 0.0 {
            if truth == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            truth / self.point
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(parameter: Parameter, passes: u8, lower: f64, point: f64, upper: f64) -> EstimateReport {
        EstimateReport {
            parameter,
            point,
            lower,
            upper,
            factor: parameter.factor(passes),
            epsilon: 0.1,
            delta: 0.1,
            passes,
            flags: vec![],
            seed: 0,
            space_bytes: 0,
            wall_ms: None,
        }
    }

    #[test]
    fn factors() {
        assert_eq!(Parameter::Beta.factor(1), 1.5);
        assert_eq!(Parameter::Beta.factor(2), 4.0 / 3.0);
        assert_eq!(Parameter::Gamma.factor(1), 3.0);
        assert_eq!(Parameter::Gamma.factor(2), 2.0);
        assert_eq!(Parameter::Phi.factor(1), 2.0);
        assert_eq!(Parameter::Phi.factor(2), 1.5);
    }

    #[test]
    fn acceptance_rules() {
        let one = report(Parameter::Gamma, 1, 10.0, 12.0, 20.0);
        assert!(one.accepts(9.0));
        assert!(one.accepts(22.0));
        assert!(!one.accepts(8.9));
        let two = report(Parameter::Beta, 2, 10.0, 11.0, 20.0);
        assert!(!two.accepts(9.5));
        assert!(two.accepts(20.0));
        let mut degraded = two.clone();
        degraded.push_flag(Flag::Degraded);
        assert!(degraded.accepts(9.5));
        let lambda = report(Parameter::Lambda, 1, 0.0, 10.0, 0.0);
        assert!(lambda.accepts(8.0));
        assert!(!lambda.accepts(7.0));
    }

    #[test]
    fn ratio_is_truth_over_point() {
        let r = report(Parameter::Beta, 2, 3.0, 3.0, 4.0);
        assert_eq!(r.ratio(4.0), 4.0 / 3.0);
        let zero = report(Parameter::Gamma, 1, 0.0, 0.0, 0.0);
        assert_eq!(zero.ratio(0.0), 1.0);
        assert!(zero.ratio(1.0).is_infinite());
    }

    #[test]
    fn json_shape() {
        let mut r = report(Parameter::Phi, 2, 1.0, 2.0, 3.0);
        r.push_flag(Flag::SmallCoreExact);
        r.push_flag(Flag::SmallCoreExact);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["parameter"], "phi");
        assert_eq!(v["flags"], serde_json::json!(["small_core_exact"]));
        assert!(v["wall_ms"].is_null());
        let back: EstimateReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
