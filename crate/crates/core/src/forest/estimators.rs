//! Report-producing estimators.

use crate::report::{EstimateReport, Flag, Parameter};
use crate::seed;
use crate::stream::{replay, Abort, PassConsumer, StreamSequence, StreamUpdate};

use super::bounds::{
    beta_one_pass, beta_two_pass_point, gamma_one_pass, gamma_two_pass_point, phi_one_pass, phi_two_pass_point,
};
use super::counts::{Deg1Counter, DegGe2Counter};
use super::support::{SmallCoreRecovery, SupportLarge, SupportLargeParams};
use super::{ForestCounts, ForestError};

fn check(parameter: Parameter, epsilon: f64, delta: f64) -> Result<(), ForestError> {
    if parameter == Parameter::Lambda {
        return Err(ForestError::InvalidParams("lambda is not a forest parameter".into()));
    }
    for (name, x) in [("epsilon", epsilon), ("delta", delta)] {
        if !(x > 0.0 && x < 1.0) {
            return Err(ForestError::InvalidParams(format!("{name} = {x} must lie in (0, 1)")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
enum Counter {
    Leaves(Deg1Counter),
    NonLeaves(DegGe2Counter),
}

impl Counter {
    fn for_parameter(parameter: Parameter, n: usize, epsilon: f64, delta: f64, seed: u64) -> Result<Self, ForestError> {
        Ok(match parameter {
            Parameter::Beta => Counter::Leaves(Deg1Counter::new(n, epsilon, delta, seed)?),
            _ => Counter::NonLeaves(DegGe2Counter::new(n, epsilon, delta, seed)?),
        })
    }

    fn edge(&mut self, u: u32, v: u32, s: i64) -> Result<(), Abort> {
        match self {
            Counter::Leaves(c) => c.edge(u, v, s),
            Counter::NonLeaves(c) => c.edge(u, v, s),
        }
    }

    fn space_bytes(&self) -> usize {
        match self {
            Counter::Leaves(c) => c.space_bytes(),
            Counter::NonLeaves(c) => c.space_bytes(),
        }
    }

    fn m(&self) -> u64 {
        match self {
            Counter::Leaves(c) => c.m(),
            Counter::NonLeaves(c) => c.m(),
        }
    }

    fn checkpoint(&self) -> Vec<u8> {
        match self {
            Counter::Leaves(c) => c.checkpoint(),
            Counter::NonLeaves(c) => c.checkpoint(),
        }
    }

    fn restore(&mut self, bytes: &[u8]) -> Result<(), ForestError> {
        match self {
            Counter::Leaves(c) => c.restore(bytes)?,
            Counter::NonLeaves(c) => c.restore(bytes)?,
        }
        Ok(())
    }

    /// Fills the matching estimate of `counts`.
    fn finish(self, counts: &mut ForestCounts) -> Result<(), ForestError> {
        match self {
            Counter::Leaves(c) => counts.deg1_hat = Some(c.finish()?),
            Counter::NonLeaves(c) => counts.deg_ge2_hat = Some(c.finish()),
        }
        Ok(())
    }
}

fn empty_counts(n: usize, m: u64) -> Result<ForestCounts, ForestError> {
    if m >= n as u64 && n > 0 {
        return Err(ForestError::Stream(crate::stream::StreamError::NotAForest { n, m: m as usize }));
    }
    Ok(ForestCounts {
        n,
        deg1_hat: None,
        deg_ge2_hat: None,
        supp_hat: None,
        components: n as u64 - m,
        m,
        exact_small: None,
    })
}

struct OnePass(Counter);

impl PassConsumer for OnePass {
    fn update(&mut self, _pass: usize, update: &StreamUpdate) -> Result<(), Abort> {
        let mut res = Ok(());
        update.for_each_edge(|u, v, s| {
            if res.is_ok() {
                res = self.0.edge(u, v, s);
            }
        });
        res
    }
}

/// One pass with the counter `parameter` needs; returns the counts and the
/// sketch bytes.
pub fn one_pass_counts(
    stream: &StreamSequence,
    parameter: Parameter,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<(ForestCounts, usize), ForestError> {
    check(parameter, epsilon, delta)?;
    let counter = Counter::for_parameter(parameter, stream.n(), epsilon, delta, seed::derive(seed, 1))?;
    let OnePass(counter) = replay(stream, 1, OnePass(counter))?;
    let space = counter.space_bytes();
    let mut counts = empty_counts(stream.n(), counter.m())?;
    counter.finish(&mut counts)?;
    Ok((counts, space))
}

/// Subroutine constants for a two-pass run on `n` vertices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPassPlan {
    pub k1: f64,
    pub k2: usize,
    pub c1: f64,
    pub c2: f64,
    pub epsilon1: f64,
    pub count_epsilon: f64,
    pub count_delta: f64,
}

impl TwoPassPlan {
    /// `K1 = √n`, `c1 = 3 ln(6/δ)`, `c2 = 1/δ`; `K2 = 8√n` (β, φ) or `12√n` (γ);
    /// `ε1 = ε/2` for β and `ε` otherwise; the count sketch runs at
    /// `(ε1, δ/2)`.
    pub fn new(parameter: Parameter, n: usize, epsilon: f64, delta: f64) -> Self {
        let root = (n as f64).sqrt();
        let (k2_factor, epsilon1) = match parameter {
            Parameter::Gamma => (12.0, epsilon),
            Parameter::Beta => (8.0, epsilon / 2.0),
            _ => (8.0, epsilon),
        };
        Self {
            k1: root.max(1.0),
            k2: (k2_factor * root).ceil() as usize,
            c1: 3.0 * (6.0 / delta).ln(),
            c2: 1.0 / delta,
            epsilon1,
            count_epsilon: epsilon1,
            count_delta: delta / 2.0,
        }
    }
}

struct TwoPass {
    counter: Counter,
    checkpoint: Vec<u8>,
    support: SupportLarge,
    core: SmallCoreRecovery,
}

impl PassConsumer for TwoPass {
    fn update(&mut self, pass: usize, update: &StreamUpdate) -> Result<(), Abort> {
        let mut res: Result<(), Abort> = Ok(());
        update.for_each_edge(|u, v, s| {
            if res.is_err() {
                return;
            }
            if pass == 0 {
                res = self.counter.edge(u, v, s);
            }
            if res.is_ok() {
                res = self
                    .support
                    .edge(pass, u, v, s)
                    .and_then(|_| self.core.edge(pass, u, v, s))
                    .map_err(|e| Abort::new(e.to_string()));
            }
        });
        res
    }

    fn end_pass(&mut self, pass: usize) -> Result<(), Abort> {
        self.support.end_pass(pass);
        self.core.end_pass(pass);
        if pass == 0 {
            self.checkpoint = self.counter.checkpoint();
        }
        Ok(())
    }
}

/// Both passes with all subroutines sharing each replay; returns the counts
/// and the peak bytes.
pub fn two_pass_counts(
    stream: &StreamSequence,
    parameter: Parameter,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<(ForestCounts, usize), ForestError> {
    check(parameter, epsilon, delta)?;
    let n = stream.n();
    let plan = TwoPassPlan::new(parameter, n, epsilon, delta);
    let run = TwoPass {
        counter: Counter::for_parameter(parameter, n, plan.count_epsilon, plan.count_delta, seed::derive(seed, 1))?,
        checkpoint: Vec::new(),
        support: SupportLarge::new(n, &SupportLargeParams::new(plan.k1, plan.c1, plan.epsilon1, seed::derive(seed, 2)))?,
        core: SmallCoreRecovery::new(n, plan.k2, plan.c2, seed::derive(seed, 3))?,
    };
    let TwoPass {
        mut counter,
        checkpoint,
        support,
        core,
    } = replay(stream, 2, run)?;
    counter.restore(&checkpoint)?;
    let space = counter.space_bytes() + support.peak_bytes() + core.peak_bytes();
    let mut counts = empty_counts(n, counter.m())?;
    counter.finish(&mut counts)?;
    counts.supp_hat = support.finish().ok();
    counts.exact_small = core.finish().ok().map(|c| (c.supp, c.deg_ge2));
    Ok((counts, space))
}

/// Builds the report for `parameter` from counts. Two-pass reports use the
/// exact small-core counts when present, the estimates otherwise, and fall
/// back to the one-pass interval (flagged degraded) when both subroutines
/// failed.
pub fn report_from_counts(
    parameter: Parameter,
    passes: u8,
    counts: &ForestCounts,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateReport, ForestError> {
    check(parameter, epsilon, delta)?;
    let n = counts.n as f64;
    let c = counts.components as f64;
    let from_core_d1 = counts.exact_small.map(|(_, h)| n - h as f64);
    let from_core_h = counts.exact_small.map(|(_, h)| h as f64);
    let missing = |what: &str| ForestError::InvalidParams(format!("counts lack {what}"));
    let d1 = counts.deg1_hat.or(from_core_d1);
    let h = counts.deg_ge2_hat.or(from_core_h);
    let mut flags = Vec::new();

    let one_pass = |flags: &mut Vec<Flag>| -> Result<(f64, f64, f64), ForestError> {
        let (lower, point, upper) = match parameter {
            Parameter::Beta => beta_one_pass(n, d1.ok_or_else(|| missing("a leaf count"))?, c),
            Parameter::Gamma => gamma_one_pass(n, h.ok_or_else(|| missing("a non-leaf count"))?, c),
            _ => phi_one_pass(n, h.ok_or_else(|| missing("a non-leaf count"))?, c),
        };
        if upper > parameter.factor(1) * lower {
            flags.push(Flag::WideInterval);
        }
        Ok((lower, point, upper))
    };

    let (lower, point, upper, factor) = if passes == 1 {
        let (l, p, u) = one_pass(&mut flags)?;
        (l, p, u, parameter.factor(1))
    } else {
        let exact = counts.exact_small.map(|(s, h)| (s as f64, h as f64, n - h as f64));
        let values = match exact {
            Some(v) => {
                flags.push(Flag::SmallCoreExact);
                Some(v)
            }
            None => {
                flags.push(Flag::SmallCoreFailed);
                match counts.supp_hat {
                    Some(s) => Some((
                        s.clamp(0.0, n),
                        h.unwrap_or(0.0).clamp(0.0, n),
                        d1.unwrap_or(0.0).clamp(0.0, n),
                    )),
                    None => {
                        flags.push(Flag::SupportLargeAborted);
                        flags.push(Flag::Degraded);
                        None
                    }
                }
            }
        };
        match values {
            None => {
                let (l, p, u) = one_pass(&mut flags)?;
                (l, p, u, parameter.factor(1))
            }
            Some((s, h, d1)) => {
                let point = match parameter {
                    Parameter::Beta => beta_two_pass_point(n, d1, s),
                    Parameter::Gamma => gamma_two_pass_point(h, s),
                    _ => phi_two_pass_point(h, s, c),
                };
                let f = parameter.factor(2);
                let (lower, upper) = match parameter {
                    Parameter::Beta => (point / (1.0 + epsilon), f * (1.0 + epsilon) * point),
                    _ => (point / (f * (1.0 + epsilon)), point / (1.0 - epsilon)),
                };
                (lower, point, upper, f)
            }
        }
    };
    flags.sort();
    flags.dedup();
    Ok(EstimateReport {
        parameter,
        point,
        lower,
        upper,
        factor,
        epsilon,
        delta,
        passes,
        flags,
        seed,
        space_bytes: 0,
        wall_ms: None,
    })
}

/// Runs the `passes`-pass estimator for `parameter`.
pub fn estimate(
    stream: &StreamSequence,
    parameter: Parameter,
    passes: u8,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<EstimateReport, ForestError> {
    let (counts, space) = match passes {
        1 => one_pass_counts(stream, parameter, epsilon, delta, seed)?,
        2 => two_pass_counts(stream, parameter, epsilon, delta, seed)?,
        p => return Err(ForestError::InvalidParams(format!("{p} passes; expected 1 or 2"))),
    };
    let mut report = report_from_counts(parameter, passes, &counts, epsilon, delta, seed)?;
    report.space_bytes = space;
    if !stream.isolated_vertices().is_empty() {
        report.push_flag(Flag::IsolatedVertices);
    }
    Ok(report)
}

pub fn estimate_beta_onepass(stream: &StreamSequence, epsilon: f64, delta: f64, seed: u64) -> Result<EstimateReport, ForestError> {
    estimate(stream, Parameter::Beta, 1, epsilon, delta, seed)
}

pub fn estimate_beta_twopass(stream: &StreamSequence, epsilon: f64, delta: f64, seed: u64) -> Result<EstimateReport, ForestError> {
    estimate(stream, Parameter::Beta, 2, epsilon, delta, seed)
}

pub fn estimate_gamma_onepass(stream: &StreamSequence, epsilon: f64, delta: f64, seed: u64) -> Result<EstimateReport, ForestError> {
    estimate(stream, Parameter::Gamma, 1, epsilon, delta, seed)
}

pub fn estimate_gamma_twopass(stream: &StreamSequence, epsilon: f64, delta: f64, seed: u64) -> Result<EstimateReport, ForestError> {
    estimate(stream, Parameter::Gamma, 2, epsilon, delta, seed)
}

pub fn estimate_phi_onepass(stream: &StreamSequence, epsilon: f64, delta: f64, seed: u64) -> Result<EstimateReport, ForestError> {
    estimate(stream, Parameter::Phi, 1, epsilon, delta, seed)
}

pub fn estimate_phi_twopass(stream: &StreamSequence, epsilon: f64, delta: f64, seed: u64) -> Result<EstimateReport, ForestError> {
    estimate(stream, Parameter::Phi, 2, epsilon, delta, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::{generate_forest, parse_stream, GeneratorSpec, Shape};

    fn gen(shape: Shape, n: Option<usize>, seed: u64) -> (StreamSequence, crate::stream::GroundTruth) {
        generate_forest(&GeneratorSpec::new(shape, n, seed)).unwrap()
    }

    #[test]
    fn p2_forest_one_pass() {
        let s = parse_stream(b"# n=10\n+ 1 2\n+ 3 4\n+ 5 6\n+ 7 8\n+ 9 10\n").unwrap();
        let phi = estimate_phi_onepass(&s, 0.2, 0.1, 1).unwrap();
        assert_eq!(phi.point, 5.0);
        let gamma = estimate_gamma_onepass(&s, 0.2, 0.1, 1).unwrap();
        assert_eq!((gamma.lower, gamma.upper), (5.0, 5.0));
    }

    #[test]
    fn p4_one_pass_intervals() {
        let s = parse_stream(b"# n=4\n+ 1 2\n+ 2 3\n+ 3 4\n").unwrap();
        let g = estimate_gamma_onepass(&s, 0.2, 0.1, 2).unwrap();
        assert_eq!((g.lower, g.upper), (1.0, 3.0));
        assert!(g.accepts(2.0));
        let p = estimate_phi_onepass(&s, 0.2, 0.1, 2).unwrap();
        assert_eq!(p.point, 1.5);
        assert!(p.accepts(2.0));
    }

    #[test]
    fn exact_branch_on_small_trees() {
        for (shape, n) in [
            (Shape::P3Spider { legs: 6 }, None),
            (Shape::StarWithLeaves { r: 6 }, None),
            (Shape::Caterpillar { spine: 8 }, None),
            (Shape::PathBundle { paths: 1 }, Some(12)),
        ] {
            let (s, t) = gen(shape, n, 4);
            for parameter in [Parameter::Beta, Parameter::Gamma, Parameter::Phi] {
                let r = estimate(&s, parameter, 2, 0.2, 0.1, 9).unwrap();
                assert!(r.has_flag(Flag::SmallCoreExact), "{shape:?} {r:?}");
                let truth = match parameter {
                    Parameter::Beta => t.beta,
                    Parameter::Gamma => t.gamma,
                    _ => t.phi,
                } as f64;
                assert!(r.accepts(truth), "{shape:?} {parameter:?} {r:?} {truth}");
                assert!(r.lower <= r.point && r.point <= r.upper);
            }
        }
    }

    #[test]
    fn star_with_leaves_phi_exact() {
        let (s, t) = gen(Shape::StarWithLeaves { r: 9 }, None, 0);
        let r = estimate_phi_twopass(&s, 0.2, 0.1, 0).unwrap();
        assert_eq!(r.point, t.phi as f64);
    }

    #[test]
    fn degraded_when_both_fail() {
        let counts = ForestCounts {
            n: 100,
            deg1_hat: Some(40.0),
            deg_ge2_hat: Some(60.0),
            supp_hat: None,
            components: 1,
            m: 99,
            exact_small: None,
        };
        let r = report_from_counts(Parameter::Gamma, 2, &counts, 0.2, 0.1, 0).unwrap();
        assert!(r.has_flag(Flag::Degraded));
        assert_eq!((r.lower, r.upper), (20.0, 61.0));
    }

    #[test]
    fn random_tree_two_pass_uses_sampling() {
        let (s, t) = gen(Shape::UniformRandomTree, Some(3000), 5);
        let r = estimate_beta_twopass(&s, 0.2, 0.1, 5).unwrap();
        assert!(r.has_flag(Flag::SmallCoreFailed));
        assert!(r.accepts(t.beta as f64), "{r:?} {}", t.beta);
        assert!(r.space_bytes > 0);
    }

    #[test]
    fn lambda_rejected() {
        let s = parse_stream(b"# n=2\n+ 1 2\n").unwrap();
        assert!(matches!(estimate(&s, Parameter::Lambda, 1, 0.2, 0.1, 0), Err(ForestError::InvalidParams(_))));
    }
}
