use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

/// Exact parameters of a final forest, as computed by the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    pub n: usize,
    pub m: usize,
    pub lambda: BigRational,
    pub beta: u64,
    pub gamma: u64,
    pub phi: u64,
    pub deg1: u64,
    pub deg_ge2: u64,
    pub supp: u64,
    pub components: u64,
    pub avg_degree: Ratio<u64>,
    pub max_degree: u64,
}

fn ratio_string(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GroundTruth {
    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "m": self.m,
            "lambda": ratio_string(&self.lambda),
            "lambda_approx": self.lambda_f64(),
            "beta": self.beta,
            "gamma": self.gamma,
            "phi": self.phi,
            "deg1": self.deg1,
            "deg_ge2": self.deg_ge2,
            "supp": self.supp,
            "components": self.components,
            "avg_degree": format!("{}/{}", self.avg_degree.numer(), self.avg_degree.denom()),
            "max_degree": self.max_degree,
        })
    }
}
