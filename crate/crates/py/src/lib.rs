use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sparsestream_core::carowei::{cw_base, cw_online_report, cw_unbounded, cw_vertex_random, CwConfig};
use sparsestream_core::forest;
use sparsestream_core::oracle::{exact_params, Graph};
use sparsestream_core::stream::{generate_forest, parse_stream, GeneratorSpec, Order, Shape};
use sparsestream_core::{Parameter, StreamSequence};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn shape(name: &str, r: Option<usize>) -> PyResult<Shape> {
    let r = || r.ok_or_else(|| value_err(format!("shape {name} needs r")));
    Ok(match name {
        "random-tree" => Shape::UniformRandomTree,
        "path" => Shape::PathBundle { paths: r().unwrap_or(1) },
        "spider-p4" => Shape::SpiderP4 { legs: r()? },
        "star-with-leaves" => Shape::StarWithLeaves { r: r()? },
        "p3-spider" => Shape::P3Spider { legs: r()? },
        "random-forest" => Shape::RandomForest { components: r()? },
        "star" => Shape::Star { leaves: r()? },
        "caterpillar" => Shape::Caterpillar { spine: r()? },
        "leafy-tree" => Shape::LeafyTree { core: r()? },
        _ => return Err(value_err(format!("unknown shape {name}"))),
    })
}

fn read(text: &str) -> PyResult<StreamSequence> {
    parse_stream(text.as_bytes()).map_err(value_err)
}

/// Generates a forest stream; returns `(stream_text, truth_json)`.
#[pyfunction]
#[pyo3(signature = (shape_name, n=None, r=None, seed=0, random_order=false, deletion_rate=0.0))]
fn generate(
    shape_name: &str,
    n: Option<usize>,
    r: Option<usize>,
    seed: u64,
    random_order: bool,
    deletion_rate: f64,
) -> PyResult<(String, String)> {
    let spec = GeneratorSpec::new(shape(shape_name, r)?, n, seed)
        .order(if random_order { Order::Random } else { Order::Arbitrary })
        .deletion_rate(deletion_rate);
    let (stream, truth) = generate_forest(&spec).map_err(value_err)?;
    Ok((stream.to_text(), truth.to_json().to_string()))
}

/// Exact β, γ, φ, λ and degree counts of a forest stream, as JSON.
#[pyfunction]
fn exact(stream: &str) -> PyResult<String> {
    let s = read(stream)?;
    let g = Graph::new(s.n(), &s.final_edges()).map_err(value_err)?;
    Ok(exact_params(&g).map_err(value_err)?.to_json().to_string())
}

/// Runs one estimator and returns its report as JSON.
#[pyfunction]
#[pyo3(signature = (stream, alg, eps=0.2, delta=0.1, seed=0, avg_degree=None, c_prime=1.0))]
fn estimate(
    stream: &str,
    alg: &str,
    eps: f64,
    delta: f64,
    seed: u64,
    avg_degree: Option<f64>,
    c_prime: f64,
) -> PyResult<String> {
    let s = read(stream)?;
    let forest_alg = |p, passes| forest::estimate(&s, p, passes, eps, delta, seed).map_err(value_err);
    let report = match alg {
        "beta-1p" => forest_alg(Parameter::Beta, 1)?,
        "beta-2p" => forest_alg(Parameter::Beta, 2)?,
        "gamma-1p" => forest_alg(Parameter::Gamma, 1)?,
        "gamma-2p" => forest_alg(Parameter::Gamma, 2)?,
        "phi-1p" => forest_alg(Parameter::Phi, 1)?,
        "phi-2p" => forest_alg(Parameter::Phi, 2)?,
        "cw-online" => cw_online_report(&s, eps, delta, seed).map_err(value_err)?,
        _ => {
            let n = s.n();
            let avg = avg_degree.unwrap_or_else(|| 2.0 * s.final_edges().len() as f64 / n.max(1) as f64);
            let cfg = CwConfig::new(eps, avg, seed).map_err(value_err)?;
            let est = match alg {
                "cw-base" => cw_base(&s, &cfg),
                "cw-unbounded" => cw_unbounded(&s, &cfg, c_prime),
                "cw-vertex" => cw_vertex_random(&s, &cfg),
                _ => return Err(value_err(format!("unknown algorithm {alg}"))),
            }
            .map_err(value_err)?;
            est.to_report(&cfg, n, delta, 1)
        }
    };
    Ok(report.to_json().to_string())
}

#[pymodule]
fn sparsestream(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(exact, m)?)?;
    m.add_function(wrap_pyfunction!(estimate, m)?)?;
    Ok(())
}
