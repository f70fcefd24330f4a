#![allow(dead_code)]

use std::path::PathBuf;

use gpmult_core::config::{LoadedScenario, ScenarioConfig};
use gpmult_core::graphgroup::{FiniteGroup, SimplicialGraph};
use gpmult_core::wordcraft::GpContext;

pub const MAIN_SCENARIOS: [&str; 6] = [
    "a_edgeless_z2",
    "b_tensor_z2_z3",
    "c_triangle_points",
    "d_path_mixed",
    "e_star_k12",
    "f_block_swaps",
];

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(format!("{name}.json"))
}

pub fn config(name: &str) -> ScenarioConfig {
    let text = std::fs::read_to_string(scenario_path(name)).expect("scenario file");
    ScenarioConfig::from_json(&text).expect("scenario parses")
}

pub fn load(name: &str) -> LoadedScenario {
    config(name).build().expect("scenario builds")
}

/// `K_{1,2}` with every vertex group `Z/2`.
pub fn k12_z2() -> GpContext {
    GpContext::new(SimplicialGraph::complete_multipartite(&[1, 2]), vec![FiniteGroup::cyclic(2); 3]).unwrap()
}

/// Compares two JSON documents, allowing floats to differ by `tol`
/// relative to their magnitude. Returns the first differing path.
pub fn json_close(a: &serde_json::Value, b: &serde_json::Value, tol: f64, path: &str) -> Result<(), String> {
    use serde_json::Value::*;
    match (a, b) {
        (Number(x), Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            if (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())) {
                Ok(())
            } else {
                Err(format!("{path}: {x} vs {y}"))
            }
        }
        (Array(x), Array(y)) if x.len() == y.len() => x
            .iter()
            .zip(y)
            .enumerate()
            .try_for_each(|(i, (u, v))| json_close(u, v, tol, &format!("{path}/{i}"))),
        (Object(x), Object(y)) if x.len() == y.len() => x.iter().try_for_each(|(k, u)| match y.get(k) {
            Some(v) => json_close(u, v, tol, &format!("{path}/{k}")),
            None => Err(format!("{path}/{k}: missing")),
        }),
        _ if a == b => Ok(()),
        _ => Err(format!("{path}: {a} vs {b}")),
    }
}
