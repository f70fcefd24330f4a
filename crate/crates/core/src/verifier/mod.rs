//! Theorem-level checks over one scenario, collected into a JSON verdict
//! bundle.
//!
//! Every check runs in a fixed order and draws randomness from its own
//! stream derived from the scenario seed, so reports do not depend on which
//! suites were selected or on the thread count.

mod identities;
mod inequalities;
mod suites;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graphgroup::VertexId;
use crate::matalg::Positivity;
use crate::multipliers::{is_positive_definite, GpMultiplierCtx};
use crate::wordcraft::{normalize, GPElement, DEFAULT_BUDGET};

pub use identities::{
    check_cross_terms, check_factorization_left, check_factorization_right, check_star_symmetry,
};
pub use inequalities::{
    check_main_theorem, check_schwarz, check_stinespring, check_y1_square, complete_sets,
    schwarz_difference, y1_difference,
};
pub use suites::{
    check_cocycle_identity, check_cocycle_norms, check_haagerup, check_negative_definite,
    check_schoenberg, check_schoenberg_linear, check_spectral_gap, check_unitalize,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HaagerupParams {
    pub k: usize,
    pub radius: usize,
    pub epsilon: f64,
    /// One list of group elements per vertex, in sorted vertex order.
    pub finite_sets: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyParams {
    pub seed: u64,
    /// Ball radius from which complete sets are sampled.
    pub ball_radius: usize,
    /// Ball radius over which the kernel identities are enumerated.
    pub identity_radius: usize,
    pub complete_sets: usize,
    pub sample_size: usize,
    pub max_set_size: usize,
    pub max_flat_dim: usize,
    /// Words that every sampled complete set contains.
    pub seeds: Vec<Vec<(VertexId, usize)>>,
    pub psd_tol: f64,
    pub identity_tol: f64,
    pub tuple_samples: usize,
    pub max_tuple: usize,
    pub budget: usize,
    pub haagerup: Option<HaagerupParams>,
    pub schoenberg_grid: Vec<f64>,
    pub nd_trials: usize,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            seed: 42,
            ball_radius: 4,
            identity_radius: 3,
            complete_sets: 6,
            sample_size: 10,
            max_set_size: 60,
            max_flat_dim: 1500,
            seeds: Vec::new(),
            psd_tol: 1e-8,
            identity_tol: 1e-10,
            tuple_samples: 300,
            max_tuple: 4,
            budget: DEFAULT_BUDGET,
            haagerup: None,
            schoenberg_grid: vec![10.0, 1.0, 0.1],
            nd_trials: 500,
        }
    }
}

/// A multiplier context together with everything the checks need.
#[derive(Debug)]
pub struct Scenario {
    pub name: String,
    pub ctx: GpMultiplierCtx,
    pub params: VerifyParams,
    seeds: Vec<GPElement>,
    vertex_pd: Vec<Positivity>,
}

impl Scenario {
    pub fn new(name: impl Into<String>, ctx: GpMultiplierCtx, params: VerifyParams) -> Result<Self> {
        let gp = ctx.system().gp();
        let seeds = params
            .seeds
            .iter()
            .map(|w| normalize(w, gp))
            .collect::<Result<Vec<_>>>()?;
        let vertex_pd = ctx
            .multipliers()
            .iter()
            .zip(ctx.system().tables())
            .map(|(h, t)| is_positive_definite(h, t, params.psd_tol))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scenario {
            name: name.into(),
            ctx,
            params,
            seeds,
            vertex_pd,
        })
    }

    pub fn seeds(&self) -> &[GPElement] {
        &self.seeds
    }

    pub fn vertex_positivity(&self) -> &[Positivity] {
        &self.vertex_pd
    }

    /// Independent random stream for one check.
    pub fn rng(&self, salt: &str) -> ChaCha8Rng {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in salt.bytes() {
            h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
        }
        ChaCha8Rng::seed_from_u64(self.params.seed ^ h)
    }

    pub(crate) fn require_valid(&self) -> std::result::Result<(), Outcome> {
        match self.ctx.require_valid() {
            Ok(()) => Ok(()),
            Err(e) => Err(Outcome::skipped(format!("{e}"))),
        }
    }

    /// The setup must be valid and every vertex multiplier positive
    /// definite.
    pub(crate) fn require_pd(&self) -> std::result::Result<(), Outcome> {
        self.require_valid()?;
        let vs = self.ctx.system().gp().graph().vertices();
        for (p, pos) in self.vertex_pd.iter().enumerate() {
            if !pos.positive {
                return Err(Outcome::skipped(format!(
                    "multiplier at vertex {} is not positive definite (lambda_min = {:e})",
                    vs[p], pos.lambda_min
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Main,
    Lemmas,
    Haagerup,
    Cocycles,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(Suite::Main),
            "lemmas" => Ok(Suite::Lemmas),
            "haagerup" => Ok(Suite::Haagerup),
            "cocycles" => Ok(Suite::Cocycles),
            "all" => Ok(Suite::All),
            other => Err(Error::Config(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Main => "main",
            Suite::Lemmas => "lemmas",
            Suite::Haagerup => "haagerup",
            Suite::Cocycles => "cocycles",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Result of one check before it is named and timed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outcome {
    pub status: Status,
    /// Residual or smallest eigenvalue, depending on the check.
    pub metric: Option<f64>,
    pub tolerance: Option<f64>,
    pub reason: Option<String>,
    pub detail: Value,
}

impl Outcome {
    pub fn judged(ok: bool, metric: f64, tolerance: f64, detail: Value) -> Self {
        Outcome {
            status: if ok { Status::Pass } else { Status::Fail },
            metric: Some(metric),
            tolerance: Some(tolerance),
            reason: None,
            detail,
        }
    }

    /// `metric ≤ tolerance`.
    pub fn residual(metric: f64, tolerance: f64, detail: Value) -> Self {
        Self::judged(metric <= tolerance, metric, tolerance, detail)
    }

    pub fn skipped(reason: impl Into<String>) -> Self {
        Outcome {
            status: Status::Skipped,
            metric: None,
            tolerance: None,
            reason: Some(reason.into()),
            detail: Value::Null,
        }
    }

    pub fn failed(reason: impl Into<String>) -> Self {
        Outcome {
            status: Status::Fail,
            metric: None,
            tolerance: None,
            reason: Some(reason.into()),
            detail: Value::Null,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    #[serde(flatten)]
    pub outcome: Outcome,
}

/// Non-deterministic run metadata, kept apart from the verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunInfo {
    pub timestamp: String,
    pub wall_ms: BTreeMap<&'static str, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictReport {
    pub scenario: String,
    pub suite: Suite,
    pub seed: u64,
    /// No check failed; skipped checks do not count against this.
    pub passed: bool,
    pub checks: Vec<CheckReport>,
    pub run: RunInfo,
}

impl VerdictReport {
    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|c| c.outcome.status == Status::Fail)
            .map(|c| c.name)
            .collect()
    }

    /// The report with the run metadata removed, for comparisons.
    pub fn verdict_json(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.remove("run");
        }
        v
    }
}

type CheckFn = fn(&Scenario) -> Result<Outcome>;

struct CheckSpec {
    name: &'static str,
    suites: &'static [Suite],
    run: CheckFn,
}

const SETUP_SUITES: &[Suite] = &[Suite::Main, Suite::Lemmas, Suite::Haagerup, Suite::Cocycles];

const CHECKS: &[CheckSpec] = &[
    CheckSpec { name: "setup", suites: SETUP_SUITES, run: check_setup },
    CheckSpec { name: "well_defined", suites: &[Suite::Main, Suite::Lemmas], run: check_well_defined },
    CheckSpec { name: "star_symmetry", suites: &[Suite::Lemmas], run: check_star_symmetry },
    CheckSpec { name: "factorization_left", suites: &[Suite::Lemmas], run: check_factorization_left },
    CheckSpec { name: "factorization_right", suites: &[Suite::Lemmas], run: check_factorization_right },
    CheckSpec { name: "cross_terms", suites: &[Suite::Lemmas], run: check_cross_terms },
    CheckSpec { name: "schwarz", suites: &[Suite::Lemmas], run: check_schwarz },
    CheckSpec { name: "y1_square", suites: &[Suite::Lemmas], run: check_y1_square },
    CheckSpec { name: "main_theorem", suites: &[Suite::Main], run: check_main_theorem },
    CheckSpec { name: "stinespring", suites: &[Suite::Main], run: check_stinespring },
    CheckSpec { name: "unitalize", suites: &[Suite::Haagerup], run: check_unitalize },
    CheckSpec { name: "haagerup_witness", suites: &[Suite::Haagerup], run: check_haagerup },
    CheckSpec { name: "cocycle_identity", suites: &[Suite::Cocycles], run: check_cocycle_identity },
    CheckSpec { name: "cocycle_norms", suites: &[Suite::Cocycles], run: check_cocycle_norms },
    CheckSpec { name: "negative_definite", suites: &[Suite::Cocycles], run: check_negative_definite },
    CheckSpec { name: "schoenberg", suites: &[Suite::Cocycles], run: check_schoenberg },
    CheckSpec { name: "schoenberg_linear", suites: &[Suite::Cocycles], run: check_schoenberg_linear },
    CheckSpec { name: "spectral_gap", suites: &[Suite::Cocycles], run: check_spectral_gap },
];

/// Names of the checks a suite runs, in execution order.
pub fn suite_checks(suite: Suite) -> Vec<&'static str> {
    CHECKS
        .iter()
        .filter(|c| suite == Suite::All || c.suites.contains(&suite))
        .map(|c| c.name)
        .collect()
}

/// Runs every check of `suite`. Only an exceeded search budget aborts the
/// run; other errors become failing checks.
pub fn run_all(sc: &Scenario, suite: Suite) -> Result<VerdictReport> {
    let mut checks = Vec::new();
    let mut wall_ms = BTreeMap::new();
    for spec in CHECKS.iter().filter(|c| suite == Suite::All || c.suites.contains(&suite)) {
        let start = Instant::now();
        let outcome = match (spec.run)(sc) {
            Ok(o) => o,
            Err(e @ Error::BudgetExceeded(_)) => return Err(e),
            Err(e) => Outcome::failed(format!("{}: {e}", e.code())),
        };
        wall_ms.insert(spec.name, start.elapsed().as_secs_f64() * 1e3);
        checks.push(CheckReport { name: spec.name, outcome });
    }
    Ok(VerdictReport {
        scenario: sc.name.clone(),
        suite,
        seed: sc.params.seed,
        passed: checks.iter().all(|c| c.outcome.status != Status::Fail),
        checks,
        run: RunInfo {
            timestamp: timestamp(),
            wall_ms,
        },
    })
}

fn timestamp() -> String {
    let d = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .unwrap_or_default();
    format!("{}.{:03}", d.as_secs(), d.subsec_millis())
}

/// Actions are homomorphisms and both commutation conditions hold.
pub fn check_setup(sc: &Scenario) -> Result<Outcome> {
    let actions = sc.ctx.actions_commute();
    let mults = sc.ctx.multipliers_commute();
    let vertex_pd: Vec<Value> = sc
        .vertex_pd
        .iter()
        .zip(sc.ctx.system().gp().graph().vertices())
        .map(|(p, v)| serde_json::json!({"vertex": v, "positive": p.positive, "lambda_min": p.lambda_min}))
        .collect();
    let msg = |r: &std::result::Result<(), Error>| match r {
        Ok(()) => Value::String("ok".into()),
        Err(e) => serde_json::json!({"code": e.code(), "message": e.to_string()}),
    };
    let detail = serde_json::json!({
        "actions": msg(actions),
        "multipliers": msg(mults),
        "vertex_positive_definite": vertex_pd,
    });
    let ok = actions.is_ok() && mults.is_ok();
    Ok(Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        metric: None,
        tolerance: None,
        reason: match (actions, mults) {
            (Err(e), _) | (Ok(()), Err(e)) => Some(format!("{}: {e}", e.code())),
            _ => None,
        },
        detail,
    })
}

/// Every rearrangement of every word in the identity ball gives the same
/// product value. Runs even when the setup is invalid.
pub fn check_well_defined(sc: &Scenario) -> Result<Outcome> {
    let tol = sc.params.identity_tol;
    let r = crate::multipliers::gp_well_defined(&sc.ctx, sc.params.identity_radius, sc.params.budget)?;
    Ok(Outcome::residual(
        r.max_deviation,
        tol,
        serde_json::json!({
            "elements": r.elements,
            "representatives": r.representatives,
            "worst": r.worst.map(|w| w.to_string()),
        }),
    ))
}
