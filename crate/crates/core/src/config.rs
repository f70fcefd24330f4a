//! JSON scenario files: schema, preset expansion and construction of a
//! [`Scenario`].
//!
//! Per-vertex lists (`groups`, `actions`, `multipliers`, Haagerup finite
//! sets) follow the order of `graph.vertices` as written. Presets are
//! expanded to explicit tables first and the scenario is built from the
//! expanded document, which is what reports echo.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use serde_path_to_error::Segment;

use crate::dynamics::{validate_action, ActionSystem, ActionTable, Automorphism};
use crate::error::Error;
use crate::graphgroup::{validate_graph, FiniteGroup, GroupPreset, RawGraph, SimplicialGraph, VertexId};
use crate::matalg::{BlockStructure, CMatrix, CentralElement, C64};
use crate::multipliers::{GpMultiplierCtx, Multiplier};
use crate::verifier::{Scenario, VerdictReport, VerifyParams};
use crate::wordcraft::{normalize, GpContext};

/// Matrix written as rows of `[re, im]` entries.
pub type RawMatrix = Vec<Vec<C64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub graph: RawGraph,
    pub groups: Vec<GroupSpec>,
    pub algebra: AlgebraSpec,
    pub actions: Vec<ActionSpec>,
    pub multipliers: Vec<MultiplierSpec>,
    #[serde(default)]
    pub verify: VerifyParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Preset(GroupPreset),
    Table(Vec<Vec<usize>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub blocks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ActionSpec {
    Trivial,
    /// `Z/n` by diagonal unitaries with integer charges per block.
    DiagonalPhases { charges: Vec<Vec<i64>> },
    /// `Z/n` by powers of a block permutation.
    PermutationOfPoints { sigma: Vec<usize> },
    /// `Z/n` by powers of one automorphism.
    Generator { perm: Vec<usize>, unitaries: Vec<RawMatrix> },
    /// One automorphism per group element.
    Explicit { autos: Vec<AutoSpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutoSpec {
    pub perm: Vec<usize>,
    pub unitaries: Vec<RawMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MultiplierSpec {
    /// One scalar per block for every group element.
    Values { values: Vec<Vec<C64>> },
    /// One scalar for every group element, repeated in each block.
    Scalar { values: Vec<C64> },
    /// 1 at the identity and `c` elsewhere.
    Geometric { c: C64 },
    Ones,
    Delta,
}

/// A config problem located by a JSON pointer into the document.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub pointer: String,
    pub code: String,
    pub message: String,
}

impl ConfigError {
    fn at(pointer: impl Into<String>, e: Error) -> Self {
        ConfigError {
            pointer: pointer.into(),
            code: e.code().to_string(),
            message: e.to_string(),
        }
    }

    fn schema(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            pointer: pointer.into(),
            code: "SchemaError".into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = if self.pointer.is_empty() { "\"\"" } else { &self.pointer };
        write!(f, "{} at {}: {}", self.code, p, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", escape(key))),
            Segment::Enum { variant } => out.push_str(&format!("/{}", escape(variant))),
            Segment::Unknown => {}
        }
    }
    out
}

fn to_matrix(rows: &RawMatrix, pointer: &str) -> Result<CMatrix, ConfigError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(ConfigError::schema(pointer, format!("expected a square {n}x{n} matrix")));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn from_matrix(m: &CMatrix) -> RawMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn to_unitaries(us: &[RawMatrix], pointer: &str) -> Result<Vec<CMatrix>, ConfigError> {
    us.iter()
        .enumerate()
        .map(|(k, u)| to_matrix(u, &format!("{pointer}/unitaries/{k}")))
        .collect()
}

/// Groups, structure, actions and multipliers in declared vertex order.
struct Components {
    groups: Vec<FiniteGroup>,
    structure: BlockStructure,
    tables: Vec<ActionTable>,
    mults: Vec<Multiplier>,
}

fn require_cyclic(g: &FiniteGroup, pointer: &str) -> Result<usize, ConfigError> {
    let n = g.order();
    if *g != FiniteGroup::cyclic(n) {
        return Err(ConfigError::at(
            pointer,
            Error::Config("this action preset needs the cyclic group table".into()),
        ));
    }
    Ok(n)
}

fn build_action(
    spec: &ActionSpec,
    group: &FiniteGroup,
    s: &BlockStructure,
    pointer: &str,
) -> Result<ActionTable, ConfigError> {
    let err = |e| ConfigError::at(pointer, e);
    let table = match spec {
        ActionSpec::Trivial => ActionTable::trivial(group.clone(), s.clone()),
        ActionSpec::DiagonalPhases { charges } => {
            let n = require_cyclic(group, pointer)?;
            ActionTable::diagonal_phases(n, s.clone(), charges).map_err(err)?
        }
        ActionSpec::PermutationOfPoints { sigma } => {
            let n = require_cyclic(group, pointer)?;
            ActionTable::cyclic_permutation(n, s.clone(), sigma).map_err(err)?
        }
        ActionSpec::Generator { perm, unitaries } => {
            let n = require_cyclic(group, pointer)?;
            let gen = Automorphism::new(s, perm.clone(), to_unitaries(unitaries, pointer)?).map_err(err)?;
            let mut autos = vec![Automorphism::identity(s)];
            for g in 1..n {
                autos.push(gen.compose(&autos[g - 1]));
            }
            ActionTable::new(group.clone(), s.clone(), autos).map_err(err)?
        }
        ActionSpec::Explicit { autos } => {
            let autos = autos
                .iter()
                .enumerate()
                .map(|(g, a)| {
                    let p = format!("{pointer}/autos/{g}");
                    Automorphism::new(s, a.perm.clone(), to_unitaries(&a.unitaries, &p)?)
                        .map_err(|e| ConfigError::at(p, e))
                })
                .collect::<Result<Vec<_>, _>>()?;
            ActionTable::new(group.clone(), s.clone(), autos).map_err(err)?
        }
    };
    validate_action(&table).map_err(err)?;
    Ok(table)
}

fn build_multiplier(spec: &MultiplierSpec, group: &FiniteGroup, k: usize, pointer: &str) -> Result<Multiplier, ConfigError> {
    let err = |e| ConfigError::at(pointer, e);
    match spec {
        MultiplierSpec::Values { values } => {
            if let Some(g) = values.iter().position(|v| v.len() != k) {
                return Err(ConfigError::at(format!("{pointer}/values/{g}"), Error::StructureMismatch));
            }
            Multiplier::new(group.clone(), values.iter().map(|v| CentralElement::new(v.clone())).collect())
                .map_err(err)
        }
        MultiplierSpec::Scalar { values } => Multiplier::scalar(group.clone(), k, values).map_err(err),
        MultiplierSpec::Geometric { c } => Ok(Multiplier::geometric(group.clone(), k, *c)),
        MultiplierSpec::Ones => Ok(Multiplier::ones(group.clone(), k)),
        MultiplierSpec::Delta => Ok(Multiplier::delta(group.clone(), k)),
    }
}

impl ScenarioConfig {
    /// Parses a document, rejecting unknown keys.
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = pointer_of(e.path());
            ConfigError::schema(pointer, e.into_inner().to_string())
        })
    }

    fn check_graph(&self) -> Result<(), ConfigError> {
        let RawGraph { vertices, edges } = &self.graph;
        validate_graph(vertices, edges).map_err(|e| {
            let pointer = match &e {
                Error::DuplicateVertex(v) => {
                    let i = vertices.iter().rposition(|w| w == v).unwrap_or(0);
                    format!("/graph/vertices/{i}")
                }
                Error::LoopEdge(v) => {
                    let i = edges.iter().position(|&(a, b)| a == *v && b == *v).unwrap_or(0);
                    format!("/graph/edges/{i}")
                }
                Error::UnknownVertex(v) => {
                    let i = edges.iter().position(|&(a, b)| a == *v || b == *v).unwrap_or(0);
                    format!("/graph/edges/{i}")
                }
                _ => "/graph".into(),
            };
            ConfigError::at(pointer, e)
        })?;
        let n = vertices.len();
        for (key, len) in [
            ("groups", self.groups.len()),
            ("actions", self.actions.len()),
            ("multipliers", self.multipliers.len()),
        ] {
            if len != n {
                return Err(ConfigError::schema(
                    format!("/{key}"),
                    format!("expected {n} entries, one per vertex, found {len}"),
                ));
            }
        }
        Ok(())
    }

    fn components(&self) -> Result<Components, ConfigError> {
        self.check_graph()?;
        let groups = self
            .groups
            .iter()
            .enumerate()
            .map(|(i, g)| {
                match g {
                    GroupSpec::Preset(p) => FiniteGroup::preset(*p),
                    GroupSpec::Table(t) => FiniteGroup::from_table(t.clone()),
                }
                .map_err(|e| ConfigError::at(format!("/groups/{i}"), e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let structure =
            BlockStructure::new(self.algebra.blocks.clone()).map_err(|e| ConfigError::at("/algebra/blocks", e))?;
        let tables = self
            .actions
            .iter()
            .zip(&groups)
            .enumerate()
            .map(|(i, (a, g))| build_action(a, g, &structure, &format!("/actions/{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        let k = structure.num_blocks();
        let mults = self
            .multipliers
            .iter()
            .zip(&groups)
            .enumerate()
            .map(|(i, (m, g))| build_multiplier(m, g, k, &format!("/multipliers/{i}")))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Components {
            groups,
            structure,
            tables,
            mults,
        })
    }

    /// The same scenario with every preset replaced by explicit tables.
    pub fn expand(&self) -> Result<ScenarioConfig, ConfigError> {
        let c = self.components()?;
        Ok(ScenarioConfig {
            name: self.name.clone(),
            graph: self.graph.clone(),
            groups: c.groups.iter().map(|g| GroupSpec::Table(g.table())).collect(),
            algebra: self.algebra.clone(),
            actions: c
                .tables
                .iter()
                .map(|t| ActionSpec::Explicit {
                    autos: t
                        .autos()
                        .iter()
                        .map(|a| AutoSpec {
                            perm: a.perm().to_vec(),
                            unitaries: a.unitaries().iter().map(from_matrix).collect(),
                        })
                        .collect(),
                })
                .collect(),
            multipliers: c
                .mults
                .iter()
                .map(|h| MultiplierSpec::Values {
                    values: h.values().iter().map(|v| v.scalars().to_vec()).collect(),
                })
                .collect(),
            verify: self.verify.clone(),
        })
    }

    /// Expands presets and builds the scenario from the expanded document.
    pub fn build(&self) -> Result<LoadedScenario, ConfigError> {
        let expanded = self.expand()?;
        let c = expanded.components()?;
        let declared = &expanded.graph.vertices;
        let graph = SimplicialGraph::try_from(expanded.graph.clone()).map_err(|e| ConfigError::at("/graph", e))?;
        let order: Vec<usize> = graph
            .vertices()
            .iter()
            .map(|v| declared.iter().position(|w| w == v).unwrap())
            .collect();
        let groups = pick(&order, &c.groups);
        let tables = pick(&order, &c.tables);
        let mults = pick(&order, &c.mults);

        let gp = GpContext::new(graph, groups).map_err(|e| ConfigError::at("/groups", e))?;
        let mut params = expanded.verify.clone();
        for (i, w) in params.seeds.iter().enumerate() {
            normalize(w, &gp).map_err(|e| ConfigError::at(format!("/verify/seeds/{i}"), e))?;
        }
        if let Some(hp) = &mut params.haagerup {
            if hp.finite_sets.len() != order.len() {
                return Err(ConfigError::schema(
                    "/verify/haagerup/finite_sets",
                    format!("expected {} sets, one per vertex", order.len()),
                ));
            }
            hp.finite_sets = order.iter().map(|&i| hp.finite_sets[i].clone()).collect();
        }
        let sys = ActionSystem::new(gp, c.structure, tables).map_err(|e| ConfigError::at("/actions", e))?;
        let ctx = GpMultiplierCtx::new(sys, mults).map_err(|e| ConfigError::at("/multipliers", e))?;
        let scenario =
            Scenario::new(expanded.name.clone(), ctx, params).map_err(|e| ConfigError::at("/verify", e))?;
        Ok(LoadedScenario {
            config: expanded,
            scenario,
        })
    }
}

fn pick<T: Clone>(order: &[usize], xs: &[T]) -> Vec<T> {
    order.iter().map(|&i| xs[i].clone()).collect()
}

/// A built scenario together with the expanded document it came from.
#[derive(Debug)]
pub struct LoadedScenario {
    pub config: ScenarioConfig,
    pub scenario: Scenario,
}

impl LoadedScenario {
    fn declared_index(&self, v: VertexId) -> usize {
        self.config.graph.vertices.iter().position(|&w| w == v).unwrap_or(0)
    }

    /// Commutation failures of the actions and of the multipliers, located
    /// at the offending vertex entry.
    pub fn setup_problems(&self) -> Vec<ConfigError> {
        let ctx = &self.scenario.ctx;
        let mut out = Vec::new();
        if let Err(e) = ctx.actions_commute() {
            let p = match e {
                Error::EdgeViolation { w, .. } => format!("/actions/{}", self.declared_index(*w)),
                _ => "/actions".into(),
            };
            out.push(ConfigError::at(p, e.clone()));
        }
        if let Err(e) = ctx.multipliers_commute() {
            let p = match e {
                Error::EdgeViolation { w, .. } => format!("/multipliers/{}", self.declared_index(*w)),
                _ => "/multipliers".into(),
            };
            out.push(ConfigError::at(p, e.clone()));
        }
        out
    }

    /// A verdict bundle with the expanded config echoed under `config`.
    pub fn report_json(&self, report: &VerdictReport) -> Value {
        let mut v = serde_json::to_value(report).expect("report serializes");
        if let Value::Object(m) = &mut v {
            m.insert("config".into(), serde_json::to_value(&self.config).expect("config serializes"));
        }
        v
    }
}

/// A word in the report format `[[vertex, element], ...]`. Parse errors
/// carry the line and column of the problem.
pub fn parse_word(text: &str) -> Result<Vec<(VertexId, usize)>, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}
