//! Declarative scenario files (TOML) for the agent engine.
//!
//! ```toml
//! seed = 7
//! ticks = 100
//!
//! [params]
//! signal = 1.0
//! target_gain = 1.5
//! coupling = 0.3
//! move_probability = 0.5
//! learning_rate = 0.5
//!
//! [space]
//! topology = "square"   # or "hex"
//! width = 30            # agents start on distinct cells of this region
//! height = 30
//!
//! [[agent_types]]
//! name = "learner"
//! strategy = "adaptive"
//! weights = [1.0, 1.0]
//! rules = [
//!   { response = "linear", gain = 0.5 },
//!   { response = "double_on_second", when = { at_least = 0.2 } },
//! ]
//! attributes = [{ name = "size", kind = "real", default = 1.0 }]
//!
//! [[populations]]
//! name = "learners"
//! agent_type = "learner"
//! count = 50
//! ```

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::{Coord, Topology};

use super::{
    Agent, AgentType, AttrKind, AttrSchema, AttrValue, CasError, Environment, Params, Population,
    Rule, Strategy, StrategyFamily,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeSpec {
    pub name: String,
    pub kind: AttrKind,
    pub default: AttrValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentTypeSpec {
    pub name: String,
    pub strategy: StrategyFamily,
    pub rules: Vec<Rule>,
    /// Initial rule weights for adaptive types; defaults to all ones.
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub attributes: Vec<AttributeSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PopulationSpec {
    pub name: String,
    pub agent_type: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    #[serde(default)]
    pub topology: Topology,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Required unless supplied another way (e.g. on the command line).
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub ticks: Option<usize>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub space: Option<SpaceSpec>,
    pub agent_types: Vec<AgentTypeSpec>,
    pub populations: Vec<PopulationSpec>,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    fn agent_type(&self, spec: &AgentTypeSpec) -> Result<(AgentType, Strategy), CasError> {
        let bad = |m: String| CasError::InvalidStrategy(format!("type `{}`: {m}", spec.name));
        let strategy = match spec.strategy {
            StrategyFamily::Fixed => match spec.rules.as_slice() {
                [rule] if spec.weights.is_none() => Strategy::fixed(*rule),
                [_] => return Err(bad("fixed strategies take no weights".into())),
                rules => {
                    return Err(bad(format!(
                        "fixed strategies need exactly one rule, got {}",
                        rules.len()
                    )))
                }
            },
            StrategyFamily::Adaptive => {
                let weights = spec
                    .weights
                    .clone()
                    .unwrap_or_else(|| vec![1.0; spec.rules.len()]);
                let s = Strategy::adaptive(spec.rules.clone(), weights)
                    .map_err(|e| bad(e.to_string()))?;
                if s.weights().unwrap().iter().sum::<f64>() <= 0.0 {
                    return Err(bad("all rule weights are zero".into()));
                }
                s
            }
        };
        let ty = AgentType {
            name: spec.name.clone(),
            schema: spec
                .attributes
                .iter()
                .map(|a| AttrSchema {
                    name: a.name.clone(),
                    kind: a.kind,
                })
                .collect(),
            family: spec.strategy,
        };
        Ok((ty, strategy))
    }

    /// Builds the initial environment. Agents get ids `0..n` in population
    /// order and, with a space, distinct start cells drawn from the seed.
    pub fn build(&self, seed: u64) -> Result<Environment, CasError> {
        let mut types = Vec::new();
        let mut strategies = Vec::new();
        for spec in &self.agent_types {
            let (t, s) = self.agent_type(spec)?;
            types.push(t);
            strategies.push(s);
        }
        let total: usize = self.populations.iter().map(|p| p.count).sum();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cells = match &self.space {
            Some(s) => {
                let area = u64::from(s.width) * u64::from(s.height);
                if (total as u64) > area {
                    return Err(CasError::Scenario(format!(
                        "{total} agents do not fit a {}x{} region",
                        s.width, s.height
                    )));
                }
                let mut all: Vec<Coord> = (0..i64::from(s.height))
                    .flat_map(|y| (0..i64::from(s.width)).map(move |x| Coord::new(x, y)))
                    .collect();
                all.shuffle(&mut rng);
                all.truncate(total);
                Some(all)
            }
            None => None,
        };

        let mut next_id = 0u64;
        let mut populations = Vec::new();
        for p in &self.populations {
            let ti = self
                .agent_types
                .iter()
                .position(|t| t.name == p.agent_type)
                .ok_or_else(|| CasError::UnknownType(p.agent_type.clone()))?;
            let spec = &self.agent_types[ti];
            let mut agents = Vec::with_capacity(p.count);
            for _ in 0..p.count {
                let mut a = Agent::new(next_id, spec.name.clone(), strategies[ti].clone());
                for attr in &spec.attributes {
                    let v = attr.default.clone().coerce(attr.kind).ok_or_else(|| {
                        CasError::AttributeMismatch {
                            agent: a.id,
                            message: format!("default for `{}` is not {:?}", attr.name, attr.kind),
                        }
                    })?;
                    a.attributes.insert(attr.name.clone(), v);
                }
                if let Some(cells) = &cells {
                    a.position = Some(cells[next_id as usize]);
                }
                agents.push(a);
                next_id += 1;
            }
            populations.push(Population {
                name: p.name.clone(),
                agents,
            });
        }
        Environment::new(
            types,
            populations,
            self.space.as_ref().map(|s| s.topology),
            seed,
            self.params,
        )
    }
}
