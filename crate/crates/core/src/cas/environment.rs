use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grid::{neighbors, Coord, Grid, Topology};

use super::{select_rule, Agent, AgentId, AgentType, CasError};

/// Global interaction parameters.
///
/// Each tick an agent receives `stimulus = signal + coupling · tanh(m)`,
/// where `m` is the mean last response of agents in neighboring cells (0 if
/// none or no space). Its reward is `exp(−(response − target_gain ·
/// stimulus)²)`, and adaptive agents add `learning_rate · reward` to the
/// weight of the rule they used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub signal: f64,
    pub target_gain: f64,
    pub coupling: f64,
    /// Chance per tick that an agent tries to move to a random neighbor cell.
    pub move_probability: f64,
    pub learning_rate: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            signal: 1.0,
            target_gain: 1.0,
            coupling: 0.0,
            move_probability: 0.0,
            learning_rate: 1.0,
        }
    }
}

impl Params {
    pub fn reward(&self, stimulus: f64, response: f64) -> f64 {
        let miss = response - self.target_gain * stimulus;
        (-miss * miss).exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub name: String,
    pub agents: Vec<Agent>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Environment {
    pub types: Vec<AgentType>,
    pub populations: Vec<Population>,
    /// Occupancy of the lattice the agents live on: each occupied cell holds
    /// its agent's population index + 1. `None` for aspatial worlds.
    pub space: Option<Grid>,
    pub time: u64,
    pub seed: u64,
    pub params: Params,
}

/// Aggregates for one completed tick.
#[derive(Debug, Clone, PartialEq)]
pub struct TickMetrics {
    pub tick: u64,
    pub population_sizes: Vec<(String, usize)>,
    pub mean_response: f64,
    /// Mean reward received this tick.
    pub mean_fitness: f64,
}

/// What an agent decided during phase one of a tick.
#[derive(Debug, Clone, Copy)]
struct Intent {
    id: AgentId,
    rule: usize,
    stimulus: f64,
    response: f64,
    reward: f64,
    target: Option<Coord>,
}

/// SplitMix64 finalizer; decorrelates per-agent streams.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stream for one agent on one tick, independent of iteration order.
pub(crate) fn agent_stream(seed: u64, time: u64, id: AgentId) -> ChaCha8Rng {
    let key = mix(mix(seed ^ 0x9e37_79b9_7f4a_7c15)
        ^ time.wrapping_mul(0x2545_f491_4f6c_dd1d)
        ^ mix(id.0));
    ChaCha8Rng::seed_from_u64(key)
}

impl Environment {
    /// Validates types, attribute schemas, id uniqueness and positions, and
    /// derives the occupancy grid when `topology` is given.
    pub fn new(
        types: Vec<AgentType>,
        mut populations: Vec<Population>,
        topology: Option<Topology>,
        seed: u64,
        params: Params,
    ) -> Result<Self, CasError> {
        let mut names = HashSet::new();
        for t in &types {
            if !names.insert(t.name.as_str()) {
                return Err(CasError::DuplicateType(t.name.clone()));
            }
        }
        let mut ids = HashSet::new();
        let mut cells = HashSet::new();
        for p in &mut populations {
            p.agents.sort_by_key(|a| a.id);
            for a in &p.agents {
                if !ids.insert(a.id) {
                    return Err(CasError::DuplicateAgentId(a.id));
                }
                let ty = types
                    .iter()
                    .find(|t| t.name == a.kind)
                    .ok_or_else(|| CasError::UnknownType(a.kind.clone()))?;
                ty.check(a)?;
                match (topology, a.position) {
                    (Some(_), Some(c)) if !cells.insert(c) => {
                        return Err(CasError::Scenario(format!("two agents start on cell {c}")))
                    }
                    (Some(_), None) => {
                        return Err(CasError::Scenario(format!(
                            "agent {} has no position",
                            a.id
                        )))
                    }
                    _ => {}
                }
            }
        }
        let mut env = Environment {
            types,
            populations,
            space: topology.map(Grid::new),
            time: 0,
            seed,
            params,
        };
        env.rebuild_space();
        Ok(env)
    }

    pub fn agents(&self) -> impl Iterator<Item = &Agent> {
        self.populations.iter().flat_map(|p| &p.agents)
    }

    pub fn agent_count(&self) -> usize {
        self.populations.iter().map(|p| p.agents.len()).sum()
    }

    pub fn population(&self, name: &str) -> Option<&Population> {
        self.populations.iter().find(|p| p.name == name)
    }

    pub fn population_mut(&mut self, name: &str) -> Option<&mut Population> {
        self.populations.iter_mut().find(|p| p.name == name)
    }

    /// Attribute names an observer may project: every schema attribute plus
    /// the built-in `position`, `score` and `last_response`.
    pub fn observable_names(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = ["position", "score", "last_response"]
            .into_iter()
            .map(String::from)
            .collect();
        out.extend(
            self.types
                .iter()
                .flat_map(|t| t.schema.iter().map(|a| a.name.clone())),
        );
        out
    }

    fn rebuild_space(&mut self) {
        let Some(space) = &self.space else { return };
        let topology = space.topology();
        let occupied = self.populations.iter().enumerate().flat_map(|(pi, p)| {
            let color = (pi + 1).min(usize::from(u8::MAX)) as u8;
            p.agents
                .iter()
                .filter_map(move |a| a.position.map(|c| (c, color)))
        });
        self.space = Some(Grid::from_cells(topology, occupied));
    }

    fn decide(
        &self,
        agent: &Agent,
        last: &HashMap<Coord, f64>,
        topology: Option<Topology>,
    ) -> Result<Intent, CasError> {
        let p = &self.params;
        let mut rng = agent_stream(self.seed, self.time, agent.id);
        let local = match (agent.position, topology) {
            (Some(c), Some(t)) => {
                let seen: Vec<f64> = neighbors(c, t)
                    .filter_map(|n| last.get(&n).copied())
                    .collect();
                if seen.is_empty() {
                    0.0
                } else {
                    seen.iter().sum::<f64>() / seen.len() as f64
                }
            }
            _ => 0.0,
        };
        let stimulus = p.signal + p.coupling * local.tanh();
        let rule = select_rule(agent, stimulus, &mut rng)?;
        let rule_def = agent.strategy.rules()[rule];
        let response = rule_def.apply(stimulus, &agent.memory);
        if !response.is_finite() {
            return Err(CasError::NonFiniteStimulus(response));
        }
        let target = match (agent.position, topology) {
            (Some(c), Some(t))
                if p.move_probability > 0.0 && rng.gen_bool(p.move_probability.min(1.0)) =>
            {
                let offsets = t.offsets();
                Some(c + offsets[rng.gen_range(0..offsets.len())])
            }
            _ => None,
        };
        Ok(Intent {
            id: agent.id,
            rule,
            stimulus,
            response,
            reward: p.reward(stimulus, response),
            target,
        })
    }

    /// Advances one tick in two phases.
    ///
    /// Phase one: every agent decides from the time-`t` state alone, with a
    /// random stream keyed by `(seed, t, id)`. Phase two: decisions commit
    /// in ascending id order. A move succeeds only into a cell that was empty
    /// at time `t`; when several agents claim one cell the lowest id wins and
    /// the others stay put. Agent list order never affects the result.
    pub fn step(&mut self) -> Result<TickMetrics, CasError> {
        let topology = self.space.as_ref().map(Grid::topology);
        let last: HashMap<Coord, f64> = self
            .agents()
            .filter_map(|a| a.position.map(|c| (c, a.last_response)))
            .collect();

        let agents: Vec<&Agent> = self.agents().collect();
        let mut intents = agents
            .par_iter()
            .map(|a| self.decide(a, &last, topology))
            .collect::<Result<Vec<_>, _>>()?;
        intents.sort_by_key(|i| i.id);

        let mut claims: BTreeMap<Coord, AgentId> = BTreeMap::new();
        for i in &intents {
            if let Some(t) = i.target {
                if !last.contains_key(&t) {
                    claims.entry(t).or_insert(i.id);
                }
            }
        }
        let by_id: HashMap<AgentId, Intent> = intents.iter().map(|i| (i.id, *i)).collect();
        let rate = self.params.learning_rate;
        for p in &mut self.populations {
            p.agents.sort_by_key(|a| a.id);
            for a in &mut p.agents {
                let i = by_id[&a.id];
                a.respond_with(i.rule, i.stimulus)?;
                a.current_rule = i.rule;
                a.score += i.reward;
                a.strategy.reinforce(i.rule, rate * i.reward);
                if let Some(t) = i.target {
                    if claims.get(&t) == Some(&a.id) {
                        a.position = Some(t);
                    }
                }
            }
        }
        self.time += 1;
        self.rebuild_space();

        let n = intents.len();
        let mean = |f: fn(&Intent) -> f64| {
            if n == 0 {
                0.0
            } else {
                intents.iter().map(f).sum::<f64>() / n as f64
            }
        };
        Ok(TickMetrics {
            tick: self.time,
            population_sizes: self
                .populations
                .iter()
                .map(|p| (p.name.clone(), p.agents.len()))
                .collect(),
            mean_response: mean(|i| i.response),
            mean_fitness: mean(|i| i.reward),
        })
    }

    /// Runs `ticks` ticks, returning per-tick metrics.
    pub fn run(&mut self, ticks: usize) -> Result<Vec<TickMetrics>, CasError> {
        (0..ticks).map(|_| self.step()).collect()
    }
}

/// Pure form of [`Environment::step`].
pub fn tick(e: &Environment) -> Result<Environment, CasError> {
    let mut next = e.clone();
    next.step()?;
    Ok(next)
}

/// `tick,pop_<name>...,mean_response,mean_fitness` CSV.
pub fn metrics_csv(rows: &[TickMetrics]) -> String {
    let mut out = String::from("tick");
    if let Some(first) = rows.first() {
        for (name, _) in &first.population_sizes {
            let _ = write!(out, ",pop_{name}");
        }
    }
    out.push_str(",mean_response,mean_fitness\n");
    for r in rows {
        let _ = write!(out, "{}", r.tick);
        for (_, n) in &r.population_sizes {
            let _ = write!(out, ",{n}");
        }
        let _ = writeln!(out, ",{},{}", r.mean_response, r.mean_fitness);
    }
    out
}
