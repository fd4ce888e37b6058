//! Couples the genetic algorithm to the agent engine: a genome encodes the
//! initial rule weights of one adaptive population, and its fitness is the
//! reward that population earns over a short episode.

use crate::cas::{
    AgentTypeSpec, CasError, Params, PopulationSpec, Rule, Scenario, SpaceSpec, Strategy,
    StrategyFamily,
};
use crate::grid::Topology;

use super::Genome;

#[derive(Debug, Clone, PartialEq)]
pub struct CoevolutionProblem {
    pub scenario: Scenario,
    /// Population whose initial weights the genome encodes.
    pub population: String,
    pub bits_per_weight: usize,
    pub ticks: usize,
    /// Every episode replays the same seed, so fitness is a function of the
    /// genome alone.
    pub episode_seed: u64,
    rules: usize,
}

impl CoevolutionProblem {
    pub fn new(
        scenario: Scenario,
        population: impl Into<String>,
        bits_per_weight: usize,
        ticks: usize,
        episode_seed: u64,
    ) -> Result<Self, CasError> {
        let population = population.into();
        let pop = scenario
            .populations
            .iter()
            .find(|p| p.name == population)
            .ok_or_else(|| CasError::Scenario(format!("no population `{population}`")))?;
        let ty = scenario
            .agent_types
            .iter()
            .find(|t| t.name == pop.agent_type)
            .ok_or_else(|| CasError::UnknownType(pop.agent_type.clone()))?;
        if ty.strategy != StrategyFamily::Adaptive {
            return Err(CasError::InvalidStrategy(format!(
                "population `{population}` is not adaptive"
            )));
        }
        if !(1..=16).contains(&bits_per_weight) {
            return Err(CasError::Scenario(format!(
                "bits per weight {bits_per_weight} outside 1..=16"
            )));
        }
        let rules = ty.rules.len();
        Ok(CoevolutionProblem {
            scenario,
            population,
            bits_per_weight,
            ticks,
            episode_seed,
            rules,
        })
    }

    /// Learners choosing among gains 0..3 and a second-stimulus doubler,
    /// sharing a lattice with fixed-gain drifters whose responses feed into
    /// the learners' stimuli. Gain 1.5 matches the target.
    pub fn standard() -> Self {
        let learner = AgentTypeSpec {
            name: "learner".into(),
            strategy: StrategyFamily::Adaptive,
            rules: [0.0, 0.5, 1.0, 1.5, 2.0, 3.0]
                .into_iter()
                .map(Rule::linear)
                .chain([Rule::double_on_second()])
                .collect(),
            weights: None,
            attributes: vec![],
        };
        let drifter = AgentTypeSpec {
            name: "drifter".into(),
            strategy: StrategyFamily::Fixed,
            rules: vec![Rule::linear(2.0)],
            weights: None,
            attributes: vec![],
        };
        let scenario = Scenario {
            seed: None,
            ticks: None,
            params: Params {
                signal: 1.0,
                target_gain: 1.5,
                coupling: 0.5,
                move_probability: 0.3,
                learning_rate: 0.1,
            },
            space: Some(SpaceSpec {
                topology: Topology::Square,
                width: 15,
                height: 15,
            }),
            agent_types: vec![learner, drifter],
            populations: vec![
                PopulationSpec {
                    name: "learners".into(),
                    agent_type: "learner".into(),
                    count: 30,
                },
                PopulationSpec {
                    name: "drifters".into(),
                    agent_type: "drifter".into(),
                    count: 20,
                },
            ],
        };
        CoevolutionProblem::new(scenario, "learners", 4, 20, 1).expect("standard problem is valid")
    }

    pub fn genome_length(&self) -> usize {
        self.rules * self.bits_per_weight
    }

    /// Each `bits_per_weight` chunk is a big-endian integer `v`; the weight is
    /// `v + 1`, so no rule is ever unreachable.
    pub fn decode(&self, g: &Genome) -> Vec<f64> {
        g.symbols()
            .chunks(self.bits_per_weight)
            .map(|chunk| chunk.iter().fold(0u32, |v, &b| (v << 1) | u32::from(b & 1)) as f64 + 1.0)
            .collect()
    }

    /// Mean reward per agent per tick earned by the evolving population.
    pub fn episode(&self, g: &Genome) -> Result<f64, CasError> {
        if g.len() != self.genome_length() {
            return Err(CasError::Scenario(format!(
                "genome length {} does not match {}",
                g.len(),
                self.genome_length()
            )));
        }
        let weights = self.decode(g);
        let mut env = self.scenario.build(self.episode_seed)?;
        let pop = env
            .population_mut(&self.population)
            .ok_or_else(|| CasError::Scenario(format!("no population `{}`", self.population)))?;
        for a in &mut pop.agents {
            let rules = a.strategy.rules().to_vec();
            a.strategy = Strategy::adaptive(rules, weights.clone())?;
        }
        env.run(self.ticks)?;
        let pop = env
            .population(&self.population)
            .expect("population checked above");
        if pop.agents.is_empty() || self.ticks == 0 {
            return Ok(0.0);
        }
        let total: f64 = pop.agents.iter().map(|a| a.score).sum();
        Ok(total / (pop.agents.len() * self.ticks) as f64)
    }

    /// Fitness for [`super::evolve`]; episode errors surface as NaN, which the
    /// GA reports as a non-finite fitness for this genome.
    pub fn fitness(&self, g: &Genome) -> f64 {
        self.episode(g).unwrap_or(f64::NAN)
    }
}
