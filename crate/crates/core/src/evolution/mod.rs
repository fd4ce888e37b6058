//! Generational genetic algorithm over fixed-length symbol strings.
//!
//! Each generation copies the elites unchanged, then fills the rest of the
//! population by tournament selection, single-point crossover (or cloning)
//! and per-symbol mutation. Ties are broken by the lowest population index
//! everywhere.

mod coevolve;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

pub use coevolve::CoevolutionProblem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvolutionError {
    #[error("genomes differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("crossover needs genomes of length at least 2, got {0}")]
    TooShort(usize),
    #[error("crossover point {point} outside 1..={max}")]
    BadCutPoint { point: usize, max: usize },
    #[error("individual {0} has not been evaluated")]
    Unevaluated(usize),
    #[error("fitness of genome {genome} is not finite ({value})")]
    NonFiniteFitness { genome: String, value: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

/// Fixed-length string over the alphabet `0..alphabet`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Genome {
    symbols: Vec<u8>,
    alphabet: u8,
}

impl Genome {
    pub fn new(symbols: Vec<u8>, alphabet: u8) -> Result<Self, EvolutionError> {
        if alphabet < 2 {
            return Err(EvolutionError::InvalidConfig(format!(
                "alphabet size must be at least 2, got {alphabet}"
            )));
        }
        if let Some(&s) = symbols.iter().find(|&&s| s >= alphabet) {
            return Err(EvolutionError::InvalidConfig(format!(
                "symbol {s} outside alphabet of size {alphabet}"
            )));
        }
        Ok(Genome { symbols, alphabet })
    }

    pub fn binary(bits: &[u8]) -> Result<Self, EvolutionError> {
        Genome::new(bits.to_vec(), 2)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, alphabet: u8, rng: &mut R) -> Self {
        Genome {
            symbols: (0..len).map(|_| rng.gen_range(0..alphabet)).collect(),
            alphabet,
        }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn alphabet(&self) -> u8 {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl std::fmt::Display for Genome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &s in &self.symbols {
            if self.alphabet <= 36 {
                write!(f, "{}", char::from_digit(u32::from(s), 36).unwrap())?;
            } else {
                write!(f, "{s},")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    /// `None` until evaluated.
    pub fitness: Option<f64>,
}

impl Individual {
    pub fn new(genome: Genome) -> Self {
        Individual {
            genome,
            fitness: None,
        }
    }

    pub fn evaluated(genome: Genome, fitness: f64) -> Self {
        Individual {
            genome,
            fitness: Some(fitness),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig {
    pub population_size: usize,
    pub generations: usize,
    pub genome_length: usize,
    pub alphabet: u8,
    /// Per-symbol probability.
    pub mutation_rate: f64,
    /// Per-pairing probability; otherwise the parents are cloned.
    pub crossover_rate: f64,
    pub tournament_size: usize,
    pub elitism: usize,
    pub seed: u64,
    /// Stop early once the best fitness reaches this value.
    pub target_fitness: Option<f64>,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            population_size: 100,
            generations: 200,
            genome_length: 64,
            alphabet: 2,
            mutation_rate: 1.0 / 64.0,
            crossover_rate: 0.9,
            tournament_size: 3,
            elitism: 2,
            seed: 0,
            target_fitness: None,
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), EvolutionError> {
        let bad = |m: String| Err(EvolutionError::InvalidConfig(m));
        if self.population_size < 2 {
            return bad(format!("population size {} < 2", self.population_size));
        }
        if self.elitism >= self.population_size {
            return bad(format!(
                "elitism {} must be below population size {}",
                self.elitism, self.population_size
            ));
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return bad(format!(
                "tournament size {} outside 1..={}",
                self.tournament_size, self.population_size
            ));
        }
        for (name, p) in [
            ("mutation", self.mutation_rate),
            ("crossover", self.crossover_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} rate {p} outside [0,1]"));
            }
        }
        if self.alphabet < 2 {
            return bad(format!("alphabet size {} < 2", self.alphabet));
        }
        if self.genome_length == 0 {
            return bad("genome length must be positive".into());
        }
        Ok(())
    }
}

/// Best and mean fitness of one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionOutcome {
    /// Fittest individual seen across all generations (earliest on ties).
    pub best: Individual,
    /// One entry per evaluated generation, generation 0 first.
    pub stats: Vec<GenerationStats>,
}

impl EvolutionOutcome {
    pub fn stats_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("generation,best,mean\n");
        for s in &self.stats {
            let _ = writeln!(out, "{},{},{}", s.generation, s.best, s.mean);
        }
        out
    }
}

fn fitness_of(pop: &[Individual], i: usize) -> Result<f64, EvolutionError> {
    pop[i].fitness.ok_or(EvolutionError::Unevaluated(i))
}

/// `k` tournament winners. Each tournament draws `tournament_size` distinct
/// members uniformly; the fittest wins, lowest index on ties.
pub fn select<R: Rng + ?Sized>(
    pop: &[Individual],
    k: usize,
    tournament_size: usize,
    rng: &mut R,
) -> Result<Vec<Individual>, EvolutionError> {
    if let Some(i) = pop.iter().position(|ind| ind.fitness.is_none()) {
        return Err(EvolutionError::Unevaluated(i));
    }
    if tournament_size == 0 || tournament_size > pop.len() {
        return Err(EvolutionError::InvalidConfig(format!(
            "tournament size {tournament_size} outside 1..={}",
            pop.len()
        )));
    }
    (0..k)
        .map(|_| {
            let mut winner: Option<(usize, f64)> = None;
            for i in index::sample(rng, pop.len(), tournament_size) {
                let f = fitness_of(pop, i)?;
                winner = match winner {
                    Some((w, wf)) if wf > f || (wf == f && w < i) => Some((w, wf)),
                    _ => Some((i, f)),
                };
            }
            Ok(pop[winner.expect("tournament is non-empty").0].clone())
        })
        .collect()
}

/// Single-point crossover at `point` (drawn from `1..len` when `None`):
/// `(a[..p] + b[p..], b[..p] + a[p..])`.
pub fn crossover<R: Rng + ?Sized>(
    a: &Genome,
    b: &Genome,
    point: Option<usize>,
    rng: &mut R,
) -> Result<(Genome, Genome), EvolutionError> {
    let len = a.len();
    if len != b.len() {
        return Err(EvolutionError::LengthMismatch(len, b.len()));
    }
    if len < 2 {
        return Err(EvolutionError::TooShort(len));
    }
    let p = match point {
        Some(p) if (1..len).contains(&p) => p,
        Some(p) => {
            return Err(EvolutionError::BadCutPoint {
                point: p,
                max: len - 1,
            })
        }
        None => rng.gen_range(1..len),
    };
    let splice = |x: &Genome, y: &Genome| Genome {
        symbols: x.symbols[..p]
            .iter()
            .chain(&y.symbols[p..])
            .copied()
            .collect(),
        alphabet: x.alphabet.max(y.alphabet),
    };
    Ok((splice(a, b), splice(b, a)))
}

/// Replaces each symbol with probability `rate` by a uniformly chosen
/// different symbol.
pub fn mutate<R: Rng + ?Sized>(g: &Genome, rate: f64, rng: &mut R) -> Genome {
    let mut out = g.clone();
    if rate <= 0.0 {
        return out;
    }
    for s in &mut out.symbols {
        if rng.gen_bool(rate.min(1.0)) {
            let r = rng.gen_range(0..g.alphabet - 1);
            *s = if r >= *s { r + 1 } else { r };
        }
    }
    out
}

fn evaluate<F>(pop: &mut [Individual], fitness: &F) -> Result<(), EvolutionError>
where
    F: Fn(&Genome) -> f64 + Sync,
{
    let fresh: Vec<(usize, f64)> = pop
        .par_iter()
        .enumerate()
        .filter(|(_, ind)| ind.fitness.is_none())
        .map(|(i, ind)| (i, fitness(&ind.genome)))
        .collect();
    for (i, f) in fresh {
        if !f.is_finite() {
            return Err(EvolutionError::NonFiniteFitness {
                genome: pop[i].genome.to_string(),
                value: f,
            });
        }
        pop[i].fitness = Some(f);
    }
    Ok(())
}

fn summarize(generation: usize, pop: &[Individual]) -> (GenerationStats, usize) {
    let mut best = 0;
    let mut sum = 0.0;
    for (i, ind) in pop.iter().enumerate() {
        let f = ind.fitness.expect("population evaluated");
        sum += f;
        if f > pop[best].fitness.unwrap() {
            best = i;
        }
    }
    let stats = GenerationStats {
        generation,
        best: pop[best].fitness.unwrap(),
        mean: sum / pop.len() as f64,
    };
    (stats, best)
}

/// Runs the generational loop. Fitness evaluations may run in parallel; all
/// random draws happen sequentially, so results depend only on the seed.
pub fn evolve<F>(cfg: &EvolutionConfig, fitness: F) -> Result<EvolutionOutcome, EvolutionError>
where
    F: Fn(&Genome) -> f64 + Sync,
{
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop: Vec<Individual> = (0..cfg.population_size)
        .map(|_| Individual::new(Genome::random(cfg.genome_length, cfg.alphabet, &mut rng)))
        .collect();
    evaluate(&mut pop, &fitness)?;
    let (first, bi) = summarize(0, &pop);
    let mut stats = vec![first];
    let mut best = pop[bi].clone();
    let reached = |b: f64| cfg.target_fitness.is_some_and(|t| b >= t);

    for generation in 1..=cfg.generations {
        if reached(stats.last().unwrap().best) {
            break;
        }
        let mut order: Vec<usize> = (0..pop.len()).collect();
        // Stable sort keeps the lowest index first among equals.
        order.sort_by(|&a, &b| pop[b].fitness.unwrap().total_cmp(&pop[a].fitness.unwrap()));
        let mut next: Vec<Individual> = order[..cfg.elitism]
            .iter()
            .map(|&i| pop[i].clone())
            .collect();

        while next.len() < cfg.population_size {
            let parents = select(&pop, 2, cfg.tournament_size, &mut rng)?;
            let (c1, c2) = if rng.gen_bool(cfg.crossover_rate) {
                let (a, b) = crossover(&parents[0].genome, &parents[1].genome, None, &mut rng)?;
                (Individual::new(a), Individual::new(b))
            } else {
                (parents[0].clone(), parents[1].clone())
            };
            for child in [c1, c2] {
                if next.len() == cfg.population_size {
                    break;
                }
                let genome = mutate(&child.genome, cfg.mutation_rate, &mut rng);
                // An untouched clone keeps its known fitness.
                let fitness = child.fitness.filter(|_| genome == child.genome);
                next.push(Individual { genome, fitness });
            }
        }
        evaluate(&mut next, &fitness)?;
        pop = next;
        let (s, bi) = summarize(generation, &pop);
        if s.best > best.fitness.unwrap() {
            best = pop[bi].clone();
        }
        stats.push(s);
    }
    Ok(EvolutionOutcome { best, stats })
}

/// Number of ones in a binary genome.
pub fn onemax(g: &Genome) -> f64 {
    g.symbols().iter().filter(|&&s| s == 1).count() as f64
}
