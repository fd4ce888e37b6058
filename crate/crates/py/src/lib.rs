//! Python bindings. Grids and rules are classes; engines are functions that
//! take and return them. Every error surfaces as `ValueError`.

use std::collections::BTreeMap;

use complexkit::cas::Scenario;
use complexkit::complexity;
use complexkit::dynamics::{self, IterativeMap};
use complexkit::evolution::{self, CoevolutionProblem, EvolutionConfig, EvolutionOutcome};
use complexkit::{Coord, PatternFormat, Topology};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn topology(name: &str) -> PyResult<Topology> {
    name.parse().map_err(err)
}

fn format(name: &str) -> PyResult<PatternFormat> {
    name.parse().map_err(err)
}

/// Sparse grid of cell states keyed by integer `(x, y)` (axial `(q, r)` on
/// the hexagonal lattice).
#[pyclass(name = "Grid", module = "complexkit", skip_from_py_object)]
#[derive(Clone)]
pub struct PyGrid {
    inner: complexkit::Grid,
}

#[pymethods]
impl PyGrid {
    #[new]
    #[pyo3(signature = (cells = Vec::new(), topology = "square"))]
    fn new(cells: Vec<(i64, i64)>, topology: &str) -> PyResult<Self> {
        Ok(PyGrid {
            inner: complexkit::Grid::from_live(self::topology(topology)?, cells),
        })
    }

    #[getter]
    fn topology(&self) -> &'static str {
        match self.inner.topology() {
            Topology::Square => "square",
            Topology::Hexagonal => "hex",
        }
    }

    fn get(&self, x: i64, y: i64) -> u8 {
        self.inner.get(Coord::new(x, y))
    }

    fn set(&mut self, x: i64, y: i64, state: u8) {
        self.inner.set(Coord::new(x, y), state);
    }

    #[getter]
    fn population(&self) -> usize {
        self.inner.population()
    }

    /// `(x, y, state)` for every live cell in row-major order.
    fn cells(&self) -> Vec<(i64, i64, u8)> {
        self.inner.iter().map(|(c, s)| (c.x, c.y, s)).collect()
    }

    /// `((min_x, min_y), (max_x, max_y))`, or `None` when empty.
    fn bounding_box(&self) -> Option<((i64, i64), (i64, i64))> {
        self.inner
            .bounding_box()
            .map(|b| ((b.min.x, b.min.y), (b.max.x, b.max.y)))
    }

    fn translate(&self, dx: i64, dy: i64) -> Self {
        PyGrid {
            inner: self.inner.translate(Coord::new(dx, dy)),
        }
    }

    fn canonicalize(&self) -> Self {
        PyGrid {
            inner: self.inner.canonicalize(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.population()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(population={}, topology='{}')",
            self.inner.population(),
            self.topology()
        )
    }
}

/// Birth/survival rule such as `"B3/S23"` or `"B2/S34/C3"`.
#[pyclass(name = "RuleSet", module = "complexkit", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyRuleSet {
    inner: complexkit::RuleSet,
}

#[pymethods]
impl PyRuleSet {
    #[new]
    #[pyo3(signature = (rule = "B3/S23"))]
    fn new(rule: &str) -> PyResult<Self> {
        Ok(PyRuleSet {
            inner: rule.parse().map_err(err)?,
        })
    }

    #[getter]
    fn states(&self) -> u16 {
        self.inner.states()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("RuleSet('{}')", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn step(grid: &PyGrid, rule: &PyRuleSet) -> PyResult<PyGrid> {
    Ok(PyGrid {
        inner: complexkit::step(&grid.inner, &rule.inner).map_err(err)?,
    })
}

/// All `generations + 1` states, starting with `grid`.
#[pyfunction]
fn run(grid: &PyGrid, rule: &PyRuleSet, generations: usize) -> PyResult<Vec<PyGrid>> {
    let h = complexkit::run(&grid.inner, &rule.inner, generations).map_err(err)?;
    Ok(h.into_generations()
        .into_iter()
        .map(|inner| PyGrid { inner })
        .collect())
}

/// `"still-life"`, `"oscillator p=2"`, `"spaceship p=4 d=(1,1)"` or `"unresolved"`.
#[pyfunction]
#[pyo3(signature = (grid, rule, horizon = 100))]
fn classify(grid: &PyGrid, rule: &PyRuleSet, horizon: usize) -> PyResult<String> {
    complexkit::classify_pattern(&grid.inner, &rule.inner, horizon)
        .map(|c| c.to_string())
        .map_err(err)
}

/// Returns `(grid, rule)`; `rule` is `None` unless an RLE header names one.
#[pyfunction]
#[pyo3(signature = (text, format = "rle"))]
fn decode_pattern(text: &str, format: &str) -> PyResult<(PyGrid, Option<PyRuleSet>)> {
    let (inner, rule) = complexkit::decode_pattern(text, self::format(format)?).map_err(err)?;
    Ok((PyGrid { inner }, rule.map(|inner| PyRuleSet { inner })))
}

#[pyfunction]
#[pyo3(signature = (grid, format = "rle", rule = None))]
fn encode_pattern(grid: &PyGrid, format: &str, rule: Option<&PyRuleSet>) -> PyResult<String> {
    let rule = rule.map_or(complexkit::RuleSet::LIFE, |r| r.inner);
    complexkit::encode_pattern_with_rule(&grid.inner, self::format(format)?, &rule).map_err(err)
}

#[pyfunction]
fn info_bits(omega: u64) -> PyResult<f64> {
    complexity::info_bits(omega).map_err(err)
}

#[pyfunction]
fn coarse_grain(grid: &PyGrid, scale: u32) -> PyResult<PyGrid> {
    Ok(PyGrid {
        inner: complexity::coarse_grain(&grid.inner, scale).map_err(err)?,
    })
}

/// `[(scale, omega, bits), ...]` for a history of grids.
#[pyfunction]
fn complexity_profile(
    history: Vec<PyRef<'_, PyGrid>>,
    scales: Vec<u32>,
) -> PyResult<Vec<(u32, u64, f64)>> {
    let grids: Vec<complexkit::Grid> = history.iter().map(|g| g.inner.clone()).collect();
    let p = complexity::complexity_profile(&grids, &scales).map_err(err)?;
    Ok(p.points()
        .iter()
        .map(|pt| (pt.scale, pt.omega, pt.bits))
        .collect())
}

/// Lyapunov exponent of the logistic map `x -> r x (1 - x)`.
#[pyfunction]
#[pyo3(signature = (r, x0 = 0.3, steps = 100_000, burn_in = 1000, method = "derivative"))]
fn lyapunov(r: f64, x0: f64, steps: usize, burn_in: usize, method: &str) -> PyResult<f64> {
    let m = IterativeMap::logistic(r);
    // Deterministic maps never draw from the stream.
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    let est = match method {
        "derivative" => dynamics::divergence_rate(&m, x0, steps, burn_in, &mut rng),
        "two_trajectory" => {
            dynamics::divergence_rate_two_trajectory(&m, x0, steps, burn_in, 1e-9, &mut rng)
        }
        other => return Err(err(format!("unknown method `{other}`"))),
    };
    est.map(|e| e.exponent).map_err(err)
}

/// `[(r, lambda), ...]` for `r` from `r_from` to `r_to` inclusive.
#[pyfunction]
#[pyo3(signature = (r_from, r_to, r_step, x0 = 0.3, steps = 10_000, burn_in = 1000))]
fn logistic_sweep(
    r_from: f64,
    r_to: f64,
    r_step: f64,
    x0: f64,
    steps: usize,
    burn_in: usize,
) -> PyResult<Vec<(f64, f64)>> {
    dynamics::sweep_logistic(r_from, r_to, r_step, x0, steps, burn_in).map_err(err)
}

/// `(best_fitness, best_genome, [(generation, best, mean), ...])`
type Summary = (f64, String, Vec<(usize, f64, f64)>);

fn outcome(o: EvolutionOutcome) -> Summary {
    (
        o.best.fitness.unwrap_or(f64::NAN),
        o.best.genome.to_string(),
        o.stats
            .iter()
            .map(|s| (s.generation, s.best, s.mean))
            .collect(),
    )
}

/// Returns `(best_fitness, best_genome, [(generation, best, mean), ...])`.
#[pyfunction]
#[pyo3(signature = (seed, length = 64, population = 100, generations = 200, elitism = 2))]
fn evolve_onemax(
    py: Python<'_>,
    seed: u64,
    length: usize,
    population: usize,
    generations: usize,
    elitism: usize,
) -> PyResult<Summary> {
    let cfg = EvolutionConfig {
        population_size: population,
        generations,
        genome_length: length,
        mutation_rate: 1.0 / length.max(1) as f64,
        elitism,
        seed,
        target_fitness: Some(length as f64),
        ..EvolutionConfig::default()
    };
    py.detach(|| evolution::evolve(&cfg, evolution::onemax))
        .map(outcome)
        .map_err(err)
}

/// GA over the initial rule weights of an adaptive population; fitness is
/// the population's mean reward in a 20-tick episode.
#[pyfunction]
#[pyo3(signature = (seed, population = 24, generations = 15))]
fn coevolve(py: Python<'_>, seed: u64, population: usize, generations: usize) -> PyResult<Summary> {
    let problem = CoevolutionProblem::standard();
    let cfg = EvolutionConfig {
        population_size: population,
        generations,
        genome_length: problem.genome_length(),
        mutation_rate: 1.0 / problem.genome_length() as f64,
        seed,
        ..EvolutionConfig::default()
    };
    py.detach(|| evolution::evolve(&cfg, |g| problem.fitness(g)))
        .map(outcome)
        .map_err(err)
}

/// Runs a TOML scenario and returns one dict of metrics per tick.
#[pyfunction]
#[pyo3(signature = (scenario, seed = None, ticks = None))]
fn run_scenario(
    py: Python<'_>,
    scenario: &str,
    seed: Option<u64>,
    ticks: Option<usize>,
) -> PyResult<Vec<BTreeMap<String, f64>>> {
    let s = Scenario::from_toml(scenario).map_err(err)?;
    let seed = seed
        .or(s.seed)
        .ok_or_else(|| err("the scenario has no seed; pass seed="))?;
    let ticks = ticks.or(s.ticks).unwrap_or(100);
    let rows = py
        .detach(|| s.build(seed).and_then(|mut e| e.run(ticks)))
        .map_err(err)?;
    Ok(rows
        .into_iter()
        .map(|m| {
            let mut d = BTreeMap::new();
            d.insert("tick".to_string(), m.tick as f64);
            for (name, n) in m.population_sizes {
                d.insert(format!("pop_{name}"), n as f64);
            }
            d.insert("mean_response".into(), m.mean_response);
            d.insert("mean_fitness".into(), m.mean_fitness);
            d
        })
        .collect())
}

#[pymodule]
#[pyo3(name = "complexkit")]
fn complexkit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyRuleSet>()?;
    m.add_function(wrap_pyfunction!(step, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(decode_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(encode_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(info_bits, m)?)?;
    m.add_function(wrap_pyfunction!(coarse_grain, m)?)?;
    m.add_function(wrap_pyfunction!(complexity_profile, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov, m)?)?;
    m.add_function(wrap_pyfunction!(logistic_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_onemax, m)?)?;
    m.add_function(wrap_pyfunction!(coevolve, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    Ok(())
}
