use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use complexkit::cas::{metrics_csv, Environment, Scenario};
use complexkit::complexity::complexity_profile;
use complexkit::dynamics::{
    divergence_rate, divergence_rate_two_trajectory, iterate, sweep_logistic, IterativeMap,
    DEFAULT_BURN_IN,
};
use complexkit::evolution::{evolve, onemax, CoevolutionProblem, EvolutionConfig, Genome};
use complexkit::{
    classify_pattern, decode_pattern, encode_pattern_with_rule, step, Grid, PatternClass,
    PatternFormat, RuleSet, Topology,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::args::*;
use crate::config::{emit, load, read, write};
use crate::Failure;

pub fn dispatch(cli: Cli) -> Result<(), Failure> {
    let flags = cli.shared;
    let config = flags.config.clone();
    let config = config.as_deref();
    match cli.noun {
        Noun::Life {
            verb: LifeVerb::Run(a),
        } => {
            let (file, base) = load(config)?;
            life_run(flags.or(file), a.or(base))
        }
        Noun::Life {
            verb: LifeVerb::Classify(a),
        } => {
            let (file, base) = load(config)?;
            life_classify(flags.or(file), a.or(base))
        }
        Noun::Cas {
            verb: CasVerb::Run(a),
        } => cas_run(flags, a),
        Noun::Ga {
            verb: GaVerb::Run(a),
        } => {
            let (file, base) = load(config)?;
            ga_run(flags.or(file), a.or(base))
        }
        Noun::Complexity {
            verb: ComplexityVerb::Profile(a),
        } => {
            let (file, base) = load(config)?;
            profile(flags.or(file), a.or(base))
        }
        Noun::Dynamics {
            verb: DynamicsVerb::Lyapunov(a),
        } => {
            let (file, base) = load(config)?;
            lyapunov(flags.or(file), a.or(base))
        }
        Noun::Dynamics {
            verb: DynamicsVerb::Sweep(a),
        } => {
            let (file, base) = load(config)?;
            sweep(flags.or(file), a.or(base))
        }
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Input(format!("missing required --{flag}")))
}

fn seed(shared: &Shared) -> Result<u64, Failure> {
    shared.seed.ok_or_else(|| {
        Failure::Input(
            "this command needs an explicit seed (--seed or `seed` in the config)".into(),
        )
    })
}

fn load_pattern(path: &Path) -> Result<(Grid, Option<RuleSet>), Failure> {
    let text = read(path)?;
    decode_pattern(&text, PatternFormat::from_path(path))
        .map_err(|e| Failure::from(e).prefixed(&path.display().to_string()))
}

impl Failure {
    fn prefixed(self, context: &str) -> Failure {
        match self {
            Failure::Domain(m) => Failure::Domain(format!("{context}: {m}")),
            Failure::Input(m) => Failure::Input(format!("{context}: {m}")),
        }
    }
}

/// Flag rule, else the pattern file's rule, else Life. Hexagonal lattices
/// have no conventional default, so they need an explicit rule.
fn resolve_rule(
    flag: Option<&str>,
    from_file: Option<RuleSet>,
    topology: Topology,
) -> Result<RuleSet, Failure> {
    match (flag, topology) {
        (Some(r), _) => Ok(r.parse()?),
        (None, Topology::Square) => Ok(from_file.unwrap_or(RuleSet::LIFE)),
        (None, Topology::Hexagonal) => Err(Failure::Domain(
            "hexagonal runs need an explicit --rule".into(),
        )),
    }
}

/// `q,r,state` rows; used for hexagonal grids and any `.csv` destination.
fn cells_csv(g: &Grid) -> String {
    let (a, b) = match g.topology() {
        Topology::Square => ("x", "y"),
        Topology::Hexagonal => ("q", "r"),
    };
    let mut out = format!("{a},{b},state\n");
    for (c, s) in g.iter() {
        let _ = writeln!(out, "{},{},{s}", c.x, c.y);
    }
    out
}

fn render(g: &Grid, rule: &RuleSet, path: &Path) -> Result<String, Failure> {
    if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        return Ok(cells_csv(g));
    }
    if g.topology() == Topology::Hexagonal {
        return Err(Failure::Domain(format!(
            "{}: pattern formats are square-only; use a .csv destination for hexagonal grids",
            path.display()
        )));
    }
    Ok(encode_pattern_with_rule(
        g,
        PatternFormat::from_path(path),
        rule,
    )?)
}

fn frame_path(dir: &Path, generation: usize, topology: Topology) -> PathBuf {
    let ext = match topology {
        Topology::Square => "cells",
        Topology::Hexagonal => "csv",
    };
    dir.join(format!("gen_{generation:06}.{ext}"))
}

fn life_run(shared: Shared, a: LifeRun) -> Result<(), Failure> {
    let path = required(a.pattern, "pattern")?;
    let topology = a.topology.unwrap_or_default();
    let (grid, file_rule) = load_pattern(&path)?;
    let mut grid = grid.with_topology(topology);
    let mut rule = resolve_rule(a.rule.as_deref(), file_rule, topology)?;
    if let Some(states) = a.states {
        rule = rule.with_states(states)?;
    }
    let gens = a.gens.unwrap_or(100);
    if let Some(dir) = &a.frames {
        fs::create_dir_all(dir)
            .map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
    }
    let frame = |g: &Grid, n: usize| -> Result<(), Failure> {
        match &a.frames {
            Some(dir) => {
                let p = frame_path(dir, n, topology);
                write(&p, &render(g, &rule, &p)?)
            }
            None => Ok(()),
        }
    };

    let start_population = grid.population();
    let mut metrics = String::from("generation,population\n");
    let _ = writeln!(metrics, "0,{start_population}");
    frame(&grid, 0)?;
    for n in 1..=gens {
        grid = step(&grid, &rule)?;
        let _ = writeln!(metrics, "{n},{}", grid.population());
        frame(&grid, n)?;
    }
    if let Some(out) = &shared.out {
        write(out, &render(&grid, &rule, out)?)?;
    }
    emit(shared.metrics.as_deref(), &metrics)?;
    eprintln!(
        "life run: {rule} on {topology:?}, {gens} generations, population {start_population} -> {}",
        grid.population()
    );
    Ok(())
}

fn life_classify(shared: Shared, a: LifeClassify) -> Result<(), Failure> {
    let path = required(a.pattern, "pattern")?;
    let topology = a.topology.unwrap_or_default();
    let (grid, file_rule) = load_pattern(&path)?;
    let grid = grid.with_topology(topology);
    let rule = resolve_rule(a.rule.as_deref(), file_rule, topology)?;
    let class = classify_pattern(&grid, &rule, a.horizon.unwrap_or(100))?;
    println!("{class}");
    if let Some(m) = &shared.metrics {
        let row = match class {
            PatternClass::StillLife => "still-life,1,0,0".to_string(),
            PatternClass::Oscillator { period } => format!("oscillator,{period},0,0"),
            PatternClass::Spaceship {
                period,
                displacement: d,
            } => format!("spaceship,{period},{},{}", d.x, d.y),
            PatternClass::Unresolved => "unresolved,,,".to_string(),
        };
        write(m, &format!("class,period,dx,dy\n{row}\n"))?;
    }
    Ok(())
}

fn agents_csv(e: &Environment) -> String {
    let mut out = String::from("id,population,type,x,y,score,last_response,rule,weights\n");
    for p in &e.populations {
        for a in &p.agents {
            let (x, y) = a.position.map_or((String::new(), String::new()), |c| {
                (c.x.to_string(), c.y.to_string())
            });
            let weights = a
                .strategy
                .weights()
                .map(|w| w.iter().map(f64::to_string).collect::<Vec<_>>().join(";"))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{x},{y},{},{},{},{weights}",
                a.id.0, p.name, a.kind, a.score, a.last_response, a.current_rule
            );
        }
    }
    out
}

fn cas_run(shared: Shared, a: CasRun) -> Result<(), Failure> {
    let path = required(shared.config.as_ref(), "config")?;
    let scenario = Scenario::from_toml(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let seed = seed(&Shared {
        seed: shared.seed.or(scenario.seed),
        ..Shared::default()
    })?;
    let ticks = a.ticks.or(scenario.ticks).unwrap_or(100);
    let mut env = scenario.build(seed)?;
    let rows = env.run(ticks)?;
    if let Some(out) = &shared.out {
        write(out, &agents_csv(&env))?;
    }
    emit(shared.metrics.as_deref(), &metrics_csv(&rows))?;
    eprintln!(
        "cas run: {} agents, {ticks} ticks, seed {seed}",
        env.agent_count()
    );
    Ok(())
}

fn ga_run(shared: Shared, a: GaRun) -> Result<(), Failure> {
    let seed = seed(&shared)?;
    let problem = a.problem.unwrap_or(Problem::Onemax);
    let coevolve = (problem == Problem::Coevolve).then(CoevolutionProblem::standard);
    let length = match &coevolve {
        Some(p) => match a.length {
            Some(l) if l != p.genome_length() => {
                return Err(Failure::Domain(format!(
                    "coevolve genomes have length {}, not {l}",
                    p.genome_length()
                )))
            }
            _ => p.genome_length(),
        },
        None => a.length.unwrap_or(64),
    };
    if length == 0 {
        return Err(Failure::Domain("genome length must be positive".into()));
    }
    let (pop, gens) = match problem {
        Problem::Onemax => (100, 200),
        Problem::Coevolve => (24, 15),
    };
    let cfg = EvolutionConfig {
        population_size: a.pop.unwrap_or(pop),
        generations: a.gens.unwrap_or(gens),
        genome_length: length,
        alphabet: 2,
        mutation_rate: a.mut_rate.unwrap_or(1.0 / length as f64),
        crossover_rate: a.cx.unwrap_or(0.9),
        tournament_size: a.tournament.unwrap_or(3),
        elitism: a.elite.unwrap_or(2),
        seed,
        target_fitness: a
            .target
            .or((problem == Problem::Onemax).then_some(length as f64)),
    };
    let outcome = match &coevolve {
        Some(p) => evolve(&cfg, |g: &Genome| p.fitness(g))?,
        None => evolve(&cfg, onemax)?,
    };
    let best = outcome.best.fitness.unwrap_or(f64::NAN);
    if let Some(out) = &shared.out {
        write(
            out,
            &format!("fitness,genome\n{best},{}\n", outcome.best.genome),
        )?;
    }
    emit(shared.metrics.as_deref(), &outcome.stats_csv())?;
    eprintln!(
        "ga run: {problem:?}, {} generations, best {best}",
        outcome.stats.len().saturating_sub(1)
    );
    if let Some(p) = &coevolve {
        eprintln!("ga run: best weights {:?}", p.decode(&outcome.best.genome));
    }
    Ok(())
}

fn profile(shared: Shared, a: ComplexityProfile) -> Result<(), Failure> {
    let path = required(a.pattern, "pattern")?;
    let (grid, file_rule) = load_pattern(&path)?;
    let rule = resolve_rule(a.rule.as_deref(), file_rule, Topology::Square)?;
    let gens = a.gens.unwrap_or(100);
    let scales = a.scales.unwrap_or_else(|| vec![1, 2, 4, 8, 16]);
    let mut history = Vec::with_capacity(gens + 1);
    history.push(grid);
    for _ in 0..gens {
        let next = step(history.last().expect("history is non-empty"), &rule)?;
        history.push(next);
    }
    let p = complexity_profile(&history, &scales)?;
    if let Some(out) = &shared.out {
        write(out, &p.to_csv())?;
    }
    emit(shared.metrics.as_deref(), &p.to_csv())?;
    eprintln!(
        "complexity profile: {} states, non-increasing: {}",
        history.len(),
        p.is_non_increasing()
    );
    Ok(())
}

fn lyapunov(shared: Shared, a: Lyapunov) -> Result<(), Failure> {
    let kind = a.map.unwrap_or(MapKind::Logistic);
    let r = a.r.unwrap_or(4.0);
    let map = match kind {
        MapKind::Logistic => IterativeMap::logistic(r),
        MapKind::Identity => IterativeMap::identity(),
    };
    let x0 = a.x0.unwrap_or(0.3);
    let steps = a.steps.unwrap_or(100_000);
    let burn_in = a.burnin.unwrap_or(DEFAULT_BURN_IN);
    let separation = a.separation.unwrap_or(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(shared.seed.unwrap_or(0));
    let d = divergence_rate(&map, x0, steps, burn_in, &mut rng)?;
    let t = divergence_rate_two_trajectory(&map, x0, steps, burn_in, separation, &mut rng)?;
    if let Some(out) = &shared.out {
        write(out, &iterate(&map, x0, steps, &mut rng)?.to_csv())?;
    }
    let map_name = match kind {
        MapKind::Logistic => "logistic",
        MapKind::Identity => "identity",
    };
    let metrics = format!(
        "map,r,x0,steps,burn_in,derivative,two_trajectory,floored_steps\n{map_name},{r},{x0},{steps},{burn_in},{},{},{}\n",
        d.exponent,
        t.exponent,
        d.floored_steps.len()
    );
    emit(shared.metrics.as_deref(), &metrics)?;
    if !d.floored_steps.is_empty() {
        eprintln!(
            "dynamics lyapunov: derivative was exactly zero at {} steps (first: {}); floored",
            d.floored_steps.len(),
            d.floored_steps[0]
        );
    }
    Ok(())
}

fn sweep(shared: Shared, a: Sweep) -> Result<(), Failure> {
    let rows = sweep_logistic(
        a.r_from.unwrap_or(2.5),
        a.r_to.unwrap_or(4.0),
        a.r_step.unwrap_or(0.01),
        a.x0.unwrap_or(0.3),
        a.steps.unwrap_or(10_000),
        a.burnin.unwrap_or(DEFAULT_BURN_IN),
    )?;
    let mut csv = String::from("r,lambda\n");
    for (r, l) in &rows {
        let _ = writeln!(csv, "{r},{l}");
    }
    if let Some(out) = &shared.out {
        write(out, &csv)?;
    }
    emit(shared.metrics.as_deref(), &csv)?;
    eprintln!("dynamics sweep: {} values of r", rows.len());
    Ok(())
}
