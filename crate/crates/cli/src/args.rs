use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use complexkit::Topology;
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "complexkit",
    version,
    about = "Cellular automata, adaptive agents, genetic algorithms, complexity profiles and chaos diagnostics",
    after_help = "Precedence: command-line flags override --config values, which override built-in defaults."
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: Shared,
    #[command(subcommand)]
    pub noun: Noun,
}

/// Flags accepted by every subcommand.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shared {
    /// Seed for stochastic runs (required by `cas run` and `ga run`)
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Primary output file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Metrics CSV destination (default: stdout)
    #[arg(long, global = true)]
    pub metrics: Option<PathBuf>,
    /// TOML run configuration; for `cas run`, the scenario file
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Noun {
    /// Cellular automata
    Life {
        #[command(subcommand)]
        verb: LifeVerb,
    },
    /// Agent-based complex adaptive systems
    Cas {
        #[command(subcommand)]
        verb: CasVerb,
    },
    /// Genetic algorithms
    Ga {
        #[command(subcommand)]
        verb: GaVerb,
    },
    /// Scale-dependent complexity profiles
    Complexity {
        #[command(subcommand)]
        verb: ComplexityVerb,
    },
    /// Iterative maps and Lyapunov exponents
    Dynamics {
        #[command(subcommand)]
        verb: DynamicsVerb,
    },
}

#[derive(Debug, Subcommand)]
pub enum LifeVerb {
    /// Step a pattern and write the final generation
    Run(LifeRun),
    /// Report still-life, oscillator, spaceship or unresolved
    Classify(LifeClassify),
}

#[derive(Debug, Subcommand)]
pub enum CasVerb {
    /// Run a scenario file
    Run(CasRun),
}

#[derive(Debug, Subcommand)]
pub enum GaVerb {
    /// Evolve a population
    Run(GaRun),
}

#[derive(Debug, Subcommand)]
pub enum ComplexityVerb {
    /// Information in a pattern's history at several observation scales
    Profile(ComplexityProfile),
}

#[derive(Debug, Subcommand)]
pub enum DynamicsVerb {
    /// Estimate the Lyapunov exponent of one map
    Lyapunov(Lyapunov),
    /// Logistic-map exponent over a range of r
    Sweep(Sweep),
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct LifeRun {
    /// Pattern file (.rle, or .cells/.txt for plaintext)
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    /// Rule such as B3/S23 (default: the file's rule, else B3/S23)
    #[arg(long)]
    pub rule: Option<String>,
    /// Generations to run [default: 100]
    #[arg(long)]
    pub gens: Option<usize>,
    /// square or hex [default: square]
    #[arg(long)]
    pub topology: Option<Topology>,
    /// Cell states including dead [default: 2]
    #[arg(long)]
    pub states: Option<u16>,
    /// Write every generation to this directory
    #[arg(long)]
    pub frames: Option<PathBuf>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct LifeClassify {
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    #[arg(long)]
    pub rule: Option<String>,
    /// Generations to search for a recurrence [default: 100]
    #[arg(long)]
    pub horizon: Option<usize>,
    #[arg(long)]
    pub topology: Option<Topology>,
}

#[derive(Debug, Default, Args)]
pub struct CasRun {
    /// Ticks to run (overrides the scenario) [default: 100]
    #[arg(long)]
    pub ticks: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Onemax,
    Coevolve,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct GaRun {
    /// Fitness problem [default: onemax]
    #[arg(long, value_enum)]
    pub problem: Option<Problem>,
    /// Genome length (fixed by the problem for coevolve) [default: 64]
    #[arg(long)]
    pub length: Option<usize>,
    /// Population size [default: 100, coevolve 24]
    #[arg(long)]
    pub pop: Option<usize>,
    /// Generations [default: 200, coevolve 15]
    #[arg(long)]
    pub gens: Option<usize>,
    /// Per-symbol mutation probability [default: 1/length]
    #[arg(long = "mut")]
    #[serde(rename = "mut")]
    pub mut_rate: Option<f64>,
    /// Crossover probability [default: 0.9]
    #[arg(long)]
    pub cx: Option<f64>,
    /// Elites copied unchanged [default: 2]
    #[arg(long)]
    pub elite: Option<usize>,
    /// Tournament size [default: 3]
    #[arg(long)]
    pub tournament: Option<usize>,
    /// Stop once the best fitness reaches this [default: length for onemax]
    #[arg(long)]
    pub target: Option<f64>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ComplexityProfile {
    #[arg(long)]
    pub pattern: Option<PathBuf>,
    #[arg(long)]
    pub rule: Option<String>,
    /// History length [default: 100]
    #[arg(long)]
    pub gens: Option<usize>,
    /// Comma-separated divisor chain [default: 1,2,4,8,16]
    #[arg(long, value_delimiter = ',')]
    pub scales: Option<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Logistic,
    Identity,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Lyapunov {
    /// [default: logistic]
    #[arg(long, value_enum)]
    pub map: Option<MapKind>,
    /// Logistic parameter [default: 4.0]
    #[arg(long)]
    pub r: Option<f64>,
    /// [default: 0.3]
    #[arg(long)]
    pub x0: Option<f64>,
    /// [default: 100000]
    #[arg(long)]
    pub steps: Option<usize>,
    /// [default: 1000]
    #[arg(long)]
    pub burnin: Option<usize>,
    /// Initial gap for the two-trajectory estimate [default: 1e-9]
    #[arg(long)]
    pub separation: Option<f64>,
}

#[derive(Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Sweep {
    /// [default: 2.5]
    #[arg(long)]
    pub r_from: Option<f64>,
    /// [default: 4.0]
    #[arg(long)]
    pub r_to: Option<f64>,
    /// [default: 0.01]
    #[arg(long)]
    pub r_step: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub burnin: Option<usize>,
}

/// Fills unset fields from a lower-precedence layer.
pub trait Layer {
    fn or(self, base: Self) -> Self;
}

macro_rules! layer {
    ($ty:ident { $($field:ident),* }) => {
        impl Layer for $ty {
            fn or(self, base: Self) -> Self {
                $ty { $($field: self.$field.or(base.$field)),* }
            }
        }
    };
}

layer!(Shared {
    seed,
    out,
    metrics,
    config
});
layer!(LifeRun {
    pattern,
    rule,
    gens,
    topology,
    states,
    frames
});
layer!(LifeClassify {
    pattern,
    rule,
    horizon,
    topology
});
layer!(GaRun {
    problem,
    length,
    pop,
    gens,
    mut_rate,
    cx,
    elite,
    tournament,
    target
});
layer!(ComplexityProfile {
    pattern,
    rule,
    gens,
    scales
});
layer!(Lyapunov {
    map,
    r,
    x0,
    steps,
    burnin,
    separation
});
layer!(Sweep {
    r_from,
    r_to,
    r_step,
    x0,
    steps,
    burnin
});
