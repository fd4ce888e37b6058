//! Toolkit for simulating complex systems: generalized cellular automata,
//! agent-based adaptive systems, genetic algorithms, scale-dependent
//! complexity profiles and iterative-map chaos diagnostics.

pub mod automaton;
pub mod cas;
pub mod complexity;
pub mod dynamics;
pub mod evolution;
pub mod grid;

pub use automaton::{
    classify_pattern, decode_pattern, encode_pattern, encode_pattern_with_rule, run, step,
    AutomatonError, History, PatternClass, PatternError, PatternFormat, RuleSet,
};
pub use grid::{canonicalize, neighbors, translate, CellState, Coord, Grid, Topology};
