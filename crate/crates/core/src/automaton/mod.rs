//! Cellular-automaton engine: count-based birth/survival rules over Moore or
//! hexagonal neighborhoods, synchronous stepping on the sparse grid, pattern
//! classification and pattern-file codecs.

mod classify;
mod codec;
mod engine;
mod rule;

use thiserror::Error;

use crate::grid::{CellState, Coord, Topology};

pub use classify::{classify_pattern, PatternClass};
pub use codec::{
    decode_pattern, encode_pattern, encode_pattern_with_rule, PatternError, PatternFormat,
};
pub use engine::{run, step, step_multi_state, History};
pub use rule::RuleSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    /// Birth on zero neighbors would light up the whole unbounded lattice.
    #[error("rules with birth on 0 neighbors are not supported on an unbounded lattice")]
    BirthOnZero,
    #[error("neighbor count {count} exceeds the {topology} lattice degree {degree}")]
    CountOutOfRange {
        count: u8,
        degree: u8,
        topology: Topology,
    },
    #[error("cell {coord} has state {state} but the rule has only {states} states")]
    StateOutOfRange {
        coord: Coord,
        state: CellState,
        states: u16,
    },
    #[error("classification horizon must be at least 1")]
    InvalidHorizon,
}
