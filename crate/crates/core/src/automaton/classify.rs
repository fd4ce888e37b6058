use std::fmt;

use crate::grid::{Coord, Grid};

use super::{step, AutomatonError, RuleSet};

/// Pattern behavior found within a finite horizon. Matching is modulo
/// translation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternClass {
    StillLife,
    Oscillator { period: usize },
    Spaceship { period: usize, displacement: Coord },
    Unresolved,
}

impl fmt::Display for PatternClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternClass::StillLife => f.write_str("still-life"),
            PatternClass::Oscillator { period } => write!(f, "oscillator p={period}"),
            PatternClass::Spaceship {
                period,
                displacement,
            } => write!(f, "spaceship p={period} d={displacement}"),
            PatternClass::Unresolved => f.write_str("unresolved"),
        }
    }
}

/// Steps `g` for up to `horizon` generations and reports the smallest period
/// at which it recurs, in place or translated.
pub fn classify_pattern(
    g: &Grid,
    r: &RuleSet,
    horizon: usize,
) -> Result<PatternClass, AutomatonError> {
    if horizon == 0 {
        return Err(AutomatonError::InvalidHorizon);
    }
    let origin = g.bounding_box().map(|bb| bb.min);
    let shape = g.canonicalize();
    let mut current = g.clone();
    for k in 1..=horizon {
        current = step(&current, r)?;
        if current == *g {
            return Ok(match k {
                1 => PatternClass::StillLife,
                period => PatternClass::Oscillator { period },
            });
        }
        if current.population() != g.population() {
            continue;
        }
        if let (Some(start), Some(bb)) = (origin, current.bounding_box()) {
            if current.canonicalize() == shape {
                return Ok(PatternClass::Spaceship {
                    period: k,
                    displacement: bb.min - start,
                });
            }
        }
    }
    Ok(PatternClass::Unresolved)
}
