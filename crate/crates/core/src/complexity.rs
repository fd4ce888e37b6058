//! Information content of observed states, `I = log2(Ω)`, and how it falls
//! off as the observer coarse-grains the lattice.
//!
//! Ω is the number of distinct states actually observed in a history at a
//! given scale. States are compared as exact cell sets at a fixed anchoring,
//! so a translated pattern counts as a different state.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::grid::{Coord, Grid, Topology};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexityError {
    #[error("state count must be at least 1, got {0}")]
    ZeroStates(u64),
    #[error("coarse-graining scale must be at least 1")]
    ZeroScale,
    #[error("coarse-graining supports square lattices only, got {0}")]
    UnsupportedTopology(Topology),
    #[error("cannot profile an empty history")]
    EmptyHistory,
    #[error("scales must be non-empty and each must divide the next, got {0:?}")]
    NonNestedScales(Vec<u32>),
}

/// Bits needed to single out one of `omega` states. Exact for powers of two.
pub fn info_bits(omega: u64) -> Result<f64, ComplexityError> {
    match omega {
        0 => Err(ComplexityError::ZeroStates(0)),
        n if n.is_power_of_two() => Ok(f64::from(n.trailing_zeros())),
        n => Ok((n as f64).log2()),
    }
}

/// Upper bound on bits for a bounded region: `cells · log2(states)`.
pub fn state_space_bits(cells: u64, states: u16) -> f64 {
    cells as f64 * f64::from(states).log2()
}

/// How a block of fine cells maps onto one coarse cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CoarseRule {
    /// Live iff at least one member is live.
    #[default]
    AnyLive,
    /// Live iff strictly more than half of the members are live.
    Majority,
}

/// Any-live coarse-graining into `scale`×`scale` blocks anchored at the origin.
pub fn coarse_grain(g: &Grid, scale: u32) -> Result<Grid, ComplexityError> {
    coarse_grain_with(g, scale, CoarseRule::AnyLive)
}

pub fn coarse_grain_with(g: &Grid, scale: u32, rule: CoarseRule) -> Result<Grid, ComplexityError> {
    if g.topology() != Topology::Square {
        return Err(ComplexityError::UnsupportedTopology(g.topology()));
    }
    if scale == 0 {
        return Err(ComplexityError::ZeroScale);
    }
    if scale == 1 {
        return Ok(g.clone());
    }
    let s = i64::from(scale);
    let block = |c: Coord| Coord::new(c.x.div_euclid(s), c.y.div_euclid(s));
    let out = match rule {
        CoarseRule::AnyLive => {
            Grid::from_cells(Topology::Square, g.iter().map(|(c, _)| (block(c), 1)))
        }
        CoarseRule::Majority => {
            let mut counts: HashMap<Coord, u64> = HashMap::new();
            for (c, _) in g.iter() {
                *counts.entry(block(c)).or_default() += 1;
            }
            let area = u64::from(scale) * u64::from(scale);
            Grid::from_cells(
                Topology::Square,
                counts
                    .into_iter()
                    .filter(|&(_, n)| 2 * n > area)
                    .map(|(c, _)| (c, 1)),
            )
        }
    };
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StateCensus {
    pub omega: u64,
    pub sample_size: usize,
    pub scale: u32,
}

impl StateCensus {
    pub fn bits(&self) -> f64 {
        info_bits(self.omega).expect("a census of a non-empty sample has omega >= 1")
    }
}

/// Counts distinct coarse-grained states among `states`.
pub fn census(states: &[Grid], scale: u32) -> Result<StateCensus, ComplexityError> {
    if states.is_empty() {
        return Err(ComplexityError::EmptyHistory);
    }
    let mut seen = HashSet::new();
    for g in states {
        seen.insert(coarse_grain(g, scale)?);
    }
    Ok(StateCensus {
        omega: seen.len() as u64,
        sample_size: states.len(),
        scale,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub scale: u32,
    pub omega: u64,
    pub bits: f64,
}

/// Information as a function of observation scale; bits never increase
/// along the list.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexityProfile {
    points: Vec<ProfilePoint>,
}

impl ComplexityProfile {
    pub fn points(&self) -> &[ProfilePoint] {
        &self.points
    }

    pub fn is_non_increasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].bits <= w[0].bits)
    }

    /// `scale,omega,bits` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale,omega,bits\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{},{}", p.scale, p.omega, p.bits);
        }
        out
    }
}

/// Profiles a history at each scale.
///
/// Scales must form a divisor chain (each divides the next, e.g. 1,2,4,8):
/// then every coarser state is a function of the finer one and Ω cannot grow
/// along the list. Misaligned scales such as 2 and 3 carry no such guarantee
/// and are rejected.
pub fn complexity_profile(
    history: &[Grid],
    scales: &[u32],
) -> Result<ComplexityProfile, ComplexityError> {
    if history.is_empty() {
        return Err(ComplexityError::EmptyHistory);
    }
    let nested = !scales.is_empty()
        && scales[0] > 0
        && scales.windows(2).all(|w| w[1] > w[0] && w[1] % w[0] == 0);
    if !nested {
        return Err(ComplexityError::NonNestedScales(scales.to_vec()));
    }
    let points = scales
        .iter()
        .map(|&scale| {
            let c = census(history, scale)?;
            Ok(ProfilePoint {
                scale,
                omega: c.omega,
                bits: c.bits(),
            })
        })
        .collect::<Result<Vec<_>, ComplexityError>>()?;
    let profile = ComplexityProfile { points };
    debug_assert!(profile.is_non_increasing());
    Ok(profile)
}
