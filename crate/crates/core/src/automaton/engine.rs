use std::collections::{BTreeSet, HashMap};

use crate::grid::{neighbors, CellState, Coord, Grid, DEAD};

use super::{AutomatonError, RuleSet};

/// Snapshots of a run, generation 0 first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct History {
    generations: Vec<Grid>,
}

impl History {
    pub fn generations(&self) -> &[Grid] {
        &self.generations
    }

    pub fn into_generations(self) -> Vec<Grid> {
        self.generations
    }

    pub fn len(&self) -> usize {
        self.generations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generations.is_empty()
    }

    pub fn first(&self) -> &Grid {
        &self.generations[0]
    }

    pub fn last(&self) -> &Grid {
        self.generations
            .last()
            .expect("history always holds generation 0")
    }
}

impl std::ops::Index<usize> for History {
    type Output = Grid;
    fn index(&self, k: usize) -> &Grid {
        &self.generations[k]
    }
}

fn check(g: &Grid, r: &RuleSet) -> Result<(), AutomatonError> {
    r.validate_for(g.topology())?;
    if let Some((coord, state)) = g.iter().find(|&(_, s)| u16::from(s) >= r.states()) {
        return Err(AutomatonError::StateOutOfRange {
            coord,
            state,
            states: r.states(),
        });
    }
    Ok(())
}

/// One synchronous generation.
///
/// Live cells are those with non-zero state. A dead cell whose live-neighbor
/// count is in the birth set is born with the majority color of its live
/// neighbors (ties go to the smallest color); a live cell whose count is in
/// the survival set keeps its color; every other cell is dead next generation.
pub fn step(g: &Grid, r: &RuleSet) -> Result<Grid, AutomatonError> {
    check(g, r)?;
    Ok(if r.states() == 2 {
        step_two_state(g, r)
    } else {
        step_multi_state(g, r)
    })
}

/// Scatter pass: every live cell adds one to each neighbor's tally.
fn step_two_state(g: &Grid, r: &RuleSet) -> Grid {
    let topology = g.topology();
    let mut counts: HashMap<Coord, u8> = HashMap::with_capacity(g.population() * 4);
    for (c, _) in g.iter() {
        for n in neighbors(c, topology) {
            *counts.entry(n).or_insert(0) += 1;
        }
    }
    let mut next: Vec<(Coord, CellState)> = Vec::with_capacity(g.population());
    for (c, s) in g.iter() {
        let n = counts.get(&c).copied().unwrap_or(0);
        if r.survives_on(n) {
            next.push((c, s));
        }
    }
    for (&c, &n) in &counts {
        if r.births_on(n) && !g.is_alive(c) {
            next.push((c, 1));
        }
    }
    next.sort_unstable_by_key(|&(c, _)| c);
    Grid::from_cells(topology, next)
}

/// Gather pass over every candidate cell, resolving newborn colors.
///
/// Exposed so the two code paths can be compared; [`step`] dispatches here
/// whenever the rule has more than two states.
pub fn step_multi_state(g: &Grid, r: &RuleSet) -> Grid {
    let topology = g.topology();
    let candidates: BTreeSet<Coord> = g
        .iter()
        .flat_map(|(c, _)| std::iter::once(c).chain(neighbors(c, topology)))
        .collect();

    let mut tally = vec![0u8; usize::from(r.states())];
    let mut next = Grid::new(topology);
    for c in candidates {
        tally.iter_mut().for_each(|t| *t = 0);
        let mut live = 0u8;
        for n in neighbors(c, topology) {
            let s = g.get(n);
            if s != DEAD {
                live += 1;
                tally[usize::from(s)] += 1;
            }
        }
        let current = g.get(c);
        let state = if current != DEAD {
            if r.survives_on(live) {
                current
            } else {
                DEAD
            }
        } else if r.births_on(live) {
            majority_color(&tally)
        } else {
            DEAD
        };
        next.set(c, state);
    }
    next
}

/// First color with the maximal count; index 0 (dead) is skipped.
fn majority_color(tally: &[u8]) -> CellState {
    let mut best = (0u8, 1usize);
    for (color, &n) in tally.iter().enumerate().skip(1) {
        if n > best.0 {
            best = (n, color);
        }
    }
    best.1 as CellState
}

/// Runs `generations` steps and keeps every snapshot.
pub fn run(g: &Grid, r: &RuleSet, generations: usize) -> Result<History, AutomatonError> {
    check(g, r)?;
    let mut out = Vec::with_capacity(generations + 1);
    out.push(g.clone());
    for _ in 0..generations {
        let next = step(out.last().unwrap(), r)?;
        out.push(next);
    }
    Ok(History { generations: out })
}
