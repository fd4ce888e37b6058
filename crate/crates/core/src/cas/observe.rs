use std::collections::{BTreeMap, BTreeSet};

use crate::complexity::coarse_grain;
use crate::grid::{Coord, Grid};

use super::{AgentId, AttrValue, CasError, Environment};

/// The scale and attribute projection an observer works at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    scale: u32,
    /// `None` projects every observable attribute.
    projection: Option<BTreeSet<String>>,
}

impl Frame {
    pub fn new<I, S>(scale: u32, projection: I) -> Result<Self, CasError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        if scale == 0 {
            return Err(CasError::Frame("scale must be at least 1".into()));
        }
        Ok(Frame {
            scale,
            projection: Some(projection.into_iter().map(Into::into).collect()),
        })
    }

    pub fn full(scale: u32) -> Result<Self, CasError> {
        if scale == 0 {
            return Err(CasError::Frame("scale must be at least 1".into()));
        }
        Ok(Frame {
            scale,
            projection: None,
        })
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    fn shows(&self, name: &str) -> bool {
        self.projection.as_ref().is_none_or(|p| p.contains(name))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObservedValue {
    Attr(AttrValue),
    Position(Coord),
    Real(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservedAgent {
    pub id: AgentId,
    pub kind: String,
    pub population: String,
    pub values: BTreeMap<String, ObservedValue>,
}

/// What an observer retains of an environment.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub time: u64,
    pub scale: u32,
    pub agents: Vec<ObservedAgent>,
    pub space: Option<Grid>,
}

fn coarse_coord(c: Coord, scale: u32) -> Coord {
    let s = i64::from(scale);
    Coord::new(c.x.div_euclid(s), c.y.div_euclid(s))
}

/// Projects the environment through `frame`: only projected attributes are
/// kept, positions are divided down to block coordinates and the occupancy
/// grid is coarse-grained by the frame's scale.
pub fn observe(e: &Environment, frame: &Frame) -> Result<Observation, CasError> {
    if let Some(p) = &frame.projection {
        let known = e.observable_names();
        if let Some(bad) = p.iter().find(|n| !known.contains(*n)) {
            return Err(CasError::Frame(format!("unknown attribute `{bad}`")));
        }
    }
    let space = e
        .space
        .as_ref()
        .map(|g| coarse_grain(g, frame.scale))
        .transpose()
        .map_err(|err| CasError::Frame(err.to_string()))?;
    let agents = e
        .populations
        .iter()
        .flat_map(|p| p.agents.iter().map(move |a| (p, a)))
        .map(|(p, a)| {
            let mut values = BTreeMap::new();
            for (k, v) in &a.attributes {
                if frame.shows(k) {
                    values.insert(k.clone(), ObservedValue::Attr(v.clone()));
                }
            }
            if let Some(c) = a.position.filter(|_| frame.shows("position")) {
                values.insert(
                    "position".into(),
                    ObservedValue::Position(coarse_coord(c, frame.scale)),
                );
            }
            if frame.shows("score") {
                values.insert("score".into(), ObservedValue::Real(a.score));
            }
            if frame.shows("last_response") {
                values.insert("last_response".into(), ObservedValue::Real(a.last_response));
            }
            ObservedAgent {
                id: a.id,
                kind: a.kind.clone(),
                population: p.name.clone(),
                values,
            }
        })
        .collect();
    Ok(Observation {
        time: e.time,
        scale: frame.scale,
        agents,
        space,
    })
}

impl Observation {
    /// Re-observes at `factor` times the current scale using only this
    /// observation; equal to observing the environment at the product scale.
    pub fn coarsen(&self, factor: u32) -> Result<Observation, CasError> {
        if factor == 0 {
            return Err(CasError::Frame("scale must be at least 1".into()));
        }
        let space = self
            .space
            .as_ref()
            .map(|g| coarse_grain(g, factor))
            .transpose()
            .map_err(|err| CasError::Frame(err.to_string()))?;
        let agents = self
            .agents
            .iter()
            .map(|a| {
                let mut a = a.clone();
                if let Some(ObservedValue::Position(c)) = a.values.get_mut("position") {
                    *c = coarse_coord(*c, factor);
                }
                a
            })
            .collect();
        Ok(Observation {
            time: self.time,
            scale: self.scale * factor,
            agents,
            space,
        })
    }
}
