use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::grid::Coord;

use super::{CasError, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AgentId(pub u64);

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttrKind {
    Integer,
    Real,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Integer(i64),
    Real(f64),
    Categorical(String),
}

impl AttrValue {
    pub fn kind(&self) -> AttrKind {
        match self {
            AttrValue::Integer(_) => AttrKind::Integer,
            AttrValue::Real(_) => AttrKind::Real,
            AttrValue::Categorical(_) => AttrKind::Categorical,
        }
    }

    /// Converts to `kind` where lossless (integers widen to reals).
    pub fn coerce(self, kind: AttrKind) -> Option<AttrValue> {
        match (self, kind) {
            (AttrValue::Integer(i), AttrKind::Real) => Some(AttrValue::Real(i as f64)),
            (v, k) if v.kind() == k => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for AttrValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttrValue::Integer(i) => write!(f, "{i}"),
            AttrValue::Real(x) => write!(f, "{x}"),
            AttrValue::Categorical(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttrSchema {
    pub name: String,
    pub kind: AttrKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyFamily {
    Fixed,
    Adaptive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentType {
    pub name: String,
    pub schema: Vec<AttrSchema>,
    pub family: StrategyFamily,
}

impl AgentType {
    pub fn check(&self, agent: &Agent) -> Result<(), CasError> {
        let mismatch = |msg: String| CasError::AttributeMismatch {
            agent: agent.id,
            message: msg,
        };
        if agent.kind != self.name {
            return Err(mismatch(format!(
                "typed `{}`, expected `{}`",
                agent.kind, self.name
            )));
        }
        if agent.strategy.is_adaptive() != (self.family == StrategyFamily::Adaptive) {
            return Err(mismatch(format!(
                "strategy family differs from type `{}`",
                self.name
            )));
        }
        if agent.attributes.len() != self.schema.len() {
            return Err(mismatch(format!(
                "{} attributes, schema declares {}",
                agent.attributes.len(),
                self.schema.len()
            )));
        }
        for a in &self.schema {
            match agent.attributes.get(&a.name) {
                Some(v) if v.kind() == a.kind => {}
                Some(v) => {
                    return Err(mismatch(format!(
                        "`{}` is {:?}, expected {:?}",
                        a.name,
                        v.kind(),
                        a.kind
                    )))
                }
                None => return Err(mismatch(format!("missing attribute `{}`", a.name))),
            }
        }
        Ok(())
    }
}

/// One stimulus/response pair in an agent's memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub stimulus: f64,
    pub response: f64,
    pub rule: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub id: AgentId,
    /// Name of the agent's [`AgentType`].
    pub kind: String,
    pub attributes: BTreeMap<String, AttrValue>,
    pub strategy: Strategy,
    /// Append-only record of every stimulus received.
    pub memory: Vec<Event>,
    pub position: Option<Coord>,
    /// Rule used for the next [`respond`] call.
    pub current_rule: usize,
    pub last_response: f64,
    /// Accumulated reward.
    pub score: f64,
}

impl Agent {
    pub fn new(id: u64, kind: impl Into<String>, strategy: Strategy) -> Self {
        Agent {
            id: AgentId(id),
            kind: kind.into(),
            attributes: BTreeMap::new(),
            strategy,
            memory: Vec::new(),
            position: None,
            current_rule: 0,
            last_response: 0.0,
            score: 0.0,
        }
    }

    pub fn with_position(mut self, c: Coord) -> Self {
        self.position = Some(c);
        self
    }

    pub fn with_attribute(mut self, name: impl Into<String>, value: AttrValue) -> Self {
        self.attributes.insert(name.into(), value);
        self
    }

    /// Applies rule `rule` to `stimulus` and records the event.
    pub fn respond_with(&mut self, rule: usize, stimulus: f64) -> Result<f64, CasError> {
        if !stimulus.is_finite() {
            return Err(CasError::NonFiniteStimulus(stimulus));
        }
        let r = self
            .strategy
            .rules()
            .get(rule)
            .copied()
            .ok_or(CasError::NoSuchRule {
                agent: self.id,
                rule,
            })?;
        let response = r.apply(stimulus, &self.memory);
        self.memory.push(Event {
            stimulus,
            response,
            rule,
        });
        self.last_response = response;
        Ok(response)
    }
}

/// Response of `a` to `stimulus` under its current rule, and the agent with
/// the event appended to its memory.
pub fn respond(a: &Agent, stimulus: f64) -> Result<(f64, Agent), CasError> {
    let mut next = a.clone();
    let response = next.respond_with(a.current_rule, stimulus)?;
    Ok((response, next))
}

/// Rule index for the agent's next action. Fixed agents always get 0.
pub fn select_rule<R: Rng + ?Sized>(
    a: &Agent,
    context: f64,
    rng: &mut R,
) -> Result<usize, CasError> {
    a.strategy
        .select(context, rng)
        .ok_or(CasError::DegenerateStrategy(a.id))
}
