use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{CasError, Event};

/// Condition on the incoming stimulus under which a rule reacts at all.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    #[default]
    Always,
    AtLeast(f64),
    Below(f64),
}

impl Predicate {
    pub fn accepts(&self, stimulus: f64) -> bool {
        match *self {
            Predicate::Always => true,
            Predicate::AtLeast(t) => stimulus >= t,
            Predicate::Below(t) => stimulus < t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "response", rename_all = "snake_case")]
pub enum Response {
    /// `gain · stimulus`
    Linear {
        gain: f64,
    },
    /// No reaction to the first stimulus, twice the stimulus on the second,
    /// and the pair repeats.
    DoubleOnSecond,
    Constant {
        value: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    #[serde(flatten)]
    pub response: Response,
    #[serde(default)]
    pub when: Predicate,
}

impl Rule {
    pub fn linear(gain: f64) -> Self {
        Rule {
            response: Response::Linear { gain },
            when: Predicate::Always,
        }
    }

    pub fn double_on_second() -> Self {
        Rule {
            response: Response::DoubleOnSecond,
            when: Predicate::Always,
        }
    }

    /// Response to `stimulus` given the agent's past events. A rule whose
    /// predicate rejects the stimulus does not react (response 0).
    pub fn apply(&self, stimulus: f64, memory: &[Event]) -> f64 {
        if !self.when.accepts(stimulus) {
            return 0.0;
        }
        match self.response {
            Response::Linear { gain } => gain * stimulus,
            Response::DoubleOnSecond => {
                if memory.len().is_multiple_of(2) {
                    0.0
                } else {
                    2.0 * stimulus
                }
            }
            Response::Constant { value } => value,
        }
    }
}

/// How an agent picks its rule: a fixed agent has exactly one; an adaptive
/// agent holds weights over several and reinforces the ones that pay off.
#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    Fixed(Rule),
    Adaptive { rules: Vec<Rule>, weights: Vec<f64> },
}

impl Strategy {
    pub fn fixed(rule: Rule) -> Self {
        Strategy::Fixed(rule)
    }

    pub fn adaptive(rules: Vec<Rule>, weights: Vec<f64>) -> Result<Self, CasError> {
        if rules.is_empty() {
            return Err(CasError::InvalidStrategy(
                "adaptive strategy without rules".into(),
            ));
        }
        if rules.len() != weights.len() {
            return Err(CasError::InvalidStrategy(format!(
                "{} rules but {} weights",
                rules.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(CasError::InvalidStrategy(format!(
                "weights must be finite and non-negative: {weights:?}"
            )));
        }
        Ok(Strategy::Adaptive { rules, weights })
    }

    pub fn rules(&self) -> &[Rule] {
        match self {
            Strategy::Fixed(r) => std::slice::from_ref(r),
            Strategy::Adaptive { rules, .. } => rules,
        }
    }

    pub fn weights(&self) -> Option<&[f64]> {
        match self {
            Strategy::Fixed(_) => None,
            Strategy::Adaptive { weights, .. } => Some(weights),
        }
    }

    pub fn is_adaptive(&self) -> bool {
        matches!(self, Strategy::Adaptive { .. })
    }

    /// Adds `reward` to the rule's weight, flooring at zero. Fixed strategies
    /// ignore rewards.
    pub fn reinforce(&mut self, rule: usize, reward: f64) {
        if let Strategy::Adaptive { weights, .. } = self {
            if let Some(w) = weights.get_mut(rule) {
                *w = (*w + reward).max(0.0);
            }
        }
    }

    /// Fixed strategies always return 0 without consuming randomness.
    /// Adaptive ones draw proportionally to weight among the rules whose
    /// predicate accepts `context` (all rules when none do).
    pub fn select<R: Rng + ?Sized>(&self, context: f64, rng: &mut R) -> Option<usize> {
        let (rules, weights) = match self {
            Strategy::Fixed(_) => return Some(0),
            Strategy::Adaptive { rules, weights } => (rules, weights),
        };
        let any_accepts = rules.iter().any(|r| r.when.accepts(context));
        let eligible = |i: usize| !any_accepts || rules[i].when.accepts(context);
        let total: f64 = (0..rules.len())
            .filter(|&i| eligible(i))
            .map(|i| weights[i])
            .sum();
        if total <= 0.0 {
            return None;
        }
        let mut u = rng.gen::<f64>() * total;
        let mut last = None;
        for i in (0..rules.len()).filter(|&i| eligible(i) && weights[i] > 0.0) {
            if u < weights[i] {
                return Some(i);
            }
            u -= weights[i];
            last = Some(i);
        }
        last
    }
}
