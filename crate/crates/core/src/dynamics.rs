//! One-dimensional iterative maps, deterministic or stochastic, and the
//! exponential divergence rate (Lyapunov exponent) of their trajectories.

use rand::Rng;
use thiserror::Error;

/// Floor substituted for `|f'(x)| = 0` when summing logarithms.
pub const DERIVATIVE_FLOOR: f64 = 1e-300;

pub const DEFAULT_BURN_IN: usize = 1000;

const PROBABILITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("a map needs at least one branch")]
    NoBranches,
    #[error("branch probabilities must be non-negative and sum to 1, got {0:?}")]
    InvalidProbabilities(Vec<f64>),
    #[error("initial state {0} is not finite")]
    NonFiniteStart(f64),
    #[error("trajectory left the finite reals at step {step}")]
    Diverged { step: usize },
    #[error("the estimator needs at least one step")]
    ZeroSteps,
    #[error("initial separation must be positive and finite, got {0}")]
    InvalidSeparation(f64),
    #[error("invalid sweep range {from}..={to} step {step}")]
    InvalidSweep { from: f64, to: f64, step: f64 },
}

/// A closed-form real map with a known derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapFn {
    /// `x ↦ r·x·(1−x)`
    Logistic { r: f64 },
    /// `x ↦ x`
    Identity,
    /// `x ↦ slope·x + intercept`
    Affine { slope: f64, intercept: f64 },
}

impl MapFn {
    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            MapFn::Logistic { r } => r * x * (1.0 - x),
            MapFn::Identity => x,
            MapFn::Affine { slope, intercept } => slope * x + intercept,
        }
    }

    #[inline]
    pub fn derivative(&self, x: f64) -> f64 {
        match *self {
            MapFn::Logistic { r } => r * (1.0 - 2.0 * x),
            MapFn::Identity => 1.0,
            MapFn::Affine { slope, .. } => slope,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub map: MapFn,
    pub probability: f64,
}

/// A map whose branch at each step is drawn with the given probabilities.
/// A single branch makes it deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct IterativeMap {
    branches: Vec<Branch>,
}

impl IterativeMap {
    pub fn stochastic(branches: Vec<Branch>) -> Result<Self, DynamicsError> {
        if branches.is_empty() {
            return Err(DynamicsError::NoBranches);
        }
        let probs: Vec<f64> = branches.iter().map(|b| b.probability).collect();
        let total: f64 = probs.iter().sum();
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0)
            || (total - 1.0).abs() > PROBABILITY_TOLERANCE
        {
            return Err(DynamicsError::InvalidProbabilities(probs));
        }
        Ok(IterativeMap { branches })
    }

    pub fn deterministic(map: MapFn) -> Self {
        IterativeMap {
            branches: vec![Branch {
                map,
                probability: 1.0,
            }],
        }
    }

    pub fn logistic(r: f64) -> Self {
        IterativeMap::deterministic(MapFn::Logistic { r })
    }

    pub fn identity() -> Self {
        IterativeMap::deterministic(MapFn::Identity)
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_deterministic(&self) -> bool {
        self.branches.len() == 1
    }

    /// Deterministic maps never touch `rng`.
    fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.is_deterministic() {
            return 0;
        }
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, b) in self.branches.iter().enumerate() {
            acc += b.probability;
            if u < acc {
                return i;
            }
        }
        self.branches
            .iter()
            .rposition(|b| b.probability > 0.0)
            .unwrap_or(0)
    }
}

/// States `x0..=xn` and the branch used for each step.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<f64>,
    pub branches: Vec<usize>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `step,x,branch` rows; the branch column is empty for `x0`.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("step,x,branch\n");
        for (t, x) in self.states.iter().enumerate() {
            match t.checked_sub(1).map(|i| self.branches[i]) {
                Some(b) => writeln!(out, "{t},{x},{b}"),
                None => writeln!(out, "{t},{x},"),
            }
            .expect("writing to a String");
        }
        out
    }
}

pub fn iterate<R: Rng + ?Sized>(
    m: &IterativeMap,
    x0: f64,
    steps: usize,
    rng: &mut R,
) -> Result<Trajectory, DynamicsError> {
    if !x0.is_finite() {
        return Err(DynamicsError::NonFiniteStart(x0));
    }
    let mut states = Vec::with_capacity(steps + 1);
    let mut branches = Vec::with_capacity(steps);
    states.push(x0);
    let mut x = x0;
    for step in 1..=steps {
        let i = m.choose(rng);
        x = m.branches[i].map.apply(x);
        if !x.is_finite() {
            return Err(DynamicsError::Diverged { step });
        }
        states.push(x);
        branches.push(i);
    }
    Ok(Trajectory { states, branches })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovEstimate {
    /// Mean per-step log stretching; positive means exponential divergence.
    pub exponent: f64,
    pub steps: usize,
    /// Steps (counted after burn-in) where the floor replaced a zero stretch.
    pub floored_steps: Vec<usize>,
}

fn log_stretch(v: f64, step: usize, floored: &mut Vec<usize>) -> f64 {
    let a = v.abs();
    if a == 0.0 {
        floored.push(step);
        DERIVATIVE_FLOOR.ln()
    } else {
        a.ln()
    }
}

fn burn<R: Rng + ?Sized>(
    m: &IterativeMap,
    x0: f64,
    burn_in: usize,
    rng: &mut R,
) -> Result<f64, DynamicsError> {
    if !x0.is_finite() {
        return Err(DynamicsError::NonFiniteStart(x0));
    }
    let mut x = x0;
    for step in 1..=burn_in {
        x = m.branches[m.choose(rng)].map.apply(x);
        if !x.is_finite() {
            return Err(DynamicsError::Diverged { step });
        }
    }
    Ok(x)
}

/// Derivative-method estimate `λ = (1/n) Σ ln|f'(x_t)|` over `steps` steps
/// taken after `burn_in` discarded ones, using the realized branch at each
/// step.
pub fn divergence_rate<R: Rng + ?Sized>(
    m: &IterativeMap,
    x0: f64,
    steps: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<LyapunovEstimate, DynamicsError> {
    if steps == 0 {
        return Err(DynamicsError::ZeroSteps);
    }
    let mut x = burn(m, x0, burn_in, rng)?;
    let mut sum = 0.0;
    let mut floored = Vec::new();
    for step in 0..steps {
        let f = m.branches[m.choose(rng)].map;
        sum += log_stretch(f.derivative(x), step, &mut floored);
        x = f.apply(x);
        if !x.is_finite() {
            return Err(DynamicsError::Diverged {
                step: burn_in + step + 1,
            });
        }
    }
    Ok(LyapunovEstimate {
        exponent: sum / steps as f64,
        steps,
        floored_steps: floored,
    })
}

/// Two-trajectory estimate: a companion started `separation` away follows
/// the same branches, the log growth of the gap is accumulated, and the gap
/// is renormalized back to `separation` after every step.
pub fn divergence_rate_two_trajectory<R: Rng + ?Sized>(
    m: &IterativeMap,
    x0: f64,
    steps: usize,
    burn_in: usize,
    separation: f64,
    rng: &mut R,
) -> Result<LyapunovEstimate, DynamicsError> {
    if steps == 0 {
        return Err(DynamicsError::ZeroSteps);
    }
    if !(separation.is_finite() && separation > 0.0) {
        return Err(DynamicsError::InvalidSeparation(separation));
    }
    let mut x = burn(m, x0, burn_in, rng)?;
    let mut y = x + separation;
    let mut sum = 0.0;
    let mut floored = Vec::new();
    for step in 0..steps {
        let f = m.branches[m.choose(rng)].map;
        let (fx, fy) = (f.apply(x), f.apply(y));
        if !fx.is_finite() || !fy.is_finite() {
            return Err(DynamicsError::Diverged {
                step: burn_in + step + 1,
            });
        }
        let gap = fy - fx;
        sum += log_stretch(gap / separation, step, &mut floored);
        x = fx;
        y = if gap < 0.0 {
            fx - separation
        } else {
            fx + separation
        };
    }
    Ok(LyapunovEstimate {
        exponent: sum / steps as f64,
        steps,
        floored_steps: floored,
    })
}

/// Logistic-map exponent for each `r` in `from, from+step, ..., ≤ to`.
pub fn sweep_logistic(
    from: f64,
    to: f64,
    step: f64,
    x0: f64,
    steps: usize,
    burn_in: usize,
) -> Result<Vec<(f64, f64)>, DynamicsError> {
    if !(from.is_finite() && to.is_finite() && step.is_finite() && step > 0.0 && to >= from) {
        return Err(DynamicsError::InvalidSweep { from, to, step });
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    // Deterministic maps ignore the stream.
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    (0..count)
        .map(|i| {
            let r = from + i as f64 * step;
            divergence_rate(&IterativeMap::logistic(r), x0, steps, burn_in, &mut rng)
                .map(|e| (r, e.exponent))
        })
        .collect()
}
