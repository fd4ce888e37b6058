use std::fmt;
use std::str::FromStr;

use crate::grid::Topology;

use super::AutomatonError;

/// Largest neighbor count any supported topology can produce.
const MAX_COUNT: u8 = 8;

/// Outer-totalistic birth/survival rule with an optional number of live colors.
///
/// Counts are stored as bitmasks (`bit n` set means "n live neighbors").
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RuleSet {
    birth: u16,
    survival: u16,
    states: u16,
}

impl RuleSet {
    /// Conway's Life, B3/S23.
    pub const LIFE: RuleSet = RuleSet {
        birth: 1 << 3,
        survival: (1 << 2) | (1 << 3),
        states: 2,
    };

    pub fn new(
        birth: impl IntoIterator<Item = u8>,
        survival: impl IntoIterator<Item = u8>,
        states: u16,
    ) -> Result<Self, AutomatonError> {
        if !(2..=256).contains(&states) {
            return Err(AutomatonError::InvalidRule(format!(
                "state count {states} outside 2..=256"
            )));
        }
        let mask = |counts: &mut dyn Iterator<Item = u8>| -> Result<u16, AutomatonError> {
            let mut m = 0u16;
            for c in counts {
                if c > MAX_COUNT {
                    return Err(AutomatonError::InvalidRule(format!(
                        "neighbor count {c} exceeds {MAX_COUNT}"
                    )));
                }
                m |= 1 << c;
            }
            Ok(m)
        };
        Ok(RuleSet {
            birth: mask(&mut birth.into_iter())?,
            survival: mask(&mut survival.into_iter())?,
            states,
        })
    }

    pub fn with_states(self, states: u16) -> Result<Self, AutomatonError> {
        RuleSet::new(self.birth(), self.survival(), states)
    }

    pub fn birth(&self) -> impl Iterator<Item = u8> + '_ {
        (0..=MAX_COUNT).filter(|&c| self.births_on(c))
    }

    pub fn survival(&self) -> impl Iterator<Item = u8> + '_ {
        (0..=MAX_COUNT).filter(|&c| self.survives_on(c))
    }

    pub fn states(&self) -> u16 {
        self.states
    }

    #[inline]
    pub fn births_on(&self, count: u8) -> bool {
        self.birth & (1 << count) != 0
    }

    #[inline]
    pub fn survives_on(&self, count: u8) -> bool {
        self.survival & (1 << count) != 0
    }

    /// Checks that the rule can run on an unbounded lattice of `topology`.
    pub fn validate_for(&self, topology: Topology) -> Result<(), AutomatonError> {
        if self.births_on(0) {
            return Err(AutomatonError::BirthOnZero);
        }
        let degree = topology.degree() as u8;
        if let Some(count) = self.birth().chain(self.survival()).find(|&c| c > degree) {
            return Err(AutomatonError::CountOutOfRange {
                count,
                degree,
                topology,
            });
        }
        Ok(())
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::LIFE
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("B")?;
        for c in self.birth() {
            write!(f, "{c}")?;
        }
        f.write_str("/S")?;
        for c in self.survival() {
            write!(f, "{c}")?;
        }
        if self.states > 2 {
            write!(f, "/C{}", self.states)?;
        }
        Ok(())
    }
}

fn digits(s: &str, whole: &str) -> Result<Vec<u8>, AutomatonError> {
    s.chars()
        .map(|ch| {
            ch.to_digit(10).map(|d| d as u8).ok_or_else(|| {
                AutomatonError::InvalidRule(format!("bad digit `{ch}` in `{whole}`"))
            })
        })
        .collect()
}

impl FromStr for RuleSet {
    type Err = AutomatonError;

    /// Accepts `B3/S23`, `S23/B3`, the digit-only `23/3` (survival/birth) form,
    /// and an optional `/C<n>` state-count suffix.
    fn from_str(s: &str) -> Result<Self, AutomatonError> {
        let text = s.trim();
        let parts: Vec<&str> = text.split('/').map(str::trim).collect();
        let (mut birth, mut survival, mut states) = (None, None, 2u16);
        let bad = || AutomatonError::InvalidRule(format!("cannot parse rule `{text}`"));

        if parts.len() >= 2
            && parts[..2]
                .iter()
                .all(|p| p.chars().all(|c| c.is_ascii_digit()))
        {
            survival = Some(digits(parts[0], text)?);
            birth = Some(digits(parts[1], text)?);
        } else {
            for p in &parts[..parts.len().min(2)] {
                match p.chars().next() {
                    Some('B' | 'b') if birth.is_none() => birth = Some(digits(&p[1..], text)?),
                    Some('S' | 's') if survival.is_none() => {
                        survival = Some(digits(&p[1..], text)?)
                    }
                    _ => return Err(bad()),
                }
            }
        }
        match parts.len() {
            2 => {}
            3 => {
                let c = parts[2];
                let n = c.strip_prefix(['C', 'c']).unwrap_or(c);
                states = n.parse().map_err(|_| bad())?;
            }
            _ => return Err(bad()),
        }
        RuleSet::new(birth.ok_or_else(bad)?, survival.ok_or_else(bad)?, states)
    }
}
