//! Guess-free automata with register tracking: controls remember which
//! registers hold values determined by earlier steps, and only those
//! registers are ever compared or copied.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::atom::{DataWord, Name};
use crate::equation::{Equation, EquationSet};
use crate::semantics::Acceptor;

/// A control state `(j, S)`: the underlying control label plus the set of
/// registers whose content is determined.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrackedControl {
    pub state: String,
    pub tracked: BTreeSet<usize>,
}

impl TrackedControl {
    pub fn new(state: impl Into<String>, tracked: impl IntoIterator<Item = usize>) -> Self {
        TrackedControl { state: state.into(), tracked: tracked.into_iter().collect() }
    }
}

impl fmt::Display for TrackedControl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let regs: Vec<String> = self.tracked.iter().map(|k| k.to_string()).collect();
        write!(f, "{}@{{{}}}", self.state, regs.join(","))
    }
}

/// A tracked transition; the determined set after the step is the `tracked`
/// component of `dst`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrackedTransition {
    pub src: TrackedControl,
    pub dst: TrackedControl,
    pub eqs: EquationSet,
}

/// A non-guessing automaton in which every reachable register value is the
/// current or some past input letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedNofra {
    pub controls: BTreeSet<TrackedControl>,
    pub registers: usize,
    pub transitions: BTreeSet<TrackedTransition>,
    pub initial: BTreeSet<TrackedControl>,
    pub accepting: BTreeSet<TrackedControl>,
}

/// A configuration: a tracked control plus values for exactly the tracked
/// registers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TrackedConfiguration {
    pub control: TrackedControl,
    pub values: BTreeMap<usize, Name>,
}

impl TrackedNofra {
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut errors = Vec::new();
        let check = |c: &TrackedControl, role: &str, errors: &mut Vec<String>| {
            if !self.controls.contains(c) {
                errors.push(format!("unknown control `{c}` in {role}"));
            }
            if c.tracked.iter().any(|&k| k < 1 || k > self.registers) {
                errors.push(format!("control `{c}` tracks an out-of-range register"));
            }
        };
        for c in &self.initial {
            check(c, "initial set", &mut errors);
            if !c.tracked.is_empty() {
                errors.push(format!("initial control `{c}` must track no registers"));
            }
        }
        for c in &self.accepting {
            check(c, "final set", &mut errors);
        }
        for t in &self.transitions {
            check(&t.src, "transition source", &mut errors);
            check(&t.dst, "transition target", &mut errors);
            for v in t.eqs.validate(self.registers) {
                errors.push(format!("transition {} -> {} {}: {v}", t.src, t.dst, t.eqs));
            }
            let expected = t.eqs.tracked_after(&t.src.tracked);
            if t.dst.tracked != expected {
                errors.push(format!(
                    "transition {} -> {} {}: tracked set after the step must be {{{}}}",
                    t.src,
                    t.dst,
                    t.eqs,
                    expected.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
                ));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    /// Applies one transition to a configuration. The checks cover exactly
    /// the equations whose sources are tracked; writes fill the target's
    /// tracked set. Returns `None` when the configuration does not enable
    /// the transition or lies outside its source domain.
    fn step(
        &self,
        config: &TrackedConfiguration,
        t: &TrackedTransition,
        input: Name,
    ) -> Option<TrackedConfiguration> {
        if config.control != t.src {
            return None;
        }
        for eq in t.eqs.iter() {
            if let Equation::RegIn(k) = eq {
                if t.src.tracked.contains(k) && *config.values.get(k)? != input {
                    return None;
                }
            }
        }
        let mut values = BTreeMap::new();
        for &kb in &t.dst.tracked {
            if t.eqs.contains(&Equation::InReg(kb)) {
                values.insert(kb, input);
            } else {
                let k = t.eqs.reg_reg_source(kb)?;
                values.insert(kb, *config.values.get(&k)?);
            }
        }
        Some(TrackedConfiguration { control: t.dst.clone(), values })
    }

    /// The configurations reachable after each prefix of `word` (index 0 is
    /// the initial layer).
    pub fn reachable_configurations(&self, word: &DataWord) -> Vec<BTreeSet<TrackedConfiguration>> {
        let mut layers = Vec::with_capacity(word.len() + 1);
        let mut layer: BTreeSet<TrackedConfiguration> = self
            .initial
            .iter()
            .map(|c| TrackedConfiguration { control: c.clone(), values: BTreeMap::new() })
            .collect();
        layers.push(layer.clone());
        for &b in word.letters() {
            let mut next = BTreeSet::new();
            for config in &layer {
                for t in self.transitions.iter().filter(|t| t.src == config.control) {
                    if let Some(succ) = self.step(config, t, b) {
                        next.insert(succ);
                    }
                }
            }
            layers.push(next.clone());
            layer = next;
        }
        layers
    }
}

impl Acceptor for TrackedNofra {
    fn accepts(&self, word: &DataWord) -> bool {
        let mut layer: HashSet<TrackedConfiguration> = self
            .initial
            .iter()
            .map(|c| TrackedConfiguration { control: c.clone(), values: BTreeMap::new() })
            .collect();
        for &b in word.letters() {
            let mut next = HashSet::new();
            for config in &layer {
                for t in self.transitions.iter().filter(|t| t.src == config.control) {
                    if let Some(succ) = self.step(config, t, b) {
                        next.insert(succ);
                    }
                }
            }
            layer = next;
            if layer.is_empty() {
                return false;
            }
        }
        layer.iter().any(|c| self.accepting.contains(&c.control))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transforms::deguess;

    fn word(letters: &[u32]) -> DataWord {
        DataWord::new(letters.iter().map(|&i| Name(i)).collect())
    }

    #[test]
    fn deguessed_chain_accepts_all_two_letter_words() {
        let tracked = deguess(&fixtures::guess_chain());
        assert_eq!(tracked.validate(), Ok(()));
        assert!(tracked.accepts(&word(&[0, 1])));
        assert!(tracked.accepts(&word(&[0, 0])));
        assert!(!tracked.accepts(&word(&[0])));
    }

    #[test]
    fn deguessed_l1_matches_closure_membership() {
        let tracked = deguess(&fixtures::l1());
        assert!(tracked.accepts(&word(&[0, 1, 0])));
        assert!(!tracked.accepts(&word(&[0, 1])));
    }

    #[test]
    fn reachable_values_are_past_letters() {
        let tracked = deguess(&fixtures::l1());
        let w = word(&[0, 1, 1, 2]);
        for (prefix_len, layer) in tracked.reachable_configurations(&w).iter().enumerate() {
            let seen: BTreeSet<Name> = w.letters()[..prefix_len].iter().copied().collect();
            for config in layer {
                for v in config.values.values() {
                    assert!(seen.contains(v), "value {v} not among the first {prefix_len} letters");
                }
            }
        }
    }
}
