//! Finite-state unification-based automata: registers start empty, every
//! transition unifies the input with one register and guards a set of
//! registers to be empty.

use std::collections::{BTreeSet, HashSet};

use crate::atom::{DataWord, Name};
use crate::semantics::Acceptor;

/// A transition `src -reg,{empty}-> dst`: the input must agree with
/// register `reg` (empty registers unify with anything), every register in
/// `empty` must be empty, and the input is stored in `reg` unless that
/// register is itself guarded empty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FsubaTransition {
    pub src: String,
    pub reg: usize,
    pub empty: BTreeSet<usize>,
    pub dst: String,
}

/// A finite-state unification-based automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fsuba {
    pub states: BTreeSet<String>,
    pub registers: usize,
    pub transitions: BTreeSet<FsubaTransition>,
    pub initial: String,
    pub accepting: BTreeSet<String>,
}

/// A configuration: a control state and a partial register assignment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FsubaConfiguration {
    pub state: String,
    pub registers: Vec<Option<Name>>,
}

impl Fsuba {
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut errors = Vec::new();
        let check_state = |s: &String, role: &str, errors: &mut Vec<String>| {
            if !self.states.contains(s) {
                errors.push(format!("unknown state `{s}` in {role}"));
            }
        };
        check_state(&self.initial, "initial state", &mut errors);
        for s in &self.accepting {
            check_state(s, "final set", &mut errors);
        }
        for t in &self.transitions {
            check_state(&t.src, "transition source", &mut errors);
            check_state(&t.dst, "transition target", &mut errors);
            if t.reg < 1 || t.reg > self.registers {
                errors.push(format!(
                    "transition from `{}`: register index {} out of range (registers: {})",
                    t.src, t.reg, self.registers
                ));
            }
            for &j in &t.empty {
                if j < 1 || j > self.registers {
                    errors.push(format!(
                        "transition from `{}`: emptiness guard index {j} out of range (registers: {})",
                        t.src, self.registers
                    ));
                }
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    fn step(&self, config: &FsubaConfiguration, t: &FsubaTransition, input: Name) -> Option<FsubaConfiguration> {
        let regs = &config.registers;
        if regs[t.reg - 1].is_some_and(|v| v != input) {
            return None;
        }
        if t.empty.iter().any(|&j| regs[j - 1].is_some()) {
            return None;
        }
        let mut after = regs.clone();
        // Guarded-empty registers stay empty; everything else is preserved,
        // so a run never erases a stored value.
        if !t.empty.contains(&t.reg) {
            after[t.reg - 1] = Some(input);
        }
        Some(FsubaConfiguration { state: t.dst.clone(), registers: after })
    }

    /// The configurations reachable after each prefix of `word`.
    pub fn reachable_configurations(&self, word: &DataWord) -> Vec<BTreeSet<FsubaConfiguration>> {
        let initial = FsubaConfiguration {
            state: self.initial.clone(),
            registers: vec![None; self.registers],
        };
        let mut layers = Vec::with_capacity(word.len() + 1);
        let mut layer: BTreeSet<FsubaConfiguration> = [initial].into_iter().collect();
        layers.push(layer.clone());
        for &b in word.letters() {
            let mut next = BTreeSet::new();
            for config in &layer {
                for t in self.transitions.iter().filter(|t| t.src == config.state) {
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

impl Acceptor for Fsuba {
    fn accepts(&self, word: &DataWord) -> bool {
        let mut layer: HashSet<FsubaConfiguration> = [FsubaConfiguration {
            state: self.initial.clone(),
            registers: vec![None; self.registers],
        }]
        .into_iter()
        .collect();
        for &b in word.letters() {
            let mut next = HashSet::new();
            for config in &layer {
                for t in self.transitions.iter().filter(|t| t.src == config.state) {
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
        layer.iter().any(|c| self.accepting.contains(&c.state))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn word(letters: &[u32]) -> DataWord {
        DataWord::new(letters.iter().map(|&i| Name(i)).collect())
    }

    #[test]
    fn some_repeat_fixture_membership() {
        let f = fixtures::fsuba_some_repeat();
        assert_eq!(f.validate(), Ok(()));
        assert!(f.accepts(&word(&[0, 0])));
        assert!(!f.accepts(&word(&[0, 1])));
        assert!(f.accepts(&word(&[0, 1, 0])));
    }

    #[test]
    fn register_values_come_from_the_input_prefix() {
        let f = fixtures::fsuba_some_repeat();
        let w = word(&[0, 1, 0, 2]);
        for (prefix_len, layer) in f.reachable_configurations(&w).iter().enumerate() {
            let seen: BTreeSet<Name> = w.letters()[..prefix_len].iter().copied().collect();
            for config in layer {
                for v in config.registers.iter().flatten() {
                    assert!(seen.contains(v));
                }
            }
        }
    }

    #[test]
    fn out_of_range_register_is_rejected() {
        let mut f = fixtures::fsuba_some_repeat();
        f.registers = 1;
        assert!(f.validate().is_err());
    }
}
