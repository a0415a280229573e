//! The symbolic automaton: finite control states, a register count, and
//! abstract transitions labelled by equation sets.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::equation::EquationSet;

/// How the abstract transitions of a [`Nofa`] are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Semantics {
    /// States carry pairwise distinct register values and a concrete step
    /// must induce its transition's equation set exactly.
    Exact,
    /// Register values may repeat and a concrete step only has to satisfy
    /// the listed equations; this recognizes the positive closure of the
    /// exact language.
    Consistency,
}

/// An abstract transition `src -[eqs]-> dst`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbstractTransition {
    pub src: String,
    pub eqs: EquationSet,
    pub dst: String,
}

impl AbstractTransition {
    pub fn new(src: impl Into<String>, eqs: EquationSet, dst: impl Into<String>) -> Self {
        AbstractTransition { src: src.into(), eqs, dst: dst.into() }
    }
}

// Canonical transition order is (src, dst, eqs); it determines the
// serialized form.
impl Ord for AbstractTransition {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.src, &self.dst, &self.eqs).cmp(&(&other.src, &other.dst, &other.eqs))
    }
}

impl PartialOrd for AbstractTransition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A symbolic automaton over atoms, interpreted per its [`Semantics`] tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nofa {
    pub states: BTreeSet<String>,
    pub registers: usize,
    pub transitions: BTreeSet<AbstractTransition>,
    pub initial: BTreeSet<String>,
    pub accepting: BTreeSet<String>,
    pub semantics: Semantics,
}

impl Nofa {
    /// Builds an automaton whose state set is inferred from the transition
    /// endpoints and the initial/accepting sets.
    pub fn new<S, I, F, T>(registers: usize, semantics: Semantics, transitions: T, initial: I, accepting: F) -> Self
    where
        S: Into<String>,
        T: IntoIterator<Item = AbstractTransition>,
        I: IntoIterator<Item = S>,
        F: IntoIterator<Item = S>,
    {
        let transitions: BTreeSet<AbstractTransition> = transitions.into_iter().collect();
        let initial: BTreeSet<String> = initial.into_iter().map(Into::into).collect();
        let accepting: BTreeSet<String> = accepting.into_iter().map(Into::into).collect();
        let mut states: BTreeSet<String> = initial.iter().cloned().collect();
        states.extend(accepting.iter().cloned());
        for t in &transitions {
            states.insert(t.src.clone());
            states.insert(t.dst.clone());
        }
        Nofa { states, registers, transitions, initial, accepting, semantics }
    }

    /// Checks all structural invariants: state references resolve and every
    /// transition's equation set is well-formed for the register count.
    /// Returns one message per problem; an empty list means valid.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut errors = Vec::new();
        let check_state = |s: &String, role: &str, errors: &mut Vec<String>| {
            if !self.states.contains(s) {
                errors.push(format!("unknown state `{s}` in {role}"));
            }
        };
        for s in &self.initial {
            check_state(s, "initial set", &mut errors);
        }
        for s in &self.accepting {
            check_state(s, "final set", &mut errors);
        }
        for t in &self.transitions {
            check_state(&t.src, "transition source", &mut errors);
            check_state(&t.dst, "transition target", &mut errors);
        }
        for t in &self.transitions {
            for v in t.eqs.validate(self.registers) {
                errors.push(format!("transition {} -> {} {}: {v}", t.src, t.dst, t.eqs));
            }
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    pub fn transitions_from<'a>(&'a self, state: &'a str) -> impl Iterator<Item = &'a AbstractTransition> {
        self.transitions.iter().filter(move |t| t.src == state)
    }

    /// Whether every transition keeps register values at their index
    /// (only diagonal `k=k` copies).
    pub fn is_rigid(&self) -> bool {
        self.transitions.iter().all(|t| t.eqs.is_rigid())
    }

    /// Whether some state is both initial and accepting, i.e. the empty
    /// word is accepted under either semantics.
    pub fn accepts_empty(&self) -> bool {
        self.initial.intersection(&self.accepting).next().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::Equation::*;
    use crate::fixtures;

    #[test]
    fn l1_fixture_validates() {
        assert_eq!(fixtures::l1().validate(), Ok(()));
    }

    #[test]
    fn unknown_state_is_reported() {
        let mut aut = fixtures::l1();
        aut.transitions.insert(AbstractTransition::new("s", EquationSet::empty(), "ghost"));
        let errors = aut.validate().unwrap_err();
        assert!(errors.iter().any(|e| e.contains("unknown state `ghost`")), "{errors:?}");
    }

    #[test]
    fn out_of_range_equation_is_reported() {
        let aut = Nofa::new(
            1,
            Semantics::Exact,
            [AbstractTransition::new("s", EquationSet::new([RegIn(2)]), "f")],
            ["s"],
            ["f"],
        );
        let errors = aut.validate().unwrap_err();
        assert!(errors.iter().any(|e| e.contains("out of range")), "{errors:?}");
    }

    #[test]
    fn zero_registers_forbid_equations() {
        let aut = Nofa::new(
            0,
            Semantics::Exact,
            [AbstractTransition::new("s", EquationSet::new([InReg(1)]), "s")],
            ["s"],
            ["s"],
        );
        assert!(aut.validate().is_err());
    }

    #[test]
    fn transition_order_is_src_dst_eqs() {
        let a = AbstractTransition::new("a", EquationSet::new([RegIn(1)]), "z");
        let b = AbstractTransition::new("a", EquationSet::empty(), "z");
        let c = AbstractTransition::new("a", EquationSet::empty(), "b");
        assert!(c < b && b < a);
    }
}
