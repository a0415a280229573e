//! Register automata: finite control with boolean guard formulas over
//! equality atoms relating the registers before a step, the input letter,
//! and the registers after the step.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::atom::{fresh_atoms, DataWord, Name};
use crate::semantics::Acceptor;

/// An operand of a guard atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GuardTerm {
    /// `(k,b)` — register `k` before the step.
    Before(usize),
    /// `.` — the input letter.
    Input,
    /// `(k,a)` — register `k` after the step.
    After(usize),
}

impl fmt::Display for GuardTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardTerm::Before(k) => write!(f, "({k},b)"),
            GuardTerm::Input => write!(f, "."),
            GuardTerm::After(k) => write!(f, "({k},a)"),
        }
    }
}

/// A boolean guard formula. An equality atom holds iff both operands are
/// defined and equal; in particular a register holding no value satisfies
/// no atom, not even equality with itself.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Guard {
    True,
    Eq(GuardTerm, GuardTerm),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Guard {
    pub fn and(lhs: Guard, rhs: Guard) -> Guard {
        Guard::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Guard, rhs: Guard) -> Guard {
        Guard::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn negate(inner: Guard) -> Guard {
        Guard::Not(Box::new(inner))
    }

    /// Whether the guard avoids negation entirely.
    pub fn is_positive(&self) -> bool {
        match self {
            Guard::True | Guard::Eq(..) => true,
            Guard::Not(_) => false,
            Guard::And(l, r) | Guard::Or(l, r) => l.is_positive() && r.is_positive(),
        }
    }

    pub fn eval(&self, before: &[Option<Name>], input: Name, after: &[Option<Name>]) -> bool {
        let value = |term: &GuardTerm| match *term {
            GuardTerm::Before(k) => before[k - 1],
            GuardTerm::Input => Some(input),
            GuardTerm::After(k) => after[k - 1],
        };
        match self {
            Guard::True => true,
            Guard::Eq(x, y) => match (value(x), value(y)) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
            Guard::Not(g) => !g.eval(before, input, after),
            Guard::And(l, r) => l.eval(before, input, after) && r.eval(before, input, after),
            Guard::Or(l, r) => l.eval(before, input, after) || r.eval(before, input, after),
        }
    }

    fn check_indices(&self, m: usize, errors: &mut Vec<String>) {
        let check_term = |t: &GuardTerm, errors: &mut Vec<String>| {
            let k = match *t {
                GuardTerm::Before(k) | GuardTerm::After(k) => k,
                GuardTerm::Input => return,
            };
            if k < 1 || k > m {
                errors.push(format!("guard operand {t}: register index out of range (registers: {m})"));
            }
        };
        match self {
            Guard::True => {}
            Guard::Eq(x, y) => {
                check_term(x, errors);
                check_term(y, errors);
            }
            Guard::Not(g) => g.check_indices(m, errors),
            Guard::And(l, r) | Guard::Or(l, r) => {
                l.check_indices(m, errors);
                r.check_indices(m, errors);
            }
        }
    }
}

/// A guarded transition `src -> dst [guard]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegTransition {
    pub src: String,
    pub dst: String,
    pub guard: Guard,
}

/// A register automaton. It is *positive* when no guard contains negation;
/// see [`RegisterAutomaton::is_positive`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterAutomaton {
    pub states: BTreeSet<String>,
    pub registers: usize,
    pub transitions: BTreeSet<RegTransition>,
    pub initial: BTreeSet<String>,
    pub accepting: BTreeSet<String>,
}

impl RegisterAutomaton {
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
            t.guard.check_indices(self.registers, &mut errors);
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(errors)
        }
    }

    pub fn is_positive(&self) -> bool {
        self.transitions.iter().all(|t| t.guard.is_positive())
    }

    /// Membership with the default fresh pool of `2m` atoms.
    pub fn accepts_with_default_pool(&self, word: &DataWord) -> bool {
        self.accepts_with_pool(word, 2 * self.registers)
    }

    /// Membership by configuration search: register assignments over the
    /// word's atoms, `pool_size` fresh atoms, and the undefined value, with
    /// spare atoms canonicalized after every step.
    pub fn accepts_with_pool(&self, word: &DataWord, pool_size: usize) -> bool {
        let m = self.registers;
        let word_names = word.names();
        let pool = fresh_atoms(&word_names, pool_size);
        let mut universe: Vec<Option<Name>> = vec![None];
        universe.extend(word_names.iter().copied().map(Some));
        universe.extend(pool.iter().copied().map(Some));

        let canonize = |regs: &[Option<Name>]| -> Vec<Option<Name>> {
            let mut assigned: Vec<(Name, Name)> = Vec::new();
            regs.iter()
                .map(|slot| {
                    slot.map(|v| {
                        if word_names.contains(&v) {
                            v
                        } else if let Some(&(_, c)) = assigned.iter().find(|&&(orig, _)| orig == v) {
                            c
                        } else {
                            let c = pool[assigned.len()];
                            assigned.push((v, c));
                            c
                        }
                    })
                })
                .collect()
        };

        let mut configs: HashSet<(String, Vec<Option<Name>>)> = self
            .initial
            .iter()
            .map(|c| (c.clone(), vec![None; m]))
            .collect();
        for &b in word.letters() {
            let mut next = HashSet::new();
            for (c, regs) in &configs {
                for t in self.transitions.iter().filter(|t| t.src == *c) {
                    for after in option_tuples(&universe, m) {
                        if t.guard.eval(regs, b, &after) {
                            next.insert((t.dst.clone(), canonize(&after)));
                        }
                    }
                }
            }
            configs = next;
            if configs.is_empty() {
                return false;
            }
        }
        configs.iter().any(|(c, _)| self.accepting.contains(c))
    }
}

fn option_tuples(universe: &[Option<Name>], m: usize) -> Vec<Vec<Option<Name>>> {
    let mut out: Vec<Vec<Option<Name>>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(out.len() * universe.len());
        for t in &out {
            for &v in universe {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

impl Acceptor for RegisterAutomaton {
    fn accepts(&self, word: &DataWord) -> bool {
        self.accepts_with_default_pool(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(letters: &[u32]) -> DataWord {
        DataWord::new(letters.iter().map(|&i| Name(i)).collect())
    }

    fn states(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn true_guard_accepts_everything() {
        let aut = RegisterAutomaton {
            states: states(&["c"]),
            registers: 1,
            transitions: [RegTransition { src: "c".into(), dst: "c".into(), guard: Guard::True }]
                .into_iter()
                .collect(),
            initial: states(&["c"]),
            accepting: states(&["c"]),
        };
        assert_eq!(aut.validate(), Ok(()));
        assert!(aut.accepts(&word(&[0, 1, 2])));
        assert!(aut.accepts(&DataWord::empty()));
    }

    #[test]
    fn store_then_match() {
        let aut = RegisterAutomaton {
            states: states(&["c0", "c1", "c2"]),
            registers: 1,
            transitions: [
                RegTransition {
                    src: "c0".into(),
                    dst: "c1".into(),
                    guard: Guard::Eq(GuardTerm::Input, GuardTerm::After(1)),
                },
                RegTransition {
                    src: "c1".into(),
                    dst: "c2".into(),
                    guard: Guard::Eq(GuardTerm::Before(1), GuardTerm::Input),
                },
            ]
            .into_iter()
            .collect(),
            initial: states(&["c0"]),
            accepting: states(&["c2"]),
        };
        assert!(aut.accepts(&word(&[0, 0])));
        assert!(!aut.accepts(&word(&[0, 1])));
    }

    #[test]
    fn empty_register_fails_even_self_equality() {
        let guard = Guard::Eq(GuardTerm::Before(1), GuardTerm::Before(1));
        assert!(!guard.eval(&[None], Name(0), &[None]));
        assert!(guard.eval(&[Some(Name(3))], Name(0), &[None]));
    }

    #[test]
    fn out_of_range_guard_index_is_reported() {
        let aut = RegisterAutomaton {
            states: states(&["c"]),
            registers: 1,
            transitions: [RegTransition {
                src: "c".into(),
                dst: "c".into(),
                guard: Guard::Eq(GuardTerm::Before(2), GuardTerm::Input),
            }]
            .into_iter()
            .collect(),
            initial: states(&["c"]),
            accepting: states(&["c"]),
        };
        let errors = aut.validate().unwrap_err();
        assert!(errors.iter().any(|e| e.contains("out of range")), "{errors:?}");
    }

    #[test]
    fn positivity_is_negation_freedom() {
        assert!(Guard::and(Guard::True, Guard::Eq(GuardTerm::Input, GuardTerm::After(1))).is_positive());
        assert!(!Guard::negate(Guard::Eq(GuardTerm::Input, GuardTerm::After(1))).is_positive());
    }
}
