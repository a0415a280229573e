//! Generation of a positive sentence equivalent to the closure language of
//! a symbolic automaton.
//!
//! The sentence asserts the existence of an accepting abstract run: one
//! second-order variable per abstract transition marks the positions where
//! that transition is taken, auxiliary second-order variables reconstruct,
//! per position, which registers are forced to carry which earlier letters,
//! and a final clause requires every forced register comparison to be a
//! genuine data equality.

use crate::equation::Equation;
use crate::logic::MsoFormula;
use crate::nofa::{AbstractTransition, Nofa};

fn less(x: &str, y: &str) -> MsoFormula {
    MsoFormula::Less(x.into(), y.into())
}

fn mem(set: &str, x: &str) -> MsoFormula {
    MsoFormula::Mem(set.into(), x.into())
}

fn implies(premise: MsoFormula, conclusion: MsoFormula) -> MsoFormula {
    MsoFormula::or(MsoFormula::negate(premise), conclusion)
}

/// `x < y` with nothing in between.
fn succ(x: &str, y: &str) -> MsoFormula {
    MsoFormula::and(
        less(x, y),
        MsoFormula::negate(MsoFormula::exists_fo(
            "u",
            MsoFormula::and(less(x, "u"), less("u", y)),
        )),
    )
}

fn first(x: &str) -> MsoFormula {
    MsoFormula::negate(MsoFormula::exists_fo("u", less("u", x)))
}

fn last(x: &str) -> MsoFormula {
    MsoFormula::negate(MsoFormula::exists_fo("u", less(x, "u")))
}

/// A closed formula that holds on every word.
fn tautology() -> MsoFormula {
    MsoFormula::forall_fo("u", MsoFormula::negate(less("u", "u")))
}

/// A closed formula that holds on no word.
fn contradiction() -> MsoFormula {
    MsoFormula::exists_fo("u", less("u", "u"))
}

fn and_all(parts: Vec<MsoFormula>) -> MsoFormula {
    parts.into_iter().reduce(MsoFormula::and).unwrap_or_else(tautology)
}

fn or_all(parts: Vec<MsoFormula>) -> MsoFormula {
    parts.into_iter().reduce(MsoFormula::or).unwrap_or_else(contradiction)
}

/// The run variable name of transition `index`.
fn run_var(index: usize) -> String {
    format!("R{index}")
}

/// The register predicate variables: `E{k}` for the defined predicates and
/// `F{k}` for the fresh copies used in the minimality clause.
fn reg_var(prefix: &str, k: usize) -> String {
    format!("{prefix}{k}")
}

/// The two closure clauses for the register predicate variables named by
/// `prefix`, with `x` the position whose letter is being traced:
/// a store `.=k` at a position marked by transition `t` puts that position
/// into `E_k`, and a copy `k=k'` carries membership one step forward.
fn predicate_clauses(transitions: &[&AbstractTransition], m: usize, prefix: &str) -> Vec<MsoFormula> {
    let mut clauses = Vec::new();
    let mut base = Vec::new();
    for k in 1..=m {
        for (i, t) in transitions.iter().enumerate() {
            if t.eqs.contains(&Equation::InReg(k)) {
                base.push(implies(mem(&run_var(i), "x"), mem(&reg_var(prefix, k), "x")));
            }
        }
    }
    clauses.push(and_all(base));

    let mut step = Vec::new();
    for k in 1..=m {
        for kb in 1..=m {
            for (i, t) in transitions.iter().enumerate() {
                if t.eqs.contains(&Equation::RegReg(k, kb)) {
                    step.push(implies(
                        MsoFormula::and(mem(&run_var(i), "z"), mem(&reg_var(prefix, k), "y")),
                        mem(&reg_var(prefix, kb), "z"),
                    ));
                }
            }
        }
    }
    clauses.push(MsoFormula::forall_fo(
        "y",
        MsoFormula::forall_fo("z", implies(succ("y", "z"), and_all(step))),
    ));
    clauses
}

/// The sentence equivalent to the closure language of `aut`. The result is
/// always in the positive fragment, and its outer second-order quantifiers
/// are in one-to-one correspondence with the abstract transitions.
pub fn automaton_to_mso(aut: &Nofa) -> MsoFormula {
    let transitions: Vec<&AbstractTransition> = aut.transitions.iter().collect();
    let m = aut.registers;

    // Run well-formedness: every position carries exactly one transition
    // marker, consecutive markers chain through a shared control state, and
    // the first/last markers start initial and end accepting.
    let coverage = MsoFormula::forall_fo(
        "x",
        or_all((0..transitions.len()).map(|i| mem(&run_var(i), "x")).collect()),
    );
    let mut disjoint = Vec::new();
    for i in 0..transitions.len() {
        for j in 0..transitions.len() {
            if i != j {
                disjoint.push(MsoFormula::negate(MsoFormula::and(
                    mem(&run_var(i), "x"),
                    mem(&run_var(j), "x"),
                )));
            }
        }
    }
    let disjointness = MsoFormula::forall_fo("x", and_all(disjoint));
    let mut chained = Vec::new();
    for (i, t) in transitions.iter().enumerate() {
        for (j, t2) in transitions.iter().enumerate() {
            if t.dst == t2.src {
                chained.push(MsoFormula::and(mem(&run_var(i), "x"), mem(&run_var(j), "y")));
            }
        }
    }
    let succession = MsoFormula::forall_fo(
        "x",
        MsoFormula::forall_fo("y", implies(succ("x", "y"), or_all(chained))),
    );
    let starts = MsoFormula::forall_fo(
        "x",
        implies(
            first("x"),
            or_all(
                transitions
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| aut.initial.contains(&t.src))
                    .map(|(i, _)| mem(&run_var(i), "x"))
                    .collect(),
            ),
        ),
    );
    let ends = MsoFormula::forall_fo(
        "x",
        implies(
            last("x"),
            or_all(
                transitions
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| aut.accepting.contains(&t.dst))
                    .map(|(i, _)| mem(&run_var(i), "x"))
                    .collect(),
            ),
        ),
    );
    let phi_run = and_all(vec![coverage, disjointness, succession, starts, ends]);

    // The register predicates: closed under the two clauses and minimal
    // with that property, which pins them to the inductive definition.
    let defining = predicate_clauses(&transitions, m, "E");
    let copy_clauses = predicate_clauses(&transitions, m, "F");
    let mut copies_dominate = Vec::new();
    for k in 1..=m {
        copies_dominate.push(MsoFormula::forall_fo(
            "y",
            implies(mem(&reg_var("E", k), "y"), mem(&reg_var("F", k), "y")),
        ));
    }
    let minimality = (1..=m).rev().fold(
        implies(and_all(copy_clauses), and_all(copies_dominate)),
        |body, k| MsoFormula::forall_so(reg_var("F", k), body),
    );
    let phi_aux = and_all(defining.into_iter().chain([minimality]).collect());

    // Whenever a marked transition reads register k and the predicate says
    // position x was forced into k, the letters at x and the reading
    // position must agree.
    let mut reads = Vec::new();
    for k in 1..=m {
        for (i, t) in transitions.iter().enumerate() {
            if t.eqs.contains(&Equation::RegIn(k)) {
                reads.push(implies(
                    MsoFormula::and(mem(&run_var(i), "z"), mem(&reg_var("E", k), "y")),
                    MsoFormula::Sim("x".into(), "z".into()),
                ));
            }
        }
    }
    let phi_eq = MsoFormula::forall_fo(
        "y",
        MsoFormula::forall_fo("z", implies(succ("y", "z"), and_all(reads))),
    );

    let per_position = (1..=m).rev().fold(MsoFormula::and(phi_aux, phi_eq), |body, k| {
        MsoFormula::exists_so(reg_var("E", k), body)
    });
    let mut body = MsoFormula::and(phi_run, MsoFormula::forall_fo("x", per_position));
    // The run encoding is vacuously true on the empty word, so when the
    // automaton rejects the empty word the sentence must demand a position.
    if !aut.accepts_empty() {
        body = MsoFormula::and(body, MsoFormula::exists_fo("x", MsoFormula::negate(less("x", "x"))));
    }
    (0..transitions.len())
        .rev()
        .fold(body, |acc, i| MsoFormula::exists_so(run_var(i), acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::{initial_atoms, DataWord, Name};
    use crate::fixtures;
    use crate::logic::{eval_sentence, is_positive_formula};
    use crate::semantics::words_up_to;

    fn word(letters: &[u32]) -> DataWord {
        DataWord::new(letters.iter().map(|&i| Name(i)).collect())
    }

    #[test]
    fn sentence_agrees_with_closure_membership_on_distinct_pair() {
        let d = fixtures::distinct_pair();
        let sentence = automaton_to_mso(&d);
        assert!(is_positive_formula(&sentence));
        assert!(eval_sentence(&sentence, &word(&[0, 0])).unwrap());
        assert!(eval_sentence(&sentence, &word(&[0, 1])).unwrap());
        assert!(!eval_sentence(&sentence, &word(&[0, 1, 2])).unwrap());
        for w in words_up_to(&initial_atoms(3), 3) {
            assert_eq!(
                eval_sentence(&sentence, &w).unwrap(),
                d.closure_accepts(&w),
                "word {w}"
            );
        }
    }

    #[test]
    fn one_run_variable_per_transition() {
        let sentence = automaton_to_mso(&fixtures::l1());
        let mut count = 0;
        let mut cursor = &sentence;
        loop {
            match cursor {
                MsoFormula::ExistsSo(name, body) if name.starts_with('R') => {
                    count += 1;
                    cursor = body;
                }
                _ => break,
            }
        }
        assert_eq!(count, fixtures::l1().transitions.len());
    }

    #[test]
    fn l1_sentence_is_positive() {
        assert!(is_positive_formula(&automaton_to_mso(&fixtures::l1())));
    }

    #[test]
    fn empty_word_follows_the_automaton() {
        let rejects_empty = automaton_to_mso(&fixtures::guess_chain());
        assert!(!eval_sentence(&rejects_empty, &DataWord::empty()).unwrap());
        let mut aut = fixtures::guess_chain();
        aut.accepting.insert("g0".into());
        let accepts_empty = automaton_to_mso(&aut);
        assert!(eval_sentence(&accepts_empty, &DataWord::empty()).unwrap());
    }
}
