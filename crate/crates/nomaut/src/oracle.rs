//! Brute-force reference implementations: exhaustive run enumeration,
//! the positive-closure oracle via position partitions, bounded language
//! comparison, and bounded positivity checking.
//!
//! Everything here trades speed for being manifestly correct; the engines
//! in the rest of the crate are tested against this module.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::atom::{fresh_atoms, DataWord, Name};
use crate::equation::{induced_abstraction, is_consistent};
use crate::fsuba::Fsuba;
use crate::nofa::{Nofa, Semantics};
use crate::regaut::RegisterAutomaton;
use crate::semantics::{distinct_tuples, value_tuples, words_up_to, Acceptor};
use crate::tracked::TrackedNofra;

/// A finite map on atoms, applied as the identity outside its domain.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Renaming(pub BTreeMap<Name, Name>);

impl Renaming {
    pub fn new<I: IntoIterator<Item = (Name, Name)>>(pairs: I) -> Self {
        Renaming(pairs.into_iter().collect())
    }

    pub fn apply(&self, name: Name) -> Name {
        self.0.get(&name).copied().unwrap_or(name)
    }

    pub fn apply_word(&self, word: &DataWord) -> DataWord {
        word.letters().iter().map(|&n| self.apply(n)).collect()
    }
}

impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (from, to) in &self.0 {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{from}->{to}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

/// Exhaustive run search for a symbolic automaton, with configuration
/// values drawn from the word's atoms plus `pool` fresh ones and no
/// canonicalization. The semantics tag selects exact-pattern or consistency
/// steps. More pool atoms can only add runs, so the result is monotone in
/// `pool`.
pub fn nofa_runs_membership(aut: &Nofa, word: &DataWord, pool: usize) -> bool {
    let m = aut.registers;
    let word_names = word.names();
    let universe: Vec<Name> = word_names
        .iter()
        .copied()
        .chain(fresh_atoms(&word_names, pool))
        .collect();
    let registers = match aut.semantics {
        Semantics::Exact => distinct_tuples(&universe, m),
        Semantics::Consistency => value_tuples(&universe, m),
    };

    let mut configs: HashSet<(String, Vec<Name>)> = HashSet::new();
    for j in &aut.initial {
        for q in &registers {
            configs.insert((j.clone(), q.clone()));
        }
    }
    for &b in word.letters() {
        let mut next = HashSet::new();
        for (j, q) in &configs {
            for t in aut.transitions_from(j) {
                for q2 in &registers {
                    let enabled = match aut.semantics {
                        Semantics::Exact => {
                            induced_abstraction(q, b, q2).expect("distinct by construction") == t.eqs
                        }
                        Semantics::Consistency => is_consistent(q, b, q2, &t.eqs),
                    };
                    if enabled {
                        next.insert((t.dst.clone(), q2.clone()));
                    }
                }
            }
        }
        configs = next;
        if configs.is_empty() {
            return false;
        }
    }
    configs.iter().any(|(j, _)| aut.accepting.contains(j))
}

/// Exhaustive configuration search for a register automaton with `pool`
/// fresh atoms and no canonicalization.
pub fn regaut_runs_membership(aut: &RegisterAutomaton, word: &DataWord, pool: usize) -> bool {
    let m = aut.registers;
    let word_names = word.names();
    let mut universe: Vec<Option<Name>> = vec![None];
    universe.extend(word_names.iter().copied().map(Some));
    universe.extend(fresh_atoms(&word_names, pool).into_iter().map(Some));

    let mut assignments: Vec<Vec<Option<Name>>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(assignments.len() * universe.len());
        for t in &assignments {
            for &v in &universe {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        assignments = next;
    }

    let mut configs: HashSet<(String, Vec<Option<Name>>)> = aut
        .initial
        .iter()
        .map(|c| (c.clone(), vec![None; m]))
        .collect();
    for &b in word.letters() {
        let mut next = HashSet::new();
        for (c, regs) in &configs {
            for t in aut.transitions.iter().filter(|t| t.src == *c) {
                for after in &assignments {
                    if t.guard.eval(regs, b, after) {
                        next.insert((t.dst.clone(), after.clone()));
                    }
                }
            }
        }
        configs = next;
        if configs.is_empty() {
            return false;
        }
    }
    configs.iter().any(|(c, _)| aut.accepting.contains(c))
}

/// Exhaustive configuration-graph search for an FSUBA. Register values only
/// ever come from the input, so no fresh pool is involved.
pub fn fsuba_runs_membership(aut: &Fsuba, word: &DataWord) -> bool {
    let layers = aut.reachable_configurations(word);
    layers
        .last()
        .is_some_and(|layer| layer.iter().any(|c| aut.accepting.contains(&c.state)))
}

/// Exhaustive configuration-graph search for a tracked automaton.
pub fn tracked_runs_membership(aut: &TrackedNofra, word: &DataWord) -> bool {
    let layers = aut.reachable_configurations(word);
    layers
        .last()
        .is_some_and(|layer| layer.iter().any(|c| aut.accepting.contains(&c.control)))
}

/// All partitions of `{0..n-1}` as restricted growth strings: entry `i`
/// holds the block index of position `i`, blocks numbered in
/// first-occurrence order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    fn extend(current: &mut Vec<usize>, pos: usize, max_used: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if pos == n {
            out.push(current.clone());
            return;
        }
        for block in 0..=max_used + 1 {
            current[pos] = block;
            extend(current, pos + 1, max_used.max(block), n, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    current[0] = 0;
    extend(&mut current, 1, 0, n, &mut out);
    out
}

/// Membership of `word` in the positive closure of the exact language of
/// `aut`, decided from first principles: the word lies in the closure iff
/// some word with a finer equality pattern is accepted exactly, since a
/// renaming can only merge letters. Partitions of the positions are
/// enumerated as restricted growth strings, each refining partition is
/// realized over fresh atoms, and exact membership of the witness is
/// decided by exhaustive run search.
pub fn closure_oracle(aut: &Nofa, word: &DataWord) -> bool {
    let n = word.len();
    let base = word.names().iter().next_back().map(|x| x.0 + 1).unwrap_or(0);
    let mut exact = aut.clone();
    exact.semantics = Semantics::Exact;
    for partition in partitions(n) {
        // The partition must refine the word's own equality pattern.
        let refines = (0..n).all(|i| {
            (i + 1..n).all(|j| partition[i] != partition[j] || word.0[i] == word.0[j])
        });
        if !refines {
            continue;
        }
        let witness: DataWord = partition.iter().map(|&b| Name(base + b as u32)).collect();
        if nofa_runs_membership(&exact, &witness, 2 * aut.registers) {
            return true;
        }
    }
    false
}

/// Compares two languages on every word over `atoms` of length at most
/// `max_len`; returns the length-lexicographically least disagreement, if
/// any.
pub fn bounded_equiv<A, B>(left: &A, right: &B, atoms: &[Name], max_len: usize) -> Option<DataWord>
where
    A: Acceptor + ?Sized,
    B: Acceptor + ?Sized,
{
    words_up_to(atoms, max_len)
        .into_iter()
        .find(|w| left.accepts(w) != right.accepts(w))
}

/// All functions from `domain` to `range`, in lexicographic order of their
/// value vectors.
fn all_maps(domain: &[Name], range: &[Name]) -> Vec<Renaming> {
    let mut out: Vec<Vec<Name>> = vec![Vec::new()];
    for _ in 0..domain.len() {
        let mut next = Vec::with_capacity(out.len() * range.len());
        for v in &out {
            for &r in range {
                let mut v2 = v.clone();
                v2.push(r);
                next.push(v2);
            }
        }
        out = next;
    }
    out.into_iter()
        .map(|values| Renaming::new(domain.iter().copied().zip(values)))
        .collect()
}

/// Checks that the accepted set is closed under renamings on the bounded
/// word range: for every accepted word and every map from its atoms into
/// `atoms`, the renamed word must be accepted too. Returns the first
/// failing pair.
pub fn bounded_positivity_check<A>(
    aut: &A,
    atoms: &[Name],
    max_len: usize,
) -> Option<(DataWord, Renaming)>
where
    A: Acceptor + ?Sized,
{
    for w in words_up_to(atoms, max_len) {
        if !aut.accepts(&w) {
            continue;
        }
        let names: Vec<Name> = w.names().into_iter().collect();
        for renaming in all_maps(&names, atoms) {
            if !aut.accepts(&renaming.apply_word(&w)) {
                return Some((w, renaming));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::initial_atoms;
    use crate::fixtures;
    use crate::transforms::positive_closure;

    fn word(letters: &[u32]) -> DataWord {
        DataWord::new(letters.iter().map(|&i| Name(i)).collect())
    }

    #[test]
    fn run_enumeration_on_distinct_pair() {
        let d = fixtures::distinct_pair();
        assert!(nofa_runs_membership(&d, &word(&[0, 1]), 2));
        assert!(!nofa_runs_membership(&d, &word(&[0, 0]), 4));
    }

    #[test]
    fn run_enumeration_is_monotone_in_the_pool() {
        let d = fixtures::distinct_pair();
        for w in words_up_to(&initial_atoms(2), 3) {
            for pool in 0..3 {
                if nofa_runs_membership(&d, &w, pool) {
                    assert!(nofa_runs_membership(&d, &w, pool + 1), "word {w}, pool {pool}");
                }
            }
        }
    }

    #[test]
    fn partitions_count_is_the_bell_number() {
        assert_eq!(partitions(0).len(), 1);
        assert_eq!(partitions(3).len(), 5);
        assert_eq!(partitions(4).len(), 15);
        assert_eq!(partitions(6).len(), 203);
    }

    #[test]
    fn closure_oracle_on_the_fixtures() {
        let d = fixtures::distinct_pair();
        assert!(closure_oracle(&d, &word(&[0, 0])));
        assert!(closure_oracle(&d, &word(&[0, 1])));
        assert!(!closure_oracle(&fixtures::l1(), &word(&[0, 1])));
        assert!(closure_oracle(&fixtures::l1(), &word(&[0, 1, 0])));
    }

    #[test]
    fn bounded_equiv_finds_the_least_disagreement() {
        let d = fixtures::distinct_pair();
        let closed = positive_closure(&d);
        assert_eq!(bounded_equiv(&d, &closed, &initial_atoms(2), 2), Some(word(&[0, 0])));
        assert_eq!(bounded_equiv(&d, &d, &initial_atoms(2), 3), None);
    }

    #[test]
    fn positivity_check_accepts_closures_and_rejects_exact_inequality() {
        let d = fixtures::distinct_pair();
        assert_eq!(bounded_positivity_check(&positive_closure(&d), &initial_atoms(2), 3), None);
        let failure = bounded_positivity_check(&d, &initial_atoms(2), 2);
        let (w, renaming) = failure.expect("exact distinct-pair language is not positive");
        assert_eq!(w, word(&[0, 1]));
        assert_eq!(renaming.apply_word(&w), word(&[0, 0]));
    }

    #[test]
    fn fsuba_fixture_positivity() {
        let f = fixtures::fsuba_some_repeat();
        assert_eq!(bounded_positivity_check(&f, &initial_atoms(2), 3), None);
    }
}
