//! Membership engines for the symbolic automaton, abstract runs, and the
//! inductively defined register predicates.

use std::collections::{BTreeSet, HashSet};

use crate::atom::{fresh_atoms, DataWord, Name};
use crate::equation::{induced_abstraction, is_consistent, Equation, EquationSet};
use crate::nofa::{Nofa, Semantics};

/// Membership in the language of an automaton or formula.
pub trait Acceptor {
    fn accepts(&self, word: &DataWord) -> bool;
}

impl Acceptor for Nofa {
    fn accepts(&self, word: &DataWord) -> bool {
        match self.semantics {
            Semantics::Exact => self.exact_accepts(word),
            Semantics::Consistency => self.closure_accepts(word),
        }
    }
}

/// A run at the abstract level: control states `j_0..j_n` and the equation
/// sets `E_1..E_n` of the transitions taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbstractRun {
    pub controls: Vec<String>,
    pub steps: Vec<EquationSet>,
}

impl AbstractRun {
    /// Checks that the run starts in an initial state and that every step
    /// is one of the automaton's transitions.
    pub fn validate(&self, aut: &Nofa) -> Result<(), String> {
        if self.controls.len() != self.steps.len() + 1 {
            return Err("control sequence must be one longer than the step sequence".into());
        }
        let first = &self.controls[0];
        if !aut.initial.contains(first) {
            return Err(format!("run starts in non-initial state `{first}`"));
        }
        for (r, eqs) in self.steps.iter().enumerate() {
            let (src, dst) = (&self.controls[r], &self.controls[r + 1]);
            let found = aut
                .transitions_from(src)
                .any(|t| t.dst == *dst && t.eqs == *eqs);
            if !found {
                return Err(format!("step {}: no transition {src} -> {dst} {eqs}", r + 1));
            }
        }
        Ok(())
    }

    pub fn is_accepting(&self, aut: &Nofa) -> bool {
        self.controls.last().is_some_and(|j| aut.accepting.contains(j))
    }
}

/// The predicate `holds(i, k, r)`: after `r` steps of an abstract run,
/// register `k` is forced to carry the `i`-th input letter.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PredicateTable {
    pub holds: BTreeSet<(usize, usize, usize)>,
}

impl PredicateTable {
    pub fn contains(&self, i: usize, k: usize, r: usize) -> bool {
        self.holds.contains(&(i, k, r))
    }
}

/// The least predicate table of an abstract run, closed under the two
/// clauses: `.=k` in `E_i` forces `(i, k, i)`, and `k=k'` in `E_{r+1}`
/// propagates `(i, k, r)` to `(i, k', r+1)`.
pub fn run_predicates(run: &AbstractRun) -> PredicateTable {
    let n = run.steps.len();
    let mut holds = BTreeSet::new();
    // Propagation only moves forward one position at a time, so a single
    // left-to-right pass reaches the fixpoint.
    for r in 1..=n {
        let eqs = &run.steps[r - 1];
        if let Some(k) = eqs.in_reg() {
            holds.insert((r, k, r));
        }
        if r < n {
            let next = &run.steps[r];
            let carried: Vec<(usize, usize, usize)> = holds
                .iter()
                .filter(|&&(_, _, at)| at == r)
                .flat_map(|&(i, k, _)| {
                    next.reg_reg()
                        .filter(move |&(src, _)| src == k)
                        .map(move |(_, kb)| (i, kb, r + 1))
                })
                .collect();
            holds.extend(carried);
        }
    }
    PredicateTable { holds }
}

/// All register words of length `m` over `universe` with repetition allowed.
pub(crate) fn value_tuples(universe: &[Name], m: usize) -> Vec<Vec<Name>> {
    let mut out: Vec<Vec<Name>> = vec![Vec::new()];
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

/// All register words of length `m` over `universe` with pairwise distinct
/// entries.
pub(crate) fn distinct_tuples(universe: &[Name], m: usize) -> Vec<Vec<Name>> {
    let mut out: Vec<Vec<Name>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for t in &out {
            for &v in universe {
                if !t.contains(&v) {
                    let mut t2 = t.clone();
                    t2.push(v);
                    next.push(t2);
                }
            }
        }
        out = next;
    }
    out
}

/// Renames atoms outside `fixed` to the least pool atoms in first-occurrence
/// order, so that configurations equal up to a permutation of spare atoms
/// collapse to one representative.
pub(crate) fn canonize_spares(q: &[Name], fixed: &BTreeSet<Name>, pool: &[Name]) -> Vec<Name> {
    let mut assigned: Vec<(Name, Name)> = Vec::new();
    q.iter()
        .map(|&v| {
            if fixed.contains(&v) {
                v
            } else if let Some(&(_, c)) = assigned.iter().find(|&&(orig, _)| orig == v) {
                c
            } else {
                let c = pool[assigned.len()];
                assigned.push((v, c));
                c
            }
        })
        .collect()
}

impl Nofa {
    /// Exact-pattern membership with the default fresh pool of `2m` atoms.
    pub fn exact_accepts(&self, word: &DataWord) -> bool {
        self.exact_accepts_with_pool(word, 2 * self.registers)
    }

    /// Exact-pattern membership: searches for an accepting run whose
    /// distinct register values are drawn from the word's atoms plus
    /// `pool_size` fresh ones, canonicalizing spare atoms after every step.
    /// A step relates two configurations with at most `2m` live spare
    /// atoms, so the default pool is always sufficient.
    pub fn exact_accepts_with_pool(&self, word: &DataWord, pool_size: usize) -> bool {
        let m = self.registers;
        let word_names = word.names();
        let pool = fresh_atoms(&word_names, pool_size);
        let universe: Vec<Name> = word_names.iter().copied().chain(pool.iter().copied()).collect();

        let mut configs: HashSet<(String, Vec<Name>)> = HashSet::new();
        for j in &self.initial {
            for q in distinct_tuples(&universe, m) {
                configs.insert((j.clone(), canonize_spares(&q, &word_names, &pool)));
            }
        }
        for &b in word.letters() {
            let mut next = HashSet::new();
            for (j, q) in &configs {
                for t in self.transitions_from(j) {
                    // The before side must match exactly: q_k = b iff k=. is listed.
                    let before_ok = q
                        .iter()
                        .enumerate()
                        .all(|(idx, &v)| (v == b) == t.eqs.contains(&Equation::RegIn(idx + 1)));
                    if !before_ok {
                        continue;
                    }
                    for q2 in distinct_tuples(&universe, m) {
                        if induced_abstraction(q, b, &q2).expect("distinct by construction") == t.eqs {
                            next.insert((t.dst.clone(), canonize_spares(&q2, &word_names, &pool)));
                        }
                    }
                }
            }
            configs = next;
            if configs.is_empty() {
                return false;
            }
        }
        configs.iter().any(|(j, _)| self.accepting.contains(j))
    }

    /// Membership in the positive closure, decided through accepting
    /// abstract runs: a run is admissible if whenever a step reads a
    /// register (`k=.`) whose content is forced to equal some earlier input
    /// letter, the current letter equals it. The search tracks, per
    /// register, the set of earlier letters forced into it.
    pub fn closure_accepts(&self, word: &DataWord) -> bool {
        let m = self.registers;
        type Layer = HashSet<(String, Vec<BTreeSet<Name>>)>;
        let mut layer: Layer = self
            .initial
            .iter()
            .map(|j| (j.clone(), vec![BTreeSet::new(); m]))
            .collect();
        for &b in word.letters() {
            let mut next: Layer = HashSet::new();
            for (j, forced) in &layer {
                'transition: for t in self.transitions_from(j) {
                    for eq in t.eqs.iter() {
                        if let Equation::RegIn(k) = eq {
                            if forced[k - 1].iter().any(|&v| v != b) {
                                continue 'transition;
                            }
                        }
                    }
                    let mut after = vec![BTreeSet::new(); m];
                    if let Some(kb) = t.eqs.in_reg() {
                        after[kb - 1].insert(b);
                    }
                    for (k, kb) in t.eqs.reg_reg() {
                        after[kb - 1].extend(forced[k - 1].iter().copied());
                    }
                    next.insert((t.dst.clone(), after));
                }
            }
            layer = next;
            if layer.is_empty() {
                return false;
            }
        }
        layer.iter().any(|(j, _)| self.accepting.contains(j))
    }

    /// Membership in the positive closure by direct simulation: register
    /// words over the word's atoms plus a spare pool, with repetition, and
    /// steps that merely satisfy some transition's equations. Serves as an
    /// independent cross-check of [`Nofa::closure_accepts`].
    pub fn closure_accepts_concrete(&self, word: &DataWord) -> bool {
        let m = self.registers;
        let word_names = word.names();
        let pool = fresh_atoms(&word_names, 2 * m);
        let universe: Vec<Name> = word_names.iter().copied().chain(pool).collect();

        let mut configs: HashSet<(String, Vec<Name>)> = HashSet::new();
        for j in &self.initial {
            for q in value_tuples(&universe, m) {
                configs.insert((j.clone(), q));
            }
        }
        for &b in word.letters() {
            let mut next = HashSet::new();
            for (j, q) in &configs {
                for t in self.transitions_from(j) {
                    for q2 in value_tuples(&universe, m) {
                        if is_consistent(q, b, &q2, &t.eqs) {
                            next.insert((t.dst.clone(), q2));
                        }
                    }
                }
            }
            configs = next;
            if configs.is_empty() {
                return false;
            }
        }
        configs.iter().any(|(j, _)| self.accepting.contains(j))
    }
}

/// All words over `atoms` of length at most `max_len`, in
/// length-lexicographic order (lexicographic per the order of `atoms`).
pub fn words_up_to(atoms: &[Name], max_len: usize) -> Vec<DataWord> {
    let mut out = vec![DataWord::empty()];
    let mut layer: Vec<Vec<Name>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * atoms.len());
        for w in &layer {
            for &a in atoms {
                let mut w2 = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned().map(DataWord::new));
        layer = next;
    }
    out
}

/// The accepted words over `atoms` of length at most `max_len`, in
/// length-lexicographic order.
pub fn sample_language<A: Acceptor + ?Sized>(aut: &A, atoms: &[Name], max_len: usize) -> Vec<DataWord> {
    words_up_to(atoms, max_len)
        .into_iter()
        .filter(|w| aut.accepts(w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::Equation::*;
    use crate::fixtures;

    fn word(letters: &[u32]) -> DataWord {
        DataWord::new(letters.iter().map(|&i| Name(i)).collect())
    }

    #[test]
    fn distinct_pair_exact_membership() {
        let d = fixtures::distinct_pair();
        assert!(d.exact_accepts(&word(&[0, 1])));
        assert!(!d.exact_accepts(&word(&[0, 0])));
        assert!(!d.exact_accepts(&word(&[0])));
    }

    #[test]
    fn distinct_pair_closure_membership() {
        let d = fixtures::distinct_pair();
        assert!(d.closure_accepts(&word(&[0, 0])));
        assert!(d.closure_accepts(&word(&[0, 1])));
        assert!(d.closure_accepts_concrete(&word(&[0, 0])));
    }

    #[test]
    fn l1_closure_membership() {
        let l1 = fixtures::l1();
        assert!(!l1.closure_accepts(&word(&[0, 1])));
        assert!(l1.closure_accepts(&word(&[0, 1, 0])));
        assert!(l1.closure_accepts_concrete(&word(&[0, 1, 0])));
        assert!(!l1.closure_accepts_concrete(&word(&[0, 1])));
    }

    #[test]
    fn l1_exact_is_some_letter_twice() {
        let l1 = fixtures::l1();
        for w in words_up_to(&crate::atom::initial_atoms(3), 4) {
            let repeat = (0..w.len()).any(|i| (i + 1..w.len()).any(|j| w.0[i] == w.0[j]));
            assert_eq!(l1.exact_accepts(&w), repeat, "word {w}");
        }
    }

    #[test]
    fn empty_word_needs_initial_accepting_overlap() {
        let d = fixtures::distinct_pair();
        assert!(!d.closure_accepts_concrete(&DataWord::empty()));
        let mut accepts_empty = fixtures::distinct_pair();
        accepts_empty.accepting.insert("s0".into());
        assert!(accepts_empty.closure_accepts_concrete(&DataWord::empty()));
        assert!(accepts_empty.closure_accepts(&DataWord::empty()));
        assert!(accepts_empty.exact_accepts(&DataWord::empty()));
    }

    #[test]
    fn predicates_of_store_then_keep() {
        let run = AbstractRun {
            controls: vec!["a".into(), "b".into(), "c".into()],
            steps: vec![EquationSet::new([InReg(1)]), EquationSet::new([RegReg(1, 1)])],
        };
        let table = run_predicates(&run);
        assert_eq!(table.holds, [(1, 1, 1), (1, 1, 2)].into_iter().collect());
    }

    #[test]
    fn predicates_follow_register_moves() {
        let run = AbstractRun {
            controls: vec!["a".into(), "b".into(), "c".into()],
            steps: vec![EquationSet::new([InReg(2)]), EquationSet::new([RegReg(2, 1)])],
        };
        let table = run_predicates(&run);
        assert_eq!(table.holds, [(1, 2, 1), (1, 1, 2)].into_iter().collect());
    }

    #[test]
    fn predicates_of_unconstrained_run_are_empty() {
        let run = AbstractRun {
            controls: vec!["a".into(), "b".into(), "c".into()],
            steps: vec![EquationSet::empty(), EquationSet::empty()],
        };
        assert!(run_predicates(&run).holds.is_empty());
    }

    #[test]
    fn abstract_run_validation() {
        let l1 = fixtures::l1();
        let run = AbstractRun {
            controls: vec!["s".into(), "h".into()],
            steps: vec![EquationSet::new([InReg(1)])],
        };
        assert_eq!(run.validate(&l1), Ok(()));
        assert!(!run.is_accepting(&l1));
        let bad = AbstractRun {
            controls: vec!["h".into(), "h".into()],
            steps: vec![EquationSet::new([RegReg(1, 1)])],
        };
        assert!(bad.validate(&l1).is_err());
    }

    #[test]
    fn sampling_distinct_pair() {
        let d = fixtures::distinct_pair();
        let atoms = crate::atom::initial_atoms(2);
        let accepted = sample_language(&d, &atoms, 2);
        assert_eq!(accepted, vec![word(&[0, 1]), word(&[1, 0])]);
        let mut closed = d.clone();
        closed.semantics = Semantics::Consistency;
        let accepted = sample_language(&closed, &atoms, 2);
        assert_eq!(
            accepted,
            vec![word(&[0, 0]), word(&[0, 1]), word(&[1, 0]), word(&[1, 1])]
        );
    }
}
