//! The construction chain on symbolic automata: positive closure, guess
//! elimination with register tracking, rigidification, extraction of
//! finite-state unification-based automata, and extraction of positive
//! register automata.

use std::collections::{BTreeSet, VecDeque};

use crate::equation::{Equation, EquationSet};
use crate::error::TransformError;
use crate::fsuba::{Fsuba, FsubaTransition};
use crate::nofa::{AbstractTransition, Nofa, Semantics};
use crate::regaut::{Guard, GuardTerm, RegTransition, RegisterAutomaton};
use crate::tracked::{TrackedControl, TrackedNofra, TrackedTransition};

/// The automaton for the positive closure of an exact-semantics automaton:
/// the same abstract transitions read under consistency semantics.
pub fn positive_closure(aut: &Nofa) -> Nofa {
    let mut closed = aut.clone();
    closed.semantics = Semantics::Consistency;
    closed
}

/// Eliminates guessing by tracking, in the control state, the set of
/// registers whose content is determined by the abstract transitions taken
/// so far. Only reachable `(state, tracked)` controls are built.
pub fn deguess(aut: &Nofa) -> TrackedNofra {
    let initial: BTreeSet<TrackedControl> = aut
        .initial
        .iter()
        .map(|j| TrackedControl::new(j.clone(), []))
        .collect();
    let mut controls: BTreeSet<TrackedControl> = initial.clone();
    let mut transitions: BTreeSet<TrackedTransition> = BTreeSet::new();
    let mut queue: VecDeque<TrackedControl> = initial.iter().cloned().collect();
    while let Some(src) = queue.pop_front() {
        for t in aut.transitions_from(&src.state) {
            let after = t.eqs.tracked_after(&src.tracked);
            let dst = TrackedControl { state: t.dst.clone(), tracked: after };
            if controls.insert(dst.clone()) {
                queue.push_back(dst.clone());
            }
            transitions.insert(TrackedTransition { src: src.clone(), dst, eqs: t.eqs.clone() });
        }
    }
    let accepting = controls
        .iter()
        .filter(|c| aut.accepting.contains(&c.state))
        .cloned()
        .collect();
    TrackedNofra { controls, registers: aut.registers, transitions, initial, accepting }
}

fn all_permutations(m: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..m {
        let mut next = Vec::new();
        for p in &out {
            for k in 1..=m {
                if !p.contains(&k) {
                    let mut p2 = p.clone();
                    p2.push(k);
                    next.push(p2);
                }
            }
        }
        out = next;
    }
    out
}

fn perm_state(state: &str, perm: &[usize]) -> String {
    let images: Vec<String> = perm.iter().map(|k| k.to_string()).collect();
    format!("{state}^({})", images.join(","))
}

/// Rigidifies an exact-semantics automaton: the control remembers a
/// permutation of the register indices so that register contents never
/// change their index across a transition. The result has `|J| * m!`
/// control states and only diagonal `k=k` copy equations.
pub fn rigidify(aut: &Nofa) -> Nofa {
    let m = aut.registers;
    let perms = all_permutations(m);
    let identity: Vec<usize> = (1..=m).collect();

    let mut states = BTreeSet::new();
    for j in &aut.states {
        for p in &perms {
            states.insert(perm_state(j, p));
        }
    }
    let initial: BTreeSet<String> = aut.initial.iter().map(|j| perm_state(j, &identity)).collect();
    let accepting: BTreeSet<String> = aut
        .accepting
        .iter()
        .flat_map(|j| perms.iter().map(move |p| perm_state(j, p)))
        .collect();

    let mut transitions = BTreeSet::new();
    for t in &aut.transitions {
        let copies: Vec<(usize, usize)> = t.eqs.reg_reg().collect();
        for before in &perms {
            for after in &perms {
                // A copy k=k' forces the shared value to sit at one index
                // on both sides: before(k) = after(k').
                if copies.iter().any(|&(k, kb)| before[k - 1] != after[kb - 1]) {
                    continue;
                }
                let mut eqs: Vec<Equation> = Vec::new();
                if let Some(k) = t.eqs.reg_in() {
                    eqs.push(Equation::RegIn(before[k - 1]));
                }
                if let Some(kb) = t.eqs.in_reg() {
                    eqs.push(Equation::InReg(after[kb - 1]));
                }
                for &(k, _) in &copies {
                    let at = before[k - 1];
                    eqs.push(Equation::RegReg(at, at));
                }
                transitions.insert(AbstractTransition::new(
                    perm_state(&t.src, before),
                    EquationSet::new(eqs),
                    perm_state(&t.dst, after),
                ));
            }
        }
    }

    Nofa {
        states,
        registers: m,
        transitions,
        initial,
        accepting,
        semantics: aut.semantics,
    }
}

fn set_csv(set: &BTreeSet<usize>) -> String {
    set.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

fn fsuba_state(j: &str, r: &BTreeSet<usize>, s: &BTreeSet<usize>) -> String {
    format!("{j}@{{{}}}@{{{}}}", set_csv(r), set_csv(s))
}

/// One target of an FSUBA move: stored register, emptiness guard, and the
/// successor control data.
struct FsubaMove {
    reg: usize,
    empty: BTreeSet<usize>,
    dst: (String, BTreeSet<usize>, BTreeSet<usize>),
}

/// The moves out of control `(j, retained, tracked)`; `retained` is the set
/// of registers kept for a later comparison, `tracked` the set of
/// determined registers.
///
/// Every move guards only the junk register `m+1`. Registers that fall out
/// of `retained` keep their stale value instead of being erased; that is
/// harmless because comparisons are gated on membership in `retained`, and
/// it keeps every move compatible with the guard-only reading of the
/// emptiness set (a guard over previously written registers would wrongly
/// block runs that drop a register after its last comparison).
fn fsuba_moves(aut: &Nofa, j: &str, retained: &BTreeSet<usize>, tracked: &BTreeSet<usize>) -> Vec<FsubaMove> {
    let junk = aut.registers + 1;
    let junk_guard: BTreeSet<usize> = [junk].into_iter().collect();
    let mut moves = Vec::new();
    for t in aut.transitions_from(j) {
        let read = t.eqs.reg_in().filter(|k| tracked.contains(k));
        // A tracked comparison is usable only if the register was retained.
        if read.is_some_and(|k| !retained.contains(&k)) {
            continue;
        }
        let retained_after = t.eqs.tracked_after(retained);
        let tracked_after = t.eqs.tracked_after(tracked);
        // Rigidity makes the compared and the stored index coincide when
        // both are present, so the choice below is unambiguous.
        match read.or(t.eqs.in_reg()) {
            Some(k) => {
                for keep in [true, false] {
                    let mut after = retained_after.clone();
                    if !keep {
                        after.remove(&k);
                    }
                    moves.push(FsubaMove {
                        reg: k,
                        empty: junk_guard.clone(),
                        dst: (t.dst.clone(), after, tracked_after.clone()),
                    });
                }
            }
            None => {
                moves.push(FsubaMove {
                    reg: junk,
                    empty: junk_guard.clone(),
                    dst: (t.dst.clone(), retained_after, tracked_after.clone()),
                });
            }
        }
    }
    moves
}

/// Extracts a finite-state unification-based automaton from a rigid
/// automaton; the result recognizes the positive closure of the input's
/// exact language. The control keeps, next to the underlying state, the set
/// of determined registers and the subset retained for a later comparison.
/// One extra register is guarded empty on every transition and absorbs
/// letters no retained register cares about. Only controls reachable from
/// the initial state are built.
pub fn to_fsuba(aut: &Nofa) -> Result<Fsuba, TransformError> {
    if let Some(t) = aut.transitions.iter().find(|t| !t.eqs.is_rigid()) {
        return Err(TransformError::NotRigid(format!("{} -> {} {}", t.src, t.dst, t.eqs)));
    }
    let start = "q0".to_string();
    let mut states: BTreeSet<String> = [start.clone()].into_iter().collect();
    let mut transitions: BTreeSet<FsubaTransition> = BTreeSet::new();
    let mut queue: VecDeque<(String, BTreeSet<usize>, BTreeSet<usize>)> = VecDeque::new();
    let mut seen: BTreeSet<(String, BTreeSet<usize>, BTreeSet<usize>)> = BTreeSet::new();

    let empty = BTreeSet::new();
    for j0 in &aut.initial {
        for mv in fsuba_moves(aut, j0, &empty, &empty) {
            let (dj, dr, ds) = &mv.dst;
            let dst_name = fsuba_state(dj, dr, ds);
            states.insert(dst_name.clone());
            transitions.insert(FsubaTransition {
                src: start.clone(),
                reg: mv.reg,
                empty: mv.empty,
                dst: dst_name,
            });
            if seen.insert(mv.dst.clone()) {
                queue.push_back(mv.dst);
            }
        }
    }
    while let Some((j, r, s)) = queue.pop_front() {
        let src_name = fsuba_state(&j, &r, &s);
        for mv in fsuba_moves(aut, &j, &r, &s) {
            let (dj, dr, ds) = &mv.dst;
            let dst_name = fsuba_state(dj, dr, ds);
            states.insert(dst_name.clone());
            transitions.insert(FsubaTransition {
                src: src_name.clone(),
                reg: mv.reg,
                empty: mv.empty,
                dst: dst_name,
            });
            if seen.insert(mv.dst.clone()) {
                queue.push_back(mv.dst);
            }
        }
    }

    let mut accepting: BTreeSet<String> = seen
        .iter()
        .filter(|(j, _, _)| aut.accepting.contains(j))
        .map(|(j, r, s)| fsuba_state(j, r, s))
        .collect();
    if aut.accepts_empty() {
        accepting.insert(start.clone());
    }
    Ok(Fsuba {
        states,
        registers: aut.registers + 1,
        transitions,
        initial: start,
        accepting,
    })
}

fn conjunction(eqs: &EquationSet) -> Guard {
    let mut atoms = eqs.iter().map(|eq| match *eq {
        Equation::RegIn(k) => Guard::Eq(GuardTerm::Before(k), GuardTerm::Input),
        Equation::InReg(k) => Guard::Eq(GuardTerm::Input, GuardTerm::After(k)),
        Equation::RegReg(k, kb) => Guard::Eq(GuardTerm::Before(k), GuardTerm::After(kb)),
    });
    match atoms.next() {
        None => Guard::True,
        Some(first) => atoms.fold(first, Guard::and),
    }
}

/// Extracts a register automaton with negation-free guards recognizing the
/// positive closure of the input's language. Each abstract transition
/// becomes the conjunction of its equations; a fresh initial state with
/// empty registers replays the transitions out of initial controls, keeping
/// only the store constraint since there is nothing to compare yet.
pub fn to_positive_regaut(aut: &Nofa) -> RegisterAutomaton {
    let mut start = "q0".to_string();
    while aut.states.contains(&start) {
        start.push('_');
    }
    let mut states: BTreeSet<String> = aut.states.clone();
    states.insert(start.clone());

    let mut transitions: BTreeSet<RegTransition> = aut
        .transitions
        .iter()
        .map(|t| RegTransition { src: t.src.clone(), dst: t.dst.clone(), guard: conjunction(&t.eqs) })
        .collect();
    for t in &aut.transitions {
        if aut.initial.contains(&t.src) {
            let guard = match t.eqs.in_reg() {
                Some(k) => Guard::Eq(GuardTerm::Input, GuardTerm::After(k)),
                None => Guard::True,
            };
            transitions.insert(RegTransition { src: start.clone(), dst: t.dst.clone(), guard });
        }
    }

    let mut accepting = aut.accepting.clone();
    if aut.accepts_empty() {
        accepting.insert(start.clone());
    }
    RegisterAutomaton {
        states,
        registers: aut.registers,
        transitions,
        initial: [start].into_iter().collect(),
        accepting,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::{DataWord, Name};
    use crate::fixtures;
    use crate::semantics::Acceptor;

    fn word(letters: &[u32]) -> DataWord {
        DataWord::new(letters.iter().map(|&i| Name(i)).collect())
    }

    #[test]
    fn closure_only_switches_the_semantics_tag() {
        let d = fixtures::distinct_pair();
        let closed = positive_closure(&d);
        assert_eq!(closed.semantics, Semantics::Consistency);
        assert_eq!(closed.transitions, d.transitions);
        assert!(closed.accepts(&word(&[0, 0])));
    }

    #[test]
    fn rigidify_swap_produces_the_expected_transition() {
        let rigid = rigidify(&fixtures::swap());
        assert_eq!(rigid.validate(), Ok(()));
        assert!(rigid.is_rigid());
        assert_eq!(rigid.states.len(), 4); // |J| * m!
        let expected = AbstractTransition::new(
            "j^(1,2)",
            EquationSet::new([Equation::RegReg(1, 1), Equation::RegReg(2, 2)]),
            "j'^(2,1)",
        );
        assert!(rigid.transitions.contains(&expected), "{:?}", rigid.transitions);
    }

    #[test]
    fn rigidify_preserves_the_exact_language_on_l1() {
        let l1 = fixtures::l1();
        let rigid = rigidify(&l1);
        for w in crate::semantics::words_up_to(&crate::atom::initial_atoms(3), 3) {
            assert_eq!(l1.exact_accepts(&w), rigid.exact_accepts(&w), "word {w}");
        }
    }

    #[test]
    fn fsuba_of_l1_matches_closure_membership() {
        let f = to_fsuba(&rigidify(&fixtures::l1())).unwrap();
        assert_eq!(f.validate(), Ok(()));
        assert_eq!(f.registers, 2); // m + 1
        assert!(f.accepts(&word(&[0, 0])));
        assert!(!f.accepts(&word(&[0, 1])));
        assert!(f.accepts(&word(&[0, 1, 0])));
    }

    #[test]
    fn fsuba_extraction_requires_rigidity() {
        assert!(matches!(to_fsuba(&fixtures::swap()), Err(TransformError::NotRigid(_))));
    }

    #[test]
    fn deguess_builds_only_reachable_controls() {
        let tracked = deguess(&fixtures::guess_chain());
        assert_eq!(tracked.validate(), Ok(()));
        // g0 with nothing tracked, g1 with nothing tracked, g2 with nothing tracked.
        assert_eq!(tracked.controls.len(), 3);
        assert!(tracked.controls.iter().all(|c| c.tracked.is_empty()));
    }

    #[test]
    fn positive_regaut_of_l1_is_positive_and_sound() {
        let reg = to_positive_regaut(&fixtures::l1());
        assert_eq!(reg.validate(), Ok(()));
        assert!(reg.is_positive());
        assert!(reg.accepts(&word(&[0, 0])));
        assert!(!reg.accepts(&word(&[0, 1])));
        assert!(reg.accepts(&word(&[0, 1, 0])));
    }

    #[test]
    fn empty_equation_set_becomes_guard_true() {
        let reg = to_positive_regaut(&fixtures::guess_chain());
        assert!(reg
            .transitions
            .iter()
            .any(|t| t.src == "g0" && t.guard == Guard::True));
    }
}
