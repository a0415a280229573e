//! Seeded random generation of automata and formulas, used by the test
//! suites and handy for exploration.

use rand::prelude::IndexedRandom;
use rand::Rng;

use crate::atom::Name;
use crate::equation::induced_abstraction;
use crate::logic::MsoFormula;
use crate::nofa::{AbstractTransition, Nofa, Semantics};

/// Size bounds for [`random_nofa`].
#[derive(Debug, Clone, Copy)]
pub struct NofaParams {
    pub max_states: usize,
    pub max_registers: usize,
    pub max_transitions: usize,
}

impl Default for NofaParams {
    fn default() -> Self {
        NofaParams { max_states: 3, max_registers: 2, max_transitions: 6 }
    }
}

/// A random valid automaton under exact semantics. Equation sets are
/// obtained by abstracting random concrete steps, so they are always
/// well-formed and realizable.
pub fn random_nofa<R: Rng>(rng: &mut R, params: &NofaParams) -> Nofa {
    let state_count = rng.random_range(1..=params.max_states);
    let states: Vec<String> = (0..state_count).map(|i| format!("s{i}")).collect();
    let m = rng.random_range(0..=params.max_registers);
    let atom_count = 2 * m + 2;

    let random_distinct = |rng: &mut R| -> Vec<Name> {
        let mut available: Vec<Name> = (0..atom_count as u32).map(Name).collect();
        (0..m)
            .map(|_| {
                let i = rng.random_range(0..available.len());
                available.swap_remove(i)
            })
            .collect()
    };

    let transition_count = rng.random_range(1..=params.max_transitions);
    let mut transitions = Vec::with_capacity(transition_count);
    for _ in 0..transition_count {
        let before = random_distinct(rng);
        let after = random_distinct(rng);
        let input = Name(rng.random_range(0..atom_count as u32));
        let eqs = induced_abstraction(&before, input, &after).expect("sampled distinct");
        let src = states.choose(rng).unwrap().clone();
        let dst = states.choose(rng).unwrap().clone();
        transitions.push(AbstractTransition::new(src, eqs, dst));
    }

    let subset = |rng: &mut R| -> Vec<String> {
        let mask = rng.random_range(1..(1usize << state_count));
        states
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, s)| s.clone())
            .collect()
    };
    let initial = subset(rng);
    let accepting = subset(rng);
    let mut aut = Nofa::new(m, Semantics::Exact, transitions, initial, accepting);
    for s in &states {
        aut.states.insert(s.clone());
    }
    aut
}

/// A random closed formula of quantifier/connective depth at most `depth`,
/// over fresh variable names. Atoms only use variables in scope, so the
/// result always evaluates without binding errors.
pub fn random_formula<R: Rng>(rng: &mut R, depth: usize) -> MsoFormula {
    let mut fresh = 0usize;
    build_formula(rng, depth, &mut Vec::new(), &mut Vec::new(), &mut fresh)
}

fn build_formula<R: Rng>(
    rng: &mut R,
    depth: usize,
    fo_scope: &mut Vec<String>,
    so_scope: &mut Vec<String>,
    fresh: &mut usize,
) -> MsoFormula {
    let atom_possible = !fo_scope.is_empty();
    if depth == 0 || (rng.random_ratio(1, 4) && atom_possible) {
        if atom_possible {
            let x = fo_scope.choose(rng).unwrap().clone();
            let y = fo_scope.choose(rng).unwrap().clone();
            let with_sets = !so_scope.is_empty();
            return match rng.random_range(0..if with_sets { 3 } else { 2 }) {
                0 => MsoFormula::Less(x, y),
                1 => MsoFormula::Sim(x, y),
                _ => MsoFormula::Mem(so_scope.choose(rng).unwrap().clone(), x),
            };
        }
        // Nothing to talk about yet; quantify a position first.
        let var = format!("v{}", *fresh);
        *fresh += 1;
        fo_scope.push(var.clone());
        let body = MsoFormula::Less(var.clone(), var.clone());
        fo_scope.pop();
        return MsoFormula::exists_fo(var, body);
    }
    match rng.random_range(0..7) {
        0 => MsoFormula::negate(build_formula(rng, depth - 1, fo_scope, so_scope, fresh)),
        1 => MsoFormula::or(
            build_formula(rng, depth - 1, fo_scope, so_scope, fresh),
            build_formula(rng, depth - 1, fo_scope, so_scope, fresh),
        ),
        2 => MsoFormula::and(
            build_formula(rng, depth - 1, fo_scope, so_scope, fresh),
            build_formula(rng, depth - 1, fo_scope, so_scope, fresh),
        ),
        3 | 4 => {
            let var = format!("v{}", *fresh);
            *fresh += 1;
            fo_scope.push(var.clone());
            let body = build_formula(rng, depth - 1, fo_scope, so_scope, fresh);
            fo_scope.pop();
            if rng.random_bool(0.5) {
                MsoFormula::exists_fo(var, body)
            } else {
                MsoFormula::forall_fo(var, body)
            }
        }
        _ => {
            let var = format!("V{}", *fresh);
            *fresh += 1;
            so_scope.push(var.clone());
            let body = build_formula(rng, depth - 1, fo_scope, so_scope, fresh);
            so_scope.pop();
            if rng.random_bool(0.5) {
                MsoFormula::exists_so(var, body)
            } else {
                MsoFormula::forall_so(var, body)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_automata_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let aut = random_nofa(&mut rng, &NofaParams::default());
            assert_eq!(aut.validate(), Ok(()));
        }
    }

    #[test]
    fn random_formulas_are_sentences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let f = random_formula(&mut rng, 4);
            assert!(f.is_sentence(), "{f:?}");
        }
    }
}
