//! Small hand-built automata used in tests and documentation.

use crate::equation::Equation::*;
use crate::equation::EquationSet;
use crate::fsuba::{Fsuba, FsubaTransition};
use crate::nofa::{AbstractTransition, Nofa, Semantics};

fn trans(src: &str, eqs: &[crate::equation::Equation], dst: &str) -> AbstractTransition {
    AbstractTransition::new(src, EquationSet::new(eqs.iter().copied()), dst)
}

/// Accepts exactly the two-letter words with distinct letters: the second
/// letter must miss the stored (guessed) register value, which the first
/// step sets to the first letter.
pub fn distinct_pair() -> Nofa {
    Nofa::new(
        1,
        Semantics::Exact,
        [trans("s0", &[InReg(1)], "s1"), trans("s1", &[], "f")],
        ["s0"],
        ["f"],
    )
}

/// Accepts the words in which some letter occurs twice. The register guesses
/// the repeated letter's first occurrence, waits for it, stores it, and
/// waits for the repeat.
pub fn l1() -> Nofa {
    Nofa::new(
        1,
        Semantics::Exact,
        [
            trans("s", &[RegReg(1, 1)], "s"),
            trans("s", &[InReg(1)], "h"),
            trans("h", &[RegReg(1, 1)], "h"),
            trans("h", &[RegIn(1), InReg(1), RegReg(1, 1)], "f"),
            trans("f", &[], "f"),
            trans("f", &[RegIn(1)], "f"),
        ],
        ["s"],
        ["f"],
    )
}

/// A guessing two-step automaton: the first step invents a register value
/// and the second requires the input to match it. Its exact language is the
/// distinct two-letter words; its closure is all two-letter words.
pub fn guess_chain() -> Nofa {
    Nofa::new(
        1,
        Semantics::Exact,
        [trans("g0", &[], "g1"), trans("g1", &[RegIn(1)], "g2")],
        ["g0"],
        ["g2"],
    )
}

/// A single transition that swaps its two registers.
pub fn swap() -> Nofa {
    Nofa::new(
        2,
        Semantics::Exact,
        [trans("j", &[RegReg(1, 2), RegReg(2, 1)], "j'")],
        ["j"],
        ["j'"],
    )
}

/// A hand-built FSUBA for "some letter occurs twice": register 1 stores a
/// candidate letter, register 2 is a scratch slot that is guarded empty so
/// it can absorb the remaining input.
pub fn fsuba_some_repeat() -> Fsuba {
    let t = |src: &str, reg: usize, empty: &[usize], dst: &str| FsubaTransition {
        src: src.into(),
        reg,
        empty: empty.iter().copied().collect(),
        dst: dst.into(),
    };
    Fsuba {
        states: ["s", "h", "f"].into_iter().map(String::from).collect(),
        registers: 2,
        transitions: [
            t("s", 1, &[1], "s"),
            t("s", 1, &[], "h"),
            t("h", 2, &[2], "h"),
            t("h", 1, &[], "f"),
            t("f", 2, &[2], "f"),
        ]
        .into_iter()
        .collect(),
        initial: "s".into(),
        accepting: ["f"].into_iter().map(String::from).collect(),
    }
}
