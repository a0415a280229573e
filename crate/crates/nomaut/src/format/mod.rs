//! Textual formats for automata, formulas, and words.
//!
//! Automata files are line-oriented: a `kind:` header selects the artifact
//! kind, followed by `registers:`, `states:`, `initial:`, `final:` headers
//! and one `trans:` line per transition. `#` starts a comment, input
//! accepts LF or CRLF, and output is emitted with LF in a canonical form
//! (sorted states, sorted transitions, canonical equation order) so that
//! printing and reparsing is the identity.
//!
//! Text without a `kind:` header is read as a data word: whitespace
//! separated atom tokens, interned to numeric ids in first-appearance
//! order.

mod automata;
mod formula;

use std::collections::BTreeSet;

use crate::atom::{DataWord, Name};
use crate::error::{ParseError, SyntaxError};
use crate::logic::MsoFormula;
use crate::nofa::Semantics;

pub use formula::{parse_formula, print_formula};

/// A data word together with the atom spellings it was parsed from, so it
/// can be printed back with the original tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordArtifact {
    pub word: DataWord,
    pub atom_names: Vec<String>,
}

impl WordArtifact {
    /// Renders a word over this artifact's atoms; unknown ids fall back to
    /// their numeric form.
    pub fn render(&self, word: &DataWord) -> String {
        word.letters()
            .iter()
            .map(|n| {
                self.atom_names
                    .get(n.0 as usize)
                    .cloned()
                    .unwrap_or_else(|| n.0.to_string())
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// The distinct atoms of the word, in first-appearance order.
    pub fn atoms(&self) -> Vec<Name> {
        (0..self.atom_names.len() as u32).map(Name).collect()
    }
}

/// Any value the textual format can carry.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Nofa(crate::nofa::Nofa),
    Tracked(crate::tracked::TrackedNofra),
    Fsuba(crate::fsuba::Fsuba),
    RegAut(crate::regaut::RegisterAutomaton),
    Formula(MsoFormula),
    Word(WordArtifact),
}

impl Artifact {
    pub fn kind(&self) -> &'static str {
        match self {
            Artifact::Nofa(aut) => match aut.semantics {
                Semantics::Exact => "nofa",
                Semantics::Consistency => "nofra",
            },
            Artifact::Tracked(_) => "tracked",
            Artifact::Fsuba(_) => "fsuba",
            Artifact::RegAut(_) => "regaut",
            Artifact::Formula(_) => "mso",
            Artifact::Word(_) => "word",
        }
    }
}

/// Interns whitespace-separated atom tokens in first-appearance order.
pub fn parse_word(text: &str) -> WordArtifact {
    let mut atom_names: Vec<String> = Vec::new();
    let mut letters = Vec::new();
    for token in text.split_whitespace() {
        let id = match atom_names.iter().position(|t| t == token) {
            Some(i) => i,
            None => {
                atom_names.push(token.to_string());
                atom_names.len() - 1
            }
        };
        letters.push(Name(id as u32));
    }
    WordArtifact { word: DataWord::new(letters), atom_names }
}

/// One content-bearing input line: number and text with comments stripped.
pub(crate) struct Line<'a> {
    pub number: usize,
    pub text: &'a str,
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let without_comment = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let trimmed = without_comment.trim();
            if trimmed.is_empty() {
                None
            } else {
                Some(Line { number: i + 1, text: trimmed })
            }
        })
        .collect()
}

/// Parses an artifact. Text with a `kind:` header is parsed per that kind
/// and must pass the kind's validator; anything else is read as a word.
pub fn parse_spec(text: &str) -> Result<Artifact, ParseError> {
    let lines = content_lines(text);
    let Some(first) = lines.first() else {
        return Ok(Artifact::Word(parse_word(text)));
    };
    let Some(kind) = first.text.strip_prefix("kind:") else {
        return Ok(Artifact::Word(parse_word(text)));
    };
    let kind = kind.trim();
    let first_line = first.number;
    let rest = &lines[1..];
    let artifact = match kind {
        "nofa" => Artifact::Nofa(automata::parse_nofa(rest, Semantics::Exact)?),
        "nofra" => Artifact::Nofa(automata::parse_nofa(rest, Semantics::Consistency)?),
        "tracked" => Artifact::Tracked(automata::parse_tracked(rest)?),
        "fsuba" => Artifact::Fsuba(automata::parse_fsuba(rest)?),
        "regaut" => Artifact::RegAut(automata::parse_regaut(rest)?),
        "mso" => Artifact::Formula(automata::parse_mso_file(rest)?),
        other => {
            return Err(SyntaxError::new(
                first_line,
                1,
                format!("unknown kind `{other}` (expected nofa, nofra, tracked, fsuba, regaut or mso)"),
            )
            .into())
        }
    };
    validate_artifact(&artifact)?;
    Ok(artifact)
}

fn validate_artifact(artifact: &Artifact) -> Result<(), ParseError> {
    let result = match artifact {
        Artifact::Nofa(aut) => aut.validate(),
        Artifact::Tracked(aut) => aut.validate(),
        Artifact::Fsuba(aut) => aut.validate(),
        Artifact::RegAut(aut) => aut.validate(),
        Artifact::Formula(formula) => {
            let (fo, so) = formula.free_variables();
            if fo.is_empty() && so.is_empty() {
                Ok(())
            } else {
                let free: Vec<String> = fo.into_iter().chain(so).collect();
                Err(vec![format!("formula is not a sentence; free variables: {}", free.join(", "))])
            }
        }
        Artifact::Word(_) => Ok(()),
    };
    result.map_err(ParseError::Invalid)
}

fn join_sorted(items: &BTreeSet<String>) -> String {
    items.iter().cloned().collect::<Vec<_>>().join(" ")
}

/// Prints an artifact in the canonical form accepted by [`parse_spec`].
pub fn print_spec(artifact: &Artifact) -> String {
    match artifact {
        Artifact::Nofa(aut) => {
            let mut out = String::new();
            out.push_str(&format!("kind: {}\n", artifact.kind()));
            out.push_str(&format!("registers: {}\n", aut.registers));
            out.push_str(&format!("states: {}\n", join_sorted(&aut.states)));
            out.push_str(&format!("initial: {}\n", join_sorted(&aut.initial)));
            out.push_str(&format!("final: {}\n", join_sorted(&aut.accepting)));
            for t in &aut.transitions {
                out.push_str(&format!("trans: {} -> {} {}\n", t.src, t.dst, t.eqs));
            }
            out
        }
        Artifact::Tracked(aut) => {
            let controls = |set: &BTreeSet<crate::tracked::TrackedControl>| {
                set.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            };
            let mut out = String::new();
            out.push_str("kind: tracked\n");
            out.push_str(&format!("registers: {}\n", aut.registers));
            out.push_str(&format!("states: {}\n", controls(&aut.controls)));
            out.push_str(&format!("initial: {}\n", controls(&aut.initial)));
            out.push_str(&format!("final: {}\n", controls(&aut.accepting)));
            for t in &aut.transitions {
                out.push_str(&format!("trans: {} -> {} {}\n", t.src, t.dst, t.eqs));
            }
            out
        }
        Artifact::Fsuba(aut) => {
            let mut out = String::new();
            out.push_str("kind: fsuba\n");
            out.push_str(&format!("registers: {}\n", aut.registers));
            out.push_str(&format!("states: {}\n", join_sorted(&aut.states)));
            out.push_str(&format!("initial: {}\n", aut.initial));
            out.push_str(&format!("final: {}\n", join_sorted(&aut.accepting)));
            for t in &aut.transitions {
                let guard: Vec<String> = t.empty.iter().map(|k| k.to_string()).collect();
                out.push_str(&format!(
                    "trans: {} -{},{{{}}}-> {}\n",
                    t.src,
                    t.reg,
                    guard.join(","),
                    t.dst
                ));
            }
            out
        }
        Artifact::RegAut(aut) => {
            let mut out = String::new();
            out.push_str("kind: regaut\n");
            out.push_str(&format!("registers: {}\n", aut.registers));
            out.push_str(&format!("states: {}\n", join_sorted(&aut.states)));
            out.push_str(&format!("initial: {}\n", join_sorted(&aut.initial)));
            out.push_str(&format!("final: {}\n", join_sorted(&aut.accepting)));
            for t in &aut.transitions {
                out.push_str(&format!(
                    "trans: {} -> {} [{}]\n",
                    t.src,
                    t.dst,
                    automata::print_guard(&t.guard)
                ));
            }
            out
        }
        Artifact::Formula(formula) => {
            format!("kind: mso\nformula: {}\n", print_formula(formula))
        }
        Artifact::Word(w) => {
            let mut out = w.render(&w.word);
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::transforms;

    fn round_trip(artifact: &Artifact) {
        let text = print_spec(artifact);
        let reparsed = parse_spec(&text).unwrap_or_else(|e| panic!("reparse failed: {e}\n{text}"));
        assert_eq!(&reparsed, artifact, "round trip changed the artifact:\n{text}");
        assert_eq!(print_spec(&reparsed), text, "printing is not idempotent");
    }

    #[test]
    fn word_interning_is_first_appearance() {
        let w = parse_word("a b a");
        assert_eq!(w.word, DataWord::new(vec![Name(0), Name(1), Name(0)]));
        assert_eq!(w.atom_names, vec!["a".to_string(), "b".to_string()]);
        assert_eq!(w.render(&w.word), "a b a");
    }

    #[test]
    fn parse_a_minimal_automaton() {
        let text = "kind: nofa\nregisters: 1\nstates: s f\ninitial: s\nfinal: f\ntrans: s -> f [.=1]\n";
        let Artifact::Nofa(aut) = parse_spec(text).unwrap() else {
            panic!("expected an automaton")
        };
        assert_eq!(aut.registers, 1);
        assert_eq!(aut.transitions.len(), 1);
        let t = aut.transitions.iter().next().unwrap();
        assert_eq!(t.eqs, crate::equation::EquationSet::new([crate::equation::Equation::InReg(1)]));
    }

    #[test]
    fn out_of_range_index_is_a_validation_error() {
        let text = "kind: nofa\nregisters: 1\ntrans: s -> f [2=.]\n";
        match parse_spec(text) {
            Err(ParseError::Invalid(errors)) => {
                assert!(errors.iter().any(|e| e.contains("out of range")), "{errors:?}")
            }
            other => panic!("expected a validation error, got {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let text = "kind: nofa\nregisters: one\n";
        match parse_spec(text) {
            Err(ParseError::Syntax(e)) => assert_eq!(e.line, 2),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn fixtures_round_trip() {
        let l1 = fixtures::l1();
        round_trip(&Artifact::Nofa(l1.clone()));
        round_trip(&Artifact::Nofa(transforms::positive_closure(&l1)));
        round_trip(&Artifact::Nofa(transforms::rigidify(&l1)));
        round_trip(&Artifact::Tracked(transforms::deguess(&l1)));
        round_trip(&Artifact::Fsuba(transforms::to_fsuba(&transforms::rigidify(&l1)).unwrap()));
        round_trip(&Artifact::Fsuba(fixtures::fsuba_some_repeat()));
        round_trip(&Artifact::RegAut(transforms::to_positive_regaut(&l1)));
        round_trip(&Artifact::Formula(crate::logic::automaton_to_mso(&fixtures::distinct_pair())));
        round_trip(&Artifact::Word(parse_word("a b a 7 b")));
    }

    #[test]
    fn comments_and_crlf_are_accepted() {
        let text = "kind: nofa\r\n# a comment\r\nregisters: 0\r\nstates: s # trailing\r\ninitial: s\r\nfinal: s\r\ntrans: s -> s []\r\n";
        let Artifact::Nofa(aut) = parse_spec(text).unwrap() else {
            panic!("expected an automaton")
        };
        assert!(aut.accepts_empty());
    }

    #[test]
    fn states_are_inferred_when_the_header_is_missing() {
        let text = "kind: nofa\nregisters: 0\ninitial: s\nfinal: f\ntrans: s -> f []\n";
        let Artifact::Nofa(aut) = parse_spec(text).unwrap() else {
            panic!("expected an automaton")
        };
        assert_eq!(aut.states.len(), 2);
    }
}
