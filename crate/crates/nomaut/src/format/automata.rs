//! Line-oriented parsing of the automaton file kinds, plus the guard
//! sub-language of register automata.

use std::collections::BTreeSet;

use crate::equation::{Equation, EquationSet};
use crate::error::{ParseError, SyntaxError};
use crate::format::{formula, Line};
use crate::fsuba::{Fsuba, FsubaTransition};
use crate::logic::MsoFormula;
use crate::nofa::{AbstractTransition, Nofa, Semantics};
use crate::regaut::{Guard, GuardTerm, RegTransition, RegisterAutomaton};
use crate::tracked::{TrackedControl, TrackedNofra, TrackedTransition};

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    SyntaxError::new(line, column, message).into()
}

/// The headers shared by all automaton kinds, collected in one pass.
#[derive(Default)]
struct Headers<'a> {
    registers: Option<usize>,
    states: Option<Vec<&'a str>>,
    initial: Option<Vec<&'a str>>,
    accepting: Option<Vec<&'a str>>,
    transitions: Vec<(usize, &'a str)>,
    formula: Option<(usize, &'a str)>,
}

fn collect_headers<'a>(lines: &[Line<'a>], allow_formula: bool) -> Result<Headers<'a>, ParseError> {
    let mut headers = Headers::default();
    for line in lines {
        let (name, rest) = match line.text.split_once(':') {
            Some(pair) => pair,
            None => return Err(err(line.number, 1, "expected a `header: value` line")),
        };
        let rest = rest.trim();
        match name.trim() {
            "registers" => {
                let value = rest.parse::<usize>().map_err(|_| {
                    err(line.number, name.len() + 2, format!("invalid register count `{rest}`"))
                })?;
                headers.registers = Some(value);
            }
            "states" => headers.states = Some(rest.split_whitespace().collect()),
            "initial" => headers.initial = Some(rest.split_whitespace().collect()),
            "final" => headers.accepting = Some(rest.split_whitespace().collect()),
            "trans" => headers.transitions.push((line.number, rest)),
            "formula" if allow_formula => headers.formula = Some((line.number, rest)),
            other => {
                return Err(err(line.number, 1, format!("unknown header `{other}:`")));
            }
        }
    }
    Ok(headers)
}

fn require_registers(headers: &Headers, kind: &str) -> Result<usize, ParseError> {
    headers
        .registers
        .ok_or_else(|| err(0, 1, format!("missing `registers:` header for kind {kind}")))
}

/// Splits a transition body `SRC -> DST [group]` into its three parts; the
/// bracket group is optional.
fn split_arrow(line: usize, text: &str) -> Result<(&str, &str, Option<&str>), ParseError> {
    let (src, rest) = text
        .split_once("->")
        .ok_or_else(|| err(line, 1, "expected `SRC -> DST` in transition"))?;
    let src = src.trim();
    let rest = rest.trim();
    if src.is_empty() || src.split_whitespace().count() != 1 {
        return Err(err(line, 1, "transition source must be a single token"));
    }
    let (dst, group) = match rest.find('[') {
        Some(pos) => {
            let group = rest[pos..].trim();
            if !group.ends_with(']') {
                return Err(err(line, pos + 1, "unterminated `[...]` group"));
            }
            (rest[..pos].trim(), Some(&group[1..group.len() - 1]))
        }
        None => (rest, None),
    };
    if dst.is_empty() || dst.split_whitespace().count() != 1 {
        return Err(err(line, 1, "transition target must be a single token"));
    }
    Ok((src, dst, group))
}

fn parse_index(line: usize, text: &str) -> Result<usize, ParseError> {
    text.trim()
        .parse::<usize>()
        .map_err(|_| err(line, 1, format!("expected a register index, found `{}`", text.trim())))
}

fn parse_equation(line: usize, text: &str) -> Result<Equation, ParseError> {
    let (lhs, rhs) = text
        .split_once('=')
        .ok_or_else(|| err(line, 1, format!("expected an equation, found `{}`", text.trim())))?;
    let (lhs, rhs) = (lhs.trim(), rhs.trim());
    match (lhs, rhs) {
        (".", ".") => Err(err(line, 1, "`.=.` is not an equation")),
        (".", k) => Ok(Equation::InReg(parse_index(line, k)?)),
        (k, ".") => Ok(Equation::RegIn(parse_index(line, k)?)),
        (k, kb) => Ok(Equation::RegReg(parse_index(line, k)?, parse_index(line, kb)?)),
    }
}

fn parse_equations(line: usize, group: Option<&str>) -> Result<EquationSet, ParseError> {
    let Some(group) = group else {
        return Ok(EquationSet::empty());
    };
    let group = group.trim();
    if group.is_empty() {
        return Ok(EquationSet::empty());
    }
    group
        .split(',')
        .map(|eq| parse_equation(line, eq))
        .collect::<Result<Vec<_>, _>>()
        .map(EquationSet::new)
}

pub(super) fn parse_nofa(lines: &[Line], semantics: Semantics) -> Result<Nofa, ParseError> {
    let headers = collect_headers(lines, false)?;
    let registers = require_registers(&headers, "nofa")?;
    let mut transitions = BTreeSet::new();
    for (line, body) in &headers.transitions {
        let (src, dst, group) = split_arrow(*line, body)?;
        let eqs = parse_equations(*line, group)?;
        transitions.insert(AbstractTransition::new(src, eqs, dst));
    }
    let initial: BTreeSet<String> =
        headers.initial.unwrap_or_default().into_iter().map(String::from).collect();
    let accepting: BTreeSet<String> =
        headers.accepting.unwrap_or_default().into_iter().map(String::from).collect();
    let states: BTreeSet<String> = match headers.states {
        Some(tokens) => tokens.into_iter().map(String::from).collect(),
        None => {
            let mut inferred: BTreeSet<String> = initial.union(&accepting).cloned().collect();
            for t in &transitions {
                inferred.insert(t.src.clone());
                inferred.insert(t.dst.clone());
            }
            inferred
        }
    };
    Ok(Nofa { states, registers, transitions, initial, accepting, semantics })
}

fn parse_index_set(line: usize, text: &str) -> Result<BTreeSet<usize>, ParseError> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| err(line, 1, format!("expected `{{...}}`, found `{text}`")))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(BTreeSet::new());
    }
    inner.split(',').map(|k| parse_index(line, k)).collect()
}

fn parse_tracked_control(line: usize, token: &str) -> Result<TrackedControl, ParseError> {
    let at = token
        .rfind('@')
        .ok_or_else(|| err(line, 1, format!("tracked state `{token}` must end in `@{{...}}`")))?;
    let tracked = parse_index_set(line, &token[at + 1..])?;
    Ok(TrackedControl { state: token[..at].to_string(), tracked })
}

pub(super) fn parse_tracked(lines: &[Line]) -> Result<TrackedNofra, ParseError> {
    let headers = collect_headers(lines, false)?;
    let registers = require_registers(&headers, "tracked")?;
    let parse_controls = |tokens: Option<Vec<&str>>| -> Result<BTreeSet<TrackedControl>, ParseError> {
        tokens
            .unwrap_or_default()
            .into_iter()
            .map(|t| parse_tracked_control(0, t))
            .collect()
    };
    let mut transitions = BTreeSet::new();
    for (line, body) in &headers.transitions {
        let (src, dst, group) = split_arrow(*line, body)?;
        transitions.insert(TrackedTransition {
            src: parse_tracked_control(*line, src)?,
            dst: parse_tracked_control(*line, dst)?,
            eqs: parse_equations(*line, group)?,
        });
    }
    let initial = parse_controls(headers.initial)?;
    let accepting = parse_controls(headers.accepting)?;
    let controls = match headers.states {
        Some(tokens) => tokens
            .into_iter()
            .map(|t| parse_tracked_control(0, t))
            .collect::<Result<BTreeSet<_>, _>>()?,
        None => {
            let mut inferred: BTreeSet<TrackedControl> = initial.union(&accepting).cloned().collect();
            for t in &transitions {
                inferred.insert(t.src.clone());
                inferred.insert(t.dst.clone());
            }
            inferred
        }
    };
    Ok(TrackedNofra { controls, registers, transitions, initial, accepting })
}

pub(super) fn parse_fsuba(lines: &[Line]) -> Result<Fsuba, ParseError> {
    let headers = collect_headers(lines, false)?;
    let registers = require_registers(&headers, "fsuba")?;
    let mut transitions = BTreeSet::new();
    for (line, body) in &headers.transitions {
        // Shape: `SRC -k,{T}-> DST`.
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(err(*line, 1, "expected `SRC -k,{T}-> DST`"));
        }
        let middle = tokens[1]
            .strip_prefix('-')
            .and_then(|t| t.strip_suffix("->"))
            .ok_or_else(|| err(*line, 1, format!("malformed move `{}`", tokens[1])))?;
        let (reg, guard) = middle
            .split_once(',')
            .ok_or_else(|| err(*line, 1, format!("malformed move `{}`", tokens[1])))?;
        transitions.insert(FsubaTransition {
            src: tokens[0].to_string(),
            reg: parse_index(*line, reg)?,
            empty: parse_index_set(*line, guard)?,
            dst: tokens[2].to_string(),
        });
    }
    let initial_tokens = headers.initial.unwrap_or_default();
    if initial_tokens.len() != 1 {
        return Err(err(0, 1, "fsuba requires exactly one initial state"));
    }
    let initial = initial_tokens[0].to_string();
    let accepting: BTreeSet<String> =
        headers.accepting.unwrap_or_default().into_iter().map(String::from).collect();
    let states: BTreeSet<String> = match headers.states {
        Some(tokens) => tokens.into_iter().map(String::from).collect(),
        None => {
            let mut inferred: BTreeSet<String> = accepting.clone();
            inferred.insert(initial.clone());
            for t in &transitions {
                inferred.insert(t.src.clone());
                inferred.insert(t.dst.clone());
            }
            inferred
        }
    };
    Ok(Fsuba { states, registers, transitions, initial, accepting })
}

pub(super) fn parse_regaut(lines: &[Line]) -> Result<RegisterAutomaton, ParseError> {
    let headers = collect_headers(lines, false)?;
    let registers = require_registers(&headers, "regaut")?;
    let mut transitions = BTreeSet::new();
    for (line, body) in &headers.transitions {
        let (src, dst, group) = split_arrow(*line, body)?;
        let group = group.ok_or_else(|| err(*line, 1, "register automaton transition needs a `[guard]`"))?;
        transitions.insert(RegTransition {
            src: src.to_string(),
            dst: dst.to_string(),
            guard: parse_guard(*line, group)?,
        });
    }
    let initial: BTreeSet<String> =
        headers.initial.unwrap_or_default().into_iter().map(String::from).collect();
    let accepting: BTreeSet<String> =
        headers.accepting.unwrap_or_default().into_iter().map(String::from).collect();
    let states: BTreeSet<String> = match headers.states {
        Some(tokens) => tokens.into_iter().map(String::from).collect(),
        None => {
            let mut inferred: BTreeSet<String> = initial.union(&accepting).cloned().collect();
            for t in &transitions {
                inferred.insert(t.src.clone());
                inferred.insert(t.dst.clone());
            }
            inferred
        }
    };
    Ok(RegisterAutomaton { states, registers, transitions, initial, accepting })
}

pub(super) fn parse_mso_file(lines: &[Line]) -> Result<MsoFormula, ParseError> {
    let headers = collect_headers(lines, true)?;
    if headers.registers.is_some() || headers.states.is_some() || !headers.transitions.is_empty() {
        return Err(err(0, 1, "kind mso takes only a `formula:` header"));
    }
    let (line, text) = headers
        .formula
        .ok_or_else(|| err(0, 1, "missing `formula:` header for kind mso"))?;
    formula::parse_formula_at(line, text)
}

// --- guard sub-language -------------------------------------------------

/// Tokens of the guard grammar. `Reg` carries a parsed `(k,b)`/`(k,a)`
/// operand; parentheses that open a subformula stay structural.
#[derive(Debug, Clone, PartialEq)]
enum GuardToken {
    Term(GuardTerm),
    True,
    Not,
    And,
    Or,
    Open,
    Close,
    Eq,
}

fn lex_guard(line: usize, text: &str) -> Result<Vec<GuardToken>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '!' => {
                tokens.push(GuardToken::Not);
                i += 1;
            }
            '&' => {
                tokens.push(GuardToken::And);
                i += 1;
            }
            '|' => {
                tokens.push(GuardToken::Or);
                i += 1;
            }
            '=' => {
                tokens.push(GuardToken::Eq);
                i += 1;
            }
            ')' => {
                tokens.push(GuardToken::Close);
                i += 1;
            }
            '.' => {
                tokens.push(GuardToken::Term(GuardTerm::Input));
                i += 1;
            }
            '(' => {
                // `(k,b)` / `(k,a)` is an operand; anything else after `(`
                // opens a subformula.
                let mut j = i + 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j > i + 1 && j < chars.len() && chars[j] == ',' {
                    let k: usize = chars[i + 1..j]
                        .iter()
                        .collect::<String>()
                        .parse()
                        .map_err(|_| err(line, i + 1, "invalid register index"))?;
                    let side = chars.get(j + 1).copied();
                    let close = chars.get(j + 2).copied();
                    let term = match (side, close) {
                        (Some('b'), Some(')')) => GuardTerm::Before(k),
                        (Some('a'), Some(')')) => GuardTerm::After(k),
                        _ => return Err(err(line, i + 1, "operand must be `(k,b)` or `(k,a)`")),
                    };
                    tokens.push(GuardToken::Term(term));
                    i = j + 3;
                } else {
                    tokens.push(GuardToken::Open);
                    i += 1;
                }
            }
            't' if chars[i..].iter().collect::<String>().starts_with("true") => {
                tokens.push(GuardToken::True);
                i += 4;
            }
            other => return Err(err(line, i + 1, format!("unexpected `{other}` in guard"))),
        }
    }
    Ok(tokens)
}

struct GuardParser<'a> {
    tokens: &'a [GuardToken],
    pos: usize,
    line: usize,
}

impl GuardParser<'_> {
    fn peek(&self) -> Option<&GuardToken> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<GuardToken> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_or(&mut self) -> Result<Guard, ParseError> {
        let mut lhs = self.parse_and()?;
        while self.peek() == Some(&GuardToken::Or) {
            self.bump();
            lhs = Guard::or(lhs, self.parse_and()?);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<Guard, ParseError> {
        let mut lhs = self.parse_unary()?;
        while self.peek() == Some(&GuardToken::And) {
            self.bump();
            lhs = Guard::and(lhs, self.parse_unary()?);
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Result<Guard, ParseError> {
        match self.bump() {
            Some(GuardToken::Not) => Ok(Guard::negate(self.parse_unary()?)),
            Some(GuardToken::True) => Ok(Guard::True),
            Some(GuardToken::Open) => {
                let inner = self.parse_or()?;
                match self.bump() {
                    Some(GuardToken::Close) => Ok(inner),
                    _ => Err(err(self.line, 1, "missing `)` in guard")),
                }
            }
            Some(GuardToken::Term(lhs)) => match self.bump() {
                Some(GuardToken::Eq) => match self.bump() {
                    Some(GuardToken::Term(rhs)) => Ok(Guard::Eq(lhs, rhs)),
                    _ => Err(err(self.line, 1, "expected an operand after `=`")),
                },
                _ => Err(err(self.line, 1, "expected `=` after an operand")),
            },
            _ => Err(err(self.line, 1, "expected a guard")),
        }
    }
}

pub(super) fn parse_guard(line: usize, text: &str) -> Result<Guard, ParseError> {
    let tokens = lex_guard(line, text)?;
    let mut parser = GuardParser { tokens: &tokens, pos: 0, line };
    let guard = parser.parse_or()?;
    if parser.pos != tokens.len() {
        return Err(err(line, 1, "trailing input after guard"));
    }
    Ok(guard)
}

fn guard_precedence(guard: &Guard) -> u8 {
    match guard {
        Guard::Or(..) => 1,
        Guard::And(..) => 2,
        Guard::Not(..) => 3,
        Guard::True | Guard::Eq(..) => 4,
    }
}

fn print_guard_at(guard: &Guard, context: u8, out: &mut String) {
    let wrap = guard_precedence(guard) < context;
    if wrap {
        out.push('(');
    }
    match guard {
        Guard::True => out.push_str("true"),
        Guard::Eq(lhs, rhs) => {
            out.push_str(&format!("{lhs}={rhs}"));
        }
        Guard::Not(inner) => {
            out.push('!');
            print_guard_at(inner, 3, out);
        }
        Guard::And(lhs, rhs) => {
            print_guard_at(lhs, 2, out);
            out.push_str(" & ");
            print_guard_at(rhs, 3, out);
        }
        Guard::Or(lhs, rhs) => {
            print_guard_at(lhs, 1, out);
            out.push_str(" | ");
            print_guard_at(rhs, 2, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

pub(super) fn print_guard(guard: &Guard) -> String {
    let mut out = String::new();
    print_guard_at(guard, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guard_round_trips() {
        for text in [
            "true",
            ".=(1,a)",
            "(1,b)=.",
            "(1,b)=(2,a) & .=(1,a)",
            "(1,b)=. & (2,b)=. | true",
            "!((1,b)=. | true) & .=(2,a)",
            "!!(1,b)=.",
        ] {
            let parsed = parse_guard(1, text).unwrap_or_else(|e| panic!("{text}: {e}"));
            let printed = print_guard(&parsed);
            let reparsed = parse_guard(1, &printed).unwrap();
            assert_eq!(parsed, reparsed, "{text} -> {printed}");
        }
    }

    #[test]
    fn guard_precedence_binds_and_tighter() {
        let g = parse_guard(1, "(1,b)=. & (2,b)=. | true").unwrap();
        assert!(matches!(g, Guard::Or(..)));
    }
}
