//! Textual syntax for formulas: `exists x.` / `forall X.` quantifiers with
//! maximal rightward scope, infix `&` and `|`, prefix `!`, and the atoms
//! `x < y`, `x ~ y`, `X(x)`. First-order variables start with a lowercase
//! letter, second-order variables with an uppercase letter.

use crate::error::{ParseError, SyntaxError};
use crate::logic::MsoFormula;

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Exists,
    Forall,
    Less,
    Sim,
    Open,
    Close,
    And,
    Or,
    Not,
    Dot,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    SyntaxError::new(line, column, message).into()
}

fn lex(line: usize, text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        match c {
            ' ' | '\t' => i += 1,
            '<' => {
                tokens.push((column, Token::Less));
                i += 1;
            }
            '~' => {
                tokens.push((column, Token::Sim));
                i += 1;
            }
            '(' => {
                tokens.push((column, Token::Open));
                i += 1;
            }
            ')' => {
                tokens.push((column, Token::Close));
                i += 1;
            }
            '&' => {
                tokens.push((column, Token::And));
                i += 1;
            }
            '|' => {
                tokens.push((column, Token::Or));
                i += 1;
            }
            '!' => {
                tokens.push((column, Token::Not));
                i += 1;
            }
            '.' => {
                tokens.push((column, Token::Dot));
                i += 1;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let token = match word.as_str() {
                    "exists" => Token::Exists,
                    "forall" => Token::Forall,
                    _ => Token::Ident(word),
                };
                tokens.push((column, token));
            }
            other => return Err(err(line, column, format!("unexpected `{other}` in formula"))),
        }
    }
    Ok(tokens)
}

fn is_second_order(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_uppercase())
}

struct Parser<'a> {
    tokens: &'a [(usize, Token)],
    pos: usize,
    line: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map(|&(c, _)| c).unwrap_or(1)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        let column = self.column();
        match self.bump() {
            Some(Token::Ident(name)) => Ok(name),
            _ => Err(err(self.line, column, "expected a variable name")),
        }
    }

    fn parse_formula(&mut self) -> Result<MsoFormula, ParseError> {
        self.parse_or()
    }

    fn parse_or(&mut self) -> Result<MsoFormula, ParseError> {
        let mut lhs = self.parse_and()?;
        while self.peek() == Some(&Token::Or) {
            self.bump();
            lhs = MsoFormula::or(lhs, self.parse_and()?);
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Result<MsoFormula, ParseError> {
        let mut lhs = self.parse_unary()?;
        while self.peek() == Some(&Token::And) {
            self.bump();
            lhs = MsoFormula::and(lhs, self.parse_unary()?);
        }
        Ok(lhs)
    }

    fn parse_quantifier(&mut self, existential: bool) -> Result<MsoFormula, ParseError> {
        let column = self.column();
        let var = self.expect_ident()?;
        match self.bump() {
            Some(Token::Dot) => {}
            _ => return Err(err(self.line, self.column(), "expected `.` after the quantified variable")),
        }
        // Quantifiers scope maximally rightward: the body is everything up
        // to the enclosing `)` or the end of the input.
        let body = self.parse_formula()?;
        let _ = column;
        Ok(match (existential, is_second_order(&var)) {
            (true, false) => MsoFormula::exists_fo(var, body),
            (false, false) => MsoFormula::forall_fo(var, body),
            (true, true) => MsoFormula::exists_so(var, body),
            (false, true) => MsoFormula::forall_so(var, body),
        })
    }

    fn parse_unary(&mut self) -> Result<MsoFormula, ParseError> {
        let column = self.column();
        match self.bump() {
            Some(Token::Not) => Ok(MsoFormula::negate(self.parse_unary()?)),
            Some(Token::Exists) => self.parse_quantifier(true),
            Some(Token::Forall) => self.parse_quantifier(false),
            Some(Token::Open) => {
                let inner = self.parse_formula()?;
                match self.bump() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(err(self.line, self.column(), "missing `)`")),
                }
            }
            Some(Token::Ident(name)) => {
                let next_column = self.column();
                match self.bump() {
                    Some(Token::Less) => {
                        let rhs = self.expect_ident()?;
                        self.check_first_order(column, &name)?;
                        self.check_first_order(next_column, &rhs)?;
                        Ok(MsoFormula::Less(name, rhs))
                    }
                    Some(Token::Sim) => {
                        let rhs = self.expect_ident()?;
                        self.check_first_order(column, &name)?;
                        self.check_first_order(next_column, &rhs)?;
                        Ok(MsoFormula::Sim(name, rhs))
                    }
                    Some(Token::Open) => {
                        if !is_second_order(&name) {
                            return Err(err(
                                self.line,
                                column,
                                format!("`{name}` is applied to a position but is not a set variable (set variables start uppercase)"),
                            ));
                        }
                        let arg = self.expect_ident()?;
                        self.check_first_order(next_column, &arg)?;
                        match self.bump() {
                            Some(Token::Close) => Ok(MsoFormula::Mem(name, arg)),
                            _ => Err(err(self.line, self.column(), "missing `)` after set membership")),
                        }
                    }
                    _ => Err(err(
                        self.line,
                        next_column,
                        format!("expected `<`, `~` or `(` after `{name}`"),
                    )),
                }
            }
            _ => Err(err(self.line, column, "expected a formula")),
        }
    }

    fn check_first_order(&self, column: usize, name: &str) -> Result<(), ParseError> {
        if is_second_order(name) {
            Err(err(
                self.line,
                column,
                format!("`{name}` is used as a position but starts uppercase (position variables start lowercase)"),
            ))
        } else {
            Ok(())
        }
    }
}

/// Parses formula text; the line number is used in error positions.
pub(crate) fn parse_formula_at(line: usize, text: &str) -> Result<MsoFormula, ParseError> {
    let tokens = lex(line, text)?;
    let mut parser = Parser { tokens: &tokens, pos: 0, line };
    let formula = parser.parse_formula()?;
    if parser.pos != tokens.len() {
        return Err(err(line, parser.column(), "trailing input after formula"));
    }
    Ok(formula)
}

/// Parses a formula from text.
pub fn parse_formula(text: &str) -> Result<MsoFormula, ParseError> {
    parse_formula_at(1, text)
}

fn precedence(formula: &MsoFormula) -> u8 {
    match formula {
        MsoFormula::ExistsFo(..)
        | MsoFormula::ForallFo(..)
        | MsoFormula::ExistsSo(..)
        | MsoFormula::ForallSo(..) => 0,
        MsoFormula::Or(..) => 1,
        MsoFormula::And(..) => 2,
        MsoFormula::Not(..) => 3,
        MsoFormula::Less(..) | MsoFormula::Sim(..) | MsoFormula::Mem(..) => 4,
    }
}

fn print_at(formula: &MsoFormula, context: u8, out: &mut String) {
    let wrap = precedence(formula) < context;
    if wrap {
        out.push('(');
    }
    match formula {
        MsoFormula::Less(x, y) => out.push_str(&format!("{x} < {y}")),
        MsoFormula::Sim(x, y) => out.push_str(&format!("{x} ~ {y}")),
        MsoFormula::Mem(set, x) => out.push_str(&format!("{set}({x})")),
        MsoFormula::Not(inner) => {
            out.push('!');
            print_at(inner, 3, out);
        }
        MsoFormula::And(l, r) => {
            print_at(l, 2, out);
            out.push_str(" & ");
            print_at(r, 3, out);
        }
        MsoFormula::Or(l, r) => {
            print_at(l, 1, out);
            out.push_str(" | ");
            print_at(r, 2, out);
        }
        MsoFormula::ExistsFo(v, body) | MsoFormula::ExistsSo(v, body) => {
            out.push_str(&format!("exists {v}. "));
            print_at(body, 0, out);
        }
        MsoFormula::ForallFo(v, body) | MsoFormula::ForallSo(v, body) => {
            out.push_str(&format!("forall {v}. "));
            print_at(body, 0, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

/// Prints a formula; parsing the result yields the same syntax tree.
pub fn print_formula(formula: &MsoFormula) -> String {
    let mut out = String::new();
    print_at(formula, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::MsoFormula as F;

    #[test]
    fn quantifier_scope_is_maximal() {
        let f = parse_formula("exists x. exists y. x < y & x ~ y").unwrap();
        let expected = F::exists_fo(
            "x",
            F::exists_fo("y", F::and(F::Less("x".into(), "y".into()), F::Sim("x".into(), "y".into()))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn and_binds_tighter_than_or() {
        let f = parse_formula("x < y & x ~ y | y < x").unwrap();
        assert!(matches!(f, F::Or(..)));
    }

    #[test]
    fn case_selects_the_variable_order() {
        assert!(parse_formula("exists X. forall x. X(x)").is_ok());
        assert!(parse_formula("x(y)").is_err());
        assert!(parse_formula("X ~ y").is_err());
    }

    #[test]
    fn print_parse_round_trips() {
        for text in [
            "exists x. exists y. x < y & x ~ y",
            "forall y. !(exists z. y < z) | forall x. !(x < y) | !(x ~ y)",
            "forall x. exists y. (x < y | y < x) & x ~ y",
            "!!x ~ x",
            "exists X. forall x. X(x) | !X(x)",
        ] {
            let parsed = parse_formula(text).unwrap_or_else(|e| panic!("{text}: {e}"));
            let printed = print_formula(&parsed);
            let reparsed = parse_formula(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
            assert_eq!(parsed, reparsed, "{text} -> {printed}");
            assert_eq!(print_formula(&reparsed), printed);
        }
    }

    #[test]
    fn trailing_input_is_rejected() {
        assert!(parse_formula("x < y y").is_err());
    }
}
