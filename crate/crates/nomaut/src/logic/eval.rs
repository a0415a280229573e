//! Formula evaluation over a fixed data word.

use std::collections::{BTreeMap, BTreeSet};

use crate::atom::{DataWord, Name};
use crate::error::EvalError;
use crate::logic::MsoFormula;

/// An assignment of positions to first-order variables and position sets to
/// second-order variables. Positions are 1-based.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment {
    pub first_order: BTreeMap<String, usize>,
    pub second_order: BTreeMap<String, BTreeSet<usize>>,
}

// Second-order values are kept as bitmasks during evaluation; subsets of
// positions of the desk-scale words handled here fit comfortably in a u64.
struct Evaluator<'a> {
    letters: &'a [Name],
    fo: Vec<(&'a str, usize)>,
    so: Vec<(&'a str, u64)>,
}

impl<'a> Evaluator<'a> {
    fn position(&self, var: &str) -> Result<usize, EvalError> {
        self.fo
            .iter()
            .rev()
            .find(|(name, _)| *name == var)
            .map(|&(_, p)| p)
            .ok_or_else(|| EvalError::UnboundVariable(var.to_string()))
    }

    fn set(&self, var: &str) -> Result<u64, EvalError> {
        self.so
            .iter()
            .rev()
            .find(|(name, _)| *name == var)
            .map(|&(_, s)| s)
            .ok_or_else(|| EvalError::UnboundVariable(var.to_string()))
    }

    fn eval(&mut self, formula: &'a MsoFormula) -> Result<bool, EvalError> {
        let n = self.letters.len();
        match formula {
            MsoFormula::Less(x, y) => Ok(self.position(x)? < self.position(y)?),
            MsoFormula::Sim(x, y) => {
                let (px, py) = (self.position(x)?, self.position(y)?);
                Ok(self.letters[px - 1] == self.letters[py - 1])
            }
            MsoFormula::Mem(set, x) => {
                let (s, p) = (self.set(set)?, self.position(x)?);
                Ok(s & (1 << (p - 1)) != 0)
            }
            MsoFormula::Not(inner) => Ok(!self.eval(inner)?),
            MsoFormula::Or(l, r) => Ok(self.eval(l)? || self.eval(r)?),
            MsoFormula::And(l, r) => Ok(self.eval(l)? && self.eval(r)?),
            MsoFormula::ExistsFo(v, body) => {
                for p in 1..=n {
                    self.fo.push((v, p));
                    let holds = self.eval(body);
                    self.fo.pop();
                    if holds? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            MsoFormula::ForallFo(v, body) => {
                for p in 1..=n {
                    self.fo.push((v, p));
                    let holds = self.eval(body);
                    self.fo.pop();
                    if !holds? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            MsoFormula::ExistsSo(v, body) => {
                if n > 63 {
                    return Err(EvalError::SecondOrderOverflow(n));
                }
                for mask in 0..1u64 << n {
                    self.so.push((v, mask));
                    let holds = self.eval(body);
                    self.so.pop();
                    if holds? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            MsoFormula::ForallSo(v, body) => {
                if n > 63 {
                    return Err(EvalError::SecondOrderOverflow(n));
                }
                for mask in 0..1u64 << n {
                    self.so.push((v, mask));
                    let holds = self.eval(body);
                    self.so.pop();
                    if !holds? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }
}

/// Evaluates a formula over `word` under `env`; every free variable must be
/// bound. Quantifiers enumerate positions and position subsets, so on the
/// empty word existentials are false and universals true.
pub fn eval_mso(formula: &MsoFormula, word: &DataWord, env: &Environment) -> Result<bool, EvalError> {
    let mut evaluator = Evaluator {
        letters: word.letters(),
        fo: env.first_order.iter().map(|(k, &v)| (k.as_str(), v)).collect(),
        so: env
            .second_order
            .iter()
            .map(|(k, set)| {
                let mask = set.iter().fold(0u64, |acc, &p| acc | 1 << (p - 1));
                (k.as_str(), mask)
            })
            .collect(),
    };
    evaluator.eval(formula)
}

/// Evaluates a sentence (no free variables, empty environment).
pub fn eval_sentence(formula: &MsoFormula, word: &DataWord) -> Result<bool, EvalError> {
    eval_mso(formula, word, &Environment::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::tests::{phi_one, phi_zero};
    use crate::logic::MsoFormula as F;

    fn word(letters: &[u32]) -> DataWord {
        DataWord::new(letters.iter().map(|&i| Name(i)).collect())
    }

    #[test]
    fn repeated_letter_sentence() {
        assert!(eval_sentence(&phi_one(), &word(&[0, 0])).unwrap());
        assert!(!eval_sentence(&phi_one(), &word(&[0, 1])).unwrap());
        assert!(!eval_sentence(&phi_one(), &DataWord::empty()).unwrap());
    }

    #[test]
    fn unrepeated_last_letter_sentence() {
        assert!(eval_sentence(&phi_zero(), &word(&[0, 1])).unwrap());
        assert!(!eval_sentence(&phi_zero(), &word(&[0, 1, 0])).unwrap());
        assert!(eval_sentence(&phi_zero(), &DataWord::empty()).unwrap());
    }

    #[test]
    fn every_value_occurs_twice_sentence() {
        // forall x. exists y. (x<y | y<x) & x ~ y
        let f = F::forall_fo(
            "x",
            F::exists_fo(
                "y",
                F::and(
                    F::or(F::Less("x".into(), "y".into()), F::Less("y".into(), "x".into())),
                    F::Sim("x".into(), "y".into()),
                ),
            ),
        );
        assert!(eval_sentence(&f, &word(&[0, 1, 0, 1])).unwrap());
        assert!(!eval_sentence(&f, &word(&[0, 1, 2])).unwrap());
    }

    #[test]
    fn unbound_variables_are_reported() {
        let open = F::Sim("x".into(), "y".into());
        assert_eq!(
            eval_mso(&open, &word(&[0]), &Environment::default()),
            Err(EvalError::UnboundVariable("x".into()))
        );
        let mut env = Environment::default();
        env.first_order.insert("x".into(), 1);
        env.first_order.insert("y".into(), 1);
        assert_eq!(eval_mso(&open, &word(&[0]), &env), Ok(true));
    }

    #[test]
    fn second_order_membership() {
        // exists X. X(x) under x := 1 on a one-letter word.
        let f = F::exists_so("X", F::Mem("X".into(), "x".into()));
        let mut env = Environment::default();
        env.first_order.insert("x".into(), 1);
        assert!(eval_mso(&f, &word(&[7]), &env).unwrap());
    }
}
