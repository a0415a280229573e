//! Monadic second-order logic over data words, with an order predicate on
//! positions and a data-equality predicate `~`.
//!
//! First-order variables range over word positions, second-order variables
//! over sets of positions. The positive fragment consists of the formulas
//! whose negation normal form contains no negated `~` atom; languages
//! definable in it are closed under arbitrary renamings of atoms.

mod eval;
mod generate;

pub use eval::{eval_mso, eval_sentence, Environment};
pub use generate::automaton_to_mso;

use std::collections::BTreeSet;

/// A formula of monadic second-order logic with data-equality tests.
/// First-order and second-order variables live in separate namespaces,
/// distinguished structurally by the constructors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MsoFormula {
    /// `x < y` — position `x` comes before position `y`.
    Less(String, String),
    /// `x ~ y` — the same data value occurs at positions `x` and `y`.
    Sim(String, String),
    /// `X(x)` — position `x` belongs to the set `X`.
    Mem(String, String),
    Not(Box<MsoFormula>),
    Or(Box<MsoFormula>, Box<MsoFormula>),
    And(Box<MsoFormula>, Box<MsoFormula>),
    ExistsFo(String, Box<MsoFormula>),
    ForallFo(String, Box<MsoFormula>),
    ExistsSo(String, Box<MsoFormula>),
    ForallSo(String, Box<MsoFormula>),
}

impl MsoFormula {
    pub fn negate(inner: MsoFormula) -> MsoFormula {
        MsoFormula::Not(Box::new(inner))
    }

    pub fn or(lhs: MsoFormula, rhs: MsoFormula) -> MsoFormula {
        MsoFormula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn and(lhs: MsoFormula, rhs: MsoFormula) -> MsoFormula {
        MsoFormula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn exists_fo(var: impl Into<String>, body: MsoFormula) -> MsoFormula {
        MsoFormula::ExistsFo(var.into(), Box::new(body))
    }

    pub fn forall_fo(var: impl Into<String>, body: MsoFormula) -> MsoFormula {
        MsoFormula::ForallFo(var.into(), Box::new(body))
    }

    pub fn exists_so(var: impl Into<String>, body: MsoFormula) -> MsoFormula {
        MsoFormula::ExistsSo(var.into(), Box::new(body))
    }

    pub fn forall_so(var: impl Into<String>, body: MsoFormula) -> MsoFormula {
        MsoFormula::ForallSo(var.into(), Box::new(body))
    }

    /// The free first-order and second-order variables.
    pub fn free_variables(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut fo = BTreeSet::new();
        let mut so = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut Vec::new(), &mut fo, &mut so);
        (fo, so)
    }

    fn collect_free(
        &self,
        bound_fo: &mut Vec<String>,
        bound_so: &mut Vec<String>,
        fo: &mut BTreeSet<String>,
        so: &mut BTreeSet<String>,
    ) {
        match self {
            MsoFormula::Less(x, y) | MsoFormula::Sim(x, y) => {
                for v in [x, y] {
                    if !bound_fo.contains(v) {
                        fo.insert(v.clone());
                    }
                }
            }
            MsoFormula::Mem(set, x) => {
                if !bound_so.contains(set) {
                    so.insert(set.clone());
                }
                if !bound_fo.contains(x) {
                    fo.insert(x.clone());
                }
            }
            MsoFormula::Not(inner) => inner.collect_free(bound_fo, bound_so, fo, so),
            MsoFormula::Or(l, r) | MsoFormula::And(l, r) => {
                l.collect_free(bound_fo, bound_so, fo, so);
                r.collect_free(bound_fo, bound_so, fo, so);
            }
            MsoFormula::ExistsFo(v, body) | MsoFormula::ForallFo(v, body) => {
                bound_fo.push(v.clone());
                body.collect_free(bound_fo, bound_so, fo, so);
                bound_fo.pop();
            }
            MsoFormula::ExistsSo(v, body) | MsoFormula::ForallSo(v, body) => {
                bound_so.push(v.clone());
                body.collect_free(bound_fo, bound_so, fo, so);
                bound_so.pop();
            }
        }
    }

    /// Whether the formula is a sentence (has no free variables).
    pub fn is_sentence(&self) -> bool {
        let (fo, so) = self.free_variables();
        fo.is_empty() && so.is_empty()
    }

    /// Whether the formula mentions a second-order quantifier; evaluation of
    /// those enumerates all position subsets, so callers bound word length.
    pub fn has_so_quantifier(&self) -> bool {
        match self {
            MsoFormula::Less(..) | MsoFormula::Sim(..) | MsoFormula::Mem(..) => false,
            MsoFormula::Not(inner) => inner.has_so_quantifier(),
            MsoFormula::Or(l, r) | MsoFormula::And(l, r) => {
                l.has_so_quantifier() || r.has_so_quantifier()
            }
            MsoFormula::ExistsFo(_, body) | MsoFormula::ForallFo(_, body) => body.has_so_quantifier(),
            MsoFormula::ExistsSo(..) | MsoFormula::ForallSo(..) => true,
        }
    }
}

/// The negation normal form: negation pushed inward through De Morgan and
/// quantifier dualities until it applies to atoms only.
pub fn nnf(formula: &MsoFormula) -> MsoFormula {
    match formula {
        MsoFormula::Less(..) | MsoFormula::Sim(..) | MsoFormula::Mem(..) => formula.clone(),
        MsoFormula::Not(inner) => nnf_negated(inner),
        MsoFormula::Or(l, r) => MsoFormula::or(nnf(l), nnf(r)),
        MsoFormula::And(l, r) => MsoFormula::and(nnf(l), nnf(r)),
        MsoFormula::ExistsFo(v, body) => MsoFormula::exists_fo(v.clone(), nnf(body)),
        MsoFormula::ForallFo(v, body) => MsoFormula::forall_fo(v.clone(), nnf(body)),
        MsoFormula::ExistsSo(v, body) => MsoFormula::exists_so(v.clone(), nnf(body)),
        MsoFormula::ForallSo(v, body) => MsoFormula::forall_so(v.clone(), nnf(body)),
    }
}

fn nnf_negated(formula: &MsoFormula) -> MsoFormula {
    match formula {
        MsoFormula::Less(..) | MsoFormula::Sim(..) | MsoFormula::Mem(..) => {
            MsoFormula::negate(formula.clone())
        }
        MsoFormula::Not(inner) => nnf(inner),
        MsoFormula::Or(l, r) => MsoFormula::and(nnf_negated(l), nnf_negated(r)),
        MsoFormula::And(l, r) => MsoFormula::or(nnf_negated(l), nnf_negated(r)),
        MsoFormula::ExistsFo(v, body) => MsoFormula::forall_fo(v.clone(), nnf_negated(body)),
        MsoFormula::ForallFo(v, body) => MsoFormula::exists_fo(v.clone(), nnf_negated(body)),
        MsoFormula::ExistsSo(v, body) => MsoFormula::forall_so(v.clone(), nnf_negated(body)),
        MsoFormula::ForallSo(v, body) => MsoFormula::exists_so(v.clone(), nnf_negated(body)),
    }
}

/// Whether the canonical negation normal form contains no negated `~` atom.
pub fn is_positive_formula(formula: &MsoFormula) -> bool {
    fn no_negated_sim(formula: &MsoFormula) -> bool {
        match formula {
            MsoFormula::Less(..) | MsoFormula::Sim(..) | MsoFormula::Mem(..) => true,
            MsoFormula::Not(inner) => !matches!(**inner, MsoFormula::Sim(..)),
            MsoFormula::Or(l, r) | MsoFormula::And(l, r) => no_negated_sim(l) && no_negated_sim(r),
            MsoFormula::ExistsFo(_, body)
            | MsoFormula::ForallFo(_, body)
            | MsoFormula::ExistsSo(_, body)
            | MsoFormula::ForallSo(_, body) => no_negated_sim(body),
        }
    }
    no_negated_sim(&nnf(formula))
}

#[cfg(test)]
mod tests {
    use super::*;
    use MsoFormula as F;

    fn less(x: &str, y: &str) -> F {
        F::Less(x.into(), y.into())
    }

    fn sim(x: &str, y: &str) -> F {
        F::Sim(x.into(), y.into())
    }

    /// `exists x. exists y. x < y & x ~ y` — some letter occurs twice.
    pub(crate) fn phi_one() -> F {
        F::exists_fo("x", F::exists_fo("y", F::and(less("x", "y"), sim("x", "y"))))
    }

    /// `forall y. last(y) => forall x. x < y => !(x ~ y)` — the last letter
    /// is unrepeated.
    pub(crate) fn phi_zero() -> F {
        let last_y = F::negate(F::exists_fo("z", less("y", "z")));
        let no_match = F::forall_fo("x", F::or(F::negate(less("x", "y")), F::negate(sim("x", "y"))));
        F::forall_fo("y", F::or(F::negate(last_y), no_match))
    }

    #[test]
    fn de_morgan_pushes_through_or() {
        let f = F::negate(F::or(less("x", "y"), sim("x", "y")));
        assert_eq!(nnf(&f), F::and(F::negate(less("x", "y")), F::negate(sim("x", "y"))));
    }

    #[test]
    fn quantifier_duality() {
        let f = F::negate(F::exists_fo("x", sim("x", "x")));
        assert_eq!(nnf(&f), F::forall_fo("x", F::negate(sim("x", "x"))));
    }

    #[test]
    fn double_negation_vanishes() {
        let f = F::negate(F::negate(sim("x", "y")));
        assert_eq!(nnf(&f), sim("x", "y"));
    }

    #[test]
    fn positivity_of_the_example_sentences() {
        assert!(is_positive_formula(&phi_one()));
        assert!(!is_positive_formula(&phi_zero()));
        // Negation on order atoms does not hurt positivity.
        assert!(is_positive_formula(&F::and(sim("x", "y"), F::negate(less("x", "y")))));
    }

    #[test]
    fn free_variables_and_sentences() {
        assert!(phi_one().is_sentence());
        assert!(phi_zero().is_sentence());
        let open = F::exists_fo("x", F::Mem("X".into(), "x".into()));
        let (fo, so) = open.free_variables();
        assert!(fo.is_empty());
        assert_eq!(so, ["X".to_string()].into_iter().collect());
    }
}
