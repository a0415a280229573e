//! Equations over register indices and the input slot, and the
//! abstraction/realization correspondence between equation sets and
//! concrete transition triples.
//!
//! Register indices are 1-based throughout, matching the written form
//! `k=.`, `.=k`, `k=k'`.

use std::collections::BTreeSet;
use std::fmt;

use crate::atom::Name;
use crate::error::CoreError;

/// A single equation relating the registers before a step, the input
/// letter, and the registers after the step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Equation {
    /// `k=.` — register `k` before the step equals the input.
    RegIn(usize),
    /// `.=k` — the input equals register `k` after the step.
    InReg(usize),
    /// `k=k'` — register `k` before the step equals register `k'` after it.
    RegReg(usize, usize),
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equation::RegIn(k) => write!(f, "{k}=."),
            Equation::InReg(k) => write!(f, ".={k}"),
            Equation::RegReg(k, kb) => write!(f, "{k}={kb}"),
        }
    }
}

/// A finite set of equations, stored deduplicated in canonical order
/// (`RegIn`, then `InReg`, then `RegReg` sorted by indices).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct EquationSet(BTreeSet<Equation>);

impl EquationSet {
    pub fn new<I: IntoIterator<Item = Equation>>(equations: I) -> Self {
        EquationSet(equations.into_iter().collect())
    }

    pub fn empty() -> Self {
        EquationSet(BTreeSet::new())
    }

    pub fn iter(&self) -> impl Iterator<Item = &Equation> {
        self.0.iter()
    }

    pub fn contains(&self, eq: &Equation) -> bool {
        self.0.contains(eq)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// The index `k` with `k=.` in the set, if any (assumes well-formedness).
    pub fn reg_in(&self) -> Option<usize> {
        self.0.iter().find_map(|e| match e {
            Equation::RegIn(k) => Some(*k),
            _ => None,
        })
    }

    /// The index `k` with `.=k` in the set, if any (assumes well-formedness).
    pub fn in_reg(&self) -> Option<usize> {
        self.0.iter().find_map(|e| match e {
            Equation::InReg(k) => Some(*k),
            _ => None,
        })
    }

    /// All `(k, k')` pairs with `k=k'` in the set.
    pub fn reg_reg(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().filter_map(|e| match e {
            Equation::RegReg(k, kb) => Some((*k, *kb)),
            _ => None,
        })
    }

    /// The source register copied into `target`, if any.
    pub fn reg_reg_source(&self, target: usize) -> Option<usize> {
        self.reg_reg().find(|&(_, kb)| kb == target).map(|(k, _)| k)
    }

    /// Checks the well-formedness invariants for register count `m`:
    /// indices in range, at most one `k=.`, at most one `.=k`, the `k=k'`
    /// pairs a partial injection, and triple closure (any two of
    /// `k=.`, `.=k'`, `k=k'` force the third). Returns one message per
    /// violation; an empty list means the set is well-formed.
    pub fn validate(&self, m: usize) -> Vec<String> {
        let mut violations = Vec::new();
        for eq in &self.0 {
            let out_of_range = match *eq {
                Equation::RegIn(k) | Equation::InReg(k) => k < 1 || k > m,
                Equation::RegReg(k, kb) => k < 1 || k > m || kb < 1 || kb > m,
            };
            if out_of_range {
                violations.push(format!("index out of range in {eq} (registers: {m})"));
            }
        }

        let reg_ins: Vec<usize> = self
            .0
            .iter()
            .filter_map(|e| match e {
                Equation::RegIn(k) => Some(*k),
                _ => None,
            })
            .collect();
        if reg_ins.len() > 1 {
            violations.push(format!(
                "two equations of the form k=.: {}",
                reg_ins.iter().map(|k| format!("{k}=.")).collect::<Vec<_>>().join(", ")
            ));
        }
        let in_regs: Vec<usize> = self
            .0
            .iter()
            .filter_map(|e| match e {
                Equation::InReg(k) => Some(*k),
                _ => None,
            })
            .collect();
        if in_regs.len() > 1 {
            violations.push(format!(
                "two equations of the form .=k: {}",
                in_regs.iter().map(|k| format!(".={k}")).collect::<Vec<_>>().join(", ")
            ));
        }

        let pairs: Vec<(usize, usize)> = self.reg_reg().collect();
        for i in 0..pairs.len() {
            for j in i + 1..pairs.len() {
                if pairs[i].0 == pairs[j].0 {
                    violations.push(format!(
                        "register {} copied twice: {}={}, {}={}",
                        pairs[i].0, pairs[i].0, pairs[i].1, pairs[j].0, pairs[j].1
                    ));
                }
                if pairs[i].1 == pairs[j].1 {
                    violations.push(format!(
                        "register {} written twice: {}={}, {}={}",
                        pairs[i].1, pairs[i].0, pairs[i].1, pairs[j].0, pairs[j].1
                    ));
                }
            }
        }

        // Triple closure over {k=., .=k', k=k'}.
        for &k in &reg_ins {
            for &kb in &in_regs {
                if !self.contains(&Equation::RegReg(k, kb)) {
                    violations.push(format!("triple closure: {k}=. and .={kb} but missing {k}={kb}"));
                }
            }
            for &(src, dst) in &pairs {
                if src == k && !self.contains(&Equation::InReg(dst)) {
                    violations.push(format!("triple closure: {k}=. and {src}={dst} but missing .={dst}"));
                }
            }
        }
        for &kb in &in_regs {
            for &(src, dst) in &pairs {
                if dst == kb && !self.contains(&Equation::RegIn(src)) {
                    violations.push(format!("triple closure: .={kb} and {src}={dst} but missing {src}=."));
                }
            }
        }

        violations
    }

    pub fn is_wellformed(&self, m: usize) -> bool {
        self.validate(m).is_empty()
    }

    /// The restriction of the set to equations whose left-hand side reads a
    /// register in `tracked`: `{k=. : k in tracked} ∪ {k=k' : k in tracked}`.
    pub fn restrict_sources(&self, tracked: &BTreeSet<usize>) -> EquationSet {
        EquationSet(
            self.0
                .iter()
                .filter(|e| match e {
                    Equation::RegIn(k) => tracked.contains(k),
                    Equation::RegReg(k, _) => tracked.contains(k),
                    Equation::InReg(_) => false,
                })
                .copied()
                .collect(),
        )
    }

    /// The registers determined after a step from the tracked set `tracked`:
    /// everything written from the input plus everything copied out of a
    /// tracked register.
    pub fn tracked_after(&self, tracked: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut after: BTreeSet<usize> = self.in_reg().into_iter().collect();
        for (k, kb) in self.reg_reg() {
            if tracked.contains(&k) {
                after.insert(kb);
            }
        }
        after
    }

    /// Whether every `k=k'` equation is diagonal (`k = k'`), i.e. no
    /// register value ever moves to a different index.
    pub fn is_rigid(&self) -> bool {
        self.reg_reg().all(|(k, kb)| k == kb)
    }
}

impl fmt::Display for EquationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        let mut first = true;
        for eq in &self.0 {
            if !first {
                write!(f, ", ")?;
            }
            write!(f, "{eq}")?;
            first = false;
        }
        write!(f, "]")
    }
}

impl FromIterator<Equation> for EquationSet {
    fn from_iter<I: IntoIterator<Item = Equation>>(iter: I) -> Self {
        EquationSet(iter.into_iter().collect())
    }
}

fn check_distinct(label: &str, p: &[Name]) -> Result<(), CoreError> {
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] == p[j] {
                return Err(CoreError::RepeatedRegisters(format!(
                    "{label} repeats {} at positions {} and {}",
                    p[i],
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// The abstract transition induced by a concrete step `(p, a, p')` between
/// distinct-register words: `k=.` iff `p_k = a`, `.=k` iff `a = p'_k`,
/// `k=k'` iff `p_k = p'_k'`. Rejects `p` or `p'` with repeated entries.
pub fn induced_abstraction(p: &[Name], a: Name, p_after: &[Name]) -> Result<EquationSet, CoreError> {
    check_distinct("register word before step", p)?;
    check_distinct("register word after step", p_after)?;
    let mut eqs = BTreeSet::new();
    for (i, &v) in p.iter().enumerate() {
        if v == a {
            eqs.insert(Equation::RegIn(i + 1));
        }
    }
    for (i, &v) in p_after.iter().enumerate() {
        if a == v {
            eqs.insert(Equation::InReg(i + 1));
        }
    }
    for (i, &v) in p.iter().enumerate() {
        for (j, &v2) in p_after.iter().enumerate() {
            if v == v2 {
                eqs.insert(Equation::RegReg(i + 1, j + 1));
            }
        }
    }
    Ok(EquationSet(eqs))
}

/// A canonical concrete witness for a well-formed equation set: register
/// words `p`, `p'` and an input `a` over fresh consecutive atoms whose
/// induced abstraction is exactly `eqs`. Fails on ill-formed input.
pub fn realize(eqs: &EquationSet, m: usize) -> Result<(Vec<Name>, Name, Vec<Name>), CoreError> {
    let violations = eqs.validate(m);
    if !violations.is_empty() {
        return Err(CoreError::IllFormedEquations(violations));
    }
    let mut next = 0u32;
    let mut alloc = || {
        let n = Name(next);
        next += 1;
        n
    };
    let p: Vec<Name> = (0..m).map(|_| alloc()).collect();
    let a = match eqs.reg_in() {
        Some(k) => p[k - 1],
        None => alloc(),
    };
    let p_after: Vec<Name> = (1..=m)
        .map(|kb| {
            if eqs.contains(&Equation::InReg(kb)) {
                a
            } else if let Some(k) = eqs.reg_reg_source(kb) {
                p[k - 1]
            } else {
                alloc()
            }
        })
        .collect();
    Ok((p, a, p_after))
}

/// Whether the concrete triple `(q, b, q')` satisfies every equation in
/// `eqs`. Only the listed equations are required to hold; `q` and `q'` may
/// repeat entries.
pub fn is_consistent(q: &[Name], b: Name, q_after: &[Name], eqs: &EquationSet) -> bool {
    eqs.iter().all(|eq| match *eq {
        Equation::RegIn(k) => q[k - 1] == b,
        Equation::InReg(k) => b == q_after[k - 1],
        Equation::RegReg(k, kb) => q[k - 1] == q_after[kb - 1],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Equation::*;

    fn eqs(v: &[Equation]) -> EquationSet {
        EquationSet::new(v.iter().copied())
    }

    #[test]
    fn validate_rejects_two_reg_in() {
        let e = eqs(&[RegIn(1), RegIn(2)]);
        let violations = e.validate(2);
        assert_eq!(violations.len(), 1);
        assert!(violations[0].contains("k=."), "{violations:?}");
    }

    #[test]
    fn validate_requires_triple_closure() {
        let e = eqs(&[RegIn(1), InReg(2)]);
        let violations = e.validate(2);
        assert_eq!(violations.len(), 1);
        assert!(violations[0].contains("missing 1=2"), "{violations:?}");
    }

    #[test]
    fn validate_accepts_empty_set_with_no_registers() {
        assert!(eqs(&[]).validate(0).is_empty());
    }

    #[test]
    fn validate_rejects_out_of_range_index() {
        let violations = eqs(&[RegIn(2)]).validate(1);
        assert!(violations.iter().any(|v| v.contains("out of range")), "{violations:?}");
    }

    #[test]
    fn validate_rejects_non_injective_copies() {
        let violations = eqs(&[RegReg(1, 1), RegReg(1, 2)]).validate(2);
        assert!(violations.iter().any(|v| v.contains("copied twice")), "{violations:?}");
        let violations = eqs(&[RegReg(1, 2), RegReg(2, 2)]).validate(2);
        assert!(violations.iter().any(|v| v.contains("written twice")), "{violations:?}");
    }

    #[test]
    fn abstraction_of_store_and_shift() {
        // p = (1,2), a = 1, p' = (2,3): register 1 read, register 2 shifted.
        let e = induced_abstraction(&[Name(1), Name(2)], Name(1), &[Name(2), Name(3)]).unwrap();
        assert_eq!(e, eqs(&[RegIn(1), RegReg(2, 1)]));
    }

    #[test]
    fn abstraction_of_identity_registers() {
        let e = induced_abstraction(&[Name(1), Name(2)], Name(3), &[Name(1), Name(2)]).unwrap();
        assert_eq!(e, eqs(&[RegReg(1, 1), RegReg(2, 2)]));
    }

    #[test]
    fn abstraction_closes_the_triple() {
        let e = induced_abstraction(&[Name(1), Name(2)], Name(1), &[Name(1), Name(3)]).unwrap();
        assert_eq!(e, eqs(&[RegIn(1), InReg(1), RegReg(1, 1)]));
    }

    #[test]
    fn abstraction_rejects_repeated_registers() {
        assert!(induced_abstraction(&[Name(1), Name(1)], Name(2), &[Name(3), Name(4)]).is_err());
    }

    #[test]
    fn realize_round_trips_the_examples() {
        for (set, m) in [
            (eqs(&[RegIn(1), RegReg(2, 1)]), 2),
            (eqs(&[]), 1),
            (eqs(&[InReg(1)]), 1),
        ] {
            let (p, a, p_after) = realize(&set, m).unwrap();
            assert_eq!(induced_abstraction(&p, a, &p_after).unwrap(), set);
        }
    }

    #[test]
    fn realize_example_shapes() {
        // {.=1}, m=1: input stored, old register fresh.
        let (p, a, p_after) = realize(&eqs(&[InReg(1)]), 1).unwrap();
        assert_ne!(p[0], a);
        assert_eq!(p_after[0], a);
        // {}, m=1: everything fresh and distinct.
        let (p, a, p_after) = realize(&eqs(&[]), 1).unwrap();
        assert!(p[0] != a && a != p_after[0] && p[0] != p_after[0]);
    }

    #[test]
    fn realize_rejects_ill_formed_sets() {
        assert!(realize(&eqs(&[RegIn(1), RegIn(2)]), 2).is_err());
    }

    #[test]
    fn consistency_is_implication_only() {
        let q = [Name(5), Name(5)];
        let q_after = [Name(5), Name(7)];
        assert!(is_consistent(&q, Name(5), &q_after, &eqs(&[RegIn(1)])));
        assert!(!is_consistent(&q, Name(5), &q_after, &eqs(&[RegReg(1, 2)])));
        assert!(is_consistent(&[Name(3)], Name(9), &[Name(7)], &eqs(&[])));
    }

    #[test]
    fn tracked_step_follows_writes_and_tracked_copies() {
        let e = eqs(&[InReg(1), RegReg(2, 2)]);
        let from: BTreeSet<usize> = [2].into_iter().collect();
        assert_eq!(e.tracked_after(&from), [1, 2].into_iter().collect());
        let from: BTreeSet<usize> = BTreeSet::new();
        assert_eq!(e.tracked_after(&from), [1].into_iter().collect());
    }

    #[test]
    fn restriction_keeps_only_tracked_sources() {
        let e = eqs(&[RegIn(1), InReg(2), RegReg(1, 2), RegReg(2, 1)]);
        let tracked: BTreeSet<usize> = [2].into_iter().collect();
        assert_eq!(e.restrict_sources(&tracked), eqs(&[RegReg(2, 1)]));
    }
}
