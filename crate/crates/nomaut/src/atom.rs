//! Atoms and data words.
//!
//! An atom (also called a name or data value) is an element of a fixed
//! countably infinite alphabet. The only observable structure on atoms is
//! equality, so they are represented by plain numeric ids.

use std::collections::BTreeSet;
use std::fmt;

/// An atom of the infinite alphabet. Two atoms are equal iff their ids are.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(pub u32);

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite sequence of atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DataWord(pub Vec<Name>);

impl DataWord {
    pub fn new(letters: Vec<Name>) -> Self {
        DataWord(letters)
    }

    /// The empty word.
    pub fn empty() -> Self {
        DataWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Name] {
        &self.0
    }

    /// The set of atoms occurring in the word (its support).
    pub fn names(&self) -> BTreeSet<Name> {
        self.0.iter().copied().collect()
    }
}

impl fmt::Display for DataWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for n in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{n}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromIterator<Name> for DataWord {
    fn from_iter<I: IntoIterator<Item = Name>>(iter: I) -> Self {
        DataWord(iter.into_iter().collect())
    }
}

/// Atoms with ids `0..n`, handy for bounded enumeration.
pub fn initial_atoms(n: usize) -> Vec<Name> {
    (0..n as u32).map(Name).collect()
}

/// `count` atoms that are fresh for everything in `avoid`, allocated as
/// consecutive ids above the largest id in use.
pub fn fresh_atoms(avoid: &BTreeSet<Name>, count: usize) -> Vec<Name> {
    let base = avoid.iter().next_back().map(|n| n.0 + 1).unwrap_or(0);
    (0..count as u32).map(|i| Name(base + i)).collect()
}
