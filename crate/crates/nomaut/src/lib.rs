//! Recognition and transformation of data languages over an infinite
//! alphabet of atoms.
//!
//! The central object is the symbolic automaton [`Nofa`]: a finite control
//! graph whose transitions are labelled with equation sets relating the
//! registers before a step, the input letter, and the registers after the
//! step. One syntax carries two semantics, selected by a tag:
//!
//! * [`Semantics::Exact`] — states are a control label plus `m` pairwise
//!   distinct register values; a concrete step must realize its equation set
//!   exactly (absent equations mean inequality).
//! * [`Semantics::Consistency`] — registers may repeat and a step only has
//!   to satisfy the listed equations. This interpretation accepts the
//!   positive closure of the exact language: the least language closed under
//!   arbitrary (possibly merging) renamings of atoms.
//!
//! On top of the data model, [`transforms`] implements the construction
//! chain from exact automata to equivalent machines for the closure
//! language: register tracking (guess elimination), rigidification,
//! finite-state unification-based automata, and positive register automata.
//! [`logic`] provides monadic second-order logic with data-equality tests,
//! including a generator producing a positive sentence equivalent to a given
//! automaton's closure language. [`oracle`] holds the brute-force reference
//! implementations the whole crate is tested against.

pub mod atom;
pub mod corpus;
pub mod equation;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod fsuba;
pub mod logic;
pub mod nofa;
pub mod oracle;
pub mod regaut;
pub mod semantics;
pub mod tracked;
pub mod transforms;

pub use atom::{DataWord, Name};
pub use equation::{Equation, EquationSet};
pub use error::{CoreError, ParseError, TransformError};
pub use fsuba::Fsuba;
pub use logic::MsoFormula;
pub use nofa::{AbstractTransition, Nofa, Semantics};
pub use regaut::RegisterAutomaton;
pub use semantics::Acceptor;
pub use tracked::TrackedNofra;
