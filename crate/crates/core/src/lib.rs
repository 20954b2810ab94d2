//! Aperiodic transformation semigroups, star-free languages and the
//! monotonicity hierarchy of their minimal automata.

pub mod automata;
pub mod error;
pub mod families;
pub mod fixtures;
pub mod langops;
pub mod monotonicity;
pub mod search;
pub mod semigroup;
pub mod transform;
pub mod verify;

pub use automata::{Automaton, AutomatonFile, ComplexityReport, Dfa, Idfa, Image};
pub use error::{Error, Result};
pub use families::{FamilyId, FamilyReport, FamilyTag};
pub use langops::{BoolOp, Nfa};
pub use monotonicity::{check_order, classify, find_monotonic_order, Classification, OrderWitness};
pub use search::{ConflictGraph, SearchConfig, SearchResult};
pub use semigroup::Semigroup;
pub use transform::{PartialTransformation, StateId, Transform, Transformation};
pub use verify::Check;
