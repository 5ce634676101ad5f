//! Synchronous team semantics for LTL and CTL.
//!
//! Team path checking over finite teams of ultimately periodic traces,
//! splitjunction-free team model checking of Kripke structures, multiset
//! team CTL model checking, QBF reduction generators, and brute-force
//! reference evaluators used for differential testing.

pub mod classical;
pub mod format;
pub mod formula;
pub mod kripke;
pub mod oracle;
pub mod parser;
pub mod qbf;
pub mod random;
pub mod selftest;
pub mod splitfree;
pub mod team_ctl;
pub mod team_ltl;
pub mod trace;

pub use formula::{
    AtomKind, AtomRegistry, AtomStructure, Ctl, FragmentFlags, GenAtomApp, GenAtomDef, Ltl,
};
pub use kripke::{KripkeStructure, MultiTeam};
pub use parser::{parse_ctl, parse_ltl, ParseError, SourceSpan};
pub use trace::{LassoTrace, Letter, TeamEncoding};
