//! Algebra of assume-guarantee IO contracts whose assumptions and guarantees
//! are conjunctions of linear inequalities.
//!
//! A contract `(I, O, A, G)` constrains a component through a list of
//! assumptions `A` on its input variables `I` and a list of guarantees `G`
//! over its inputs and outputs. The operations in [`contract`] (composition,
//! quotient, strong merging, refinement checking) always return contracts
//! expressed over the interface variables of the result; internal variables
//! are eliminated with the polyhedral machinery in [`theory`].
//!
//! The crate is `no_std` (with `alloc`) so the solver and the algebra can be
//! embedded anywhere; file formats and the command-line front end live in the
//! companion `agc-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod contract;
pub mod fixedpoint;
pub mod lp;
pub mod multiagent;
pub mod parser;
pub mod scalar;
pub mod term;
pub mod termlist;
pub mod theory;
pub mod var;

pub use contract::{AlgebraError, ComposeTrace, Connection, IoContract, QuotientTrace};
pub use lp::{LpOutcome, LpProblem};
pub use parser::ParseError;
pub use term::PolyhedralTerm;
pub use termlist::TermList;
pub use theory::EliminationError;
pub use var::Var;
