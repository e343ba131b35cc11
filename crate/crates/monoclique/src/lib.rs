//! Boolean circuit toolkit built around clique functions.
//!
//! The crate covers one experimental pipeline end to end: convert a circuit
//! over AND/OR/NOT into standard form with negations only at the inputs,
//! expand it into a disjunctive normal form, replace negated literals by the
//! constant 1 to obtain a monotone circuit, and then check exhaustively
//! whether the replacement preserved the function. Clique circuits are the
//! test bed: generators for several clique circuit families, a brute-force
//! clique oracle, blow-up measurements, and a seeded search for circuits on
//! which negation removal changes behaviour.

pub mod circuit;
pub mod cli;
pub mod clique;
pub mod corpus;
pub mod dnf;
pub mod passes;
pub mod verify;
