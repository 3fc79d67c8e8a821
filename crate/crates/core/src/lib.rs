//! Resolvers for nondeterministic parity automata: history-determinism,
//! almost-sure and memoryless resolvability, and the supporting language,
//! game and Markov-decision-process algorithms.

pub mod automaton;
pub mod bitset;
pub mod classify;
pub mod error;
pub mod games;
pub mod gallery;
pub mod graph;
pub mod lang;
pub mod lasso;
pub mod mdp;
pub mod limits;
pub mod linalg;
pub mod prob;
pub mod rational;
pub mod resolver;
pub mod zielonka;

pub use automaton::{AcceptanceClass, AutomatonBuilder, Letter, ParityAutomaton, Priority, State, Transition, TransitionId};
pub use error::{Error, Result};
pub use lasso::LassoWord;
pub use limits::Limits;
pub use rational::Rat;
