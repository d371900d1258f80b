//! Toolkit for history-determinism of transition-based parity automata.
//!
//! Automata use min-even acceptance: a run is accepting iff the least
//! priority seen infinitely often is even. Games are solved by Zielonka's
//! recursive algorithm after converting Muller conditions to parity
//! conditions through Zielonka trees.

pub mod automaton;
pub mod buchi;
pub mod error;
pub mod game;
pub mod graph;
pub mod hd;
pub mod lasso;
pub mod normal;
pub mod reduction;
pub mod suite;
pub mod token;
pub mod zielonka;

pub use automaton::{ParityAutomaton, Transition};
pub use error::{Error, Result};
pub use game::{GameArena, ParityGame, Player};
pub use lasso::LassoWord;
