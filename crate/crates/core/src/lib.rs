//! Parrondo games as lattice gas automata.
//!
//! * [`analysis`]: Markov analysis of games A and B and the ratchet potential.
//! * [`classical`]: exact evolution of the payoff distribution.
//! * [`crw`]: correlated random walk (probabilistic lattice gas).
//! * [`qlga`]: single-particle quantum lattice gas with phase potentials.
//! * [`montecarlo`]: seeded trajectory sampling of the classical games.

pub mod analysis;
pub mod classical;
pub mod crw;
pub mod error;
pub mod montecarlo;
pub mod qlga;

pub use error::{Error, Result};
