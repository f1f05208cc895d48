//! Core library: the comparison game and its solver, witness synthesis
//! from winning strategies, stream-sorting constructions over eventually
//! constant sequences, and the finite-stage priority diagonalizer.

pub mod canon;
pub mod config;
pub mod diag;
pub mod game;
pub mod solver;
pub mod sort;
pub mod testgen;
pub mod witness;

pub use config::{AdjacencyMode, Config, OutputFormat};
pub use game::GameParams;
pub use solver::{solve, SolveResult, Winner};
