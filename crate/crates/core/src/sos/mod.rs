//! Sum-of-squares engine: pseudo-expectations, the decoding programs and their solver.

pub mod lifted;
pub mod pseudo;
pub mod solver;
pub mod tensorial;

pub use lifted::{progress_step, LiftedMoments, ProgressStep};
pub use pseudo::PseudoExpectation;
pub use solver::{default_degree, Objective, Program, SolveReport, SolverSettings};
