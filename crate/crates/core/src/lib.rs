//! Direct-sum and direct-product liftings of binary codes over expander walks
//! and simplicial complexes, with a sum-of-squares list decoder.

pub mod codes;
pub mod collection;
pub mod complex;
pub mod csp;
pub mod decode;
pub mod decoder;
pub mod error;
pub mod graphs;
pub mod lifting;
pub mod oracles;
pub mod ratio;
pub mod seed;
pub mod sos;
pub mod spectral;
pub mod walks;
pub mod words;

pub type Rational = num_rational::Ratio<i64>;

pub use codes::LinearCode;
pub use collection::{Collection, CollectionKind};
pub use complex::{FaceCollection, SimplicialComplex};
pub use csp::XorInstance;
pub use decode::{CoupledList, CoupledPair, DecodeConfig, Radius};
pub use decoder::{Strategy, UniqueDecoder};
pub use error::{Error, Result};
pub use graphs::RegularGraph;
pub use lifting::{LiftFn, LiftSpec, LiftedCode, ProductWord};
pub use oracles::OracleBudget;
pub use sos::{Objective, PseudoExpectation, SolverSettings};
pub use walks::{SplittingTree, SwapOperator, WalkCollection};
pub use words::BinaryWord;
