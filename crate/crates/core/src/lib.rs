//! Exact-arithmetic tools for generic rigidity and generic global rigidity
//! of graphs.

pub mod error;
pub mod gadgets;
pub mod ggr;
pub mod graph;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod matroid;
pub mod oracles;
pub mod rigidity;
pub mod scalar;
pub mod stress;
pub mod verdict;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, VertexSet};
pub use linalg::Matrix;
pub use rigidity::{Framework, RandomRegime};
pub use scalar::{Field, Scalar};
pub use verdict::{DecisionBasis, Property, Verdict};

pub type Rational = num_rational::BigRational;
pub type Integer = num_bigint::BigInt;
pub type RationalMatrix = Matrix<Rational>;
pub type IntegerMatrix = Matrix<Integer>;
