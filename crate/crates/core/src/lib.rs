//! Generalized medians, total orderization, and checkers for
//! total-orderization invariance on distributive and vector lattices.

pub mod error;
pub mod finite;
pub mod lattice;
pub mod orderization;
pub mod pointwise;
pub mod rng;
pub mod scalar;
pub mod tuple;

pub use error::{Error, Result};
pub use lattice::{is_chain, leq, verify_lattice_laws, ElemId, FiniteLattice, Lattice, Strategy};
pub use orderization::{
    m_k, m_k_pointwise, median3, total_orderization, total_orderization_pointwise,
    TotalOrderization,
};
pub use scalar::{Scalar, Q};
pub use tuple::{CoordTuple, ExactTuple, RealTuple};
pub mod vector;
pub mod certificate;
pub mod multilinear;
pub mod invariance;
pub mod syntax;
pub mod suites;
