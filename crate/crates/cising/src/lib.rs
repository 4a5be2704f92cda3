//! Exact evaluation of complex-weighted Ising / random-cluster partition
//! functions, two-terminal gadget calculus, IQP circuit encodings, and the
//! approximation-hardness classifiers built on top of them.
//!
//! Everything downstream of the numerics layer works with certified values:
//! either exact elements of a cyclotomic field (with rational coefficients)
//! or rational rectangles with an explicit error radius. No floating point
//! leaks into any result that a caller can observe.

pub mod classify;
pub mod corpus;
pub mod counting;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod iqp;
pub mod numerics;
pub mod partition;

pub use error::{CisingError, Result};
