//! Reduction compiler from integer Diophantine equations to equations over
//! the Gaussian integers, together with the exact arithmetic needed to
//! check every gadget it is built from.
//!
//! The crate is `no_std` and needs only `alloc`; parsing, file formats and
//! the command line live in the companion `zreduce` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod circuit;
pub mod gadgets;
pub mod pell;
pub mod pipeline;
pub mod poly;
pub mod quad;
pub mod ring;

pub use circuit::{Circuit, CircuitBuilder, CircuitError, ExpandError, Node, NodeId};
pub use num_bigint::BigInt;
pub use poly::{PolyError, SparsePoly, VarName};
pub use quad::{FieldD, QuadError, QuadInt, QuadRat};
pub use ring::Ring;
