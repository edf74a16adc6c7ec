//! Text formats: quadratic-integer literals, polynomial files, circuit
//! files and witness bundles. Every emitter is canonical and every parser
//! reports errors with a line and column.

use zreduce_core::{CircuitError, PolyError, QuadError};

pub mod bundle;
pub mod circuit;
pub mod poly;
pub mod quad;

pub use bundle::{emit_bundle, parse_bundle};
pub use circuit::{emit_circuit, parse_circuit, CircuitFile};
pub use poly::{emit_poly, parse_poly};
pub use quad::{parse_quad, parse_quad_list};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        column,
        message: message.into(),
    }
}
