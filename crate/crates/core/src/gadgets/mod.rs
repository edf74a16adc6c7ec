//! Executable forms of the gadgets the reduction is assembled from: circuit
//! builders for each polynomial condition, witness constructors for the
//! forward directions, decoders for the backward directions, and exact
//! checkers.

use num_bigint::BigInt;

use crate::pell::PellError;
use crate::quad::QuadError;

pub mod conj;
pub mod integrality;
pub mod lemma33;
pub mod nonzero;
pub mod relation;

pub use conj::{conj_combine, conj_node, conj_value};
pub use integrality::{build_y, lemma22_check, thm12_criterion, thm12_value, Lemma22Outcome};
pub use lemma33::{
    find_lemma33_in_box, lemma33_build, lemma33_witness, refute_lemma33_box, Lemma33Scale,
    Lemma33Templates, Lemma33Witness, SearchStage,
};
pub use nonzero::nonzero_witness;
pub use relation::{relation_decode, relation_f, relation_m_witness, RelationDecode};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GadgetError {
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Pell(#[from] PellError),
    #[error("argument `{0}` must be nonzero")]
    Zero(&'static str),
    #[error("S does not divide T")]
    NotDivisible,
    #[error("A1 = A2; the relation gadget needs distinct arguments")]
    EqualArguments,
    #[error("f(A1, A2, S, T, m) is not zero")]
    RelationNonzero,
    #[error("t = {0} is a rational integer; refutation needs t outside Z")]
    IntegerArgument(BigInt),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
    #[error("{stage} search exceeded its budget of {budget} steps (modulus {modulus})")]
    BudgetExceeded {
        stage: SearchStage,
        budget: u64,
        modulus: BigInt,
    },
    #[error("{stage} search exhausted the residue period {period} modulo {modulus} without a witness")]
    ExhaustedPeriod {
        stage: SearchStage,
        period: u64,
        modulus: BigInt,
    },
}
