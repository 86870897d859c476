//! Exact calculus for quantized hyperbolic toral automorphisms: Weyl operators on the
//! noncommutative torus, the number theory of the hyperbolic matrix, three evaluators for
//! the asymptotic free-product state, and the pair-partition moment engine for fluctuation
//! statistics.

pub mod cluster;
pub mod matrix;
pub mod moments;
pub mod orbit;
pub mod phase;
pub mod quadratic;
pub mod rat;
pub mod regroup;
pub mod scalar;
pub mod serialize;
pub mod state;
pub mod theta;
pub mod weyl;
pub mod word;

pub use matrix::{HyperbolicMatrix, IntVec2, Mat2, TraceSequence};
pub use phase::Phase;
pub use quadratic::Quad;
pub use scalar::{GaussRat, Scalar};
pub use state::{DeltaConvention, Evaluator};
pub use theta::ThetaParameter;
pub use weyl::{symplectic, WeylMonomial, WeylObservable};
pub use word::{FreeLetter, FreeWord, MonomialWord};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid residue index")]
    InvalidResidue,
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("budget exceeded: required {required}, allowed {allowed}")]
    BudgetExceeded { required: u128, allowed: u128 },
    #[error("symbolic phase not scalar")]
    SymbolicPhase,
    #[error("observable is not centred")]
    NotCentred,
    #[error("observable is not self-adjoint")]
    NotSelfAdjoint,
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
