//! Exact modular symbols for `Gamma_0(N)` in weight 2.

mod eigen;
mod heilbronn;
mod p1;
mod space;

pub use eigen::{manin_relations_hold, EigenSymbol, Sign, CUTTING_BOUND, VERIFY_FROM};
pub use heilbronn::merel;
pub use p1::{p1_size, P1List};
pub use space::{identity, mat_mul, trace, Matrix, ModularSymbolSpace, S, U, U2};

use thiserror::Error;

use crate::curves::CurveError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModSymError {
    #[error("eigenspace still has dimension {dim} after cutting with T_l for l in {primes:?}")]
    EigenlineNotUnique { dim: usize, primes: Vec<u64> },
    #[error("no eigenline for curve {label} at level {level}")]
    EigenlineEmpty { level: u64, label: String },
    #[error("normalized symbol value does not fit in 64 bits")]
    ValueOverflow,
    #[error("invalid symbol data: {0}")]
    InvalidSymbol(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}
