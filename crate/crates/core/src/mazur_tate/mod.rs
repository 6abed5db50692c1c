//! Mazur–Tate elements of an elliptic curve at a supersingular prime and the
//! plus/minus Iwasawa invariants they determine.

mod bounds;
mod log_table;
mod signed;
mod theta;

pub use bounds::{
    ceil_p_over_ln_p, ceil_p_over_ln_p_exact, check_bounds, corollary_sum, corollary_sum_value,
    exp_less_than, sum_bound_exponent, theorem_bound, BoundReport, Case, CaseAudit,
    CorollarySum, SupNormCheck, Verdict,
};
pub use log_table::LogTable;
pub use signed::{
    sign_of_level, signed_invariants, within_budget, LevelReading, SignOutcome, SignedInvariants,
};
pub use theta::{group_ring_invariants, pascal_transform_mod_p, ThetaElement};

use thiserror::Error;

use crate::iwasawa::IwasawaError;
use crate::modsym::Sign;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MazurTateError {
    #[error("theta_{n} at p={p} has a coefficient that is not p-integral")]
    NonIntegralTheta { p: u64, n: u32 },
    #[error("coefficient sum for {0} vanishes")]
    ZeroSum(Case),
    #[error("lambda(theta_{n}) = {lambda} is smaller than q_{n} = {q}")]
    NegativeLambda { n: u32, lambda: usize, q: usize },
    #[error("{0} invariants did not stabilize within the computed levels")]
    NotStabilized(Sign),
    #[error("Mazur-Tate elements are built from the plus symbol")]
    WrongSign,
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("level {n} at p={p} exceeds the supported modulus")]
    LevelTooLarge { p: u64, n: u32 },
    #[error("exact sum overflowed 64 bits")]
    ValueOverflow,
    #[error(transparent)]
    Iwasawa(#[from] IwasawaError),
}

impl MazurTateError {
    /// Errors that falsify a mathematical expectation (as opposed to
    /// configuration or budget problems).
    pub fn is_anomaly(&self) -> bool {
        matches!(
            self,
            MazurTateError::NonIntegralTheta { .. }
                | MazurTateError::ZeroSum(_)
                | MazurTateError::NegativeLambda { .. }
        )
    }
}
