//! Plus/minus Iwasawa invariants of elliptic curves at supersingular primes.
//!
//! The pipeline runs entirely in exact arithmetic:
//!
//! - [`curves`]: Weierstrass models, traces of Frobenius by point counting,
//!   supersingular primes.
//! - [`modsym`]: Manin presentation of weight-2 modular symbols for
//!   `Gamma_0(N)`, Hecke operators, and the normalized eigen-functional
//!   `r -> [r]^±`.
//! - [`iwasawa`]: polynomials with `p`-integral rational coefficients, their
//!   `mu`/`lambda` invariants, `omega_n`, and division by `omega_n`.
//! - [`mazur_tate`]: Mazur–Tate elements `theta_n`, the signed invariants read
//!   off from them, the coefficient sums that compute `mu` under small
//!   `lambda`, and the bound audit.

pub mod arith;
pub mod curves;
pub mod iwasawa;
pub mod linalg;
pub mod mazur_tate;
pub mod modsym;

pub use curves::{CurveError, EllipticCurve, FrobeniusTable};
pub use iwasawa::{InvariantPair, IwasawaError, PAdicPoly};
pub use mazur_tate::{LogTable, MazurTateError, SignedInvariants, ThetaElement};
pub use modsym::{EigenSymbol, ModSymError, ModularSymbolSpace, Sign};
