//! Signed invariants `(mu^±, lambda^±)` read off from Mazur–Tate elements.
//!
//! Level `n` sees the sign opposite to its parity: even levels give the minus
//! invariants and odd levels the plus invariants, with
//! `mu(theta_n) = mu^±` and `lambda(theta_n) = lambda^± + q_n` once
//! `lambda^± < p^n - q_n`. A sign is declared stable when two consecutive
//! levels of the right parity agree and the hypothesis holds at the larger one.

use std::fmt;

use super::{MazurTateError, ThetaElement};
use crate::iwasawa::{q_seq, InvariantPair};
use crate::modsym::{EigenSymbol, Sign};

/// The sign whose invariants level `n` computes.
pub fn sign_of_level(n: u32) -> Sign {
    if n % 2 == 0 {
        Sign::Minus
    } else {
        Sign::Plus
    }
}

/// What one level says about its sign: `theta_n`'s invariants and the implied
/// candidate `(mu, lambda - q_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelReading {
    pub n: u32,
    pub theta: Option<InvariantPair>,
    pub candidate: Option<InvariantPair>,
}

/// Outcome for one sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignOutcome {
    Stabilized {
        mu: u32,
        lambda: usize,
        /// The two levels that agreed; the larger one certifies the hypothesis.
        witness: (u32, u32),
    },
    NotStabilized {
        readings: Vec<LevelReading>,
    },
}

impl SignOutcome {
    pub fn invariants(&self) -> Option<InvariantPair> {
        match *self {
            SignOutcome::Stabilized { mu, lambda, .. } => Some(InvariantPair { mu, lambda }),
            SignOutcome::NotStabilized { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<(u32, u32)> {
        match *self {
            SignOutcome::Stabilized { witness, .. } => Some(witness),
            SignOutcome::NotStabilized { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedInvariants {
    pub p: u64,
    pub plus: SignOutcome,
    pub minus: SignOutcome,
    /// Every level that was computed, in increasing order.
    pub levels: Vec<LevelReading>,
}

impl SignedInvariants {
    /// Read the signed invariants off a list of Mazur–Tate elements for one
    /// prime (any subset of levels, any order).
    pub fn from_thetas(p: u64, thetas: &[ThetaElement]) -> Result<Self, MazurTateError> {
        let mut levels = Vec::new();
        for th in thetas {
            debug_assert_eq!(th.prime(), p);
            let n = th.level();
            let q = q_seq(p, n) as usize;
            let candidate = match th.invariants() {
                Some(inv) if inv.lambda < q => {
                    return Err(MazurTateError::NegativeLambda {
                        n,
                        lambda: inv.lambda,
                        q,
                    })
                }
                Some(inv) => Some(InvariantPair {
                    mu: inv.mu,
                    lambda: inv.lambda - q,
                }),
                None => None,
            };
            levels.push(LevelReading {
                n,
                theta: th.invariants(),
                candidate,
            });
        }
        levels.sort_by_key(|l| l.n);
        let plus = stabilize(p, &levels, Sign::Plus);
        let minus = stabilize(p, &levels, Sign::Minus);
        Ok(SignedInvariants {
            p,
            plus,
            minus,
            levels,
        })
    }

    pub fn get(&self, sign: Sign) -> &SignOutcome {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }

    pub fn mu_plus(&self) -> Option<u32> {
        self.plus.invariants().map(|i| i.mu)
    }

    pub fn lambda_plus(&self) -> Option<usize> {
        self.plus.invariants().map(|i| i.lambda)
    }

    pub fn mu_minus(&self) -> Option<u32> {
        self.minus.invariants().map(|i| i.mu)
    }

    pub fn lambda_minus(&self) -> Option<usize> {
        self.minus.invariants().map(|i| i.lambda)
    }

    /// Both signs stabilized, or `NotStabilized` naming the first that did not.
    pub fn require_stabilized(&self) -> Result<(), MazurTateError> {
        for sign in [Sign::Plus, Sign::Minus] {
            if self.get(sign).invariants().is_none() {
                return Err(MazurTateError::NotStabilized(sign));
            }
        }
        Ok(())
    }
}

fn stabilize(p: u64, levels: &[LevelReading], sign: Sign) -> SignOutcome {
    let readings: Vec<LevelReading> = levels
        .iter()
        .filter(|l| sign_of_level(l.n) == sign)
        .copied()
        .collect();
    for pair in readings.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        if hi.n != lo.n + 2 {
            continue;
        }
        let (Some(a), Some(b)) = (lo.candidate, hi.candidate) else {
            continue;
        };
        let room = p.pow(hi.n) - q_seq(p, hi.n);
        if a == b && (b.lambda as u64) < room {
            return SignOutcome::Stabilized {
                mu: b.mu,
                lambda: b.lambda,
                witness: (lo.n, hi.n),
            };
        }
    }
    SignOutcome::NotStabilized { readings }
}

/// Compute `theta_0 .. theta_{n_max}` (skipping levels whose unit count
/// exceeds `max_evals`) and read off the signed invariants.
pub fn signed_invariants(
    symbol: &EigenSymbol,
    p: u64,
    n_max: u32,
    max_evals: Option<u64>,
) -> Result<(SignedInvariants, Vec<ThetaElement>), MazurTateError> {
    let thetas = (0..=n_max)
        .filter(|&n| within_budget(p, n, max_evals))
        .map(|n| ThetaElement::compute(symbol, p, n))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((SignedInvariants::from_thetas(p, &thetas)?, thetas))
}

/// Whether `theta_n` (which needs `p^{n+1} - p^n` symbol evaluations) fits in
/// the evaluation budget.
pub fn within_budget(p: u64, n: u32, max_evals: Option<u64>) -> bool {
    let Some(budget) = max_evals else {
        return true;
    };
    p.checked_pow(n + 1)
        .is_some_and(|pn1| pn1 - pn1 / p <= budget)
}

impl fmt::Display for SignOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignOutcome::Stabilized { mu, lambda, witness } => {
                write!(f, "mu={mu} lambda={lambda} (levels {},{})", witness.0, witness.1)
            }
            SignOutcome::NotStabilized { .. } => write!(f, "not stabilized"),
        }
    }
}
