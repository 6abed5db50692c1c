//! Coefficient sums that compute `mu^±` under small `lambda^±`, the resulting
//! upper bounds on `mu^±`, and the size estimates that lead to them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{LogTable, MazurTateError, SignedInvariants};
use crate::arith::ord_rat;
use crate::modsym::{EigenSymbol, Sign};

/// The four small-`lambda` cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Case {
    /// `lambda^- = 0`: `S1 = sum_{a mod p} [a/p]^+`.
    MinusLambda0,
    /// `lambda^+ = 0`: `S2 = sum_{a mod p^2} [a/p^2]^+`.
    PlusLambda0,
    /// `lambda^- = 1`: `S3 = sum_{a mod p^3} binom(log a, p) [a/p^3]^+`.
    MinusLambda1,
    /// `lambda^+ = 1`: `S4 = sum_{a mod p^2} log(a) [a/p^2]^+`.
    PlusLambda1,
}

impl Case {
    pub const ALL: [Case; 4] = [
        Case::MinusLambda0,
        Case::PlusLambda0,
        Case::MinusLambda1,
        Case::PlusLambda1,
    ];

    pub fn sign(self) -> Sign {
        match self {
            Case::MinusLambda0 | Case::MinusLambda1 => Sign::Minus,
            Case::PlusLambda0 | Case::PlusLambda1 => Sign::Plus,
        }
    }

    pub fn lambda(self) -> usize {
        match self {
            Case::MinusLambda0 | Case::PlusLambda0 => 0,
            Case::MinusLambda1 | Case::PlusLambda1 => 1,
        }
    }

    /// Exponent `k` of the denominator `p^k` summed over.
    pub fn modulus_exponent(self) -> u32 {
        match self {
            Case::MinusLambda0 => 1,
            Case::PlusLambda0 | Case::PlusLambda1 => 2,
            Case::MinusLambda1 => 3,
        }
    }

    /// Name of the sum, `S1` .. `S4`.
    pub fn sum_name(self) -> &'static str {
        match self {
            Case::MinusLambda0 => "S1",
            Case::PlusLambda0 => "S2",
            Case::MinusLambda1 => "S3",
            Case::PlusLambda1 => "S4",
        }
    }

    /// The Mazur–Tate level and `T`-degree whose coefficient equals this sum.
    pub fn theta_coefficient(self, p: u64) -> (u32, usize) {
        match self {
            Case::MinusLambda0 => (0, 0),
            Case::PlusLambda0 => (1, 0),
            Case::PlusLambda1 => (1, 1),
            Case::MinusLambda1 => (2, p as usize),
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign() {
            Sign::Plus => "+",
            Sign::Minus => "-",
        };
        write!(f, "lambda{s}={}", self.lambda())
    }
}

/// The exact value of a case's sum, computed by direct summation over units.
pub fn corollary_sum_value(symbol: &EigenSymbol, p: u64, case: Case) -> Result<BigRational, MazurTateError> {
    if symbol.sign() != Sign::Plus {
        return Err(MazurTateError::WrongSign);
    }
    let k = case.modulus_exponent();
    let table = LogTable::new(p, k - 1)?;
    let m = table.modulus();
    let units = (1..m).filter(|a| a % p != 0);
    let total: BigInt = match case {
        Case::MinusLambda0 | Case::PlusLambda0 => units
            .map(|a| BigInt::from(symbol.eval_numerator(a as i64, m as i64)))
            .sum(),
        Case::PlusLambda1 => units
            .map(|a| BigInt::from(table.log(a) as i64) * symbol.eval_numerator(a as i64, m as i64))
            .sum(),
        Case::MinusLambda1 => {
            let binoms = binomials_choose(table.period(), p as usize);
            units
                .map(|a| &binoms[table.log(a)] * symbol.eval_numerator(a as i64, m as i64))
                .sum()
        }
    };
    Ok(BigRational::new(total, symbol.denominator().into()))
}

/// A case's sum and its `p`-adic valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollarySum {
    pub case: Case,
    pub value: BigRational,
    pub ord: i64,
}

/// The case's sum with its valuation; `ZeroSum` when it vanishes.
pub fn corollary_sum(symbol: &EigenSymbol, p: u64, case: Case) -> Result<CorollarySum, MazurTateError> {
    let value = corollary_sum_value(symbol, p, case)?;
    let ord = ord_rat(&value, p).ok_or(MazurTateError::ZeroSum(case))?;
    Ok(CorollarySum { case, value, ord })
}

/// `binom(j, k)` for `0 <= j < len`.
fn binomials_choose(len: usize, k: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    if k < len {
        let mut b = BigInt::one();
        out[k] = b.clone();
        for (j, slot) in out.iter_mut().enumerate().skip(k + 1) {
            b = b * j / (j - k);
            *slot = b.clone();
        }
    }
    out
}

/// `ceil(p / ln p)` with the natural logarithm.
///
/// Evaluated in `f64`; if the quotient lands within `1e-9` of an integer the
/// answer is settled exactly by comparing `p^k` against rigorous rational
/// bounds on `e^p`.
pub fn ceil_p_over_ln_p(p: u64) -> u64 {
    assert!(p >= 2);
    let x = p as f64 / (p as f64).ln();
    let nearest = x.round();
    if (x - nearest).abs() >= 1e-9 {
        return x.ceil() as u64;
    }
    // p/ln p <= k  <=>  e^p <= p^k, and equality is impossible
    let k = nearest as u32;
    if exp_less_than(p, &BigInt::from(p).pow(k)) {
        k as u64
    } else {
        k as u64 + 1
    }
}

/// Exact `ceil(p / ln p)`: the least `k` with `e^p < p^k`.
pub fn ceil_p_over_ln_p_exact(p: u64) -> u64 {
    let pb = BigInt::from(p);
    // start just below the floating-point estimate and walk up
    let guess = (p as f64 / (p as f64).ln()).floor() as u32;
    let mut k = guess.saturating_sub(1).max(1);
    while k > 1 && exp_less_than(p, &pb.pow(k - 1)) {
        k -= 1;
    }
    while !exp_less_than(p, &pb.pow(k)) {
        k += 1;
    }
    k as u64
}

/// Decide `e^x < target` for a positive integer `x`.
///
/// With `B` bits of fixed point, `lo <= 2^B e <= hi` where `lo` sums the
/// truncated terms `floor(2^B / i!)` for `i <= K` and `hi` adds the truncation
/// loss and the tail `2^B / (K! K)`. Then `lo^x <= 2^{Bx} e^x <= hi^x`, and `B`
/// is doubled until the comparison is decided. Terminates because `e^x` is
/// irrational.
pub fn exp_less_than(x: u64, target: &BigInt) -> bool {
    let mut bits = 64u64;
    loop {
        let scale = BigInt::one() << bits;
        let mut lo = BigInt::zero();
        let mut fact = BigInt::one();
        let mut k = 0u64;
        while k == 0 || fact <= scale {
            if k > 0 {
                fact *= k;
            }
            lo += &scale / &fact;
            k += 1;
        }
        // k terms were added (i = 0..k-1); tail below 2^B / ((k-1)! (k-1))
        let hi = &lo + BigInt::from(k) + BigInt::one();
        let scaled_target = target << (bits * x) as usize;
        if num_traits::pow(hi, x as usize) < scaled_target {
            return true;
        }
        if num_traits::pow(lo, x as usize) > scaled_target {
            return false;
        }
        bits *= 2;
    }
}

/// Upper bound on `mu^±` in each case, for `p >= 5`.
pub fn theorem_bound(p: u64, case: Case) -> u64 {
    match case {
        Case::MinusLambda0 => 1,
        Case::PlusLambda0 => 2,
        Case::PlusLambda1 => 3,
        Case::MinusLambda1 => p + 1 + ceil_p_over_ln_p(p),
    }
}

/// Exponent `e` in the size estimate `|S| < p^e` for each sum.
pub fn sum_bound_exponent(p: u64, case: Case) -> u64 {
    match case {
        Case::MinusLambda0 => 2,
        Case::PlusLambda0 => 3,
        Case::PlusLambda1 => 4,
        Case::MinusLambda1 => p + 2 + ceil_p_over_ln_p(p),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        })
    }
}

/// Audit of one case at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseAudit {
    pub case: Case,
    pub bound: u64,
    /// `mu` of the matching sign when its `lambda` equals the case's.
    pub mu: Option<u32>,
    pub verdict: Verdict,
    /// The sum; `None` if it was over the evaluation budget.
    pub sum: Option<BigRational>,
    /// `ord_p` of the sum; `None` when the sum is zero or not computed.
    pub sum_ord: Option<i64>,
    /// `|S| < p^e`; `None` when not computed.
    pub sum_within_bound: Option<bool>,
    /// When the case applies, whether `ord_p(S)` equals the stabilized `mu`.
    pub sum_matches_mu: Option<bool>,
    /// The sum vanished while the case's `lambda` hypothesis holds.
    pub zero_sum_anomaly: bool,
}

/// Size of the symbol at one level: `max_a |[a/p^n]^+|` against `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupNormCheck {
    pub n: u32,
    pub sup: BigRational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub p: u64,
    pub cases: Vec<CaseAudit>,
    pub sup_norms: Vec<SupNormCheck>,
    /// Triangle inequalities `|S1| <= (p-1) max|[a/p]|`,
    /// `|S2| <= (p^2-p) max|[a/p^2]|`, `|S4| <= (p^2-p)(p-1) max|[a/p^2]|`.
    pub triangle_ok: bool,
}

impl BoundReport {
    pub fn case(&self, case: Case) -> &CaseAudit {
        self.cases.iter().find(|c| c.case == case).expect("all cases audited")
    }

    pub fn sup_norm(&self, n: u32) -> Option<&SupNormCheck> {
        self.sup_norms.iter().find(|s| s.n == n)
    }

    pub fn has_anomaly(&self) -> bool {
        self.cases.iter().any(|c| c.zero_sum_anomaly || c.sum_matches_mu == Some(false))
    }
}

/// Audit every case at `p`: the bound on `mu` when its `lambda` hypothesis
/// holds, the coefficient sums with their size estimates, and the sup norms of
/// `[a/p^n]^+` for `n <= 3`. Sums and norms whose unit count exceeds
/// `max_evals` are skipped.
pub fn check_bounds(
    symbol: &EigenSymbol,
    p: u64,
    signed: &SignedInvariants,
    max_evals: Option<u64>,
) -> Result<BoundReport, MazurTateError> {
    let fits = |k: u32| super::within_budget(p, k - 1, max_evals);
    let pb = BigRational::from_integer(BigInt::from(p));

    let mut sup_norms = Vec::new();
    for n in 1..=3 {
        if fits(n) {
            let sup = symbol.sup_norm(p, n);
            let holds = sup < pb;
            sup_norms.push(SupNormCheck { n, sup, holds });
        }
    }

    let mut cases = Vec::new();
    for case in Case::ALL {
        let bound = theorem_bound(p, case);
        let applies = signed
            .get(case.sign())
            .invariants()
            .filter(|inv| inv.lambda == case.lambda());
        let mu = applies.map(|inv| inv.mu);
        let verdict = match mu {
            Some(m) if (m as u64) <= bound => Verdict::Pass,
            Some(_) => Verdict::Fail,
            None => Verdict::NotApplicable,
        };
        let sum = if fits(case.modulus_exponent()) {
            Some(corollary_sum_value(symbol, p, case)?)
        } else {
            None
        };
        let sum_ord = sum.as_ref().and_then(|s| ord_rat(s, p));
        let sum_within_bound = sum.as_ref().map(|s| {
            let limit = BigInt::from(p).pow(sum_bound_exponent(p, case) as u32);
            s.abs() < BigRational::from_integer(limit)
        });
        let zero_sum_anomaly = mu.is_some() && sum.as_ref().is_some_and(|s| s.is_zero());
        let sum_matches_mu = match (mu, &sum) {
            (Some(m), Some(_)) => Some(sum_ord == Some(m as i64)),
            _ => None,
        };
        cases.push(CaseAudit {
            case,
            bound,
            mu,
            verdict,
            sum,
            sum_ord,
            sum_within_bound,
            sum_matches_mu,
            zero_sum_anomaly,
        });
    }

    let triangle_ok = triangle_checks(p, &cases, &sup_norms);
    Ok(BoundReport {
        p,
        cases,
        sup_norms,
        triangle_ok,
    })
}

fn triangle_checks(p: u64, cases: &[CaseAudit], sups: &[SupNormCheck]) -> bool {
    let sup = |n: u32| sups.iter().find(|s| s.n == n).map(|s| s.sup.clone());
    let sum = |c: Case| cases.iter().find(|a| a.case == c).and_then(|a| a.sum.clone());
    let int = |x: u64| BigRational::from_integer(BigInt::from(x));
    let checks = [
        (Case::MinusLambda0, 1, int(p - 1)),
        (Case::PlusLambda0, 2, int(p * p - p)),
        (Case::PlusLambda1, 2, int((p * p - p) * (p - 1))),
    ];
    checks.into_iter().all(|(case, n, factor)| match (sum(case), sup(n)) {
        (Some(s), Some(m)) => s.abs() <= factor * m,
        _ => true,
    })
}

