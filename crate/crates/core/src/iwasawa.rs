//! Polynomials over `Z_p` held as exact `p`-integral rationals, and the
//! Iwasawa invariants attached to them.
//!
//! For `F = sum a_i T^i`, `mu(F)` is the least `p`-adic valuation of a
//! coefficient and `lambda(F)` the least index attaining it. Division by the
//! distinguished polynomial `omega_n = (1+T)^(p^n) - 1` gives the projection
//! to `Lambda_n`, whose invariants are the refined invariants of `F`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::ord_rat;
use crate::modsym::Sign;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IwasawaError {
    #[error("invariants of the zero polynomial are undefined")]
    ZeroPolynomial,
    #[error("F is divisible by omega_{0}: the projection vanishes")]
    ZeroRemainder(u32),
    #[error("coefficient {index} is not {p}-integral")]
    NonIntegral { index: usize, p: u64 },
    #[error("polynomials over different primes ({0} and {1})")]
    PrimeMismatch(u64, u64),
    #[error("cannot parse coefficient {0:?}")]
    Parse(String),
}

/// `mu` and `lambda` of a nonzero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantPair {
    pub mu: u32,
    pub lambda: usize,
}

impl fmt::Display for InvariantPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(mu={}, lambda={})", self.mu, self.lambda)
    }
}

/// A polynomial in `T` with `p`-integral rational coefficients, lowest degree
/// first, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicPoly {
    p: u64,
    coeffs: Vec<BigRational>,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl PAdicPoly {
    /// Build a polynomial, rejecting coefficients with negative valuation.
    pub fn new(p: u64, coeffs: Vec<BigRational>) -> Result<Self, IwasawaError> {
        for (index, c) in coeffs.iter().enumerate() {
            if ord_rat(c, p).is_some_and(|v| v < 0) {
                return Err(IwasawaError::NonIntegral { index, p });
            }
        }
        Ok(Self::trusted(p, coeffs))
    }

    fn trusted(p: u64, mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PAdicPoly { p, coeffs }
    }

    pub fn from_ints<I: Into<BigInt>>(p: u64, coeffs: impl IntoIterator<Item = I>) -> Self {
        Self::trusted(p, coeffs.into_iter().map(rat).collect())
    }

    pub fn zero(p: u64) -> Self {
        PAdicPoly { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::from_ints(p, [1])
    }

    pub fn monomial(p: u64, c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::trusted(p, coeffs)
    }

    /// `(1 + T)^k`.
    pub fn one_plus_t_pow(p: u64, k: usize) -> Self {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut c = BigInt::one();
        coeffs.push(rat(c.clone()));
        for i in 0..k {
            c = c * (k - i) / (i + 1);
            coeffs.push(rat(c.clone()));
        }
        Self::trusted(p, coeffs)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::trusted(self.p, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// `mu` = least coefficient valuation, `lambda` = first index attaining it.
    pub fn invariants(&self) -> Result<InvariantPair, IwasawaError> {
        let mut best: Option<(i64, usize)> = None;
        for (i, c) in self.coeffs.iter().enumerate() {
            if let Some(v) = ord_rat(c, self.p) {
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, i));
                }
            }
        }
        let (mu, lambda) = best.ok_or(IwasawaError::ZeroPolynomial)?;
        Ok(InvariantPair {
            mu: u32::try_from(mu).expect("coefficients are p-integral"),
            lambda,
        })
    }

    /// Quotient and remainder on division by a monic polynomial.
    pub fn divmod_monic(&self, divisor: &PAdicPoly) -> (PAdicPoly, PAdicPoly) {
        let d = divisor.degree().expect("nonzero divisor");
        assert!(divisor.coeffs[d].is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Self::zero(self.p), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Self::trusted(self.p, quot), Self::trusted(self.p, rem))
    }

    /// Serialized coefficients as `numerator/denominator` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|c| format!("{}/{}", c.numer(), c.denom()))
            .collect()
    }

    pub fn from_strings<S: AsRef<str>>(p: u64, items: &[S]) -> Result<Self, IwasawaError> {
        let coeffs = items
            .iter()
            .map(|s| {
                let s = s.as_ref();
                let (n, d) = s.split_once('/').unwrap_or((s, "1"));
                let n: BigInt = n.trim().parse().map_err(|_| IwasawaError::Parse(s.into()))?;
                let d: BigInt = d.trim().parse().map_err(|_| IwasawaError::Parse(s.into()))?;
                if d.is_zero() {
                    return Err(IwasawaError::Parse(s.into()));
                }
                Ok(BigRational::new(n, d))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(p, coeffs)
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "{}", IwasawaError::PrimeMismatch(self.p, other.p));
    }
}

impl fmt::Display for PAdicPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*T")?,
                _ => write!(f, "({c})*T^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &PAdicPoly {
    type Output = PAdicPoly;
    fn add(self, rhs: &PAdicPoly) -> PAdicPoly {
        self.check_prime(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        PAdicPoly::trusted(self.p, coeffs)
    }
}

impl Sub for &PAdicPoly {
    type Output = PAdicPoly;
    fn sub(self, rhs: &PAdicPoly) -> PAdicPoly {
        self + &(-rhs)
    }
}

impl Neg for &PAdicPoly {
    type Output = PAdicPoly;
    fn neg(self) -> PAdicPoly {
        PAdicPoly::trusted(self.p, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &PAdicPoly {
    type Output = PAdicPoly;
    fn mul(self, rhs: &PAdicPoly) -> PAdicPoly {
        self.check_prime(rhs);
        if self.is_zero() || rhs.is_zero() {
            return PAdicPoly::zero(self.p);
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PAdicPoly::trusted(self.p, out)
    }
}

/// `omega_n = (1+T)^(p^n) - 1`.
pub fn omega(p: u64, n: u32) -> PAdicPoly {
    let pn = p.pow(n) as usize;
    &PAdicPoly::one_plus_t_pow(p, pn) - &PAdicPoly::one(p)
}

/// `Phi_{p^i}(1+T) = omega_i / omega_{i-1}`, for `i >= 1`.
pub fn phi_cyclo(p: u64, i: u32) -> PAdicPoly {
    assert!(i >= 1, "cyclotomic factor index starts at 1");
    let (q, r) = omega(p, i).divmod_monic(&omega(p, i - 1));
    debug_assert!(r.is_zero());
    q
}

/// Product of `Phi_{p^i}(1+T)` over `1 <= i <= n` with `i` even (`Plus`) or
/// odd (`Minus`). The empty product is 1.
pub fn omega_pm(p: u64, n: u32, sign: Sign) -> PAdicPoly {
    let parity = match sign {
        Sign::Plus => 0,
        Sign::Minus => 1,
    };
    (1..=n)
        .filter(|i| i % 2 == parity)
        .fold(PAdicPoly::one(p), |acc, i| &acc * &phi_cyclo(p, i))
}

/// `q_0 = q_1 = 0`; for `n >= 2` the alternating sum
/// `p^(n-1) - p^(n-2) + ... + p - 1` (n even) or `... + p^2 - p` (n odd).
pub fn q_seq(p: u64, n: u32) -> u64 {
    if n < 2 {
        return 0;
    }
    let lowest = if n % 2 == 0 { 0 } else { 1 };
    let mut total: i128 = 0;
    for k in lowest..n {
        let term = (p as i128).pow(k);
        if (n - 1 - k) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    u64::try_from(total).expect("q_n is nonnegative")
}

/// `F = omega_n Q + R` with `deg R < p^n`.
pub fn divmod_omega(f: &PAdicPoly, n: u32) -> (PAdicPoly, PAdicPoly) {
    f.divmod_monic(&omega(f.prime(), n))
}

/// Invariants of the remainder of `F` modulo `omega_n`.
pub fn refined_invariants(f: &PAdicPoly, n: u32) -> Result<InvariantPair, IwasawaError> {
    let (_, r) = divmod_omega(f, n);
    if r.is_zero() {
        return Err(IwasawaError::ZeroRemainder(n));
    }
    r.invariants()
}

/// Independent route to `(mu, lambda)`: divide every coefficient by the largest
/// common power of `p`, then look for the first `p`-unit. Used as a test oracle.
pub fn invariants_by_division(f: &PAdicPoly) -> Option<InvariantPair> {
    if f.is_zero() {
        return None;
    }
    let p = BigInt::from(f.prime());
    let mut c: Vec<BigRational> = f.coeffs().to_vec();
    let mut mu = 0;
    loop {
        let unit = c.iter().position(|x| !x.is_zero() && !x.numer().is_multiple_of(&p));
        if let Some(lambda) = unit {
            return Some(InvariantPair { mu, lambda });
        }
        for x in c.iter_mut() {
            *x = &*x / BigRational::from_integer(p.clone());
        }
        mu += 1;
    }
}
