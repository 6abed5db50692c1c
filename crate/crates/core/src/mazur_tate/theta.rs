//! Mazur–Tate elements
//! `theta_n(T) = sum_{a in (Z/p^{n+1})^x} [a/p^{n+1}]^+ (1+T)^{log_gamma(a)}`.
//!
//! The element is stored in the group-ring basis `(1+T)^j`, `0 <= j < p^n`:
//! coefficient `j` is the sum of the symbol over the `p - 1` units with
//! logarithm `j`. Expanding in powers of `T` is an integral unitriangular change
//! of basis, so `mu` can be read off the group-ring coefficients directly and
//! `lambda` from their reduction mod `p` pushed through Lucas' theorem. Exact
//! `T`-coefficients are available individually or, for small levels, as a full
//! [`PAdicPoly`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::{LogTable, MazurTateError};
use crate::arith::ord_i64;
use crate::iwasawa::{InvariantPair, PAdicPoly};
use crate::modsym::{EigenSymbol, Sign};

#[derive(Debug, Clone)]
pub struct ThetaElement {
    label: String,
    p: u64,
    n: u32,
    group_coeffs: Vec<i64>,
    denominator: i64,
    invariants: Option<InvariantPair>,
}

impl ThetaElement {
    /// Assemble `theta_n` by exponent buckets, in parallel over the buckets.
    pub fn compute(symbol: &EigenSymbol, p: u64, n: u32) -> Result<Self, MazurTateError> {
        let table = LogTable::new(p, n)?;
        Self::compute_with(symbol, &table)
    }

    pub fn compute_with(symbol: &EigenSymbol, table: &LogTable) -> Result<Self, MazurTateError> {
        check_symbol(symbol, table.prime(), table.level())?;
        let m = table.modulus() as i64;
        let group_coeffs = (0..table.period())
            .into_par_iter()
            .map(|j| {
                table
                    .units_with_log(j)
                    .try_fold(0i64, |acc, a| acc.checked_add(symbol.eval_numerator(a as i64, m)))
                    .ok_or(MazurTateError::ValueOverflow)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_group_coeffs(symbol, table, group_coeffs))
    }

    /// Assemble `theta_n` by walking the units `a` in increasing order and
    /// adding each symbol value to the bucket of `log_gamma(a)`.
    pub fn compute_by_units(symbol: &EigenSymbol, table: &LogTable) -> Result<Self, MazurTateError> {
        check_symbol(symbol, table.prime(), table.level())?;
        let m = table.modulus();
        let mut group_coeffs = vec![0i64; table.period()];
        for a in (1..m).filter(|a| a % table.prime() != 0) {
            let slot = &mut group_coeffs[table.log(a)];
            *slot = slot
                .checked_add(symbol.eval_numerator(a as i64, m as i64))
                .ok_or(MazurTateError::ValueOverflow)?;
        }
        Ok(Self::from_group_coeffs(symbol, table, group_coeffs))
    }

    fn from_group_coeffs(symbol: &EigenSymbol, table: &LogTable, group_coeffs: Vec<i64>) -> Self {
        let invariants = group_ring_invariants(&group_coeffs, table.prime(), table.level());
        ThetaElement {
            label: symbol.label().to_string(),
            p: table.prime(),
            n: table.level(),
            group_coeffs,
            denominator: symbol.denominator(),
            invariants,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    /// Numerators of the coefficients of `(1+T)^j`, over [`Self::denominator`].
    pub fn group_coeffs(&self) -> &[i64] {
        &self.group_coeffs
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.group_coeffs.iter().all(|&c| c == 0)
    }

    /// `(mu, lambda)` of `theta_n`, `None` when `theta_n = 0`.
    pub fn invariants(&self) -> Option<InvariantPair> {
        self.invariants
    }

    /// Exact coefficient of `T^k`: `sum_j c_j binom(j, k)`.
    pub fn coefficient(&self, k: usize) -> BigRational {
        let mut total = BigInt::zero();
        let mut binom = BigInt::one();
        for (j, &c) in self.group_coeffs.iter().enumerate().skip(k) {
            if j > k {
                binom = binom * j / (j - k);
            }
            if c != 0 {
                total += &binom * c;
            }
        }
        BigRational::new(total, self.denominator.into())
    }

    /// Full expansion in powers of `T` (Horner in `1+T`). Quadratic in `p^n`
    /// with large integers, so only practical for small levels.
    pub fn to_poly(&self) -> PAdicPoly {
        let d = self.group_coeffs.len();
        let mut acc: Vec<BigInt> = Vec::with_capacity(d);
        for &c in self.group_coeffs.iter().rev() {
            // acc <- acc * (1 + T) + c
            acc.push(BigInt::zero());
            for k in (1..acc.len()).rev() {
                let prev = acc[k - 1].clone();
                acc[k] += prev;
            }
            acc[0] += c;
        }
        let den = BigInt::from(self.denominator);
        let coeffs = acc
            .into_iter()
            .map(|x| BigRational::new(x, den.clone()))
            .collect();
        PAdicPoly::new(self.p, coeffs).expect("denominator is prime to p")
    }
}

fn check_symbol(symbol: &EigenSymbol, p: u64, n: u32) -> Result<(), MazurTateError> {
    if symbol.sign() != Sign::Plus {
        return Err(MazurTateError::WrongSign);
    }
    if symbol.denominator() % p as i64 == 0 {
        return Err(MazurTateError::NonIntegralTheta { p, n });
    }
    Ok(())
}

/// `(mu, lambda)` of `sum_j c_j (1+T)^j` for `j < p^n`, from the group-ring
/// coefficients. `None` if all vanish.
pub fn group_ring_invariants(c: &[i64], p: u64, n: u32) -> Option<InvariantPair> {
    let mu = c.iter().filter_map(|&x| ord_i64(x, p)).min()?;
    let scale = (p as i64).pow(mu);
    let mut residues: Vec<u32> = c
        .iter()
        .map(|&x| (x / scale).rem_euclid(p as i64) as u32)
        .collect();
    residues.resize(p.pow(n) as usize, 0);
    pascal_transform_mod_p(&mut residues, p, n);
    let lambda = residues.iter().position(|&x| x != 0)?;
    Some(InvariantPair { mu, lambda })
}

/// In place, `x_j -> sum_{j'} binom(j', j) x_{j'} mod p` on vectors of length
/// `p^n`. By Lucas' theorem the matrix is the `n`-fold Kronecker power of the
/// `p x p` Pascal matrix mod `p`, applied one base-`p` digit at a time.
pub fn pascal_transform_mod_p(v: &mut [u32], p: u64, n: u32) {
    let p = p as usize;
    debug_assert_eq!(v.len(), p.pow(n));
    let mut binom = vec![vec![0u32; p]; p];
    for t in 0..p {
        binom[t][0] = 1;
        for s in 1..=t {
            binom[t][s] = (binom[t - 1][s - 1] + if s < t { binom[t - 1][s] } else { 0 }) % p as u32;
        }
    }
    let mut x = vec![0u64; p];
    for axis in 0..n {
        let stride = p.pow(axis);
        let block = stride * p;
        for base in (0..v.len()).step_by(block) {
            for off in 0..stride {
                for (t, slot) in x.iter_mut().enumerate() {
                    *slot = v[base + off + t * stride] as u64;
                }
                for s in 0..p {
                    let mut acc = 0u64;
                    for t in s..p {
                        acc += binom[t][s] as u64 * x[t];
                    }
                    v[base + off + s * stride] = (acc % p as u64) as u32;
                }
            }
        }
    }
}
