//! The normalized plus/minus eigen-functional attached to an elliptic curve,
//! and its evaluation `r -> [r]^±` via Manin's continued-fraction trick.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::p1::P1List;
use super::space::{ModularSymbolSpace, S, U, U2};
use super::ModSymError;
use crate::arith::{big_prime_factors, is_prime};
use crate::curves::EllipticCurve;
use crate::linalg::{columns_to_rows, content, kernel, make_primitive, IntVec};

/// Largest prime used to cut out the eigenline.
pub const CUTTING_BOUND: u64 = 50;
/// Primes above this bound (and at most `CUTTING_BOUND`) that were not needed
/// for cutting are used to confirm the eigenline belongs to the curve.
pub const VERIFY_FROM: u64 = 21;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A Hecke eigen-functional on Manin symbols with a fixed star sign.
///
/// `values[i] / denominator` is the value on generator `i` of `P^1(Z/NZ)`.
/// After construction the numerators have content 1 and the denominator is 1;
/// the denominator is kept explicit for symbols loaded from elsewhere.
#[derive(Debug, Clone)]
pub struct EigenSymbol {
    label: String,
    sign: Sign,
    p1: Arc<P1List>,
    values: Vec<i64>,
    denominator: i64,
    normalization_scale: BigRational,
    hecke_primes: Vec<u64>,
    at_infinity: usize,
}

impl EigenSymbol {
    /// Cut out the `sign` eigenline of the star involution on which every good
    /// `T_ell` acts by the curve's `a_ell`.
    pub fn compute(
        space: &ModularSymbolSpace,
        curve: &EllipticCurve,
        sign: Sign,
    ) -> Result<Self, ModSymError> {
        let level = space.level();
        let good = |ell: u64| is_prime(ell) && level % ell != 0 && curve.conductor % ell != 0;

        let mut line = cut(space, space.dual_basis().to_vec(), |v| space.star(v), sign.value());
        let mut used = Vec::new();
        for ell in (2..=CUTTING_BOUND).filter(|&l| good(l)) {
            if line.len() <= 1 {
                break;
            }
            let a = curve.ap(ell)?;
            line = cut(space, line, |v| space.hecke(v, ell), a);
            used.push(ell);
        }
        match line.len() {
            0 => {
                return Err(ModSymError::EigenlineEmpty {
                    level,
                    label: curve.label.clone(),
                })
            }
            1 => {}
            dim => return Err(ModSymError::EigenlineNotUnique { dim, primes: used }),
        }
        let raw = line.pop().expect("one vector");
        for ell in (VERIFY_FROM..=CUTTING_BOUND).filter(|&l| good(l) && !used.contains(&l)) {
            let a = curve.ap(ell)?;
            let image = space.hecke(&raw, ell);
            if image.iter().zip(&raw).any(|(x, y)| *x != y * a) {
                return Err(ModSymError::EigenlineEmpty {
                    level,
                    label: curve.label.clone(),
                });
            }
        }

        let c = content(&raw);
        let mut normalized = raw.clone();
        make_primitive(&mut normalized);
        let scale = BigRational::new(normalized[first_nonzero(&normalized)].clone(), raw[first_nonzero(&raw)].clone());
        debug_assert_eq!(scale.abs(), BigRational::new(1.into(), c));
        let values = normalized
            .iter()
            .map(|x| x.to_i64().ok_or(ModSymError::ValueOverflow))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_parts(
            curve.label.clone(),
            space.p1().clone(),
            sign,
            values,
            1,
            scale,
            used,
        )
    }

    /// Assemble a symbol from stored data, checking the Manin relations.
    pub fn from_parts(
        label: String,
        p1: Arc<P1List>,
        sign: Sign,
        values: Vec<i64>,
        denominator: i64,
        normalization_scale: BigRational,
        hecke_primes: Vec<u64>,
    ) -> Result<Self, ModSymError> {
        if values.len() != p1.len() || denominator <= 0 {
            return Err(ModSymError::InvalidSymbol(format!(
                "expected {} values and a positive denominator",
                p1.len()
            )));
        }
        if !manin_relations_hold(&p1, &values) {
            return Err(ModSymError::InvalidSymbol(
                "values violate the Manin relations".into(),
            ));
        }
        let at_infinity = p1.index_unchecked(1, 0);
        Ok(EigenSymbol {
            label,
            sign,
            p1,
            values,
            denominator,
            normalization_scale,
            hecke_primes,
            at_infinity,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn level(&self) -> u64 {
        self.p1.level()
    }

    pub fn p1(&self) -> &Arc<P1List> {
        &self.p1
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    /// Factor taking the raw kernel vector to the stored numerators.
    pub fn normalization_scale(&self) -> &BigRational {
        &self.normalization_scale
    }

    /// Primes whose Hecke operators were used to cut out the eigenline.
    pub fn hecke_primes(&self) -> &[u64] {
        &self.hecke_primes
    }

    /// Primes at which values may fail to be integral.
    pub fn exceptional_primes(&self) -> Vec<u64> {
        big_prime_factors(&BigInt::from(self.denominator))
    }

    pub fn values_big(&self) -> IntVec {
        self.values.iter().map(|&v| BigInt::from(v)).collect()
    }

    /// Numerator of `[a/m]^±` over `self.denominator()`, for `m >= 1`.
    ///
    /// `{r, oo}` is written as minus the sum of the unimodular paths between
    /// consecutive convergents of `r`; the path from `p_{k-1}/q_{k-1}` to
    /// `p_k/q_k` is the Manin symbol `((-1)^(k-1) q_k : q_{k-1})`. Only the
    /// denominators `q_k` enter, so the value is 1-periodic in `r`.
    #[inline]
    pub fn eval_numerator(&self, a: i64, m: i64) -> i64 {
        debug_assert!(m >= 1);
        let g = a.gcd(&m);
        let (a, m) = (a / g, m / g);
        let mut sum = self.values[self.at_infinity];
        let (mut num, mut den) = (a.rem_euclid(m), m);
        let (mut q_prev, mut q) = (0i64, 1i64);
        let mut odd = true;
        while num != 0 {
            let t = den / num;
            (den, num) = (num, den - t * num);
            (q_prev, q) = (q, t * q + q_prev);
            let c = if odd { q } else { -q };
            sum += self.values[self.p1.index_unchecked(c, q_prev)];
            odd = !odd;
        }
        -sum
    }

    /// `[a/m]^±` as an exact rational.
    pub fn eval_frac(&self, a: i64, m: i64) -> BigRational {
        BigRational::new(self.eval_numerator(a, m).into(), self.denominator.into())
    }

    /// `[r]^±` for an arbitrary rational `r`.
    pub fn eval(&self, r: &BigRational) -> BigRational {
        let a = r.numer().to_i64().expect("numerator fits in i64");
        let m = r.denom().to_i64().expect("denominator fits in i64");
        self.eval_frac(a, m)
    }

    /// `max_{a in (Z/p^n)^x} |[a/p^n]^±|`.
    pub fn sup_norm(&self, p: u64, n: u32) -> BigRational {
        let m = p.pow(n) as i64;
        let best = (1..m)
            .filter(|a| a % p as i64 != 0)
            .map(|a| self.eval_numerator(a, m).abs())
            .max()
            .unwrap_or(0);
        BigRational::new(best.into(), self.denominator.into())
    }

    /// Whether `T_ell` acts on this functional by `a`.
    pub fn is_hecke_eigen(&self, space: &ModularSymbolSpace, ell: u64, a: i64) -> bool {
        let v = self.values_big();
        space
            .hecke(&v, ell)
            .iter()
            .zip(&v)
            .all(|(x, y)| *x == y * a)
    }
}

fn first_nonzero(v: &[BigInt]) -> usize {
    v.iter().position(|x| !x.is_zero()).expect("nonzero vector")
}

/// Restrict a subspace (given by spanning functionals) to the kernel of
/// `op - lambda`.
fn cut(
    space: &ModularSymbolSpace,
    span: Vec<IntVec>,
    op: impl Fn(&[BigInt]) -> IntVec,
    lambda: i64,
) -> Vec<IntVec> {
    let m = space.num_generators();
    let diffs: Vec<IntVec> = span
        .iter()
        .map(|v| {
            op(v)
                .into_iter()
                .zip(v)
                .map(|(x, y)| x - y * lambda)
                .collect()
        })
        .collect();
    let rows = columns_to_rows(&diffs, m);
    kernel(&rows, span.len())
        .into_iter()
        .map(|coeffs| {
            let mut w = vec![BigInt::zero(); m];
            for (c, v) in coeffs.iter().zip(&span) {
                if c.is_zero() {
                    continue;
                }
                for (acc, x) in w.iter_mut().zip(v) {
                    *acc += c * x;
                }
            }
            make_primitive(&mut w);
            w
        })
        .collect()
}

/// Check `x + xS = 0` and `x + xU + xU^2 = 0` on every generator.
pub fn manin_relations_hold(p1: &P1List, values: &[i64]) -> bool {
    (0..p1.len()).all(|i| {
        let s = p1.act(i, &S).expect("S preserves P^1");
        let u = p1.act(i, &U).expect("U preserves P^1");
        let u2 = p1.act(i, &U2).expect("U^2 preserves P^1");
        values[i] + values[s] == 0 && values[i] + values[u] + values[u2] == 0
    })
}
