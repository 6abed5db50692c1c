//! Elliptic curves over Q given by integral Weierstrass models, traces of
//! Frobenius by point counting, and detection of supersingular primes.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::arith::{is_prime, primes_in, prime_factors};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("curve {0}: discriminant is zero")]
    SingularCurve(String),
    #[error("curve {label}: prime {prime} divides the conductor but not the discriminant {discriminant}")]
    ConductorMismatch {
        label: String,
        prime: u64,
        discriminant: BigInt,
    },
    #[error("curve {label}: conductor must be positive")]
    BadConductor { label: String },
    #[error("prime {ell} divides the conductor {conductor}")]
    BadReductionPrime { ell: u64, conductor: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An elliptic curve `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` together
/// with its (externally supplied) conductor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EllipticCurve {
    pub label: String,
    pub a: [i64; 5],
    pub conductor: u64,
}

impl EllipticCurve {
    /// Build and validate a curve from `[a1, a2, a3, a4, a6]`.
    pub fn new(label: impl Into<String>, a: [i64; 5], conductor: u64) -> Result<Self, CurveError> {
        EllipticCurve {
            label: label.into(),
            a,
            conductor,
        }
        .validate()
    }

    /// Check that the model is nonsingular and that every prime dividing the
    /// conductor divides the discriminant.
    pub fn validate(self) -> Result<Self, CurveError> {
        if self.conductor == 0 {
            return Err(CurveError::BadConductor { label: self.label });
        }
        let disc = self.discriminant();
        if disc.is_zero() {
            return Err(CurveError::SingularCurve(self.label));
        }
        for q in prime_factors(self.conductor) {
            if !disc.is_multiple_of(&BigInt::from(q)) {
                return Err(CurveError::ConductorMismatch {
                    label: self.label,
                    prime: q,
                    discriminant: disc,
                });
            }
        }
        Ok(self)
    }

    pub fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.a.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    pub fn is_good_prime(&self, ell: u64) -> bool {
        self.conductor % ell != 0
    }

    /// Number of points over `F_ell`, including the point at infinity.
    ///
    /// Odd `ell` uses the completed-square model `(2y + a1 x + a3)^2 = 4x^3 +
    /// b2 x^2 + 2 b4 x + b6` and a table of squares; `ell = 2` enumerates
    /// directly.
    pub fn count_points(&self, ell: u64) -> u64 {
        if ell == 2 {
            return 1 + naive_affine_count(&self.a, 2);
        }
        let m = ell as i64;
        let reduce = |x: &BigInt| -> i64 {
            let r = x.mod_floor(&BigInt::from(m));
            i64::try_from(r).expect("residue fits")
        };
        let [b2, b4, b6, _] = self.b_invariants();
        let (b2, b4, b6) = (reduce(&b2), reduce(&b4), reduce(&b6));
        // number of square roots of each residue
        let mut roots = vec![0u64; ell as usize];
        for y in 0..m {
            roots[((y * y) % m) as usize] += 1;
        }
        let mut affine = 0u64;
        for x in 0..m {
            let f = (((4 * x % m + b2) % m * x % m + 2 * b4) % m * x % m + b6).rem_euclid(m);
            affine += roots[f as usize];
        }
        affine + 1
    }

    /// Trace of Frobenius `a_ell = ell + 1 - #E(F_ell)` at a good prime.
    pub fn ap(&self, ell: u64) -> Result<i64, CurveError> {
        if !is_prime(ell) {
            return Err(CurveError::NotPrime(ell));
        }
        if !self.is_good_prime(ell) {
            return Err(CurveError::BadReductionPrime {
                ell,
                conductor: self.conductor,
            });
        }
        Ok(ell as i64 + 1 - self.count_points(ell) as i64)
    }

    /// `p >= 5`, good reduction and `a_p = 0`. The primes 2 and 3 are never
    /// reported since the constructions downstream need odd `p` with `a_p = 0`.
    pub fn is_supersingular(&self, p: u64) -> bool {
        p >= 5 && is_prime(p) && self.is_good_prime(p) && self.ap(p) == Ok(0)
    }

    /// All supersingular primes `5 <= p <= bound`, ascending.
    pub fn supersingular_primes(&self, bound: u64) -> Vec<u64> {
        if bound < 5 {
            return Vec::new();
        }
        primes_in(5, bound)
            .into_iter()
            .filter(|&p| self.is_supersingular(p))
            .collect()
    }

    /// Canonical one-line record, the same shape the curve file uses.
    pub fn record(&self) -> String {
        let [a1, a2, a3, a4, a6] = self.a;
        format!("{} {a1} {a2} {a3} {a4} {a6} {}", self.label, self.conductor)
    }
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a1, a2, a3, a4, a6] = self.a;
        write!(f, "{} [{a1},{a2},{a3},{a4},{a6}] N={}", self.label, self.conductor)
    }
}

/// Brute-force count of affine points on the general Weierstrass equation.
pub fn naive_affine_count(a: &[i64; 5], ell: u64) -> u64 {
    let m = ell as i128;
    let [a1, a2, a3, a4, a6] = a.map(|x| (x as i128).rem_euclid(m));
    let mut n = 0;
    for x in 0..m {
        for y in 0..m {
            let lhs = y * y + a1 * x * y + a3 * y;
            let rhs = x * x * x + a2 * x * x + a4 * x + a6;
            if (lhs - rhs).rem_euclid(m) == 0 {
                n += 1;
            }
        }
    }
    n
}

/// Cached traces of Frobenius for one curve.
///
/// Reads take a shared lock; a miss computes outside the lock and then takes
/// the write lock to insert, so concurrent readers never block on point
/// counting.
#[derive(Debug)]
pub struct FrobeniusTable {
    curve: EllipticCurve,
    cache: RwLock<BTreeMap<u64, i64>>,
}

/// A trace of Frobenius at a good prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrobeniusTrace {
    pub ell: u64,
    pub a_ell: i64,
}

impl FrobeniusTable {
    pub fn new(curve: EllipticCurve) -> Self {
        FrobeniusTable {
            curve,
            cache: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn curve(&self) -> &EllipticCurve {
        &self.curve
    }

    pub fn get(&self, ell: u64) -> Result<FrobeniusTrace, CurveError> {
        if let Some(&a) = self.cache.read().expect("ap cache poisoned").get(&ell) {
            return Ok(FrobeniusTrace { ell, a_ell: a });
        }
        let a = self.curve.ap(ell)?;
        self.cache.write().expect("ap cache poisoned").insert(ell, a);
        Ok(FrobeniusTrace { ell, a_ell: a })
    }
}

impl FromStr for EllipticCurve {
    type Err = CurveError;

    /// Parse `label a1 a2 a3 a4 a6 conductor`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_record(s, 0)
    }
}

fn parse_record(s: &str, line: usize) -> Result<EllipticCurve, CurveError> {
    let err = |msg: String| CurveError::Parse { line, msg };
    let fields: Vec<&str> = s.split_whitespace().collect();
    if fields.len() != 7 {
        return Err(err(format!("expected 7 fields, found {}", fields.len())));
    }
    let label = fields[0];
    if !label
        .chars()
        .all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '-' | '_'))
    {
        return Err(err(format!("invalid label {label:?}")));
    }
    let mut a = [0i64; 5];
    for (slot, text) in a.iter_mut().zip(&fields[1..6]) {
        *slot = text
            .parse()
            .map_err(|_| err(format!("invalid coefficient {text:?}")))?;
    }
    let conductor: u64 = fields[6]
        .parse()
        .map_err(|_| err(format!("invalid conductor {:?}", fields[6])))?;
    EllipticCurve::new(label, a, conductor)
}

/// Parse a curve file: one record per line, `#` starts a comment.
pub fn parse_curve_file(text: &str) -> Result<Vec<EllipticCurve>, CurveError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        out.push(parse_record(body, i + 1)?);
    }
    Ok(out)
}

/// The Hasse bound `|a| <= 2 sqrt(ell)`, checked exactly as `a^2 <= 4 ell`.
pub fn within_hasse(a: i64, ell: u64) -> bool {
    (a.unsigned_abs() as u128).pow(2) <= 4 * ell as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e11a1() -> EllipticCurve {
        EllipticCurve::new("11a1", [0, -1, 1, -10, -20], 11).unwrap()
    }

    #[test]
    fn validation() {
        assert_eq!(e11a1().discriminant(), BigInt::from(-161051));
        assert_eq!(
            EllipticCurve::new("z", [0, 0, 0, 0, 0], 1),
            Err(CurveError::SingularCurve("z".into()))
        );
        let e = EllipticCurve::new("32a2", [0, 0, 0, -1, 0], 32).unwrap();
        assert_eq!(e.discriminant(), BigInt::from(64));
        assert!(matches!(
            EllipticCurve::new("bad", [0, -1, 1, -10, -20], 33),
            Err(CurveError::ConductorMismatch { prime: 3, .. })
        ));
    }

    #[test]
    fn traces_of_11a1() {
        let e = e11a1();
        assert_eq!(e.ap(3), Ok(-1));
        assert_eq!(e.ap(19), Ok(0));
        assert_eq!(e.ap(7), Ok(-2));
        assert_eq!(e.ap(2), Ok(-2));
        assert!(matches!(e.ap(11), Err(CurveError::BadReductionPrime { .. })));
        let e32 = EllipticCurve::new("32a2", [0, 0, 0, -1, 0], 32).unwrap();
        assert!(matches!(e32.ap(2), Err(CurveError::BadReductionPrime { .. })));
    }

    #[test]
    fn supersingular_detection() {
        let e = e11a1();
        assert!(e.is_supersingular(19));
        assert!(!e.is_supersingular(11));
        assert!(!e.is_supersingular(7));
        assert_eq!(e.supersingular_primes(30), vec![19, 29]);
        assert!(e.supersingular_primes(4).is_empty());
    }

    #[test]
    fn parsing() {
        let text = "# comment\n11a1 0 -1 1 -10 -20 11  # trailing\n\n37a1 0 0 1 -1 0 37\n";
        let curves = parse_curve_file(text).unwrap();
        assert_eq!(curves.len(), 2);
        assert_eq!(curves[1].label, "37a1");
        assert_eq!(curves[0].record(), "11a1 0 -1 1 -10 -20 11");
        assert!(matches!(
            parse_curve_file("x 1 2 3\n"),
            Err(CurveError::Parse { line: 1, .. })
        ));
        assert!(parse_curve_file("a,b 0 -1 1 -10 -20 11").is_err());
    }

    #[test]
    fn table_caches() {
        let t = FrobeniusTable::new(e11a1());
        assert_eq!(t.get(19).unwrap().a_ell, 0);
        assert_eq!(t.get(19).unwrap().a_ell, 0);
        assert!(t.get(11).is_err());
    }
}
