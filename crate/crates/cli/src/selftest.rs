//! Seeded invariant suites behind the `selftest` subcommand.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use pmiwasawa::arith::is_prime;
use pmiwasawa::iwasawa::{omega, refined_invariants};
use pmiwasawa::mazur_tate::{corollary_sum_value, Case};
use pmiwasawa::{
    EigenSymbol, EllipticCurve, InvariantPair, LogTable, ModularSymbolSpace, PAdicPoly, Sign,
    ThetaElement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

/// A polynomial `F = p^mu (T^lambda + p F0) U` with `U(0)` a `p`-unit, and the
/// level `n` with `lambda < p^n` at which it is projected.
#[derive(Debug, Clone)]
pub struct LemmaCase {
    pub p: u64,
    pub n: u32,
    pub poly: PAdicPoly,
    pub expected: InvariantPair,
}

const LEMMA_LEVELS: [(u64, u32); 8] = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1), (7, 2), (11, 1)];

fn random_poly(rng: &mut ChaCha8Rng, p: u64, degree: usize, bound: i64) -> PAdicPoly {
    PAdicPoly::from_ints(p, (0..=degree).map(|_| rng.gen_range(-bound..=bound)))
}

pub fn lemma_cases(seed: u64, count: usize) -> Vec<LemmaCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (p, n) = LEMMA_LEVELS[rng.gen_range(0..LEMMA_LEVELS.len())];
            let pn = p.pow(n) as usize;
            let mu = rng.gen_range(0..=3u32);
            let lambda = rng.gen_range(0..pn);
            // F0 may run past p^n so that the projection does real work
            let f0_degree = rng.gen_range(0..pn + 8);
            let f0 = random_poly(&mut rng, p, f0_degree, 40);
            let unit_degree = rng.gen_range(0..4);
            let mut unit: Vec<i64> = (0..=unit_degree).map(|_| rng.gen_range(-20..=20)).collect();
            unit[0] = rng.gen_range(1..p as i64) + p as i64 * rng.gen_range(-5..=5);
            let unit = PAdicPoly::from_ints(p, unit);
            let pr = BigRational::from_integer(BigInt::from(p));
            let core = &PAdicPoly::monomial(p, BigRational::one(), lambda) + &f0.scale(&pr);
            let poly = (&core * &unit).scale(&BigRational::from_integer(BigInt::from(p).pow(mu)));
            LemmaCase {
                p,
                n,
                poly,
                expected: InvariantPair { mu, lambda },
            }
        })
        .collect()
}

/// Number of cases whose projection to level `n` reproduces `(mu, lambda)`.
pub fn lemma_suite(seed: u64, count: usize) -> SuiteResult {
    let start = Instant::now();
    let cases = lemma_cases(seed, count);
    let mut omegas: HashMap<(u64, u32), PAdicPoly> = HashMap::new();
    let mut failures = Vec::new();
    for (i, c) in cases.iter().enumerate() {
        let w = omegas.entry((c.p, c.n)).or_insert_with(|| omega(c.p, c.n));
        let (_, r) = c.poly.divmod_monic(w);
        let got = r.invariants().ok();
        let direct = c.poly.invariants().ok();
        let via_api = refined_invariants(&c.poly, c.n).ok();
        if got != Some(c.expected) || direct != Some(c.expected) || via_api != got {
            failures.push(format!("case {i} (p={}, n={}): got {got:?}", c.p, c.n));
        }
    }
    SuiteResult {
        name: "lemma-projection",
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{count} cases reproduce (mu, lambda)")
        } else {
            failures.join("; ")
        },
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn log_table_suite() -> SuiteResult {
    let start = Instant::now();
    let mut bad = Vec::new();
    for (p, n) in [(5u64, 1u32), (5, 2), (7, 2), (11, 1), (19, 1)] {
        let t = LogTable::new(p, n).expect("valid table");
        let m = t.modulus();
        let mut counts = vec![0u64; t.period()];
        for a in (1..m).filter(|a| a % p != 0) {
            let w = t.teich(a);
            let ok_lift = w % p == a % p && pow_mod(w, p - 1, m) == 1;
            let ok_log = w * t.gamma_pow(t.log(a)) % m == a;
            if !ok_lift || !ok_log {
                bad.push(format!("p={p} n={n} a={a}"));
            }
            counts[t.log(a)] += 1;
        }
        if counts.iter().any(|&c| c != p - 1) {
            bad.push(format!("p={p} n={n}: uneven fibres"));
        }
    }
    result("log-table", bad, start)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn result(name: &'static str, bad: Vec<String>, start: Instant) -> SuiteResult {
    SuiteResult {
        name,
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "ok".into()
        } else {
            bad.join("; ")
        },
        elapsed_ms: start.elapsed().as_millis(),
    }
}

pub fn reference_curves() -> Vec<EllipticCurve> {
    [
        ("11a1", [0, -1, 1, -10, -20], 11),
        ("32a2", [0, 0, 0, -1, 0], 32),
        ("37a1", [0, 0, 1, -1, 0], 37),
    ]
    .into_iter()
    .map(|(l, a, n)| EllipticCurve::new(l, a, n).expect("reference curve"))
    .collect()
}

/// Hecke relation `a_l [r] = sum_k [(r+k)/l] + [l r]` at random `r`.
fn hecke_on_values_suite(seed: u64) -> SuiteResult {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let mut bad = Vec::new();
    for curve in reference_curves() {
        let space = ModularSymbolSpace::new(curve.conductor);
        for sign in [Sign::Plus, Sign::Minus] {
            let sym = match EigenSymbol::compute(&space, &curve, sign) {
                Ok(s) => s,
                Err(e) => {
                    bad.push(format!("{}: {e}", curve.label));
                    continue;
                }
            };
            for _ in 0..200 {
                let ell = loop {
                    let l = rng.gen_range(2..30u64);
                    if is_prime(l) && curve.conductor % l != 0 {
                        break l;
                    }
                };
                let m = rng.gen_range(1..500i64);
                let a = rng.gen_range(-1000..1000i64);
                let a_l = curve.ap(ell).expect("good prime");
                let l = ell as i64;
                let rhs: i64 = (0..l)
                    .map(|k| sym.eval_numerator(a + k * m, m * l))
                    .sum::<i64>()
                    + sym.eval_numerator(a * l, m);
                if a_l * sym.eval_numerator(a, m) != rhs {
                    bad.push(format!("{}{} l={ell} r={a}/{m}", curve.label, sign.symbol()));
                }
            }
        }
    }
    result("hecke-on-values", bad, start)
}

fn theta_identities_suite() -> SuiteResult {
    let start = Instant::now();
    let mut bad = Vec::new();
    let curve = &reference_curves()[0];
    let sym = EigenSymbol::compute(&ModularSymbolSpace::new(11), curve, Sign::Plus)
        .expect("11a1 symbol");
    for p in curve.supersingular_primes(30) {
        for case in Case::ALL {
            let (n, k) = case.theta_coefficient(p);
            let direct = corollary_sum_value(&sym, p, case);
            let theta = ThetaElement::compute(&sym, p, n).map(|t| t.coefficient(k));
            if direct.is_err() || direct != theta {
                bad.push(format!("p={p} {case:?}"));
            }
        }
        for n in 0..=2 {
            let table = LogTable::new(p, n).expect("table");
            let a = ThetaElement::compute_with(&sym, &table);
            let b = ThetaElement::compute_by_units(&sym, &table);
            match (a, b) {
                (Ok(a), Ok(b)) if a.group_coeffs() == b.group_coeffs() => {}
                _ => bad.push(format!("p={p} n={n}: assembly orders differ")),
            }
        }
    }
    result("theta-identities", bad, start)
}

pub fn run_selftest(seed: u64) -> Vec<SuiteResult> {
    vec![
        lemma_suite(seed, 200),
        log_table_suite(),
        hecke_on_values_suite(seed),
        theta_identities_suite(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_cases_are_reproducible() {
        let a = lemma_cases(7, 5);
        let b = lemma_cases(7, 5);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.poly, y.poly);
            assert!((x.expected.lambda as u64) < x.p.pow(x.n));
        }
    }

    #[test]
    fn small_suites_pass() {
        assert!(lemma_suite(1, 20).passed);
        assert!(log_table_suite().passed);
    }
}
