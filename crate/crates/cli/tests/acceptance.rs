//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::One;
use pmiwasawa::arith::is_prime;
use pmiwasawa::iwasawa::q_seq;
use pmiwasawa::mazur_tate::{
    check_bounds, corollary_sum_value, signed_invariants, Case, SignOutcome,
};
use pmiwasawa::modsym::manin_relations_hold;
use pmiwasawa::{EigenSymbol, EllipticCurve, ModularSymbolSpace, Sign, ThetaElement};
use pmiwasawa_cli::cache::{Provenance, SymbolCache};
use pmiwasawa_cli::report::{csv_string, csv_without_runtime, Bound, Check, Expectation};
use pmiwasawa_cli::selftest::{lemma_suite, reference_curves};
use pmiwasawa_cli::{run_curves, RunConfig, SweepOutcome};

type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn curve(label: &str) -> EllipticCurve {
    reference_curves()
        .into_iter()
        .find(|c| c.label == label)
        .expect("reference curve")
}

/// Relations, star sign and held-out Hecke primes for every reference curve.
fn modular_symbols() -> Verdict {
    let mut notes = Vec::new();
    for curve in reference_curves() {
        let start = Instant::now();
        let space = ModularSymbolSpace::new(curve.conductor);
        let mut held_out = Vec::new();
        for sign in [Sign::Plus, Sign::Minus] {
            let sym = EigenSymbol::compute(&space, &curve, sign)
                .map_err(|e| format!("{}{}: {e}", curve.label, sign.symbol()))?;
            let v = sym.values_big();
            ensure(manin_relations_hold(space.p1(), sym.values()), || {
                format!("{}: Manin relations fail", curve.label)
            })?;
            ensure(space.satisfies_relations(&v), || {
                format!("{}: relation matrix not annihilated", curve.label)
            })?;
            let starred: Vec<BigInt> = v.iter().map(|x| x * sign.value()).collect();
            ensure(space.star(&v) == starred, || format!("{}: wrong star sign", curve.label))?;
            for ell in (2..=20u64).filter(|&l| is_prime(l) && curve.conductor % l != 0) {
                if sym.hecke_primes().contains(&ell) {
                    continue;
                }
                // a_ell here comes from counting points
                let a = curve.ap(ell).map_err(|e| e.to_string())?;
                ensure(sym.is_hecke_eigen(&space, ell, a), || {
                    format!("{}{}: T_{ell} != {a}", curve.label, sign.symbol())
                })?;
                held_out.push(ell);
            }
        }
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(60), || {
            format!("{}: {elapsed:?} over one minute", curve.label)
        })?;
        held_out.sort_unstable();
        held_out.dedup();
        notes.push(format!("{} held out {:?} in {:?}", curve.label, held_out, elapsed));
    }
    Ok(notes.join("; "))
}

fn lemma() -> Verdict {
    let r = lemma_suite(20_240_601, 200);
    ensure(r.passed, || r.detail.clone())?;
    ensure(r.elapsed_ms < 10_000, || format!("{} ms over 10 s", r.elapsed_ms))?;
    Ok(format!("{} in {} ms", r.detail, r.elapsed_ms))
}

fn theta_identities() -> Verdict {
    let e = curve("11a1");
    let sym = EigenSymbol::compute(&ModularSymbolSpace::new(11), &e, Sign::Plus)
        .map_err(|e| e.to_string())?;
    let primes: Vec<u64> = e.supersingular_primes(60).into_iter().take(2).collect();
    ensure(primes == [19, 29], || format!("unexpected primes {primes:?}"))?;
    let mut notes = Vec::new();
    for &p in &primes {
        let start = Instant::now();
        let (signed, thetas) = signed_invariants(&sym, p, 3, None).map_err(|e| e.to_string())?;
        let low = start.elapsed();
        for t in &thetas {
            let n = t.level();
            // degree: (1+T)^j with j < p^n
            ensure(t.group_coeffs().len() as u64 == p.pow(n), || format!("p={p} n={n}: degree"))?;
            ensure(t.denominator() as u64 % p != 0, || format!("p={p} n={n}: not p-integral"))?;
            if n <= 2 {
                let poly = t.to_poly();
                ensure((poly.degree().unwrap_or(0) as u64) < p.pow(n), || {
                    format!("p={p} n={n}: expanded degree")
                })?;
                ensure(poly.coeffs().iter().all(|c| c.denom().is_one()), || {
                    format!("p={p} n={n}: non-integral coefficient")
                })?;
            }
        }
        for case in Case::ALL {
            let (n, k) = case.theta_coefficient(p);
            let direct = corollary_sum_value(&sym, p, case).map_err(|e| e.to_string())?;
            let theta = thetas
                .iter()
                .find(|t| t.level() == n)
                .ok_or(format!("p={p}: level {n} missing"))?;
            ensure(direct == theta.coefficient(k), || {
                format!("p={p} {case}: sum {direct} != coefficient {}", theta.coefficient(k))
            })?;
        }
        for sign in [Sign::Plus, Sign::Minus] {
            let SignOutcome::Stabilized { witness: (lo, hi), .. } = signed.get(sign) else {
                return Err(format!("p={p} sign {}: not stabilized", sign.symbol()));
            };
            let level = |n: u32| thetas.iter().find(|t| t.level() == n).and_then(ThetaElement::invariants);
            let (a, b) = (level(*lo).ok_or("missing level")?, level(*hi).ok_or("missing level")?);
            ensure(a.mu == b.mu, || format!("p={p}: mu moves between {lo} and {hi}"))?;
            ensure(
                (b.lambda - a.lambda) as u64 == q_seq(p, *hi) - q_seq(p, *lo),
                || format!("p={p}: lambda({hi}) - lambda({lo}) != q_{hi} - q_{lo}"),
            )?;
        }
        let elapsed = start.elapsed();
        ensure(elapsed < Duration::from_secs(30 * 60), || format!("p={p}: {elapsed:?}"))?;
        notes.push(format!("p={p} n<=3 in {low:?}"));
    }
    Ok(notes.join("; "))
}

fn audit_rows(outcome: &SweepOutcome) -> Result<(usize, usize), String> {
    let mut applied = 0;
    for row in &outcome.rows {
        if let Some(e) = &row.error {
            return Err(format!("{} p={}: {e}", row.label, row.p));
        }
        for (b, name) in row.bounds().iter().zip(["mu-<=1", "mu+<=2", "mu-<=p+1+c", "mu+<=3"]) {
            match b {
                Bound::Fail => return Err(format!("{} p={}: {name} violated", row.label, row.p)),
                Bound::Pass => applied += 1,
                Bound::Na => {}
            }
        }
    }
    Ok((outcome.rows.len(), applied))
}

/// The sweep at `n_max = 3`, plus the rank-one curve at `n_max = 4` so that
/// its minus side stabilizes.
fn theorem_audit(main: &SweepOutcome) -> Verdict {
    let (rows, applied) = audit_rows(main)?;
    let e = curve("37a1");
    let sym = EigenSymbol::compute(&ModularSymbolSpace::new(37), &e, Sign::Plus)
        .map_err(|e| e.to_string())?;
    let mut deep = 0;
    for p in e.supersingular_primes(60) {
        let (signed, _) = signed_invariants(&sym, p, 4, Some(pmiwasawa_cli::DEFAULT_MAX_EVALS))
            .map_err(|e| format!("37a1 p={p} n_max=4: {e}"))?;
        let report = check_bounds(&sym, p, &signed, None).map_err(|e| e.to_string())?;
        for case in Case::ALL {
            let audit = report.case(case);
            match Bound::from(audit.verdict) {
                Bound::Fail => {
                    return Err(format!("37a1 p={p} n_max=4: {case} mu={:?} > {}", audit.mu, audit.bound))
                }
                Bound::Pass => deep += 1,
                Bound::Na => {}
            }
        }
    }
    Ok(format!(
        "{rows} cells, {applied} applicable bounds hold; 37a1 at n_max=4 adds {deep}; 0 violations"
    ))
}

fn inequality_flags(main: &SweepOutcome) -> Verdict {
    let mut holds = 0;
    let mut violated = Vec::new();
    for row in &main.rows {
        let flags = [
            ("sup1", row.sup_n1),
            ("sup2", row.sup_n2),
            ("sup3", row.sup_n3),
            ("S1", row.s1_size),
            ("S2", row.s2_size),
            ("S4", row.s4_size),
        ];
        for (name, f) in flags {
            match f {
                Some(Check::Holds) => holds += 1,
                Some(Check::Violated) => violated.push(format!("{}@{}:{name}", row.label, row.p)),
                // sizes past the evaluation budget are left unflagged
                None if row.p.pow(3) > pmiwasawa_cli::DEFAULT_MAX_EVALS => {}
                None => return Err(format!("{} p={}: {name} not flagged", row.label, row.p)),
            }
        }
    }
    let csv = csv_string(&main.rows);
    for col in ["sup_n1", "sup_n2", "sup_n3", "s1_size", "s2_size", "s4_size"] {
        ensure(csv.contains(col), || format!("column {col} missing"))?;
    }
    ensure(csv.contains("holds"), || "no holds flag written".into())?;
    Ok(format!(
        "{holds} hold, {} violated{}{}",
        violated.len(),
        if violated.is_empty() { "" } else { ": " },
        violated.join(" ")
    ))
}

fn rank_zero(main: &SweepOutcome) -> Verdict {
    let mut tested = 0;
    let mut warns = Vec::new();
    for row in main.rows.iter().filter(|r| r.label == "11a1" || r.label == "32a2") {
        ensure(row.analytic_rank_zero, || format!("{}: [0]+ vanishes", row.label))?;
        tested += 1;
        match row.expectation {
            Expectation::Ok => {}
            Expectation::Warn => warns.push(format!("{}@{}", row.label, row.p)),
            Expectation::Na => return Err(format!("{} p={}: not stabilized", row.label, row.p)),
        }
    }
    ensure(tested > 0, || "no rank-0 cells".into())?;
    ensure(warns.is_empty(), || format!("WARN at {}", warns.join(" ")))?;
    Ok(format!("mu+-=lambda+-=0 at {tested}/{tested} primes"))
}

fn dump_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .map(|d| {
            d.filter_map(Result::ok)
                .map(|e| (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap_or_default()))
                .collect()
        })
        .unwrap_or_default();
    files.sort();
    files
}

fn determinism(main: &SweepOutcome, config: &RunConfig, curves: &[EllipticCurve]) -> Verdict {
    let reference = csv_without_runtime(&csv_string(&main.rows));
    let cold_dumps = dump_files(config.dump_theta.as_deref().ok_or("no dump dir")?);
    ensure(!cold_dumps.is_empty(), || "no dumps written".into())?;

    let scratch = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut warm = config.clone();
    warm.dump_theta = Some(scratch.path().join("warm"));
    let again = run_curves(&warm, curves).map_err(|e| e.to_string())?;
    ensure(csv_without_runtime(&csv_string(&again.rows)) == reference, || {
        "warm-cache report differs".into()
    })?;
    ensure(dump_files(scratch.path().join("warm").as_path()) == cold_dumps, || {
        "warm-cache dumps differ".into()
    })?;

    let cache = SymbolCache::new(config.cache_dir.clone().ok_or("no cache")?);
    for c in curves {
        let (_, how) = cache
            .get_or_compute(&ModularSymbolSpace::new(c.conductor), c, Sign::Plus)
            .map_err(|e| e.to_string())?;
        ensure(how == Provenance::Cached, || format!("{}: {how:?} on warm cache", c.label))?;
    }

    let mut uncached = config.clone();
    uncached.cache_dir = None;
    uncached.dump_theta = None;
    uncached.jobs = 3;
    let third = run_curves(&uncached, curves).map_err(|e| e.to_string())?;
    ensure(csv_without_runtime(&csv_string(&third.rows)) == reference, || {
        "uncached run with 3 workers differs".into()
    })?;
    Ok(format!(
        "{} report bytes and {} dump files identical over cold, warm and uncached runs",
        reference.len(),
        cold_dumps.len()
    ))
}

fn main() -> ExitCode {
    let scratch = tempfile::tempdir().expect("temp dir");
    let curves = reference_curves();
    let mut config = RunConfig::new(scratch.path().join("unused.txt"));
    config.pmax = 60;
    config.n_max = 3;
    config.cache_dir = Some(scratch.path().join("cache"));
    config.dump_theta = Some(scratch.path().join("cold"));
    let sweep_start = Instant::now();
    let main = run_curves(&config, &curves);
    let sweep_time = sweep_start.elapsed();

    let sweep_based = |f: &dyn Fn(&SweepOutcome) -> Verdict| match &main {
        Ok(m) => f(m),
        Err(e) => Err(format!("sweep failed: {e}")),
    };
    let criteria: Vec<(&str, Verdict)> = vec![
        ("1 modular symbol engine", modular_symbols()),
        ("2 invariant extraction", lemma()),
        ("3 theta identities for 11a1", theta_identities()),
        ("4 bound audit", sweep_based(&theorem_audit)),
        ("5 inequality flags", sweep_based(&inequality_flags)),
        ("6 rank-0 expectation", sweep_based(&rank_zero)),
        ("7 determinism and cache", sweep_based(&|m| determinism(m, &config, &curves))),
    ];
    println!("sweep of {} curves over p <= 60 took {sweep_time:?}", curves.len());
    let mut failed = 0;
    for (name, verdict) in &criteria {
        match verdict {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
