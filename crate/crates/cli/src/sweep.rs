//! The `(curve, supersingular prime)` grid.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::time::Instant;

use log::{info, warn};
use pmiwasawa::mazur_tate::{check_bounds, signed_invariants, BoundReport, Case, SignOutcome};
use pmiwasawa::{
    EigenSymbol, EllipticCurve, MazurTateError, ModSymError, ModularSymbolSpace, Sign,
    SignedInvariants, ThetaElement,
};
use rayon::prelude::*;

use crate::cache::SymbolCache;
use crate::dump::write_dumps;
use crate::report::{summarize, Bound, Check, Expectation, ResultRow, Summary};
use crate::{CliError, RunConfig, EXIT_ANOMALY, EXIT_CLEAN};

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
}

impl SweepOutcome {
    pub fn has_anomaly(&self) -> bool {
        self.rows.iter().any(|r| r.anomaly)
    }

    pub fn exit_code(&self) -> i32 {
        if self.has_anomaly() {
            EXIT_ANOMALY
        } else {
            EXIT_CLEAN
        }
    }
}

pub fn load_curves(path: &Path) -> Result<Vec<EllipticCurve>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Config(format!("cannot read curve file {}: {e}", path.display()))
    })?;
    let curves = pmiwasawa::curves::parse_curve_file(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    let mut seen = BTreeSet::new();
    for c in &curves {
        if !seen.insert(c.label.as_str()) {
            return Err(CliError::Config(format!("duplicate curve label {}", c.label)));
        }
    }
    Ok(curves)
}

pub fn run(config: &RunConfig) -> Result<SweepOutcome, CliError> {
    config.validate()?;
    let curves = load_curves(&config.curves)?;
    run_curves(config, &curves)
}

/// Sweep already-parsed curves. Output rows are ordered by `(label, p)`.
pub fn run_curves(config: &RunConfig, curves: &[EllipticCurve]) -> Result<SweepOutcome, CliError> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()?;
    let cache = config.cache_dir.as_ref().map(SymbolCache::new);
    let (rows, thetas) = pool.install(|| sweep(config, curves, cache.as_ref()));
    if let Some(dir) = &config.dump_theta {
        write_dumps(dir, &thetas, config.dump_limit)?;
    }
    let summary = summarize(&rows);
    Ok(SweepOutcome { rows, summary })
}

type Cell = (ResultRow, Vec<ThetaElement>);

fn sweep(
    config: &RunConfig,
    curves: &[EllipticCurve],
    cache: Option<&SymbolCache>,
) -> (Vec<ResultRow>, Vec<ThetaElement>) {
    let grid: Vec<(usize, Vec<u64>)> = curves
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let primes = if config.pmax < config.pmin {
                Vec::new()
            } else {
                c.supersingular_primes(config.pmax)
                    .into_iter()
                    .filter(|&p| p >= config.pmin)
                    .collect()
            };
            (i, primes)
        })
        .filter(|(_, ps)| !ps.is_empty())
        .collect();

    let symbols: Vec<(usize, Result<EigenSymbol, ModSymError>)> = grid
        .par_iter()
        .map(|&(i, _)| (i, plus_symbol(&curves[i], cache)))
        .collect();

    let cells: Vec<(usize, u64)> = grid
        .iter()
        .flat_map(|(i, ps)| ps.iter().map(move |&p| (*i, p)))
        .collect();
    let mut out: Vec<Cell> = cells
        .par_iter()
        .map(|&(i, p)| {
            let sym = &symbols.iter().find(|(j, _)| *j == i).expect("symbol per curve").1;
            compute_row(&curves[i], sym, p, config)
        })
        .collect();
    out.sort_by(|a, b| (&a.0.label, a.0.p).cmp(&(&b.0.label, b.0.p)));
    let mut rows = Vec::with_capacity(out.len());
    let mut thetas = Vec::new();
    for (row, th) in out {
        rows.push(row);
        thetas.extend(th);
    }
    (rows, thetas)
}

fn plus_symbol(curve: &EllipticCurve, cache: Option<&SymbolCache>) -> Result<EigenSymbol, ModSymError> {
    let space = ModularSymbolSpace::new(curve.conductor);
    let sym = match cache {
        Some(c) => c.get_or_compute(&space, curve, Sign::Plus).map(|(s, _)| s),
        None => EigenSymbol::compute(&space, curve, Sign::Plus),
    };
    match &sym {
        Ok(_) => info!("{}: plus symbol ready", curve.label),
        Err(e) => warn!("{}: {e}", curve.label),
    }
    sym
}

/// Run the pipeline for one cell. Failures are quarantined to the row.
pub fn compute_row(
    curve: &EllipticCurve,
    symbol: &Result<EigenSymbol, ModSymError>,
    p: u64,
    config: &RunConfig,
) -> Cell {
    let start = Instant::now();
    let a_p = curve.ap(p).unwrap_or_default();
    let sym = match symbol {
        Ok(s) => s,
        // the curve's own data disagrees with the modular symbols
        Err(e) => return (ResultRow::failed(&curve.label, p, a_p, e.to_string(), true), Vec::new()),
    };
    let fail = |e: MazurTateError| {
        if e.is_anomaly() {
            warn!("{} p={p}: {e}", curve.label);
        }
        ResultRow::failed(&curve.label, p, a_p, e.to_string(), e.is_anomaly())
    };
    let (signed, thetas) = match signed_invariants(sym, p, config.n_max, config.max_evals) {
        Ok(x) => x,
        Err(e) => return (fail(e), Vec::new()),
    };
    let report = match check_bounds(sym, p, &signed, config.max_evals) {
        Ok(r) => r,
        Err(e) => return (fail(e), thetas),
    };
    let mut row = assemble_row(curve, sym, p, a_p, &signed, &thetas, &report);
    row.runtime_ms = start.elapsed().as_millis() as u64;
    if row.expectation == Expectation::Warn {
        warn!(
            "{} p={p}: rank-0 expectation not met (mu+={:?} lambda+={:?} mu-={:?} lambda-={:?})",
            curve.label, row.mu_plus, row.lambda_plus, row.mu_minus, row.lambda_minus
        );
    }
    (row, thetas)
}

fn levels(outcome: &SignOutcome) -> Option<String> {
    outcome.witness().map(|(a, b)| format!("{a}-{b}"))
}

fn assemble_row(
    curve: &EllipticCurve,
    sym: &EigenSymbol,
    p: u64,
    a_p: i64,
    signed: &SignedInvariants,
    thetas: &[ThetaElement],
    report: &BoundReport,
) -> ResultRow {
    let rank_zero = sym.eval_numerator(0, 1) != 0;
    let case = |c: Case| report.case(c);
    let ord = |c: Case| case(c).sum_ord;
    let size = |c: Case| case(c).sum_within_bound.map(Check::from);
    let sup = |n: u32| report.sup_norm(n).map(|s| Check::from(s.holds));
    let theta_invariants = thetas
        .iter()
        .map(|t| match t.invariants() {
            Some(inv) => format!("{}:{}:{}", t.level(), inv.mu, inv.lambda),
            None => format!("{}:0", t.level()),
        })
        .collect::<Vec<_>>()
        .join(" ");
    let (plus, minus) = (signed.plus.invariants(), signed.minus.invariants());
    let expectation = match (rank_zero, plus, minus) {
        (false, _, _) => Expectation::Na,
        (true, Some(a), Some(b)) => {
            if a.mu == 0 && a.lambda == 0 && b.mu == 0 && b.lambda == 0 {
                Expectation::Ok
            } else {
                Expectation::Warn
            }
        }
        // nothing to compare against yet
        (true, _, _) => Expectation::Na,
    };
    let bounds = [
        Case::MinusLambda0,
        Case::PlusLambda0,
        Case::MinusLambda1,
        Case::PlusLambda1,
    ]
    .map(|c| Bound::from(case(c).verdict));
    let anomaly = report.has_anomaly() || bounds.contains(&Bound::Fail);
    ResultRow {
        label: curve.label.clone(),
        p,
        a_p,
        analytic_rank_zero: rank_zero,
        mu_plus: plus.map(|i| i.mu),
        lambda_plus: plus.map(|i| i.lambda),
        mu_minus: minus.map(|i| i.mu),
        lambda_minus: minus.map(|i| i.lambda),
        plus_levels: levels(&signed.plus),
        minus_levels: levels(&signed.minus),
        theta_invariants,
        ord_s1: ord(Case::MinusLambda0),
        ord_s2: ord(Case::PlusLambda0),
        ord_s3: ord(Case::MinusLambda1),
        ord_s4: ord(Case::PlusLambda1),
        s1_size: size(Case::MinusLambda0),
        s2_size: size(Case::PlusLambda0),
        s3_size: size(Case::MinusLambda1),
        s4_size: size(Case::PlusLambda1),
        bound_minus_l0: bounds[0],
        bound_plus_l0: bounds[1],
        bound_minus_l1: bounds[2],
        bound_plus_l1: bounds[3],
        sup_n1: sup(1),
        sup_n2: sup(2),
        sup_n3: sup(3),
        sup_p2: report.sup_norm(2).map(|s| s.sup.to_string()),
        expectation,
        anomaly,
        error: None,
        runtime_ms: 0,
    }
}
