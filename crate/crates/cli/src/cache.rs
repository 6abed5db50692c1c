//! On-disk cache of normalized eigensymbols, one text file per
//! `(label, sign)`.
//!
//! ```text
//! pmiwasawa-symbol v1
//! curve <sha256 of the curve record>
//! sign +
//! level 11
//! denominator 1
//! scale 1/2
//! primes 2 3
//! values 0 1 -1 ...
//! checksum <sha256 of every line above>
//! ```
//!
//! Anything that fails to parse or verify is reported as `CacheCorrupt` and
//! the symbol is recomputed and rewritten.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use log::warn;
use num_rational::BigRational;
use pmiwasawa::modsym::P1List;
use pmiwasawa::{EigenSymbol, EllipticCurve, ModSymError, ModularSymbolSpace, Sign};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub const CACHE_HEADER: &str = "pmiwasawa-symbol v1";

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache entry {path} is corrupt: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },
    #[error("cache I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Where a symbol came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    Cached,
    /// The stored entry was unusable and has been rebuilt.
    Rebuilt,
}

#[derive(Debug, Clone)]
pub struct SymbolCache {
    dir: PathBuf,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn curve_hash(curve: &EllipticCurve) -> String {
    sha256_hex(curve.record().as_bytes())
}

impl SymbolCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        SymbolCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entry_path(&self, label: &str, sign: Sign) -> PathBuf {
        let tag = match sign {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        };
        self.dir.join(format!("{label}.{tag}.msym"))
    }

    /// Load a cached symbol. `Ok(None)` when there is no entry.
    pub fn load(
        &self,
        curve: &EllipticCurve,
        sign: Sign,
        p1: &Arc<P1List>,
    ) -> Result<Option<EigenSymbol>, CacheError> {
        let path = self.entry_path(&curve.label, sign);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(CacheError::Io { path, source }),
        };
        decode(&text, curve, sign, p1)
            .map(Some)
            .map_err(|reason| CacheError::CacheCorrupt { path, reason })
    }

    pub fn store(&self, curve: &EllipticCurve, symbol: &EigenSymbol) -> Result<(), CacheError> {
        let path = self.entry_path(&curve.label, symbol.sign());
        let io = |source| CacheError::Io {
            path: path.clone(),
            source,
        };
        fs::create_dir_all(&self.dir).map_err(io)?;
        // write-then-rename so concurrent readers never see half a file
        let tmp = path.with_extension("msym.tmp");
        fs::write(&tmp, encode(curve, symbol)).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }

    /// Cached symbol if valid, otherwise compute and store it.
    pub fn get_or_compute(
        &self,
        space: &ModularSymbolSpace,
        curve: &EllipticCurve,
        sign: Sign,
    ) -> Result<(EigenSymbol, Provenance), ModSymError> {
        let mut provenance = Provenance::Computed;
        match self.load(curve, sign, space.p1()) {
            Ok(Some(sym)) => return Ok((sym, Provenance::Cached)),
            Ok(None) => {}
            Err(e) => {
                warn!("{e}; rebuilding");
                provenance = Provenance::Rebuilt;
            }
        }
        let sym = EigenSymbol::compute(space, curve, sign)?;
        if let Err(e) = self.store(curve, &sym) {
            warn!("{e}");
        }
        Ok((sym, provenance))
    }
}

pub fn encode(curve: &EllipticCurve, symbol: &EigenSymbol) -> String {
    let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
    let mut body = String::new();
    body.push_str(CACHE_HEADER);
    body.push('\n');
    body.push_str(&format!("curve {}\n", curve_hash(curve)));
    body.push_str(&format!("sign {}\n", symbol.sign().symbol()));
    body.push_str(&format!("level {}\n", symbol.level()));
    body.push_str(&format!("denominator {}\n", symbol.denominator()));
    body.push_str(&format!("scale {}\n", symbol.normalization_scale()));
    body.push_str(&format!(
        "primes {}\n",
        join(&mut symbol.hecke_primes().iter().map(u64::to_string))
    ));
    body.push_str(&format!(
        "values {}\n",
        join(&mut symbol.values().iter().map(i64::to_string))
    ));
    let checksum = sha256_hex(body.as_bytes());
    body.push_str(&format!("checksum {checksum}\n"));
    body
}

fn decode(
    text: &str,
    curve: &EllipticCurve,
    sign: Sign,
    p1: &Arc<P1List>,
) -> Result<EigenSymbol, String> {
    let Some(split) = text.rfind("checksum ") else {
        return Err("missing checksum".into());
    };
    let (body, tail) = text.split_at(split);
    let stored = tail.trim_start_matches("checksum ").trim();
    if stored != sha256_hex(body.as_bytes()) {
        return Err("checksum mismatch".into());
    }
    let mut lines = body.lines();
    if lines.next() != Some(CACHE_HEADER) {
        return Err("unknown header".into());
    }
    let mut field = |key: &str| -> Result<String, String> {
        let line = lines.next().ok_or_else(|| format!("missing {key}"))?;
        line.strip_prefix(key)
            .and_then(|r| r.strip_prefix(' ').or(Some(r).filter(|r| r.is_empty())))
            .map(str::to_string)
            .ok_or_else(|| format!("expected {key}"))
    };
    if field("curve")? != curve_hash(curve) {
        return Err("curve hash mismatch".into());
    }
    if field("sign")? != sign.symbol().to_string() {
        return Err("sign mismatch".into());
    }
    if field("level")? != curve.conductor.to_string() {
        return Err("level mismatch".into());
    }
    let denominator: i64 = field("denominator")?
        .parse()
        .map_err(|_| "bad denominator".to_string())?;
    let scale: BigRational = field("scale")?
        .parse()
        .map_err(|_| "bad scale".to_string())?;
    let primes = parse_list::<u64>(&field("primes")?)?;
    let values = parse_list::<i64>(&field("values")?)?;
    EigenSymbol::from_parts(
        curve.label.clone(),
        p1.clone(),
        sign,
        values,
        denominator,
        scale,
        primes,
    )
    .map_err(|e| e.to_string())
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    s.split_whitespace()
        .map(|x| x.parse().map_err(|_| format!("bad entry {x:?}")))
        .collect()
}
