//! Serialized Mazur–Tate elements.
//!
//! Small elements are written as the coefficient list of a `PAdicPoly` in
//! powers of `T`. Above `limit` (on `p^n`) the exact expansion is too large to
//! be useful and the group-ring coefficients of `(1+T)^j` are written instead.

use std::fs;
use std::path::{Path, PathBuf};

use pmiwasawa::ThetaElement;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// Coefficients of `T^k`.
    PowersOfT,
    /// Coefficients of `(1+T)^j`.
    GroupRing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaDump {
    pub label: String,
    pub p: u64,
    pub n: u32,
    pub basis: Basis,
    /// `"num/den"` strings, lowest index first.
    pub coefficients: Vec<String>,
    pub mu: Option<u32>,
    pub lambda: Option<usize>,
}

pub fn theta_dump(theta: &ThetaElement, limit: u64) -> ThetaDump {
    let period = theta.group_coeffs().len() as u64;
    let (basis, coefficients) = if period <= limit {
        (Basis::PowersOfT, theta.to_poly().to_strings())
    } else {
        let den = theta.denominator();
        (
            Basis::GroupRing,
            theta
                .group_coeffs()
                .iter()
                .map(|c| format!("{c}/{den}"))
                .collect(),
        )
    };
    let inv = theta.invariants();
    ThetaDump {
        label: theta.label().to_string(),
        p: theta.prime(),
        n: theta.level(),
        basis,
        coefficients,
        mu: inv.map(|i| i.mu),
        lambda: inv.map(|i| i.lambda),
    }
}

pub fn dump_path(dir: &Path, theta: &ThetaElement) -> PathBuf {
    dir.join(format!(
        "{}_p{}_n{}.json",
        theta.label(),
        theta.prime(),
        theta.level()
    ))
}

pub fn write_dumps(dir: &Path, thetas: &[ThetaElement], limit: u64) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    for t in thetas {
        let text = serde_json::to_string(&theta_dump(t, limit))?;
        fs::write(dump_path(dir, t), text + "\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pmiwasawa::{EigenSymbol, EllipticCurve, ModularSymbolSpace, PAdicPoly, Sign};

    #[test]
    fn dumps_parse_back() {
        let e = EllipticCurve::new("11a1", [0, -1, 1, -10, -20], 11).unwrap();
        let sym = EigenSymbol::compute(&ModularSymbolSpace::new(11), &e, Sign::Plus).unwrap();
        let th = ThetaElement::compute(&sym, 19, 1).unwrap();
        let d = theta_dump(&th, 400);
        assert_eq!(d.basis, Basis::PowersOfT);
        let poly = PAdicPoly::from_strings(19, &d.coefficients).unwrap();
        assert_eq!(poly, th.to_poly());
        assert_eq!((d.mu, d.lambda), (Some(0), Some(0)));

        let d = theta_dump(&th, 10);
        assert_eq!(d.basis, Basis::GroupRing);
        assert_eq!(d.coefficients.len(), 19);
    }
}
