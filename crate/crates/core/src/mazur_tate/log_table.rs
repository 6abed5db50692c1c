use crate::arith::{is_prime, mod_inverse, pow_mod};

use super::MazurTateError;

/// Discrete logarithms on `(Z/p^{n+1})^x` with respect to `gamma = 1 + p`.
///
/// Every unit factors uniquely as `a = omega(a) * gamma^log(a)` with
/// `omega(a)` a `(p-1)`-st root of unity (the Teichmüller lift of `a mod p`)
/// and `0 <= log(a) < p^n`.
#[derive(Debug, Clone)]
pub struct LogTable {
    p: u64,
    n: u32,
    modulus: u64,
    /// `teich[r]` for `1 <= r < p`; index 0 unused.
    teich: Vec<u64>,
    teich_inv: Vec<u64>,
    gamma_pows: Vec<u64>,
    /// `log` of the principal unit `1 + p*i`, indexed by `i`.
    principal_log: Vec<u32>,
}

impl LogTable {
    pub fn new(p: u64, n: u32) -> Result<Self, MazurTateError> {
        if p < 3 || !is_prime(p) {
            return Err(MazurTateError::InvalidPrime(p));
        }
        let modulus = p
            .checked_pow(n + 1)
            .filter(|&m| m < (1 << 31))
            .ok_or(MazurTateError::LevelTooLarge { p, n })?;
        let size = (modulus / p) as usize;

        // a^(p^n) is constant on residue classes mod p and has order dividing p-1
        let mut teich = vec![0u64; p as usize];
        let mut teich_inv = vec![0u64; p as usize];
        for r in 1..p {
            let t = pow_mod(r, modulus / p, modulus);
            teich[r as usize] = t;
            teich_inv[r as usize] = mod_inverse(t as i64, modulus as i64).expect("unit") as u64;
        }

        let gamma = 1 + p;
        let mut gamma_pows = Vec::with_capacity(size);
        let mut principal_log = vec![u32::MAX; size];
        let mut g = 1u64;
        for j in 0..size {
            gamma_pows.push(g);
            principal_log[((g - 1) / p) as usize] = j as u32;
            g = g * gamma % modulus;
        }
        debug_assert!(principal_log.iter().all(|&l| l != u32::MAX));
        Ok(LogTable {
            p,
            n,
            modulus,
            teich,
            teich_inv,
            gamma_pows,
            principal_log,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.n
    }

    /// `p^{n+1}`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `p^n`, the number of distinct logarithms.
    pub fn period(&self) -> usize {
        self.gamma_pows.len()
    }

    pub fn gamma(&self) -> u64 {
        1 + self.p
    }

    /// `gamma^j mod p^{n+1}`.
    pub fn gamma_pow(&self, j: usize) -> u64 {
        self.gamma_pows[j]
    }

    /// Teichmüller lift of a unit `a`, as a residue mod `p^{n+1}`.
    pub fn teich(&self, a: u64) -> u64 {
        self.teich[(a % self.p) as usize]
    }

    /// `log_gamma(a)` for a unit `a` (any representative).
    #[inline]
    pub fn log(&self, a: u64) -> usize {
        let r = (a % self.p) as usize;
        debug_assert!(r != 0, "not a unit");
        let u = (a % self.modulus) * self.teich_inv[r] % self.modulus;
        self.principal_log[((u - 1) / self.p) as usize] as usize
    }

    /// The `p - 1` units with logarithm `j`, in the order of their residues
    /// mod `p`.
    pub fn units_with_log(&self, j: usize) -> impl Iterator<Item = u64> + '_ {
        let g = self.gamma_pows[j];
        (1..self.p as usize).map(move |r| self.teich[r] * g % self.modulus)
    }
}
