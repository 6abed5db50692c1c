//! The projective line `P^1(Z/NZ)`, indexing the Manin symbols `(c:d)`.

use crate::arith::gcd_u64;

const UNSET: u32 = u32::MAX;

/// Canonical representatives of `P^1(Z/NZ)` with a dense lookup table.
///
/// The representative of a class is its lexicographically smallest pair
/// `(c, d)` with `0 <= c, d < N`.
#[derive(Debug, Clone)]
pub struct P1List {
    level: u64,
    reps: Vec<(u64, u64)>,
    table: Vec<u32>,
}

impl P1List {
    pub fn new(level: u64) -> Self {
        assert!(level >= 1, "level must be positive");
        let n = level;
        let units: Vec<u64> = (0..n).filter(|&u| gcd_u64(u, n) == 1).collect();
        let mut table = vec![UNSET; (n * n) as usize];
        let mut reps = Vec::new();
        // pairs are visited in lexicographic order, so the first member of an
        // orbit seen is its smallest element
        for c in 0..n {
            for d in 0..n {
                if gcd_u64(gcd_u64(c, d), n) != 1 || table[(c * n + d) as usize] != UNSET {
                    continue;
                }
                let idx = reps.len() as u32;
                reps.push((c, d));
                for &u in &units {
                    let slot = ((u * c % n) * n + u * d % n) as usize;
                    table[slot] = idx;
                }
            }
        }
        P1List { level, reps, table }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> &[(u64, u64)] {
        &self.reps
    }

    pub fn rep(&self, i: usize) -> (u64, u64) {
        self.reps[i]
    }

    /// Index of the class of `(c:d)`; `None` when `gcd(c, d, N) != 1`.
    #[inline]
    pub fn index(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.level as i64;
        let slot = (c.rem_euclid(n) * n + d.rem_euclid(n)) as usize;
        match self.table[slot] {
            UNSET => None,
            i => Some(i as usize),
        }
    }

    /// Index of `(c:d)` for a pair known to lie in `P^1`.
    #[inline]
    pub fn index_unchecked(&self, c: i64, d: i64) -> usize {
        let n = self.level as i64;
        self.table[(c.rem_euclid(n) * n + d.rem_euclid(n)) as usize] as usize
    }

    /// Image of generator `i` under right multiplication by `[[a, b], [c, d]]`.
    pub fn act(&self, i: usize, m: &[i64; 4]) -> Option<usize> {
        let (u, v) = self.reps[i];
        let (u, v) = (u as i64, v as i64);
        let [a, b, c, d] = *m;
        self.index(u * a + v * c, u * b + v * d)
    }
}

/// `N * prod_{q | N} (1 + 1/q)`, the size of `P^1(Z/NZ)`.
pub fn p1_size(level: u64) -> u64 {
    crate::arith::prime_factors(level)
        .into_iter()
        .fold(level, |acc, q| acc / q * (q + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_match_index_formula() {
        for n in 1..=60 {
            assert_eq!(P1List::new(n).len() as u64, p1_size(n), "N = {n}");
        }
    }

    #[test]
    fn canonical_reduction() {
        let p1 = P1List::new(11);
        assert_eq!(p1.len(), 12);
        assert_eq!(p1.index(0, 5), p1.index(0, 1));
        assert_eq!(p1.index(3, 4), p1.index(-3, -4));
        assert_eq!(p1.index(1, 0), p1.index(-1, 0));
        assert_eq!(p1.index(0, 0), None);
        let p1 = P1List::new(12);
        assert_eq!(p1.index(2, 4), None);
        assert!(p1.index(2, 3).is_some());
        for (i, &(c, d)) in p1.reps().iter().enumerate() {
            assert_eq!(p1.index(c as i64, d as i64), Some(i));
        }
    }

    #[test]
    fn level_one() {
        let p1 = P1List::new(1);
        assert_eq!(p1.len(), 1);
        assert_eq!(p1.index(5, -3), Some(0));
    }
}
