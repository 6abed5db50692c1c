//! Fraction-free exact linear algebra over the integers.
//!
//! Row reduction keeps every row primitive (content 1) after each elimination
//! step, so entries stay small for the sparse relation matrices that arise
//! from Manin presentations. Kernels are returned as primitive integer vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IntVec = Vec<BigInt>;

/// Divide a vector by the gcd of its entries and make the first nonzero entry
/// positive. Zero vectors are left untouched.
pub fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    let negate = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    if !g.is_one() || negate {
        let g = if negate { -g } else { g };
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Content (gcd of the entries) of an integer vector; zero for the zero vector.
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Reduced row echelon form computed without fractions.
///
/// Each returned row has a nonzero entry at its pivot column and zeros in all
/// other pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<IntVec>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn new(matrix: &[IntVec], ncols: usize) -> Self {
        let mut rows: Vec<IntVec> = matrix
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        for r in rows.iter_mut() {
            debug_assert_eq!(r.len(), ncols);
            make_primitive(r);
        }
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..ncols {
            if rank == rows.len() {
                break;
            }
            // smallest nonzero pivot keeps growth down
            let Some(best) = (rank..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()))
            else {
                continue;
            };
            rows.swap(rank, best);
            let pivot_row = rows[rank].clone();
            let a = &pivot_row[col];
            for (i, row) in rows.iter_mut().enumerate() {
                if i == rank || row[col].is_zero() {
                    continue;
                }
                let b = row[col].clone();
                let g = a.gcd(&b);
                let (fa, fb) = (a / &g, &b / &g);
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    *x = &fa * &*x - &fb * y;
                }
                make_primitive(row);
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Echelon { rows, pivots, ncols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of `{x : M x = 0}` as primitive integer vectors, one per free column.
    pub fn kernel(&self) -> Vec<IntVec> {
        let mut is_pivot = vec![false; self.ncols];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            // x_free = L, x_pivot(r) = -row_r[free] * L / row_r[pivot(r)]
            let l = self
                .rows
                .iter()
                .zip(&self.pivots)
                .fold(BigInt::one(), |acc, (row, &pc)| acc.lcm(&row[pc]));
            let mut x = vec![BigInt::zero(); self.ncols];
            x[free] = l.clone();
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                if !row[free].is_zero() {
                    x[pc] = -(&row[free] * &l) / &row[pc];
                }
            }
            make_primitive(&mut x);
            out.push(x);
        }
        out
    }
}

/// Kernel of an integer matrix given by rows.
pub fn kernel(matrix: &[IntVec], ncols: usize) -> Vec<IntVec> {
    Echelon::new(matrix, ncols).kernel()
}

pub fn rank(matrix: &[IntVec], ncols: usize) -> usize {
    Echelon::new(matrix, ncols).rank()
}

/// Transpose a list of column vectors (all of length `nrows`) into rows.
pub fn columns_to_rows(cols: &[IntVec], nrows: usize) -> Vec<IntVec> {
    (0..nrows)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(xs: &[i64]) -> IntVec {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn apply(m: &[IntVec], x: &[BigInt]) -> IntVec {
        m.iter()
            .map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    #[test]
    fn kernel_of_small_matrix() {
        let m = vec![iv(&[1, 2, 3]), iv(&[2, 4, 6]), iv(&[1, 0, -1])];
        let e = Echelon::new(&m, 3);
        assert_eq!(e.rank(), 2);
        let k = e.kernel();
        assert_eq!(k, vec![iv(&[1, -2, 1])]);
        assert!(apply(&m, &k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn full_rank_and_zero_matrix() {
        let m = vec![iv(&[2, 0]), iv(&[0, 3])];
        assert!(kernel(&m, 2).is_empty());
        assert_eq!(kernel(&[], 2).len(), 2);
        assert_eq!(rank(&[iv(&[0, 0])], 2), 0);
    }

    #[test]
    fn primitive_normalizes_sign_and_content() {
        let mut v = iv(&[0, -4, 6, 8]);
        make_primitive(&mut v);
        assert_eq!(v, iv(&[0, 2, -3, -4]));
        assert_eq!(content(&iv(&[0, 6, -9])), BigInt::from(3));
    }
}
