//! Manin presentation of weight-2 modular symbols for `Gamma_0(N)`.
//!
//! The space of symbols is the free module on `P^1(Z/NZ)` modulo the 2-term
//! relations `x + xS = 0` and 3-term relations `x + xU + xU^2 = 0`. We work
//! with its dual: linear functionals on the generators that vanish on every
//! relation. Hecke operators and the star involution act on functionals by
//! pullback, `(A^* phi)(x) = phi(A x)`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::heilbronn::merel;
use super::p1::P1List;
use crate::linalg::{Echelon, IntVec};

/// `S = [[0, -1], [1, 0]]`
pub const S: [i64; 4] = [0, -1, 1, 0];
/// `U = [[0, -1], [1, -1]]`, of order 3 in `PSL_2(Z)`.
pub const U: [i64; 4] = [0, -1, 1, -1];
/// `U^2 = [[-1, 1], [-1, 0]]`
pub const U2: [i64; 4] = [-1, 1, -1, 0];

pub type Matrix = Vec<Vec<BigRational>>;

#[derive(Debug, Clone)]
pub struct ModularSymbolSpace {
    p1: Arc<P1List>,
    relations: Vec<IntVec>,
    /// Echelonized basis of the functionals vanishing on all relations.
    dual: Echelon,
}

impl ModularSymbolSpace {
    pub fn new(level: u64) -> Self {
        let p1 = Arc::new(P1List::new(level));
        let relations = manin_relations(&p1);
        let m = p1.len();
        let kernel = crate::linalg::kernel(&relations, m);
        let dual = Echelon::new(&kernel, m);
        ModularSymbolSpace {
            p1,
            relations,
            dual,
        }
    }

    pub fn level(&self) -> u64 {
        self.p1.level()
    }

    pub fn p1(&self) -> &Arc<P1List> {
        &self.p1
    }

    pub fn num_generators(&self) -> usize {
        self.p1.len()
    }

    /// Rows of the relation matrix (one per 2-term or 3-term relation).
    pub fn relation_matrix(&self) -> &[IntVec] {
        &self.relations
    }

    /// Dimension of the quotient by the Manin relations.
    pub fn dimension(&self) -> usize {
        self.dual.rank()
    }

    /// Basis of the dual space as functionals on the generators.
    pub fn dual_basis(&self) -> &[IntVec] {
        &self.dual.rows
    }

    /// Whether a functional vanishes on every Manin relation.
    pub fn satisfies_relations(&self, phi: &[BigInt]) -> bool {
        self.relations
            .iter()
            .all(|r| r.iter().zip(phi).map(|(a, b)| a * b).sum::<BigInt>().is_zero())
    }

    /// Pullback of a functional under the star involution `(c:d) -> (-c:d)`.
    pub fn star(&self, phi: &[BigInt]) -> IntVec {
        (0..self.p1.len())
            .map(|i| {
                let (c, d) = self.p1.rep(i);
                phi[self.p1.index_unchecked(-(c as i64), d as i64)].clone()
            })
            .collect()
    }

    /// Pullback of a functional under `T_ell`, via Merel's Heilbronn matrices.
    /// Only meaningful for `ell` not dividing the level.
    pub fn hecke(&self, phi: &[BigInt], ell: u64) -> IntVec {
        let mats = merel(ell);
        (0..self.p1.len())
            .map(|i| {
                mats.iter()
                    .map(|h| &phi[self.p1.act(i, h).expect("good prime keeps (c:d) in P^1")])
                    .sum()
            })
            .collect()
    }

    /// Coordinates of a functional in the dual basis; `None` if it is not in the
    /// span.
    pub fn coordinates(&self, phi: &[BigInt]) -> Option<Vec<BigRational>> {
        let coords: Vec<BigRational> = self
            .dual
            .rows
            .iter()
            .zip(&self.dual.pivots)
            .map(|(row, &pc)| BigRational::new(phi[pc].clone(), row[pc].clone()))
            .collect();
        let mut rebuilt = vec![BigRational::zero(); phi.len()];
        for (row, x) in self.dual.rows.iter().zip(&coords) {
            for (acc, r) in rebuilt.iter_mut().zip(row) {
                *acc += x * BigRational::from_integer(r.clone());
            }
        }
        let ok = rebuilt
            .iter()
            .zip(phi)
            .all(|(a, b)| *a == BigRational::from_integer(b.clone()));
        ok.then_some(coords)
    }

    /// Matrix of an operator on the dual space: column `j` holds the
    /// coordinates of the image of basis functional `j`.
    fn operator_matrix(&self, op: impl Fn(&[BigInt]) -> IntVec) -> Matrix {
        let k = self.dimension();
        let cols: Vec<Vec<BigRational>> = self
            .dual
            .rows
            .iter()
            .map(|b| {
                self.coordinates(&op(b))
                    .expect("operator preserves the relation kernel")
            })
            .collect();
        (0..k)
            .map(|i| (0..k).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    /// The star involution as a `dim x dim` matrix.
    pub fn star_involution(&self) -> Matrix {
        self.operator_matrix(|phi| self.star(phi))
    }

    /// `T_ell` as a `dim x dim` matrix on the dual space.
    pub fn hecke_operator(&self, ell: u64) -> Matrix {
        self.operator_matrix(|phi| self.hecke(phi, ell))
    }
}

fn manin_relations(p1: &P1List) -> Vec<IntVec> {
    let m = p1.len();
    let mut rows: Vec<IntVec> = Vec::new();
    let mut push = |terms: &[usize]| {
        let mut r = vec![BigInt::zero(); m];
        for &t in terms {
            r[t] += 1;
        }
        rows.push(r);
    };
    for i in 0..m {
        let s = p1.act(i, &S).expect("S preserves P^1");
        push(&[i, s]);
        let u = p1.act(i, &U).expect("U preserves P^1");
        let u2 = p1.act(i, &U2).expect("U^2 preserves P^1");
        push(&[i, u, u2]);
    }
    rows
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let k = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..k)
                .map(|j| {
                    a[i].iter()
                        .zip(b.iter())
                        .map(|(x, row)| x * &row[j])
                        .fold(BigRational::zero(), |s, t| s + t)
                })
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::from_integer(1.into())
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

pub fn trace(a: &Matrix) -> BigRational {
    a.iter()
        .enumerate()
        .map(|(i, r)| r[i].clone())
        .fold(BigRational::zero(), |s, t| s + t)
}
