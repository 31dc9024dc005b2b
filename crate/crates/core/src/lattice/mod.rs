//! Integer lattices with big-integer bases.
//!
//! A lattice is kept as the row-Hermite normal form of its generator vectors:
//! row `i` is the `i`-th basis vector, rows are ordered by pivot column, pivots
//! are positive and every entry above a pivot lies in `[0, pivot)`. Read as
//! columns this is the column HNF of the basis matrix `B`, and two lattices are
//! equal exactly when their stored forms are.

pub mod enumerate;
pub mod norm;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::code::LinearCode;
use crate::error::{Error, Result};

pub use enumerate::{
    cvp_distance, lambda1, lambda1_capped, multiples_far_from_lattice, short_vectors, CvpReport, Lambda1Report,
    MultiplesReport,
};
pub use norm::NormSpec;

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_big(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerLattice {
    m: usize,
    /// HNF basis vectors, `rank x m`.
    rows: IntMatrix,
    pivots: Vec<usize>,
}

/// Row HNF restricted to the first `pivot_cols` columns; row operations act
/// on whole rows, so trailing columns record the unimodular transform when
/// an identity block is appended. Returns the pivot columns; rows past the
/// rank have zeros in the first `pivot_cols` columns.
pub(crate) fn hnf_in_place(a: &mut IntMatrix, pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == a.len() {
            break;
        }
        loop {
            let best = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(best) = best else { break };
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let pivot_row = a[r].clone();
                sub_multiple(&mut a[i], &q, &pivot_row);
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r == a.len() || a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for v in a[r].iter_mut() {
                *v = -&*v;
            }
        }
        let pivot_row = a[r].clone();
        for i in 0..r {
            let q = a[i][c].div_floor(&pivot_row[c]);
            if !q.is_zero() {
                sub_multiple(&mut a[i], &q, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn sub_multiple(row: &mut [BigInt], q: &BigInt, other: &[BigInt]) {
    for (x, y) in row.iter_mut().zip(other) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

/// Basis of the integer kernel `{x in Z^n : sum_i x_i a_i = 0}` of the rows
/// `a_1..a_n` (each of length `cols`).
pub fn integer_kernel(rows: &IntMatrix, cols: usize) -> IntMatrix {
    let n = rows.len();
    let mut aug: IntMatrix = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            v
        })
        .collect();
    let rank = hnf_in_place(&mut aug, cols).len();
    let mut kernel: IntMatrix = aug[rank..].iter().map(|r| r[cols..].to_vec()).collect();
    // canonical kernel basis
    let pivots = hnf_in_place(&mut kernel, n);
    kernel.truncate(pivots.len());
    kernel
}

impl IntegerLattice {
    /// Lattice generated by `vectors` (each of length `m`); dependent
    /// generators are absorbed.
    pub fn from_generators(m: usize, vectors: IntMatrix) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "generator of wrong length for ambient dimension {m}"
            )));
        }
        let mut rows = vectors;
        let pivots = hnf_in_place(&mut rows, m);
        rows.truncate(pivots.len());
        Ok(IntegerLattice { m, rows, pivots })
    }

    /// Lattice generated by the columns of an `m x n` matrix.
    pub fn from_columns(basis: &IntMatrix) -> Result<Self> {
        let m = basis.len();
        let n = basis.first().map_or(0, Vec::len);
        if basis.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged basis matrix".into()));
        }
        let cols = (0..n).map(|j| basis.iter().map(|r| r[j].clone()).collect()).collect();
        Self::from_generators(m, cols)
    }

    pub fn identity(m: usize) -> Self {
        Self::scaled_identity(m, 1)
    }

    /// `s Z^m`.
    pub fn scaled_identity(m: usize, s: i64) -> Self {
        let rows = (0..m)
            .map(|i| (0..m).map(|j| BigInt::from(if i == j { s } else { 0 })).collect())
            .collect();
        Self::from_generators(m, rows).expect("square")
    }

    pub fn ambient_dim(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.m
    }

    /// HNF basis vectors, one per row.
    pub fn basis_rows(&self) -> &IntMatrix {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Column basis `B` (`m x rank`).
    pub fn basis_columns(&self) -> IntMatrix {
        (0..self.m)
            .map(|i| self.rows.iter().map(|r| r[i].clone()).collect())
            .collect()
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coefficients(v).is_some()
    }

    /// Integer coefficients `x` with `sum x_i b_i = v`.
    pub fn coefficients(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.m {
            return None;
        }
        let mut rest = v.to_vec();
        let mut x = Vec::with_capacity(self.rank());
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if rest[..c].iter().any(|e| !e.is_zero()) {
                return None;
            }
            let (q, r) = rest[c].div_rem(&row[c]);
            if !r.is_zero() {
                return None;
            }
            sub_multiple(&mut rest, &q, row);
            x.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(x)
    }

    /// `det(L)^2 = det(B^T B)`.
    pub fn det_squared(&self) -> BigInt {
        if self.is_full_rank() {
            let d = self.det_full();
            return &d * &d;
        }
        let gram: IntMatrix = self
            .rows
            .iter()
            .map(|a| self.rows.iter().map(|b| dot(a, b)).collect())
            .collect();
        bareiss_det(gram)
    }

    fn det_full(&self) -> BigInt {
        self.rows
            .iter()
            .zip(&self.pivots)
            .map(|(r, &c)| r[c].clone())
            .product()
    }

    /// Determinant of a full-rank lattice (product of HNF pivots).
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_full_rank() {
            return Err(Error::RankDeficient(format!(
                "rank {} in dimension {}; use det_squared",
                self.rank(),
                self.m
            )));
        }
        Ok(self.det_full())
    }

    /// `L1 ∩ L2`. Full-rank inputs go through scaled integral duals; other
    /// inputs through the integer kernel of `[B1 | -B2]`.
    pub fn intersect(&self, other: &IntegerLattice) -> Result<IntegerLattice> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.m, other.m
            )));
        }
        if self.is_full_rank() && other.is_full_rank() {
            self.intersect_full_rank(other)
        } else {
            self.intersect_by_kernel(other)
        }
    }

    /// Intersection via `(L1 ∩ L2)* = L1* + L2*`, kept integral by scaling
    /// with `s = det(L1) det(L2)`.
    pub fn intersect_full_rank(&self, other: &IntegerLattice) -> Result<IntegerLattice> {
        if !(self.is_full_rank() && other.is_full_rank()) {
            return Err(Error::RankDeficient("dual intersection needs full-rank inputs".into()));
        }
        let m = self.m;
        let s = self.det_full() * other.det_full();
        let mut gens = scaled_dual_generators(&self.rows, &s);
        gens.extend(scaled_dual_generators(&other.rows, &s));
        let sum = IntegerLattice::from_generators(m, gens)?;
        let result = scaled_dual_generators(&sum.rows, &s);
        IntegerLattice::from_generators(m, result)
    }

    pub fn intersect_by_kernel(&self, other: &IntegerLattice) -> Result<IntegerLattice> {
        let r1 = self.rank();
        let mut stacked = self.rows.clone();
        stacked.extend(other.rows.iter().map(|r| r.iter().map(|x| -x).collect()));
        let kernel = integer_kernel(&stacked, self.m);
        let gens = kernel
            .iter()
            .map(|k| {
                let mut v = vec![BigInt::zero(); self.m];
                for (x, row) in k[..r1].iter().zip(&self.rows) {
                    if !x.is_zero() {
                        for (vi, ri) in v.iter_mut().zip(row) {
                            *vi += x * ri;
                        }
                    }
                }
                v
            })
            .collect();
        IntegerLattice::from_generators(self.m, gens)
    }

    /// Kronecker product of the column bases.
    pub fn tensor(&self, other: &IntegerLattice) -> IntegerLattice {
        let m = self.m * other.m;
        let gens = self
            .rows
            .iter()
            .flat_map(|a| {
                other
                    .rows
                    .iter()
                    .map(move |b| a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect())
            })
            .collect();
        IntegerLattice::from_generators(m, gens).expect("consistent dimensions")
    }

    /// `{v in L : <w, v> = 0 mod rho}`.
    pub fn modular_sublattice(&self, w: &[BigInt], rho: &BigInt) -> Result<IntegerLattice> {
        if w.len() != self.m {
            return Err(Error::DimensionMismatch("constraint vector length".into()));
        }
        // coefficients x with sum x_i <w, b_i> = 0 mod rho: kernel of the
        // column (<w, b_i>) stacked on rho
        let mut rows: IntMatrix = self.rows.iter().map(|b| vec![dot(w, b).mod_floor(rho)]).collect();
        rows.push(vec![rho.clone()]);
        let kernel = integer_kernel(&rows, 1);
        let r = self.rank();
        let gens = kernel
            .iter()
            .map(|k| {
                let mut v = vec![BigInt::zero(); self.m];
                for (x, row) in k[..r].iter().zip(&self.rows) {
                    for (vi, ri) in v.iter_mut().zip(row) {
                        *vi += x * ri;
                    }
                }
                v
            })
            .collect();
        IntegerLattice::from_generators(self.m, gens)
    }

    /// Vectors of `L` supported inside `support`.
    pub fn restrict_to_support(&self, support: &[usize]) -> IntegerLattice {
        let mut inside = vec![false; self.m];
        for &i in support {
            inside[i] = true;
        }
        let outside: Vec<usize> = (0..self.m).filter(|&i| !inside[i]).collect();
        let projected: IntMatrix = self
            .rows
            .iter()
            .map(|r| outside.iter().map(|&i| r[i].clone()).collect())
            .collect();
        let kernel = integer_kernel(&projected, outside.len());
        let gens = kernel
            .iter()
            .map(|k| {
                let mut v = vec![BigInt::zero(); self.m];
                for (x, row) in k.iter().zip(&self.rows) {
                    for (vi, ri) in v.iter_mut().zip(row) {
                        *vi += x * ri;
                    }
                }
                v
            })
            .collect();
        IntegerLattice::from_generators(self.m, gens).expect("consistent dimensions")
    }

    /// Entries as `i64`, if they all fit.
    pub(crate) fn small_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        i64::try_from(x).map_err(|_| Error::Overflow(format!("basis entry {x} exceeds 64 bits")))
                    })
                    .collect()
            })
            .collect()
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fraction-free determinant.
pub(crate) fn bareiss_det(mut a: IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Rows of `s (G^{-1})^T` for a square nonsingular `G` given by rows. For a
/// lattice with basis rows `G` these generate `s L*`.
fn scaled_dual_generators(g: &IntMatrix, s: &BigInt) -> IntMatrix {
    let inv = rational_inverse(g).expect("nonsingular");
    let n = g.len();
    (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let v = &inv[i][j] * BigRational::from_integer(s.clone());
                    assert!(v.is_integer(), "scaled dual is integral");
                    v.to_integer()
                })
                .collect()
        })
        .collect()
}

pub(crate) fn rational_inverse(g: &IntMatrix) -> Option<Vec<Vec<BigRational>>> {
    let n = g.len();
    let mut a: Vec<Vec<BigRational>> = g
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v: Vec<BigRational> = r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            v.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            v
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        let pivot = a[c].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[serde_with::serde_as]
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct MinkowskiCertificate {
    pub rank: usize,
    #[serde_as(as = "serde_with::DisplayFromStr")]
    pub det_squared: BigInt,
    /// `lambda_1^(2)(L)^2`.
    #[serde_as(as = "serde_with::DisplayFromStr")]
    pub lambda1_squared: num_bigint::BigUint,
    /// `det(L) >= (lambda_1 / sqrt(r))^r`, checked as
    /// `det^2 r^r >= (lambda_1^2)^r`.
    pub holds: bool,
}

/// Minkowski's first theorem for a rank-`r` lattice in the Euclidean norm.
pub fn minkowski_check(l: &IntegerLattice, budget: crate::Budget) -> Result<MinkowskiCertificate> {
    let r = l.rank();
    let det_squared = l.det_squared();
    let lambda1_squared = if r == 0 {
        num_bigint::BigUint::zero()
    } else {
        lambda1(l, NormSpec::l2(), budget)?.value_pow.expect("rank > 0")
    };
    let lhs = &det_squared * BigInt::from(r).pow(r as u32);
    let rhs = BigInt::from(lambda1_squared.clone()).pow(r as u32);
    Ok(MinkowskiCertificate {
        rank: r,
        holds: lhs >= rhs,
        det_squared,
        lambda1_squared,
    })
}

/// Construction A: `{x in Z^m : x mod rho in C}` for a code over the prime
/// field `F_rho`.
pub fn construction_a(code: &LinearCode) -> Result<IntegerLattice> {
    let f = code.field();
    if !f.is_prime_field() {
        return Err(Error::InvalidParameter(format!(
            "Construction A needs a prime field, got F_{}",
            f.order()
        )));
    }
    let rho = BigInt::from(f.order());
    let m = code.len();
    let mut gens: IntMatrix = code
        .generator_columns()
        .into_iter()
        .map(|c| c.into_iter().map(BigInt::from).collect())
        .collect();
    for i in 0..m {
        let mut v = vec![BigInt::zero(); m];
        v[i] = rho.clone();
        gens.push(v);
    }
    IntegerLattice::from_generators(m, gens)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::field::FiniteField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn random_full_rank(rng: &mut impl Rng, n: usize, bound: i64) -> IntegerLattice {
        loop {
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-bound..=bound)).collect())
                .collect();
            let l = IntegerLattice::from_generators(n, to_big(&rows)).unwrap();
            if l.is_full_rank() {
                return l;
            }
        }
    }

    /// Membership by rational solve, independent of the HNF.
    fn member_by_solve(gens: &[Vec<i64>], v: &[i64]) -> bool {
        let n = gens.len();
        let m = v.len();
        // solve G^T x = v over Q using the normal equations of full-rank G
        let g = to_big(gens);
        let gram: IntMatrix = g.iter().map(|a| g.iter().map(|b| dot(a, b)).collect()).collect();
        let inv = rational_inverse(&gram).unwrap();
        let vb = big(v);
        let rhs: Vec<BigRational> = g.iter().map(|a| BigRational::from_integer(dot(a, &vb))).collect();
        let x: Vec<BigRational> = (0..n)
            .map(|i| inv[i].iter().zip(&rhs).map(|(a, b)| a * b).sum())
            .collect();
        if !x.iter().all(|xi| xi.is_integer()) {
            return false;
        }
        (0..m).all(|c| {
            let s: BigRational = (0..n)
                .map(|i| &x[i] * BigRational::from_integer(g[i][c].clone()))
                .sum();
            s == BigRational::from_integer(vb[c].clone())
        })
    }

    fn box_points(dim: usize, r: i64) -> Vec<Vec<i64>> {
        let side = (2 * r + 1) as usize;
        (0..side.pow(dim as u32))
            .map(|mut i| {
                (0..dim)
                    .map(|_| {
                        let d = (i % side) as i64 - r;
                        i /= side;
                        d
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(IntegerLattice::identity(3).basis_rows(), &to_big(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]));
        // columns (2,0) and (1,1)
        let l = IntegerLattice::from_columns(&to_big(&[vec![2, 1], vec![0, 1]])).unwrap();
        let gens = [vec![2, 0], vec![1, 1]];
        for v in box_points(2, 2) {
            assert_eq!(l.contains(&big(&v)), member_by_solve(&gens, &v), "{v:?}");
        }
        assert_eq!(l.determinant().unwrap(), BigInt::from(2));
    }

    #[test]
    fn hnf_is_unimodular_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let n = rng.gen_range(1..5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n + 1).map(|_| rng.gen_range(-5..=5)).collect())
                .collect();
            let base = IntegerLattice::from_generators(n + 1, to_big(&rows)).unwrap();
            // random elementary unimodular transforms on the generators
            let mut mixed = rows.clone();
            for _ in 0..10 {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                if i != j {
                    let k = rng.gen_range(-3..=3);
                    let rj = mixed[j].clone();
                    for (a, b) in mixed[i].iter_mut().zip(&rj) {
                        *a += k * b;
                    }
                } else {
                    mixed[i].iter_mut().for_each(|a| *a = -*a);
                }
                mixed.swap(rng.gen_range(0..n), rng.gen_range(0..n));
            }
            let again = IntegerLattice::from_generators(n + 1, to_big(&mixed)).unwrap();
            assert_eq!(base, again);
        }
    }

    #[test]
    fn dependent_generators_are_absorbed() {
        let l = IntegerLattice::from_generators(2, to_big(&[vec![2, 4], vec![3, 6], vec![0, 0]])).unwrap();
        assert_eq!(l.rank(), 1);
        assert_eq!(l.basis_rows(), &to_big(&[vec![1, 2]]));
    }

    #[test]
    fn construction_a_examples() {
        let f2 = FiniteField::new(2, 1).unwrap();
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(construction_a(&LinearCode::full_space(&f2, 3)).unwrap(), IntegerLattice::identity(3));
        let z = construction_a(&LinearCode::zero(&f3, 2)).unwrap();
        assert_eq!(z, IntegerLattice::scaled_identity(2, 3));
        assert_eq!(z.determinant().unwrap(), BigInt::from(9));
        let rep = construction_a(&LinearCode::repetition(&f2, 3)).unwrap();
        assert_eq!(rep.determinant().unwrap(), BigInt::from(4));
        assert!(!rep.contains(&big(&[1, 1, 0])));
        assert!(rep.contains(&big(&[2, 0, 0])));
        assert!(rep.contains(&big(&[1, 1, 1])));
        let f4 = FiniteField::new(2, 2).unwrap();
        assert!(construction_a(&LinearCode::full_space(&f4, 2)).is_err());
    }

    #[test]
    fn construction_a_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for rho in [2u64, 3, 5, 7] {
            let f = FiniteField::new(rho, 1).unwrap();
            for _ in 0..5 {
                let m = rng.gen_range(2..7);
                let n = rng.gen_range(1..m);
                let c = crate::code::tests::random_code(&f, m, n, &mut rng);
                let l = construction_a(&c).unwrap();
                assert_eq!(l.determinant().unwrap(), BigInt::from(rho).pow((m - n) as u32));
            }
        }
    }

    #[test]
    fn intersection_examples() {
        let l2 = IntegerLattice::scaled_identity(2, 2);
        let l3 = IntegerLattice::scaled_identity(2, 3);
        assert_eq!(l2.intersect(&l3).unwrap(), IntegerLattice::scaled_identity(2, 6));
        assert_eq!(l2.intersect(&l2).unwrap(), l2);
        assert!(l2.intersect(&IntegerLattice::identity(3)).is_err());
    }

    #[test]
    fn intersection_membership_on_a_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pts = box_points(3, 6);
        for _ in 0..10 {
            let a = random_full_rank(&mut rng, 3, 3);
            let b = random_full_rank(&mut rng, 3, 3);
            let dual = a.intersect_full_rank(&b).unwrap();
            let kern = a.intersect_by_kernel(&b).unwrap();
            assert_eq!(dual, kern);
            for v in &pts {
                let v = big(v);
                assert_eq!(dual.contains(&v), a.contains(&v) && b.contains(&v));
            }
        }
    }

    #[test]
    fn rank_deficient_intersection() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let pts = box_points(4, 4);
        for _ in 0..10 {
            let rows: Vec<Vec<i64>> = (0..2).map(|_| (0..4).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            let a = IntegerLattice::from_generators(4, to_big(&rows)).unwrap();
            let b = random_full_rank(&mut rng, 4, 2);
            let i = a.intersect(&b).unwrap();
            for v in &pts {
                let v = big(v);
                assert_eq!(i.contains(&v), a.contains(&v) && b.contains(&v));
            }
        }
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(IntegerLattice::identity(2).tensor(&IntegerLattice::identity(3)), IntegerLattice::identity(6));
        assert_eq!(
            IntegerLattice::scaled_identity(1, 2).tensor(&IntegerLattice::scaled_identity(1, 3)),
            IntegerLattice::scaled_identity(1, 6)
        );
    }

    #[test]
    fn modular_sublattice_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let pts = box_points(3, 5);
        for _ in 0..10 {
            let l = random_full_rank(&mut rng, 3, 3);
            let rho = BigInt::from(5);
            let w = big(&[rng.gen_range(0..5), rng.gen_range(0..5), rng.gen_range(0..5)]);
            let s = l.modular_sublattice(&w, &rho).unwrap();
            for v in &pts {
                let v = big(v);
                let want = l.contains(&v) && dot(&w, &v).mod_floor(&rho).is_zero();
                assert_eq!(s.contains(&v), want);
            }
        }
    }

    #[test]
    fn support_restriction() {
        let f2 = FiniteField::new(2, 1).unwrap();
        let rep = construction_a(&LinearCode::repetition(&f2, 3)).unwrap();
        let s = rep.restrict_to_support(&[0]);
        assert_eq!(s, IntegerLattice::from_generators(3, to_big(&[vec![2, 0, 0]])).unwrap());
        let s01 = rep.restrict_to_support(&[0, 1]);
        assert_eq!(s01.rank(), 2);
        assert!(s01.basis_rows().iter().all(|r| r[2].is_zero()));
    }

    #[test]
    fn minkowski_examples() {
        let z = minkowski_check(&IntegerLattice::identity(4), crate::Budget(1 << 20)).unwrap();
        assert!(z.holds);
        let two = minkowski_check(&IntegerLattice::scaled_identity(2, 2), crate::Budget(1 << 20)).unwrap();
        assert_eq!((two.det_squared.clone(), two.lambda1_squared.clone()), (BigInt::from(16), 4u32.into()));
        assert!(two.holds);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let l = random_full_rank(&mut rng, 3, 4);
            assert!(minkowski_check(&l, crate::Budget(1 << 22)).unwrap().holds);
        }
    }

    #[test]
    fn gram_determinant() {
        let l = IntegerLattice::from_generators(3, to_big(&[vec![1, 1, 0]])).unwrap();
        assert_eq!(l.det_squared(), BigInt::from(2));
        assert_eq!(IntegerLattice::scaled_identity(3, 2).det_squared(), BigInt::from(64));
        assert_eq!(bareiss_det(to_big(&[vec![0, 1], vec![1, 0]])), BigInt::from(-1));
    }
}
