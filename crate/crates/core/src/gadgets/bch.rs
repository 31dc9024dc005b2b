//! Narrow-sense primitive BCH codes over `F_q`.
//!
//! The code of length `m' = q^r - 1` is the set of `f in F_q^{m'}` with
//! `sum_j f_j a^{ij} = 0` for `i = 1, ..., d - 1`, where `a` generates
//! `F_{q^r}^*`. Each constraint over `F_{q^r}` becomes `r` constraints over
//! `F_q` by expanding in the basis `1, a, ..., a^{r-1}`.

use serde::{Deserialize, Serialize};

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg::{self, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BchSpec {
    /// Characteristic of `F_q`.
    pub p: u64,
    /// `q = p^e`.
    pub e: u32,
    pub r: u32,
    /// Design distance.
    pub d: usize,
}

impl BchSpec {
    pub fn new(q: u64, r: u32, d: usize) -> Result<Self> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))?;
        let spec = BchSpec { p, e, r, d };
        spec.validate()?;
        Ok(spec)
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.e)
    }

    /// Block length `q^r - 1`.
    pub fn length(&self) -> Result<usize> {
        self.q()
            .checked_pow(self.r)
            .and_then(|v| usize::try_from(v - 1).ok())
            .ok_or_else(|| Error::Overflow(format!("{}^{} - 1", self.q(), self.r)))
    }

    fn validate(&self) -> Result<()> {
        if self.r == 0 {
            return Err(Error::InvalidParameter("r must be positive".into()));
        }
        let m = self.length()?;
        if self.d == 0 || self.d > m {
            return Err(Error::InvalidParameter(format!(
                "design distance {} outside 1..={m}",
                self.d
            )));
        }
        if u64::from(self.e) * u64::from(self.r) > 40 {
            return Err(Error::Overflow("extension field too large".into()));
        }
        Ok(())
    }

    /// `ceil((d - 1)(1 - 1/q)) * r`.
    pub fn codimension_bound(&self) -> usize {
        let q = self.q() as usize;
        ((self.d - 1) * (q - 1)).div_ceil(q) * self.r as usize
    }

    /// `d - 1 - floor((d - 1)/q)`.
    pub fn constraint_bound(&self) -> usize {
        let q = self.q() as usize;
        self.d - 1 - (self.d - 1) / q
    }

    /// Exponents `i in 1..d` that survive Frobenius closure: the least
    /// member of each orbit `i, iq, iq^2, ... (mod m')` that meets `1..d`.
    pub fn constraint_exponents(&self) -> Result<Vec<usize>> {
        let m = self.length()?;
        let q = self.q() as usize;
        let mut kept = Vec::new();
        for i in 1..self.d {
            let mut j = i * q % m;
            let mut least = i;
            while j != i % m {
                if j >= 1 && j < self.d {
                    least = least.min(j);
                }
                j = j * q % m;
            }
            if least == i {
                kept.push(i);
            }
        }
        Ok(kept)
    }
}

pub(crate) fn prime_power(q: u64) -> Option<(u64, u32)> {
    let fs = crate::primes::prime_factors(q);
    let &p = fs.first()?;
    if fs.len() != 1 {
        return None;
    }
    let mut e = 0;
    let mut v = q;
    while v.is_multiple_of(p) {
        v /= p;
        e += 1;
    }
    Some((p, e))
}

#[derive(Clone, Debug)]
pub struct BchCode {
    pub spec: BchSpec,
    pub code: LinearCode,
    pub exponents: Vec<usize>,
}

pub fn build_bch(spec: BchSpec) -> Result<BchCode> {
    spec.validate()?;
    let m = spec.length()?;
    let fq = FiniteField::new(spec.p, spec.e)?;
    let big = FiniteField::new(spec.p, spec.e * spec.r)?;
    let fp = FiniteField::new(spec.p, 1)?;
    let emb = big.embedding_of(&fq)?;
    let alpha = big.primitive_element();
    let (e, r) = (spec.e as usize, spec.r as usize);
    let dim = e * r;

    // F_p basis {x^a a^j} of the big field; coordinates of z in it come from
    // the inverse of the matrix whose columns are those basis vectors.
    let mut basis_cols: Vec<Vec<Elem>> = Vec::with_capacity(dim);
    for j in 0..r {
        for a in 0..e {
            let xa = fq.from_coeffs(&unit(a, e));
            let b = big.mul(emb.apply(xa), big.pow(alpha, j as u128));
            basis_cols.push(big.to_coeffs(b));
        }
    }
    let mat = linalg::transpose(&basis_cols, dim);
    let inverse_cols: Vec<Vec<Elem>> = (0..dim)
        .map(|i| linalg::solve(&fp, &mat, dim, &unit(i, dim)).expect("basis is invertible"))
        .collect();
    let expand = |z: Elem| -> Vec<Elem> {
        let zc = big.to_coeffs(z);
        let mut lam = vec![0; dim];
        for (i, &c) in zc.iter().enumerate() {
            if c != 0 {
                linalg::axpy(&fp, &mut lam, c, &inverse_cols[i]);
            }
        }
        (0..r).map(|j| fq.from_coeffs(&lam[j * e..(j + 1) * e])).collect()
    };

    let exponents = spec.constraint_exponents()?;
    let mut h: Matrix = Vec::with_capacity(exponents.len() * r);
    for &i in &exponents {
        let mut rows = vec![vec![0; m]; r];
        let step = big.pow(alpha, i as u128);
        let mut z = 1;
        for pos in 0..m {
            for (row, c) in rows.iter_mut().zip(expand(z)) {
                row[pos] = c;
            }
            z = big.mul(z, step);
        }
        h.extend(rows);
    }
    linalg::rref(&fq, &mut h, m);
    let code = LinearCode::from_parity_check(&fq, m, h)?;
    Ok(BchCode {
        spec,
        code,
        exponents,
    })
}

fn unit(i: usize, len: usize) -> Vec<Elem> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::min_distance;
    use crate::Budget;

    fn distance(c: &LinearCode) -> Option<usize> {
        min_distance(c, Budget(1 << 26)).unwrap().distance
    }

    #[test]
    fn binary_r3_d3_is_hamming() {
        let b = build_bch(BchSpec::new(2, 3, 3).unwrap()).unwrap();
        assert_eq!(b.code.len(), 7);
        assert_eq!(b.code.dimension(), 4);
        assert_eq!(b.exponents, vec![1]);
        assert_eq!(distance(&b.code), Some(3));
    }

    #[test]
    fn binary_r4_d5() {
        let s = BchSpec::new(2, 4, 5).unwrap();
        assert_eq!(s.codimension_bound(), 8);
        let b = build_bch(s).unwrap();
        assert_eq!(b.exponents, vec![1, 3]);
        assert!(b.code.codimension() <= 8);
        assert_eq!(b.code.dimension(), 7);
        assert_eq!(distance(&b.code), Some(5));
    }

    #[test]
    fn ternary_r2_d2() {
        let s = BchSpec::new(3, 2, 2).unwrap();
        assert_eq!(s.codimension_bound(), 2);
        let b = build_bch(s).unwrap();
        assert_eq!(b.code.codimension(), 2);
        assert!(distance(&b.code).unwrap() >= 2);
    }

    #[test]
    fn bch_codes_are_cyclic() {
        for (q, r, d) in [(2, 4, 5), (3, 2, 4), (4, 2, 3)] {
            let b = build_bch(BchSpec::new(q, r, d).unwrap()).unwrap();
            assert!(b.code.is_cyclic(), "q={q} r={r} d={d}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(BchSpec::new(6, 2, 3).is_err());
        assert!(BchSpec::new(2, 3, 0).is_err());
        assert!(BchSpec::new(2, 3, 8).is_err());
        assert!(BchSpec::new(2, 0, 1).is_err());
    }

    #[test]
    fn design_distance_one_is_full_space() {
        let b = build_bch(BchSpec::new(5, 2, 1).unwrap()).unwrap();
        assert_eq!(b.code.codimension(), 0);
    }

    #[test]
    fn grid_meets_bounds() {
        for q in [2u64, 3, 4, 5] {
            for r in 2..=4u32 {
                let m = q.pow(r) - 1;
                if m > 255 {
                    continue;
                }
                for d in 1..=7usize.min(m as usize) {
                    let s = BchSpec::new(q, r, d).unwrap();
                    let b = build_bch(s).unwrap();
                    assert!(b.exponents.len() <= s.constraint_bound());
                    assert!(b.code.codimension() <= s.codimension_bound());
                    if let Ok(rep) = min_distance(&b.code, Budget(1 << 22)) {
                        assert!(rep.distance.is_none_or(|x| x >= d), "q={q} r={r} d={d}");
                    }
                }
            }
        }
    }
}
