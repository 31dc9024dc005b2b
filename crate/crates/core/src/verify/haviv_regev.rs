//! Checks the trichotomy under which a lattice's minimum distance is
//! multiplicative under tensoring: every nonzero `w` has `||w||_0 > d^p`, or
//! is even with `||w||_0 > d^p / 2^p`, or is even with `||w||_p >
//! d^(c + 3p/2)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::ball::binomial;
use crate::budget::Budget;
use crate::code::LinearCode;
use crate::distance::syndrome_ball_list;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::gadgets::combinations;
use crate::lattice::enumerate::{is_odd, short_vectors};
use crate::lattice::{IntegerLattice, NormSpec};
use crate::reductions::lattice_digest;

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HavivRegevCertificate {
    pub p: NormSpec,
    /// Largest tensor exponent covered.
    pub c: u32,
    /// `d^p`.
    #[serde_as(as = "DisplayFromStr")]
    pub d_pow: BigRational,
    pub lattice_digest: String,
    /// `"mod2_code"` when the mod-2 image has no nonzero word of weight
    /// `<= d^p`; `"supports"` when every `floor(d^p)`-subset of coordinates
    /// was checked for an odd vector.
    pub odd_method: String,
    pub odd_light_codewords: usize,
    pub odd_supports_checked: u64,
    /// Even vectors of weight at most this were enumerated.
    pub even_weight_bound: usize,
    /// ... up to this bound on `||w||_p^p`.
    #[serde_as(as = "DisplayFromStr")]
    pub even_radius_pow: BigUint,
    pub even_supports_checked: u64,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HrOutcome {
    Granted(HavivRegevCertificate),
    Refused {
        reason: String,
        #[serde_as(as = "Vec<DisplayFromStr>")]
        witness: Vec<BigInt>,
    },
}

/// `floor(d_pow^(c + 3p/2))`, the bound on `||w||_p^p` in the third
/// condition.
pub fn even_radius_pow(d_pow: &BigRational, p: u32, c: u32) -> Result<BigUint> {
    // d_pow^(2c + 3p) is exact; halve the exponent by a square root when odd
    let e2 = 2 * c + 3 * p;
    let v = if e2.is_multiple_of(2) {
        d_pow.pow((e2 / 2) as i32).floor().to_integer()
    } else {
        d_pow.pow(e2 as i32).floor().to_integer().sqrt()
    };
    v.to_biguint().ok_or_else(|| Error::InvalidParameter("d^p must be positive".into()))
}

fn mod2_code(l: &IntegerLattice) -> Result<LinearCode> {
    let f = FiniteField::new(2, 1)?;
    let rows: Vec<Vec<u64>> = l
        .basis_rows()
        .iter()
        .map(|r| r.iter().map(|x| u64::from(x.bit(0))).collect())
        .collect();
    LinearCode::from_spanning_vectors(&f, l.ambient_dim(), &rows)
}

fn supports_of_size(m: usize, s: usize, budget: Budget) -> Result<Vec<Vec<usize>>> {
    budget.check("supports", binomial(m, s).to_u128().unwrap_or(u128::MAX))?;
    Ok(combinations(m, s))
}

/// Every even vector of `l` with `1 <= ||w||_0 <= max_weight` and
/// `||w||_p^p <= radius_pow`, each listed once (grouped by exact support).
/// Also returns the number of supports examined.
pub fn even_light_vectors(
    l: &IntegerLattice,
    max_weight: usize,
    radius_pow: u128,
    p: NormSpec,
    budget: Budget,
) -> Result<(Vec<Vec<BigInt>>, u64)> {
    let m = l.ambient_dim();
    let two = IntegerLattice::scaled_identity(m, 2);
    let mut out = Vec::new();
    let mut checked = 0u64;
    for size in 1..=max_weight.min(m) {
        for s in supports_of_size(m, size, budget)? {
            checked += 1;
            let ls = l.restrict_to_support(&s);
            if ls.rank() < size {
                // no vector has all of s in its support
                continue;
            }
            let even = ls.intersect(&two)?;
            for w in short_vectors(&even, None, p, radius_pow, budget)? {
                if s.iter().all(|&i| !w[i].is_zero()) {
                    out.push(w);
                }
            }
        }
    }
    Ok((out, checked))
}

/// Grants a certificate for exponent `c` iff no nonzero lattice vector
/// violates all three conditions, else returns a violating vector.
pub fn check_haviv_regev(
    l: &IntegerLattice,
    d_pow: &BigRational,
    p: NormSpec,
    c: u32,
    budget: Budget,
) -> Result<HrOutcome> {
    let pi = p.require_integral()?;
    if *d_pow <= BigRational::zero() {
        return Err(Error::InvalidParameter("d^p must be positive".into()));
    }
    if c == 0 {
        return Err(Error::InvalidParameter("tensor exponent must be positive".into()));
    }
    let m = l.ambient_dim();
    let odd_weight = d_pow.floor().to_integer().to_usize().unwrap_or(usize::MAX).min(m);

    // odd class: an odd w has ||w||_0 >= wt(w mod 2)
    let mut odd_method = "mod2_code";
    let mut odd_light = 0;
    let mut odd_supports = 0u64;
    if odd_weight > 0 {
        let light = syndrome_ball_list(&mod2_code(l)?, None, odd_weight, budget)?;
        odd_light = light.len();
        if !light.is_empty() {
            odd_method = "supports";
            for s in supports_of_size(m, odd_weight, budget)? {
                odd_supports += 1;
                let ls = l.restrict_to_support(&s);
                if let Some(w) = ls.basis_rows().iter().find(|r| is_odd(r)) {
                    return Ok(HrOutcome::Refused {
                        reason: format!("odd vector of weight <= {odd_weight}"),
                        witness: w.clone(),
                    });
                }
            }
        }
    }

    // even class: weight <= d^p / 2^p and short
    let even_weight = (d_pow / BigRational::from_integer(BigInt::from(1u64 << pi)))
        .floor()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX);
    let radius = even_radius_pow(d_pow, pi, c)?;
    let mut even_supports = 0;
    if even_weight > 0 {
        let r = radius
            .to_u128()
            .ok_or_else(|| Error::Overflow("even radius exceeds 128 bits".into()))?;
        let (found, checked) = even_light_vectors(l, even_weight, r, p, budget)?;
        even_supports = checked;
        if let Some(w) = found.into_iter().next() {
            return Ok(HrOutcome::Refused {
                reason: format!("even vector of weight <= {even_weight} and norm^p <= {radius}"),
                witness: w,
            });
        }
    }
    Ok(HrOutcome::Granted(HavivRegevCertificate {
        p,
        c,
        d_pow: d_pow.clone(),
        lattice_digest: lattice_digest(l),
        odd_method: odd_method.into(),
        odd_light_codewords: odd_light,
        odd_supports_checked: odd_supports,
        even_weight_bound: even_weight,
        even_radius_pow: radius,
        even_supports_checked: even_supports,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn radius_handles_half_exponents() {
        // p = 1, c = 1: d^(1 + 3/2) with d = 4 is 32
        assert_eq!(even_radius_pow(&q(4), 1, 1).unwrap(), BigUint::from(32u32));
        // p = 2, c = 2: (d^2)^(2 + 3) with d^2 = 2 is 32
        assert_eq!(even_radius_pow(&q(2), 2, 2).unwrap(), BigUint::from(32u32));
    }

    #[test]
    fn doubled_integers_at_unit_d() {
        let l = IntegerLattice::scaled_identity(3, 2);
        let out = check_haviv_regev(&l, &BigRational::one(), NormSpec::l2(), 2, Budget(1 << 20)).unwrap();
        assert!(matches!(out, HrOutcome::Granted(_)));
    }

    #[test]
    fn integers_at_d_two_are_refused_with_a_unit_vector() {
        let l = IntegerLattice::identity(3);
        let out = check_haviv_regev(&l, &q(4), NormSpec::l2(), 1, Budget(1 << 20)).unwrap();
        match out {
            HrOutcome::Refused { witness, .. } => {
                assert_eq!(crate::lattice::enumerate::hamming_weight(&witness), 1);
                assert!(is_odd(&witness));
            }
            HrOutcome::Granted(_) => panic!("Z^3 has odd unit vectors"),
        }
    }

    #[test]
    fn short_even_vectors_are_refused() {
        // 2Z^2 with d^p = 4, p = 1: weight <= 2 even vectors of l_1 norm
        // <= 4^(1 + 3/2) = 32 exist
        let l = IntegerLattice::scaled_identity(2, 2);
        let out = check_haviv_regev(&l, &q(4), NormSpec::l1(), 1, Budget(1 << 20)).unwrap();
        assert!(matches!(out, HrOutcome::Refused { .. }));
    }

    #[test]
    fn even_vectors_are_listed_once() {
        let l = IntegerLattice::scaled_identity(2, 2);
        let (vs, checked) = even_light_vectors(&l, 2, 8, NormSpec::l2(), Budget(1 << 20)).unwrap();
        assert_eq!(checked, 3);
        // +-2 e_i (4 vectors) and (+-2, +-2) (4 vectors)
        assert_eq!(vs.len(), 8);
    }
}
