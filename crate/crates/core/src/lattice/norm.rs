//! Exact `l_p` norms on integer vectors.
//!
//! For integral `p` the `p`-th power of a norm is an integer and every
//! comparison is done on those powers. For rational `p` a comparison between
//! products of rational powers of integers is decided by fixed-point interval
//! arithmetic with growing precision; an overlap that survives the precision
//! cap is reported as [`Error::Uncertified`] rather than guessed.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `l_p` norm with rational `p >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NormSpec {
    num: u32,
    den: u32,
}

impl NormSpec {
    pub fn new(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num < den {
            return Err(Error::InvalidParameter(format!("p = {num}/{den} must be at least 1")));
        }
        let g = num.gcd(&den);
        Ok(NormSpec {
            num: num / g,
            den: den / g,
        })
    }

    pub fn integral(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn l1() -> Self {
        NormSpec { num: 1, den: 1 }
    }

    pub fn l2() -> Self {
        NormSpec { num: 2, den: 1 }
    }

    pub fn numer(self) -> u32 {
        self.num
    }

    pub fn denom(self) -> u32 {
        self.den
    }

    pub fn as_integer(self) -> Option<u32> {
        (self.den == 1).then_some(self.num)
    }

    pub fn require_integral(self) -> Result<u32> {
        self.as_integer()
            .ok_or_else(|| Error::InvalidParameter(format!("operation needs an integral p, got {self}")))
    }

    pub fn as_rational(self) -> BigRational {
        BigRational::new(self.num.into(), self.den.into())
    }

    /// `||v||_p^p` for integral `p`.
    pub fn pow_norm(self, v: &[BigInt]) -> Result<BigUint> {
        let p = self.require_integral()?;
        Ok(v.iter().map(|x| x.magnitude().pow(p)).sum())
    }

    pub fn pow_norm_i64(self, v: &[i64]) -> Result<u128> {
        let p = self.require_integral()?;
        v.iter().try_fold(0u128, |acc, &x| {
            (x.unsigned_abs() as u128)
                .checked_pow(p)
                .and_then(|t| acc.checked_add(t))
                .ok_or_else(|| Error::Overflow("norm power exceeds 128 bits".into()))
        })
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse p from {s:?}"));
        match s.split_once('/') {
            Some((a, b)) => NormSpec::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => NormSpec::new(s.trim().parse().map_err(|_| bad())?, 1),
        }
    }
}

impl Serialize for NormSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for NormSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `floor(n^(1/k))`.
pub fn iroot_u128(n: u128, k: u32) -> u128 {
    if k == 1 || n < 2 {
        return n;
    }
    let mut lo = 0u128;
    let mut hi = 1u128 << (128 / k + 1).min(127);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match mid.checked_pow(k) {
            Some(v) if v <= n => lo = mid,
            _ => hi = mid - 1,
        }
    }
    lo
}

/// A product of rational powers of nonnegative integers.
#[derive(Clone, Debug)]
pub struct Monomial(pub Vec<(BigUint, BigRational)>);

/// A sum of monomials.
#[derive(Clone, Debug)]
pub struct PowerSum(pub Vec<Monomial>);

/// `x^(a/b) * 2^k`, bracketed by integers.
fn power_bounds(x: &BigUint, e: &BigRational, k: u32) -> (BigUint, BigUint) {
    if x.is_zero() {
        return if e.is_zero() {
            (BigUint::one() << k, BigUint::one() << k)
        } else {
            (BigUint::zero(), BigUint::zero())
        };
    }
    let a = e.numer().magnitude().to_u32().expect("small exponent");
    let b = e.denom().magnitude().to_u32().expect("small exponent");
    let scale = BigUint::one() << (k as usize * b as usize);
    let (lo_arg, hi_arg) = if e.is_negative() {
        let xa = x.pow(a);
        let (q, r) = scale.div_rem(&xa);
        let hi = if r.is_zero() { q.clone() } else { &q + 1u32 };
        (q, hi)
    } else {
        let v = x.pow(a) * scale;
        (v.clone(), v)
    };
    let lo = lo_arg.nth_root(b);
    let hi_root = hi_arg.nth_root(b);
    let hi = if hi_root.pow(b) == hi_arg { hi_root } else { hi_root + 1u32 };
    (lo, hi)
}

impl Monomial {
    /// Bounds on `value * 2^(k * len)`.
    fn bounds(&self, k: u32) -> (BigUint, BigUint, usize) {
        let mut lo = BigUint::one();
        let mut hi = BigUint::one();
        for (x, e) in &self.0 {
            let (l, h) = power_bounds(x, e, k);
            lo *= l;
            hi *= h;
        }
        (lo, hi, self.0.len())
    }
}

impl PowerSum {
    fn bounds(&self, k: u32, width: usize) -> (BigUint, BigUint) {
        let mut lo = BigUint::zero();
        let mut hi = BigUint::zero();
        for m in &self.0 {
            let (l, h, len) = m.bounds(k);
            let pad = k as usize * (width - len);
            lo += l << pad;
            hi += h << pad;
        }
        (lo, hi)
    }

    fn width(&self) -> usize {
        self.0.iter().map(|m| m.0.len()).max().unwrap_or(0)
    }
}

/// Certified comparison of two power sums. Equal values cannot be separated
/// by intervals; callers detect exact equality cases before calling.
pub fn compare_power_sums(a: &PowerSum, b: &PowerSum) -> Result<Ordering> {
    let width = a.width().max(b.width());
    let mut k = 16;
    while k <= 4096 {
        let (alo, ahi) = a.bounds(k, width);
        let (blo, bhi) = b.bounds(k, width);
        if ahi < blo {
            return Ok(Ordering::Less);
        }
        if bhi < alo {
            return Ok(Ordering::Greater);
        }
        if alo == ahi && blo == bhi && alo == blo {
            return Ok(Ordering::Equal);
        }
        k *= 2;
    }
    Err(Error::Uncertified("interval comparison did not separate".into()))
}

fn support_magnitudes(v: &[BigInt]) -> Vec<BigUint> {
    v.iter().filter(|x| !x.is_zero()).map(|x| x.magnitude().clone()).collect()
}

fn is_uniform(mags: &[BigUint]) -> bool {
    mags.windows(2).all(|w| w[0] == w[1])
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Checks `||v||_p >= s^(1/max(2,p) - 1/2) ||v||_2` with `s = |supp(v)|`.
/// Both sides are raised to the `p`-th power:
/// `sum |v_i|^p >= s^(p/max(2,p) - p/2) (sum v_i^2)^(p/2)`.
pub fn check_lp_lower_bound(v: &[BigInt], p: NormSpec) -> Result<bool> {
    let mags = support_magnitudes(v);
    let s = mags.len();
    if s == 0 {
        return Ok(true);
    }
    let pr = p.as_rational();
    let maxp = if pr > rat(2, 1) { pr.clone() } else { rat(2, 1) };
    let s_exp = &pr / &maxp - &pr / rat(2, 1);
    if is_uniform(&mags) {
        // s a^p  vs  s^(s_exp) s^(p/2) a^p: compare exponents of s
        let rhs_exp = &s_exp + &pr / rat(2, 1);
        return Ok(s == 1 || rat(1, 1) >= rhs_exp);
    }
    let lhs = PowerSum(mags.iter().map(|x| Monomial(vec![(x.clone(), pr.clone())])).collect());
    let q: BigUint = mags.iter().map(|x| x * x).sum();
    let rhs = PowerSum(vec![Monomial(vec![
        (BigUint::from(s), s_exp),
        (q, &pr / rat(2, 1)),
    ])]);
    Ok(compare_power_sums(&lhs, &rhs)? != Ordering::Less)
}

/// Checks `||v||_2 >= s^(-1/2) ||v||_p`, as
/// `s^(p/2) (sum v_i^2)^(p/2) >= sum |v_i|^p`.
pub fn check_l2_lower_bound(v: &[BigInt], p: NormSpec) -> Result<bool> {
    let mags = support_magnitudes(v);
    let s = mags.len();
    if s == 0 {
        return Ok(true);
    }
    let pr = p.as_rational();
    let half_p = &pr / rat(2, 1);
    if is_uniform(&mags) {
        // s^p a^p  vs  s a^p
        return Ok(s == 1 || pr >= rat(1, 1));
    }
    let q: BigUint = mags.iter().map(|x| x * x).sum();
    let lhs = PowerSum(vec![Monomial(vec![(BigUint::from(s), half_p.clone()), (q, half_p)])]);
    let rhs = PowerSum(mags.iter().map(|x| Monomial(vec![(x.clone(), pr.clone())])).collect());
    Ok(compare_power_sums(&lhs, &rhs)? != Ordering::Less)
}
