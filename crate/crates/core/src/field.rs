//! Arithmetic in prime-power fields `F_q`, `q = p^e`.
//!
//! Elements are canonical integers in `[0, q)`: the base-`p` digits of the
//! integer, least significant first, are the coefficients of the element in
//! the polynomial basis `1, x, ..., x^(e-1)` modulo the field modulus. This is
//! the encoding used in every JSON file.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::primes::{is_prime, mul_mod, pow_mod, prime_factors};

/// Fields up to this order get exp/log tables.
const TABLE_LIMIT: u64 = 1 << 20;

pub type Elem = u64;

/// Dense polynomials over `F_p`, little-endian coefficient vectors.
pub(crate) mod poly {
    use crate::primes::mul_mod;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(&mut out);
        out
    }

    fn inv(a: u64, p: u64) -> u64 {
        super::pow_mod(a, p - 2, p)
    }

    /// Remainder of `a` modulo a nonzero `b`.
    pub fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = inv(b[db], p);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let coef = mul_mod(*r.last().unwrap(), lead_inv, p);
            for (j, &bj) in b.iter().enumerate() {
                r[shift + j] = (r[shift + j] + p - mul_mod(coef, bj, p)) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            exp >>= 1;
        }
        acc
    }

    /// Rabin-style test for a monic `f` of degree `e`: no factor of degree
    /// `<= e/2`, checked through `gcd(f, x^(p^i) - x)`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let e = f.len() - 1;
        if e <= 1 {
            return e == 1;
        }
        if f[0] == 0 {
            return false;
        }
        let x = vec![0u64, 1];
        let mut xp = x.clone();
        for _ in 1..=e / 2 {
            xp = powmod(&xp, p, f, p);
            let g = gcd(f, &sub(&xp, &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

struct Tables {
    exp: Vec<Elem>,
    log: Vec<u32>,
}

struct Inner {
    p: u64,
    e: u32,
    q: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// The finite field `F_q`. Cheap to clone; all clones share one immutable
/// description.
#[derive(Clone)]
pub struct FiniteField(Arc<Inner>);

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.e, self.0.modulus)
    }
}

impl FiniteField {
    /// Builds `F_{p^e}` with the smallest monic irreducible modulus of degree
    /// `e`, ordering candidates by their low coefficients read as a
    /// little-endian base-`p` integer.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(e)
            .ok_or_else(|| Error::InvalidParameter(format!("{p}^{e} exceeds 2^64")))?;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|c| {
                    let mut f = digits(c, p, e as usize);
                    f.push(1);
                    f
                })
                .find(|f| poly::is_irreducible(f, p))
                .expect("irreducible polynomials exist in every degree")
        };
        let mut field = FiniteField(Arc::new(Inner {
            p,
            e,
            q,
            modulus,
            tables: None,
        }));
        if e > 1 && q <= TABLE_LIMIT {
            let g = field.primitive_element();
            let mut exp = Vec::with_capacity(q as usize - 1);
            let mut log = vec![0u32; q as usize];
            let mut cur = 1;
            for i in 0..q - 1 {
                exp.push(cur);
                log[cur as usize] = i as u32;
                cur = field.mul(cur, g);
            }
            let inner = Arc::get_mut(&mut field.0).expect("unique during construction");
            inner.tables = Some(Tables { exp, log });
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    /// Monic modulus, little-endian coefficients, length `e + 1`.
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.0.q
    }

    pub fn element(&self, value: Elem) -> Result<FieldElement> {
        if value >= self.0.q {
            return Err(Error::InvalidParameter(format!(
                "{value} is not a canonical element of F_{}",
                self.0.q
            )));
        }
        Ok(FieldElement {
            field: self.clone(),
            value,
        })
    }

    pub fn to_coeffs(&self, a: Elem) -> Vec<u64> {
        digits(a, self.0.p, self.0.e as usize)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.0.p + c % self.0.p)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        if self.0.e == 1 {
            let s = a as u128 + b as u128;
            return (s % p as u128) as u64;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for i in 0..self.0.e {
            let d = (a % p + b % p) % p;
            out += d * place;
            a /= p;
            b /= p;
            if i + 1 < self.0.e {
                place *= p;
            }
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.e == 1 {
            return if a == 0 { 0 } else { p - a };
        }
        let mut a = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for i in 0..self.0.e {
            let d = a % p;
            out += ((p - d) % p) * place;
            a /= p;
            if i + 1 < self.0.e {
                place *= p;
            }
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.0.e == 1 {
            return mul_mod(a, b, self.0.p);
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q as usize - 1;
            let i = t.log[a as usize] as usize + t.log[b as usize] as usize;
            return t.exp[if i >= n { i - n } else { i }];
        }
        let p = self.0.p;
        let prod = poly::mulmod(&self.to_coeffs(a), &self.to_coeffs(b), &self.0.modulus, p);
        self.from_coeffs(&prod)
    }

    pub fn pow(&self, a: Elem, mut n: u128) -> Elem {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.0.tables {
            let ord = self.0.q as u128 - 1;
            let i = (t.log[a as usize] as u128 * (n % ord)) % ord;
            return t.exp[i as usize];
        }
        let mut acc = 1;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            return Err(Error::InverseOfZero);
        }
        if self.0.e == 1 {
            return Ok(pow_mod(a, self.0.p - 2, self.0.p));
        }
        if let Some(t) = &self.0.tables {
            let n = self.0.q as usize - 1;
            let l = t.log[a as usize] as usize;
            return Ok(t.exp[(n - l) % n]);
        }
        Ok(self.pow(a, self.0.q as u128 - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> Result<u64> {
        if a == 0 {
            return Err(Error::InverseOfZero);
        }
        let mut ord = self.0.q - 1;
        for f in prime_factors(self.0.q - 1) {
            while ord.is_multiple_of(f) && self.pow(a, (ord / f) as u128) == 1 {
                ord /= f;
            }
        }
        Ok(ord)
    }

    /// Smallest element (canonical integer order) of order `q - 1`.
    pub fn primitive_element(&self) -> Elem {
        let n = self.0.q - 1;
        let factors = prime_factors(n);
        (1..self.0.q)
            .find(|&a| factors.iter().all(|&f| self.pow(a, (n / f) as u128) != 1))
            .expect("multiplicative group is cyclic")
    }

    /// Embedding of `sub` into `self`, sending the generator `x` of `sub` to
    /// the smallest root of `sub`'s modulus in `self`.
    pub fn embedding_of(&self, sub: &FiniteField) -> Result<SubfieldEmbedding> {
        if sub.0.p != self.0.p || !self.0.e.is_multiple_of(sub.0.e) {
            return Err(Error::FieldMismatch(format!(
                "F_{} is not a subfield of F_{}",
                sub.0.q, self.0.q
            )));
        }
        let sub_mod = sub.modulus().to_vec();
        let root = self
            .elements()
            .find(|&b| {
                let mut acc = 0;
                for &c in sub_mod.iter().rev() {
                    acc = self.add(self.mul(acc, b), c);
                }
                acc == 0
            })
            .expect("subfield modulus splits in the extension");
        let powers: Vec<Elem> = (0..sub.0.e).map(|i| self.pow(root, i as u128)).collect();
        let images = (sub.0.q <= TABLE_LIMIT).then(|| {
            sub.elements()
                .map(|a| embed_with(self, sub, &powers, a))
                .collect()
        });
        Ok(SubfieldEmbedding {
            big: self.clone(),
            small: sub.clone(),
            powers,
            images,
        })
    }
}

fn embed_with(big: &FiniteField, small: &FiniteField, powers: &[Elem], a: Elem) -> Elem {
    small
        .to_coeffs(a)
        .iter()
        .zip(powers)
        .fold(0, |acc, (&c, &pw)| big.add(acc, big.mul(c, pw)))
}

fn digits(mut v: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(v % p);
        v /= p;
    }
    out
}

/// A field homomorphism `F_{p^a} -> F_{p^b}` for `a | b`.
#[derive(Clone)]
pub struct SubfieldEmbedding {
    big: FiniteField,
    small: FiniteField,
    powers: Vec<Elem>,
    images: Option<Vec<Elem>>,
}

impl SubfieldEmbedding {
    pub fn apply(&self, a: Elem) -> Elem {
        match &self.images {
            Some(t) => t[a as usize],
            None => embed_with(&self.big, &self.small, &self.powers, a),
        }
    }

    pub fn small(&self) -> &FiniteField {
        &self.small
    }

    pub fn big(&self) -> &FiniteField {
        &self.big
    }
}

/// An element bundled with its field, for operator-style arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FiniteField,
    value: Elem,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈F_{}", self.value, self.field.order())
    }
}

impl FieldElement {
    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            field: self.field.clone(),
            value: self.field.inv(self.value)?,
        })
    }

    pub fn pow(&self, n: u128) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value: self.field.pow(self.value, n),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(&self, other: &FieldElement) {
        assert!(self.field == other.field, "operands from different fields");
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.check(rhs);
                FieldElement {
                    field: self.field.clone(),
                    value: self.field.$m(self.value, rhs.value),
                }
            }
        }
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                (&self).$m(&rhs)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for &FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero; use [`FieldElement::inv`] to handle it.
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            value: self.field.neg(self.value),
        }
    }
}
