//! Hamming balls `B_{q,m}(r)` and their deterministic enumeration.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::budget::Budget;
use crate::error::Result;
use crate::field::{Elem, FiniteField};

#[derive(Clone, Debug)]
pub struct HammingBall {
    field: FiniteField,
    m: usize,
    radius: usize,
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl HammingBall {
    pub fn new(field: &FiniteField, m: usize, radius: usize) -> Self {
        HammingBall {
            field: field.clone(),
            m,
            radius: radius.min(m),
        }
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of vectors of weight exactly `w`.
    pub fn shell_size(&self, w: usize) -> BigUint {
        binomial(self.m, w) * BigUint::from(self.field.order() - 1).pow(w as u32)
    }

    /// `sum_{i <= r} C(m, i) (q - 1)^i`.
    pub fn size(&self) -> BigUint {
        (0..=self.radius).map(|w| self.shell_size(w)).sum()
    }

    /// `(q m)^r`, an upper bound on the size for `r >= 1`.
    pub fn size_bound(&self) -> BigUint {
        BigUint::from(self.field.order() as u128 * self.m as u128).pow(self.radius as u32)
    }

    /// Every vector of weight at most `r`, once each: by weight, then by
    /// support in lexicographic order, then by the nonzero values in
    /// lexicographic order.
    pub fn iter(&self, budget: Budget) -> Result<BallIter> {
        let size = self.size();
        if size > BigUint::from(budget.limit()) {
            return Err(budget.exceeded("Hamming ball enumeration", size));
        }
        Ok(BallIter {
            q: self.field.order(),
            m: self.m,
            radius: self.radius,
            weight: 0,
            support: Vec::new(),
            values: Vec::new(),
            done: false,
        })
    }
}

pub struct BallIter {
    q: u64,
    m: usize,
    radius: usize,
    weight: usize,
    support: Vec<usize>,
    values: Vec<Elem>,
    done: bool,
}

impl BallIter {
    fn current(&self) -> Vec<Elem> {
        let mut v = vec![0; self.m];
        for (&i, &x) in self.support.iter().zip(&self.values) {
            v[i] = x;
        }
        v
    }

    fn advance(&mut self) {
        // values, last position fastest
        for j in (0..self.weight).rev() {
            if self.values[j] + 1 < self.q {
                self.values[j] += 1;
                return;
            }
            self.values[j] = 1;
        }
        // next support of the same size
        let w = self.weight;
        for j in (0..w).rev() {
            if self.support[j] < self.m - w + j {
                self.support[j] += 1;
                for k in j + 1..w {
                    self.support[k] = self.support[k - 1] + 1;
                }
                return;
            }
        }
        // next weight
        self.weight += 1;
        if self.weight > self.radius {
            self.done = true;
            return;
        }
        self.support = (0..self.weight).collect();
        self.values = vec![1; self.weight];
    }
}

impl Iterator for BallIter {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        if self.done {
            return None;
        }
        let v = self.current();
        self.advance();
        Some(v)
    }
}
