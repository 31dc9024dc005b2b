//! Monte Carlo survival rates of fixed vectors under random sparsifiers.

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::linalg;
use crate::reductions::sample_parity;
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SparsifierKind {
    /// `h` uniform parity checks over `F_q`.
    Code { q: u64, h: usize },
    /// One uniform hyperplane modulo the prime `rho`.
    Lattice { rho: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateStat {
    pub hits: u64,
    pub rate: f64,
    pub expected: f64,
    /// Binomial standard deviation of the rate.
    pub sigma: f64,
    pub z: f64,
    pub within_4_sigma: bool,
}

impl RateStat {
    fn new(hits: u64, trials: u64, expected: f64) -> Self {
        let n = trials as f64;
        let rate = hits as f64 / n;
        let sigma = (expected * (1.0 - expected) / n).sqrt();
        let z = if sigma > 0.0 { (rate - expected) / sigma } else { 0.0 };
        RateStat {
            hits,
            rate,
            expected,
            sigma,
            z,
            within_4_sigma: z.abs() <= 4.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsifierStats {
    pub kind: SparsifierKind,
    pub trials: u64,
    pub seed: u64,
    /// Survival of one fixed nonzero vector.
    pub single: RateStat,
    /// Joint survival of two independent vectors, against the product rate.
    pub pair: RateStat,
}

/// Length of the fixed test vectors.
const LEN: usize = 8;

pub fn sparsifier_stats(kind: SparsifierKind, trials: u64, seed: u64) -> Result<SparsifierStats> {
    if trials < 1000 {
        return Err(Error::InvalidParameter("at least 1000 trials".into()));
    }
    let (single, pair, p) = match kind {
        SparsifierKind::Code { q, h } => {
            let (pr, e) = crate::gadgets::prime_power(q)
                .ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))?;
            let f = FiniteField::new(pr, e)?;
            // two linearly independent vectors
            let mut u: Vec<Elem> = vec![0; LEN];
            u[0] = 1;
            u[3] = 1;
            let mut v: Vec<Elem> = vec![0; LEN];
            v[1] = 1;
            v[3] = 1;
            v[7] = q - 1;
            let mut r = rng::stream(seed, "stats/code");
            let (mut one, mut two) = (0, 0);
            for _ in 0..trials {
                let hm = sample_parity(&f, h, LEN, &mut r);
                let zu = linalg::mat_vec(&f, &hm, &u).iter().all(|&x| x == 0);
                let zv = linalg::mat_vec(&f, &hm, &v).iter().all(|&x| x == 0);
                one += u64::from(zu);
                two += u64::from(zu && zv);
            }
            (one, two, (q as f64).powi(-(h as i32)))
        }
        SparsifierKind::Lattice { rho } => {
            if !crate::primes::is_prime(rho) {
                return Err(Error::InvalidParameter(format!("rho = {rho} is not prime")));
            }
            let u: Vec<BigInt> = [1, -2, 0, 3, 0, 0, 1, 0].map(BigInt::from).to_vec();
            let w: Vec<BigInt> = [0, 1, 1, 0, 2, 0, 0, -1].map(BigInt::from).to_vec();
            let rb = BigInt::from(rho);
            let mut r = rng::stream(seed, "stats/lattice");
            let (mut one, mut two) = (0, 0);
            for _ in 0..trials {
                let v: Vec<BigInt> = (0..LEN).map(|_| BigInt::from(r.gen_range(0..rho))).collect();
                let ip = |a: &[BigInt]| -> bool {
                    let s: BigInt = v.iter().zip(a).map(|(x, y)| x * y).sum();
                    (s % &rb) == BigInt::from(0)
                };
                let zu = ip(&u);
                let zw = ip(&w);
                one += u64::from(zu);
                two += u64::from(zu && zw);
            }
            (one, two, 1.0 / rho as f64)
        }
    };
    Ok(SparsifierStats {
        kind,
        trials,
        seed,
        single: RateStat::new(single, trials, p),
        pair: RateStat::new(pair, trials, p * p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_are_reproducible() {
        let a = sparsifier_stats(SparsifierKind::Code { q: 3, h: 1 }, 2000, 4).unwrap();
        assert_eq!(a, sparsifier_stats(SparsifierKind::Code { q: 3, h: 1 }, 2000, 4).unwrap());
        assert!(sparsifier_stats(SparsifierKind::Lattice { rho: 6 }, 2000, 4).is_err());
        assert!(sparsifier_stats(SparsifierKind::Lattice { rho: 5 }, 10, 4).is_err());
    }
}
