//! Locally dense codes: a BCH code `C(A)` with `lambda(C(A)) > d` and a
//! binary target `s` of weight `alpha d` such that many codewords lie within
//! distance `alpha d` of `s`.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::bch::{build_bch, prime_power, BchSpec};
use super::{bounded_pow, indicator, random_support, Density, PaperQuantity, Status};
use crate::ball::HammingBall;
use crate::budget::Budget;
use crate::code::LinearCode;
use crate::distance::{min_distance_at_least, syndrome_ball_list};
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::rng;

/// Largest BCH length we build.
const MAX_LENGTH: u64 = 1 << 12;

#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LdcParams {
    pub q: u64,
    pub k: usize,
    pub m: usize,
    /// `4 q k`.
    pub d: usize,
    /// `1 - 1/(2q)`.
    #[serde_as(as = "DisplayFromStr")]
    pub alpha: BigRational,
    /// `alpha d`, the target weight and the density radius.
    pub radius: usize,
    /// Declared density lower bound `N`. Stored, never asserted at desk scale.
    pub declared_n: PaperQuantity,
    /// Least `q^r - 1 >= (d q m)^(4q)`.
    pub paper_m_prime: PaperQuantity,
    /// Length actually built.
    pub m_prime: usize,
    pub bch: BchSpec,
    pub scale_override: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocallyDenseCode {
    pub params: LdcParams,
    pub seed: u64,
    /// `m' x n'` generator matrix, columns spanning the code.
    pub matrix: Vec<Vec<Elem>>,
    pub target: Vec<Elem>,
    pub status: Status,
    /// `"oracle"` or `"design_distance"`, once structure is checked.
    pub structure_evidence: Option<String>,
    pub density: Option<Density>,
}

/// Samples the BCH-based gadget for `(q, k, m)`. With `scale_override =
/// Some(m')` the code has the caller's length `m' = q^r - 1` instead of the
/// astronomically large formula length.
pub fn sample_locally_dense_code(
    q: u64,
    k: usize,
    m: usize,
    seed: u64,
    scale_override: Option<usize>,
) -> Result<LocallyDenseCode> {
    let (p, e) = prime_power(q)
        .ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))?;
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter("k and m must be positive".into()));
    }
    let qz = q as usize;
    let d = 4 * qz * k;
    let alpha = BigRational::one() - BigRational::new(1.into(), (2 * q).into());
    let radius = (4 * qz - 2) * k;

    let qm = BigUint::from(q) * m;
    let declared_n = PaperQuantity {
        formula: format!("({q}*{m})^(2*{d})/100"),
        value: bounded_pow(&qm, 2 * d as u64)
            .map(|v| BigRational::new(v.into(), 100.into())),
    };
    let (paper_value, paper_r) = match bounded_pow(&(BigUint::from(d) * &qm), 4 * q) {
        Some(floor) => {
            let mut r = 1u64;
            let mut len = BigUint::from(q);
            while &len - 1u32 < floor {
                len *= q;
                r += 1;
            }
            (Some(BigRational::from_integer((len - 1u32).into())), Some(r))
        }
        None => (None, None),
    };
    let paper_m_prime = PaperQuantity {
        formula: format!("min q^r - 1 >= ({d}*{q}*{m})^(4*{q})"),
        value: paper_value,
    };

    let r = match scale_override {
        Some(len) => exponent_of(q, len as u64 + 1).ok_or_else(|| {
            Error::InvalidParameter(format!("override length {len} is not {q}^r - 1"))
        })?,
        None => match paper_r {
            Some(r) if q.checked_pow(r as u32).is_some_and(|v| v <= MAX_LENGTH) => r as u32,
            _ => {
                return Err(Error::PaperScaleInfeasible(format!(
                    "gadget length {}; pass a scale override",
                    paper_m_prime.formula
                )))
            }
        },
    };
    if q.checked_pow(r).is_none_or(|v| v > MAX_LENGTH) {
        return Err(Error::Overflow(format!("BCH length {q}^{r} - 1")));
    }
    let bch = BchSpec { p, e, r, d: d + 1 };
    let m_prime = bch.length()?;
    if d + 1 > m_prime || radius > m_prime {
        return Err(Error::InvalidParameter(format!(
            "length {m_prime} too short for design distance {} and target weight {radius}",
            d + 1
        )));
    }
    let code = build_bch(bch)?.code;
    let mut rng = rng::stream(seed, "ldc/target");
    let target = indicator(m_prime, &random_support(&mut rng, m_prime, radius));
    Ok(LocallyDenseCode {
        params: LdcParams {
            q,
            k,
            m,
            d,
            alpha,
            radius,
            declared_n,
            paper_m_prime,
            m_prime,
            bch,
            scale_override: scale_override.is_some(),
        },
        seed,
        matrix: code.generator().clone(),
        target,
        status: Status::Unverified,
        structure_evidence: None,
        density: None,
    })
}

/// `r` with `q^r = v`.
fn exponent_of(q: u64, v: u64) -> Option<u32> {
    let mut acc = 1u64;
    let mut r = 0;
    while acc < v {
        acc = acc.checked_mul(q)?;
        r += 1;
    }
    (acc == v && r > 0).then_some(r)
}

impl LocallyDenseCode {
    pub fn field(&self) -> Result<FiniteField> {
        FiniteField::new(self.params.bch.p, self.params.bch.e)
    }

    pub fn code(&self) -> Result<LinearCode> {
        LinearCode::from_generator(&self.field()?, self.params.m_prime, self.matrix.clone())
    }

    /// Checks `lambda(C(A)) > d` by oracle, falling back to the BCH design
    /// distance `d + 1` when the oracle does not fit the budget.
    pub fn verify_structure(&mut self, budget: Budget) -> Result<bool> {
        let code = self.code()?;
        if self.target.len() != self.params.m_prime
            || self.target.iter().filter(|&&x| x != 0).count() != self.params.radius
            || self.target.iter().any(|&x| x > 1)
        {
            return Ok(false);
        }
        let (ok, evidence) = match min_distance_at_least(&code, self.params.d + 1, budget) {
            Ok(ok) => (ok, "oracle"),
            Err(Error::BudgetExceeded { .. }) => {
                (build_bch(self.params.bch)?.code == code, "design_distance")
            }
            Err(e) => return Err(e),
        };
        if ok {
            self.status = Status::StructuralOk;
            self.structure_evidence = Some(evidence.into());
        }
        Ok(ok)
    }

    /// `|(C(A) - s) ∩ B(alpha d)|`: exact when the ball listing fits the
    /// budget, otherwise estimated from `samples` uniform ball points.
    pub fn estimate_density(&mut self, budget: Budget, samples: u64) -> Result<&Density> {
        let code = self.code()?;
        let f = code.field().clone();
        let neg: Vec<Elem> = self.target.iter().map(|&x| f.neg(x)).collect();
        let density = match syndrome_ball_list(&code, Some(&neg), self.params.radius, budget) {
            Ok(list) => Density::Exact {
                count: BigUint::from(list.len()),
            },
            Err(Error::BudgetExceeded { .. }) => {
                let ball = HammingBall::new(&f, self.params.m_prime, self.params.radius);
                let hits = sample_ball(&ball_sampler(&ball, &f, self.params.m_prime)?, samples, self.seed, |e| {
                    let v: Vec<Elem> = e.iter().zip(&self.target).map(|(&a, &b)| f.add(a, b)).collect();
                    code.contains(&v)
                });
                Density::monte_carlo(samples, hits, ball.size())
            }
            Err(e) => return Err(e),
        };
        if self.status == Status::StructuralOk {
            self.status = Status::DensityEstimated;
        }
        Ok(self.density.insert(density))
    }
}

/// Samples uniform points of a Hamming ball by weight, support and values.
pub(crate) struct BallSampler {
    weights: WeightedIndex<f64>,
    q: u64,
    m: usize,
}

pub(crate) fn ball_sampler(ball: &HammingBall, f: &FiniteField, m: usize) -> Result<BallSampler> {
    let shells: Vec<f64> = (0..=ball.radius())
        .map(|w| num_traits::ToPrimitive::to_f64(&ball.shell_size(w)).unwrap_or(f64::MAX))
        .collect();
    let weights = WeightedIndex::new(shells)
        .map_err(|e| Error::InvalidParameter(format!("ball sampler: {e}")))?;
    Ok(BallSampler {
        weights,
        q: f.order(),
        m,
    })
}

impl BallSampler {
    pub(crate) fn sample(&self, rng: &mut impl Rng) -> Vec<Elem> {
        let w = self.weights.sample(rng);
        let mut v = vec![0; self.m];
        for i in random_support(rng, self.m, w) {
            v[i] = rng.gen_range(1..self.q);
        }
        v
    }
}

const WORKERS: u64 = 16;

/// Counts hits over `samples` draws split across fixed worker streams, so
/// the total does not depend on the thread count.
pub(crate) fn sample_ball(
    sampler: &BallSampler,
    samples: u64,
    seed: u64,
    hit: impl Fn(&[Elem]) -> bool + Sync,
) -> u64 {
    (0..WORKERS)
        .into_par_iter()
        .map(|w| {
            let mut rng = rng::worker_stream(seed, "density", w);
            let n = samples / WORKERS + u64::from(w < samples % WORKERS);
            (0..n).filter(|_| hit(&sampler.sample(&mut rng))).count() as u64
        })
        .sum()
}
