//! Locally dense lattices: Construction-A lattices of Reed-Solomon codes with
//! a binary target of weight `w`, and the binary BCH Construction-A lattice
//! used by the tensorable reduction.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use std::ops::Add;

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::bch::{build_bch, BchSpec};
use super::{bounded_pow, indicator, random_support, Density, PaperQuantity, Status};
use crate::ball::binomial;
use crate::budget::Budget;
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::FiniteField;
use crate::lattice::enumerate::lambda1;
use crate::lattice::{construction_a, IntegerLattice, NormSpec};
use crate::primes::is_prime;
use crate::rng;

/// Construction-A lattice `RS_{q,l} + q Z^q` of the Reed-Solomon code
/// `{(f(z))_{z in F_q} : deg f < l}`.
pub fn build_rs_lattice(q: u64, ell: usize) -> Result<IntegerLattice> {
    if !is_prime(q) {
        return Err(Error::InvalidParameter(format!("RS lattice needs prime q, got {q}")));
    }
    let qz = usize::try_from(q).map_err(|_| Error::Overflow("q".into()))?;
    if ell == 0 || ell > qz {
        return Err(Error::InvalidParameter(format!("need 1 <= l <= q, got l = {ell}")));
    }
    construction_a(&reed_solomon(q, ell)?)
}

pub(crate) fn reed_solomon(q: u64, ell: usize) -> Result<LinearCode> {
    let f = FiniteField::new(q, 1)?;
    let generator = f
        .elements()
        .map(|z| (0..ell).map(|j| f.pow(z, j as u128)).collect())
        .collect();
    LinearCode::from_generator(&f, q as usize, generator)
}

/// The quantities of the paper-scale RS construction for `(p, gamma', k, m)`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsPaperParameters {
    /// `gamma'^(-p) - 1/2`.
    #[serde_as(as = "DisplayFromStr")]
    pub epsilon: BigRational,
    /// `ceil(max(12/eps, 1/((1 + eps/2)^(1/p) - 1)))`.
    pub gamma: u64,
    /// `ceil((1 + gamma k)^p / 2)`.
    #[serde_as(as = "DisplayFromStr")]
    pub ell: BigUint,
    /// `floor(((gamma/gamma')^p - 2) k^p)`.
    #[serde_as(as = "DisplayFromStr")]
    pub w: BigUint,
    /// `gamma'^(-p) - 2/gamma^p`.
    #[serde_as(as = "DisplayFromStr")]
    pub alpha_pow: BigRational,
    /// `(2m(1 + gamma k))^(3 (gamma k)^p)`.
    pub declared_n: PaperQuantity,
    /// `q` is the least prime above this.
    pub q_threshold: PaperQuantity,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

fn check_gamma_prime(p: u32, gamma_prime: &BigRational) -> Result<BigRational> {
    let gp = gamma_prime.pow(p as i32);
    if gamma_prime < &BigRational::one() || gp >= rat(2) {
        return Err(Error::GateViolation(format!(
            "gamma' = {gamma_prime} outside [1, 2^(1/{p}))"
        )));
    }
    Ok(gp)
}

pub fn rs_paper_parameters(
    p: NormSpec,
    gamma_prime: &BigRational,
    k: u64,
    m: u64,
) -> Result<RsPaperParameters> {
    let pi = p.require_integral()?;
    let gp = check_gamma_prime(pi, gamma_prime)?;
    let eps = gp.recip() - BigRational::new(1.into(), 2.into());
    let a = (rat(12) / &eps).ceil().to_integer();
    // least n with (1 + 1/n)^p <= 1 + eps/2, i.e. n >= 1/((1 + eps/2)^(1/p) - 1)
    let target = BigRational::one() + &eps / rat(2);
    let ok = |n: u64| (BigRational::one() + BigRational::new(1.into(), n.into())).pow(pi as i32) <= target;
    let mut hi = 1u64;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let gamma = a
        .max(BigInt::from(hi))
        .try_into()
        .map_err(|_| Error::Overflow("gamma".into()))?;
    let gk = BigUint::from(gamma) * k;
    let ell = (BigUint::one() + &gk).pow(pi).add(1u32) / 2u32;
    let w_rat = ((rat(gamma) / gamma_prime).pow(pi as i32) - rat(2)) * rat(k).pow(pi as i32);
    let w = w_rat.floor().to_integer().to_biguint().unwrap_or_default();
    let alpha_pow = gp.recip() - rat(2) / rat(gamma).pow(pi as i32);
    let base_n = BigUint::from(2 * m) * (BigUint::one() + &gk);
    let exp_n = 3u64 * u64::try_from(gk.pow(pi)).map_err(|_| Error::Overflow("(gamma k)^p".into()))?;
    let declared_n = PaperQuantity {
        formula: format!("(2*{m}*(1+{gk}))^(3*{gk}^{pi})"),
        value: bounded_pow(&base_n, exp_n).map(rat),
    };
    let base_q = BigUint::from(300u32) * &w * gk.pow(pi) * &base_n;
    let exp_q = rat(9) / &eps;
    let q_value = if exp_q.is_integer() {
        u64::try_from(exp_q.to_integer())
            .ok()
            .and_then(|e| bounded_pow(&base_q, e))
            .map(rat)
    } else {
        None
    };
    let q_threshold = PaperQuantity {
        formula: format!("({base_q})^({exp_q})"),
        value: q_value,
    };
    Ok(RsPaperParameters {
        epsilon: eps,
        gamma,
        ell,
        w,
        alpha_pow,
        declared_n,
        q_threshold,
    })
}

/// Desk-scale replacement for the RS gadget's sizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsOverride {
    pub q: u64,
    pub ell: usize,
    pub w: usize,
    /// Replaces the formula `gamma`, so that `d = gamma k` stays small.
    pub gamma: Option<u64>,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdlParams {
    pub p: NormSpec,
    #[serde_as(as = "DisplayFromStr")]
    pub gamma_prime: BigRational,
    pub k: u64,
    pub m: u64,
    pub gamma: u64,
    /// `gamma k`.
    pub d: u64,
    /// `alpha^p`.
    #[serde_as(as = "DisplayFromStr")]
    pub alpha_pow: BigRational,
    pub q: u64,
    pub ell: usize,
    pub w: usize,
    pub paper: RsPaperParameters,
    pub scale_override: bool,
}

impl LdlParams {
    /// `(alpha d)^p`.
    pub fn radius_pow(&self) -> BigRational {
        &self.alpha_pow * rat(self.d).pow(self.p.numer() as i32)
    }
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocallyDenseLattice {
    pub params: LdlParams,
    pub seed: u64,
    /// `m' x n'` basis, columns are basis vectors.
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub matrix: Vec<Vec<BigInt>>,
    pub target: Vec<i64>,
    pub status: Status,
    pub density: Option<Density>,
}

/// Samples the RS gadget. The paper sizes are never materializable, so in
/// practice `scale_override` supplies `(q, l, w)` and optionally `gamma`.
pub fn sample_rs_locally_dense_lattice(
    p: NormSpec,
    gamma_prime: &BigRational,
    k: u64,
    m: u64,
    seed: u64,
    scale_override: Option<RsOverride>,
) -> Result<LocallyDenseLattice> {
    if k == 0 || m == 0 {
        return Err(Error::InvalidParameter("k and m must be positive".into()));
    }
    let paper = rs_paper_parameters(p, gamma_prime, k, m)?;
    let pi = p.numer();
    let Some(ov) = scale_override else {
        return Err(Error::PaperScaleInfeasible(format!(
            "RS prime q above {}; pass a scale override",
            paper.q_threshold.formula
        )));
    };
    let gamma = ov.gamma.unwrap_or(paper.gamma);
    if gamma == 0 {
        return Err(Error::InvalidParameter("gamma must be positive".into()));
    }
    let gp = check_gamma_prime(pi, gamma_prime)?;
    let alpha_pow = gp.recip() - rat(2) / rat(gamma).pow(pi as i32);
    if alpha_pow <= BigRational::zero() || alpha_pow >= BigRational::one() {
        return Err(Error::GateViolation(format!("alpha^p = {alpha_pow} outside (0, 1)")));
    }
    let d = gamma * k;
    if ov.w == 0 {
        return Err(Error::InvalidParameter("w = 0 leaves no target to be dense around".into()));
    }
    if ov.w as u64 > ov.q {
        return Err(Error::InvalidParameter(format!("w = {} exceeds q = {}", ov.w, ov.q)));
    }
    let radius_pow = &alpha_pow * rat(d).pow(pi as i32);
    if rat(ov.w) > radius_pow {
        return Err(Error::InvalidParameter(format!(
            "weight-{} targets are outside the radius (alpha d)^p = {radius_pow}",
            ov.w
        )));
    }
    let lattice = build_rs_lattice(ov.q, ov.ell)?;
    let q = ov.q as usize;
    let mut rng = rng::stream(seed, "ldl/target");
    let target = indicator(q, &random_support(&mut rng, q, ov.w));
    Ok(LocallyDenseLattice {
        params: LdlParams {
            p,
            gamma_prime: gamma_prime.clone(),
            k,
            m,
            gamma,
            d,
            alpha_pow,
            q: ov.q,
            ell: ov.ell,
            w: ov.w,
            paper,
            scale_override: true,
        },
        seed,
        matrix: lattice.basis_columns(),
        target,
        status: Status::Unverified,
        density: None,
    })
}

impl LocallyDenseLattice {
    pub fn lattice(&self) -> Result<IntegerLattice> {
        IntegerLattice::from_columns(&self.matrix)
    }

    pub fn target_big(&self) -> Vec<BigInt> {
        self.target.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Checks `lambda_1^(p) > d` exactly and the target's shape.
    pub fn verify_structure(&mut self, budget: Budget) -> Result<bool> {
        let q = self.params.q as usize;
        let shape = self.target.len() == q
            && self.target.iter().all(|&x| x == 0 || x == 1)
            && self.target.iter().filter(|&&x| x == 1).count() == self.params.w;
        let l = self.lattice()?;
        let rep = lambda1(&l, self.params.p, budget)?;
        let dp = BigUint::from(self.params.d).pow(self.params.p.numer());
        let ok = shape && rep.value_pow.is_none_or(|v| v > dp);
        if ok {
            self.status = Status::StructuralOk;
        }
        Ok(ok)
    }

    /// `|(L - s) ∩ B_{q,w}|` over binary weight-`w` vectors: exact when
    /// `C(q, w)` fits the budget, otherwise estimated from `samples` draws.
    pub fn estimate_density(&mut self, budget: Budget, samples: u64) -> Result<&Density> {
        let l = self.lattice()?;
        let q = self.params.q as usize;
        let w = self.params.w;
        let s = self.target_big();
        let hit = |support: &[usize]| {
            let mut v = s.clone();
            for &i in support {
                v[i] += 1;
            }
            l.contains(&v)
        };
        let total = binomial(q, w);
        let density = if total <= BigUint::from(budget.limit()) {
            let supports = combinations(q, w);
            let count = supports.par_iter().filter(|c| hit(c)).count();
            Density::Exact {
                count: BigUint::from(count),
            }
        } else {
            let hits: u64 = (0..16u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = rng::worker_stream(self.seed, "density", i);
                    let n = samples / 16 + u64::from(i < samples % 16);
                    (0..n)
                        .filter(|_| hit(&random_support(&mut rng, q, w)))
                        .count() as u64
                })
                .sum();
            Density::monte_carlo(samples, hits, total)
        };
        if self.status == Status::StructuralOk {
            self.status = Status::DensityEstimated;
        }
        Ok(self.density.insert(density))
    }
}

/// All `w`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, w: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if w > n {
        return out;
    }
    let mut c: Vec<usize> = (0..w).collect();
    loop {
        out.push(c.clone());
        let Some(j) = (0..w).rev().find(|&j| c[j] < n - w + j) else {
            return out;
        };
        c[j] += 1;
        for i in j + 1..w {
            c[i] = c[i - 1] + 1;
        }
    }
}

/// Binary BCH Construction-A lattice with a binary target.
#[derive(Clone, Debug)]
pub struct BchLattice {
    pub spec: BchSpec,
    pub code: LinearCode,
    pub lattice: IntegerLattice,
    pub target: Vec<BigInt>,
}

/// `C_BCH + 2 Z^{m'}` for the binary BCH code of length `2^r - 1` and design
/// distance `d + 1`, with a uniformly random binary target of weight
/// `radius`.
pub fn build_bch_construction_a(r: u32, d: usize, radius: usize, rng: &mut impl Rng) -> Result<BchLattice> {
    let spec = BchSpec::new(2, r, d + 1)?;
    let m = spec.length()?;
    if radius > m {
        return Err(Error::InvalidParameter(format!("target weight {radius} exceeds {m}")));
    }
    let code = build_bch(spec)?.code;
    let lattice = construction_a(&code)?;
    let target = indicator(m, &random_support(rng, m, radius));
    Ok(BchLattice {
        spec,
        code,
        lattice,
        target,
    })
}
