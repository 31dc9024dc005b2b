//! Gadgets consumed by the reductions: q-ary BCH codes, locally dense codes
//! built from them, and the Reed-Solomon / BCH Construction-A lattices.

mod bch;
mod ldc;
mod ldl;

pub use bch::{build_bch, BchCode, BchSpec};
pub(crate) use bch::prime_power;
pub(crate) use ldl::combinations;
pub use ldc::{sample_locally_dense_code, LdcParams, LocallyDenseCode};
pub use ldl::{
    build_bch_construction_a, build_rs_lattice, rs_paper_parameters, sample_rs_locally_dense_lattice,
    BchLattice, LdlParams, LocallyDenseLattice, RsOverride, RsPaperParameters,
};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

/// How far a gadget's claimed properties have been checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Unverified,
    /// Minimum distance (or `lambda_1`) exceeds `d`, checked by an oracle.
    StructuralOk,
    /// Structure checked and the density measured; see [`Density`].
    DensityEstimated,
}

/// Number of points of the shifted code or lattice inside the ball.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Density {
    Exact {
        #[serde_as(as = "DisplayFromStr")]
        count: BigUint,
    },
    MonteCarlo {
        samples: u64,
        hits: u64,
        /// Number of points sampled from.
        #[serde_as(as = "DisplayFromStr")]
        population: BigUint,
        /// Wilson interval on the count at `z` standard deviations.
        z: f64,
        lower: f64,
        upper: f64,
    },
}

impl Density {
    /// A certain lower bound on the count, if one is known.
    pub fn certain_lower_bound(&self) -> Option<&BigUint> {
        match self {
            Density::Exact { count } => Some(count),
            Density::MonteCarlo { .. } => None,
        }
    }

    pub(crate) fn monte_carlo(samples: u64, hits: u64, population: BigUint) -> Density {
        let z = 4.0;
        let (lo, hi) = wilson(hits, samples, z);
        let pop = population.to_f64().unwrap_or(f64::INFINITY);
        Density::MonteCarlo {
            samples,
            hits,
            population,
            z,
            lower: lo * pop,
            upper: hi * pop,
        }
    }
}

/// Wilson score interval for a binomial proportion.
pub fn wilson(hits: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let ph = hits as f64 / n;
    let z2 = z * z;
    let centre = ph + z2 / (2.0 * n);
    let half = z * (ph * (1.0 - ph) / n + z2 / (4.0 * n * n)).sqrt();
    let den = 1.0 + z2 / n;
    (((centre - half) / den).max(0.0), ((centre + half) / den).min(1.0))
}

/// A paper-scale quantity: its formula, and its exact value when small enough
/// to write down.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaperQuantity {
    pub formula: String,
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub value: Option<BigRational>,
}

/// Largest exact value we bother to materialize, in bits.
const MATERIALIZE_BITS: u64 = 1 << 16;

/// `base^exp` when it has at most [`MATERIALIZE_BITS`] bits.
pub(crate) fn bounded_pow(base: &BigUint, exp: u64) -> Option<BigUint> {
    if base.bits().saturating_mul(exp) > MATERIALIZE_BITS {
        return None;
    }
    Some(base.pow(u32::try_from(exp).ok()?))
}

/// Uniformly random sorted `w`-subset of `0..n`.
pub(crate) fn random_support(rng: &mut impl Rng, n: usize, w: usize) -> Vec<usize> {
    let mut s = rand::seq::index::sample(rng, n, w).into_vec();
    s.sort_unstable();
    s
}

/// Binary vector of length `n` with ones on `support`.
pub(crate) fn indicator<T: From<u8> + Clone>(n: usize, support: &[usize]) -> Vec<T> {
    let mut v = vec![T::from(0u8); n];
    for &i in support {
        v[i] = T::from(1u8);
    }
    v
}
