//! Exhaustive censuses of the short vectors of intermediate objects, sorted
//! into good (they use the target), annoying (they exist regardless of the
//! target) and other.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::haviv_regev::{even_light_vectors, even_radius_pow};
use crate::budget::Budget;
use crate::code::LinearCode;
use crate::distance::syndrome_ball_list;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::lattice::enumerate::short_vectors;
use crate::lattice::{IntegerLattice, NormSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeCensus {
    /// Nonzero codewords of weight `<= max(k', d)`.
    pub enumerated: usize,
    /// Weight `<= k'` and outside `C(G) x C(A)`: they use the target column.
    pub good: usize,
    /// Weight `<= d` and of the form `(G x, 0)`.
    pub annoying: usize,
    pub other: usize,
    /// Every codeword of weight `<= d` is annoying.
    pub structure_ok: bool,
}

/// Census of `C_int` whose first `m` coordinates carry `C(G)` and the rest
/// carry `C(A)`.
pub fn census_code(
    c_int: &LinearCode,
    code_g: &LinearCode,
    code_a: &LinearCode,
    k_out: usize,
    d: usize,
    budget: Budget,
) -> Result<CodeCensus> {
    let m = code_g.len();
    if m + code_a.len() != c_int.len() {
        return Err(Error::DimensionMismatch("block lengths".into()));
    }
    let words = syndrome_ball_list(c_int, None, k_out.max(d), budget)?;
    let mut census = CodeCensus {
        enumerated: words.len(),
        good: 0,
        annoying: 0,
        other: 0,
        structure_ok: true,
    };
    for w in &words {
        let wt = crate::linalg::weight(w);
        let (z1, z2) = w.split_at(m);
        let in_blocks = code_g.contains(z1) && code_a.contains(z2);
        let shape = z2.iter().all(|&x| x == 0) && code_g.contains(z1);
        if wt <= k_out && !in_blocks {
            census.good += 1;
        } else if wt <= d && shape {
            census.annoying += 1;
        } else {
            census.other += 1;
        }
        if wt <= d && !shape {
            census.structure_ok = false;
        }
    }
    Ok(census)
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCensus {
    /// Nonzero vectors with `||w||_p^p <= max(k'^p, d^p)`.
    pub enumerated: usize,
    /// `||w||_p^p <= k'^p` with last coordinate 1.
    pub good: usize,
    /// `||w||_p^p <= d^p` with zero gadget block and last coordinate.
    pub annoying: usize,
    pub other: usize,
    /// Every vector with `||w||_p^p <= d^p` is annoying.
    pub structure_ok: bool,
    /// Last coordinates seen among vectors with `||w||_p^p <= k'^p`.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub last_coordinates: Vec<BigInt>,
}

/// Census of `L_int` with blocks (`m` instance coordinates, `m'` gadget
/// coordinates, one target coordinate).
pub fn census_lattice(
    l_int: &IntegerLattice,
    m: usize,
    good_pow: &BigRational,
    light_pow: &BigRational,
    p: NormSpec,
    budget: Budget,
) -> Result<LatticeCensus> {
    let dim = l_int.ambient_dim();
    let cap = good_pow.max(light_pow).floor().to_integer();
    let cap = cap.to_u128().ok_or_else(|| Error::Overflow("census radius".into()))?;
    let vs = short_vectors(l_int, None, p, cap, budget)?;
    let mut c = LatticeCensus {
        enumerated: vs.len(),
        good: 0,
        annoying: 0,
        other: 0,
        structure_ok: true,
        last_coordinates: Vec::new(),
    };
    for w in &vs {
        let n = BigRational::from_integer(p.pow_norm(w)?.into());
        let last = &w[dim - 1];
        let shape = last.is_zero() && w[m..dim - 1].iter().all(Zero::is_zero);
        if n <= *good_pow && !c.last_coordinates.contains(last) {
            c.last_coordinates.push(last.clone());
        }
        if n <= *good_pow && last.is_one() {
            c.good += 1;
        } else if n <= *light_pow && shape {
            c.annoying += 1;
        } else {
            c.other += 1;
        }
        if n <= *light_pow && !shape {
            c.structure_ok = false;
        }
    }
    c.last_coordinates.sort();
    Ok(c)
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorableCensus {
    /// `(gamma' k')^p`, the weight threshold.
    #[serde_as(as = "DisplayFromStr")]
    pub threshold_pow: BigRational,
    /// Words of the mod-2 image of weight at most the threshold.
    pub light_images: usize,
    /// Of those, images of vectors with odd last coordinate. The case
    /// analysis says there are none.
    pub case_odd_target: usize,
    /// Images with even last coordinate and a nonzero gadget block. None
    /// expected either.
    pub case_odd_gadget: usize,
    /// All-even annoying vectors, counted exactly.
    pub case_even_annoying: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub even_radius_pow: BigUint,
}

impl TensorableCensus {
    pub fn annoying(&self) -> usize {
        self.case_odd_target + self.case_odd_gadget + self.case_even_annoying
    }
}

/// Census of the doubled intermediate lattice, with `m` coordinates of
/// `2 L_NCP`, then the gadget block, then the target coordinate.
///
/// Each `w` maps to `(w_1 / 2, w_2, w_3) mod 2`; the weight of `w` is at
/// least the weight of its image, so a light vector with an odd target or
/// gadget part shows up as a light word of the image code.
pub fn census_tensorable(
    l_int: &IntegerLattice,
    m: usize,
    threshold_pow: &BigRational,
    p: NormSpec,
    c: u32,
    budget: Budget,
) -> Result<TensorableCensus> {
    let pi = p.require_integral()?;
    let dim = l_int.ambient_dim();
    let f = FiniteField::new(2, 1)?;
    let mut rows: Vec<Vec<Elem>> = Vec::with_capacity(l_int.rank());
    for r in l_int.basis_rows() {
        if r[..m].iter().any(Integer::is_odd) {
            return Err(Error::InvalidParameter("first block is not even".into()));
        }
        let img = r
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let y = if i < m { x / 2 } else { x.clone() };
                u64::from(y.bit(0))
            })
            .collect();
        rows.push(img);
    }
    let image = LinearCode::from_spanning_vectors(&f, dim, &rows)?;
    let wmax = threshold_pow.floor().to_integer().to_usize().unwrap_or(usize::MAX).min(dim);
    let light = syndrome_ball_list(&image, None, wmax, budget)?;
    let case_odd_target = light.iter().filter(|w| w[dim - 1] == 1).count();
    let case_odd_gadget = light
        .iter()
        .filter(|w| w[dim - 1] == 0 && w[m..dim - 1].contains(&1))
        .count();
    let even_weight = (threshold_pow / BigRational::from_integer(BigInt::one() << pi))
        .floor()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX);
    let radius = even_radius_pow(threshold_pow, pi, c)?;
    let r = radius
        .to_u128()
        .ok_or_else(|| Error::Overflow("even radius exceeds 128 bits".into()))?;
    let (even, _) = even_light_vectors(l_int, even_weight, r, p, budget)?;
    Ok(TensorableCensus {
        threshold_pow: threshold_pow.clone(),
        light_images: light.len(),
        case_odd_target,
        case_odd_gadget,
        case_even_annoying: even.len(),
        even_radius_pow: radius,
    })
}
