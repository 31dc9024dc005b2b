//! Exhaustive short-vector enumeration in the HNF frame.
//!
//! With basis rows in echelon form, the coordinates of `v = sum x_i b_i - t`
//! up to (but excluding) pivot `c_{k+1}` depend only on `x_0..x_k`. Those
//! coordinate prefixes are orthogonal projections of `L - t`, so bounding the
//! partial `||.||_p^p` by the search radius `R` at every level prunes exactly
//! the branches that cannot reach a vector of norm `<= R`: the search is a
//! Fincke-Pohst enumeration whose Gram-Schmidt vectors are the pivots, done
//! entirely in integer arithmetic. The radius shrinks as better vectors are
//! found when a minimum is sought.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::norm::{iroot_u128, NormSpec};
use super::{dot, rational_inverse, IntMatrix, IntegerLattice};
use crate::budget::Budget;
use crate::error::{Error, Result};

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lambda1Report {
    pub p: NormSpec,
    /// `lambda_1^(p)(L)^p`; `None` for the zero lattice.
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub value_pow: Option<BigUint>,
    /// Canonical shortest vector: least in (norm, lexicographic) order among
    /// those whose first nonzero coefficient is positive.
    #[serde_as(as = "Option<Vec<DisplayFromStr>>")]
    pub witness: Option<Vec<BigInt>>,
    pub nodes: u64,
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CvpReport {
    pub p: NormSpec,
    /// `dist_p(L, t)^p`.
    #[serde_as(as = "DisplayFromStr")]
    pub value_pow: BigUint,
    /// A closest lattice vector.
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub closest: Vec<BigInt>,
    pub nodes: u64,
}

struct Frame<'a> {
    rows: &'a [Vec<i64>],
    pivots: &'a [usize],
    m: usize,
    p: u32,
    seg_end: Vec<usize>,
    nodes: AtomicU64,
    node_cap: u64,
    over: AtomicBool,
}

#[inline]
fn pow_abs(x: i128, p: u32) -> u128 {
    x.unsigned_abs().checked_pow(p).unwrap_or(u128::MAX)
}

impl<'a> Frame<'a> {
    fn new(rows: &'a [Vec<i64>], pivots: &'a [usize], m: usize, p: u32, budget: Budget) -> Self {
        let seg_end = (0..pivots.len())
            .map(|k| pivots.get(k + 1).copied().unwrap_or(m))
            .collect();
        Frame {
            rows,
            pivots,
            m,
            p,
            seg_end,
            nodes: AtomicU64::new(0),
            node_cap: budget.limit(),
            over: AtomicBool::new(false),
        }
    }

    fn prefix_norm(&self, cur: &[i128]) -> u128 {
        let end = self.pivots.first().copied().unwrap_or(self.m);
        cur[..end].iter().fold(0u128, |a, &x| a.saturating_add(pow_abs(x, self.p)))
    }

    /// Admissible coefficient range at level `k`.
    fn range(&self, k: usize, cur: &[i128], rem: u128, positive_only: bool) -> (i128, i128) {
        let c = self.pivots[k];
        let piv = self.rows[k][c] as i128;
        let rad = iroot_u128(rem, self.p).min(i128::MAX as u128 / 4) as i128;
        let base = cur[c];
        let mut lo = (-rad - base).div_euclid(piv) + i128::from((-rad - base).rem_euclid(piv) != 0);
        let hi = (rad - base).div_euclid(piv);
        if positive_only {
            lo = lo.max(0);
        }
        (lo, hi)
    }

    fn add_row(&self, k: usize, cur: &mut [i128], times: i128) {
        let c = self.pivots[k];
        for (x, &r) in cur[c..].iter_mut().zip(&self.rows[k][c..]) {
            *x += times * r as i128;
        }
    }

    fn tick(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed);
        if n >= self.node_cap {
            self.over.store(true, Ordering::Relaxed);
        }
        self.over.load(Ordering::Relaxed)
    }

    /// Visits every `v` with `||v||_p^p <= bound()`, reached from level `k`.
    /// `all_zero` is true while every chosen coefficient is zero; with
    /// `halve` the first nonzero coefficient is forced positive.
    #[allow(clippy::too_many_arguments)]
    fn rec(
        &self,
        k: usize,
        cur: &mut [i128],
        used: u128,
        all_zero: bool,
        halve: bool,
        bound: &(dyn Fn() -> u128 + Sync),
        visit: &mut dyn FnMut(&[i128], u128, bool),
    ) {
        if self.tick() {
            return;
        }
        if k == self.pivots.len() {
            visit(cur, used, all_zero);
            return;
        }
        let r = bound();
        if used > r {
            return;
        }
        let (lo, hi) = self.range(k, cur, r - used, halve && all_zero);
        if lo > hi {
            return;
        }
        let c = self.pivots[k];
        self.add_row(k, cur, lo);
        for x in lo..=hi {
            let seg = cur[c..self.seg_end[k]]
                .iter()
                .fold(0u128, |a, &v| a.saturating_add(pow_abs(v, self.p)));
            let total = used.saturating_add(seg);
            if total <= bound() {
                self.rec(k + 1, cur, total, all_zero && x == 0, halve, bound, visit);
            }
            if x < hi {
                self.add_row(k, cur, 1);
            }
        }
        self.add_row(k, cur, -hi);
    }

    /// Runs `rec` with the top-level coefficients split across workers; each
    /// worker owns a state created by `init`.
    fn par_search<T: Send>(
        &self,
        start: &[i128],
        halve: bool,
        bound: &(dyn Fn() -> u128 + Sync),
        init: &(dyn Fn() -> T + Sync),
        visit: &(dyn Fn(&[i128], u128, bool, &mut T) + Sync),
    ) -> Result<Vec<T>> {
        let used = self.prefix_norm(start);
        if self.pivots.is_empty() {
            let mut t = init();
            if used <= bound() {
                visit(start, used, true, &mut t);
            }
            return Ok(vec![t]);
        }
        let r = bound();
        if used > r {
            return Ok(Vec::new());
        }
        let (lo, hi) = self.range(0, start, r - used, halve);
        if lo > hi {
            return Ok(Vec::new());
        }
        if (hi - lo) as u128 >= self.node_cap as u128 {
            return Err(Error::BudgetExceeded {
                what: "lattice enumeration".into(),
                needed: format!("{} top-level branches", hi - lo + 1),
                budget: self.node_cap,
            });
        }
        let c = self.pivots[0];
        let xs: Vec<i128> = (lo..=hi).collect();
        Ok(xs
            .into_par_iter()
            .map(|x| {
                let mut state = init();
                let mut cur = start.to_vec();
                self.add_row(0, &mut cur, x);
                let seg = cur[c..self.seg_end[0]]
                    .iter()
                    .fold(0u128, |a, &v| a.saturating_add(pow_abs(v, self.p)));
                let total = used.saturating_add(seg);
                if total <= bound() {
                    let mut f = |v: &[i128], n: u128, z: bool| visit(v, n, z, &mut state);
                    self.rec(1, &mut cur, total, x == 0, halve, bound, &mut f);
                }
                state
            })
            .collect())
    }

    fn check_budget(&self) -> Result<u64> {
        let n = self.nodes.load(Ordering::Relaxed);
        if self.over.load(Ordering::Relaxed) {
            return Err(Error::BudgetExceeded {
                what: "lattice enumeration".into(),
                needed: format!("more than {n} nodes"),
                budget: self.node_cap,
            });
        }
        Ok(n)
    }
}

fn to_i128(v: &[BigInt]) -> Result<Vec<i128>> {
    v.iter()
        .map(|x| x.to_i128().ok_or_else(|| Error::Overflow(format!("coordinate {x} exceeds 128 bits"))))
        .collect()
}

fn to_big(v: &[i128]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn bound_u64(r: u128) -> Result<u64> {
    u64::try_from(r).map_err(|_| Error::Overflow("search radius exceeds 64 bits".into()))
}

type Best = Mutex<Option<(u128, Vec<i128>)>>;

/// Keeps the least `(norm, vector)` pair and shrinks the radius to it.
fn offer(best: &Best, radius: &AtomicU64, v: &[i128], n: u128) {
    let mut b = best.lock().expect("poisoned");
    let better = match &*b {
        None => true,
        Some((bn, bv)) => (n, v) < (*bn, bv.as_slice()),
    };
    if better {
        *b = Some((n, v.to_vec()));
        radius.fetch_min(n as u64, Ordering::Relaxed);
    }
}

/// Exact `lambda_1^(p)(L)^p` for integral `p`.
pub fn lambda1(l: &IntegerLattice, p: NormSpec, budget: Budget) -> Result<Lambda1Report> {
    let (best, nodes) = shortest_within(l, p, None, budget)?;
    debug_assert!(l.rank() == 0 || best.is_some(), "a basis vector is within the radius");
    Ok(Lambda1Report {
        p,
        value_pow: best.as_ref().map(|(n, _)| BigUint::from(*n)),
        witness: best.map(|(_, v)| to_big(&v)),
        nodes,
    })
}

/// `lambda_1^(p)(L)^p` if it is at most `cap`, else `None`, with the
/// canonical shortest vector. Cheaper than [`lambda1`] when the basis is
/// long and only a threshold matters.
pub fn lambda1_capped(
    l: &IntegerLattice,
    p: NormSpec,
    cap: u128,
    budget: Budget,
) -> Result<Option<(BigUint, Vec<BigInt>)>> {
    let (best, _) = shortest_within(l, p, Some(cap), budget)?;
    Ok(best.map(|(n, v)| (BigUint::from(n), to_big(&v))))
}

fn shortest_within(
    l: &IntegerLattice,
    p: NormSpec,
    cap: Option<u128>,
    budget: Budget,
) -> Result<(Option<(u128, Vec<i128>)>, u64)> {
    let pi = p.require_integral()?;
    if l.rank() == 0 {
        return Ok((None, 0));
    }
    let rows = l.small_rows()?;
    let basis_min = rows
        .iter()
        .map(|r| p.pow_norm_i64(r))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .expect("rank > 0");
    let initial = cap.map_or(basis_min, |c| c.min(basis_min));
    let radius = AtomicU64::new(bound_u64(initial)?);
    let best: Best = Mutex::new(None);
    let frame = Frame::new(&rows, l.pivots(), l.ambient_dim(), pi, budget);
    let bound = || radius.load(Ordering::Relaxed) as u128;
    let start = vec![0i128; l.ambient_dim()];
    let keep = |v: &[i128], n: u128, zero: bool, _: &mut ()| {
        if !zero {
            offer(&best, &radius, v, n);
        }
    };
    frame.par_search(&start, true, &bound, &|| (), &keep)?;
    let nodes = frame.check_budget()?;
    Ok((best.into_inner().expect("poisoned"), nodes))
}

/// Exact `dist_p(L, t)^p` for integral `p`.
pub fn cvp_distance(l: &IntegerLattice, t: &[BigInt], p: NormSpec, budget: Budget) -> Result<CvpReport> {
    let pi = p.require_integral()?;
    if t.len() != l.ambient_dim() {
        return Err(Error::DimensionMismatch("target length".into()));
    }
    let rows = l.small_rows()?;
    let neg_t: Vec<i128> = to_i128(t)?.into_iter().map(|x| -x).collect();
    // greedy rounding gives the starting radius
    let mut cur = neg_t.clone();
    for (k, &c) in l.pivots().iter().enumerate() {
        let piv = rows[k][c] as i128;
        let x = (2 * -cur[c] + piv).div_euclid(2 * piv);
        for (y, &r) in cur[c..].iter_mut().zip(&rows[k][c..]) {
            *y += x * r as i128;
        }
    }
    let initial = cur.iter().try_fold(0u128, |a, &x| {
        x.unsigned_abs().checked_pow(pi).and_then(|v| a.checked_add(v))
    });
    let initial = initial.ok_or_else(|| Error::Overflow("initial CVP radius".into()))?;
    let radius = AtomicU64::new(bound_u64(initial)?);
    let best: Best = Mutex::new(None);
    let frame = Frame::new(&rows, l.pivots(), l.ambient_dim(), pi, budget);
    let bound = || radius.load(Ordering::Relaxed) as u128;
    let keep = |v: &[i128], n: u128, _: bool, _: &mut ()| offer(&best, &radius, v, n);
    frame.par_search(&neg_t, false, &bound, &|| (), &keep)?;
    let nodes = frame.check_budget()?;
    let (n, diff) = best.into_inner().expect("poisoned").expect("rounded vector is within the radius");
    let closest = diff.iter().zip(t).map(|(&d, ti)| BigInt::from(d) + ti).collect();
    Ok(CvpReport {
        p,
        value_pow: BigUint::from(n),
        closest,
        nodes,
    })
}

/// Every vector `v - t` with `v in L` and `||v - t||_p^p <= radius_pow`,
/// excluding the zero vector, sorted lexicographically. With `t = None` the
/// result is the set of nonzero lattice vectors in the ball.
pub fn short_vectors(
    l: &IntegerLattice,
    t: Option<&[BigInt]>,
    p: NormSpec,
    radius_pow: u128,
    budget: Budget,
) -> Result<Vec<Vec<BigInt>>> {
    let pi = p.require_integral()?;
    let rows = l.small_rows()?;
    let start: Vec<i128> = match t {
        Some(t) => to_i128(t)?.into_iter().map(|x| -x).collect(),
        None => vec![0; l.ambient_dim()],
    };
    let frame = Frame::new(&rows, l.pivots(), l.ambient_dim(), pi, budget);
    let bound = move || radius_pow;
    let collect = |v: &[i128], _: u128, _: bool, out: &mut Vec<Vec<i128>>| {
        if v.iter().any(|&x| x != 0) {
            out.push(v.to_vec());
        }
    };
    let parts = frame.par_search(&start, false, &bound, &Vec::new, &collect)?;
    frame.check_budget()?;
    let mut all: Vec<Vec<i128>> = parts.into_iter().flatten().collect();
    all.sort();
    Ok(all.iter().map(|v| to_big(v)).collect())
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplesReport {
    /// `true` iff `dist_p(L, a t)^p > threshold` for every nonzero integer `a`.
    pub holds: bool,
    /// `||t_perp||_2^2`, the squared distance from `t` to `span(L)`.
    #[serde_as(as = "DisplayFromStr")]
    pub perp_norm_sq: BigRational,
    /// Multiples `1..=alpha_checked` were checked by enumeration; larger ones
    /// are far by the orthogonal-component bound.
    pub alpha_checked: u64,
    /// Least checked `dist_p(L, a t)^p`.
    #[serde_as(as = "Option<DisplayFromStr>")]
    pub min_checked_pow: Option<BigUint>,
    /// A multiple that comes within the threshold, if any.
    pub witness_alpha: Option<u64>,
}

/// Decides whether every nonzero multiple of `t` is farther than the
/// threshold (given on `p`-th powers) from `L`.
///
/// For `v in L`, `||v - a t||_2 >= |a| ||t_perp||_2` where `t_perp` is the
/// component of `t` orthogonal to `span(L)`. Converting to `l_p`
/// (`||w||_p >= ||w||_2` for `p <= 2`, `||w||_p >= m^(1/p - 1/2) ||w||_2`
/// otherwise) bounds all large `|a|` at once; the remaining ones are
/// enumerated. `dist(L, -a t) = dist(L, a t)` covers negative multiples. If
/// `t` lies in `span(L)` some multiple lies in `L` and the answer is `false`.
pub fn multiples_far_from_lattice(
    l: &IntegerLattice,
    t: &[BigInt],
    p: NormSpec,
    threshold_pow: &BigRational,
    budget: Budget,
) -> Result<MultiplesReport> {
    let pi = p.require_integral()?;
    let m = l.ambient_dim();
    let g: &IntMatrix = l.basis_rows();
    let tt = BigRational::from_integer(dot(t, t));
    let (perp, coeffs) = if g.is_empty() {
        (tt, Vec::new())
    } else {
        let gram: IntMatrix = g.iter().map(|a| g.iter().map(|b| dot(a, b)).collect()).collect();
        let inv = rational_inverse(&gram).expect("independent basis");
        let b: Vec<BigRational> = g.iter().map(|a| BigRational::from_integer(dot(a, t))).collect();
        let x: Vec<BigRational> = inv
            .iter()
            .map(|row| row.iter().zip(&b).map(|(u, v)| u * v).sum())
            .collect();
        let proj: BigRational = x.iter().zip(&b).map(|(u, v)| u * v).sum();
        (tt - proj, x)
    };
    if perp.is_zero() {
        // the least a with a x integral puts a t in L
        let alpha = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        return Ok(MultiplesReport {
            holds: false,
            perp_norm_sq: perp,
            alpha_checked: 0,
            min_checked_pow: Some(BigUint::zero()),
            witness_alpha: Some(alpha.to_u64().unwrap_or(u64::MAX)),
        });
    }
    let thr2 = threshold_pow * threshold_pow;
    let mfac = if pi > 2 {
        BigRational::new(BigInt::one(), BigInt::from(m).pow(pi - 2))
    } else {
        BigRational::one()
    };
    let lower_sq = |a: u64| -> BigRational {
        // (|a|^p ||t_perp||^p m^(1 - p/2))^2
        BigRational::from_integer(BigInt::from(a).pow(2 * pi)) * perp.pow(pi as i32) * &mfac
    };
    let mut alpha0 = 1u64;
    while lower_sq(alpha0) <= thr2 {
        alpha0 = alpha0.checked_mul(2).ok_or_else(|| Error::Overflow("multiple bound".into()))?;
        if alpha0 > budget.limit() {
            return Err(budget.exceeded("multiples of the target", alpha0));
        }
    }
    // shrink to the least a with the bound in force
    let (mut lo, mut hi) = (alpha0 / 2, alpha0);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if lower_sq(mid) > thr2 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let checked = hi - 1;
    let mut min_pow: Option<BigUint> = None;
    for a in 1..=checked {
        let at: Vec<BigInt> = t.iter().map(|x| x * a).collect();
        let d = cvp_distance(l, &at, p, budget)?.value_pow;
        if min_pow.as_ref().is_none_or(|mp| d < *mp) {
            min_pow = Some(d.clone());
        }
        if BigRational::from_integer(BigInt::from(d)) <= *threshold_pow {
            return Ok(MultiplesReport {
                holds: false,
                perp_norm_sq: perp,
                alpha_checked: a,
                min_checked_pow: min_pow,
                witness_alpha: Some(a),
            });
        }
    }
    Ok(MultiplesReport {
        holds: true,
        perp_norm_sq: perp,
        alpha_checked: checked,
        min_checked_pow: min_pow,
        witness_alpha: None,
    })
}

/// Whether `v` has any odd coordinate.
pub fn is_odd(v: &[BigInt]) -> bool {
    v.iter().any(num_integer::Integer::is_odd)
}

/// `||v||_0`.
pub fn hamming_weight(v: &[BigInt]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}
