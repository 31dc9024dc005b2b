//! Exact distance oracles for linear codes.
//!
//! Three strategies, each exhaustive:
//!
//! * message enumeration walks all `q^n` codewords with an `F_p`-digit
//!   odometer, one packed vector addition per step;
//! * the split syndrome search finds a vector `u + v` with `H(u + v) = s` by
//!   tabulating `H u` for every `u` of weight at most `ceil(w/2)` and probing
//!   with every `v` of weight at most `floor(w/2)`. For `s = 0` the `u` side is
//!   normalized (leading entry one, or position zero equal to one when the code
//!   is cyclic), which divides the table by `q - 1` or by `m`;
//! * ball listing walks `B_{q,m}(r)` depth-first and keeps the vectors whose
//!   syndrome matches.
//!
//! Work is split across rayon workers; every result is a min, a sum or an
//! existence flag, so it does not depend on the number of workers.

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::ball::HammingBall;
use crate::budget::Budget;
use crate::code::LinearCode;
use crate::error::Result;
use crate::field::Elem;
use crate::linalg;
use crate::packed::Packer;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Trivial,
    MessageEnumeration,
    SyndromeSearch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceReport {
    /// `None` stands for `+inf` (the zero code).
    pub distance: Option<usize>,
    pub strategy: Strategy,
    /// Estimated elementary steps spent.
    pub work: u128,
}

fn saturating_pow(base: u64, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

fn to_u128(x: num_bigint::BigUint) -> u128 {
    u128::try_from(x).unwrap_or(u128::MAX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Normalize {
    None,
    Leading,
    Position0,
}

/// Size of the `u` table for split weight `a`.
fn table_size(code: &LinearCode, a: usize, norm: Normalize) -> u128 {
    let f = code.field();
    let m = code.len();
    let q1 = f.order() - 1;
    let mut total: u128 = 0;
    for i in 1..=a.min(m) {
        let t = match norm {
            Normalize::None => to_u128(HammingBall::new(f, m, i).shell_size(i)),
            Normalize::Leading => to_u128(HammingBall::new(f, m, i).shell_size(i)) / q1 as u128,
            Normalize::Position0 => to_u128(
                crate::ball::binomial(m - 1, i - 1) * num_bigint::BigUint::from(q1).pow(i as u32 - 1),
            ),
        };
        total = total.saturating_add(t);
    }
    total
}

fn split_cost(code: &LinearCode, w: usize, norm: Normalize) -> u128 {
    let b = w / 2;
    let a = w - b;
    let probes = to_u128(HammingBall::new(code.field(), code.len(), b).size());
    table_size(code, a, norm).saturating_add(probes)
}

fn message_cost(code: &LinearCode) -> u128 {
    saturating_pow(code.field().order(), code.dimension())
}

/// Weight of the lightest basis codeword after row reduction; an upper bound
/// on the minimum distance.
fn distance_upper_bound(code: &LinearCode) -> usize {
    let mut rows = linalg::transpose(code.generator(), code.dimension());
    linalg::rref(code.field(), &mut rows, code.len());
    rows.iter().map(|r| linalg::weight(r)).min().unwrap_or(0)
}

fn normalization(code: &LinearCode) -> Normalize {
    if code.len() > 1 && code.is_cyclic() {
        Normalize::Position0
    } else {
        Normalize::Leading
    }
}

/// Minimum Hamming weight of a nonzero codeword.
pub fn min_distance(code: &LinearCode, budget: Budget) -> Result<DistanceReport> {
    let n = code.dimension();
    if n == 0 {
        return Ok(DistanceReport {
            distance: None,
            strategy: Strategy::Trivial,
            work: 0,
        });
    }
    if n == code.len() {
        return Ok(DistanceReport {
            distance: Some(1),
            strategy: Strategy::Trivial,
            work: 0,
        });
    }
    let ub = distance_upper_bound(code);
    let norm = normalization(code);
    let split_total = (1..=ub).fold(0u128, |acc, w| acc.saturating_add(split_cost(code, w, norm)));
    let msg = message_cost(code);
    if msg <= split_total {
        budget.check("message enumeration", msg)?;
        let d = message_fold(code, None, usize::MAX, |best, w| if w > 0 { best.min(w) } else { best }, usize::min);
        return Ok(DistanceReport {
            distance: Some(d),
            strategy: Strategy::MessageEnumeration,
            work: msg,
        });
    }
    budget.check("split syndrome search", split_total)?;
    let mut work = 0u128;
    for w in 1..ub {
        work = work.saturating_add(split_cost(code, w, norm));
        if split_search(code, None, w, norm).is_some() {
            return Ok(DistanceReport {
                distance: Some(w),
                strategy: Strategy::SyndromeSearch,
                work,
            });
        }
    }
    Ok(DistanceReport {
        distance: Some(ub),
        strategy: Strategy::SyndromeSearch,
        work,
    })
}

/// A nonzero codeword of weight at most `w`, if one exists.
pub fn codeword_of_weight_at_most(
    code: &LinearCode,
    w: usize,
    budget: Budget,
) -> Result<Option<Vec<Elem>>> {
    if code.dimension() == 0 || w == 0 {
        return Ok(None);
    }
    let norm = normalization(code);
    let split = split_cost(code, w, norm);
    let msg = message_cost(code);
    if msg <= split {
        budget.check("message enumeration", msg)?;
        let best = message_fold_with(
            code,
            None,
            None,
            |best: Option<Vec<u128>>, cw: &[u128], wt: usize| {
                if best.is_none() && wt > 0 && wt <= w {
                    Some(cw.to_vec())
                } else {
                    best
                }
            },
            |a, b| a.or(b),
        );
        let packer = Packer::new(code.field(), code.len());
        return Ok(best.map(|b| packer.unpack(&b)));
    }
    budget.check("split syndrome search", split)?;
    Ok(split_search(code, None, w, norm))
}

/// `true` iff every nonzero codeword has weight at least `d`.
pub fn min_distance_at_least(code: &LinearCode, d: usize, budget: Budget) -> Result<bool> {
    if d <= 1 {
        return Ok(true);
    }
    Ok(codeword_of_weight_at_most(code, d - 1, budget)?.is_none())
}

/// `min_{c in C} wt(t - c)`.
pub fn nearest_codeword_distance(code: &LinearCode, t: &[Elem], budget: Budget) -> Result<DistanceReport> {
    let f = code.field();
    let trivial = |d| DistanceReport {
        distance: Some(d),
        strategy: Strategy::Trivial,
        work: 0,
    };
    if t.len() != code.len() {
        return Err(crate::Error::DimensionMismatch(format!(
            "target of length {} for a code of length {}",
            t.len(),
            code.len()
        )));
    }
    if code.contains(t) {
        return Ok(trivial(0));
    }
    if code.dimension() == 0 {
        return Ok(trivial(linalg::weight(t)));
    }
    let ub = linalg::weight(t);
    let split_total = (1..=ub).fold(0u128, |acc, w| acc.saturating_add(split_cost(code, w, Normalize::None)));
    let msg = message_cost(code);
    if msg <= split_total {
        budget.check("message enumeration", msg)?;
        let packer = Packer::new(f, code.len());
        let neg_t: Vec<Elem> = t.iter().map(|&x| f.neg(x)).collect();
        let offset = packer.pack(&neg_t);
        let d = message_fold_with(code, Some(&offset), usize::MAX, |best, _, w| best.min(w), usize::min);
        return Ok(DistanceReport {
            distance: Some(d),
            strategy: Strategy::MessageEnumeration,
            work: msg,
        });
    }
    budget.check("split syndrome search", split_total)?;
    let mut work = 0u128;
    for w in 1..ub {
        work = work.saturating_add(split_cost(code, w, Normalize::None));
        if split_search(code, Some(t), w, Normalize::None).is_some() {
            return Ok(DistanceReport {
                distance: Some(w),
                strategy: Strategy::SyndromeSearch,
                work,
            });
        }
    }
    Ok(DistanceReport {
        distance: Some(ub),
        strategy: Strategy::SyndromeSearch,
        work,
    })
}

/// Every vector `e` with `wt(e) <= r` and `H e = H t` (with `t = 0` when
/// `target` is `None`), in ball order. For `t = 0` the zero vector is
/// omitted, so the result is the set of nonzero codewords of weight `<= r`.
pub fn syndrome_ball_list(
    code: &LinearCode,
    target: Option<&[Elem]>,
    r: usize,
    budget: Budget,
) -> Result<Vec<Vec<Elem>>> {
    let ball = HammingBall::new(code.field(), code.len(), r);
    let size = ball.size();
    budget.check("ball listing", to_u128(size))?;
    let walker = Walker::new(code, true);
    let start = match target {
        Some(t) => walker.packer.pack(&code.syndrome(t)),
        None => walker.packer.zero(),
    };
    let m = code.len();
    let q = code.field().order();
    let mut out = Vec::new();
    if Packer::is_zero(&start) && target.is_some() {
        out.push(vec![0; m]);
    }
    let mut tasks: Vec<Vec<(usize, Elem)>> = Vec::new();
    if r >= 1 {
        for pos in 0..m {
            for a in 1..q {
                tasks.push(vec![(pos, a)]);
            }
        }
    }
    let found: Vec<Vec<Vec<Elem>>> = tasks
        .par_iter()
        .map(|seed| {
            let mut hits = Vec::new();
            walker.walk_from(seed, &start, r, Normalize::None, &mut |cur, syn| {
                if Packer::is_zero(syn) {
                    let mut v = vec![0; m];
                    for &(i, x) in cur {
                        v[i] = x;
                    }
                    hits.push(v);
                }
                false
            });
            hits
        })
        .collect();
    out.extend(found.into_iter().flatten());
    // restore ball order: weight, support, values
    out.sort_by_key(|a| ball_key(a));
    Ok(out)
}

fn ball_key(v: &[Elem]) -> (usize, Vec<usize>, Vec<Elem>) {
    let support: Vec<usize> = (0..v.len()).filter(|&i| v[i] != 0).collect();
    let values = support.iter().map(|&i| v[i]).collect();
    (support.len(), support, values)
}

// ---------------------------------------------------------------------------
// message enumeration

fn message_fold<R, S, C>(code: &LinearCode, offset: Option<&[u128]>, init: R, step: S, combine: C) -> R
where
    R: Clone + Send + Sync,
    S: Fn(R, usize) -> R + Sync,
    C: Fn(R, R) -> R + Sync,
{
    message_fold_with(code, offset, init, |r, _, w| step(r, w), combine)
}

fn message_fold_with<R, S, C>(code: &LinearCode, offset: Option<&[u128]>, init: R, step: S, combine: C) -> R
where
    R: Clone + Send + Sync,
    S: Fn(R, &[u128], usize) -> R + Sync,
    C: Fn(R, R) -> R + Sync,
{
    let f = code.field();
    let p = f.characteristic();
    let e = f.degree();
    let packer = Packer::new(f, code.len());
    let mut gens: Vec<Vec<u128>> = Vec::new();
    for col in code.generator_columns() {
        for k in 0..e {
            let beta = p.pow(k);
            gens.push(packer.pack(&linalg::scale(f, &col, beta)));
        }
    }
    let digits = gens.len();
    let mut top = 0;
    while top < digits && saturating_pow(p, top) < 256 {
        top += 1;
    }
    let low = digits - top;
    let chunks = saturating_pow(p, top) as u64;
    let base = offset.map_or_else(|| packer.zero(), <[u128]>::to_vec);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut cur = base.clone();
            let mut c = chunk;
            for g in &gens[low..] {
                for _ in 0..c % p {
                    packer.add_assign(&mut cur, g);
                }
                c /= p;
            }
            let mut acc = init.clone();
            let mut dig = vec![0u64; low];
            loop {
                let w = packer.weight(&cur);
                acc = step(acc, &cur, w);
                let mut j = 0;
                loop {
                    if j == low {
                        return acc;
                    }
                    packer.add_assign(&mut cur, &gens[j]);
                    dig[j] += 1;
                    if dig[j] == p {
                        dig[j] = 0;
                        j += 1;
                    } else {
                        break;
                    }
                }
            }
        })
        .reduce(|| init.clone(), &combine)
}

// ---------------------------------------------------------------------------
// split syndrome search

struct Walker {
    packer: Packer,
    m: usize,
    q: u64,
    words: usize,
    /// `table[(pos * (q - 1) + a - 1) * words ..]` packs `a H[:, pos]`, or its
    /// negation.
    table: Vec<u128>,
}

impl Walker {
    fn new(code: &LinearCode, negate: bool) -> Walker {
        let f = code.field();
        let h = code.parity_check();
        let m = code.len();
        let q = f.order();
        let packer = Packer::new(f, h.len());
        let words = packer.words();
        let mut table = Vec::with_capacity(m * (q as usize - 1) * words);
        for pos in 0..m {
            let col: Vec<Elem> = h.iter().map(|r| r[pos]).collect();
            for a in 1..q {
                let mut s = linalg::scale(f, &col, a);
                if negate {
                    s = s.iter().map(|&x| f.neg(x)).collect();
                }
                table.extend(packer.pack(&s));
            }
        }
        Walker {
            packer,
            m,
            q,
            words,
            table,
        }
    }

    fn column(&self, pos: usize, a: Elem) -> &[u128] {
        let i = (pos * (self.q as usize - 1) + a as usize - 1) * self.words;
        &self.table[i..i + self.words]
    }

    /// Depth-first walk over sparse vectors extending `seed` with positions
    /// after its last one, up to weight `max_w`. `visit` sees the support
    /// list and the running syndrome `start + sum`; returning `true` stops.
    fn walk_from(
        &self,
        seed: &[(usize, Elem)],
        start: &[u128],
        max_w: usize,
        norm: Normalize,
        visit: &mut dyn FnMut(&[(usize, Elem)], &[u128]) -> bool,
    ) -> bool {
        let words = self.words;
        let mut buf = vec![0u128; (max_w + 1) * words];
        buf[..words].copy_from_slice(start);
        let mut cur: Vec<(usize, Elem)> = Vec::with_capacity(max_w);
        for &(pos, a) in seed {
            let depth = cur.len();
            let (lo, hi) = buf.split_at_mut((depth + 1) * words);
            self.packer.add_into(&mut hi[..words], &lo[depth * words..], self.column(pos, a));
            cur.push((pos, a));
        }
        let next = seed.last().map_or(0, |&(p, _)| p + 1);
        self.rec(&mut cur, &mut buf, next, max_w, norm, visit)
    }

    fn rec(
        &self,
        cur: &mut Vec<(usize, Elem)>,
        buf: &mut [u128],
        next: usize,
        max_w: usize,
        norm: Normalize,
        visit: &mut dyn FnMut(&[(usize, Elem)], &[u128]) -> bool,
    ) -> bool {
        let depth = cur.len();
        let words = self.words;
        if visit(cur, &buf[depth * words..(depth + 1) * words]) {
            return true;
        }
        if depth == max_w {
            return false;
        }
        let (pos_end, a_end) = match (depth, norm) {
            (0, Normalize::Position0) => (1.min(self.m), 2),
            (0, Normalize::Leading) => (self.m, 2),
            _ => (self.m, self.q),
        };
        for pos in next..pos_end {
            for a in 1..a_end {
                {
                    let (lo, hi) = buf.split_at_mut((depth + 1) * words);
                    self.packer
                        .add_into(&mut hi[..words], &lo[depth * words..], self.column(pos, a));
                }
                cur.push((pos, a));
                let stop = self.rec(cur, buf, pos + 1, max_w, norm, visit);
                cur.pop();
                if stop {
                    return true;
                }
            }
        }
        false
    }
}

/// A vector `x = u + v` of weight at most `w`, `x != 0`, with `H x = H t`
/// (`t = 0` if `target` is `None`). For a target the result is the error
/// vector `x`, so `t - x` is a codeword.
fn split_search(code: &LinearCode, target: Option<&[Elem]>, w: usize, norm: Normalize) -> Option<Vec<Elem>> {
    let f = code.field();
    let m = code.len();
    let b = w / 2;
    let a = w - b;
    let store = Walker::new(code, false);
    let probe = Walker::new(code, true);

    let mut heads: FxHashMap<Box<[u128]>, u32> = FxHashMap::default();
    let mut next: Vec<u32> = Vec::new();
    let mut entries: Vec<(usize, Elem)> = Vec::new();
    let mut offsets: Vec<u32> = vec![0];
    let zero = store.packer.zero();
    store.walk_from(&[], &zero, a, norm, &mut |cur, syn| {
        if cur.is_empty() {
            return false;
        }
        let id = offsets.len() as u32 - 1;
        entries.extend_from_slice(cur);
        offsets.push(entries.len() as u32);
        let prev = heads.insert(syn.to_vec().into_boxed_slice(), id);
        next.push(prev.unwrap_or(u32::MAX));
        false
    });

    let start = match target {
        Some(t) => probe.packer.pack(&code.syndrome(t)),
        None => zero.clone(),
    };
    let u_of = |id: u32| &entries[offsets[id as usize] as usize..offsets[id as usize + 1] as usize];
    let combine = |u: &[(usize, Elem)], v: &[(usize, Elem)]| -> Option<Vec<Elem>> {
        let mut x = vec![0; m];
        for &(i, val) in u.iter().chain(v) {
            x[i] = f.add(x[i], val);
        }
        (x.iter().any(|&e| e != 0)).then_some(x)
    };
    let lookup = |v: &[(usize, Elem)], syn: &[u128]| -> Option<Vec<Elem>> {
        let mut id = *heads.get(syn)?;
        loop {
            if let Some(x) = combine(u_of(id), v) {
                return Some(x);
            }
            id = next[id as usize];
            if id == u32::MAX {
                return None;
            }
        }
    };
    if let Some(x) = lookup(&[], &start) {
        return Some(x);
    }
    if b == 0 {
        return None;
    }
    let seeds: Vec<(usize, Elem)> = (0..m).flat_map(|pos| (1..f.order()).map(move |a| (pos, a))).collect();
    seeds.par_iter().find_map_any(|&seed| {
        let mut found = None;
        probe.walk_from(&[seed], &start, b, Normalize::None, &mut |v, syn| {
            found = lookup(v, syn);
            found.is_some()
        });
        found
    })
}
