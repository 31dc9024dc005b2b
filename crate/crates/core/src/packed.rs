//! Packed vectors over `F_{p^e}` for the hot loops of the distance oracles.
//!
//! A vector of length `len` is stored as `e` digit planes. Plane `k` holds the
//! `k`-th base-`p` digit of every coordinate, one lane per coordinate. For
//! `p = 2` lanes are single bits and addition is XOR. For odd `p` every lane is
//! wide enough that the sum of two digits never reaches the lane's top bit,
//! which lets a carry-free add and a branch-free mod-`p` reduction run on whole
//! words at once.

use crate::field::{Elem, FiniteField};

#[derive(Clone, Debug)]
pub struct Packer {
    p: u64,
    e: usize,
    len: usize,
    lane: u32,
    lanes_per_word: usize,
    words_per_plane: usize,
    /// Low `lane - 1` bits of every lane.
    low: u128,
    /// Top bit of every lane.
    high: u128,
    /// `p` in every lane.
    p_lanes: u128,
    /// `2^(lane-1) - p` in every lane.
    bias: u128,
    /// Mask for the last, possibly partial, word of a plane.
    tail: u128,
}

impl Packer {
    pub fn new(field: &FiniteField, len: usize) -> Self {
        let p = field.characteristic();
        let e = field.degree() as usize;
        let lane = if p == 2 {
            1
        } else {
            // smallest width with 2^(lane-1) >= 2p - 1
            let need = 2 * p as u128 - 1;
            let mut w = 2u32;
            while (1u128 << (w - 1)) < need {
                w += 1;
            }
            w
        };
        let lanes_per_word = (128 / lane) as usize;
        let words_per_plane = len.div_ceil(lanes_per_word).max(1);
        let mut low = 0u128;
        let mut high = 0u128;
        let mut p_lanes = 0u128;
        let mut bias = 0u128;
        if lane > 1 {
            let top = 1u128 << (lane - 1);
            for i in 0..lanes_per_word {
                let s = i as u32 * lane;
                low |= (top - 1) << s;
                high |= top << s;
                p_lanes |= (p as u128) << s;
                bias |= (top - p as u128) << s;
            }
        }
        let used = len - (words_per_plane - 1) * lanes_per_word;
        let tail = if used * lane as usize >= 128 {
            u128::MAX
        } else {
            (1u128 << (used * lane as usize)) - 1
        };
        Packer {
            p,
            e,
            len,
            lane,
            lanes_per_word,
            words_per_plane,
            low,
            high,
            p_lanes,
            bias,
            tail,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of `u128` words in a packed vector.
    pub fn words(&self) -> usize {
        self.e * self.words_per_plane
    }

    pub fn zero(&self) -> Vec<u128> {
        vec![0; self.words()]
    }

    pub fn pack(&self, v: &[Elem]) -> Vec<u128> {
        debug_assert_eq!(v.len(), self.len);
        let mut out = self.zero();
        for (i, &x) in v.iter().enumerate() {
            let (w, s) = (i / self.lanes_per_word, (i % self.lanes_per_word) as u32 * self.lane);
            let mut x = x;
            for k in 0..self.e {
                let d = x % self.p;
                x /= self.p;
                out[k * self.words_per_plane + w] |= (d as u128) << s;
            }
        }
        out
    }

    pub fn unpack(&self, a: &[u128]) -> Vec<Elem> {
        let mask = if self.lane == 128 {
            u128::MAX
        } else {
            (1u128 << self.lane) - 1
        };
        (0..self.len)
            .map(|i| {
                let (w, s) = (i / self.lanes_per_word, (i % self.lanes_per_word) as u32 * self.lane);
                let mut x = 0u64;
                for k in (0..self.e).rev() {
                    let d = ((a[k * self.words_per_plane + w] >> s) & mask) as u64;
                    x = x * self.p + d;
                }
                x
            })
            .collect()
    }

    #[inline]
    fn add_word(&self, a: u128, b: u128) -> u128 {
        if self.lane == 1 {
            return a ^ b;
        }
        let s = a + b;
        let ge = (s + self.bias) & self.high;
        // one in every lane that reached p, then times p
        let sub = (ge >> (self.lane - 1)) * self.p as u128;
        s - sub
    }

    #[inline]
    pub fn add_assign(&self, a: &mut [u128], b: &[u128]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x = self.add_word(*x, y);
        }
    }

    /// `out = a + b`.
    #[inline]
    pub fn add_into(&self, out: &mut [u128], a: &[u128], b: &[u128]) {
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = self.add_word(x, y);
        }
    }

    pub fn neg(&self, a: &[u128]) -> Vec<u128> {
        if self.lane == 1 {
            return a.to_vec();
        }
        a.iter()
            .enumerate()
            .map(|(i, &x)| {
                let mask = if i % self.words_per_plane == self.words_per_plane - 1 {
                    self.tail
                } else {
                    u128::MAX
                };
                // p - x, then lanes equal to p become 0
                self.add_word((self.p_lanes & mask) - x, 0)
            })
            .collect()
    }

    pub fn is_zero(a: &[u128]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self, a: &[u128]) -> usize {
        let mut total = 0;
        for w in 0..self.words_per_plane {
            let mut any = 0u128;
            for k in 0..self.e {
                any |= a[k * self.words_per_plane + w];
            }
            total += if self.lane == 1 {
                any.count_ones()
            } else {
                ((any + self.low) & self.high).count_ones()
            } as usize;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_field_arithmetic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, e) in [(2, 1), (2, 3), (3, 1), (3, 2), (5, 1), (7, 2), (13, 1), (65537, 1)] {
            let f = FiniteField::new(p, e).unwrap();
            for len in [1usize, 5, 63, 64, 65, 130, 300] {
                let pk = Packer::new(&f, len);
                for _ in 0..20 {
                    let a: Vec<Elem> = (0..len)
                        .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(0..f.order()) })
                        .collect();
                    let b: Vec<Elem> = (0..len).map(|_| rng.gen_range(0..f.order())).collect();
                    let (pa, pb) = (pk.pack(&a), pk.pack(&b));
                    assert_eq!(pk.unpack(&pa), a);
                    let mut s = pa.clone();
                    pk.add_assign(&mut s, &pb);
                    let want: Vec<Elem> = a.iter().zip(&b).map(|(&x, &y)| f.add(x, y)).collect();
                    assert_eq!(pk.unpack(&s), want);
                    let want_neg: Vec<Elem> = a.iter().map(|&x| f.neg(x)).collect();
                    assert_eq!(pk.unpack(&pk.neg(&pa)), want_neg);
                    assert_eq!(pk.weight(&pa), crate::linalg::weight(&a));
                    let mut z = pa.clone();
                    pk.add_assign(&mut z, &pk.neg(&pa));
                    assert!(Packer::is_zero(&z));
                }
            }
        }
    }
}
