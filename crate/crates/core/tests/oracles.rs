//! Exact oracles against naive enumeration on small random inputs.

use gadgetforge::distance::{min_distance, nearest_codeword_distance};
use gadgetforge::lattice::{cvp_distance, lambda1, IntegerLattice, NormSpec};
use gadgetforge::{Budget, Elem, FiniteField, LinearCode};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

const BUDGET: Budget = Budget(1 << 26);

fn messages(q: u64, n: usize) -> impl Iterator<Item = Vec<Elem>> {
    (0..q.pow(n as u32)).map(move |mut i| {
        (0..n)
            .map(|_| {
                let d = i % q;
                i /= q;
                d
            })
            .collect()
    })
}

fn naive_distance(c: &LinearCode, t: Option<&[Elem]>) -> Option<usize> {
    let f = c.field();
    let q = f.order();
    messages(q, c.dimension())
        .map(|x| c.encode(&x))
        .filter_map(|w| match t {
            None => (w.iter().any(|&a| a != 0)).then(|| w.iter().filter(|&&a| a != 0).count()),
            Some(t) => Some(w.iter().zip(t).filter(|(a, b)| a != b).count()),
        })
        .min()
}

fn code_strategy() -> impl Strategy<Value = (u64, u32, usize, Vec<Vec<Elem>>, Vec<Elem>)> {
    prop_oneof![Just((2u64, 1u32)), Just((3, 1)), Just((2, 2))].prop_flat_map(|(p, e)| {
        let q = p.pow(e);
        (2usize..=7).prop_flat_map(move |m| {
            (
                Just(p),
                Just(e),
                Just(m),
                prop::collection::vec(prop::collection::vec(0..q, m), 1..=3),
                prop::collection::vec(0..q, m),
            )
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn code_distances_match_naive((p, e, m, vs, t) in code_strategy()) {
        let f = FiniteField::new(p, e).unwrap();
        let c = LinearCode::from_spanning_vectors(&f, m, &vs).unwrap();
        prop_assert_eq!(min_distance(&c, BUDGET).unwrap().distance, naive_distance(&c, None));
        prop_assert_eq!(
            nearest_codeword_distance(&c, &t, BUDGET).unwrap().distance,
            naive_distance(&c, Some(&t))
        );
    }

    #[test]
    fn lattice_oracles_match_box_search(
        gens in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..=3),
        t in prop::collection::vec(-5i64..=5, 3),
        p in 1u32..=3,
    ) {
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let l = IntegerLattice::from_generators(3, gens.iter().map(|g| big(g)).collect()).unwrap();
        prop_assume!(l.rank() > 0);
        let spec = NormSpec::integral(p).unwrap();
        let norm = |v: &[i64]| v.iter().map(|x| x.unsigned_abs().pow(p)).sum::<u64>();
        // every vector shorter than a basis vector has coordinates bounded by
        // that vector's norm
        let bound: u64 = l.basis_rows().iter().map(|r| {
            r.iter().map(|x| x.to_i64().unwrap().unsigned_abs().pow(p)).sum::<u64>()
        }).min().unwrap();
        // a closest vector v has ||v - t|| <= ||t||, so |v_i| <= |t_i| + ||t||
        let root = |x: u64| (x as f64).powf(1.0 / p as f64).ceil() as i64;
        let r = root(bound).max(5 + root(norm(&t)));
        let mut best_l1: Option<u64> = None;
        let mut best_cvp: Option<u64> = None;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    let v = [a, b, c];
                    if !l.contains(&big(&v)) {
                        continue;
                    }
                    if v != [0, 0, 0] {
                        let n = norm(&v);
                        best_l1 = Some(best_l1.map_or(n, |x| x.min(n)));
                    }
                    let d = [a - t[0], b - t[1], c - t[2]];
                    let n = norm(&d);
                    best_cvp = Some(best_cvp.map_or(n, |x| x.min(n)));
                }
            }
        }
        let got = lambda1(&l, spec, BUDGET).unwrap().value_pow.unwrap();
        prop_assert_eq!(got.to_u64(), best_l1);
        let cvp = cvp_distance(&l, &big(&t), spec, BUDGET).unwrap();
        prop_assert_eq!(cvp.value_pow.to_u64(), best_cvp);
        prop_assert!(l.contains(&cvp.closest));
    }
}
