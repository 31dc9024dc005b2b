//! CVP_p -> SVP_p through a locally dense lattice and a random hyperplane
//! modulo a prime.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use super::{
    apply_gates, json_digest, lattice_digest, sample_hyperplane, sparsify_lattice, tool_version, CvpInstance, GateCheck, GatePolicy,
    ReductionReport, Sparsifier, SvpInstance,
};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gadgets::{bounded_pow, LocallyDenseLattice};
use crate::lattice::enumerate::short_vectors;
use crate::lattice::{IntMatrix, IntegerLattice};
use crate::primes::{is_prime, next_prime_above};
use crate::rng;

/// Attempts at finding a prime in the paper's interval.
const RHO_RETRIES: usize = 64;

#[derive(Clone, Debug, Default)]
pub struct CvpSvpOptions {
    /// Prime modulus used instead of one drawn from the paper's interval.
    pub rho: Option<u64>,
    pub policy: GatePolicy,
    pub budget: Option<Budget>,
    pub timing: bool,
}

/// `(100 X, 200 X]` with `X = (2m(1 + d))^(d^p)`, when it is small enough to
/// write down.
pub fn paper_rho_interval(m: usize, d: u64, p: u32) -> Option<(BigUint, BigUint)> {
    let base = BigUint::from(2 * m as u64 * (1 + d));
    let exp = d.checked_pow(p)?;
    let x = bounded_pow(&base, exp)?;
    Some((&x * 100u32, &x * 200u32))
}

fn sample_rho(m: usize, d: u64, p: u32, seed: u64) -> Result<u64> {
    let (lo, hi) = paper_rho_interval(m, d, p)
        .ok_or_else(|| Error::PaperScaleInfeasible("rho interval; pass an explicit rho".into()))?;
    let (lo, hi) = match (lo.to_u64(), hi.to_u64()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::PaperScaleInfeasible(format!(
                "rho interval ({lo}, {hi}] exceeds 64 bits; pass an explicit rho"
            )))
        }
    };
    sample_prime(lo, hi, &mut rng::stream(seed, "cvp-to-svp/rho"))
}

/// A prime in `(lo, hi]`: jump to a uniform point, take the next prime,
/// retry when it falls outside.
pub(crate) fn sample_prime(lo: u64, hi: u64, r: &mut impl Rng) -> Result<u64> {
    if hi <= lo {
        return Err(Error::InvalidParameter(format!("empty interval ({lo}, {hi}]")));
    }
    for _ in 0..RHO_RETRIES {
        let start = r.gen_range(lo + 1..=hi);
        if let Some(q) = next_prime_above(start - 1) {
            if q <= hi {
                return Ok(q);
            }
        }
    }
    Err(Error::Refused(format!("no prime found in ({lo}, {hi}] after {RHO_RETRIES} tries")))
}

/// `L_int`, generated by the columns of `(B 0 -t ; 0 A -s ; 0 0 1)`.
pub fn cvp_intermediate_lattice(inst: &CvpInstance, gadget: &LocallyDenseLattice) -> Result<IntegerLattice> {
    let a = gadget.lattice()?;
    let s = gadget.target_big();
    let (m, mp) = (inst.m, s.len());
    let dim = m + mp + 1;
    let n = inst.basis.first().map_or(0, Vec::len);
    let mut cols: IntMatrix = Vec::with_capacity(n + a.rank() + 1);
    for j in 0..n {
        let mut c: Vec<BigInt> = inst.basis.iter().map(|r| r[j].clone()).collect();
        c.resize(dim, BigInt::zero());
        cols.push(c);
    }
    for b in a.basis_rows() {
        let mut c = vec![BigInt::zero(); m];
        c.extend(b.iter().cloned());
        c.push(BigInt::zero());
        cols.push(c);
    }
    let mut last: Vec<BigInt> = inst.target.iter().map(|x| -x).collect();
    last.extend(s.iter().map(|x| -x));
    last.push(BigInt::one());
    cols.push(last);
    IntegerLattice::from_generators(dim, cols)
}

pub fn cvp_to_svp(
    inst: &CvpInstance,
    gadget: &LocallyDenseLattice,
    seed: u64,
    opts: &CvpSvpOptions,
) -> Result<(SvpInstance, ReductionReport)> {
    let clock = Instant::now();
    let budget = opts.budget.unwrap_or_else(Budget::from_env);
    inst.validate()?;
    let gp = &gadget.params;
    if gp.p != inst.p {
        return Err(Error::InvalidParameter(format!("instance p = {}, gadget p = {}", inst.p, gp.p)));
    }
    let p = inst.p.require_integral()?;
    let pi = p as i32;
    let k = BigRational::from_integer(inst.k.into());
    let gk = &inst.gamma * &k;
    if gk != BigRational::from_integer(gp.d.into()) {
        return Err(Error::InvalidParameter(format!("gadget d = {} differs from gamma k = {gk}", gp.d)));
    }
    let gamma_prime = gp.gamma_prime.clone();
    let k_out = &gk / &gamma_prime;
    let threshold_pow = k_out.pow(pi);
    let ratio = (&inst.gamma / &gamma_prime).pow(pi);
    let lhs = &gp.alpha_pow * inst.gamma.pow(pi);
    let two = BigRational::from_integer(2.into());
    let gates = vec![
        GateCheck::new(
            "alpha^p gamma^p <= (gamma/gamma')^p - 2",
            lhs <= &ratio - &two,
            format!("{lhs} vs {}", &ratio - &two),
        ),
        GateCheck::new("k' integral", k_out.is_integer(), format!("k' = {k_out}")),
    ];
    apply_gates(opts.policy, &gates)?;

    let a = gadget.lattice()?;
    let s = gadget.target_big();
    let (m, mp) = (inst.m, s.len());
    let dim = m + mp + 1;
    let n = inst.basis.first().map_or(0, Vec::len);
    let l_int = cvp_intermediate_lattice(inst, gadget)?;

    let mut notes = Vec::new();
    if gp.scale_override {
        notes.push("gadget built from a scale override".into());
    }
    let rho = match opts.rho {
        Some(r) => {
            if !is_prime(r) {
                return Err(Error::InvalidParameter(format!("rho = {r} is not prime")));
            }
            notes.push(format!("rho = {r} supplied; NO side is checked per instance, not inherited"));
            r
        }
        None => sample_rho(m, gp.d, p, seed)?,
    };
    let v = sample_hyperplane(rho, dim, &mut rng::stream(seed, "cvp-to-svp/v"));
    let rho_big = BigInt::from(rho);
    let l_final = sparsify_lattice(&l_int, &rho_big, &v)?;

    // YES side: (B x - t, A y - s, 1) with A y the first gadget point in
    // lexicographic order
    let mut witness = None;
    let mut survived = None;
    if let Some(e1) = inst.witness_error()? {
        let kp = BigUint::from(inst.k).pow(p);
        if inst.p.pow_norm(&e1)? > kp {
            return Err(Error::Schema("instance witness is farther than k".into()));
        }
        let r = gp.radius_pow().floor().to_integer().to_u128().unwrap_or(u128::MAX);
        match short_vectors(&a, Some(&s), inst.p, r, budget) {
            Ok(list) => {
                let e2 = list.into_iter().next().or_else(|| a.contains(&s).then(|| vec![BigInt::zero(); mp]));
                match e2 {
                    Some(e2) => {
                        let mut z = e1;
                        z.extend(e2);
                        z.push(BigInt::one());
                        debug_assert!(l_int.contains(&z));
                        let ip: BigInt = v.iter().zip(&z).map(|(a, b)| a * b).sum();
                        let ok = (ip % &rho_big).is_zero();
                        survived = Some(ok);
                        if ok {
                            witness = Some(z);
                        }
                    }
                    None => notes.push("no gadget point within alpha d of s".into()),
                }
            }
            Err(e) => notes.push(format!("gadget witness search skipped: {e}")),
        }
    }

    let out = SvpInstance {
        p: inst.p,
        m: dim,
        basis: l_final.basis_columns(),
        threshold_pow,
        gamma: gamma_prime,
        label: inst.label,
        witness,
        certificate: None,
    };
    let dimensions = BTreeMap::from([
        ("m".to_string(), m),
        ("n".to_string(), n),
        ("m_prime".to_string(), mp),
        ("n_prime".to_string(), a.rank()),
        ("intermediate_rank".to_string(), l_int.rank()),
        ("final_rank".to_string(), l_final.rank()),
    ]);
    let report = ReductionReport {
        reduction: "cvp-to-svp".into(),
        tool_version: tool_version(),
        seed,
        input_digest: json_digest(inst),
        gadget_digest: json_digest(gadget),
        intermediate_digest: lattice_digest(&l_int),
        output_digest: json_digest(&out),
        gates,
        k_in: inst.k.to_string(),
        k_out: k_out.to_string(),
        dimensions,
        sparsifier: Sparsifier::Lattice {
            rho: rho_big,
            rho_overridden: opts.rho.is_some(),
            v,
        },
        witness_survived: survived,
        collapsed: l_final.rank() == 0,
        notes,
        wall_clock_ms: opts.timing.then(|| clock.elapsed().as_millis() as u64),
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_is_tiny_only_for_tiny_parameters() {
        let (lo, hi) = paper_rho_interval(1, 1, 1).unwrap();
        assert_eq!(lo, BigUint::from(400u32));
        assert_eq!(hi, BigUint::from(800u32));
        assert!(paper_rho_interval(5, 4, 2).unwrap().0 > BigUint::from(u64::MAX));
        let q = sample_rho(1, 1, 1, 9).unwrap();
        assert!(is_prime(q) && (401..=800).contains(&q));
        assert!(matches!(sample_rho(5, 4, 2, 9), Err(Error::PaperScaleInfeasible(_))));
    }
}
