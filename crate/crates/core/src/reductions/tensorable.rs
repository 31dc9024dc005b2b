//! NCP_2 -> SVP_p with an output lattice that tensors well: the code part is
//! doubled so every short vector is either heavy or even.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::cvp_svp::sample_prime;
use super::{
    apply_gates, json_digest, lattice_digest, sample_hyperplane, sparsify_lattice, tool_version, GateCheck,
    GatePolicy, NcpInstance, ReductionReport, Sparsifier, SvpInstance,
};
use crate::ball::binomial;
use crate::budget::Budget;
use crate::distance::syndrome_ball_list;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::gadgets::{build_bch_construction_a, BchLattice};
use crate::lattice::{construction_a, IntMatrix, IntegerLattice, NormSpec};
use crate::linalg;
use crate::rng;

#[derive(Clone, Debug)]
pub struct TensorableOptions {
    /// Relative gadget radius, in `(1/2 + 2^-p, 1)` with `alpha d` integral.
    pub alpha: BigRational,
    /// Tensor exponent the output is meant for.
    pub c: u32,
    /// BCH length `2^r - 1`. The paper's length is never materializable, so
    /// this is required.
    pub r: Option<u32>,
    pub rho: Option<u64>,
    pub policy: GatePolicy,
    pub budget: Option<Budget>,
    pub timing: bool,
}

/// `k'^p = 2^p k + alpha d + 1`.
pub fn tensorable_threshold_pow(p: u32, k: usize, alpha_d: usize) -> BigUint {
    (BigUint::one() << p) * k + alpha_d + 1u32
}

fn check_ranges(inst: &NcpInstance, p: NormSpec, opts: &TensorableOptions) -> Result<(u32, usize, usize)> {
    if inst.q != 2 {
        return Err(Error::InvalidParameter(format!("needs a binary instance, got q = {}", inst.q)));
    }
    let pi = p.require_integral()?;
    if pi < 2 {
        return Err(Error::InvalidParameter("needs p > 1".into()));
    }
    if opts.c == 0 {
        return Err(Error::InvalidParameter("tensor exponent must be positive".into()));
    }
    let g = &inst.gamma;
    if !g.is_integer() || g.to_integer().is_odd() || g.to_integer() < BigInt::from(2) {
        return Err(Error::InvalidParameter(format!("gamma = {g} must be an even integer >= 2")));
    }
    let low = BigRational::new(1.into(), 2.into()) + BigRational::new(1.into(), BigInt::one() << pi);
    if opts.alpha <= low || opts.alpha >= BigRational::one() {
        return Err(Error::InvalidParameter(format!("alpha = {} outside ({low}, 1)", opts.alpha)));
    }
    let d = g.to_integer().to_usize().ok_or_else(|| Error::Overflow("gamma".into()))? * inst.k;
    let ad = &opts.alpha * BigRational::from_integer(d.into());
    if !ad.is_integer() {
        return Err(Error::InvalidParameter(format!("alpha d = {ad} is not an integer")));
    }
    Ok((pi, d, ad.to_integer().to_usize().expect("at most d")))
}

/// The BCH gadget the pipeline draws for `seed`.
pub fn tensorable_gadget(d: usize, alpha_d: usize, r: u32, seed: u64) -> Result<BchLattice> {
    build_bch_construction_a(r, d, alpha_d, &mut rng::stream(seed, "ncp2-to-svp/target"))
}

/// `L_int`, generated by the columns of
/// `(2 B_NCP 0 -2t ; 0 B_BCH -s ; 0 0 1)` with `L(B_NCP) = C(G) + 2 Z^m`.
pub fn tensorable_intermediate_lattice(inst: &NcpInstance, bch: &BchLattice) -> Result<IntegerLattice> {
    let m = inst.m;
    let mp = bch.code.len();
    let ncp = construction_a(&inst.code()?)?;
    let dim = m + mp + 1;
    let mut cols: IntMatrix = Vec::with_capacity(dim);
    for b in ncp.basis_rows() {
        let mut c: Vec<BigInt> = b.iter().map(|x| x * 2).collect();
        c.resize(dim, BigInt::zero());
        cols.push(c);
    }
    for b in bch.lattice.basis_rows() {
        let mut c = vec![BigInt::zero(); m];
        c.extend(b.iter().cloned());
        c.push(BigInt::zero());
        cols.push(c);
    }
    let mut last: Vec<BigInt> = inst.target.iter().map(|&x| BigInt::from(-2 * x as i64)).collect();
    last.extend(bch.target.iter().map(|x| -x));
    last.push(BigInt::one());
    cols.push(last);
    IntegerLattice::from_generators(dim, cols)
}

pub fn ncp2_to_svp_tensorable(
    inst: &NcpInstance,
    p: NormSpec,
    gamma_prime: &BigRational,
    seed: u64,
    opts: &TensorableOptions,
) -> Result<(SvpInstance, ReductionReport)> {
    let clock = Instant::now();
    let budget = opts.budget.unwrap_or_else(Budget::from_env);
    inst.validate()?;
    let (pi, d, ad) = check_ranges(inst, p, opts)?;
    let threshold = tensorable_threshold_pow(pi, inst.k, ad);
    let bound = &inst.gamma / (BigRational::from_integer((BigInt::one() << pi) + 1) + &opts.alpha * &inst.gamma);
    let gpp = gamma_prime.pow(pi as i32);
    let gates = vec![
        GateCheck::new(
            "gamma'^p < gamma/(2^p+1+alpha gamma)",
            gpp < bound,
            format!("gamma'^p = {gpp}, bound = {bound}"),
        ),
        GateCheck::new("gamma' >= 1", *gamma_prime >= BigRational::one(), format!("gamma' = {gamma_prime}")),
    ];
    apply_gates(opts.policy, &gates)?;

    let r = opts.r.ok_or_else(|| {
        Error::PaperScaleInfeasible(format!(
            "BCH length must exceed (10^8 d^(12c))^(1/(alpha - 1/2 - 2^-p)) with d = {d}, c = {}; pass r",
            opts.c
        ))
    })?;
    let m = inst.m;
    let bch = tensorable_gadget(d, ad, r, seed)?;
    let mp = bch.code.len();
    let mut notes = vec![format!("BCH length {mp} supplied in place of the paper's length")];
    if mp <= m + 1 {
        notes.push(format!("m' = {mp} does not exceed m + 1 = {}", m + 1));
    }
    let l_int = tensorable_intermediate_lattice(inst, &bch)?;
    let dim = l_int.ambient_dim();

    // N = binom(m', alpha d) / (100 (m' + 1)^(d/2)); rho in (N/100, N/50]
    let n_good = BigRational::new(
        BigInt::from(binomial(mp, ad)),
        BigInt::from(100) * BigInt::from(mp + 1).pow((d / 2) as u32),
    );
    let rho = match opts.rho {
        Some(q) => {
            if !crate::primes::is_prime(q) {
                return Err(Error::InvalidParameter(format!("rho = {q} is not prime")));
            }
            notes.push(format!("rho = {q} supplied (paper interval from N = {n_good})"));
            q
        }
        None => {
            let lo = (&n_good / BigRational::from_integer(100.into())).floor().to_integer();
            let hi = (&n_good / BigRational::from_integer(50.into())).floor().to_integer();
            match (lo.to_u64(), hi.to_u64()) {
                (Some(a), Some(b)) if b >= 2 => sample_prime(a, b, &mut rng::stream(seed, "ncp2-to-svp/rho"))?,
                _ => {
                    return Err(Error::PaperScaleInfeasible(format!(
                        "rho interval (N/100, N/50] with N = {n_good}; pass rho"
                    )))
                }
            }
        }
    };
    let rho_big = BigInt::from(rho);
    let v = sample_hyperplane(rho, dim, &mut rng::stream(seed, "ncp2-to-svp/v"));
    let l_final = sparsify_lattice(&l_int, &rho_big, &v)?;

    let mut witness = None;
    let mut survived = None;
    if let Some(e) = inst.witness_error()? {
        if linalg::weight(&e) > inst.k {
            return Err(Error::Schema("instance witness is farther than k".into()));
        }
        // G x - t over F_2 lifts to 2(c - t) with c = G x
        let x = inst.witness.as_ref().expect("witness error implies witness");
        let f = inst.field()?;
        let c = linalg::mat_vec(&f, &inst.generator, x);
        let e1 = c.iter().zip(&inst.target).map(|(&a, &b)| BigInt::from(2 * (a as i64 - b as i64)));
        let s2: Vec<Elem> = bch.target.iter().map(|x| x.to_u64().expect("binary")).collect();
        match syndrome_ball_list(&bch.code, Some(&s2), ad, budget) {
            Ok(list) if !list.is_empty() => {
                // codeword c' = e + s, lattice vector c' - s
                let e2 = list[0].iter().zip(&s2).map(|(&a, &b)| BigInt::from(((a + b) % 2) as i64 - b as i64));
                let mut z: Vec<BigInt> = e1.chain(e2).collect();
                z.push(BigInt::one());
                debug_assert!(l_int.contains(&z));
                debug_assert!(p.pow_norm(&z).is_ok_and(|n| n <= threshold));
                let ip: BigInt = v.iter().zip(&z).map(|(a, b)| a * b).sum();
                let ok = (ip % &rho_big).is_zero();
                survived = Some(ok);
                if ok {
                    witness = Some(z);
                }
            }
            Ok(_) => notes.push("no BCH codeword within alpha d of s".into()),
            Err(e) => notes.push(format!("gadget witness search skipped: {e}")),
        }
    }

    let out = SvpInstance {
        p,
        m: dim,
        basis: l_final.basis_columns(),
        threshold_pow: BigRational::from_integer(threshold.clone().into()),
        gamma: gamma_prime.clone(),
        label: inst.label,
        witness,
        certificate: None,
    };
    let dimensions = BTreeMap::from([
        ("m".to_string(), m),
        ("m_prime".to_string(), mp),
        ("bch_dimension".to_string(), bch.code.dimension()),
        ("intermediate_rank".to_string(), l_int.rank()),
        ("final_rank".to_string(), l_final.rank()),
    ]);
    let report = ReductionReport {
        reduction: "ncp2-to-svp".into(),
        tool_version: tool_version(),
        seed,
        input_digest: json_digest(inst),
        gadget_digest: json_digest(&(bch.spec, bch.target.iter().map(|x| x.to_string()).collect::<Vec<_>>())),
        intermediate_digest: lattice_digest(&l_int),
        output_digest: json_digest(&out),
        gates,
        k_in: inst.k.to_string(),
        k_out: format!("{threshold}^(1/{pi})"),
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
    fn threshold_matches_the_plug_in() {
        // p = 2, k = 1, gamma = 8, alpha = 7/8: alpha d = 7
        assert_eq!(tensorable_threshold_pow(2, 1, 7), BigUint::from(12u32));
    }

    #[test]
    fn rejects_fractional_alpha_d() {
        let inst = NcpInstance {
            q: 2,
            m: 3,
            generator: vec![vec![1], vec![0], vec![0]],
            target: vec![0, 1, 1],
            k: 1,
            gamma: BigRational::from_integer(2.into()),
            label: super::super::Label::Unknown,
            witness: None,
        };
        let opts = TensorableOptions {
            alpha: BigRational::new(7.into(), 8.into()),
            c: 2,
            r: Some(3),
            rho: Some(5),
            policy: GatePolicy::RecordOnly,
            budget: None,
            timing: false,
        };
        let g1 = BigRational::one();
        let err = ncp2_to_svp_tensorable(&inst, NormSpec::l2(), &g1, 1, &opts).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)), "{err}");
        let mut odd = inst.clone();
        odd.gamma = BigRational::from_integer(3.into());
        assert!(ncp2_to_svp_tensorable(&odd, NormSpec::l2(), &g1, 1, &opts).is_err());
    }
}
