//! NCP_q -> MDP_q through a locally dense code and random parity checks.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use super::{
    apply_gates, json_digest, sample_parity, sparsify_code, tool_version, GateCheck, GatePolicy, MdpInstance,
    NcpInstance, ReductionReport, Sparsifier,
};
use crate::budget::Budget;
use crate::code::LinearCode;
use crate::distance::syndrome_ball_list;
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::gadgets::LocallyDenseCode;
use crate::linalg;
use crate::rng;

#[derive(Clone, Debug, Default)]
pub struct NcpMdpOptions {
    /// Output gap; defaults to `gamma / (1 + alpha gamma)`.
    pub gamma_prime: Option<BigRational>,
    /// Number of random parity checks; defaults to [`paper_h`].
    pub h: Option<usize>,
    pub policy: GatePolicy,
    pub budget: Option<Budget>,
    pub timing: bool,
}

/// `ceil(7 + d (1 + log_q m))`.
pub fn paper_h(q: u64, m: usize, d: usize) -> usize {
    // ceil(d log_q m) is the least j with q^j >= m^d
    let target = BigUint::from(m).pow(d as u32);
    let mut j = 0;
    let mut pw = BigUint::one();
    while pw < target {
        pw *= q;
        j += 1;
    }
    7 + d + j
}

/// `C_int`, spanned by the columns of `(G 0 -t ; 0 A -s)`.
pub fn ncp_intermediate_code(inst: &NcpInstance, gadget: &LocallyDenseCode) -> Result<LinearCode> {
    let f = inst.field()?;
    let (m, mp) = (inst.m, gadget.target.len());
    let n = inst.generator.first().map_or(0, Vec::len);
    let np = gadget.matrix.first().map_or(0, Vec::len);
    let mut cols: Vec<Vec<Elem>> = Vec::with_capacity(n + np + 1);
    for j in 0..n {
        let mut c: Vec<Elem> = inst.generator.iter().map(|r| r[j]).collect();
        c.resize(m + mp, 0);
        cols.push(c);
    }
    for j in 0..np {
        let mut c = vec![0; m];
        c.extend(gadget.matrix.iter().map(|r| r[j]));
        cols.push(c);
    }
    let mut last: Vec<Elem> = inst.target.iter().map(|&x| f.neg(x)).collect();
    last.extend(gadget.target.iter().map(|&x| f.neg(x)));
    cols.push(last);
    LinearCode::from_spanning_vectors(&f, m + mp, &cols)
}

pub fn ncp_to_mdp(
    inst: &NcpInstance,
    gadget: &LocallyDenseCode,
    seed: u64,
    opts: &NcpMdpOptions,
) -> Result<(MdpInstance, ReductionReport)> {
    let clock = Instant::now();
    let budget = opts.budget.unwrap_or_else(Budget::from_env);
    inst.validate()?;
    let f = inst.field()?;
    let gp = &gadget.params;
    if gp.q != inst.q {
        return Err(Error::FieldMismatch(format!("instance over F_{}, gadget over F_{}", inst.q, gp.q)));
    }
    let d = gp.d;
    let k = BigRational::from_integer(inst.k.into());
    if &inst.gamma * &k != BigRational::from_integer(d.into()) {
        return Err(Error::InvalidParameter(format!(
            "gadget d = {d} differs from gamma k = {}",
            &inst.gamma * &k
        )));
    }
    let ad = &gp.alpha * BigRational::from_integer(d.into());
    if !ad.is_integer() || ad != BigRational::from_integer(gp.radius.into()) {
        return Err(Error::InvalidParameter(format!("alpha d = {ad} is not the gadget radius")));
    }
    let k_out = inst.k + gp.radius;
    let bound = &inst.gamma / (BigRational::one() + &gp.alpha * &inst.gamma);
    let gamma_prime = opts.gamma_prime.clone().unwrap_or_else(|| bound.clone());
    let gates = vec![
        GateCheck::new(
            "gamma' <= gamma/(1+alpha gamma)",
            gamma_prime <= bound,
            format!("gamma' = {gamma_prime}, bound = {bound}"),
        ),
        GateCheck::new("gamma' >= 1", gamma_prime >= BigRational::one(), format!("gamma' = {gamma_prime}")),
    ];
    apply_gates(opts.policy, &gates)?;

    let a = gadget.code()?;
    let (m, mp) = (inst.m, a.len());
    let s = &gadget.target;
    let n = inst.generator.first().map_or(0, Vec::len);
    let np = gadget.matrix.first().map_or(0, Vec::len);
    let c_int = ncp_intermediate_code(inst, gadget)?;

    let h_paper = paper_h(inst.q, m, d);
    let h = opts.h.unwrap_or(h_paper);
    let mut notes = Vec::new();
    if opts.h.is_some() {
        notes.push(format!("h overridden to {h} (paper value {h_paper})"));
    }
    if gp.scale_override {
        notes.push(format!("gadget built at override length m' = {mp}"));
    }
    let parity = sample_parity(&f, h, m + mp, &mut rng::stream(seed, "ncp-to-mdp/parity"));
    let c_final = sparsify_code(&c_int, &parity)?;

    // YES side: (G x - t, A y - s) with y the first gadget point in ball order
    let mut witness = None;
    let mut survived = None;
    if let Some(e1) = inst.witness_error()? {
        if linalg::weight(&e1) > inst.k {
            return Err(Error::Schema("instance witness is farther than k".into()));
        }
        let neg_s: Vec<Elem> = s.iter().map(|&x| f.neg(x)).collect();
        match syndrome_ball_list(&a, Some(&neg_s), gp.radius, budget) {
            Ok(list) if !list.is_empty() => {
                let mut z = e1;
                z.extend_from_slice(&list[0]);
                debug_assert!(c_int.contains(&z));
                debug_assert!(linalg::weight(&z) <= k_out);
                let ok = linalg::mat_vec(&f, &parity, &z).iter().all(|&x| x == 0);
                survived = Some(ok);
                if ok && linalg::weight(&z) > 0 {
                    witness = Some(z);
                }
            }
            Ok(_) => notes.push("no gadget codeword within alpha d of s".into()),
            Err(e) => notes.push(format!("gadget witness search skipped: {e}")),
        }
    }

    let out = MdpInstance {
        q: inst.q,
        m: m + mp,
        generator: c_final.generator().clone(),
        k: k_out,
        gamma: gamma_prime,
        label: inst.label,
        witness,
    };
    let dimensions = BTreeMap::from([
        ("m".to_string(), m),
        ("n".to_string(), n),
        ("m_prime".to_string(), mp),
        ("n_prime".to_string(), np),
        ("intermediate_dimension".to_string(), c_int.dimension()),
        ("final_dimension".to_string(), c_final.dimension()),
    ]);
    let report = ReductionReport {
        reduction: "ncp-to-mdp".into(),
        tool_version: tool_version(),
        seed,
        input_digest: json_digest(inst),
        gadget_digest: json_digest(gadget),
        intermediate_digest: json_digest(c_int.generator()),
        output_digest: json_digest(&out),
        gates,
        k_in: inst.k.to_string(),
        k_out: k_out.to_string(),
        dimensions,
        sparsifier: Sparsifier::Code {
            h,
            paper_h: h_paper,
            parity,
        },
        witness_survived: survived,
        collapsed: c_final.dimension() == 0,
        notes,
        wall_clock_ms: opts.timing.then(|| clock.elapsed().as_millis() as u64),
    };
    Ok((out, report))
}
