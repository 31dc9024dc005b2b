//! Ground truth for reduction outputs: exact YES/NO classification, censuses
//! of good and annoying vectors, the tensorability certificate, and
//! sparsifier statistics.

mod census;
mod haviv_regev;
mod stats;

pub use census::{census_code, census_lattice, census_tensorable, CodeCensus, LatticeCensus, TensorableCensus};
pub use haviv_regev::{check_haviv_regev, even_light_vectors, HavivRegevCertificate, HrOutcome};
pub use stats::{sparsifier_stats, RateStat, SparsifierKind, SparsifierStats};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::distance::{min_distance, nearest_codeword_distance};
use crate::error::{Error, Result};
use crate::lattice::enumerate::{cvp_distance, lambda1_capped, multiples_far_from_lattice};
use crate::reductions::{json_digest, CvpInstance, Label, MdpInstance, NcpInstance, SvpInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Yes,
    No,
    /// The exact value lies strictly inside the promise gap.
    GapViolation,
    /// The oracle ran out of budget.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: String,
    pub instance_digest: String,
    pub oracle: String,
    /// Exact values as decimal strings.
    pub values: BTreeMap<String, String>,
    pub verdict: Verdict,
    pub label: Label,
    pub detail: Option<String>,
}

impl VerificationReport {
    /// Whether the verdict matches the instance's ground-truth label.
    pub fn agrees_with_label(&self) -> bool {
        match self.label {
            Label::Yes => self.verdict == Verdict::Yes,
            Label::No => self.verdict == Verdict::No,
            Label::Unknown => true,
        }
    }
}

fn verdict(value: Option<&BigRational>, yes_at_most: &BigRational, no_above: &BigRational) -> Verdict {
    match value {
        None => Verdict::No,
        Some(v) if v <= yes_at_most => Verdict::Yes,
        Some(v) if v > no_above => Verdict::No,
        Some(_) => Verdict::GapViolation,
    }
}

/// YES iff `lambda(C) <= k`, NO iff `lambda(C) > gamma k`.
pub fn classify_mdp(inst: &MdpInstance, budget: Budget) -> Result<VerificationReport> {
    inst.validate()?;
    let code = inst.code()?;
    let k = BigRational::from_integer(inst.k.into());
    let no_above = &inst.gamma * &k;
    let mut values = BTreeMap::from([
        ("k".to_string(), inst.k.to_string()),
        ("gamma_k".to_string(), no_above.to_string()),
        ("dimension".to_string(), code.dimension().to_string()),
    ]);
    let (v, detail, oracle) = match min_distance(&code, budget) {
        Ok(rep) => {
            let lam = rep.distance.map(|x| BigRational::from_integer(x.into()));
            values.insert(
                "lambda".into(),
                rep.distance.map_or("infinity".into(), |x| x.to_string()),
            );
            (verdict(lam.as_ref(), &k, &no_above), None, format!("min_distance/{:?}", rep.strategy))
        }
        Err(e @ Error::BudgetExceeded { .. }) => (Verdict::Undecided, Some(e.to_string()), "min_distance".into()),
        Err(e) => return Err(e),
    };
    Ok(VerificationReport {
        kind: "mdp".into(),
        instance_digest: json_digest(inst),
        oracle,
        values,
        verdict: v,
        label: inst.label,
        detail,
    })
}

/// YES iff `lambda_1^p <= k^p`, NO iff `lambda_1^p > gamma^p k^p`. The search
/// is capped at the larger threshold: finding nothing below it decides NO.
pub fn classify_svp(inst: &SvpInstance, budget: Budget) -> Result<VerificationReport> {
    inst.validate()?;
    let l = inst.lattice()?;
    let yes = inst.threshold_pow.clone();
    let no = inst.no_threshold_pow()?;
    let cap_q = if yes > no { &yes } else { &no };
    let cap = cap_q
        .floor()
        .to_integer()
        .to_u128()
        .ok_or_else(|| Error::Overflow("threshold exceeds 128 bits".into()))?;
    let mut values = BTreeMap::from([
        ("k_pow".to_string(), yes.to_string()),
        ("gamma_k_pow".to_string(), no.to_string()),
        ("rank".to_string(), l.rank().to_string()),
    ]);
    let (v, detail) = match lambda1_capped(&l, inst.p, cap, budget) {
        Ok(Some((n, w))) => {
            values.insert("lambda1_pow".into(), n.to_string());
            values.insert(
                "shortest".into(),
                w.iter().map(BigInt::to_string).collect::<Vec<_>>().join(","),
            );
            let n = BigRational::from_integer(n.into());
            (verdict(Some(&n), &yes, &no), None)
        }
        Ok(None) => {
            // integral norms above floor(cap) exceed both thresholds
            values.insert("lambda1_pow_exceeds".into(), cap.to_string());
            (Verdict::No, None)
        }
        Err(e @ Error::BudgetExceeded { .. }) => (Verdict::Undecided, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(VerificationReport {
        kind: "svp".into(),
        instance_digest: json_digest(inst),
        oracle: "hnf_enumeration".into(),
        values,
        verdict: v,
        label: inst.label,
        detail,
    })
}

/// YES iff `dist(C, t) <= k`, NO iff `dist(C, t) > gamma k`. Over a field
/// every nonzero scaling of `t` is at the same distance.
pub fn classify_ncp(inst: &NcpInstance, budget: Budget) -> Result<VerificationReport> {
    inst.validate()?;
    let code = inst.code()?;
    let k = BigRational::from_integer(inst.k.into());
    let no_above = &inst.gamma * &k;
    let mut values = BTreeMap::from([
        ("k".to_string(), inst.k.to_string()),
        ("gamma_k".to_string(), no_above.to_string()),
    ]);
    let (v, detail) = match nearest_codeword_distance(&code, &inst.target, budget) {
        Ok(rep) => {
            let dist = rep.distance.expect("a code always has a nearest codeword");
            values.insert("distance".into(), dist.to_string());
            let dq = BigRational::from_integer(dist.into());
            (verdict(Some(&dq), &k, &no_above), None)
        }
        Err(e @ Error::BudgetExceeded { .. }) => (Verdict::Undecided, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(VerificationReport {
        kind: "ncp".into(),
        instance_digest: json_digest(inst),
        oracle: "nearest_codeword_distance".into(),
        values,
        verdict: v,
        label: inst.label,
        detail,
    })
}

/// YES iff `dist_p(L, t)^p <= k^p`; NO iff every nonzero integer multiple of
/// `t` is farther than `gamma k`.
pub fn classify_cvp(inst: &CvpInstance, budget: Budget) -> Result<VerificationReport> {
    inst.validate()?;
    let l = inst.lattice()?;
    let p = inst.p.require_integral()? as i32;
    let k_pow = BigRational::from_integer(inst.k.into()).pow(p);
    let no_pow = (&inst.gamma * BigRational::from_integer(inst.k.into())).pow(p);
    let mut values = BTreeMap::from([
        ("k_pow".to_string(), k_pow.to_string()),
        ("gamma_k_pow".to_string(), no_pow.to_string()),
    ]);
    let mut run = || -> Result<Verdict> {
        let d = cvp_distance(&l, &inst.target, inst.p, budget)?.value_pow;
        values.insert("distance_pow".into(), d.to_string());
        if BigRational::from_integer(d.into()) <= k_pow {
            return Ok(Verdict::Yes);
        }
        let rep = multiples_far_from_lattice(&l, &inst.target, inst.p, &no_pow, budget)?;
        values.insert("multiples_checked".into(), rep.alpha_checked.to_string());
        if let Some(a) = rep.witness_alpha {
            values.insert("close_multiple".into(), a.to_string());
        }
        Ok(if rep.holds { Verdict::No } else { Verdict::GapViolation })
    };
    let (v, detail) = match run() {
        Ok(v) => (v, None),
        Err(e @ Error::BudgetExceeded { .. }) => (Verdict::Undecided, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    Ok(VerificationReport {
        kind: "cvp".into(),
        instance_digest: json_digest(inst),
        oracle: "hnf_enumeration".into(),
        values,
        verdict: v,
        label: inst.label,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::NormSpec;
    use num_traits::One;

    fn mdp(generator: Vec<Vec<u64>>, m: usize, k: usize, gamma: i64) -> MdpInstance {
        MdpInstance {
            q: 2,
            m,
            generator,
            k,
            gamma: BigRational::from_integer(gamma.into()),
            label: Label::Unknown,
            witness: None,
        }
    }

    fn svp(m: usize, scale: i64, gamma: BigRational) -> SvpInstance {
        let basis = (0..m)
            .map(|i| (0..m).map(|j| BigInt::from(if i == j { scale } else { 0 })).collect())
            .collect();
        SvpInstance {
            p: NormSpec::l2(),
            m,
            basis,
            threshold_pow: BigRational::one(),
            gamma,
            label: Label::Unknown,
            witness: None,
            certificate: None,
        }
    }

    #[test]
    fn zero_code_is_no() {
        let r = classify_mdp(&mdp(vec![vec![]; 4], 4, 1, 2), Budget(1 << 20)).unwrap();
        assert_eq!(r.verdict, Verdict::No);
        assert_eq!(r.values["lambda"], "infinity");
    }

    #[test]
    fn repetition_code_is_yes_at_its_length() {
        let r = classify_mdp(&mdp(vec![vec![1]; 5], 5, 5, 1), Budget(1 << 20)).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        let r = classify_mdp(&mdp(vec![vec![1]; 5], 5, 2, 3), Budget(1 << 20)).unwrap();
        assert_eq!(r.verdict, Verdict::GapViolation);
        let r = classify_mdp(&mdp(vec![vec![1]; 5], 5, 2, 2), Budget(1 << 20)).unwrap();
        assert_eq!(r.verdict, Verdict::No);
    }

    #[test]
    fn integer_lattices() {
        let r = classify_svp(&svp(3, 1, BigRational::one()), Budget(1 << 20)).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        // 2Z^m with gamma = 1.5: lambda = 2 > 1.5
        let r = classify_svp(&svp(3, 2, BigRational::new(3.into(), 2.into())), Budget(1 << 20)).unwrap();
        assert_eq!(r.verdict, Verdict::No);
        let r = classify_svp(&svp(3, 2, BigRational::from_integer(3.into())), Budget(1 << 20)).unwrap();
        assert_eq!(r.verdict, Verdict::GapViolation);
        assert_eq!(r.values["lambda1_pow"], "4");
    }
}
