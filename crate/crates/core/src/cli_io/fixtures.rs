//! Reproducible micro instances with oracle-checked labels, and the
//! scale-override gadgets that go with them.

use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{write_document, Document};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::gadgets::{
    sample_locally_dense_code, sample_rs_locally_dense_lattice, LocallyDenseCode, LocallyDenseLattice, RsOverride,
};
use crate::lattice::NormSpec;
use crate::reductions::{CvpInstance, GatePolicy, Label, NcpInstance, TensorableOptions};
use crate::verify::{classify_cvp, classify_ncp, Verdict};

/// Seed of every fixture gadget.
pub const FIXTURE_SEED: u64 = 1;
/// BCH length of the micro locally dense code.
pub const NCP_MICRO_M_PRIME: usize = 15;
/// Parity checks used on the NCP micro instances in place of the paper's
/// `h`.
pub const NCP_MICRO_H: usize = 2;
/// Modulus used on the CVP micro instances in place of the paper's prime.
pub const CVP_MICRO_RHO: u64 = 7;

pub const NAMES: [&str; 3] = ["ncp-micro", "cvp-micro", "rs-ldl-toy"];

#[derive(Clone, Debug)]
pub struct NcpMicro {
    pub yes: NcpInstance,
    pub no: NcpInstance,
    pub gadget: LocallyDenseCode,
    /// Binary NO instance sized for the tensorable pipeline.
    pub tensorable_no: NcpInstance,
}

#[derive(Clone, Debug)]
pub struct CvpMicro {
    pub yes: CvpInstance,
    pub no: CvpInstance,
    pub gadget: LocallyDenseLattice,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn unit_column(m: usize) -> Vec<Vec<u64>> {
    (0..m).map(|i| vec![u64::from(i == 0)]).collect()
}

fn check_label(got: Verdict, want: Label, what: &str) -> Result<()> {
    let ok = matches!((got, want), (Verdict::Yes, Label::Yes) | (Verdict::No, Label::No));
    if ok {
        Ok(())
    } else {
        Err(Error::Schema(format!("fixture {what}: oracle says {got:?}, label is {want:?}")))
    }
}

/// Options for the tensorable pipeline on [`NcpMicro::tensorable_no`]:
/// `p = 2`, `alpha = 5/6` (so `alpha d = 5`), BCH length 7 and `rho = 11`.
/// The theorem's gap condition cannot hold with `gamma' >= 1` at this size,
/// so gates are recorded rather than enforced.
pub fn tensorable_options() -> TensorableOptions {
    TensorableOptions {
        alpha: BigRational::new(5.into(), 6.into()),
        c: 2,
        r: Some(3),
        rho: Some(11),
        policy: GatePolicy::RecordOnly,
        budget: None,
        timing: false,
    }
}

/// `gamma'` for the tensorable micro run: `(3/4)^2 < 6/10`.
pub fn tensorable_gamma_prime() -> BigRational {
    BigRational::new(3.into(), 4.into())
}

pub fn ncp_micro(budget: Budget) -> Result<NcpMicro> {
    let yes = NcpInstance {
        q: 2,
        m: 6,
        generator: vec![vec![1, 0], vec![1, 1], vec![0, 1], vec![0, 0], vec![0, 0], vec![0, 0]],
        target: vec![1, 1, 0, 0, 0, 1],
        k: 1,
        gamma: rat(8),
        label: Label::Yes,
        witness: Some(vec![1, 0]),
    };
    let mut t = vec![1; 10];
    t[0] = 0;
    let no = NcpInstance {
        q: 2,
        m: 10,
        generator: unit_column(10),
        target: t,
        k: 1,
        gamma: rat(8),
        label: Label::No,
        witness: None,
    };
    let mut t = vec![1; 8];
    t[0] = 0;
    let tensorable_no = NcpInstance {
        q: 2,
        m: 8,
        generator: unit_column(8),
        target: t,
        k: 1,
        gamma: rat(6),
        label: Label::No,
        witness: None,
    };
    for (inst, name) in [(&yes, "ncp yes"), (&no, "ncp no"), (&tensorable_no, "ncp2 no")] {
        check_label(classify_ncp(inst, budget)?.verdict, inst.label, name)?;
    }
    let mut gadget = sample_locally_dense_code(2, 1, 10, FIXTURE_SEED, Some(NCP_MICRO_M_PRIME))?;
    if !gadget.verify_structure(budget)? {
        return Err(Error::Schema("fixture gadget fails its distance check".into()));
    }
    gadget.estimate_density(budget, 0)?;
    Ok(NcpMicro {
        yes,
        no,
        gadget,
        tensorable_no,
    })
}

pub fn cvp_micro(budget: Budget) -> Result<CvpMicro> {
    let basis: Vec<Vec<BigInt>> = (0..3).map(|i| vec![BigInt::from(i32::from(i == 0))]).collect();
    let big = |v: [i64; 3]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    let yes = CvpInstance {
        p: NormSpec::l2(),
        m: 3,
        basis: basis.clone(),
        target: big([5, 1, 0]),
        k: 1,
        gamma: rat(2),
        label: Label::Yes,
        witness: Some(vec![BigInt::from(5)]),
    };
    let no = CvpInstance {
        target: big([0, 3, 0]),
        label: Label::No,
        witness: None,
        ..yes.clone()
    };
    for (inst, name) in [(&yes, "cvp yes"), (&no, "cvp no")] {
        check_label(classify_cvp(inst, budget)?.verdict, inst.label, name)?;
    }
    let ov = RsOverride {
        q: 5,
        ell: 2,
        w: 2,
        gamma: Some(2),
    };
    let mut gadget = sample_rs_locally_dense_lattice(NormSpec::l2(), &BigRational::one(), 1, 3, FIXTURE_SEED, Some(ov))?;
    if !gadget.verify_structure(budget)? {
        return Err(Error::Schema("fixture gadget fails its lambda_1 check".into()));
    }
    gadget.estimate_density(budget, 0)?;
    Ok(CvpMicro { yes, no, gadget })
}

/// The RS gadget with `q = 13`, `l = 3`, `w = 4` and `gamma = 3`, its density
/// counted exactly.
pub fn rs_ldl_toy(budget: Budget) -> Result<LocallyDenseLattice> {
    let ov = RsOverride {
        q: 13,
        ell: 3,
        w: 4,
        gamma: Some(3),
    };
    let mut g = sample_rs_locally_dense_lattice(NormSpec::l2(), &BigRational::one(), 1, 3, FIXTURE_SEED, Some(ov))?;
    g.verify_structure(budget)?;
    g.estimate_density(budget, 0)?;
    Ok(g)
}

fn emit<T: Serialize>(dir: &Path, file: &str, schema: &str, body: &T, out: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(file);
    write_document(&path, &Document::new(schema, Some(FIXTURE_SEED), body))?;
    out.push(path);
    Ok(())
}

/// Writes the named fixture set into `dir` and returns the paths.
pub fn write_fixtures(name: &str, dir: &Path, budget: Budget) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    match name {
        "ncp-micro" => {
            let f = ncp_micro(budget)?;
            emit(dir, "ncp_yes.json", "ncp", &f.yes, &mut out)?;
            emit(dir, "ncp_no.json", "ncp", &f.no, &mut out)?;
            emit(dir, "ldc_gadget.json", "ldc", &f.gadget, &mut out)?;
            emit(dir, "ncp2_no.json", "ncp", &f.tensorable_no, &mut out)?;
        }
        "cvp-micro" => {
            let f = cvp_micro(budget)?;
            emit(dir, "cvp_yes.json", "cvp", &f.yes, &mut out)?;
            emit(dir, "cvp_no.json", "cvp", &f.no, &mut out)?;
            emit(dir, "rs_gadget.json", "ldl", &f.gadget, &mut out)?;
        }
        "rs-ldl-toy" => {
            emit(dir, "rs_ldl_toy.json", "ldl", &rs_ldl_toy(budget)?, &mut out)?;
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown fixture {other:?}; known: {}",
                NAMES.join(", ")
            )))
        }
    }
    Ok(out)
}
