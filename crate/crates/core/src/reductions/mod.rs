//! The reduction pipelines NCP -> MDP, CVP -> SVP and the tensorable
//! NCP_2 -> SVP_p, plus random sparsification and tensor boosting.
//!
//! Every pipeline is a pure function of (instance, gadget, seed): random
//! draws come from labelled streams, so a report's seed reproduces its output
//! byte for byte.

mod cvp_svp;
mod ncp_mdp;
mod tensor;
mod tensorable;

pub use cvp_svp::{cvp_intermediate_lattice, cvp_to_svp, paper_rho_interval, CvpSvpOptions};
pub use ncp_mdp::{ncp_intermediate_code, ncp_to_mdp, paper_h, NcpMdpOptions};
pub use tensor::{tensor_boost_mdp, tensor_boost_svp};
pub use tensorable::{
    ncp2_to_svp_tensorable, tensorable_gadget, tensorable_intermediate_lattice, tensorable_threshold_pow,
    TensorableOptions,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::{Elem, FiniteField};
use crate::lattice::{IntMatrix, IntegerLattice, NormSpec};
use crate::linalg::{self, Matrix};
use crate::verify::HavivRegevCertificate;

/// Ground-truth promise label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Label {
    Yes,
    No,
    Unknown,
}

/// What to do when a theorem's parameter inequality fails.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GatePolicy {
    #[default]
    Enforce,
    /// Run anyway and record the failed gate in the report.
    RecordOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCheck {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

impl GateCheck {
    pub(crate) fn new(name: &str, holds: bool, detail: String) -> Self {
        GateCheck {
            name: name.into(),
            holds,
            detail,
        }
    }
}

pub(crate) fn apply_gates(policy: GatePolicy, gates: &[GateCheck]) -> Result<()> {
    if policy == GatePolicy::Enforce {
        if let Some(g) = gates.iter().find(|g| !g.holds) {
            return Err(Error::GateViolation(format!("{}: {}", g.name, g.detail)));
        }
    }
    Ok(())
}

/// Gap nearest codeword instance: is `dist(C(G), t) <= k` or `> gamma k`?
#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NcpInstance {
    pub q: u64,
    /// Block length.
    pub m: usize,
    /// `m x n`; the columns span the code.
    pub generator: Matrix,
    pub target: Vec<Elem>,
    pub k: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub gamma: BigRational,
    pub label: Label,
    /// Message `x` with `wt(G x - t) <= k`, for YES instances.
    pub witness: Option<Vec<Elem>>,
}

impl NcpInstance {
    pub fn field(&self) -> Result<FiniteField> {
        let (p, e) = crate::gadgets::prime_power(self.q)
            .ok_or_else(|| Error::Schema(format!("q = {} is not a prime power", self.q)))?;
        FiniteField::new(p, e)
    }

    pub fn code(&self) -> Result<LinearCode> {
        let f = self.field()?;
        code_from_columns(&f, self.m, &self.generator)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Schema("k must be positive".into()));
        }
        if self.target.len() != self.m || self.generator.len() != self.m {
            return Err(Error::Schema("generator and target must have m rows".into()));
        }
        if self.gamma < BigRational::one() {
            return Err(Error::Schema("gamma must be at least 1".into()));
        }
        self.code().map(|_| ())
    }

    /// `G x - t` for the stored witness.
    pub fn witness_error(&self) -> Result<Option<Vec<Elem>>> {
        let Some(x) = &self.witness else {
            return Ok(None);
        };
        let f = self.field()?;
        if x.len() != self.generator.first().map_or(0, Vec::len) {
            return Err(Error::Schema("witness length".into()));
        }
        let gx = linalg::mat_vec(&f, &self.generator, x);
        Ok(Some(linalg::sub_vec(&f, &gx, &self.target)))
    }
}

/// Gap minimum distance instance: is `lambda(C) <= k` or `> gamma k`?
#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MdpInstance {
    pub q: u64,
    pub m: usize,
    /// `m x n`, full column rank.
    pub generator: Matrix,
    pub k: usize,
    #[serde_as(as = "DisplayFromStr")]
    pub gamma: BigRational,
    pub label: Label,
    /// A nonzero codeword of weight `<= k`, for YES instances.
    pub witness: Option<Vec<Elem>>,
}

impl MdpInstance {
    pub fn field(&self) -> Result<FiniteField> {
        let (p, e) = crate::gadgets::prime_power(self.q)
            .ok_or_else(|| Error::Schema(format!("q = {} is not a prime power", self.q)))?;
        FiniteField::new(p, e)
    }

    pub fn code(&self) -> Result<LinearCode> {
        let f = self.field()?;
        code_from_columns(&f, self.m, &self.generator)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Schema("k must be positive".into()));
        }
        if self.generator.len() != self.m {
            return Err(Error::Schema("generator must have m rows".into()));
        }
        self.code().map(|_| ())
    }
}

/// Gap closest vector instance under `l_p`. The NO promise covers every
/// nonzero integer multiple of the target.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvpInstance {
    pub p: NormSpec,
    pub m: usize,
    /// `m x n` integer basis, columns are the basis vectors.
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub basis: IntMatrix,
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub target: Vec<BigInt>,
    pub k: u64,
    #[serde_as(as = "DisplayFromStr")]
    pub gamma: BigRational,
    pub label: Label,
    /// Coefficients `x` with `||B x - t||_p <= k`, for YES instances.
    #[serde_as(as = "Option<Vec<DisplayFromStr>>")]
    pub witness: Option<Vec<BigInt>>,
}

impl CvpInstance {
    pub fn lattice(&self) -> Result<IntegerLattice> {
        lattice_from_columns(self.m, &self.basis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Schema("k must be positive".into()));
        }
        if self.target.len() != self.m || self.basis.len() != self.m {
            return Err(Error::Schema("basis and target must have m rows".into()));
        }
        self.lattice().map(|_| ())
    }

    /// `B x - t` for the stored witness.
    pub fn witness_error(&self) -> Result<Option<Vec<BigInt>>> {
        let Some(x) = &self.witness else {
            return Ok(None);
        };
        let n = self.basis.first().map_or(0, Vec::len);
        if x.len() != n {
            return Err(Error::Schema("witness length".into()));
        }
        Ok(Some(
            self.basis
                .iter()
                .zip(&self.target)
                .map(|(row, t)| row.iter().zip(x).map(|(b, xi)| b * xi).sum::<BigInt>() - t)
                .collect(),
        ))
    }
}

/// Gap shortest vector instance. The threshold is kept as `k^p`.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SvpInstance {
    pub p: NormSpec,
    pub m: usize,
    /// `m x n`, columns are the basis vectors.
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub basis: IntMatrix,
    #[serde_as(as = "DisplayFromStr")]
    pub threshold_pow: BigRational,
    #[serde_as(as = "DisplayFromStr")]
    pub gamma: BigRational,
    pub label: Label,
    /// A nonzero lattice vector with `||w||_p^p <= threshold_pow`.
    #[serde_as(as = "Option<Vec<DisplayFromStr>>")]
    pub witness: Option<Vec<BigInt>>,
    pub certificate: Option<HavivRegevCertificate>,
}

impl SvpInstance {
    pub fn lattice(&self) -> Result<IntegerLattice> {
        lattice_from_columns(self.m, &self.basis)
    }

    pub fn validate(&self) -> Result<()> {
        if self.threshold_pow <= BigRational::zero() {
            return Err(Error::Schema("threshold must be positive".into()));
        }
        if self.basis.len() != self.m {
            return Err(Error::Schema("basis must have m rows".into()));
        }
        self.lattice().map(|_| ())
    }

    /// `gamma^p k^p`, the NO threshold on `p`-th powers.
    pub fn no_threshold_pow(&self) -> Result<BigRational> {
        let p = self.p.require_integral()?;
        Ok(self.gamma.pow(p as i32) * &self.threshold_pow)
    }
}

pub(crate) fn code_from_columns(f: &FiniteField, m: usize, g: &Matrix) -> Result<LinearCode> {
    if g.len() != m {
        return Err(Error::DimensionMismatch(format!("{} rows, expected {m}", g.len())));
    }
    let n = g.first().map_or(0, Vec::len);
    if g.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("ragged generator matrix".into()));
    }
    let cols: Matrix = (0..n).map(|j| g.iter().map(|r| r[j]).collect()).collect();
    LinearCode::from_spanning_vectors(f, m, &cols)
}

pub(crate) fn lattice_from_columns(m: usize, b: &IntMatrix) -> Result<IntegerLattice> {
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!("{} rows, expected {m}", b.len())));
    }
    let n = b.first().map_or(0, Vec::len);
    if b.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("ragged basis".into()));
    }
    let cols: IntMatrix = (0..n).map(|j| b.iter().map(|r| r[j].clone()).collect()).collect();
    IntegerLattice::from_generators(m, cols)
}

/// Parity checks used to sparsify.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sparsifier {
    Code {
        h: usize,
        paper_h: usize,
        parity: Matrix,
    },
    Lattice {
        #[serde_as(as = "DisplayFromStr")]
        rho: BigInt,
        rho_overridden: bool,
        #[serde_as(as = "Vec<DisplayFromStr>")]
        v: Vec<BigInt>,
    },
}

#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub reduction: String,
    pub tool_version: String,
    pub seed: u64,
    pub input_digest: String,
    pub gadget_digest: String,
    pub intermediate_digest: String,
    pub output_digest: String,
    pub gates: Vec<GateCheck>,
    /// `k` of the input and the output threshold, as exact strings.
    pub k_in: String,
    pub k_out: String,
    pub dimensions: BTreeMap<String, usize>,
    pub sparsifier: Sparsifier,
    /// Whether the witness built from the input witness survived
    /// sparsification; `None` without an input witness.
    pub witness_survived: Option<bool>,
    /// The output code or lattice is zero.
    pub collapsed: bool,
    pub notes: Vec<String>,
    /// Only set on request, since it breaks byte-for-byte reruns.
    pub wall_clock_ms: Option<u64>,
}

pub(crate) fn tool_version() -> String {
    format!("gadgetforge {}", env!("CARGO_PKG_VERSION"))
}

/// Hex SHA-256 of the canonical JSON form of `x`.
pub fn json_digest<T: Serialize>(x: &T) -> String {
    crate::rng::digest(&serde_json::to_vec(x).expect("serializable"))
}

/// Digest of a lattice's HNF basis.
pub fn lattice_digest(l: &IntegerLattice) -> String {
    let rows: Vec<Vec<String>> = l.basis_rows().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    json_digest(&rows)
}

/// Uniform `h x m` matrix over `F_q`.
pub fn sample_parity(f: &FiniteField, h: usize, m: usize, rng: &mut impl Rng) -> Matrix {
    let q = f.order();
    (0..h).map(|_| (0..m).map(|_| rng.gen_range(0..q)).collect()).collect()
}

/// `C ∩ ker(H)`.
pub fn sparsify_code(c: &LinearCode, parity: &Matrix) -> Result<LinearCode> {
    let f = c.field();
    let m = c.len();
    if parity.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch("parity-check row length".into()));
    }
    let kernel = linalg::nullspace(f, parity, m);
    let k = LinearCode::from_spanning_vectors(f, m, &kernel)?;
    c.intersect(&k)
}

/// `{w in L : <v, w> = 0 mod rho}`.
pub fn sparsify_lattice(l: &IntegerLattice, rho: &BigInt, v: &[BigInt]) -> Result<IntegerLattice> {
    if v.iter().all(|x| x.is_zero()) {
        return Ok(l.clone());
    }
    l.modular_sublattice(v, rho)
}

/// Uniform vector in `[0, rho)^m`.
pub fn sample_hyperplane(rho: u64, m: usize, rng: &mut impl Rng) -> Vec<BigInt> {
    (0..m).map(|_| BigInt::from(rng.gen_range(0..rho))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::construction_a;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn zero_parity_rows_change_nothing() {
        let f = FiniteField::new(2, 1).unwrap();
        let c = crate::code::tests::hamming74();
        assert_eq!(sparsify_code(&c, &Vec::new()).unwrap(), c);
        let mut rng = crate::rng::stream(1, "t");
        let h = sample_parity(&f, 3, 7, &mut rng);
        let s = sparsify_code(&c, &h).unwrap();
        for col in s.generator_columns() {
            assert!(c.contains(&col));
            assert!(linalg::mat_vec(&f, &h, &col).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn z2_mod_3_hyperplane() {
        let l = IntegerLattice::identity(2);
        let s = sparsify_lattice(&l, &BigInt::from(3), &big(&[1, 1])).unwrap();
        assert_eq!(s.determinant().unwrap(), BigInt::from(3));
        assert!(s.contains(&big(&[1, 2])));
        assert!(!s.contains(&big(&[1, 0])));
        assert_eq!(sparsify_lattice(&l, &BigInt::from(3), &big(&[0, 0])).unwrap(), l);
    }

    #[test]
    fn hyperplane_sublattice_matches_construction_a() {
        let mut rng = crate::rng::stream(2, "t");
        let f = FiniteField::new(5, 1).unwrap();
        for _ in 0..10 {
            let l = crate::lattice::tests::random_full_rank(&mut rng, 3, 6);
            let v = sample_hyperplane(5, 3, &mut rng);
            let vr: Vec<Elem> = v.iter().map(|x| u64::try_from(x).unwrap()).collect();
            let code = if vr.iter().all(|&x| x == 0) {
                LinearCode::full_space(&f, 3)
            } else {
                LinearCode::from_parity_check(&f, 3, vec![vr]).unwrap()
            };
            let by_a = l.intersect(&construction_a(&code).unwrap()).unwrap();
            assert_eq!(sparsify_lattice(&l, &BigInt::from(5), &v).unwrap(), by_a);
        }
    }

    #[test]
    fn failing_gates_refuse_only_when_enforced() {
        let g = [GateCheck::new("x", false, "no".into())];
        assert!(apply_gates(GatePolicy::Enforce, &g).is_err());
        assert!(apply_gates(GatePolicy::RecordOnly, &g).is_ok());
    }
}
