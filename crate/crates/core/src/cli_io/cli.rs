//! The `gadgetforge` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

use super::{fixtures, read_document, write_document, Document};
use crate::budget::Budget;
use crate::distance::min_distance;
use crate::error::{Error, Result};
use crate::gadgets::{
    build_bch, build_rs_lattice, sample_locally_dense_code, sample_rs_locally_dense_lattice, BchSpec, Density,
    LocallyDenseCode, LocallyDenseLattice, RsOverride, Status,
};
use crate::lattice::{lambda1, IntMatrix, NormSpec};
use crate::reductions::{
    cvp_to_svp, json_digest, ncp2_to_svp_tensorable, ncp_to_mdp, tensor_boost_mdp, tensor_boost_svp, CvpInstance,
    CvpSvpOptions, GatePolicy, MdpInstance, NcpInstance, NcpMdpOptions, SvpInstance, TensorableOptions,
};
use crate::verify::{
    check_haviv_regev, classify_cvp, classify_mdp, classify_ncp, classify_svp, sparsifier_stats, HrOutcome,
    SparsifierKind, Verdict, VerificationReport,
};

#[derive(Parser, Debug)]
#[command(name = "gadgetforge", version, about = "Gadgets, reductions and exact oracles for code and lattice problems")]
struct Cli {
    /// Enumeration budget; overrides GADGETFORGE_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Narrow-sense primitive BCH code.
    GenBch {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Locally dense code from a BCH code.
    GenLdc {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// BCH length to build instead of the formula length.
        #[arg(long)]
        m_prime: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Reed-Solomon Construction-A lattice.
    GenRsLattice {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ell: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Locally dense lattice from a Reed-Solomon lattice.
    GenLdl {
        #[arg(long, default_value = "2")]
        p: NormSpec,
        #[arg(long)]
        gamma_prime: BigRational,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        scale: RsScale,
        #[arg(short, long)]
        out: PathBuf,
    },
    #[command(subcommand)]
    Reduce(Reduce),
    /// Kronecker power of an MDP or SVP instance.
    Tensor {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        c: u32,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Classify an instance or check a gadget with the exact oracles.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        certify: Certify,
    },
    /// Empirical survival rates of a sparsifier.
    Stats {
        #[arg(long, value_parser = ["code", "lattice"])]
        kind: String,
        #[arg(long, default_value_t = 2)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        h: usize,
        #[arg(long, default_value_t = 5)]
        rho: u64,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Write a named fixture set.
    Fixtures {
        name: String,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args, Debug)]
struct RsScale {
    /// Prime RS field size; with --ell and --w replaces the formula sizes.
    #[arg(long, requires_all = ["ell", "w"])]
    rs_q: Option<u64>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    gamma: Option<u64>,
}

impl RsScale {
    fn to_override(&self) -> Option<RsOverride> {
        Some(RsOverride {
            q: self.rs_q?,
            ell: self.ell?,
            w: self.w?,
            gamma: self.gamma,
        })
    }
}

#[derive(Args, Debug)]
struct Certify {
    /// Check the tensoring conditions for an SVP instance at this `d^p`.
    #[arg(long, requires_all = ["certify_c", "certified_out"])]
    certify_d_pow: Option<BigRational>,
    #[arg(long)]
    certify_c: Option<u32>,
    /// Where to write the instance with its certificate attached.
    #[arg(long)]
    certified_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    seed: u64,
    /// Record parameter gates in the report instead of refusing.
    #[arg(long)]
    record_gates: bool,
    /// Put wall-clock time in the report (makes output non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(short, long)]
    out: PathBuf,
}

impl Common {
    fn policy(&self) -> GatePolicy {
        if self.record_gates {
            GatePolicy::RecordOnly
        } else {
            GatePolicy::Enforce
        }
    }
}

#[derive(Subcommand, Debug)]
enum Reduce {
    NcpToMdp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gadget: PathBuf,
        #[arg(long)]
        gamma_prime: Option<BigRational>,
        /// Number of random parity checks, replacing the formula value.
        #[arg(long)]
        h: Option<usize>,
    },
    CvpToSvp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gadget: PathBuf,
        /// Sparsifier prime, replacing a draw from the formula interval.
        #[arg(long)]
        rho: Option<u64>,
    },
    Ncp2ToSvp {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "2")]
        p: NormSpec,
        #[arg(long)]
        gamma_prime: BigRational,
        #[arg(long)]
        alpha: BigRational,
        #[arg(long, default_value_t = 2)]
        c: u32,
        /// BCH length 2^r - 1.
        #[arg(long)]
        r: u32,
        #[arg(long)]
        rho: Option<u64>,
    },
}

/// Payload of a `bch` document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BchDocument {
    pub spec: BchSpec,
    pub q: u64,
    pub m: usize,
    pub n: usize,
    pub exponents: Vec<usize>,
    /// `m x n`, columns span the code.
    pub generator: Vec<Vec<u64>>,
}

/// Payload of an `rs_lattice` document.
#[serde_as]
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RsLatticeDocument {
    pub q: u64,
    pub ell: usize,
    /// `q x q`, columns are basis vectors.
    #[serde_as(as = "Vec<Vec<DisplayFromStr>>")]
    pub basis: IntMatrix,
}

/// Outcome of checking a gadget or code document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetCheck {
    pub kind: String,
    pub digest: String,
    pub ok: bool,
    pub values: std::collections::BTreeMap<String, String>,
    pub status: Option<Status>,
    pub density: Option<Density>,
}

enum Outcome {
    Success,
    Failed(String),
}

/// Runs the CLI on `args` (program name first) and returns the exit code:
/// 0 on success, 1 when a verification fails, 2 on usage or input errors.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::Failed(msg)) => {
            eprintln!("verification failed: {msg}");
            1
        }
        Err(e) => {
            eprintln!("{}: {e}", diagnostic(&e));
            2
        }
    }
}

fn diagnostic(e: &Error) -> &'static str {
    match e {
        Error::Json(_) => "error[malformed-json]",
        Error::Schema(_) => "error[schema]",
        Error::BudgetExceeded { .. } => "error[budget]",
        Error::Io(_) => "error[io]",
        Error::GateViolation(_) => "error[gate]",
        Error::PaperScaleInfeasible(_) => "error[paper-scale]",
        Error::Refused(_) => "error[refused]",
        _ => "error[input]",
    }
}

fn emit<T: Serialize>(out: Option<&Path>, doc: &Document<T>) -> Result<()> {
    match out {
        Some(p) => write_document(p, doc),
        None => {
            print!("{}", String::from_utf8_lossy(&doc.to_bytes()));
            Ok(())
        }
    }
}

fn read_body<T: serde::de::DeserializeOwned>(path: &Path, schema: &str) -> Result<(T, String)> {
    let doc = read_document(path)?;
    let body = doc.body_as::<T>(schema)?;
    Ok((body, json_digest(&doc.body)))
}

fn dispatch(cli: Cli) -> Result<Outcome> {
    let budget = cli.budget.map_or_else(Budget::from_env, Budget);
    match cli.command {
        Command::GenBch { q, r, d, out } => {
            let spec = BchSpec::new(q, r, d)?;
            let b = build_bch(spec)?;
            let body = BchDocument {
                spec,
                q,
                m: b.code.len(),
                n: b.code.dimension(),
                exponents: b.exponents,
                generator: b.code.generator().clone(),
            };
            write_document(&out, &Document::new("bch", None, body))?;
        }
        Command::GenLdc {
            q,
            k,
            m,
            m_prime,
            seed,
            out,
        } => {
            let g = sample_locally_dense_code(q, k, m, seed, m_prime)?;
            write_document(&out, &Document::new("ldc", Some(seed), g))?;
        }
        Command::GenRsLattice { q, ell, out } => {
            let l = build_rs_lattice(q, ell)?;
            let body = RsLatticeDocument {
                q,
                ell,
                basis: l.basis_columns(),
            };
            write_document(&out, &Document::new("rs_lattice", None, body))?;
        }
        Command::GenLdl {
            p,
            gamma_prime,
            k,
            m,
            seed,
            scale,
            out,
        } => {
            let g = sample_rs_locally_dense_lattice(p, &gamma_prime, k, m, seed, scale.to_override())?;
            write_document(&out, &Document::new("ldl", Some(seed), g))?;
        }
        Command::Reduce(r) => reduce(r, budget)?,
        Command::Tensor { input, c, out } => {
            let doc = read_document(&input)?;
            let digest = json_digest(&doc.body);
            match doc.schema.as_str() {
                "mdp" => {
                    let inst: MdpInstance = doc.body_as("mdp")?;
                    let res = tensor_boost_mdp(&inst, c, budget)?;
                    write_document(&out, &Document::new("mdp", None, res).with_input("instance", digest))?;
                }
                "svp" => {
                    let inst: SvpInstance = doc.body_as("svp")?;
                    let res = tensor_boost_svp(&inst, c, budget)?;
                    write_document(&out, &Document::new("svp", None, res).with_input("instance", digest))?;
                }
                other => return Err(Error::Schema(format!("cannot tensor a {other} document"))),
            }
        }
        Command::Verify { input, out, certify } => return verify(&input, out.as_deref(), &certify, budget),
        Command::Stats {
            kind,
            q,
            h,
            rho,
            trials,
            seed,
            out,
        } => {
            let k = if kind == "code" {
                SparsifierKind::Code { q, h }
            } else {
                SparsifierKind::Lattice { rho }
            };
            let s = sparsifier_stats(k, trials, seed)?;
            let ok = s.single.within_4_sigma && s.pair.within_4_sigma;
            emit(out.as_deref(), &Document::new("stats", Some(seed), s))?;
            if !ok {
                return Ok(Outcome::Failed("survival rate outside the 4 sigma band".into()));
            }
        }
        Command::Fixtures { name, out_dir } => {
            for p in fixtures::write_fixtures(&name, &out_dir, budget)? {
                println!("{}", p.display());
            }
        }
    }
    Ok(Outcome::Success)
}

fn reduce(r: Reduce, budget: Budget) -> Result<()> {
    match r {
        Reduce::NcpToMdp {
            common,
            gadget,
            gamma_prime,
            h,
        } => {
            let (inst, di) = read_body::<NcpInstance>(&common.input, "ncp")?;
            let (g, dg) = read_body::<LocallyDenseCode>(&gadget, "ldc")?;
            let opts = NcpMdpOptions {
                gamma_prime,
                h,
                policy: common.policy(),
                budget: Some(budget),
                timing: common.timing,
            };
            let (out, report) = ncp_to_mdp(&inst, &g, common.seed, &opts)?;
            let doc = Document::new("mdp", Some(common.seed), out)
                .with_input("instance", di)
                .with_input("gadget", dg)
                .with_report(report);
            write_document(&common.out, &doc)
        }
        Reduce::CvpToSvp { common, gadget, rho } => {
            let (inst, di) = read_body::<CvpInstance>(&common.input, "cvp")?;
            let (g, dg) = read_body::<LocallyDenseLattice>(&gadget, "ldl")?;
            let opts = CvpSvpOptions {
                rho,
                policy: common.policy(),
                budget: Some(budget),
                timing: common.timing,
            };
            let (out, report) = cvp_to_svp(&inst, &g, common.seed, &opts)?;
            let doc = Document::new("svp", Some(common.seed), out)
                .with_input("instance", di)
                .with_input("gadget", dg)
                .with_report(report);
            write_document(&common.out, &doc)
        }
        Reduce::Ncp2ToSvp {
            common,
            p,
            gamma_prime,
            alpha,
            c,
            r,
            rho,
        } => {
            let (inst, di) = read_body::<NcpInstance>(&common.input, "ncp")?;
            let opts = TensorableOptions {
                alpha,
                c,
                r: Some(r),
                rho,
                policy: common.policy(),
                budget: Some(budget),
                timing: common.timing,
            };
            let (out, report) = ncp2_to_svp_tensorable(&inst, p, &gamma_prime, common.seed, &opts)?;
            let doc = Document::new("svp", Some(common.seed), out)
                .with_input("instance", di)
                .with_report(report);
            write_document(&common.out, &doc)
        }
    }
}

fn verify(input: &Path, out: Option<&Path>, certify: &Certify, budget: Budget) -> Result<Outcome> {
    let doc = read_document(input)?;
    let digest = json_digest(&doc.body);
    let instance_report = |rep: VerificationReport| -> Result<Outcome> {
        let failure = if rep.verdict == Verdict::Undecided {
            Some("oracle undecided within budget".to_string())
        } else if !rep.agrees_with_label() {
            Some(format!("verdict {:?} disagrees with label {:?}", rep.verdict, rep.label))
        } else {
            None
        };
        emit(out, &Document::new("verification", None, rep).with_input("instance", digest.clone()))?;
        Ok(failure.map_or(Outcome::Success, Outcome::Failed))
    };
    match doc.schema.as_str() {
        "ncp" => instance_report(classify_ncp(&doc.body_as("ncp")?, budget)?),
        "cvp" => instance_report(classify_cvp(&doc.body_as("cvp")?, budget)?),
        "mdp" => instance_report(classify_mdp(&doc.body_as("mdp")?, budget)?),
        "svp" => {
            let mut inst: SvpInstance = doc.body_as("svp")?;
            if let (Some(d_pow), Some(c), Some(path)) =
                (&certify.certify_d_pow, certify.certify_c, &certify.certified_out)
            {
                match check_haviv_regev(&inst.lattice()?, d_pow, inst.p, c, budget)? {
                    HrOutcome::Granted(cert) => {
                        inst.certificate = Some(cert);
                        let cdoc = Document::new("svp", doc.seed, inst.clone()).with_input("instance", digest.clone());
                        write_document(path, &cdoc)?;
                    }
                    refused @ HrOutcome::Refused { .. } => {
                        emit(out, &Document::new("certificate_refusal", None, refused))?;
                        return Ok(Outcome::Failed("tensoring conditions do not hold".into()));
                    }
                }
            }
            instance_report(classify_svp(&inst, budget)?)
        }
        "bch" => {
            let b: BchDocument = doc.body_as("bch")?;
            let code = build_bch(b.spec)?.code;
            if code.generator() != &b.generator {
                return Err(Error::Schema("generator does not match a rebuild from the spec".into()));
            }
            let dist = min_distance(&code, budget)?.distance;
            let ok = dist.is_none_or(|x| x >= b.spec.d) && code.codimension() <= b.spec.codimension_bound();
            let mut values = std::collections::BTreeMap::new();
            values.insert("min_distance".into(), dist.map_or("inf".into(), |x| x.to_string()));
            values.insert("dimension".into(), code.dimension().to_string());
            values.insert("codimension_bound".into(), b.spec.codimension_bound().to_string());
            gadget_report(out, "bch", digest, ok, values, None, None)
        }
        "rs_lattice" => {
            let b: RsLatticeDocument = doc.body_as("rs_lattice")?;
            let l = build_rs_lattice(b.q, b.ell)?;
            if l.basis_columns() != b.basis {
                return Err(Error::Schema("basis does not match a rebuild from (q, l)".into()));
            }
            let mut values = std::collections::BTreeMap::new();
            let mut ok = true;
            for p in 1..=3u32 {
                let rep = lambda1(&l, NormSpec::integral(p)?, budget)?;
                let v = rep.value_pow.unwrap_or_default();
                if 2 * b.ell <= b.q as usize {
                    ok &= v >= (2 * b.ell).into();
                }
                values.insert(format!("lambda1_pow_p{p}"), v.to_string());
            }
            gadget_report(out, "rs_lattice", digest, ok, values, None, None)
        }
        "ldc" => {
            let mut g: LocallyDenseCode = doc.body_as("ldc")?;
            let ok = g.verify_structure(budget)?;
            if ok {
                g.estimate_density(budget, 0)?;
            }
            let mut values = std::collections::BTreeMap::new();
            values.insert("d".into(), g.params.d.to_string());
            values.insert("radius".into(), g.params.radius.to_string());
            gadget_report(out, "ldc", digest, ok, values, Some(g.status), g.density)
        }
        "ldl" => {
            let mut g: LocallyDenseLattice = doc.body_as("ldl")?;
            let ok = g.verify_structure(budget)?;
            if ok {
                g.estimate_density(budget, 0)?;
            }
            let mut values = std::collections::BTreeMap::new();
            values.insert("d".into(), g.params.d.to_string());
            values.insert("radius_pow".into(), g.params.radius_pow().to_string());
            gadget_report(out, "ldl", digest, ok, values, Some(g.status), g.density)
        }
        other => Err(Error::Schema(format!("nothing to verify in a {other} document"))),
    }
}

fn gadget_report(
    out: Option<&Path>,
    kind: &str,
    digest: String,
    ok: bool,
    values: std::collections::BTreeMap<String, String>,
    status: Option<Status>,
    density: Option<Density>,
) -> Result<Outcome> {
    let body = GadgetCheck {
        kind: kind.into(),
        digest: digest.clone(),
        ok,
        values,
        status,
        density,
    };
    emit(out, &Document::new("gadget_check", None, body).with_input("gadget", digest))?;
    Ok(if ok {
        Outcome::Success
    } else {
        Outcome::Failed(format!("{kind} fails its structural check"))
    })
}
