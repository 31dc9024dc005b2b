//! Acceptance criteria 1-9. Each criterion prints one PASS/FAIL line; the
//! binary exits non-zero if any fails.

use std::path::Path;
use std::time::Instant;

use gadgetforge::cli_io::fixtures::{self, CVP_MICRO_RHO, NCP_MICRO_H};
use gadgetforge::distance::{min_distance, min_distance_at_least};
use gadgetforge::gadgets::{build_bch, build_rs_lattice, BchSpec};
use gadgetforge::lattice::norm::{check_l2_lower_bound, check_lp_lower_bound};
use gadgetforge::lattice::{lambda1, lambda1_capped, minkowski_check, short_vectors, IntegerLattice, NormSpec};
use gadgetforge::reductions::{
    cvp_intermediate_lattice, cvp_to_svp, lattice_digest, ncp2_to_svp_tensorable, ncp_intermediate_code,
    ncp_to_mdp, tensor_boost_svp, tensorable_gadget, tensorable_intermediate_lattice, CvpSvpOptions, GatePolicy,
    NcpMdpOptions,
};
use gadgetforge::verify::{
    census_code, census_lattice, check_haviv_regev, classify_mdp, classify_svp, sparsifier_stats, HrOutcome,
    SparsifierKind, Verdict,
};
use gadgetforge::{Budget, FiniteField, LinearCode};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const BUDGET: Budget = Budget(1 << 32);
const RUNS: u64 = 100;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn bch_grid() -> Outcome {
    let mut checked = 0;
    for q in [2u64, 3, 4, 5] {
        for r in 2..=4u32 {
            let m = q.pow(r) - 1;
            if m > 255 {
                continue;
            }
            for d in 1..=7usize.min(m as usize) {
                let spec = BchSpec::new(q, r, d).map_err(e)?;
                let b = build_bch(spec).map_err(e)?;
                let ok = min_distance_at_least(&b.code, d, BUDGET).map_err(e)?;
                ensure(ok, || format!("q={q} r={r} d={d}: codeword of weight below d"))?;
                ensure(b.code.codimension() <= spec.codimension_bound(), || {
                    format!("q={q} r={r} d={d}: codimension {}", b.code.codimension())
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} codes"))
}

fn random_code(rng: &mut ChaCha8Rng, f: &FiniteField, q: u64, max_dim: usize) -> LinearCode {
    let m = rng.gen_range(3..=6);
    let n = rng.gen_range(1..=max_dim);
    loop {
        let vs: Vec<Vec<u64>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(0..q)).collect()).collect();
        let c = LinearCode::from_spanning_vectors(f, m, &vs).unwrap();
        if c.dimension() == n {
            return c;
        }
    }
}

fn tensor_multiplicativity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fields = [(2u64, 2u64, 1u32), (3, 3, 1), (4, 2, 2)];
    for i in 0..20 {
        let (q, p, ex) = fields[i % fields.len()];
        let f = FiniteField::new(p, ex).map_err(e)?;
        let dims = if q == 2 { 3 } else { 2 };
        let c1 = random_code(&mut rng, &f, q, dims);
        let c2 = random_code(&mut rng, &f, q, dims);
        let t = c1.tensor(&c2).map_err(e)?;
        let d1 = min_distance(&c1, BUDGET).map_err(e)?.distance.unwrap();
        let d2 = min_distance(&c2, BUDGET).map_err(e)?.distance.unwrap();
        let dt = min_distance(&t, BUDGET).map_err(e)?.distance.unwrap();
        ensure(dt == d1 * d2, || format!("pair {i}: {dt} != {d1} * {d2}"))?;
    }
    Ok("20 pairs".into())
}

fn rs_bound() -> Outcome {
    let mut checked = 0;
    for q in [2u64, 3, 5, 7, 11, 13] {
        for ell in 1..=(q as usize / 2) {
            let l = build_rs_lattice(q, ell).map_err(e)?;
            for p in 1..=3 {
                let v = lambda1(&l, NormSpec::integral(p).map_err(e)?, BUDGET).map_err(e)?.value_pow.unwrap();
                ensure(v >= BigUint::from(2 * ell), || format!("q={q} l={ell} p={p}: {v} < {}", 2 * ell))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (q, l, p) triples"))
}

fn sparsifier_rates() -> Outcome {
    let kinds = [
        SparsifierKind::Code { q: 2, h: 2 },
        SparsifierKind::Code { q: 3, h: 1 },
        SparsifierKind::Lattice { rho: 5 },
        SparsifierKind::Lattice { rho: 7 },
    ];
    let mut zs = Vec::new();
    for (i, k) in kinds.into_iter().enumerate() {
        let s = sparsifier_stats(k, 100_000, 40 + i as u64).map_err(e)?;
        ensure(s.single.within_4_sigma && s.pair.within_4_sigma, || {
            format!("{k:?}: z = {:.2}, {:.2}", s.single.z, s.pair.z)
        })?;
        zs.push(format!("{:.2}/{:.2}", s.single.z, s.pair.z));
    }
    Ok(format!("z single/pair: {}", zs.join(", ")))
}

/// Upper band on a failure count: `n p + 4 sqrt(n p (1 - p))`.
fn band(n: u64, p: f64) -> f64 {
    let p = p.min(1.0);
    n as f64 * p + 4.0 * (n as f64 * p * (1.0 - p)).sqrt()
}

fn ncp_to_mdp_micro() -> Outcome {
    let fx = fixtures::ncp_micro(BUDGET).map_err(e)?;
    let q = fx.gadget.params.q;
    let d = fx.gadget.params.d;
    let opts = NcpMdpOptions {
        h: Some(NCP_MICRO_H),
        policy: GatePolicy::RecordOnly,
        budget: Some(BUDGET),
        ..Default::default()
    };
    let g = fx.gadget.code().map_err(e)?;
    let census = |inst: &gadgetforge::reductions::NcpInstance, k_out: usize| {
        let c_int = ncp_intermediate_code(inst, &fx.gadget).map_err(e)?;
        census_code(&c_int, &inst.code().map_err(e)?, &g, k_out, d, BUDGET).map_err(e)
    };
    let (mut survived, mut no_fail, mut annoying) = (0, 0, 0);
    for seed in 0..RUNS {
        let (yes, rep) = ncp_to_mdp(&fx.yes, &fx.gadget, seed, &opts).map_err(e)?;
        let c = census(&fx.yes, yes.k)?;
        ensure(c.good > 0, || format!("seed {seed}: YES census finds no good word"))?;
        if rep.witness_survived == Some(true) {
            survived += 1;
            let v = classify_mdp(&yes, BUDGET).map_err(e)?.verdict;
            ensure(v == Verdict::Yes, || format!("seed {seed}: surviving witness but verdict {v:?}"))?;
        }
        let (no, _) = ncp_to_mdp(&fx.no, &fx.gadget, seed, &opts).map_err(e)?;
        let c = census(&fx.no, no.k)?;
        ensure(c.structure_ok, || format!("seed {seed}: NO census has a light non-annoying word"))?;
        annoying = c.annoying;
        if classify_mdp(&no, BUDGET).map_err(e)?.verdict != Verdict::No {
            no_fail += 1;
        }
    }
    let p = 2.0 * annoying as f64 / (q as f64).powi(NCP_MICRO_H as i32);
    let limit = band(RUNS, p);
    ensure(f64::from(no_fail) <= limit, || format!("NO failures {no_fail} > {limit:.1}"))?;
    Ok(format!(
        "YES witness survived {survived}/{RUNS}, all YES; NO failures {no_fail}/{RUNS} (A = {annoying}, limit {limit:.1})"
    ))
}

fn cvp_to_svp_micro() -> Outcome {
    let fx = fixtures::cvp_micro(BUDGET).map_err(e)?;
    let opts = CvpSvpOptions {
        rho: Some(CVP_MICRO_RHO),
        policy: GatePolicy::Enforce,
        budget: Some(BUDGET),
        timing: false,
    };
    let p = fx.yes.p;
    let (mut survived, mut no_fail, mut annoying) = (0, 0, 0);
    for seed in 0..RUNS {
        let (yes, rep) = cvp_to_svp(&fx.yes, &fx.gadget, seed, &opts).map_err(e)?;
        let l_int = cvp_intermediate_lattice(&fx.yes, &fx.gadget).map_err(e)?;
        let no_pow = yes.no_threshold_pow().map_err(e)?;
        let c = census_lattice(&l_int, fx.yes.m, &yes.threshold_pow, &no_pow, p, BUDGET).map_err(e)?;
        ensure(c.good > 0, || format!("seed {seed}: YES census finds no good vector"))?;
        ensure(c.last_coordinates.iter().all(|x| x.abs() <= BigInt::one()), || {
            format!("seed {seed}: short vector with last coordinate outside -1..=1")
        })?;
        if rep.witness_survived == Some(true) {
            survived += 1;
            let v = classify_svp(&yes, BUDGET).map_err(e)?.verdict;
            ensure(v == Verdict::Yes, || format!("seed {seed}: surviving witness but verdict {v:?}"))?;
        }
        let (no, _) = cvp_to_svp(&fx.no, &fx.gadget, seed, &opts).map_err(e)?;
        let l_int = cvp_intermediate_lattice(&fx.no, &fx.gadget).map_err(e)?;
        let no_pow = no.no_threshold_pow().map_err(e)?;
        let c = census_lattice(&l_int, fx.no.m, &no.threshold_pow, &no_pow, p, BUDGET).map_err(e)?;
        ensure(c.structure_ok, || format!("seed {seed}: NO census has a light vector off the (x,0,0) shape"))?;
        annoying = c.annoying;
        if classify_svp(&no, BUDGET).map_err(e)?.verdict != Verdict::No {
            no_fail += 1;
        }
    }
    let prob = 2.0 * annoying as f64 / CVP_MICRO_RHO as f64;
    let limit = band(RUNS, prob);
    ensure(f64::from(no_fail) <= limit, || format!("NO failures {no_fail} > {limit:.1}"))?;
    Ok(format!(
        "YES witness survived {survived}/{RUNS}, all YES; NO failures {no_fail}/{RUNS} (A = {annoying}, limit {limit:.1})"
    ))
}

fn tensorability() -> Outcome {
    let fx = fixtures::ncp_micro(BUDGET).map_err(e)?;
    let inst = &fx.tensorable_no;
    let opts = fixtures::tensorable_options();
    let gp = fixtures::tensorable_gamma_prime();
    let d_pow = BigRational::one();
    let c = opts.c;
    let rho = opts.rho.unwrap();
    let runs = 20;
    let (mut no_fail, mut annoying) = (0, 0);
    let mut full = None;
    for seed in 0..runs {
        let (mut svp, rep) = ncp2_to_svp_tensorable(inst, NormSpec::l2(), &gp, seed, &opts).map_err(e)?;
        let no_pow = svp.no_threshold_pow().map_err(e)?;
        let light = no_pow.floor().to_integer().to_u128().unwrap();
        // annoying vectors: light vectors of the intermediate lattice, all of
        // which the hyperplane has to remove
        let bch = tensorable_gadget(inst.gamma.to_integer().to_usize().unwrap() * inst.k, 5, 3, seed).map_err(e)?;
        let l_int = tensorable_intermediate_lattice(inst, &bch).map_err(e)?;
        ensure(rep.intermediate_digest == lattice_digest(&l_int), || "intermediate lattice mismatch".into())?;
        annoying = annoying.max(short_vectors(&l_int, None, svp.p, light, BUDGET).map_err(e)?.len());
        let l = svp.lattice().map_err(e)?;
        if lambda1_capped(&l, svp.p, light, BUDGET).map_err(e)?.is_some() {
            no_fail += 1;
        }
        ensure(tensor_boost_svp(&svp, c, BUDGET).is_err(), || "tensoring without a certificate".into())?;
        match check_haviv_regev(&l, &d_pow, svp.p, c, BUDGET).map_err(e)? {
            HrOutcome::Granted(cert) => svp.certificate = Some(cert),
            HrOutcome::Refused { reason, .. } => return Err(format!("seed {seed}: certificate refused: {reason}")),
        }
        let t = tensor_boost_svp(&svp, c, BUDGET).map_err(e)?;
        let lt = t.lattice().map_err(e)?;
        let bound = (&d_pow * &d_pow).floor().to_integer().to_u128().unwrap();
        let hit = lambda1_capped(&lt, t.p, bound, BUDGET).map_err(e)?;
        ensure(hit.is_none(), || format!("seed {seed}: tensor has a vector within (d^2)^p"))?;
        if seed == 0 {
            let v = lambda1(&lt, t.p, BUDGET).map_err(e)?.value_pow.unwrap();
            ensure(v > BigUint::from(bound), || "exact tensor lambda_1 too small".into())?;
            full = Some((lt.ambient_dim(), v));
        }
    }
    let limit = band(runs, 2.0 * annoying as f64 / rho as f64);
    ensure(f64::from(no_fail) <= limit, || format!("NO failures {no_fail} > {limit:.1}"))?;
    let (dim, v) = full.unwrap();
    Ok(format!(
        "{runs} outputs certified at d^p = 1, c = {c}, tensors have no vector within (d^2)^p = 1 \
         (dimension {dim}, exact lambda_1^p = {v} at seed 0); NO failures {no_fail}/{runs} (A = {annoying}, limit {limit:.1})"
    ))
}

fn minkowski_and_norms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..1000 {
        let m = rng.gen_range(2..=4);
        let n = rng.gen_range(1..=m);
        let gens: Vec<Vec<BigInt>> =
            (0..n).map(|_| (0..m).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect()).collect();
        let l = IntegerLattice::from_generators(m, gens).map_err(e)?;
        let cert = minkowski_check(&l, BUDGET).map_err(e)?;
        ensure(cert.holds, || format!("lattice {i}: {cert:?}"))?;
    }
    let ps = ["1", "3/2", "2", "3"].map(|s| s.parse::<NormSpec>().unwrap());
    for i in 0..1000 {
        let len = rng.gen_range(1..=8);
        let v: Vec<BigInt> = (0..len).map(|_| BigInt::from(rng.gen_range(-20i64..=20))).collect();
        for p in ps {
            ensure(check_lp_lower_bound(&v, p).map_err(e)?, || format!("vector {i}, p = {p}: lower bound on l_p"))?;
            ensure(check_l2_lower_bound(&v, p).map_err(e)?, || format!("vector {i}, p = {p}: lower bound on l_2"))?;
        }
    }
    Ok("1000 lattices, 1000 vectors x 4 norms".into())
}

fn cli(args: &[&str]) -> Result<(), String> {
    let mut argv = vec!["gadgetforge"];
    argv.extend_from_slice(args);
    match gadgetforge::cli_io::run(argv) {
        0 => Ok(()),
        code => Err(format!("`{}` exited {code}", args.join(" "))),
    }
}

fn determinism() -> Outcome {
    let base = tempfile::tempdir().map_err(e)?;
    let run_all = |dir: &Path| -> Result<Vec<(String, Vec<u8>)>, String> {
        let fx = dir.join("fx");
        let s = |p: &Path| p.to_str().unwrap().to_string();
        let f = |n: &str| s(&fx.join(n));
        let o = |n: &str| s(&dir.join(n));
        for name in fixtures::NAMES {
            cli(&["fixtures", name, "--out-dir", &s(&fx)])?;
        }
        cli(&["gen-ldc", "--q", "2", "--k", "1", "--m", "10", "--m-prime", "15", "--seed", "9", "-o", &o("ldc.json")])?;
        cli(&[
            "gen-ldl", "--gamma-prime", "1", "--k", "1", "--m", "3", "--seed", "9", "--rs-q", "5", "--ell", "2", "--w",
            "2", "--gamma", "2", "-o", &o("ldl.json"),
        ])?;
        cli(&[
            "reduce", "ncp-to-mdp", "--in", &f("ncp_no.json"), "--gadget", &f("ldc_gadget.json"), "--seed", "42",
            "--h", "2", "--record-gates", "-o", &o("mdp.json"),
        ])?;
        cli(&[
            "reduce", "cvp-to-svp", "--in", &f("cvp_yes.json"), "--gadget", &f("rs_gadget.json"), "--seed", "42",
            "--rho", "7", "-o", &o("svp.json"),
        ])?;
        cli(&[
            "reduce", "ncp2-to-svp", "--in", &f("ncp2_no.json"), "--seed", "42", "--gamma-prime", "3/4", "--alpha",
            "5/6", "--r", "3", "--rho", "11", "--record-gates", "-o", &o("tsvp.json"),
        ])?;
        cli(&["stats", "--kind", "lattice", "--rho", "5", "--trials", "2000", "--seed", "42", "-o", &o("stats.json")])?;
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .map_err(e)?
            .chain(std::fs::read_dir(&fx).map_err(e)?)
            .map(|d| d.unwrap().path())
            .filter(|p| p.is_file())
            .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
            .collect();
        files.sort();
        Ok(files)
    };
    let a = run_all(&base.path().join("a"))?;
    let b = run_all(&base.path().join("b"))?;
    ensure(a.len() == b.len(), || "different file sets".into())?;
    for ((na, ba), (nb, bb)) in a.iter().zip(&b) {
        ensure(na == nb && ba == bb, || format!("{na} differs between runs"))?;
    }
    Ok(format!("{} output files byte-identical", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("BCH grid distance and codimension", bch_grid),
        ("tensor code distance multiplicativity", tensor_multiplicativity),
        ("Reed-Solomon lattice lambda_1 bound", rs_bound),
        ("sparsifier survival statistics", sparsifier_rates),
        ("NCP -> MDP micro end-to-end", ncp_to_mdp_micro),
        ("CVP -> SVP micro end-to-end", cvp_to_svp_micro),
        ("tensorable NO outputs and tensor lambda_1", tensorability),
        ("Minkowski and norm inequalities", minkowski_and_norms),
        ("determinism of randomized subcommands", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.1} s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1} s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
