//! Exit codes and file outputs of the command line.

use gadgetforge::cli_io::{read_document, run};

fn cli(args: &[&str]) -> i32 {
    let mut argv = vec!["gadgetforge"];
    argv.extend_from_slice(args);
    run(argv)
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    assert_eq!(cli(&["--help"]), 0);
    assert_eq!(cli(&["no-such-command"]), 2);
    // randomized subcommands need a seed
    assert_eq!(cli(&["gen-ldc", "--q", "2", "--k", "1", "--m", "4", "-o", &p("x.json")]), 2);
    assert_eq!(cli(&["verify", "--in", &p("missing.json")]), 2);
    std::fs::write(p("bad.json"), "{").unwrap();
    assert_eq!(cli(&["verify", "--in", &p("bad.json")]), 2);
    assert_eq!(cli(&["fixtures", "nope", "--out-dir", &p("fx")]), 2);

    assert_eq!(cli(&["gen-bch", "--q", "2", "--r", "4", "--d", "5", "-o", &p("bch.json")]), 0);
    let doc = read_document(std::path::Path::new(&p("bch.json"))).unwrap();
    assert_eq!(doc.schema, "bch");
    assert_eq!(doc.body["m"], 15);
    assert!(doc.body["n"].as_u64().unwrap() >= 7);
    assert_eq!(cli(&["verify", "--in", &p("bch.json"), "-o", &p("bch_check.json")]), 0);
    let check = read_document(std::path::Path::new(&p("bch_check.json"))).unwrap();
    assert_eq!(check.body["values"]["min_distance"], "5");

    // a document with the wrong label makes verify fail
    assert_eq!(cli(&["fixtures", "ncp-micro", "--out-dir", &p("fx")]), 0);
    let yes = std::fs::read_to_string(p("fx/ncp_yes.json")).unwrap();
    std::fs::write(p("lie.json"), yes.replace("\"YES\"", "\"NO\"")).unwrap();
    assert_eq!(cli(&["verify", "--in", &p("lie.json"), "-o", &p("r.json")]), 1);
    // a schema mismatch is an input error
    assert_eq!(
        cli(&["reduce", "ncp-to-mdp", "--in", &p("fx/ldc_gadget.json"), "--gadget", &p("fx/ldc_gadget.json"),
              "--seed", "1", "-o", &p("m.json")]),
        2
    );
}

#[test]
fn reduce_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    assert_eq!(cli(&["fixtures", "ncp-micro", "--out-dir", &p("")]), 0);
    // seed 1 kills the annoying word e_1 in the NO instance
    let mut ok = 0;
    for seed in 0..8 {
        let s = seed.to_string();
        let out = p(&format!("mdp{seed}.json"));
        assert_eq!(
            cli(&["reduce", "ncp-to-mdp", "--in", &p("ncp_no.json"), "--gadget", &p("ldc_gadget.json"), "--seed", &s,
                  "--h", "2", "--record-gates", "-o", &out]),
            0
        );
        let doc = read_document(std::path::Path::new(&out)).unwrap();
        assert_eq!(doc.seed, Some(seed));
        assert_eq!(doc.inputs.len(), 2);
        assert!(doc.report.is_some());
        if cli(&["verify", "--in", &out, "-o", &p("v.json")]) == 0 {
            ok += 1;
        }
    }
    assert!(ok > 0);
}
