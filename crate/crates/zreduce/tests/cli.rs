//! End-to-end runs of the command line through `cli::run`.

use std::fs;
use std::path::Path;

use zreduce::cli::{run, EXIT_BUDGET, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE};

struct Output {
    code: i32,
    out: String,
    err: String,
}

fn zreduce(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("zreduce").chain(args.iter().copied()), &mut out, &mut err);
    Output {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

fn square_poly(dir: &Path) -> String {
    let p = path(dir, "p.poly");
    fs::write(&p, "z0 - z1^2\n").unwrap();
    p
}

#[test]
fn reduce_lift_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let poly = square_poly(dir.path());
    let (circ, bundle) = (path(dir.path(), "f.circ"), path(dir.path(), "w.bundle"));

    let r = zreduce(&["reduce", "--n", "1", "--param", "1", &poly, "-o", &circ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert!(r.out.is_empty());
    let text = fs::read_to_string(&circ).unwrap();
    assert!(text.starts_with("# encoding: repaired\n# n: 1\n# unknowns: 11\n# manifest: z1, m, r, s, t, v0, x0, y0, v1, x1, y1\n# parameter: a = 1\n"));

    let r = zreduce(&["lift", "--n", "1", "--param", "1", "--witness", "-1", &poly, "-o", &bundle]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let lifted = fs::read_to_string(&bundle).unwrap();
    assert!(lifted.contains("y = -4\nS = -1\ntau = 15\n"));

    let r = zreduce(&["--threads", "2", "lift", "--n", "1", "--param", "1", "--witness", "-1", &poly]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out, lifted);

    let r = zreduce(&["verify", &circ, &bundle]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "true\n"), "{}", r.err);

    // the symbolic circuit takes the parameter from the bundle
    let symbolic = path(dir.path(), "sym.circ");
    assert_eq!(zreduce(&["reduce", "--n", "1", &poly, "-o", &symbolic]).code, EXIT_OK);
    assert_eq!(zreduce(&["verify", &symbolic, &bundle]).out, "true\n");
}

#[test]
fn verify_rejects_tampered_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let poly = square_poly(dir.path());
    let (circ, bundle) = (path(dir.path(), "f.circ"), path(dir.path(), "w.bundle"));
    assert_eq!(zreduce(&["reduce", "--n", "1", "--param", "2", &poly, "-o", &circ]).code, EXIT_OK);
    assert_eq!(
        zreduce(&["lift", "--n", "1", "--param", "1", "--witness", "-1", &poly, "-o", &bundle]).code,
        EXIT_OK
    );
    let r = zreduce(&["verify", &circ, &bundle]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_NEGATIVE, "false\n"));
    assert!(r.err.contains("a = 2"), "{}", r.err);

    let sym = path(dir.path(), "sym.circ");
    assert_eq!(zreduce(&["reduce", "--n", "1", &poly, "-o", &sym]).code, EXIT_OK);
    let text = fs::read_to_string(&bundle).unwrap();
    let edited = path(dir.path(), "edited.bundle");
    fs::write(&edited, text.replacen("\nz1 = -1\n", "\nz1 = 1\n", 1)).unwrap();
    let r = zreduce(&["verify", &sym, &edited]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_NEGATIVE, "false\n"));

    fs::write(&edited, "not a bundle").unwrap();
    assert_eq!(zreduce(&["verify", &sym, &edited]).code, EXIT_USAGE);
}

#[test]
fn lift_failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let poly = square_poly(dir.path());
    let base = ["lift", "--n", "1", "--param", "1", "--witness"];

    let r = zreduce(&[&base[..], &["-1", "--encoding", "paper", &poly]].concat());
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.err.contains("no admissible t: |t·yⁿ| = 16 > |S| = 1"), "{}", r.err);

    let r = zreduce(&[&["--budget", "5"][..], &base, &["-1", &poly]].concat());
    assert_eq!(r.code, EXIT_BUDGET, "{}", r.err);

    let r = zreduce(&[&base[..], &["2", &poly]].concat());
    assert_eq!(r.code, EXIT_USAGE, "{}", r.err);

    let r = zreduce(&[&base[..], &["-1", &path(dir.path(), "missing.poly")]].concat());
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn usage_errors() {
    assert_eq!(zreduce(&[]).code, EXIT_USAGE);
    assert_eq!(zreduce(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(zreduce(&["verify", "--suite", "nope"]).code, EXIT_USAGE);
    assert_eq!(zreduce(&["verify", "--suite", "pell", "--limit", "3"]).code, EXIT_USAGE);
    assert_eq!(zreduce(&["verify", "--box", "2"]).code, EXIT_USAGE);
    assert_eq!(zreduce(&["--threads", "0", "pell"]).code, EXIT_USAGE);
    assert_eq!(zreduce(&["is-square", "--d", "4", "1"]).code, EXIT_USAGE);
    assert_eq!(zreduce(&["verify", "--suite", "lemma33", "--t", "3..1"]).code, EXIT_USAGE);
    assert_eq!(zreduce(&["--help"]).code, EXIT_OK);
}

#[test]
fn suite_reports_are_deterministic() {
    let args = ["verify", "--suite", "lemma21", "--d", "1,3,7", "--box", "4"];
    let one = zreduce(&args);
    let many = zreduce(&[&["--threads", "3"][..], &args].concat());
    assert_eq!(one.code, EXIT_OK);
    assert_eq!(one.out, many.out);
    assert!(one.out.contains("violations: 0"), "{}", one.out);
}

#[test]
fn arithmetic_commands() {
    let r = zreduce(&["check-rational", "--d", "1", "1; -2"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.starts_with("RATIONAL "));
    let r = zreduce(&["check-rational", "--d", "1", "w"]);
    assert_eq!(r.code, EXIT_NEGATIVE);
    assert!(r.out.starts_with("IRRATIONAL "));

    assert_eq!(zreduce(&["is-square", "--d", "1", "2w"]).out, "1 + 1w\n");
    let r = zreduce(&["is-square", "--d", "1", "3"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_NEGATIVE, "NONE\n"));

    assert_eq!(zreduce(&["pell", "--count", "4"]).out, "0 1 0\n1 2 1\n2 7 4\n3 26 15\n");

    let r = zreduce(&["combine", "--op", "lemma31", "1", "4", "1", "5", "2"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_OK, "f = 0\nroots 1, 2; T/S = 5\n"));
    let r = zreduce(&["combine", "--op", "lemma32", "w", "0"]);
    assert_eq!((r.code, r.out.as_str()), (EXIT_NEGATIVE, "x^2 + 2y^2 = -1\n"));
}

#[test]
fn flatten_writes_one_equation_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let poly = path(dir.path(), "cube.poly");
    fs::write(&poly, "x^3 - y*z + 2\n").unwrap();
    let r = zreduce(&["flatten", &poly]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let mut lines = r.out.lines();
    assert!(lines.next().unwrap().starts_with("vars: x, y, z"));
    assert!(lines.count() >= 2);
    assert_eq!(zreduce(&["flatten", &poly]).out, r.out);
}
