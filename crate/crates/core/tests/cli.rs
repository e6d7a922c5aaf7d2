use std::path::PathBuf;

use blowup_chern::cli::run;
use blowup_chern::io::ResultDocument;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("blowup-chern").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

#[test]
fn verify_passes_on_every_catalog_model() {
    let (_, list, _) = invoke(&["catalog-list"]);
    for name in list.lines().filter(|n| !n.contains('(')).chain(["pn_point(5)"]) {
        let (code, out, err) = invoke(&["verify", name]);
        assert_eq!(code, 0, "{name}: {out}{err}");
        assert!(!out.contains("FAIL"), "{name}: {out}");
    }
}

#[test]
fn literal_signs_fail_euler_on_odd_codimension() {
    let (code, out, err) = invoke(&["verify", "p3_point", "--convention", "literal"]);
    assert_eq!(code, 2);
    assert!(out.contains("euler"), "{out}");
    assert!(err.contains("euler"), "{err}");
    let (code, _, _) = invoke(&["verify", "p4_point", "--convention", "literal"]);
    assert_eq!(code, 0);
}

#[test]
fn json_output_is_deterministic_and_parses() {
    let (c1, a, _) = invoke(&["chern", "p4_line", "--format", "json"]);
    let (c2, b, _) = invoke(&["chern", "p4_line", "--format", "json"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let doc: ResultDocument = serde_json::from_str(&a).unwrap();
    assert_eq!(doc.format_version, 1);
    assert_eq!(doc.model, "p4_line");
    assert_eq!(doc.chern_numbers.unwrap()["c4"], 9);
}

#[test]
fn numbers_prints_every_partition() {
    let (code, out, _) = invoke(&["numbers", "p3_point"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3);
    assert!(out.contains("c1^3 = 56"), "{out}");
    assert!(out.contains("c1*c2 = 24"), "{out}");
    assert!(out.contains("c3 = 6"), "{out}");
}

#[test]
fn ring_lists_bases_and_ranks() {
    let (code, out, _) = invoke(&["ring", "p4_line"]);
    assert_eq!(code, 0);
    let ranks: Vec<&str> = out.lines().map(|l| l.split("rank ").nth(1).unwrap().split(' ').next().unwrap()).collect();
    assert_eq!(ranks, ["1", "2", "3", "2", "1"]);
}

#[test]
fn single_path_flags_agree() {
    let (_, closed, _) = invoke(&["chern", "p4_point", "--via", "closed"]);
    let (_, thom, _) = invoke(&["chern", "p4_point", "--via", "thom"]);
    assert_eq!(closed, thom);
}

#[test]
fn model_files_are_named_by_stem() {
    let (code, out, err) = invoke(&["chern", &data("quadric_point.model"), "--format", "json"]);
    assert_eq!(code, 0, "{err}");
    let doc: ResultDocument = serde_json::from_str(&out).unwrap();
    assert_eq!(doc.model, "quadric_point");
    let numbers = doc.chern_numbers.unwrap();
    assert_eq!((numbers["c1^2"], numbers["c2"]), (7, 5));
}

#[test]
fn malformed_files_exit_one_with_position() {
    let (code, _, err) = invoke(&["chern", &data("malformed/missing_colon.model")]);
    assert_eq!(code, 1);
    assert!(err.contains("line 4, column 15"), "{err}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(invoke(&[]).0, 1);
    assert_eq!(invoke(&["chern", "p2_point", "--format", "yaml"]).0, 1);
    assert_eq!(invoke(&["chern", "pn_point(0)"]).0, 1);
    let (code, out, _) = invoke(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("catalog-list"));
}
