use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bratteli"))
        .args(args)
        .env_remove("BVS_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

/// Rows of a CSV as string fields, header first.
fn rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect()
}

fn column(table: &[Vec<String>], name: &str) -> usize {
    table[0].iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name} in {:?}", table[0]))
}

#[test]
fn pascal_is_regular() {
    let out = stdout(&["check", "--builtin", "ex1.2-pascal", "--beta", "2"]);
    assert!(out.lines().any(|l| l == "regular: true"), "{out}");
}

#[test]
fn wrong_arity_is_a_validation_failure() {
    let out = run(&["check", "--builtin", "ex1.2-pascal", "--beta", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("regular: false"));
}

#[test]
fn kuhn_curve_peaks_at_one_half() {
    let out = stdout(&["kuhn-curve", "--beta", "2", "--k", "1", "--level", "12", "--samples", "257"]);
    let t = rows(&out);
    assert_eq!(t[0], ["theta", "entropy_bits_per_symbol"]);
    assert_eq!(t.len(), 258);
    let mid = &t[129];
    assert_eq!(mid[0].parse::<f64>().unwrap(), 0.5);
    assert!((mid[1].parse::<f64>().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn kuhn_curve_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("curve.svg");
    let csv = dir.path().join("curve.csv");
    stdout(&["kuhn-curve", "--level", "8", "--samples", "33", "--svg", svg.to_str().unwrap(), "-o", csv.to_str().unwrap()]);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("<polyline"));
    assert_eq!(rows(&std::fs::read_to_string(&csv).unwrap()).len(), 34);
}

#[test]
fn smb_mean_matches_binary_entropy() {
    let out = stdout(&["smb", "--source", "iid-bernoulli:0.1", "--level", "12", "--samples", "10000", "--seed", "7"]);
    let t = rows(&out);
    let mean: f64 = t[1][column(&t, "mean_bits_per_symbol")].parse().unwrap();
    let se: f64 = t[1][column(&t, "std_err_bits_per_symbol")].parse().unwrap();
    assert!((mean - 0.468996).abs() < 4.0 * se.max(1e-4), "mean {mean}, se {se}");
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["smb", "--source", "iid-mixture:0.5@0.1/0.5@0.4", "--level", "6", "--samples", "500"];
    assert_eq!(stdout(&args), stdout(&args));
    let a = run(&["smb", "--source", "kuhn-theta:0.3", "--level", "5", "--samples", "200", "--seed", "11"]);
    let b = Command::new(env!("CARGO_BIN_EXE_bratteli"))
        .args(["smb", "--source", "kuhn-theta:0.3", "--level", "5", "--samples", "200"])
        .env("BVS_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["check", "--builtin", "nope"]).status.code(), Some(3));
    assert_eq!(run(&["smb", "--source", "iid-bernoulli:x"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    let capped = run(&["entropy", "--source", "iid-bernoulli:0.1", "--up-to", "5", "--cap", "10", "--samples", "0"]);
    assert_eq!(capped.status.code(), Some(2));
    assert_eq!(run(&["orbit", "--source", "iid-bernoulli:0.1", "--level", "8", "--cap", "100"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn vertex_roundtrip() {
    let base = ["--builtin", "ex1.2-pascal", "--levels", "3", "--level", "3"];
    let enc = stdout(&[&["encode"][..], &base, &["--vertices", "v3(3),0,2,v1(3)"]].concat());
    let dec = stdout(&[&["decode"][..], &base, &["--bits", enc.trim()]].concat());
    let t = rows(&dec);
    let ordinals: Vec<&str> = t[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ordinals, ["3", "0", "2", "1"]);
}

#[test]
fn text_roundtrip() {
    for text in ["abacabbbccab", "c", "aaaaaaaaaaaaaaaaaaaaaaaaaaaaab"] {
        let enc = stdout(&["encode", "--alphabet", "abc", "--text", text]);
        let len = text.len().to_string();
        let dec = stdout(&["decode", "--alphabet", "abc", "--bits", enc.trim(), "--length", &len]);
        assert_eq!(dec.trim(), text);
    }
}

#[test]
fn corrupted_bits_are_rejected() {
    let enc = stdout(&["encode", "--alphabet", "ab", "--text", "abba"]);
    let (n, hex) = enc.trim().split_once(':').unwrap();
    let longer = format!("{}:{hex}00", n.parse::<usize>().unwrap() + 8);
    let out = run(&["decode", "--alphabet", "ab", "--bits", &longer, "--length", "4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_headers_name_units() {
    let cases: [&[&str]; 6] = [
        &["entropy", "--source", "pascal-mixture:0.5", "--up-to", "3"],
        &["rates", "--source", "pascal-mixture:0.5", "--up-to", "3"],
        &["lossy", "--source", "pascal-mixture:0.5", "--delta", "0.25", "--up-to", "4"],
        &["transport", "--builtin", "ex1.1", "--levels", "2", "--pmf", "0.3,0.7"],
        &["orbit", "--source", "iid-bernoulli:0.1", "--level", "2", "--vertex", "0100"],
        &["smb", "--source", "iid-bernoulli:0.1", "--level", "4", "--samples", "100"],
    ];
    for args in cases {
        let t = rows(&stdout(args));
        assert!(t[0].iter().any(|h| h.contains("bits") || h.contains("probability")), "{args:?}: {:?}", t[0]);
    }
}

#[test]
fn lossy_mixture_covering_is_two() {
    let t = rows(&stdout(&["lossy", "--source", "pascal-mixture:0.5", "--delta", "0.25", "--up-to", "4"]));
    let m = column(&t, "covering_size");
    assert!(t[1..].iter().all(|r| r[m] == "2"));
}

#[test]
fn orbit_sum_telescopes() {
    let out = run(&["orbit", "--source", "markov:0.2/0.3", "--level", "3", "--vertex", "01100010"]);
    assert!(out.status.success());
    let t = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(t.len(), 1 + 8);
    let last: f64 = t[8][column(&t, "cumulative_bits")].parse().unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let target: f64 = stderr.split("= ").nth(1).unwrap().split(',').next().unwrap().parse().unwrap();
    assert!((last - target).abs() < 1e-9, "{stderr}");
}

#[test]
fn transport_of_two_point_diagram_is_fixed() {
    let t = rows(&stdout(&["transport", "--builtin", "ex1.1", "--levels", "3", "--pmf", "0.5,0.5"]));
    let p = column(&t, "probability");
    assert!(t[1..].iter().all(|r| r[p].parse::<f64>().unwrap() == 0.5));
}

#[test]
fn canonical_pascal_strings() {
    let t = rows(&stdout(&["canonicalize", "--builtin", "ex1.2-pascal", "--levels", "2"]));
    let s = column(&t, "canonical_string");
    let level2: Vec<&str> = t[1..].iter().filter(|r| r[0] == "2").map(|r| r[s].as_str()).collect();
    assert_eq!(level2, ["v0(0) v0(0) v0(0) v0(0)", "v0(0) v0(0) v0(0) v1(0)", "v0(0) v1(0) v1(0) v1(0)", "v1(0) v1(0) v1(0) v1(0)"]);
}

#[test]
fn source_checks() {
    let ok = stdout(&["check", "--source", "pascal-mixture:0.5", "--levels", "10"]);
    assert!(ok.contains("consistent: true"));
    let sampled = stdout(&["check", "--source", "iid-bernoulli:0.2", "--levels", "3", "--samples", "2000"]);
    assert!(sampled.ends_with("consistent: true\n"), "{sampled}");
}
