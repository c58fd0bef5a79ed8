use std::io::Write as _;
use std::process::{Command, Output};

use cstore_cli::{CheckReport, ReproduceTable, SimulationReport, SpectrumReport};
use cstore::cosetgraph::StorageReport;
use serde::{de::DeserializeOwned, Serialize};

fn cstore(args: &[&str]) -> Output {
    cstore_env(args, None)
}

fn cstore_env(args: &[&str], budget: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cstore"));
    cmd.args(args).env_remove("CSTORE_MEM_BUDGET");
    if let Some(b) = budget {
        cmd.env("CSTORE_MEM_BUDGET", b);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Parses a JSON document into `T` and checks that re-emitting it gives the
/// same bytes.
fn round_trip<T: Serialize + DeserializeOwned>(o: &Output) -> T {
    assert_eq!(o.status.code(), Some(0), "{}", stderr(o));
    let text = stdout(o);
    let value: T = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&value).unwrap() + "\n", text);
    value
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn rate_of_the_clebsch_graph() {
    let o = cstore(&["rate", "--family", "repetition:5"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["N: 16", "rank: 6", "K: 10", "rate: 10/16", "rate_reduced: 5/8", "triangle_free: true"] {
        assert!(out.lines().any(|l| l == line), "missing {line:?} in\n{out}");
    }
}

#[test]
fn rate_of_bch_s5_as_json() {
    let r: StorageReport = round_trip(&cstore(&["rate", "--family", "bch2:5", "--format", "json"]));
    assert_eq!(r.rate.reduced_string(), "347/512");
    assert_eq!((r.k, r.n_vertices), (694, 1024));
}

#[test]
fn rate_from_parity_check_file() {
    let f = temp_file("9 5\n000011110\n001100110\n010101010\n111111110\n000000011\n");
    let r: StorageReport = round_trip(&cstore(&["rate", "--file", f.path().to_str().unwrap(), "--format", "json"]));
    assert_eq!((r.k, r.n_vertices), (22, 32));
    assert_eq!(r.rate.reduced_string(), "11/16");
}

#[test]
fn rate_csv_has_header_and_one_record() {
    let o = cstore(&["rate", "--family", "golay23", "--format", "csv"]);
    let mut rd = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = rd.headers().unwrap().clone();
    let recs: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(recs.len(), 1);
    let get = |k: &str| recs[0][headers.iter().position(|h| h == k).unwrap()].to_string();
    assert_eq!(get("rate"), "1312/2048");
    assert_eq!(get("rate_reduced"), "41/64");
}

#[test]
fn parse_errors_exit_2() {
    let f = temp_file("9 2\n000011110\n0011\n");
    let o = cstore(&["rate", "--file", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    assert_eq!(cstore(&["rate", "--family", "bch2:2"]).status.code(), Some(2));
    assert_eq!(cstore(&["rate", "--file", "/nonexistent/h.txt"]).status.code(), Some(2));
    assert_eq!(cstore(&["rate"]).status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_3_and_env_overrides_flag() {
    let o = cstore(&["rate", "--family", "bch2:6", "--mem-budget", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("capacity"));
    let o = cstore_env(&["rate", "--family", "bch2:6", "--mem-budget", "1000000000"], Some("1000"));
    assert_eq!(o.status.code(), Some(3));
    let o = cstore_env(&["rate", "--family", "bch2:6", "--mem-budget", "1000"], Some("1000000000"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(cstore_env(&["rate", "--family", "bch2:4"], Some("lots")).status.code(), Some(2));
}

#[test]
fn elimination_flags() {
    let plain: StorageReport = round_trip(&cstore(&["rate", "--family", "bch2:6", "--plain", "--format", "json"]));
    let fast: StorageReport = round_trip(&cstore(&["rate", "--family", "bch2:6", "--accelerated", "--format", "json"]));
    assert_eq!(plain.elimination, "plain");
    assert_eq!(fast.elimination, "four-russians:8");
    assert_eq!(plain.k, fast.k);
    assert_eq!(cstore(&["rate", "--family", "bch2:4", "--plain", "--accelerated"]).status.code(), Some(2));
}

#[test]
fn check_clebsch() {
    let c: CheckReport = round_trip(&cstore(&["check", "--family", "repetition:5", "--format", "json"]));
    let cond = c.report.conditions.as_ref().unwrap();
    assert_eq!(cond.odd_length_even_rows.as_str(), "pass");
    let vc = c.vc.unwrap();
    assert_eq!((vc.matching, vc.alpha, vc.pass), (8, 5, true));
    assert!(c.consistent && c.lower_bound_holds);
}

#[test]
fn check_bch7_dual_containment() {
    let c: CheckReport = round_trip(&cstore(&["check", "--family", "bch2:7", "--kmax", "3", "--format", "json"]));
    let cond = c.report.conditions.unwrap();
    let k = |k: usize| cond.dual_power_containment.iter().find(|v| v.k == k).unwrap().verdict.as_str();
    assert_eq!(k(2), "pass");
    // Rate 6387/8192 < 7/8, so the k = 3 condition does not apply.
    assert_eq!(k(3), "not-applicable");
    assert!(c.vc.is_none());
}

#[test]
fn spectrum_histograms() {
    let s: SpectrumReport = round_trip(&cstore(&["spectrum", "--family", "repetition:5", "--histogram", "--format", "json"]));
    assert_eq!((s.degree, s.lambda), (5, 3));
    let h = s.histogram.unwrap();
    assert_eq!(h.iter().map(|e| e.multiplicity).sum::<u64>(), 16);
    let s: SpectrumReport = round_trip(&cstore(&["spectrum", "--family", "ext-hamming:3", "--format", "json"]));
    assert_eq!(s.lambda, s.degree);
    assert!(s.bipartite);
    let s: SpectrumReport = round_trip(&cstore(&["spectrum", "--family", "bch2:5", "--histogram", "--format", "json"]));
    assert_eq!(s.histogram.unwrap().iter().map(|e| e.multiplicity).sum::<u64>(), 1024);
}

#[test]
fn simulate_without_guarantee() {
    let s: SimulationReport = round_trip(&cstore(&[
        "simulate", "--graph", "cayley:repetition:5", "--t", "2", "--format", "json",
    ]));
    assert_eq!(s.lambda, "3");
    assert_eq!(s.threshold, "-1/5");
    assert!(!s.guaranteed);
    let text = stdout(&cstore(&["simulate", "--graph", "cayley:repetition:5", "--t", "2"]));
    assert!(text.contains("no"), "{text}");
}

#[test]
fn simulate_guarantee_and_threshold_only() {
    let s: SimulationReport = round_trip(&cstore(&[
        "simulate", "--graph", "cayley:repetition:5", "--t", "4", "--trials", "300", "--format", "json",
    ]));
    let m = s.mixing.unwrap();
    assert!(m.guaranteed && m.exhaustive && m.holds());
    assert_eq!(m.erased_size, 3);
    let s: SimulationReport = round_trip(&cstore(&[
        "simulate", "--graph", "complete:9", "--t", "7", "--trials", "0", "--format", "json",
    ]));
    assert!(s.mixing.is_none() && s.pc.is_none());
    assert_eq!(s.lambda, "1");
    assert_eq!(s.threshold, "3/4");
}

#[test]
fn simulate_torus_pc_is_seed_reproducible() {
    let args = ["simulate", "--graph", "torus:16x16", "--t", "1", "--trials", "0", "--pc-trials", "100", "--format", "csv"];
    let a = cstore(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let mut one_thread = args.to_vec();
    one_thread.extend(["--threads", "1"]);
    assert_eq!(a.stdout, cstore(&one_thread).stdout);
    let out = stdout(&a);
    assert!(out.starts_with("graph,seed,p,trials,successes,wilson_lo,wilson_hi\n"));
    assert!(out.lines().skip(1).all(|l| l.starts_with("torus:16x16,0,")));
    let mut other_seed = args.to_vec();
    other_seed.extend(["--seed", "5"]);
    assert_ne!(a.stdout, cstore(&other_seed).stdout);

    let s: SimulationReport = round_trip(&cstore(&[
        "simulate", "--graph", "torus:16x16", "--t", "1", "--trials", "0", "--pc-trials", "100", "--format", "json",
    ]));
    let pc = s.pc.unwrap();
    assert!(!pc.degenerate && pc.hi - pc.lo < 0.01);
}

#[test]
fn simulate_input_errors() {
    let f = temp_file("4 3\n0 1\n1 2\n2 3\n");
    let path = format!("edges:{}", f.path().display());
    let o = cstore(&["simulate", "--graph", &path, "--t", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("regular"));
    assert_eq!(cstore(&["simulate", "--graph", "cycle:8", "--t", "2"]).status.code(), Some(2));
    assert_eq!(
        cstore(&["simulate", "--graph", "cycle:8", "--t", "1", "--pc-trials", "50"]).status.code(),
        Some(2)
    );
    assert_eq!(cstore(&["simulate", "--graph", "mobius:8", "--t", "1"]).status.code(), Some(2));
}

#[test]
fn simulate_edge_list_file() {
    let f = temp_file("5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    let path = format!("edges:{}", f.path().display());
    let s: SimulationReport = round_trip(&cstore(&["simulate", "--graph", &path, "--t", "1", "--format", "json"]));
    assert_eq!((s.n, s.d), (5, 2));
    assert_eq!(s.lambda_method, "dense-eigensolver");
    assert_eq!(s.lambda, "1619/1000");
}

#[test]
fn reproduce_table_matches() {
    let t: ReproduceTable = round_trip(&cstore(&["reproduce", "--format", "json"]));
    assert!(t.all_match && !t.extended);
    assert_eq!(t.rows.len(), 16);
    let row = |f: &str| t.rows.iter().find(|r| r.family == f).unwrap();
    assert_eq!(row("bch2:6").rate.unwrap().reduced_string(), "1497/2048");
    assert_eq!((row("repetition:9").k, row("repetition:9").n_vertices), (Some(136), Some(256)));
    assert_eq!(row("repetition:9").closed_form, Some(true));
    assert_eq!(row("rm-quadratic:4").source, "regression");
}

#[test]
fn reproduce_reports_capacity_failures() {
    let o = cstore(&["reproduce", "--mem-budget", "100000", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("repetition:5,") && l.contains(",match,")));
    assert!(out.lines().any(|l| l.starts_with("bch2:7,") && l.contains(",error,")));
}
