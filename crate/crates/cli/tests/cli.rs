use std::process::{Command, Output};

fn nkindex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nkindex")).args(args).output().expect("spawn nkindex")
}

fn stdout(args: &[&str]) -> String {
    let out = nkindex(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn code(args: &[&str]) -> i32 {
    nkindex(args).status.code().expect("exit code")
}

fn write_tmp(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("nkindex-{}-{name}", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn documented_examples() {
    assert_eq!(stdout(&["necklace", "index", "3", "2", "3"]), "011");
    assert_eq!(stdout(&["necklace", "index", "3", "2", "9"]), "TOO_LARGE");
    assert_eq!(stdout(&["necklace", "count", "1", "7"]), "7 7");
}

#[test]
fn counts_and_lyndon() {
    assert_eq!(stdout(&["necklace", "count", "6", "2"]), "14 9");
    assert_eq!(stdout(&["lyndon", "index", "4", "2", "1"]), "0001");
    assert_eq!(stdout(&["lyndon", "index", "4", "2", "4"]), "TOO_LARGE");
    assert_eq!(stdout(&["lyndon", "rank", "1000"]), "1 0001");
    assert_eq!(stdout(&["classes-less", "0110"]), "4");
    assert_eq!(stdout(&["classes-less", "0110", "--period", "4"]), "8 11");
}

#[test]
fn index_then_rank_round_trip() {
    for (n, q) in [(5usize, "2"), (4, "3"), (3, "12")] {
        let (total, _) = stdout(&["necklace", "count", &n.to_string(), q]).split_once(' ').map(|(a, b)| (a.to_string(), b.to_string())).unwrap();
        let total: u64 = total.parse().unwrap();
        for j in (1..=total).step_by(3) {
            let w = stdout(&["necklace", "index", &n.to_string(), q, &j.to_string()]);
            let ranked = stdout(&["necklace", "rank", &w, "-q", q]);
            assert_eq!(ranked, format!("{j} {w}"));
        }
    }
}

#[test]
fn json_lines_output() {
    let line = stdout(&["--format", "json-lines", "necklace", "index", "3", "2", "3"]);
    let v: serde_json::Value = serde_json::from_str(&line).unwrap();
    assert_eq!(v["op"], "necklace index");
    assert_eq!(v["inputs"]["j"], "3");
    assert_eq!(v["result"], "011");
}

#[test]
fn irreducibles_through_generated_advice() {
    let advice = stdout(&["irred", "gen-advice", "2", "4", "--seed", "3"]);
    let path = write_tmp("gf16.txt", &advice);
    assert_eq!(stdout(&["irred", "count", "2", "4"]), "3");
    let mut polys: Vec<String> = (1..=3).map(|i| stdout(&["irred", "index", "2", "4", &i.to_string(), "--advice", &path])).collect();
    polys.sort();
    assert_eq!(polys, ["1 0 0 1 1", "1 1 0 0 1", "1 1 1 1 1"]);
    assert_eq!(stdout(&["irred", "index", "2", "4", "4", "--advice", &path]), "TOO_LARGE");
    assert_eq!(code(&["irred", "index", "2", "3", "1", "--advice", &path]), 3);
}

#[test]
fn bch_entries() {
    let path = write_tmp("gf8.txt", "2 1\n3\n1 1 0 1\n");
    assert_eq!(stdout(&["bch", "rows", "--advice", &path, "--d", "3"]), "1 3");
    assert_eq!(stdout(&["bch", "gen-entry", "--advice", &path, "--d", "3", "--row", "1", "--col", "0"]), "1");
    assert_eq!(stdout(&["bch", "pc-entry", "--advice", &path, "--d", "3", "--row", "1", "--col", "g^0"]), "1 0 0");
    assert_eq!(stdout(&["bch", "pc-entry", "--advice", &path, "--d", "3", "--row", "9", "--col", "g^0"]), "TOO_LARGE");
    assert_eq!(code(&["bch", "pc-entry", "--advice", &path, "--d", "3", "--row", "1", "--col", "0"]), 2);
    let matrix = stdout(&["bch", "gen-matrix", "--advice", &path, "--d", "3"]);
    assert_eq!(matrix.lines().count(), 1);
    assert!(matrix.lines().all(|l| l.split(' ').count() == 8));
    // Degree bound 4 over F_8 gives the extended Hamming code.
    assert_eq!(stdout(&["bch", "rows", "--advice", &path, "--d", "4"]), "4 3");
    let hamming = stdout(&["bch", "gen-matrix", "--advice", &path, "--d", "4"]);
    for line in hamming.lines().skip(1) {
        assert_eq!(line.split(' ').filter(|&b| b == "1").count(), 4, "{line}");
    }
}

#[test]
fn top_heavy_commands() {
    assert_eq!(stdout(&["topheavy", "check", "110"]), "true");
    assert_eq!(stdout(&["topheavy", "check", "101"]), "false");
    assert_eq!(stdout(&["topheavy", "canon", "01011"]), "2 11010");
    assert_eq!(stdout(&["topheavy", "count", "13"]), "632");
    assert_eq!(code(&["topheavy", "count", "12"]), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["necklace", "index", "3", "x", "1"]), 2);
    assert_eq!(code(&["necklace", "index", "3", "1", "1"]), 2);
    assert_eq!(code(&["necklace", "rank", "012"]), 2);
    assert_eq!(code(&["irred", "count", "4", "2"]), 2);
    assert_eq!(code(&["irred", "index", "2", "3", "1", "--advice", "/nonexistent/advice"]), 3);
    let bad = write_tmp("reducible.txt", "2 1\n3\n1 0 1 1\n1 1 1 1\n");
    assert_eq!(code(&["irred", "index", "2", "3", "1", "--advice", &bad]), 3);
    let garbage = write_tmp("garbage.txt", "hello\n");
    assert_eq!(code(&["bch", "rows", "--advice", &garbage, "--d", "1"]), 3);
    assert_eq!(code(&["irred", "gen-advice", "2", "400"]), 4);
}
