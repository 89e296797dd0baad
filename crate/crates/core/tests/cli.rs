use std::path::PathBuf;
use std::process::{Command, Output};

use fastrev::cli::{format_series_file, parse_series_file, CSV_HEADER};
use fastrev::{PrimeField, Series};

fn fastrev(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fastrev"))
        .args(args)
        .output()
        .expect("spawn fastrev")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn revert_catalan() {
    let o = fastrev(&["revert", "--preset", "catalan", "--n", "6", "--p", "101", "--algorithm", "fast-lagrange"]);
    assert_eq!(o.status.code(), Some(0));
    let g = parse_series_file(&stdout(&o)).unwrap();
    assert_eq!(g.coeffs(), &[0, 1, 1, 2, 5, 14]);
}

#[test]
fn revert_degenerate_length() {
    let o = fastrev(&["revert", "--preset", "catalan", "--n", "2", "--p", "101"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(parse_series_file(&stdout(&o)).unwrap().coeffs(), &[0, 1]);
}

#[test]
fn algorithms_give_identical_bytes() {
    let outputs: Vec<Vec<u8>> = ["lagrange", "fast-lagrange", "fast-lagrange-matrix", "newton-bk21"]
        .iter()
        .map(|alg| {
            let o = fastrev(&["revert", "--preset", "random", "--n", "90", "--seed", "7", "--algorithm", alg]);
            assert_eq!(o.status.code(), Some(0), "{alg}");
            o.stdout
        })
        .collect();
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let all = fastrev(&["revert", "--preset", "random", "--n", "90", "--seed", "7", "--algorithm", "all"]);
    assert_eq!(all.stdout, outputs[0]);
}

#[test]
fn verify_passes_on_presets() {
    let o = fastrev(&["verify", "--preset", "catalan", "--n", "32"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("PASS").count(), 2);

    let o = fastrev(&["verify", "--preset", "f5", "--n", "100", "--p", "9223372036854775837"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("PASS").count(), 2);
}

#[test]
fn verify_rejects_non_unit_linear_term() {
    let path = scratch("a1_zero.txt", "p 101\nn 4\n0 0 1 1\n");
    let o = fastrev(&["verify", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad input"));
}

#[test]
fn parse_errors_exit_two() {
    for (name, body) in [
        ("bad_token.txt", "p 101\nn x\n"),
        ("short.txt", "p 101\nn 3\n0 1\n"),
        ("no_header.txt", "0 1 2\n"),
    ] {
        let path = scratch(name, body);
        let o = fastrev(&["revert", "--input", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{name}");
    }
}

#[test]
fn composite_modulus_exits_one() {
    let o = fastrev(&["revert", "--preset", "catalan", "--n", "5", "--p", "100"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_flag_exits_two() {
    let o = fastrev(&["revert", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compose_methods_agree() {
    let run = |method: &str| {
        let o = fastrev(&[
            "compose", "--preset", "f3", "--inner-preset", "f4", "--n", "40", "--method", method,
        ]);
        assert_eq!(o.status.code(), Some(0), "{method}");
        o.stdout
    };
    assert_eq!(run("horner"), run("bk21"));
}

#[test]
fn bench_rows_and_counts() {
    let o = fastrev(&["bench", "--preset", "random", "--n", "1024", "--algorithms", "all", "--reps", "3", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 12);
    for row in &rows {
        assert_eq!(row.len(), 9);
        assert_eq!(row[1], "random");
        assert_eq!(row[2], "1024");
        assert_eq!(row[3], "42");
    }
    for row in rows.iter().filter(|r| r[0] == "fast-lagrange") {
        assert!(row[6].parse::<u64>().unwrap() <= 66);
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("reciprocal_mul_count"));
}

#[test]
fn series_file_round_trip() {
    let f = PrimeField::new(1_000_000_007).unwrap();
    let s = Series::new(f, vec![0, 1, 999_999_999, 42, 7]).unwrap();
    let text = format_series_file(&s);
    assert_eq!(parse_series_file(&text).unwrap(), s);

    let path = scratch("round_trip.txt", &text);
    let o = fastrev(&["revert", "--input", path.to_str().unwrap()]);
    let g = parse_series_file(&stdout(&o)).unwrap();
    let back = scratch("round_trip_g.txt", &format_series_file(&g));
    let o = fastrev(&["revert", "--input", back.to_str().unwrap()]);
    assert_eq!(parse_series_file(&stdout(&o)).unwrap(), s);
}
