use std::process::{Command, Output};

use serde_json::Value;

fn tmtower(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmtower")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn seq_bfile_and_plain() {
    let o = tmtower(&["seq", "--level", "0", "--count", "4", "--format", "bfile"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0 0\n1 1\n2 1\n3 0\n");

    let o = tmtower(&["seq", "--level", "3", "--count", "16"]);
    assert_eq!(stdout(&o), "0101010101010101\n");

    let o = tmtower(&["seq", "--level", "0", "--count", "0"]);
    assert_eq!((code(&o), stdout(&o)), (0, String::new()));

    let o = tmtower(&["seq", "--level", "0", "--count", "4", "--kind", "odious"]);
    assert_eq!(stdout(&o), "1\n2\n4\n7\n");
}

#[test]
fn correction_sequence_matches_shifted_level() {
    let o = tmtower(&["seq", "--level", "1", "--count", "20", "--kind", "correction"]);
    assert_eq!(stdout(&o), "01011010010110101010\n");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&tmtower(&["seq", "--level", "40", "--count", "4"])), 2);
    assert_eq!(code(&tmtower(&["seq", "--bogus"])), 2);
    assert_eq!(code(&tmtower(&["verify", "pte", "--level", "0", "--L", "3"])), 0);
    assert_eq!(code(&tmtower(&["verify", "pte", "--level", "0", "--L", "40"])), 3);
    assert_eq!(code(&tmtower(&["--budget", "10", "verify", "fib", "--r", "5"])), 3);
    assert_eq!(code(&tmtower(&["complexity", "--level", "2", "--max", "10", "--method", "formula"])), 2);
}

#[test]
fn pte_report_text() {
    let o = tmtower(&["verify", "pte", "--level", "0", "--L", "3"]);
    let text = stdout(&o);
    assert!(text.contains("degree 5, sharp"), "{text}");
    assert!(text.ends_with("verified\n"));
}

#[test]
fn pte_json_carries_power_sums() {
    let o = tmtower(&["--json", "--threads", "2", "verify", "multi", "--levels", "0,1", "--L", "10"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree_achieved"], 4);
    assert_eq!(v["sharp"], true);
    assert_eq!(v["interval_length"], 1024);
    assert!(v["power_sums"].as_array().unwrap().len() >= 5);
}

#[test]
fn fib_defect_magnitude() {
    let o = tmtower(&["verify", "fib", "--degree", "2", "--r", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("defect -450261 (magnitude 450261)"));
}

#[test]
fn brute_complexity_of_level_one() {
    let o = tmtower(&["complexity", "--level", "1", "--max", "12", "--method", "brute"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "2 4 6 8 10 14 18 22 24 26 28 30\n");
}

#[test]
fn complexity_methods_agree() {
    let o = tmtower(&["complexity", "--level", "3", "--max", "4200", "--method", "all"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    let o = tmtower(&["complexity", "--level", "1", "--max", "3", "--method", "formula", "--format", "csv"]);
    assert_eq!(stdout(&o), "n,p,method\n1,2,formula\n2,4,formula\n3,6,formula\n");
}

#[test]
fn transform_of_builtin_and_file_seed() {
    let o = tmtower(&["transform", "--seed", "tm", "--count", "16"]);
    assert_eq!(stdout(&o), "0101101001011010\n");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("seed.b");
    let bfile = stdout(&tmtower(&["seq", "--level", "0", "--count", "64", "--format", "bfile"]));
    std::fs::write(&path, &bfile).unwrap();
    let o = tmtower(&["transform", "--seed-file", path.to_str().unwrap(), "--count", "16"]);
    assert_eq!((code(&o), stdout(&o)), (0, "0101101001011010\n".to_string()));

    std::fs::write(&path, "0 0\n1 7\n").unwrap();
    assert_eq!(code(&tmtower(&["transform", "--seed-file", path.to_str().unwrap(), "--count", "4"])), 2);
}

#[test]
fn bfile_round_trip_through_the_binary() {
    let text = stdout(&tmtower(&["seq", "--level", "5", "--count", "50", "--kind", "evil", "--format", "bfile"]));
    let (offset, values) = tmtower_cli::output::parse_bfile(&text).unwrap();
    assert_eq!(tmtower_cli::output::write_bfile(&values, offset), text);
}
