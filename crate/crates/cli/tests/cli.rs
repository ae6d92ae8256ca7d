use std::process::{Command, Output};

fn digitsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_digitsum"))
        .args(args)
        .env_remove("DIGITSUM_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn digits_of_an_expression() {
    let o = digitsum(&["digits", "2^14"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "16384  s=22 c=5\n");
    let o = digitsum(&["digits", "lcm(9)", "--base", "2"]);
    assert_eq!(stdout(&o), "100111011000  s=6 c=6\n");
}

#[test]
fn ladder_prints_exponents() {
    let o = digitsum(&["ladder", "--a", "2", "--b", "10", "--k", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1 4 14 47 157\n");
}

#[test]
fn stolarsky_example() {
    let o = digitsum(&["certify", "stolarsky", "--m", "1188", "--base", "10", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "bound 18\ns_10(m) = 18\ntrace: 1188 -> 99\nPASS\n");
}

#[test]
fn syntax_errors_are_usage_errors_with_offsets() {
    let o = digitsum(&["digits", "2^^3"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.starts_with("error: kind=usage message="), "{err}");
    assert!(err.contains("offset 2"), "{err}");
}

#[test]
fn invalid_base_exits_two() {
    let o = digitsum(&["digits", "10", "--base", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: kind=invalid-base"));
}

#[test]
fn failing_certificate_exits_one() {
    let o = digitsum(&["certify", "power", "--a", "3", "--b", "10", "--n", "40"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).ends_with("FAIL\n"));
    let o = digitsum(&[
        "oeis", "check", "A000079", "--gen", "pow:3", "--from", "0", "--to", "5",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn passing_certificates_exit_zero() {
    for args in [
        &["certify", "blocks", "--n", "2^200", "--a", "2", "--b", "10"][..],
        &["certify", "stolarsky", "--m", "999*41", "--r", "3"],
        &["certify", "corollary", "--a", "6", "--n", "500"],
        &["certify", "special", "--kind", "factorial", "--n", "100"],
        &["certify", "power", "--a", "12", "--b", "10", "--n", "80"],
        &[
            "stewart",
            "linear-form",
            "--a",
            "3",
            "--b",
            "10",
            "--n",
            "30",
            "--i",
            "2",
        ],
    ] {
        let o = digitsum(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).ends_with("PASS\n"), "{args:?}");
    }
}

#[test]
fn scan_csv_has_header_and_rows() {
    let o = digitsum(&["scan", "power", "--a", "2", "--to", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,digit_count,s_b,c_b,bound,heuristic"));
    let sums: Vec<&str> = lines.map(|l| l.split(',').nth(2).unwrap()).collect();
    assert_eq!(
        sums,
        ["1", "2", "4", "8", "7", "5", "10", "11", "13", "8", "7"]
    );
}

#[test]
fn show_radius_adds_a_column() {
    let o = digitsum(&[
        "scan",
        "factorial",
        "--from",
        "1",
        "--to",
        "3",
        "--show-radius",
    ]);
    let out = stdout(&o);
    assert!(out.starts_with("n,digit_count,s_b,c_b,bound,heuristic,heuristic_radius\n"));
    assert!(out.lines().skip(1).all(|l| l.split(',').count() == 7));
}

#[test]
fn plotdata_requires_a_heuristic_file() {
    let o = digitsum(&[
        "scan", "power", "--a", "2", "--to", "5", "--out", "plotdata",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: kind=usage"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.txt");
    let o = digitsum(&[
        "scan",
        "power",
        "--a",
        "2",
        "--to",
        "3",
        "--out",
        "plotdata",
        "--heuristic-out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0 1\n1 2\n2 4\n3 8\n");
    let curve = std::fs::read_to_string(&path).unwrap();
    assert_eq!(curve.lines().count(), 4);
    assert!(curve.starts_with("0 0\n1 1.35"));
}

#[test]
fn config_file_sets_caps_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("digitsum.conf");
    std::fs::write(&path, "# tight caps\nmax_exponent = 10\n").unwrap();
    let conf = path.to_str().unwrap();

    let o = digitsum(&["--config", conf, "digits", "2^20"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).starts_with("error: kind=resource-limit"),
        "{}",
        stderr(&o)
    );

    let o = digitsum(&["--config", conf, "--max-exponent", "20", "digits", "2^20"]);
    assert_eq!(o.status.code(), Some(0));

    let o = Command::new(env!("CARGO_BIN_EXE_digitsum"))
        .args(["digits", "2^20"])
        .env("DIGITSUM_CONFIG", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    std::fs::write(&path, "colour = blue\n").unwrap();
    let o = digitsum(&["--config", conf, "digits", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key"));
}

#[test]
fn gaps_csv_is_exact() {
    let o = digitsum(&[
        "stewart", "gaps", "--a", "3", "--b", "10", "--n-from", "1", "--n-to", "5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("n,i,m_i,m_next,ratio,ratio_over_log_n\n"));
    assert!(out.contains("\n5,2,2,3,3/2,"));
}

#[test]
fn baker_rejects_small_heights_unless_clamped() {
    let o = digitsum(&[
        "stewart",
        "baker",
        "--n",
        "2",
        "--heights",
        "2,10",
        "--B",
        "20",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: kind=invalid-params"));
    let o = digitsum(&[
        "stewart",
        "baker",
        "--n",
        "2",
        "--heights",
        "2,10",
        "--B",
        "20",
        "--clamp",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("heights: e, 10"));
}

#[test]
fn floor_domain_error() {
    let o = digitsum(&["stewart", "floor", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: kind=domain"));
}

#[test]
fn sparse_multiple_small() {
    let o = digitsum(&["sparse-multiple", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("k=2\n"));
}

#[test]
fn oeis_fixture_check_passes() {
    let o = digitsum(&[
        "oeis", "check", "A000079", "--gen", "pow:2", "--from", "0", "--to", "1000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("1001/1001"));
    let o = digitsum(&[
        "oeis", "check", "B000079", "--gen", "pow:2", "--from", "0", "--to", "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = digitsum(&[
        "oeis", "check", "A000079", "--gen", "cube", "--from", "0", "--to", "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_is_usage() {
    assert_eq!(digitsum(&["frobnicate"]).status.code(), Some(2));
}
