use std::fs;
use std::process::{Command, Output};

use lazy_ntt::cli::bench::CSV_HEADER;
use lazy_ntt::oracle::VIOLATION_CSV_HEADER;

fn lazy_ntt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lazy-ntt")).args(args).output().expect("spawn lazy-ntt")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn find_prime() {
    let o = lazy_ntt(&["find-prime", "--bits", "7", "--ell", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "97");
    let o = lazy_ntt(&["find-prime", "--bits", "4", "--ell", "2"]);
    assert_eq!(stdout(&o).trim(), "13");
    let o = lazy_ntt(&["find-prime", "--bits", "62", "--ell", "11"]);
    assert_eq!(stdout(&o).trim(), "4611686018427365377");
    let o = lazy_ntt(&["find-prime", "--bits", "4", "--ell", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no 4-bit prime"));
}

#[test]
fn text_transform_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let fwd = dir.path().join("fwd.txt");
    let back = dir.path().join("back.txt");
    fs::write(&input, "# sample\n1 2\n3 4\n").unwrap();
    let path = |p: &std::path::Path| p.to_str().unwrap().to_owned();

    let o = lazy_ntt(&["transform", "--input", &path(&input), "--output", &path(&fwd), "--p", "13", "--ell", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&fwd).unwrap();
    assert!(text.lines().any(|l| l == "# bit-reversed order"));
    let values: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(values, ["10", "11", "1", "8"]);

    for strategy in ["baseline", "shoup-lazy", "montgomery-lazy"] {
        let o = lazy_ntt(&[
            "transform", "--input", &path(&fwd), "--output", &path(&back), "--p", "13", "--ell", "2",
            "--direction", "inverse", "--scale", "--strategy", strategy,
        ]);
        assert!(o.status.success());
        let text = fs::read_to_string(&back).unwrap();
        let values: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(values, ["1", "2", "3", "4"], "{strategy}");
    }
}

#[test]
fn binary_transform_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let p = 4_611_686_018_427_365_377u64;
    let data: Vec<u64> = (0..256u64).map(|i| i.wrapping_mul(0x9e37_79b9_7f4a_7c15) % p).collect();
    let bytes: Vec<u8> = data.iter().flat_map(|v| v.to_le_bytes()).collect();
    let input = dir.path().join("in.bin");
    let mid = dir.path().join("mid.bin");
    let out = dir.path().join("out.bin");
    fs::write(&input, bytes).unwrap();
    let ps = p.to_string();
    let common = ["--p", ps.as_str(), "--ell", "8", "--binary"];

    let mut args = vec!["transform", "--input", input.to_str().unwrap(), "--output", mid.to_str().unwrap()];
    args.extend(common);
    assert!(lazy_ntt(&args).status.success());
    assert_eq!(fs::read(&mid).unwrap().len(), 256 * 8);

    let mut args = vec!["transform", "--input", mid.to_str().unwrap(), "--output", out.to_str().unwrap()];
    args.extend(common);
    args.extend(["--direction", "inverse", "--scale"]);
    assert!(lazy_ntt(&args).status.success());
    let back: Vec<u64> = fs::read(&out)
        .unwrap()
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    assert_eq!(back, data);
}

#[test]
fn transform_rejects_bad_vectors() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.txt");
    let output = dir.path().join("out.txt");
    for (content, needle) in [("1 2 3", "expected 2^2"), ("1 2 13 4", "not below p"), ("1 two 3 4", "malformed")] {
        fs::write(&input, content).unwrap();
        let o = lazy_ntt(&[
            "transform", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap(),
            "--p", "13", "--ell", "2",
        ]);
        assert_eq!(o.status.code(), Some(2), "{content}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(needle), "{content}");
    }
}

#[test]
fn bench_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let o = lazy_ntt(&["bench", "--ell", "6", "--trials", "20", "--warmup", "2", "--csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("baseline,"));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().next(), Some(CSV_HEADER));

    let o = lazy_ntt(&["bench", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = lazy_ntt(&["bench", "--ell", "20", "--p", "97"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_quick_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("violations.csv");
    let o = lazy_ntt(&["verify", "--level", "quick", "--report", report.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("all checks passed"));
    assert!(!stdout(&o).contains("FAIL"));
    assert_eq!(fs::read_to_string(&report).unwrap().trim(), VIOLATION_CSV_HEADER);
}
