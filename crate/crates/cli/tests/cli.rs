use std::path::Path;
use std::process::{Command, Output};

fn sprofile(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sprofile"))
        .args(args)
        .output()
        .expect("spawn sprofile")
}

fn gen_to(path: &Path, extra: &[&str]) -> String {
    let mut args = vec!["gen", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = sprofile(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn gen_writes_one_event_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = gen_to(&dir.path().join("s.txt"), &["--preset", "stream1", "--n", "10", "--m", "5", "--seed", "3"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 10);
    assert!(!text.contains('\r'));
    for line in lines {
        let (id, sign) = line.split_once(' ').unwrap();
        assert!((1..=5).contains(&id.parse::<u32>().unwrap()), "{line}");
        assert!(sign == "+" || sign == "-", "{line}");
    }
}

#[test]
fn gen_honours_add_probability() {
    let dir = tempfile::tempdir().unwrap();
    let text = gen_to(&dir.path().join("s.txt"), &["--n", "200", "--m", "7", "--p-add", "1.0"]);
    assert!(text.lines().all(|l| l.ends_with(" +")));
    let text = gen_to(&dir.path().join("t.txt"), &["--n", "200", "--m", "7", "--p-add", "0"]);
    assert!(text.lines().all(|l| l.ends_with(" -")));
}

#[test]
fn gen_rejects_bad_arguments() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.txt");
    let out = out.to_str().unwrap();
    for bad in [
        vec!["gen", "--n", "10", "--m", "0", "--out", out],
        vec!["gen", "--n", "10", "--m", "5", "--p-add", "1.5", "--out", out],
        vec!["gen", "--preset", "stream9", "--n", "10", "--m", "5", "--out", out],
    ] {
        assert!(!sprofile(&bad).status.success(), "{bad:?}");
    }
}

#[test]
fn verify_passes_and_catches_faults() {
    let ok = sprofile(&["verify", "--preset", "stream2", "--n", "10000", "--m", "100"]);
    assert!(ok.status.success(), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("ok"));

    let empty = sprofile(&["verify", "--n", "0", "--m", "10"]);
    assert!(empty.status.success());

    let broken = sprofile(&["verify", "--n", "1000", "--m", "10", "--inject-fault", "skip-swap"]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&broken.stderr).contains("MISMATCH"));
}

#[test]
fn bench_writes_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.csv");
    let out = sprofile(&[
        "bench", "--query", "mode", "--impl", "sprofile,heap", "--preset", "stream3",
        "--n", "1000,2000", "--m", "10,100", "--repeats", "1",
        "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "impl,query,preset,n,m,seed,elapsed_seconds,updates_per_second");
    assert_eq!(lines.len(), 1 + 2 * 2 * 2);
    assert!(lines[1].starts_with("sprofile,mode,stream3,1000,10,1,"));
    for row in &lines[1..] {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 8);
        assert!(fields[6].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn bench_rejects_heap_median() {
    let out = sprofile(&["bench", "--query", "median", "--impl", "heap", "--n", "10", "--m", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("heap"));
}

#[test]
fn peel_prints_cores() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = dir.path().join("k3.txt");
    std::fs::write(&k3, "p 3 3\n1 2\n2 3\n1 3\n").unwrap();
    let out = sprofile(&["peel", k3.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "degeneracy 2\n1 2\n2 2\n3 2\n");

    let path = dir.path().join("path.txt");
    std::fs::write(&path, "1 2\n2 3\n3 4\n").unwrap();
    let out = sprofile(&["peel", path.to_str().unwrap()]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "degeneracy 1\n1 1\n2 1\n3 1\n4 1\n");

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1 2\n2 two\n").unwrap();
    let out = sprofile(&["peel", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
