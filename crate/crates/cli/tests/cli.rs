use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn genaut(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genaut"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn construct(dir: &Path, name: &str, n: &str, k: &str, delta: &str, seed: &str) {
    let o = genaut(
        &["construct", "-n", n, "-k", k, "-d", delta, "-s", seed, "-o", name],
        dir,
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn construct_writes_a_verifiable_bundle() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "code", "24", "12", "6", "3");
    for f in [
        "H.alist",
        "H.txt",
        "T.txt",
        "Tinv.txt",
        "T2.txt",
        "A.txt",
        "manifest.toml",
    ] {
        assert!(dir.path().join("code").join(f).exists(), "{f}");
    }
    let o = genaut(&["verify", "code"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report = stdout(&o);
    assert!(!report.contains("FAIL"), "{report}");
    assert!(report.contains("PASS automorphism"));
    assert!(report.contains("PASS ccm-inverse"));
}

#[test]
fn verify_catches_a_flipped_bit() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "code", "16", "8", "4", "1");
    let t_path = dir.path().join("code/T.txt");
    let text = fs::read_to_string(&t_path).unwrap();
    let n = 16;
    // Try single-bit mutations until one breaks the automorphism; most do.
    let mut caught = 0;
    for pos in 0..n * n {
        let (r, c) = (pos / n, pos % n);
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        flip(&mut lines[1 + r], c);
        fs::write(&t_path, lines.join("\n") + "\n").unwrap();
        let o = genaut(&["verify", "code"], dir.path());
        if o.status.code() == Some(2) {
            assert!(stdout(&o).contains("FAIL automorphism"));
            caught += 1;
            if caught == 3 {
                break;
            }
        }
    }
    assert_eq!(caught, 3);
}

#[test]
fn dmin_of_hamming_code() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("h.txt"), "3 7\n1010101\n0110011\n0001111\n").unwrap();
    let o = genaut(&["dmin", "h.txt"], dir.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3");
    fs::write(
        dir.path().join("h.alist"),
        "7 3\n3 4\n1 1 2 1 2 2 3\n4 4 4\n1\n2\n1 2\n3\n1 3\n2 3\n1 2 3\n1 3 5 7\n2 3 6 7\n4 5 6 7\n",
    )
    .unwrap();
    let o = genaut(&["dmin", "h.alist"], dir.path());
    assert_eq!(stdout(&o).trim(), "3");
}

#[test]
fn usage_and_budget_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let o = genaut(&["construct", "-n", "8", "-k", "8", "-o", "x"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(genaut(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(
        genaut(&["construct", "-n", "8"], dir.path()).status.code(),
        Some(1)
    );
    let o = genaut(
        &[
            "construct",
            "-n",
            "10",
            "-k",
            "5",
            "-d",
            "2",
            "--max-resamples",
            "2",
            "--min-distance",
            "9",
            "-o",
            "x",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(!dir.path().join("x").exists());
    let o = genaut(&["dmin", "missing.txt"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

fn write_config(dir: &Path, name: &str, extra: &str) {
    let text = format!(
        "code_dir = \"code\"\nebn0_db = [2.0, 3.0]\nmin_frame_errors = 40\nreport_elapsed = false\n{extra}"
    );
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn simulate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "code", "20", "10", "4", "2");
    write_config(
        dir.path(),
        "a.toml",
        "decoder = \"gaed\"\niterations = 10\nseed = 5\n",
    );
    let first = genaut(&["simulate", "a.toml"], dir.path());
    assert!(
        first.status.success(),
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let second = genaut(&["simulate", "a.toml"], dir.path());
    assert_eq!(first.stdout, second.stdout);
    let csv = stdout(&first);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "ebno_db,frames,frame_errors,bit_errors,fer,ci95,elapsed_s"
    );
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("2,") && lines[1].ends_with(",0"));

    // Same numbers with more workers, written to a file.
    write_config(
        dir.path(),
        "b.toml",
        "decoder = \"gaed\"\niterations = 10\nseed = 5\nworkers = 3\noutput = \"out.csv\"\n",
    );
    let o = genaut(&["simulate", "b.toml"], dir.path());
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert_eq!(fs::read_to_string(dir.path().join("out.csv")).unwrap(), csv);
}

#[test]
fn simulate_every_decoder_family() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "code", "16", "8", "3", "4");
    for (i, extra) in [
        "decoder = \"bp\"",
        "decoder = \"rr\"\nell = 2",
        "decoder = \"osd\"\norder = 1",
    ]
    .iter()
    .enumerate()
    {
        let name = format!("c{i}.toml");
        write_config(dir.path(), &name, &format!("{extra}\n"));
        let o = genaut(&["simulate", &name], dir.path());
        assert!(
            o.status.success(),
            "{extra}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert_eq!(stdout(&o).lines().count(), 3);
    }
}

#[test]
fn simulate_refuses_bad_inputs() {
    let dir = tempfile::tempdir().unwrap();
    construct(dir.path(), "code", "16", "8", "3", "4");
    write_config(dir.path(), "bad.toml", "decoder = \"bp\"\nunknown_key = 1\n");
    assert_eq!(
        genaut(&["simulate", "bad.toml"], dir.path()).status.code(),
        Some(2)
    );
    fs::write(
        dir.path().join("dec.toml"),
        "code_dir = \"code\"\nebn0_db = [3.0, 2.0]\ndecoder = \"bp\"\n",
    )
    .unwrap();
    assert_eq!(
        genaut(&["simulate", "dec.toml"], dir.path()).status.code(),
        Some(2)
    );

    // A non-automorphism T must stop the run before any frame.
    let t = dir.path().join("code/T.txt");
    let original = fs::read_to_string(&t).unwrap();
    write_config(dir.path(), "ok.toml", "decoder = \"gaed\"\n");
    let broken = (0..16 * 16).any(|pos| {
        let mut lines: Vec<String> = original.lines().map(String::from).collect();
        flip(&mut lines[1 + pos / 16], pos % 16);
        fs::write(&t, lines.join("\n") + "\n").unwrap();
        genaut(&["verify", "code"], dir.path()).status.code() == Some(2)
    });
    assert!(broken);
    let o = genaut(&["simulate", "ok.toml"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

fn flip(row: &mut String, c: usize) {
    let bit = if &row[c..c + 1] == "0" { "1" } else { "0" };
    row.replace_range(c..c + 1, bit);
}
