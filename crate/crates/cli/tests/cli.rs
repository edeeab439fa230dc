use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn jobs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("jobs")
}

fn run_file(name: &str, flags: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equivar"))
        .arg(jobs_dir().join(name))
        .args(flags)
        .output()
        .expect("binary runs")
}

fn run_text(text: &str, flags: &[&str]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_equivar"))
        .arg("-")
        .args(flags)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(text.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn every_sample_job_succeeds_deterministically() {
    let mut names: Vec<String> = std::fs::read_dir(jobs_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".job"))
        .collect();
    names.sort();
    assert_eq!(names.len(), 10);
    for name in &names {
        for format in ["table", "machine"] {
            let first = run_file(name, &["--format", format]);
            assert_eq!(first.status.code(), Some(0), "{name}: {}", stderr(&first));
            let second = run_file(name, &["--format", format]);
            assert_eq!(first.stdout, second.stdout, "{name} is not deterministic");
        }
    }
}

#[test]
fn lcoh_table_for_o_minus_three() {
    let out = run_file("lcoh.job", &["--format", "machine"]);
    assert_eq!(
        stdout(&out),
        "op = lcoh\n\
         result.cohomology.0.degree = 1\nresult.cohomology.0.dim = 1\nresult.cohomology.0.weight = 1\n\
         result.cohomology.1.degree = 1\nresult.cohomology.1.dim = 1\nresult.cohomology.1.weight = 2\n\
         result.window = [1, 2]\nstable_from = 2\nw = 1\n"
    );
}

#[test]
fn machine_keys_are_sorted() {
    for name in ["chambers.job", "index.job", "monodromy.job", "strata.job"] {
        let text = stdout(&run_file(name, &["--format", "machine"]));
        let top: Vec<&str> = text
            .lines()
            .map(|l| l.split(['.', ' ']).next().unwrap())
            .collect();
        let mut sorted = top.clone();
        sorted.sort();
        assert_eq!(top, sorted, "{name}");
    }
}

#[test]
fn index_on_the_projective_line() {
    let text = stdout(&run_file("index.job", &["--format", "machine"]));
    assert!(text.contains("total = 1\n"), "{text}");
    assert!(
        text.contains("contributions.0.chi = 0\n") && text.contains("contributions.1.chi = 1\n"),
        "{text}"
    );
    assert!(!text.contains("contributions.2."), "{text}");
}

#[test]
fn qsym_reports_the_failing_line() {
    let text = stdout(&run_file("qsym.job", &["--format", "machine"]));
    assert_eq!(
        text,
        "failing_line.0 = 1\nop = qsym\nquasi_symmetric = false\n"
    );
}

#[test]
fn benchmark_monodromy() {
    let text = stdout(&run_file("monodromy.job", &["--format", "machine"]));
    for line in [
        "matrix.0.c0 = -1",
        "matrix.0.c1 = 0",
        "matrix.1.c0 = 2",
        "matrix.1.c1 = 1",
        "determinant = -1",
    ] {
        assert!(text.contains(line), "{line} missing from\n{text}");
    }
}

#[test]
fn window_flag_overrides_the_job() {
    let text = stdout(&run_file(
        "lcoh.job",
        &["--format", "machine", "--window", "-2..4"],
    ));
    assert!(text.contains("result.window = [-2, 4]\n"), "{text}");
    let bad = run_file("lcoh.job", &["--window", "3..1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn order_flag_changes_the_truncation() {
    let text = stdout(&run_file("localize.job", &["--order", "3"]));
    assert!(text.contains("+ O(t^4)"), "{text}");
}

#[test]
fn parse_errors_carry_positions_and_exit_two() {
    let out = run_text("[job]\nop = lcoh\nw = [1,\n", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("line 3, column 8"),
        "{}",
        stderr(&out)
    );

    let out = run_text("[complex.F]\ndegrees = [[0], [1]]\nd0 = [[\"x^-1\"]]\n[job]\nop = cohomology\ncomplex = F\n", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("line 3") && stderr(&out).contains("negative exponent"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn precondition_violations_exit_two() {
    let out = run_text(
        "[space]\nkind = projective\nweights = [0, 1]\n[job]\nop = strata\n",
        &[],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("requires `a`"), "{}", stderr(&out));

    let window_on_a_wall =
        "[space]\nkind = affine\nweights = [1]\n[complex.O]\nsummands = [[[0, 0]]]\n\
                            [job]\nop = window\ncomplex = O\ntheta = [-1]\na = 0\n";
    assert_eq!(run_text(window_on_a_wall, &[]).status.code(), Some(2));
}

#[test]
fn certification_failures_exit_three() {
    let text = "[complex.O]\ndegrees = [[5]]\n[job]\nop = lcoh\ncomplex = O\nw = -4\nj_max = 0\n";
    let out = run_text(text, &[]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}
