use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use laby_core::render::group_rects;
use laby_core::{read_pattern, snake_cross, SnakeSpec};

fn laby(args: &[&str]) -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_laby"));
    c.args(args).env_remove("LABY_MAX_WIDTH");
    c
}

fn run(args: &[&str]) -> Output {
    laby(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = laby(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn write_snake(dir: &Path, k: u32) -> PathBuf {
    let path = dir.join(format!("a{k}.txt"));
    let o = run(&["gen", "snake", "--k", &k.to_string(), "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    path
}

#[test]
fn gen_pipes_into_validate() {
    let gen = run(&["gen", "snake", "--k", "2"]);
    assert_eq!(gen.status.code(), Some(0));
    let v = run_stdin(&["validate"], &stdout(&gen));
    assert_eq!(v.status.code(), Some(0));
    let report = stdout(&v);
    assert!(
        report.starts_with("is_labyrinth=true\ntree=true\nv_pairs=1\nh_pairs=1\ncorner=true\n"),
        "{report}"
    );
    assert!(report.contains("exit_col=7\nexit_row=7\n"));
}

#[test]
fn gen_round_trips_through_text() {
    for (k, left) in [(1, false), (3, false), (2, true)] {
        let mut args = vec!["gen", "snake", "--k"];
        let ks = k.to_string();
        args.push(&ks);
        if left {
            args.push("--left");
        }
        let text = stdout(&run(&args));
        let spec = if left { SnakeSpec::left(k) } else { SnakeSpec::right(k) };
        assert_eq!(read_pattern(&text).unwrap(), snake_cross(spec).unwrap());
    }
    let cross = stdout(&run(&["gen", "cross", "--k", "1"]));
    assert_eq!(cross, "3\n#.#\n...\n#.#\n");
}

#[test]
fn validate_rejects_all_white() {
    let v = run_stdin(&["validate"], "3\n...\n...\n...\n");
    assert_eq!(v.status.code(), Some(1));
    assert!(stdout(&v).starts_with("is_labyrinth=false\ntree=false\n"));
    let t = run_stdin(&["validate", "--format", "text"], "3\n...\n...\n...\n");
    assert_eq!(t.status.code(), Some(1));
    assert!(stdout(&t).contains("labyrinth: no"));
}

#[test]
fn validate_blocked_fixture() {
    let v = run(&["validate", fixture("mixed_a4.txt").to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(run(&["gen", "snake"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run_stdin(&["validate"], "3\n...\n").status.code(), Some(2));
    assert_eq!(run(&["validate", "/nonexistent/file.txt"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "snake", "--k", "0"]).status.code(), Some(2));
    assert_eq!(run(&["dim", "quotient", "--k", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["dim", "target", "--delta", "2.5"]).status.code(), Some(2));
}

#[test]
fn width_cap_exits_3() {
    let o = laby(&["gen", "snake", "--k", "1"])
        .env("LABY_MAX_WIDTH", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let a1 = write_snake(dir.path(), 1);
    let a1 = a1.to_str().unwrap();
    let o = laby(&["compose", a1, a1])
        .env("LABY_MAX_WIDTH", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn compose_and_path() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = write_snake(dir.path(), 1);
    let a2 = write_snake(dir.path(), 2);
    let (a1, a2) = (a1.to_str().unwrap(), a2.to_str().unwrap());
    let composed = stdout(&run(&["compose", a1, a2]));
    assert_eq!(read_pattern(&composed).unwrap().width(), 165);

    let o = run(&["path", "--from", "top", "--to", "bottom", "--pattern", a1, a2]);
    assert_eq!(stdout(&o), "length 465\n");
    let o = run(&["path", "--from", "left", "--to", "top", "--pattern", a1, "--squares"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "length 15");
    assert_eq!(lines.len(), 16);
    assert_eq!(lines[1], "0 5");
    assert_eq!(lines[15], "5 10");
}

#[test]
fn path_length_beyond_cap_uses_substitution() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = write_snake(dir.path(), 1);
    let a1 = a1.to_str().unwrap();
    let o = laby(&["path", "--from", "top", "--to", "right", "--pattern", a1, a1, a1])
        .env("LABY_MAX_WIDTH", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "length 3375\n");
    let o = laby(&[
        "path",
        "--from",
        "top",
        "--to",
        "right",
        "--squares",
        "--pattern",
        a1,
        a1,
    ])
    .env("LABY_MAX_WIDTH", "100")
    .output()
    .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn oracle_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = write_snake(dir.path(), 1);
    let a2 = write_snake(dir.path(), 2);
    let o = run(&["oracle", "--pattern", a1.to_str().unwrap(), a2.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("TB 465 465 465\n"), "{text}");
    assert_eq!(text.lines().count(), 8);
    assert!(text.ends_with("agree\n"));
}

#[test]
fn core_of_decorated_fixture() {
    let o = run(&["core", fixture("decorated_snake_k2.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        read_pattern(&stdout(&o)).unwrap(),
        snake_cross(SnakeSpec::right(2)).unwrap()
    );
    assert_eq!(run_stdin(&["core"], "3\n...\n...\n...\n").status.code(), Some(1));
}

#[test]
fn dim_quotient_prints_12_digits() {
    assert_eq!(stdout(&run(&["dim", "quotient", "--k", "1"])), "1.12934465146\n");
    assert_eq!(stdout(&run(&["dim", "quotient", "--k", "0"])), "1\n");
}

#[test]
fn dim_target_converges() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("s.txt");
    let trace = dir.path().join("t.txt");
    let o = run(&[
        "dim",
        "target",
        "--delta",
        "1.5",
        "--tol",
        "1e-3",
        "--max-terms",
        "64",
        "--out",
        sched.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let schedule = std::fs::read_to_string(&sched).unwrap();
    assert_eq!(schedule.lines().count(), 64);
    assert!(schedule.lines().all(|l| l.starts_with("5 ")));
    let table = std::fs::read_to_string(&trace).unwrap();
    let last = table.lines().last().unwrap();
    let est: f64 = last.split(' ').nth(2).unwrap().parse().unwrap();
    assert!((est - 1.5).abs() < 1e-3, "{last}");

    // the same schedule read back gives the same estimate
    let e = run(&["dim", "estimate", "--schedule", sched.to_str().unwrap()]);
    assert_eq!(e.status.code(), Some(0));
    let text = stdout(&e);
    assert!(text.contains(last.split(' ').nth(2).unwrap()));
    assert!(text.contains("tail_min ") && text.contains("tail_max "));
}

#[test]
fn dim_target_two_reports_no_convergence() {
    let o = run(&["dim", "target", "--delta", "2", "--max-terms", "16"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).lines().next(), Some("1 1 0"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not within"));
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let a1 = write_snake(dir.path(), 1);
    let svg = dir.path().join("a1.svg");
    let o = run(&[
        "render",
        "--in",
        a1.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
        "--path",
        "top:bottom",
        "--arms",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(group_rects(&text, "black").len(), 121 - 29);
    assert_eq!(group_rects(&text, "path").len(), 15);
    assert_eq!(group_rects(&text, "arm-top").len(), 6);
    let bad = run(&["render", "--in", a1.to_str().unwrap(), "--path", "top-bottom"]);
    assert_eq!(bad.status.code(), Some(2));
}
