use std::path::PathBuf;
use std::process::{Command, Output};

use liesys::cli::format::{emit_operator, parse_operator};
use liesys::cli::ScenarioFile;

struct Scratch(PathBuf);

impl Scratch {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("liesys-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Scratch(dir)
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.0.join(name);
        std::fs::write(&p, text).unwrap();
        p.to_string_lossy().into_owned()
    }
}

impl Drop for Scratch {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn liesys(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liesys"))
        .args(args)
        .env_remove("LIESYS_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const E12: &str = "entry 1 2 : 1\n";
const E21: &str = "entry 2 1 : 1\n";
const IDENTITY: &str = "mackey\ndiag 0 : prefix ; tail 1\n";

#[test]
fn bracket_and_mul() {
    let s = Scratch::new("bracket");
    let (a, b) = (s.file("a", E12), s.file("b", E21));
    let o = liesys(&["bracket", &a, &b]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "entry 1 1 : 1\nentry 2 2 : -1\n");

    let up = s.file("up", "mackey\ndiag 1 : prefix ; tail 1\n");
    let down = s.file("down", "mackey\ndiag -1 : prefix ; tail 1\n");
    assert_eq!(stdout(&liesys(&["mul", &up, &down])), IDENTITY);
    assert_eq!(
        stdout(&liesys(&["mul", &down, &up])),
        "mackey\ndiag 0 : prefix 0 ; tail 1\n"
    );
    assert_eq!(
        stdout(&liesys(&["bracket", &a, &up])),
        "mackey\ndiag 2 : prefix 1 ; tail 0\n"
    );
}

#[test]
fn trace_defined_and_undefined() {
    let s = Scratch::new("trace");
    let a = s.file("a", "entry 1 1 : 3/2\nentry 2 2 : 1/2\nentry 1 2 : 7\n");
    assert_eq!(stdout(&liesys(&["trace", &a])), "2\n");
    let id = s.file("id", IDENTITY);
    let o = liesys(&["trace", &id]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("trace is undefined"));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let s = Scratch::new("parse");
    let bad = s.file("bad", "entry 1 2 : 1\nentry 1 x : 1\n");
    let o = liesys(&["trace", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2, column 9"), "{}", stderr(&o));
    assert_eq!(liesys(&["trace"]).status.code(), Some(2));
    assert_eq!(liesys(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn non_canonical_input_warns() {
    let s = Scratch::new("warn");
    let a = s.file("a", "entry 1 1 : 0/1\nentry 2 1 : 2/4\n");
    let o = liesys(&["trace", &a]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "0\n");
    assert!(stderr(&o).contains("not in canonical form"));
}

#[test]
fn dualize_swapped_corner() {
    let s = Scratch::new("dualize");
    let p = s.file(
        "p",
        "pairing mackey\nmackey\ndiag -1 : prefix 1 ; tail 0\ndiag 0 : prefix 0 0 ; tail 1\ndiag 1 : prefix 1 ; tail 0\n",
    );
    let o = liesys(&["dualize", "--spec", &p, "--n", "2", "--search-bound", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "u 1 : 1:1\nu 2 : 1:-1 2:1\nw 1 : 1:1 2:1\nw 2 : 1:1\n"
    );
    let oracle = s.file("o", "pairing oracle\n");
    assert_eq!(
        liesys(&[
            "dualize",
            "--spec",
            &oracle,
            "--n",
            "1",
            "--search-bound",
            "1"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn classify_presentations() {
    let s = Scratch::new("classify");
    let tau = s.file(
        "tau",
        &format!("aut\neps 1\ng:\n{IDENTITY}ginv:\n{IDENTITY}"),
    );
    let o = liesys(&["classify", "--aut", &tau, "--max-window", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "type V*\nwindow 8\n1 0 0 0 0 0 0 0\n0 1 0 0 0 0 0 0\n0 0 1 0 0 0 0 0\n0 0 0 1 0 0 0 0\n0 0 0 0 1 0 0 0\n0 0 0 0 0 1 0 0\n0 0 0 0 0 0 1 0\n0 0 0 0 0 0 0 1\n");

    let swap = "mackey\ndiag -1 : prefix 1 ; tail 0\ndiag 0 : prefix 0 0 ; tail 1\ndiag 1 : prefix 1 ; tail 0\n";
    let conj = s.file("swap", &format!("aut\neps 0\ng:\n{swap}ginv:\n{swap}"));
    let o = liesys(&["classify", "--aut", &conj, "--max-window", "10"]);
    assert!(
        stdout(&o).starts_with("type V\nwindow 8\n0 1 0"),
        "{}",
        stdout(&o)
    );

    assert_eq!(
        liesys(&["classify", "--aut", &conj, "--max-window", "4"])
            .status
            .code(),
        Some(1)
    );
    let bad = s.file("bad", &format!("aut\neps 0\ng:\n{swap}ginv:\n{IDENTITY}"));
    assert_eq!(
        liesys(&["classify", "--aut", &bad, "--max-window", "10"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn approx_interpolates() {
    let s = Scratch::new("approx");
    let op = s.file("op", IDENTITY);
    let vs = s.file("vs", "1:1 2:1\n3:2\n");
    let o = liesys(&["approx", "--op", &op, "--vectors", &vs]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "entry 1 1 : 1\nentry 2 2 : 1\nentry 3 3 : 1\nentry 4 4 : -3\n"
    );
}

#[test]
fn check_is_deterministic_and_seed_env_wins() {
    let args = [
        "check", "--suite", "all", "--seed", "1", "--window", "8", "--cases", "20",
    ];
    let a = liesys(&args);
    let b = liesys(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("1..28\nok 1 - core/field-axioms\n"));

    let with_env = Command::new(env!("CARGO_BIN_EXE_liesys"))
        .args(args)
        .env("LIESYS_SEED", "99")
        .output()
        .unwrap();
    let direct = liesys(&[
        "check", "--suite", "all", "--seed", "99", "--window", "8", "--cases", "20",
    ]);
    assert_eq!(with_env.stdout, direct.stdout);
    assert!(stdout(&direct).contains("seed 99"));

    let o = liesys(&["check", "--suite", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown suite"));
}

#[test]
fn scenario_file() {
    let s = Scratch::new("scenario");
    let text = format!(
        "op A\n  {E12}op I\n  mackey\n  diag 0 : prefix ; tail 1\nmul I A\ntranspose A\ntrace I\n"
    );
    let parsed = ScenarioFile::parse(&text).unwrap();
    assert!(parsed.warnings.is_empty());
    assert_eq!(parsed.value.emit(), text);
    let f = s.file("scn", &text);
    let o = liesys(&["run", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o),
        "mackey\ndiag 1 : prefix 1 ; tail 0\nentry 2 1 : 1\n"
    );
}

#[test]
fn canonical_files_round_trip_bytewise() {
    for text in [
        "",
        E12,
        "entry 1 1 : -1/3\nentry 4 2 : 5\n",
        IDENTITY,
        "mackey\n",
        "mackey\ndiag -2 : prefix 1 0 3 ; tail 0\ndiag 0 : prefix 2 ; tail -1/2\ndiag 3 : prefix ; tail 7\n",
    ] {
        let p = parse_operator(text).unwrap();
        assert!(p.warnings.is_empty(), "{text:?}");
        assert_eq!(emit_operator(&p.value), text);
    }
}
