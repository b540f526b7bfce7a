use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn ihp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ihp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn file(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

const CUBIC: &str = "z*y^2 - x^3 - z^3";

#[test]
fn classify_smooth_cubic() {
    let dir = TempDir::new().unwrap();
    let o = ihp(&["classify", s(&file(&dir, "c.txt", CUBIC))]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("class: Smooth\n"));
    assert!(out.contains("flexes: 3\n"));
    for line in [
        "[0:1:0] z smooth",
        "[0:1:1] y - z smooth",
        "[0:1:-1] y + z smooth",
    ] {
        assert!(out.contains(line), "{line} missing from\n{out}");
    }
}

#[test]
fn classify_three_lines() {
    let dir = TempDir::new().unwrap();
    let o = ihp(&["classify", s(&file(&dir, "c.txt", "x*y*z"))]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("class: ThreeLinesGeneral\n"));
}

#[test]
fn classify_coefficient_list() {
    // z·y² − x³ − z³ in the monomial order of the coefficient-list format
    let dir = TempDir::new().unwrap();
    let expr = ihp(&["classify", s(&file(&dir, "a.txt", CUBIC))]);
    let coeffs = ihp(&[
        "classify",
        s(&file(&dir, "b.txt", "3 3 -1 0 0 0 0 0 0 1 0 -1")),
    ]);
    assert_eq!(code(&coeffs), 0);
    assert_eq!(stdout(&expr), stdout(&coeffs));
}

#[test]
fn parse_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        code(&ihp(&["classify", s(&file(&dir, "c.txt", "x^2 + y^2 +"))])),
        2
    );
    assert_eq!(
        code(&ihp(&["classify", s(&dir.path().join("missing.txt"))])),
        2
    );
    assert_eq!(code(&ihp(&["no-such-command"])), 2);
    assert_eq!(
        code(&ihp(&["generate", s(&file(&dir, "g.toml", "cubic = [1"))])),
        2
    );
    assert_eq!(
        code(&ihp(&[
            "generate",
            &data("example54.toml"),
            "--primes",
            "2,x"
        ])),
        2
    );
}

#[test]
fn non_reduced_and_reducible_exit_3() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        code(&ihp(&["classify", s(&file(&dir, "a.txt", "x^2*y"))])),
        3
    );
    assert_eq!(code(&ihp(&["lines", s(&file(&dir, "b.txt", "x*y*z"))])), 3);
}

#[test]
fn lines_of_the_preset_surface() {
    let dir = TempDir::new().unwrap();
    let o = ihp(&["lines", s(&file(&dir, "c.txt", CUBIC))]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(
        out.starts_with("lines: 3\ncoplanar: true\nplane: x + w\n"),
        "{out}"
    );
}

#[test]
fn lines_without_rational_flex() {
    let dir = TempDir::new().unwrap();
    let o = ihp(&["lines", s(&file(&dir, "c.txt", "x^3 + 2*y^3 + 4*z^3"))]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("lines: 0\n"));
}

#[test]
fn beukers_fibers_are_triple_tangent() {
    let dir = TempDir::new().unwrap();
    let o = ihp(&[
        "beukers",
        s(&file(&dir, "c.txt", CUBIC)),
        "--axis",
        "z",
        "--fibers",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("fibers: 4\n"));
    let body: Vec<&str> = out
        .lines()
        .skip_while(|l| *l != "[fibers]")
        .skip(1)
        .collect();
    assert_eq!(body.len(), 4);
    assert!(body.iter().all(|l| l.ends_with("| 2x3")), "{out}");
}

#[test]
fn topology_records() {
    let dir = TempDir::new().unwrap();
    let one = ihp(&["topology", &data("topology_smooth.toml")]);
    assert_eq!(code(&one), 0);
    let out = stdout(&one);
    assert!(out.contains("simply_connected: true\n"));
    for n in 2..=12 {
        assert!(out.contains(&format!("\n{n} none\n")));
    }

    let none = ihp(&[
        "topology",
        s(&file(&dir, "t.toml", &format!("cubic = \"{CUBIC}\"\n"))),
    ]);
    assert_eq!(code(&none), 0);
    let out = stdout(&none);
    assert!(out.contains("simply_connected: false\n"));
    assert!(out.contains("\n3 (1)\n"), "{out}");

    let off = file(
        &dir,
        "off.toml",
        &format!("cubic = \"{CUBIC}\"\npoints = [[1, 1, 1]]\n"),
    );
    assert_eq!(code(&ihp(&["topology", s(&off)])), 3);
}

#[test]
fn generate_edge_cases() {
    let dir = TempDir::new().unwrap();
    let empty = ihp(&["generate", &data("example54.toml"), "--budget-points", "0"]);
    assert_eq!(code(&empty), 0);
    assert!(stdout(&empty).starts_with("points: 0\n"));

    let on_d = file(
        &dir,
        "g.toml",
        &format!("cubic = \"{CUBIC}\"\nblown = [2, 3, 1]\naxis = \"z\"\nseeds = [[0, 1, 0, 0]]\n"),
    );
    assert_eq!(code(&ihp(&["generate", s(&on_d)])), 4);

    let single_on_surface = file(
        &dir,
        "m.toml",
        "mode = \"single\"\npencil = [\"x*z\", \"y*z\"]\ndivisor = \"z\"\nseeds = [[1, 1, 1]]\n",
    );
    assert_ne!(code(&ihp(&["generate", s(&single_on_surface)])), 0);
}

#[test]
fn generate_is_deterministic_and_verifiable() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    let args = [
        "generate",
        &data("example54.toml"),
        "--budget-fibers",
        "6",
        "--height",
        "2000",
    ];
    assert_eq!(code(&ihp(&[&args[..], &["--out", s(&a)]].concat())), 0);
    assert_eq!(
        code(&ihp(
            &[&args[..], &["--out", s(&b)], &["--sequential"]].concat()
        )),
        0
    );
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());

    let pts: String = text
        .lines()
        .skip_while(|l| *l != "[points]")
        .take_while(|l| *l != "[surface_points]")
        .map(|l| format!("{l}\n"))
        .collect();
    let p = file(&dir, "p.txt", &pts);
    let ctx = file(
        &dir,
        "ctx.toml",
        &format!("ambient = \"blowup\"\ndivisor = \"{CUBIC}\"\nblown = [2, 3, 1]\n"),
    );
    let o = ihp(&["verify", s(&ctx), s(&p)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(!stdout(&o).contains("checked: 0\n"));
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let ctx = file(
        &dir,
        "ctx.toml",
        "ambient = \"plane\"\ndivisor = \"x*y - z^2\"\nprimes = [2]\n",
    );
    let ok = file(&dir, "ok.txt", "1 1 0\n2 1 1\n# comment\n");
    assert_eq!(code(&ihp(&["verify", s(&ctx), s(&ok)])), 0);
    // xy − z² = 3 at [2:2:1]
    let bad = file(&dir, "bad.txt", "2 2 1\n");
    assert_eq!(code(&ihp(&["verify", s(&ctx), s(&bad)])), 3);
    assert_eq!(
        code(&ihp(&["verify", s(&ctx), s(&bad), "--primes", "3"])),
        0
    );
    let on_d = file(&dir, "on.txt", "1 1 1\n");
    assert_eq!(code(&ihp(&["verify", s(&ctx), s(&on_d)])), 4);
    let garbage = file(&dir, "g.txt", "1 x 1\n");
    assert_eq!(code(&ihp(&["verify", s(&ctx), s(&garbage)])), 2);
}
