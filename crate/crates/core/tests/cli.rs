use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use proptest::prelude::*;
use qgraph::cli::{cmd_verify, trig_spec_toml, GraphSpec, GraphSpecFile, DEFAULT_VERIFY_TOL};
use qgraph::{normalize, RootTable, Term};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qgraph"))
}

fn spec_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/specs")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_spec(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn solve_star_reports_pi_as_root_18() {
    let star = spec_path("star.toml");
    let o = run(&["solve", "--graph", star.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("n,k,E,kind\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 22);
    let r18 = &rows[17];
    assert_eq!(r18[0], "18");
    let k: f64 = r18[1].parse().unwrap();
    let e: f64 = r18[2].parse().unwrap();
    assert!((k - std::f64::consts::PI).abs() < 1e-10);
    assert!((e - std::f64::consts::PI.powi(2)).abs() < 1e-9);
    assert_eq!(r18[3], "coincidence");
    let stderr = String::from_utf8(o.stderr).unwrap();
    assert!(stderr.contains("order M = 1"), "{stderr}");
}

#[test]
fn solve_pure_cosine_window() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(
        &dir,
        "c.toml",
        "kind = \"trig\"\nleading = { S0 = 1, gamma0 = 0 }\n",
    );
    let o = run(&["solve", "--graph", &p, "--kmax", "10"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 3);
    for (n, row) in rows.iter().enumerate() {
        let k: f64 = row[1].parse().unwrap();
        let want = (n as f64 + 0.5) * std::f64::consts::PI;
        assert!((k - want).abs() < 1e-11, "{k} vs {want}");
    }
}

#[test]
fn solve_chain_with_equal_positions_gives_harmonic_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(
        &dir,
        "chain.toml",
        "kind = \"chain\"\nactions = [6, 3, 2, 1]\nbeta = [1, 1, 1]\n",
    );
    let o = run(&["solve", "--graph", &p, "--kmax", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 9);
    for (n, row) in rows.iter().enumerate() {
        let k: f64 = row[1].parse().unwrap();
        let want = (n + 1) as f64 * std::f64::consts::PI / 6.0;
        assert!((k - want).abs() < 1e-10, "{k} vs {want}");
    }
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("roots.csv");
    let star = spec_path("star.toml");
    let o = run(&[
        "solve",
        "--graph",
        star.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 23);
}

#[test]
fn solve_is_byte_identical_across_runs() {
    let chain = spec_path("chain.toml");
    let a = run(&["solve", "--graph", chain.to_str().unwrap()]);
    let b = run(&["solve", "--graph", chain.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn order_prints_level_sums() {
    let star = spec_path("star.toml");
    let o = run(&["order", "--graph", star.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("M = 1; sums: 1.5, 0.84210526315789"));

    let o = run(&[
        "order",
        "--graph",
        star.to_str().unwrap(),
        "--max-order",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_for_star_and_chain() {
    for name in ["star.toml", "chain.toml", "trig.toml"] {
        let p = spec_path(name);
        let o = run(&["verify", "--graph", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(stdout(&o).contains("verdict: pass"));
    }
}

#[test]
fn verify_fails_on_tampered_table() {
    let spec = GraphSpecFile::load(&spec_path("star.toml")).unwrap();
    let cfg = spec.solver.solver_config().unwrap();
    let shift = |t: &mut RootTable| t.roots[4].k += 1e-6;
    let mut out = Vec::new();
    let outcome = cmd_verify(&spec, &cfg, DEFAULT_VERIFY_TOL, &mut out, Some(&shift)).unwrap();
    assert!(!outcome.passed());
    assert!(String::from_utf8(out)
        .unwrap()
        .contains("verdict: FAIL at n = 5"));

    let drop = |t: &mut RootTable| {
        t.roots.pop();
    };
    let mut out = Vec::new();
    let outcome = cmd_verify(&spec, &cfg, DEFAULT_VERIFY_TOL, &mut out, Some(&drop)).unwrap();
    assert!(!outcome.passed());
}

#[test]
fn eval_at_points_and_grid() {
    let star = spec_path("star.toml");
    let s = star.to_str().unwrap();
    let o = run(&["eval", "--graph", s, "--k", "3.141592653589793,0"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,g0,g1"));
    for line in lines {
        let g0: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!(g0.abs() < 1e-14, "{line}");
    }

    let o = run(&[
        "eval", "--graph", s, "--from", "0", "--to", "4", "--step", "0.001",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 4002);

    let o = run(&["eval", "--graph", s]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&[
        "solve",
        "--graph",
        "/definitely/not/here.toml",
        "--kmax",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(
        &dir,
        "irregular.toml",
        "kind = \"trig\"\nleading = { S0 = 1 }\n[[terms]]\nS = 0.5\na = 1.0\n[solver]\nk_max = 3\nmax_order = 0\n",
    );
    let o = run(&["solve", "--graph", &p]);
    assert_eq!(o.status.code(), Some(2));

    let p = write_spec(
        &dir,
        "nokmax.toml",
        "kind = \"trig\"\nleading = { S0 = 1 }\n",
    );
    let o = run(&["solve", "--graph", &p]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(
        &dir,
        "bad.toml",
        "kind = \"star\"\nalpha = [1, 7, 11]\nbeta = [0.1, 0.2, 1.5]\n",
    );
    let o = run(&["solve", "--graph", &p, "--kmax", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("bad.toml:2:"), "{err}");
}

fn term_strategy() -> impl Strategy<Value = (f64, f64, f64)> {
    (-0.99f64..0.99, 0.0f64..2.0, -0.5f64..0.5)
}

proptest! {
    #[test]
    fn trig_spec_round_trips(
        s0 in 0.1f64..50.0,
        gamma0 in 0.0f64..2.0,
        raw in prop::collection::vec(term_strategy(), 0..5),
    ) {
        let terms: Vec<Term> = raw
            .iter()
            .map(|&(r, g, a)| Term::new(r * s0, g, a))
            .collect();
        let f = normalize((s0, gamma0), &terms).unwrap();
        let text = trig_spec_toml(&f);
        let back = GraphSpecFile::parse(&text, "roundtrip").unwrap();
        prop_assert_eq!(back.graph, GraphSpec::Trig(f));
    }
}

#[test]
fn order_of_regular_and_boundary_cases() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(
        &dir,
        "regular.toml",
        "kind = \"trig\"\nleading = { S0 = 3 }\n[[terms]]\nS = 1\na = 0.5\n",
    );
    let o = run(&["order", "--graph", &p]);
    assert_eq!(stdout(&o), "M = 0; sums: 0.5\n");

    let p = write_spec(
        &dir,
        "symmetric.toml",
        "kind = \"star\"\nL = [2, 2, 2]\nlambda = [0.5, 0.5, 0.5]\n",
    );
    let o = run(&["order", "--graph", &p]);
    let text = stdout(&o);
    assert!(
        text.starts_with("M = 1; sums: 1, 0.33333333333333"),
        "{text}"
    );
}

#[test]
fn eval_at_zero_is_one_minus_amplitude_sum() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_spec(
        &dir,
        "t.toml",
        "kind = \"trig\"\nleading = { S0 = 3 }\n[[terms]]\nS = 1\na = 0.25\n[[terms]]\nS = 2\na = 0.5\n",
    );
    let o = run(&["eval", "--graph", &p, "--k", "0"]);
    let g0: f64 = stdout(&o)
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!((g0 - 0.25).abs() < 1e-15);
}

proptest! {
    #[test]
    fn trig_spec_reload_evaluates_identically(
        s0 in 0.1f64..50.0,
        gamma0 in 0.0f64..2.0,
        raw in prop::collection::vec(term_strategy(), 1..5),
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let terms: Vec<Term> = raw
            .iter()
            .map(|&(r, g, a)| Term::new(r * s0, g, a))
            .collect();
        let f = normalize((s0, gamma0), &terms).unwrap();
        let back = GraphSpecFile::parse(&trig_spec_toml(&f), "roundtrip")
            .unwrap()
            .graph
            .function()
            .unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let k = rng.gen_range(0.0..100.0);
            prop_assert!((f.evaluate(k) - back.evaluate(k)).abs() <= 1e-14 * f.envelope());
        }
    }
}
