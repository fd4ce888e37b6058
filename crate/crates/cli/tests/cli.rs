use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use complexkit::{canonicalize, decode_pattern, Grid, PatternFormat, Topology};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/tests/fixtures")
        .join(name)
}

fn scenario() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/learners.toml")
}

fn cli(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_complexkit"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8(bytes.to_vec()).unwrap()
}

fn glider() -> Grid {
    Grid::from_live(Topology::Square, [(1, 0), (2, 1), (0, 2), (1, 2), (2, 2)])
}

#[test]
fn glider_run_writes_translated_glider() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture("glider.rle");
    let out = cli(
        &[
            "life",
            "run",
            "--pattern",
            g.to_str().unwrap(),
            "--gens",
            "4",
            "--out",
            "final.rle",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let written = fs::read_to_string(dir.path().join("final.rle")).unwrap();
    let (grid, _) = decode_pattern(&written, PatternFormat::Rle).unwrap();
    assert_eq!(
        grid,
        canonicalize(&glider().translate(complexkit::Coord::new(1, 1)))
    );
    assert!(text(&out.stdout).starts_with("generation,population\n0,5\n"));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["bogus-subcommand"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("Usage"));
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_pattern_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(
        &["life", "run", "--pattern", "missing.rle", "--gens", "4"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("missing.rle"));
}

#[test]
fn malformed_inputs_exit_two_and_domain_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.rle"), "x = 3, y = 3\nbo$2bo$3q!\n").unwrap();
    assert_eq!(
        cli(&["life", "run", "--pattern", "bad.rle"], dir.path())
            .status
            .code(),
        Some(2)
    );

    let g = fixture("glider.rle");
    let g = g.to_str().unwrap();
    assert_eq!(
        cli(
            &["life", "run", "--pattern", g, "--rule", "B9/S"],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        cli(
            &["life", "run", "--pattern", g, "--topology", "hex"],
            dir.path()
        )
        .status
        .code(),
        Some(1)
    );
    assert_eq!(
        cli(
            &["life", "run", "--pattern", g, "--gens", "many"],
            dir.path()
        )
        .status
        .code(),
        Some(2)
    );

    let degenerate = fs::read_to_string(scenario()).unwrap().replace(
        "strategy = \"adaptive\"",
        "strategy = \"adaptive\"\nweights = [0.0, 0.0, 0.0, 0.0]",
    );
    fs::write(dir.path().join("zero.toml"), degenerate).unwrap();
    assert_eq!(
        cli(&["cas", "run", "--config", "zero.toml"], dir.path())
            .status
            .code(),
        Some(1)
    );

    fs::write(dir.path().join("ga.toml"), "bogus = 1\n").unwrap();
    assert_eq!(
        cli(
            &["ga", "run", "--config", "ga.toml", "--seed", "1"],
            dir.path()
        )
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn stochastic_commands_need_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["ga", "run"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("seed"));
    let unseeded = fs::read_to_string(scenario())
        .unwrap()
        .replace("seed = 7", "");
    fs::write(dir.path().join("s.toml"), unseeded).unwrap();
    assert_eq!(
        cli(&["cas", "run", "--config", "s.toml"], dir.path())
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cli(
            &["cas", "run", "--config", "s.toml", "--seed", "3", "--ticks", "3"],
            dir.path()
        )
        .status
        .code(),
        Some(0)
    );
}

#[test]
fn classify_prints_one_line() {
    let dir = tempfile::tempdir().unwrap();
    for (name, want) in [
        ("glider.rle", "spaceship p=4 d=(1,1)\n"),
        ("pulsar.cells", "oscillator p=3\n"),
        ("lwss.cells", "spaceship p=4 d=(-2,0)\n"),
        ("gosper_gun.rle", "unresolved\n"),
    ] {
        let p = fixture(name);
        let out = cli(
            &[
                "life",
                "classify",
                "--pattern",
                p.to_str().unwrap(),
                "--horizon",
                "40",
            ],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(text(&out.stdout), want, "{name}");
    }
}

#[test]
fn repeat_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario();
    let runs: Vec<Vec<&str>> = vec![
        vec![
            "cas",
            "run",
            "--config",
            s.to_str().unwrap(),
            "--ticks",
            "30",
            "--out",
            "agents.csv",
        ],
        vec!["ga", "run", "--seed", "5", "--out", "agents.csv"],
        vec![
            "ga",
            "run",
            "--problem",
            "coevolve",
            "--seed",
            "2",
            "--gens",
            "3",
            "--out",
            "agents.csv",
        ],
        vec![
            "dynamics",
            "lyapunov",
            "--r",
            "3.7",
            "--steps",
            "5000",
            "--out",
            "agents.csv",
        ],
    ];
    for args in runs {
        let a = cli(&args, dir.path());
        let a_file = fs::read(dir.path().join("agents.csv")).unwrap();
        let b = cli(&args, dir.path());
        let b_file = fs::read(dir.path().join("agents.csv")).unwrap();
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", text(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a_file, b_file, "{args:?}");
    }
}

#[test]
fn stdout_carries_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let s = scenario();
    let g = fixture("pulsar.cells");
    for args in [
        vec![
            "cas",
            "run",
            "--config",
            s.to_str().unwrap(),
            "--ticks",
            "10",
        ],
        vec!["ga", "run", "--seed", "1"],
        vec![
            "complexity",
            "profile",
            "--pattern",
            g.to_str().unwrap(),
            "--gens",
            "6",
        ],
        vec![
            "dynamics", "sweep", "--r-from", "3.0", "--r-to", "4.0", "--r-step", "0.25", "--steps",
            "2000",
        ],
        vec![
            "life",
            "run",
            "--pattern",
            g.to_str().unwrap(),
            "--gens",
            "3",
        ],
    ] {
        let out = cli(&args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let stdout = text(&out.stdout);
        let mut lines = stdout.lines();
        let columns = lines.next().unwrap().split(',').count();
        assert!(columns >= 2);
        for line in lines {
            assert_eq!(line.split(',').count(), columns, "{args:?}: {line}");
        }
        assert!(!text(&out.stderr).is_empty(), "{args:?} logs nothing");
    }
}

#[test]
fn metrics_flag_redirects_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(
        &[
            "dynamics",
            "sweep",
            "--r-from",
            "3.0",
            "--r-to",
            "3.5",
            "--r-step",
            "0.5",
            "--metrics",
            "m.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let m = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    assert_eq!(m.lines().count(), 3);
    assert!(m.starts_with("r,lambda\n3,"));
}

#[test]
fn frames_are_zero_padded_plaintext() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture("glider.rle");
    let out = cli(
        &[
            "life",
            "run",
            "--pattern",
            g.to_str().unwrap(),
            "--gens",
            "4",
            "--frames",
            "frames",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let mut names: Vec<String> = fs::read_dir(dir.path().join("frames"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(
        names,
        (0..=4)
            .map(|n| format!("gen_{n:06}.cells"))
            .collect::<Vec<_>>()
    );
    let first = fs::read_to_string(dir.path().join("frames/gen_000000.cells")).unwrap();
    assert_eq!(first, ".O.\n..O\nOOO\n");
}

#[test]
fn flags_override_config_which_overrides_defaults() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("map.toml"), "r = 2.5\nsteps = 20000\n").unwrap();
    let lambda = |args: &[&str]| {
        let out = cli(args, dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
        let stdout = text(&out.stdout);
        let row: Vec<String> = stdout
            .lines()
            .nth(1)
            .unwrap()
            .split(',')
            .map(String::from)
            .collect();
        (
            row[1].clone(),
            row[3].clone(),
            row[5].parse::<f64>().unwrap(),
        )
    };
    let (r, steps, l) = lambda(&["dynamics", "lyapunov", "--config", "map.toml"]);
    assert_eq!((r.as_str(), steps.as_str()), ("2.5", "20000"));
    assert!((l + std::f64::consts::LN_2).abs() < 0.05);
    let (r, steps, l) = lambda(&["dynamics", "lyapunov", "--config", "map.toml", "--r", "4"]);
    assert_eq!((r.as_str(), steps.as_str()), ("4", "20000"));
    assert!((l - std::f64::consts::LN_2).abs() < 0.05);
    let (r, steps, _) = lambda(&["dynamics", "lyapunov"]);
    assert_eq!((r.as_str(), steps.as_str()), ("4", "100000"));
}

#[test]
fn hexagonal_runs_write_axial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture("glider.rle");
    let g = g.to_str().unwrap();
    let args = [
        "life",
        "run",
        "--pattern",
        g,
        "--topology",
        "hex",
        "--rule",
        "B2/S34",
        "--gens",
        "2",
        "--out",
        "hex.csv",
    ];
    assert_eq!(cli(&args, dir.path()).status.code(), Some(0));
    let csv = fs::read_to_string(dir.path().join("hex.csv")).unwrap();
    assert!(csv.starts_with("q,r,state\n"));
    let bad = [
        "life",
        "run",
        "--pattern",
        g,
        "--topology",
        "hex",
        "--rule",
        "B2/S34",
        "--out",
        "hex.rle",
    ];
    assert_eq!(cli(&bad, dir.path()).status.code(), Some(1));
}

#[test]
fn help_and_version_succeed_in_process() {
    assert_eq!(complexkit_cli::execute(["complexkit", "--version"]), 0);
    assert_eq!(complexkit_cli::execute(["complexkit", "life", "--help"]), 0);
    assert_eq!(complexkit_cli::execute(["complexkit"]), 2);
    assert_eq!(complexkit_cli::execute(["complexkit", "life", "fly"]), 2);
}
