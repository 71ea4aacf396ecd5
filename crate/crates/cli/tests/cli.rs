mod common;

use common::*;
use spinstat_cli::VerdictReport;

#[test]
fn exit_codes_on_fixtures() {
    for (file, command, expected) in EXIT_CASES {
        let out = spinstat(&[command, &fixture(file)]);
        assert_eq!(
            out.code, expected,
            "{command} {file}\nstdout: {}\nstderr: {}",
            out.stdout, out.stderr
        );
    }
}

#[test]
fn parse_errors_carry_line_and_column() {
    let out = spinstat(&["check", &fixture("malformed_expr.toml")]);
    assert!(
        out.stderr.contains("malformed_expr.toml:2:17"),
        "{}",
        out.stderr
    );
    let out = spinstat(&["check", &fixture("unknown_param.toml")]);
    assert!(
        out.stderr.contains(":2:15: unknown parameter `m0`"),
        "{}",
        out.stderr
    );
}

#[test]
fn zero_m_plus_cites_dynamics() {
    let out = spinstat(&["check", &fixture("zero_m_plus.toml")]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("loses its dynamics"));
}

#[test]
fn catalog_check_passes() {
    let out = spinstat(&["check", "--catalog", "dirac"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    assert!(out.stdout.contains("symmetry (8 momenta, tol 1e-10): pass"));
}

#[test]
fn statistics_verdicts() {
    for (args, verdict) in [
        (
            vec!["--catalog", "schroedinger", "--two-j", "1"],
            "arbitrary",
        ),
        (vec!["--catalog", "proca"], "bose"),
        (vec!["--catalog", "bdg"], "fermi"),
        (vec!["--catalog", "klein-gordon"], "bose"),
        (vec!["--catalog", "dirac"], "fermi"),
    ] {
        let mut full = vec!["statistics"];
        full.extend(args.iter());
        let out = spinstat(&full);
        assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
        assert!(
            out.stdout.contains(&format!("verdict: {verdict}")),
            "{args:?}: {}",
            out.stdout
        );
    }
}

#[test]
fn branch_point_output() {
    let out = spinstat(&["branch-points", "--catalog", "dirac", "--m0", "4"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("2*sigma = 1: ±4i"), "{}", out.stdout);

    let out = spinstat(&["branch-points", "--catalog", "schroedinger"]);
    assert!(out.stdout.contains("2*sigma = 1: none"), "{}", out.stdout);

    let out = spinstat(&[
        "branch-points",
        "--catalog",
        "bdg",
        "--sigma",
        "1/2",
        "--json",
        "-",
    ]);
    let report: VerdictReport = serde_json::from_str(&out.stdout).unwrap();
    let bps = report.branch_points.unwrap();
    assert_eq!(bps.len(), 1);
    assert_eq!(bps[0].finite_branch_points.len(), 4);
    assert!(bps[0].all_confirmed());

    let out = spinstat(&["branch-points", "--catalog", "dirac", "--sigma", "3/2"]);
    assert_eq!(out.code, 3);
    let out = spinstat(&[
        "branch-points",
        "--catalog",
        "dirac",
        "--direction",
        "0,0,0",
    ]);
    assert_eq!(out.code, 2);
}

#[test]
fn corollary_output() {
    for name in ["dirac", "schroedinger", "klein-gordon"] {
        let out = spinstat(&["corollary", "--catalog", name]);
        assert_eq!(out.code, 0, "{name}: {}", out.stdout);
        assert!(out.stdout.contains("corollary: holds"));
    }
}

#[test]
fn usage_errors() {
    assert_eq!(spinstat(&["check"]).code, 2);
    assert_eq!(spinstat(&["check", "--catalog", "maxwell"]).code, 2);
    assert_eq!(
        spinstat(&["check", "--catalog", "dirac", "--two-j", "2"]).code,
        2
    );
    assert_eq!(
        spinstat(&["check", "--catalog", "dirac", "--m0", "abc"]).code,
        2
    );
    assert_eq!(
        spinstat(&["check", "--catalog", "dirac", &fixture("bdg.toml")]).code,
        2
    );
}

#[test]
fn json_file_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = spinstat(&[
        "report",
        "--catalog",
        "dirac",
        "--json",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("verdict: fermi"));
    let text = std::fs::read_to_string(&path).unwrap();
    let report: VerdictReport = serde_json::from_str(&text).unwrap();
    assert_eq!(
        report.statistics.as_ref().unwrap().verdict.to_string(),
        "fermi"
    );
    let again: VerdictReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(again, report);
}

#[test]
fn seed_changes_samples_but_not_verdict() {
    let a = spinstat(&[
        "statistics",
        "--catalog",
        "dirac",
        "--seed",
        "1",
        "--json",
        "-",
    ]);
    let b = spinstat(&[
        "statistics",
        "--catalog",
        "dirac",
        "--seed",
        "2",
        "--json",
        "-",
    ]);
    let a: VerdictReport = serde_json::from_str(&a.stdout).unwrap();
    let b: VerdictReport = serde_json::from_str(&b.stdout).unwrap();
    assert_ne!(
        a.statistics.as_ref().unwrap().modes,
        b.statistics.as_ref().unwrap().modes
    );
    assert_eq!(a.statistics.unwrap().verdict, b.statistics.unwrap().verdict);
}
