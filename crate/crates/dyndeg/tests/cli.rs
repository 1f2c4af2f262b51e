use std::process::{Command, Output};

use clap::Parser;
use dyndeg::cli::{execute, render, Cli, Format, RunConfig};
use dyndeg::report::Report;
use proptest::prelude::*;

fn dyndeg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyndeg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    format!("{}/data/{}", env!("CARGO_MANIFEST_DIR"), name)
}

fn json(args: &[&str]) -> (Report, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = dyndeg(&full);
    let report = serde_json::from_slice(&out.stdout).expect("valid report json");
    (report, out.status.code().unwrap())
}

#[test]
fn reflect_doubling() {
    let (r, code) = json(&["reflect", "--tau", "N=1; tau: 1->inf", "--steps", "10"]);
    let Report::Reflect(r) = r else { panic!() };
    assert_eq!(code, 0);
    assert!(r.equality);
    assert_eq!(r.trace.len(), 11);
    assert_eq!(r.trace[10].d2, "3072");
    let c = r.companion.unwrap();
    assert!((c.dynamical_degree - 2.0).abs() < 1e-9);
    assert_eq!(r.growth.unwrap().class, "exponential");
}

#[test]
fn reflect_bounded() {
    let (r, code) = json(&["reflect", "--tau", "N=1; tau: 1->3", "--steps", "30"]);
    let Report::Reflect(r) = r else { panic!() };
    assert_eq!(code, 0);
    assert_eq!(r.growth.unwrap().class, "bounded");
    let c = r.companion.unwrap();
    assert_eq!(c.block_period, 2);
    assert!((c.dynamical_degree - 1.0).abs() < 1e-9);
}

#[test]
fn input_errors_exit_2() {
    let out = dyndeg(&["reflect", "--tau", "N=1; tau: 1->"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1, column 14"), "{}", err);
    // τ(1) = 2 violates τ(k) >= k + 2
    assert_eq!(
        dyndeg(&["reflect", "--tau", "N=1; tau: 1->2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        dyndeg(&["reflect", "--tau", "N=1; tau: 1->3", "--tol", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        dyndeg(&["compose", "--inline", "[x^2 : y]"]).status.code(),
        Some(2)
    );
    assert_eq!(
        dyndeg(&["compose", "/nonexistent/file.map"]).status.code(),
        Some(2)
    );
    let out = dyndeg(&["scan", &data("constant_family.map"), "--grid", "0:1:0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("grid is empty"));
    let out = dyndeg(&["ledger", "--inline", "start cubic\nsurface 0\n"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("line 2, column 9"));
}

#[test]
fn compose_examples() {
    let (r, code) = json(&["compose", &data("sigma.map"), "--steps", "6"]);
    let Report::Compose(r) = r else { panic!() };
    assert_eq!(code, 0);
    assert_eq!(r.degrees[1..], [2, 1, 2, 1, 2, 1]);
    let (r, _) = json(&["compose", "--inline", "[x : y : z]", "--steps", "3"]);
    let Report::Compose(r) = r else { panic!() };
    assert_eq!(r.degrees[1..], [1, 1, 1]);
    let (r, _) = json(&["compose", &data("sigma_generic.map"), "--steps", "3"]);
    let Report::Compose(r) = r else { panic!() };
    assert_eq!(r.degrees[1..], [2, 4, 8]);
}

#[test]
fn compose_cap_warns_with_partial_output() {
    let (r, code) = json(&[
        "compose",
        &data("sigma_generic.map"),
        "--steps",
        "8",
        "--cap",
        "20",
    ]);
    let Report::Compose(r) = r else { panic!() };
    assert_eq!(code, 1);
    assert!(r.truncated);
    assert_eq!(r.degrees[1..], [2, 4, 8, 16]);
}

#[test]
fn compose_pair_table_covers_listed_maps() {
    let text = "[y*z : x*z : x*y]\n# comment\n[x^2 : x*y : y^2 + x*z]\n";
    let (r, code) = json(&[
        "compose",
        "--inline",
        text,
        "--steps",
        "2",
        "--random-pairs",
        "5",
        "--seed",
        "3",
    ]);
    let Report::Compose(r) = r else { panic!() };
    assert_eq!(code, 0);
    assert_eq!(r.pairs.len(), 4 + 5);
    assert!(r.pairs.iter().all(|p| p.holds != Some(false)));
    assert_eq!(r.random_pairs.len(), 5);
}

#[test]
fn scan_examples() {
    let out = dyndeg(&[
        "scan",
        &data("base_point_family.map"),
        "--grid",
        "-1:1:201",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 201);
    let drops: Vec<&&str> = rows.iter().filter(|l| l.ends_with(",true")).collect();
    assert_eq!(drops, [&"0/1,3,2,,true"]);
    assert_eq!(rows[0], "-1/1,4,2,,false");

    let (r, _) = json(&["scan", &data("constant_family.map"), "--grid", "-1:1:9"]);
    let Report::Scan(r) = r else { panic!() };
    assert!(r.rows.iter().all(|row| row.degree == Some(1) && !row.drop));
}

#[test]
fn ledger_examples() {
    let (r, code) = json(&["ledger", "--inline", "start cubic\npoint\n"]);
    let Report::Ledger(r) = r else { panic!() };
    assert_eq!(code, 0);
    let last = r.rows.last().unwrap();
    assert_eq!((last.n_plus, last.n_minus), (21, 1));
    let (r, _) = json(&["ledger", "--inline", "start p4"]);
    let Report::Ledger(r) = r else { panic!() };
    assert_eq!(r.rows.len(), 1);
    assert_eq!((r.rows[0].n_plus, r.rows[0].n_minus), (1, 0));
}

#[test]
fn identities_report() {
    let (r, code) = json(&["identities"]);
    let Report::Identities(r) = r else { panic!() };
    assert_eq!(code, 0);
    assert!(r.pullback_is_involution && r.coefficients_match);
}

#[test]
fn csv_uses_exact_rationals_and_twelve_digits() {
    let out = dyndeg(&[
        "reflect",
        "--tau",
        "N=1; tau: 1->inf",
        "--steps",
        "5",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("# spectral_radius_lower,2/1\n"), "{}", text);
    assert!(
        text.contains("# dynamical_degree,2.00000000000\n"),
        "{}",
        text
    );
    assert!(text.contains("\ni,d1,d2,t1,t2\n0,3,3,0,0\n"), "{}", text);
    assert!(text.ends_with("\n5,96,96,48,48\n"), "{}", text);
    let out = dyndeg(&[
        "reflect",
        "--tau",
        "N=2; tau: 1->4, 2->inf",
        "--steps",
        "5",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.starts_with("# tau,\"N=2; tau: 1->4, 2->inf\"\n"),
        "{}",
        text
    );
}

#[test]
fn run_config_rejects_bad_tolerance() {
    let mut c = RunConfig {
        format: Format::Text,
        seed: 0,
        steps: 10,
        tol: 1e-9,
    };
    assert!(c.validate().is_ok());
    for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        c.tol = bad;
        assert!(c.validate().is_err());
    }
}

fn roundtrip(args: &[String]) -> Result<(), TestCaseError> {
    let cli =
        Cli::try_parse_from(std::iter::once("dyndeg".to_string()).chain(args.iter().cloned()))
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
    let report = execute(&cli).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let text = render(&report, Format::Json).unwrap();
    let back: Report = serde_json::from_str(&text).unwrap();
    prop_assert_eq!(&back, &report);
    prop_assert_eq!(render(&back, Format::Json).unwrap(), text);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ledger_json_roundtrips(seed in any::<u64>(), n in 0usize..40, preset in prop::sample::select(vec!["cubic", "p4", "custom:2:7"])) {
        roundtrip(&["ledger".into(), "--random".into(), n.to_string(), "--preset".into(), preset.into(), "--seed".into(), seed.to_string()])?;
    }

    #[test]
    fn compose_json_roundtrips(seed in any::<u64>(), pairs in 0usize..6) {
        roundtrip(&["compose".into(), "--inline".into(), "[x^2 : x*y : y^2 + x*z]".into(), "--steps".into(), "3".into(), "--random-pairs".into(), pairs.to_string(), "--seed".into(), seed.to_string()])?;
    }

    #[test]
    fn reflect_json_roundtrips(a in 3u64..9, b in prop::option::of(4u64..10)) {
        let b = b.map_or("inf".to_string(), |v| v.to_string());
        let tau = format!("N=2; tau: 1->{}, 2->{}", a, b);
        let valid = dyndeg_core::text::parse_tau_spec(&tau).unwrap().validate().is_ok();
        prop_assume!(valid);
        roundtrip(&["reflect".into(), "--tau".into(), tau, "--steps".into(), "20".into()])?;
    }

    #[test]
    fn repeated_runs_render_identically(seed in any::<u64>(), fmt in prop::sample::select(vec!["text", "csv", "json"])) {
        let args = ["dyndeg", "compose", "--inline", "[y*z : x*z : x*y]", "--random-pairs", "4", "--seed", &seed.to_string(), "--format", fmt];
        let cli = Cli::try_parse_from(args).unwrap();
        let a = render(&execute(&cli).unwrap(), cli.format).unwrap();
        let b = render(&execute(&cli).unwrap(), cli.format).unwrap();
        prop_assert_eq!(a, b);
    }
}
