use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mwss_cli::{emit, parse_report, run_text, Flags, Format, Kind};

fn corpus() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn mwss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn kind_of(path: &Path) -> String {
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    v["kind"].as_str().unwrap().to_string()
}

fn problems() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(corpus())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    out.sort();
    out
}

fn invalid() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(corpus().join("invalid"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    out.sort();
    out
}

fn golden_path(problem: &Path, ext: &str) -> PathBuf {
    let stem = problem.file_stem().unwrap().to_str().unwrap();
    corpus().join("golden").join(format!("{stem}.report.{ext}"))
}

fn compare_or_update(path: &Path, actual: &str) -> Result<(), String> {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(path, actual).unwrap();
        return Ok(());
    }
    let expected = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!(
            "{} differs from the current output",
            path.display()
        ))
    }
}

#[test]
fn json_reports_match_goldens() {
    let mut failures = Vec::new();
    for p in problems() {
        let out = mwss(&[&kind_of(&p), p.to_str().unwrap()]);
        let stdout = String::from_utf8(out.stdout).unwrap();
        if let Err(e) = compare_or_update(&golden_path(&p, "json"), &stdout) {
            failures.push(e);
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn markdown_reports_match_goldens() {
    let mut failures = Vec::new();
    for p in problems() {
        let report =
            parse_report(&std::fs::read_to_string(golden_path(&p, "json")).unwrap()).unwrap();
        if let Err(e) = compare_or_update(&golden_path(&p, "md"), &emit(&report, Format::Markdown))
        {
            failures.push(e);
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn exit_codes_follow_the_verdicts() {
    for p in problems() {
        let report =
            parse_report(&std::fs::read_to_string(golden_path(&p, "json")).unwrap()).unwrap();
        let out = mwss(&[&kind_of(&p), p.to_str().unwrap()]);
        let expected = if report.passed { 0 } else { 2 };
        assert_eq!(out.status.code(), Some(expected), "{}", p.display());
    }
    let name = |s: &str| corpus().join(s).to_str().unwrap().to_string();
    assert_eq!(
        mwss(&["mono", &name("jordan2.json")]).status.code(),
        Some(0)
    );
    assert_eq!(
        mwss(&["mono", &name("jordan_impure.json")]).status.code(),
        Some(2)
    );
    assert_eq!(
        mwss(&["lefscan", &name("conic_f5_tangent.json")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_inputs_exit_with_one_and_say_why() {
    for p in invalid() {
        let out = mwss(&[&kind_of_or_mono(&p), p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(1), "{}", p.display());
        assert!(out.stdout.is_empty(), "{}", p.display());
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.starts_with("error: "), "{err}");
    }
}

fn kind_of_or_mono(path: &Path) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    serde_json::from_str::<serde_json::Value>(&text)
        .ok()
        .and_then(|v| v["kind"].as_str().map(str::to_string))
        .unwrap_or_else(|| "mono".into())
}

#[test]
fn malformed_json_reports_a_location() {
    let p = corpus().join("invalid/malformed.json");
    let out = mwss(&["mono", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4 column"), "{err}");
}

#[test]
fn noncommuting_restrictions_are_named() {
    let p = corpus().join("invalid/noncommuting_rho.json");
    let out = mwss(&["rzss", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.contains("restriction square {1} -> {1,2,3} does not commute"),
        "{err}"
    );
}

#[test]
fn wrong_subcommand_and_missing_file_are_usage_errors() {
    let p = corpus().join("tate_cycle3.json");
    let out = mwss(&["mono", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("`mono` subcommand was given a `rzss`"));
    assert_eq!(
        mwss(&["mono", "/nonexistent/problem.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn reports_round_trip_through_json() {
    for p in problems() {
        if kind_of(&p) == "lefscan" && p.file_name().unwrap() == "quartic_f7.json" {
            continue;
        }
        let text = std::fs::read_to_string(&p).unwrap();
        let flags = Flags {
            timing: true,
            ..Flags::default()
        };
        let report = run_text(&text, None, &flags).unwrap();
        assert_eq!(
            parse_report(&emit(&report, Format::Json)).unwrap(),
            report,
            "{}",
            p.display()
        );
    }
}

#[test]
fn runs_are_deterministic() {
    let text = std::fs::read_to_string(corpus().join("conic_f5.json")).unwrap();
    let a = emit(
        &run_text(&text, Some(Kind::Lefscan), &Flags::default()).unwrap(),
        Format::Json,
    );
    let b = emit(
        &run_text(&text, Some(Kind::Lefscan), &Flags::default()).unwrap(),
        Format::Json,
    );
    assert_eq!(a, b);
}

#[test]
fn output_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("mwss-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("out.md");
    let p = corpus().join("jordan2.json");
    let out = mwss(&[
        "mono",
        p.to_str().unwrap(),
        "--format",
        "markdown",
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let md = std::fs::read_to_string(&target).unwrap();
    assert!(md.contains("## Monodromy filtration jumps"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn jordan_block_of_size_two_jumps_at_minus_one_and_one() {
    let text = std::fs::read_to_string(corpus().join("jordan2.json")).unwrap();
    let report = run_text(&text, Some(Kind::Mono), &Flags::default()).unwrap();
    let md = emit(&report, Format::Markdown);
    let rows: Vec<&str> = md
        .lines()
        .skip_while(|l| !l.starts_with("## Monodromy filtration jumps"))
        .collect();
    assert!(rows.iter().any(|l| l.starts_with("| -1 |")), "{md}");
    assert!(rows.iter().any(|l| l.starts_with("| 1 |")), "{md}");
    let mwss_cli::report::Outcome::Mono(m) = &report.result else {
        panic!()
    };
    let jumps: Vec<i64> = m.jumps.iter().filter(|j| j.gr > 0).map(|j| j.a).collect();
    assert_eq!(jumps, vec![-1, 1]);
}

#[test]
fn empty_lefscan_result_is_stated() {
    let text = std::fs::read_to_string(corpus().join("conic_f5_interior.json")).unwrap();
    let report = run_text(&text, Some(Kind::Lefscan), &Flags::default()).unwrap();
    assert!(emit(&report, Format::Markdown).contains("no critical points found up to e_max = 1"));
    let deeper = run_text(
        &text,
        Some(Kind::Lefscan),
        &Flags {
            e_max: Some(2),
            ..Flags::default()
        },
    )
    .unwrap();
    assert!(!emit(&deeper, Format::Markdown).contains("no critical points found"));
}

#[test]
fn rzss_markdown_has_page_grids_and_jump_tables() {
    let text = std::fs::read_to_string(corpus().join("tate_cycle3.json")).unwrap();
    let md = emit(
        &run_text(&text, Some(Kind::Rzss), &Flags::default()).unwrap(),
        Format::Markdown,
    );
    for heading in [
        "## E1 dimensions",
        "## E2 dimensions",
        "## Monodromy filtration jumps",
    ] {
        assert!(md.contains(heading), "{md}");
    }
    assert!(md.contains("| H^1 | 2 | w0:1, w2:1 | 1 | true |"), "{md}");
}
