//! One pass/fail line per acceptance criterion.

use std::io::Write;
use std::time::{Duration, Instant};

use eqbundle::suite::{self, Sizes, SuiteName, SuiteReport};

const SEED: u64 = 20_260_418;
const BIRKHOFF_LIMIT: Duration = Duration::from_secs(60);
const ROUNDTRIP_LIMIT: Duration = Duration::from_secs(120);
const PLANTED_CASES: usize = 200;
const ROUNDTRIP_CASES: usize = 6 * 100;
const MIN_PGL_INSTANCES: usize = 10;
const SECTIONS_CASES: usize = 50;

struct Line {
    criterion: u8,
    pass: bool,
    text: String,
}

fn emit(lines: &mut Vec<Line>, criterion: u8, pass: bool, text: String) {
    let line = format!(
        "criterion {criterion}: {} {text}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    // bypass the test harness capture
    let _ = std::io::stderr().write_all(line.as_bytes());
    lines.push(Line {
        criterion,
        pass,
        text,
    });
}

fn all_of(report: &SuiteReport, property: &str, expected: usize) -> (bool, String) {
    let (ok, n) = report.tally(property);
    let mut text = format!("{property} {ok}/{n}");
    if let Some(f) = report.failures(property).first() {
        text.push_str(&format!(" (first failure {}: {})", f.case, f.detail));
    }
    (ok == n && n >= expected, text)
}

#[test]
fn acceptance_criteria() {
    let mut lines = Vec::new();

    let birkhoff = suite::run(SuiteName::Birkhoff, SEED, Sizes::FULL);
    let elapsed = birkhoff.timed;
    let (ok, text) = all_of(&birkhoff, "birkhoff", PLANTED_CASES);
    emit(
        &mut lines,
        1,
        ok && elapsed <= BIRKHOFF_LIMIT,
        format!("{text}, factoring {elapsed:.1?} (limit {BIRKHOFF_LIMIT:?})"),
    );
    let (ok, text) = all_of(&birkhoff, "h0_oracle", PLANTED_CASES);
    emit(&mut lines, 2, ok, text);

    let t = Instant::now();
    let roundtrip = suite::run(SuiteName::Roundtrip, SEED, Sizes::FULL);
    let whole = t.elapsed();
    let elapsed = roundtrip.timed;
    let (ok, text) = all_of(&roundtrip, "roundtrip", ROUNDTRIP_CASES);
    emit(&mut lines, 3, ok && elapsed <= ROUNDTRIP_LIMIT, format!("{text}, build and classify {elapsed:.1?} (limit {ROUNDTRIP_LIMIT:?}), with all checks {whole:.1?}"));
    let (ok, text) = all_of(&roundtrip, "averaging", ROUNDTRIP_CASES);
    emit(
        &mut lines,
        4,
        ok,
        format!("{text}, re-verified from serialized reports"),
    );
    let (ok, text) = all_of(&roundtrip, "hn_invariance", ROUNDTRIP_CASES);
    emit(&mut lines, 5, ok, text);

    let parity = suite::run(SuiteName::Parity, SEED, Sizes::FULL);
    let (d_ok, d_text) = all_of(&parity, "dichotomy", MIN_PGL_INSTANCES);
    let (r_ok, r_text) = all_of(&parity, "odd_rejected", 1);
    let (m_ok, m_text) = all_of(&parity, "odd_modules", MIN_PGL_INSTANCES);
    let (n_ok, n_text) = all_of(&parity, "natural_structure", 1);
    emit(
        &mut lines,
        6,
        d_ok && r_ok && m_ok && n_ok,
        format!("{d_text}, {r_text}, {m_text}, {n_text}"),
    );

    let sections = suite::run(SuiteName::Sections, SEED, Sizes::FULL);
    let (ok, text) = all_of(&sections, "sections", SECTIONS_CASES);
    emit(&mut lines, 7, ok, text);

    let first = suite::run(SuiteName::All, SEED, Sizes::SMOKE).render();
    let second = suite::run(SuiteName::All, SEED, Sizes::SMOKE).render();
    let other = suite::run(SuiteName::All, SEED + 1, Sizes::SMOKE).render();
    emit(
        &mut lines,
        8,
        first == second && first != other,
        format!(
            "{} bytes identical across runs, differs for another seed",
            first.len()
        ),
    );

    let failed: Vec<String> = lines
        .iter()
        .filter(|l| !l.pass)
        .map(|l| format!("{}: {}", l.criterion, l.text))
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:#?}");
}
