use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use hdtk::automaton::parse_tpa;
use hdtk::hd::check_hd;
use hdtk::suite::{self, Property, SuiteConfig};
use hdtk::token::{eve_wins_g1, eve_wins_g2, eve_wins_joker};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSpec {
    pub seed: Option<u64>,
    #[serde(default)]
    pub suite: Vec<SuiteEntry>,
    #[serde(default)]
    pub fixture: Vec<FixtureEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteEntry {
    pub property: String,
    pub count: Option<usize>,
    pub max_states: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureEntry {
    pub path: PathBuf,
    pub hd: Option<bool>,
    pub g1: Option<bool>,
    pub g2: Option<bool>,
    pub joker: Option<bool>,
}

/// Outcome of one corpus entry.
pub struct Outcome {
    pub name: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

enum Job<'a> {
    Suite(Property, SuiteConfig),
    Fixture(&'a FixtureEntry),
}

pub fn parse(text: &str) -> Result<CorpusSpec, String> {
    let spec: CorpusSpec = toml::from_str(text).map_err(|e| e.to_string())?;
    for s in &spec.suite {
        s.property.parse::<Property>().map_err(|e| e.to_string())?;
    }
    Ok(spec)
}

pub fn threads() -> usize {
    std::env::var("HDTK_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every entry, at most `threads` at a time; outcomes keep spec order.
pub fn run(spec: &CorpusSpec, base: &Path, seed: u64, threads: usize) -> Vec<Outcome> {
    let seed = spec.seed.unwrap_or(seed);
    let mut jobs = Vec::new();
    for s in &spec.suite {
        let p: Property = s.property.parse().expect("validated at parse time");
        let mut cfg = SuiteConfig::new(p, s.seed.unwrap_or(seed));
        cfg.count = s.count.unwrap_or(cfg.count);
        cfg.max_states = s.max_states;
        jobs.push(Job::Suite(p, cfg));
    }
    jobs.extend(spec.fixture.iter().map(Job::Fixture));
    let results: Vec<Mutex<Option<Outcome>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..threads.clamp(1, jobs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(job) = jobs.get(i) else { break };
                let out = match job {
                    Job::Suite(p, cfg) => run_suite(*p, cfg),
                    Job::Fixture(f) => run_fixture(f, base),
                };
                *results[i].lock().unwrap() = Some(out);
            });
        }
    });
    results
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("job ran"))
        .collect()
}

fn run_suite(p: Property, cfg: &SuiteConfig) -> Outcome {
    match suite::run(p, cfg) {
        Ok(r) => Outcome {
            name: p.name().into(),
            checks: r.checks,
            failures: r.failures,
        },
        Err(e) => Outcome {
            name: p.name().into(),
            checks: 1,
            failures: vec![e.to_string()],
        },
    }
}

fn run_fixture(f: &FixtureEntry, base: &Path) -> Outcome {
    let path = base.join(&f.path);
    let name = format!("fixture {}", f.path.display());
    let a = match std::fs::read_to_string(&path)
        .map_err(|e| e.to_string())
        .and_then(|t| parse_tpa(&t).map_err(|e| e.to_string()))
    {
        Ok(a) => a,
        Err(e) => {
            return Outcome {
                name,
                checks: 1,
                failures: vec![format!("load: {e}")],
            }
        }
    };
    type Check = fn(&hdtk::ParityAutomaton) -> hdtk::Result<bool>;
    let checks: [(&str, Option<bool>, Check); 4] = [
        ("hd", f.hd, |a| check_hd(a).map(|v| v.hd)),
        ("g1", f.g1, eve_wins_g1),
        ("g2", f.g2, eve_wins_g2),
        ("joker", f.joker, eve_wins_joker),
    ];
    let mut out = Outcome {
        name,
        checks: 0,
        failures: Vec::new(),
    };
    for (key, want, check) in checks {
        let Some(want) = want else { continue };
        out.checks += 1;
        match check(&a) {
            Ok(got) if got == want => {}
            Ok(got) => out.failures.push(format!("{key}: expected {want}, got {got}")),
            Err(e) => out.failures.push(format!("{key}: {e}")),
        }
    }
    out
}
