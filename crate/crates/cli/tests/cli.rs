use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hdtk::automaton::parse_tpa;
use hdtk::hd::Certificate;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn hdtk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdtk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_hd_on_fixtures() {
    let a = hdtk(&["check-hd", path(&fixture("fixA.tpa"))]);
    assert_eq!(a.status.code(), Some(1));
    assert_eq!(stdout(&a), "verdict: notHD\n");
    let b = hdtk(&["check-hd", path(&fixture("figB.tpa"))]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(stdout(&b), "verdict: HD\n");
}

#[test]
fn json_envelope_is_stable() {
    let f = fixture("figB.tpa");
    let args = ["--json", "check-hd", path(&f)];
    let (x, y) = (hdtk(&args), hdtk(&args));
    assert_eq!(x.stdout, y.stdout);
    let v: serde_json::Value = serde_json::from_slice(&x.stdout).unwrap();
    assert_eq!(v["command"], "check-hd");
    assert_eq!(v["verdicts"]["verdict"], "HD");
    assert_eq!(v["seed"], 0);
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn certificates_reverify() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, file, code) in [
        (vec!["check-hd"], "fixA.tpa", 1),
        (vec!["tokengame", "--kind", "joker"], "fixC.tpa", 0),
        (vec!["tokengame", "--kind", "g2"], "fixC.tpa", 1),
    ] {
        let cert = dir.path().join("out.strat");
        let mut args = cmd.clone();
        let f = fixture(file);
        args.extend([path(&f), "--certificate", path(&cert)]);
        let o = hdtk(&args);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        assert!(stdout(&o).contains("certificate_verified: true"));
        let c = Certificate::parse(&std::fs::read_to_string(&cert).unwrap()).unwrap();
        assert!(c.verify().unwrap());
    }
}

#[test]
fn sat_pipeline_crosscheck() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("f.cnf");
    let game = dir.path().join("g.igame");
    std::fs::write(&cnf, "p cnf 2 2\n1 2 0\n-1 0\n").unwrap();
    assert!(hdtk(&["reduce", "sat2game", path(&cnf), "-o", path(&game)])
        .status
        .success());
    let o = hdtk(&["crosscheck", path(&game)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for key in ["game", "simulation", "hd", "g1", "g2"] {
        assert!(out.contains(&format!("{key}: true")), "{out}");
    }
    std::fs::write(&cnf, "p cnf 1 2\n1 0\n-1 0\n").unwrap();
    let o = hdtk(&["crosscheck", path(&cnf)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("sat: false\n"));
    assert!(stdout(&o).contains("game: false\n"));

    let d = dir.path().join("d.tpa");
    let h = dir.path().join("h.tpa");
    let out = format!("{},{}", path(&d), path(&h));
    assert!(hdtk(&["reduce", "game2sim", path(&game), "-o", &out]).status.success());
    let o = hdtk(&["simulate", path(&h), path(&d)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_and_precondition_errors_exit_2() {
    assert_eq!(hdtk(&["bogus"]).status.code(), Some(2));
    assert_eq!(hdtk(&["check-hd", "/nonexistent.tpa"]).status.code(), Some(2));
    // Not a Büchi automaton.
    assert_eq!(
        hdtk(&["determinize", path(&fixture("fixC.tpa"))]).status.code(),
        Some(2)
    );
}

#[test]
fn gen_and_determinize() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.tpa");
    let d = dir.path().join("d.tpa");
    let gen = ["gen", "--kind", "hd", "--states", "5", "--index", "0,1", "--seed", "3"];
    let first = hdtk(&gen);
    assert_eq!(first.stdout, hdtk(&gen).stdout);
    std::fs::write(&a, &first.stdout).unwrap();
    let o = hdtk(&["determinize", path(&a), "-o", path(&d), "--trace"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("deterministic: true"));
    let det = parse_tpa(&std::fs::read_to_string(&d).unwrap()).unwrap();
    assert!(det.is_deterministic());
    let o = hdtk(&["include", path(&a), path(&d)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn member_and_game_solve() {
    let o = hdtk(&["member", path(&fixture("figB.tpa")), "--word", "|a"]);
    assert!(stdout(&o).starts_with("accepted: "));
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.arena");
    std::fs::write(&g, "vertex 0 Eve\nvertex 1 Adam\nedge 0 1 1\nedge 0 0 2\nedge 1 0 1\n").unwrap();
    let o = hdtk(&["game", "solve", path(&g)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "winner: Eve\n");
}

#[test]
fn ztree_dump_format() {
    let o = hdtk(&["ztree", "--kind", "2token", "--d", "1"]);
    let out = stdout(&o);
    assert!(out.starts_with("node 0 depth 0 pdepth "));
    assert!(out.lines().next().unwrap().contains(" label {"));
}

#[test]
fn corpus_runs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("empty.corpus");
    std::fs::write(&spec, "").unwrap();
    let o = hdtk(&["corpus", path(&spec)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("checks: 0\n"));

    std::fs::copy(fixture("fixA.tpa"), dir.path().join("a.tpa")).unwrap();
    let small = "[[suite]]\nproperty = \"zielonka\"\n\n[[fixture]]\npath = \"a.tpa\"\nhd = false\ng1 = true\n";
    std::fs::write(&spec, small).unwrap();
    let o = hdtk(&["corpus", path(&spec)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // Corrupted fixture.
    let text = std::fs::read_to_string(dir.path().join("a.tpa")).unwrap();
    std::fs::write(dir.path().join("a.tpa"), text.replace("trans:", "trans: bogus")).unwrap();
    let o = hdtk(&["corpus", path(&spec)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("failed: fixture a.tpa"), "{}", stdout(&o));

    std::fs::write(&spec, "[[suite]]\nproperty = \"nope\"\n").unwrap();
    assert_eq!(hdtk(&["corpus", path(&spec)]).status.code(), Some(2));
}
