mod corpus;
mod envelope;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use hdtk::automaton::{
    parse_tpa, random_automaton, random_hd_automaton, random_split_automaton, serialize_tpa, ParityAutomaton,
    RandomParams, Transition,
};
use hdtk::buchi::determinize_hd_buchi;
use hdtk::game::{muller_to_parity_from, solve_parity, GameArena, ParityGame, Player};
use hdtk::hd::{check_hd, inclusion_hd, Certificate};
use hdtk::lasso::{lasso_member, LassoWord};
use hdtk::normal::normalize_even;
use hdtk::reduction::{
    crosscheck_chain, implication_to_sim, random_implication_game, sat_to_good_implication, CnfFormula, ImplicationGame,
};
use hdtk::token::{
    build_g1, build_gk, build_joker, build_lookahead, build_sim, implication_tree, token_tree, TokenGame,
};
use hdtk::zielonka::{build_2token_tree_by_rules, build_implication_condition, build_tree, token_condition};
use hdtk::Error;

use envelope::ResultEnvelope;

#[derive(Parser)]
#[command(name = "hdtk", version, about = "History-determinism toolkit for parity automata")]
struct Cli {
    /// Print the result envelope as one JSON object.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock timings in the output.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide history-determinism with the 2-token game.
    CheckHd {
        file: PathBuf,
        /// Write the winner's strategy in the solved game.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Determinise a history-deterministic Büchi automaton.
    Determinize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Report opt maps and changed transitions per rank-reduction round.
        #[arg(long)]
        trace: bool,
    },
    /// Normal form of a [0,·] automaton on which Eve wins G2 from everywhere.
    Normalize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Re-check invariants after every subprocedure.
        #[arg(long)]
        paranoid: bool,
        #[arg(long)]
        trace: bool,
    },
    /// Solve a token game.
    Tokengame {
        #[arg(long, value_enum)]
        kind: GameKind,
        /// Start states, Eve's token first, e.g. `q0,q1`.
        #[arg(long)]
        starts: Option<String>,
        /// Adam's tokens for `gk`, lookahead for `lookahead`.
        #[arg(short, default_value_t = 1)]
        k: usize,
        file: PathBuf,
        /// Automaton of Adam's tokens (defaults to the first one).
        other: Option<PathBuf>,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Does the first automaton simulate the second?
    Simulate {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Language inclusion L(A) ⊆ L(H) for history-deterministic H.
    Include {
        a: PathBuf,
        h: PathBuf,
        /// Skip the history-determinism check of H.
        #[arg(long)]
        assume_hd: bool,
    },
    /// Membership of a lasso word `u|v`.
    Member {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Dump a Zielonka tree.
    Ztree {
        #[arg(long, value_enum)]
        kind: TreeKind,
        /// Token ranges for `generic`, e.g. `0-2,0-2,0-2`.
        #[arg(long, default_value = "0-1,0-1")]
        ranges: String,
        /// Top priority for `2token`, second range length for `implication`.
        #[arg(long, default_value_t = 1)]
        d: u32,
        /// First range `[0,d1]` for `implication`.
        #[arg(long, default_value_t = 1)]
        d1: u32,
        /// Lowest second priority for `implication`.
        #[arg(long, default_value_t = 0)]
        i: u32,
    },
    /// Hardness reductions.
    Reduce {
        #[command(subcommand)]
        cmd: ReduceCmd,
    },
    /// All five verdicts of the SAT chain on an implication game or a CNF.
    Crosscheck { file: PathBuf },
    /// Random instances.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 4)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        letters: usize,
        /// Priority index `lo,hi`.
        #[arg(long, default_value = "0,1")]
        index: String,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 3)]
        terms: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the property suites and fixture checks listed in a TOML spec.
    Corpus { file: PathBuf },
    /// Game arenas.
    Game {
        #[command(subcommand)]
        cmd: GameCmd,
    },
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// CNF (DIMACS) to a good implication game.
    Sat2game {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Implication game to the simulation instance `d.tpa,h.tpa`.
    Game2sim {
        file: PathBuf,
        #[arg(short, long)]
        output: String,
    },
}

#[derive(Subcommand)]
enum GameCmd {
    /// Winner from the initial vertex of a parity or implication arena.
    Solve {
        file: PathBuf,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GameKind {
    Sim,
    G1,
    G2,
    Gk,
    Joker,
    Lookahead,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeKind {
    Generic,
    #[value(name = "2token")]
    TwoToken,
    Implication,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Automaton,
    Hd,
    Split,
    Cnf,
    Igame,
}

/// Failures that end a command with exit code 2.
#[derive(Debug)]
enum Fail {
    Lib(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

impl std::fmt::Display for Fail {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fail::Lib(e) => write!(f, "{e}"),
            Fail::Io(m) | Fail::Usage(m) => f.write_str(m),
        }
    }
}

type Res<T> = Result<T, Fail>;

struct Ctx {
    env: ResultEnvelope,
    timings: bool,
    /// Text printed before the verdicts (automata, arenas, trees).
    body: Option<String>,
}

impl Ctx {
    fn read(&mut self, path: &Path) -> Res<String> {
        let bytes = std::fs::read(path).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))?;
        self.env.input(path, &bytes);
        String::from_utf8(bytes).map_err(|_| Fail::Io(format!("{}: not UTF-8", path.display())))
    }

    fn automaton(&mut self, path: &Path) -> Res<ParityAutomaton> {
        let text = self.read(path)?;
        Ok(parse_tpa(&text)?)
    }

    fn time<T>(&mut self, key: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        if self.timings {
            self.env.timings_ms.insert(key.into(), t.elapsed().as_millis());
        }
        out
    }

    /// Writes `text` to `path`, or makes it the printed body.
    fn emit(&mut self, path: Option<&Path>, text: String) -> Res<()> {
        match path {
            Some(p) => write(p, &text),
            None => {
                self.body = Some(text);
                Ok(())
            }
        }
    }

    fn certificate(&mut self, path: &Path, cert: &Certificate) -> Res<()> {
        let text = cert.dump();
        write(path, &text)?;
        let back = std::fs::read_to_string(path).map_err(|e| Fail::Io(e.to_string()))?;
        let ok = Certificate::parse(&back)?.verify()?;
        self.env.verdict("certificate_verified", ok);
        self.env.certificates.push(path.display().to_string());
        Ok(())
    }
}

fn write(path: &Path, text: &str) -> Res<()> {
    std::fs::write(path, text).map_err(|e| Fail::Io(format!("{}: {e}", path.display())))
}

fn holds(b: bool) -> ExitCode {
    if b {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn eve(p: Player) -> ExitCode {
    holds(p == Player::Eve)
}

fn state(a: &ParityAutomaton, name: &str) -> Res<usize> {
    a.state_index(name)
        .ok_or_else(|| Fail::Usage(format!("unknown state `{name}`")))
}

fn certificate_of(game: &TokenGame) -> Res<(Player, Certificate)> {
    let sol = game.solve()?;
    let mut pg = sol.product.game.clone();
    pg.initial = sol.product.lookup(game.starts[0], 0).expect("start in product");
    let winner = sol.winners[0];
    let cert = Certificate {
        region: sol.solution.region(winner),
        strategy: sol.solution.strategy_of(&pg, winner),
        game: pg,
        winner,
    };
    Ok((winner, cert))
}

fn parity_certificate(g: ParityGame) -> Res<(Player, Certificate)> {
    let sol = solve_parity(&g)?;
    let winner = sol.winner[g.initial];
    Ok((
        winner,
        Certificate {
            region: sol.region(winner),
            strategy: sol.strategy_of(&g, winner),
            game: g,
            winner,
        },
    ))
}

fn parse_index(s: &str) -> Res<(u32, u32)> {
    let bad = || Fail::Usage(format!("index must be `lo,hi`, got `{s}`"));
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_ranges(s: &str) -> Res<Vec<(u32, u32)>> {
    s.split(',')
        .map(|r| {
            let bad = || Fail::Usage(format!("range must be `lo-hi`, got `{r}`"));
            let (lo, hi) = r.split_once('-').ok_or_else(bad)?;
            Ok((
                lo.trim().parse().map_err(|_| bad())?,
                hi.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn transitions(a: &ParityAutomaton, ts: &[Transition]) -> String {
    let items: Vec<String> = ts
        .iter()
        .map(|t| {
            format!(
                "{}-{}:{}->{}",
                a.states[t.src], a.alphabet[t.letter], t.prio, a.states[t.dst]
            )
        })
        .collect();
    if items.is_empty() {
        "-".into()
    } else {
        items.join(" ")
    }
}

fn dispatch(cmd: Cmd, cx: &mut Ctx, seed: u64) -> Res<ExitCode> {
    match cmd {
        Cmd::CheckHd { file, certificate } => {
            let a = cx.automaton(&file)?;
            let v = cx.time("check_hd", || check_hd(&a))?;
            cx.env.verdict("verdict", if v.hd { "HD" } else { "notHD" });
            if let Some(p) = certificate {
                cx.certificate(&p, &v.certificate)?;
            }
            Ok(holds(v.hd))
        }
        Cmd::Determinize { file, output, trace } => {
            let a = cx.automaton(&file)?;
            let d = cx.time("determinize", || determinize_hd_buchi(&a))?;
            cx.env.verdict("states_in", a.num_states());
            cx.env.verdict("states_out", d.automaton.num_states());
            cx.env.verdict("deterministic", d.automaton.is_deterministic());
            if trace {
                let r = &d.reduction;
                for (i, it) in r.trace.iter().enumerate() {
                    let opt: Vec<String> = it.opt.iter().map(|x| x.to_string()).collect();
                    cx.env.verdict(&format!("trace.{i:03}.opt"), opt.join(" "));
                    cx.env
                        .verdict(&format!("trace.{i:03}.removed"), transitions(&d.extracted, &it.removed));
                    cx.env.verdict(
                        &format!("trace.{i:03}.relabelled"),
                        transitions(&d.extracted, &it.relabelled),
                    );
                }
            }
            cx.emit(output.as_deref(), serialize_tpa(&d.automaton))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Normalize {
            file,
            output,
            paranoid,
            trace,
        } => {
            let a = cx.automaton(&file)?;
            let n = cx.time("normalize", || normalize_even(&a, paranoid))?;
            cx.env.verdict("rounds", n.rounds.len());
            cx.env.verdict("transitions_in", a.transitions.len());
            cx.env.verdict("transitions_out", n.automaton.transitions.len());
            if trace {
                for (i, r) in n.rounds.iter().enumerate() {
                    cx.env
                        .verdict(&format!("trace.{i:03}.rank_rounds"), r.rank_reduction.len());
                    let right = r.right.iter().filter(|&&x| x).count();
                    cx.env.verdict(&format!("trace.{i:03}.right_states"), right);
                    cx.env.verdict(&format!("trace.{i:03}.separated"), r.separated.len());
                    cx.env.verdict(&format!("trace.{i:03}.lowered"), r.lowered.len());
                }
            }
            cx.emit(output.as_deref(), serialize_tpa(&n.automaton))?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Tokengame {
            kind,
            starts,
            k,
            file,
            other,
            certificate,
        } => {
            let a = cx.automaton(&file)?;
            let b = match &other {
                Some(p) => cx.automaton(p)?,
                None => a.clone(),
            };
            let names: Vec<String> = starts
                .map(|s| s.split(',').map(|x| x.trim().to_string()).collect())
                .unwrap_or_default();
            let tokens = match kind {
                GameKind::G2 => 3,
                GameKind::Gk => k + 1,
                _ => 2,
            };
            let mut ids = vec![a.initial];
            ids.extend(std::iter::repeat_n(b.initial, tokens - 1));
            if !names.is_empty() {
                if names.len() != tokens {
                    return Err(Fail::Usage(format!("--starts needs {tokens} states")));
                }
                ids[0] = state(&a, &names[0])?;
                for (i, n) in names.iter().enumerate().skip(1) {
                    ids[i] = state(&b, n)?;
                }
            }
            let game = match kind {
                GameKind::Sim => build_sim(&a, &b, &[(ids[0], ids[1])])?,
                GameKind::G1 => build_g1(&a, &b, &[(ids[0], ids[1])])?,
                GameKind::G2 | GameKind::Gk => {
                    let adams = vec![&b; tokens - 1];
                    build_gk(&a, &adams, &[ids.clone()])?
                }
                GameKind::Joker => build_joker(&a, &[(ids[0], ids[1])])?,
                GameKind::Lookahead => {
                    if !names.is_empty() {
                        return Err(Fail::Usage("lookahead games start from the initial state".into()));
                    }
                    build_lookahead(&a, k)?
                }
            };
            let (winner, cert) = cx.time("solve", || certificate_of(&game))?;
            cx.env.verdict("winner", winner);
            if let Some(p) = certificate {
                cx.certificate(&p, &cert)?;
            }
            Ok(eve(winner))
        }
        Cmd::Simulate { a, b, certificate } => {
            let a = cx.automaton(&a)?;
            let b = cx.automaton(&b)?;
            let game = build_sim(&a, &b, &[(a.initial, b.initial)])?;
            let (winner, cert) = cx.time("solve", || certificate_of(&game))?;
            cx.env.verdict("simulates", winner == Player::Eve);
            if let Some(p) = certificate {
                cx.certificate(&p, &cert)?;
            }
            Ok(eve(winner))
        }
        Cmd::Include { a, h, assume_hd } => {
            let a = cx.automaton(&a)?;
            let h = cx.automaton(&h)?;
            let r = cx.time("include", || inclusion_hd(&a, &h, assume_hd))?;
            cx.env.verdict("included", r.included);
            Ok(holds(r.included))
        }
        Cmd::Member { file, word } => {
            let a = cx.automaton(&file)?;
            let w = LassoWord::parse(&word, &a.alphabet)?;
            let m = lasso_member(&a, &w)?;
            cx.env.verdict("accepted", m);
            Ok(holds(m))
        }
        Cmd::Ztree { kind, ranges, d, d1, i } => {
            let tree = match kind {
                TreeKind::Generic => build_tree(&token_condition(&parse_ranges(&ranges)?))?,
                TreeKind::TwoToken => build_2token_tree_by_rules(d),
                TreeKind::Implication => build_implication_condition(d1, d, i)?.1,
            };
            cx.env.verdict("nodes", tree.nodes.len());
            cx.env.verdict("height", tree.height());
            cx.env.verdict("leaves", tree.num_branches());
            cx.body = Some(tree.dump());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Reduce {
            cmd: ReduceCmd::Sat2game { file, output },
        } => {
            let phi = CnfFormula::parse_dimacs(&cx.read(&file)?)?;
            let g = sat_to_good_implication(&phi)?;
            cx.env.verdict("vertices", g.arena.num_vertices());
            cx.env.verdict("edges", g.arena.edges.len());
            cx.emit(output.as_deref(), g.dump())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Reduce {
            cmd: ReduceCmd::Game2sim { file, output },
        } => {
            let g = ImplicationGame::parse(&cx.read(&file)?)?;
            let (dp, hp) = output
                .split_once(',')
                .ok_or_else(|| Fail::Usage("output must be `d.tpa,h.tpa`".into()))?;
            let inst = implication_to_sim(&g)?;
            write(Path::new(dp), &serialize_tpa(&inst.d))?;
            write(Path::new(hp), &serialize_tpa(&inst.h))?;
            cx.env.verdict("d_states", inst.d.num_states());
            cx.env.verdict("h_states", inst.h.num_states());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Crosscheck { file } => {
            let text = cx.read(&file)?;
            let g = match ImplicationGame::parse(&text) {
                Ok(g) => g,
                Err(e) => match CnfFormula::parse_dimacs(&text) {
                    Ok(phi) => {
                        cx.env.verdict("sat", phi.brute_force_sat());
                        sat_to_good_implication(&phi)?
                    }
                    Err(_) => return Err(e.into()),
                },
            };
            let r = cx.time("crosscheck", || crosscheck_chain(&g))?;
            cx.env.verdict("game", r.eve_wins_game);
            cx.env.verdict("simulation", r.h_simulates_d);
            cx.env.verdict("hd", r.h_is_hd);
            cx.env.verdict("g1", r.eve_wins_g1);
            cx.env.verdict("g2", r.eve_wins_g2);
            cx.env.verdict("agree", r.agree());
            Ok(holds(r.agree()))
        }
        Cmd::Gen {
            kind,
            states,
            letters,
            index,
            density,
            vars,
            terms,
            output,
        } => {
            let (lo, hi) = parse_index(&index)?;
            let params = RandomParams {
                states,
                letters,
                lo,
                hi,
                density,
                ..RandomParams::default()
            };
            let text = match kind {
                GenKind::Automaton => serialize_tpa(&random_automaton(seed, &params)?),
                GenKind::Hd => serialize_tpa(&random_hd_automaton(seed, &params)?.0),
                GenKind::Split => serialize_tpa(&random_split_automaton(seed, &params)?.0),
                GenKind::Cnf => CnfFormula::random(seed, vars, terms, vars).to_dimacs(),
                GenKind::Igame => {
                    let g = random_implication_game(seed, states, hi)?;
                    cx.env.verdict("good", g.is_good());
                    g.dump()
                }
            };
            cx.emit(output.as_deref(), text)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Corpus { file } => {
            let text = cx.read(&file)?;
            let spec = corpus::parse(&text).map_err(|e| Fail::Usage(format!("{}: {e}", file.display())))?;
            let base = file.parent().unwrap_or(Path::new("."));
            let out = cx.time("corpus", || corpus::run(&spec, base, seed, corpus::threads()));
            let mut checks = 0;
            let mut failed = Vec::new();
            for (i, o) in out.iter().enumerate() {
                let key = format!("{i:03}.{}", o.name);
                cx.env.verdict(&format!("{key}.checks"), o.checks);
                cx.env.verdict(&format!("{key}.failures"), o.failures.len());
                if let Some(f) = o.failures.first() {
                    cx.env.verdict(&format!("{key}.first_failure"), f);
                    failed.push(o.name.clone());
                }
                checks += o.checks;
            }
            cx.env.verdict("checks", checks);
            cx.env.verdict(
                "failed",
                if failed.is_empty() {
                    "-".to_string()
                } else {
                    failed.join(", ")
                },
            );
            Ok(holds(failed.is_empty()))
        }
        Cmd::Game {
            cmd: GameCmd::Solve { file, certificate },
        } => {
            let arena = GameArena::parse(&cx.read(&file)?)?;
            let widths: Vec<usize> = arena.edges.iter().map(|e| e.colour.len()).filter(|&w| w > 0).collect();
            let (winner, cert) = match widths.iter().max().copied().unwrap_or(1) {
                1 => parity_certificate(ParityGame::from_arena(&arena)?)?,
                2 => {
                    let max = arena
                        .edges
                        .iter()
                        .flat_map(|e| e.colour.iter().copied())
                        .max()
                        .unwrap_or(0);
                    let tree = implication_tree((0, max), (0, max))?;
                    let mut p = muller_to_parity_from(&arena, &tree, &[(arena.initial, 0)])?;
                    p.game.initial = p.lookup(arena.initial, 0).expect("start in product");
                    parity_certificate(p.game)?
                }
                w => {
                    let max = arena
                        .edges
                        .iter()
                        .flat_map(|e| e.colour.iter().copied())
                        .max()
                        .unwrap_or(0);
                    let tree = token_tree(&vec![(0, max); w])?;
                    let p = muller_to_parity_from(&arena, &tree, &[(arena.initial, 0)])?;
                    parity_certificate(p.game)?
                }
            };
            cx.env.verdict("winner", winner);
            if let Some(p) = certificate {
                cx.certificate(&p, &cert)?;
            }
            Ok(eve(winner))
        }
    }
}

fn command_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::CheckHd { .. } => "check-hd",
        Cmd::Determinize { .. } => "determinize",
        Cmd::Normalize { .. } => "normalize",
        Cmd::Tokengame { .. } => "tokengame",
        Cmd::Simulate { .. } => "simulate",
        Cmd::Include { .. } => "include",
        Cmd::Member { .. } => "member",
        Cmd::Ztree { .. } => "ztree",
        Cmd::Reduce {
            cmd: ReduceCmd::Sat2game { .. },
        } => "reduce sat2game",
        Cmd::Reduce {
            cmd: ReduceCmd::Game2sim { .. },
        } => "reduce game2sim",
        Cmd::Crosscheck { .. } => "crosscheck",
        Cmd::Gen { .. } => "gen",
        Cmd::Corpus { .. } => "corpus",
        Cmd::Game { .. } => "game solve",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.cmd);
    let mut cx = Ctx {
        env: ResultEnvelope::new(name, cli.seed),
        timings: cli.timings,
        body: None,
    };
    let code = match dispatch(cli.cmd, &mut cx, cli.seed) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if cli.json {
                cx.env.verdict("error", &e);
                println!("{}", serde_json::to_string(&cx.env).expect("envelope serialises"));
            }
            return ExitCode::from(2);
        }
    };
    if cli.json {
        if let Some(body) = cx.body.take() {
            cx.env.verdict("output", body);
        }
        println!("{}", serde_json::to_string(&cx.env).expect("envelope serialises"));
    } else {
        match &cx.body {
            Some(body) => {
                print!("{body}");
                for line in cx.env.lines().lines() {
                    println!("# {line}");
                }
            }
            None => print!("{}", cx.env.lines()),
        }
    }
    code
}
