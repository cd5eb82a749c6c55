//! `classbisim`: command-line access to bisimulation, separation,
//! definability and game analysis for finite pointed Kripke models.
//!
//! Exit codes: 0 on any completed computation (negative verdicts included),
//! 2 on usage errors, 3 on parse or validation errors, 4 when a resource cap
//! is hit.

mod play;
mod report;

use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use classbisim_core::bisim::{bisimilar, distinguishing_formula, k_bisimilar, DistinguishResult};
use classbisim_core::classes::{
    class_equiv, class_separation, compare_fragments_capped, definable, lift_exists_with, lift_forall_with,
    BaseRelation, ClassSide, Definability, FragmentError, SeparationResult,
};
use classbisim_core::error::ResourceError;
use classbisim_core::games::{class_game_winner_bounded, game_winner, Rounds};
use classbisim_core::kripke::{load_class, Format, LoadError, ModelClass, PointedModel};
use classbisim_core::oracle::{oracle_separable_capped, DEFAULT_ORACLE_CAP};
use classbisim_core::semantics::eval;
use classbisim_core::syntax::parse_formula;

use report::{OutputFormat, Report};

#[derive(Parser, Debug)]
#[command(name = "classbisim", version, about = "Bisimulation, separation and definability for finite Kripke models")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json, env = "CLASSBISIM_FORMAT")]
    format: OutputFormat,

    /// Largest modal depth the oracle searches.
    #[arg(long, global = true, default_value_t = 4, env = "CLASSBISIM_MAX_DEPTH")]
    max_depth: usize,

    /// Largest formula size the oracle searches (unbounded when absent).
    #[arg(long, global = true, env = "CLASSBISIM_MAX_SIZE")]
    max_size: Option<usize>,

    /// Ceiling on stored formulas during search and construction.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_CAP, env = "CLASSBISIM_CAP")]
    cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truth of a formula at a pointed model.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Whether two pointed models are bisimilar (or k-bisimilar).
    Bisim {
        #[command(flatten)]
        pair: ModelPair,
        /// Compare only up to this modal depth.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// A depth-minimal formula true at the first model and false at the second.
    Distinguish {
        #[command(flatten)]
        pair: ModelPair,
    },
    /// A formula true on every member of c1 and false on every member of c2.
    Separate {
        #[command(flatten)]
        pair: ClassPair,
    },
    /// Whether a subset of a universe of models is modally definable.
    Define {
        #[arg(long)]
        universe: PathBuf,
        /// Comma-separated member indices.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        subset: Vec<usize>,
    },
    /// Whether two classes validate the same formulas.
    Equiv {
        #[command(flatten)]
        pair: ClassPair,
    },
    /// Exists- and forall-lifts of (k-)bisimilarity to classes.
    Lift {
        #[command(flatten)]
        pair: ClassPair,
        /// Lift k-bisimilarity instead of bisimilarity.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Compare the depth-d1 and depth-d2 fragments over a universe.
    Compare {
        #[arg(long)]
        universe: PathBuf,
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
    },
    /// Exhaustive search for a separating formula.
    Oracle {
        #[command(flatten)]
        pair: ClassPair,
    },
    /// Bisimulation game between two models or the class game.
    Game(GameArgs),
}

#[derive(Args, Debug)]
struct ModelPair {
    /// First pointed model (`-` for stdin).
    #[arg(long)]
    m1: PathBuf,
    /// Second pointed model.
    #[arg(long)]
    m2: PathBuf,
}

#[derive(Args, Debug)]
struct ClassPair {
    /// First class (`-` for stdin).
    #[arg(long)]
    c1: PathBuf,
    /// Second class.
    #[arg(long)]
    c2: PathBuf,
}

#[derive(Args, Debug)]
struct GameArgs {
    /// Left model (model game).
    #[arg(long, conflicts_with_all = ["c1", "c2"], requires = "m2")]
    m1: Option<PathBuf>,
    /// Right model.
    #[arg(long, requires = "m1")]
    m2: Option<PathBuf>,
    /// First class (class game).
    #[arg(long, requires = "c2")]
    c1: Option<PathBuf>,
    /// Second class.
    #[arg(long, requires = "c1")]
    c2: Option<PathBuf>,
    /// Play interactively in this role; the program plays the other side.
    #[arg(long, value_enum)]
    role: Option<Role>,
    /// Round bound: a number or `unbounded`.
    #[arg(long, default_value = "unbounded", value_parser = parse_rounds)]
    rounds: Rounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Role {
    Spoiler,
    Verifier,
}

fn parse_rounds(s: &str) -> Result<Rounds, String> {
    if s == "unbounded" {
        return Ok(Rounds::Unbounded);
    }
    s.parse()
        .map(Rounds::Bounded)
        .map_err(|_| format!("expected a number or `unbounded`, found `{s}`"))
}

/// Failure categories with their exit codes.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Resource(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 3,
            Failure::Resource(_) => 4,
            Failure::Internal(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Failure::Input(_) => "input",
            Failure::Resource(_) => "resource",
            Failure::Internal(_) => "internal",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Resource(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<ResourceError> for Failure {
    fn from(e: ResourceError) -> Self {
        Failure::Resource(e.to_string())
    }
}

/// Reads inputs, at most one of them from stdin.
struct Inputs<'a> {
    stdin: Option<&'a mut dyn BufRead>,
}

impl Inputs<'_> {
    fn text(&mut self, path: &PathBuf) -> Result<String, Failure> {
        if path.as_os_str() == "-" {
            let stdin = self
                .stdin
                .take()
                .ok_or_else(|| Failure::Input("standard input can supply only one input".into()))?;
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("reading standard input: {e}")))?;
            return Ok(text);
        }
        std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("reading {}: {e}", path.display())))
    }

    fn class(&mut self, path: &PathBuf) -> Result<ModelClass, Failure> {
        let text = self.text(path)?;
        load_class(&text, Format::sniff(&text)).map_err(|e| load_failure(path, e))
    }

    fn model(&mut self, path: &PathBuf) -> Result<PointedModel, Failure> {
        let c = self.class(path)?;
        match c.members.len() {
            1 => Ok(c.members.into_iter().next().unwrap()),
            n => Err(Failure::Input(format!(
                "{}: expected a single model, found a class of {n}",
                path.display()
            ))),
        }
    }
}

fn load_failure(path: &PathBuf, e: LoadError) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let stdin = io::stdin();
    let mut lock = stdin.lock();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli, &mut lock, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let line = match format {
                OutputFormat::Json => json!({"error": f.kind(), "message": f.message()}).to_string(),
                OutputFormat::Text => format!("error ({}): {}", f.kind(), f.message()),
            };
            let _ = out.flush();
            eprintln!("{}", line.replace('\n', " "));
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli, stdin: &mut dyn BufRead, out: &mut dyn Write) -> Result<(), Failure> {
    let report = Report::new(cli.format);
    let mut inputs = Inputs { stdin: Some(stdin) };
    let value = match cli.command {
        Command::Eval { model, formula } => {
            let p = inputs.model(&model)?;
            let f = parse_formula(&formula).map_err(|e| Failure::Input(format!("formula: {e}")))?;
            let v = eval(&p, &f).map_err(|e| Failure::Input(e.to_string()))?;
            json!({ "value": v })
        }
        Command::Bisim { pair, depth } => {
            let (a, b) = (inputs.model(&pair.m1)?, inputs.model(&pair.m2)?);
            match depth {
                None => json!({ "bisimilar": bisimilar(&a, &b) }),
                Some(k) => json!({ "k_bisimilar": k_bisimilar(&a, &b, k), "depth": k }),
            }
        }
        Command::Distinguish { pair } => {
            let (a, b) = (inputs.model(&pair.m1)?, inputs.model(&pair.m2)?);
            match distinguishing_formula(&a, &b) {
                DistinguishResult::Distinguished { formula, depth } => json!({
                    "bisimilar": false,
                    "formula": formula.to_string(),
                    "depth": depth,
                }),
                DistinguishResult::Bisimilar { witness } => json!({
                    "bisimilar": true,
                    "witness": witness,
                }),
            }
        }
        Command::Separate { pair } => {
            let (c1, c2) = (inputs.class(&pair.c1)?, inputs.class(&pair.c2)?);
            match class_separation(&c1, &c2) {
                SeparationResult::Separator { formula, polarity, depth } => json!({
                    "separable": true,
                    "formula": formula.to_string(),
                    "depth": depth,
                    "polarity": polarity.as_str(),
                }),
                SeparationResult::Witness { left, right } => json!({
                    "separable": false,
                    "witness": { "c1": left, "c2": right },
                }),
            }
        }
        Command::Define { universe, subset } => {
            let u = inputs.class(&universe)?;
            match definable(&u, &subset).map_err(|e| Failure::Input(e.to_string()))? {
                Definability::Definable { formula, depth } => json!({
                    "definable": true,
                    "formula": formula.to_string(),
                    "depth": depth,
                }),
                Definability::Undefinable { inside, outside } => json!({
                    "definable": false,
                    "witness": { "inside": inside, "outside": outside },
                }),
            }
        }
        Command::Equiv { pair } => {
            let (c1, c2) = (inputs.class(&pair.c1)?, inputs.class(&pair.c2)?);
            let r = class_equiv(&c1, &c2);
            match r.witness {
                None => json!({ "equivalent": true }),
                Some(w) => json!({
                    "equivalent": false,
                    "formula": w.formula.to_string(),
                    "valid_on": match w.valid_on { ClassSide::First => "c1", ClassSide::Second => "c2" },
                    "fails_on": w.fails_on,
                }),
            }
        }
        Command::Lift { pair, depth } => {
            let (c1, c2) = (inputs.class(&pair.c1)?, inputs.class(&pair.c2)?);
            let rel = depth.map_or(BaseRelation::Bisimilar, BaseRelation::KBisimilar);
            let mut v = json!({
                "exists": lift_exists_with(&c1, &c2, rel),
                "forall": lift_forall_with(&c1, &c2, rel),
            });
            if let Some(k) = depth {
                v["depth"] = json!(k);
            }
            v
        }
        Command::Compare { universe, d1, d2 } => {
            let u = inputs.class(&universe)?;
            match compare_fragments_capped(&u, d1, d2, cli.cap) {
                Ok(c) => json!({
                    "distinguishing": c.distinguishing.as_str(),
                    "expressive": c.expressive.as_str(),
                }),
                Err(FragmentError::Resource(e)) => return Err(e.into()),
                Err(e @ FragmentError::Mismatch { .. }) => return Err(Failure::Internal(e.to_string())),
            }
        }
        Command::Oracle { pair } => {
            let (c1, c2) = (inputs.class(&pair.c1)?, inputs.class(&pair.c2)?);
            match oracle_separable_capped(&c1, &c2, cli.max_depth, cli.max_size, cli.cap)? {
                Some(r) => json!({
                    "separable": true,
                    "formula": r.formula.to_string(),
                    "depth": r.depth,
                    "polarity": r.polarity.as_str(),
                }),
                None => json!({
                    "separable": false,
                    "max_depth": cli.max_depth,
                    "max_size": cli.max_size,
                }),
            }
        }
        Command::Game(args) => return game(args, inputs, report, out),
    };
    report.emit(out, &value)
}

fn game(args: GameArgs, mut inputs: Inputs<'_>, report: Report, out: &mut dyn Write) -> Result<(), Failure> {
    enum Sides {
        Models(PointedModel, PointedModel),
        Classes(ModelClass, ModelClass),
    }
    let sides = match (&args.m1, &args.m2, &args.c1, &args.c2) {
        (Some(m1), Some(m2), _, _) => Sides::Models(inputs.model(m1)?, inputs.model(m2)?),
        (_, _, Some(c1), Some(c2)) => Sides::Classes(inputs.class(c1)?, inputs.class(c2)?),
        _ => return Err(Failure::Input("game needs --m1/--m2 or --c1/--c2".into())),
    };
    match args.role {
        None => {
            let value: Value = match &sides {
                Sides::Models(a, b) => json!({
                    "winner": game_winner(a, b, args.rounds).as_str(),
                    "rounds": args.rounds.to_string(),
                }),
                Sides::Classes(c1, c2) => {
                    let r = class_game_winner_bounded(c1, c2, args.rounds);
                    json!({
                        "winner": r.winner.as_str(),
                        "rounds": args.rounds.to_string(),
                        "opening": r.opening.map(|(i, j)| json!([i, j])),
                    })
                }
            };
            report.emit(out, &value)
        }
        Some(role) => {
            let lines = inputs
                .stdin
                .take()
                .ok_or_else(|| Failure::Input("interactive play reads moves from standard input".into()))?;
            let start = match sides {
                Sides::Models(a, b) => play::Start::Models(a, b),
                Sides::Classes(c1, c2) => play::Start::Classes(c1, c2),
            };
            play::session(start, args.rounds, role, lines, out, report)
        }
    }
}
