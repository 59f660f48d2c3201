//! The `covers` command line: checking, solving, reductions, claim
//! verification and McGarvey realisation over `.dg` graphs and DIMACS files.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use covers_core::cnf::{normalize_formula, parse_dimacs, NormalizeFlags};
use covers_core::harness::{exit_code, random_cnf, verify_claim, ClaimId, ClaimInstance};
use covers_core::mcgarvey::{majority_graph, mcgarvey_profile, PreferenceProfile};
use covers_core::reductions::{self, ConstructionId};
use covers_core::solver::{decide, decide_collecting};
use covers_core::{covering, AltSet, Budget, Cnf, Direction, DominanceGraph, Notion, ProblemKind, SolveAnswer};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

pub const EXIT_USAGE: u8 = 64;
pub const EXIT_VALIDATION: u8 = 65;
pub const EXIT_INTERNAL: u8 = 70;
pub const EXIT_RESOURCE: u8 = 75;

#[derive(Debug, Parser)]
#[command(name = "covers", version, about = "Minimal and minimum-size covering sets in dominance graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Maximum number of candidate subsets one search may probe.
    #[arg(long, global = true, env = "COVERS_BUDGET_SUBSETS", value_name = "N")]
    pub budget_subsets: Option<u64>,

    /// Wall-clock limit per search, in seconds.
    #[arg(long, global = true, env = "COVERS_BUDGET_SECONDS", value_name = "SECS")]
    pub budget_seconds: Option<u64>,

    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub plain: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test whether a set is a covering set, optionally minimal or minimum-size.
    Check(CheckArgs),
    /// Answer one of the covering-set problems exactly.
    Solve(SolveArgs),
    /// Emit the dominance graph a construction builds from CNF formulas.
    Reduce(ReduceArgs),
    /// Check gadget claims against brute-force SAT and the exact solver.
    Verify(VerifyArgs),
    /// Realise a graph as the majority relation of a preference profile, or back.
    Realize(RealizeArgs),
    /// Generate a seeded random CNF formula in DIMACS format.
    RandomCnf(RandomCnfArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    #[value(alias = "upward", alias = "u")]
    Up,
    #[value(alias = "downward", alias = "d")]
    Down,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Up => Direction::Upward,
            DirectionArg::Down => Direction::Downward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NotionArg {
    #[value(alias = "mc", alias = "inclusion-minimal")]
    Minimal,
    #[value(alias = "msc", alias = "minimum-size")]
    Minimum,
}

impl From<NotionArg> for Notion {
    fn from(n: NotionArg) -> Self {
        match n {
            NotionArg::Minimal => Notion::InclusionMinimal,
            NotionArg::Minimum => Notion::MinimumSize,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemArg {
    Size,
    Member,
    MemberAll,
    Unique,
    Test,
    Find,
    Exists,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Graph in `.dg` format (`-` for stdin).
    #[arg(long)]
    pub graph: PathBuf,
    /// Comma-separated alternative names; empty for the empty set.
    #[arg(long, allow_hyphen_values = true)]
    pub set: String,
    #[arg(long, value_enum)]
    pub direction: DirectionArg,
    /// Also require inclusion-minimality.
    #[arg(long, conflicts_with = "notion")]
    pub minimal: bool,
    /// Also require membership in the family of this notion.
    #[arg(long, value_enum)]
    pub notion: Option<NotionArg>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub direction: DirectionArg,
    #[arg(long, value_enum)]
    pub notion: NotionArg,
    #[arg(long, value_enum)]
    pub problem: ProblemArg,
    /// Designated alternative for member and member-all.
    #[arg(long)]
    pub alt: Option<String>,
    /// Size bound for size.
    #[arg(long)]
    pub k: Option<usize>,
    /// Candidate set for test.
    #[arg(long)]
    pub set: Option<String>,
    /// Enumerate the whole family and include it as `all`.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[arg(long, value_parser = parse_construction)]
    pub construction: ConstructionId,
    /// DIMACS input; repeat in chain order for cons3 and cons6.
    #[arg(long, required = true)]
    pub cnf: Vec<PathBuf>,
    /// Enforce the chained-construction provisos by padding each formula first.
    #[arg(long)]
    pub normalize: bool,
    /// Where to write the graph; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the role-to-alternative labels as JSON.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Claim id (CLAIM1..CLAIM11, SIZE_2N1, SIZE_2K3, SIZE_5K2, SIZE_3NRK,
    /// PARITY_UP, PARITY_DOWN); repeatable.
    #[arg(long, required = true, value_parser = parse_claim)]
    pub claim: Vec<ClaimId>,
    /// DIMACS input; one file, or the chain in order for parity claims.
    #[arg(long, required = true)]
    pub cnf: Vec<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct RealizeSource {
    /// Graph to realise as a profile.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Profile (JSON list of rankings) whose majority graph to print.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RealizeArgs {
    #[command(flatten)]
    pub source: RealizeSource,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RandomCnfArgs {
    #[arg(long)]
    pub vars: usize,
    #[arg(long)]
    pub clauses: usize,
    /// Literals per clause.
    #[arg(long)]
    pub width: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_construction(s: &str) -> Result<ConstructionId, String> {
    s.parse()
}

fn parse_claim(s: &str) -> Result<ClaimId, String> {
    s.parse()
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Resource(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Validation(_) | CliError::Read { .. } => EXIT_VALIDATION,
            CliError::Resource(_) => EXIT_RESOURCE,
            CliError::Write { .. } => EXIT_INTERNAL,
        }
    }
}

impl From<covers_core::Error> for CliError {
    fn from(e: covers_core::Error) -> Self {
        if e.is_resource() {
            CliError::Resource(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

macro_rules! validation_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                covers_core::Error::from(e).into()
            }
        }
    )*};
}

validation_from!(covers_core::GraphError, covers_core::CnfError, reductions::ReductionError);

impl From<covers_core::mcgarvey::ProfileError> for CliError {
    fn from(e: covers_core::mcgarvey::ProfileError) -> Self {
        match e {
            covers_core::mcgarvey::ProfileError::Graph(g) => g.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// The JSON document printed by `check` and `solve`.
#[derive(Debug, Serialize)]
pub struct SolveOutput {
    pub problem: String,
    pub direction: &'static str,
    pub notion: Option<&'static str>,
    pub answer: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all: Option<Vec<String>>,
    pub stats: Value,
}

impl SolveOutput {
    pub fn from_answer(g: &DominanceGraph, problem: &str, dir: Direction, notion: Notion, ans: &SolveAnswer) -> Self {
        SolveOutput {
            problem: problem.to_string(),
            direction: dir.as_str(),
            notion: Some(notion.as_str()),
            answer: ans.verdict,
            witness: ans.witness.map(|w| g.format_set(w)),
            all: ans.all_solutions.as_ref().map(|fam| fam.iter().map(|s| g.format_set(*s)).collect()),
            stats: serde_json::to_value(&ans.stats).expect("stats serialize"),
        }
    }

    fn plain(&self) -> String {
        let mut s = match self.answer {
            Some(a) => a.to_string(),
            None => "none".to_string(),
        };
        if let Some(w) = &self.witness {
            s.push_str(&format!("\nwitness: {{{w}}}"));
        }
        for m in self.all.iter().flatten() {
            s.push_str(&format!("\n{{{m}}}"));
        }
        s
    }
}

/// Parses `argv` (including the program name), runs the command, and
/// returns the process exit status. Never panics; internal errors map to 70.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = panic::catch_unwind(AssertUnwindSafe(|| execute(&cli, out)));
    match result {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            let _ = writeln!(err, "internal error: {msg}");
            EXIT_INTERNAL
        }
    }
}

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default();
    if let Some(n) = cli.budget_subsets {
        b = b.with_probes(n);
    }
    if let Some(s) = cli.budget_seconds {
        b = b.with_time(Duration::from_secs(s));
    }
    b
}

fn read_input(path: &Path) -> Result<String, CliError> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|source| CliError::Read { path: path.into(), source })?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Write { path: p.into(), source }),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Write { path: "<stdout>".into(), source }),
    }
}

pub fn load_graph(path: &Path) -> Result<DominanceGraph, CliError> {
    Ok(DominanceGraph::parse_dg(&read_input(path)?)?)
}

pub fn load_cnf(path: &Path, allow_empty: bool) -> Result<Cnf, CliError> {
    Ok(parse_dimacs(&read_input(path)?, allow_empty)?)
}

pub fn parse_set(g: &DominanceGraph, list: &str) -> Result<AltSet, CliError> {
    let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    Ok(g.set_of(names)?)
}

fn print_json<T: Serialize>(value: &T, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    write_output(None, &text, out)
}

fn emit(cli: &Cli, o: &SolveOutput, out: &mut dyn Write) -> Result<(), CliError> {
    if cli.plain {
        write_output(None, &format!("{}\n", o.plain()), out)
    } else {
        print_json(o, out)
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Check(a) => check(cli, a, out),
        Command::Solve(a) => solve(cli, a, out),
        Command::Reduce(a) => reduce(a, out),
        Command::Verify(a) => verify(cli, a, out),
        Command::Realize(a) => realize(a, out),
        Command::RandomCnf(a) => {
            let phi = random_cnf(a.vars, a.clauses, a.width, a.seed)?;
            write_output(a.out.as_deref(), &phi.to_dimacs(), out)?;
            Ok(0)
        }
    }
}

fn check(cli: &Cli, a: &CheckArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let g = load_graph(&a.graph)?;
    let dir: Direction = a.direction.into();
    let m = parse_set(&g, &a.set)?;
    let notion = if a.minimal { Some(Notion::InclusionMinimal) } else { a.notion.map(Notion::from) };
    let o = match notion {
        None => SolveOutput {
            problem: "check".into(),
            direction: dir.as_str(),
            notion: None,
            answer: Some(covering::is_covering_set(&g, m, dir)?),
            witness: Some(g.format_set(m)),
            all: None,
            stats: json!({ "uncovered": g.format_set(covering::uncovered_set(&g, m, dir)?) }),
        },
        Some(notion) => {
            let ans = decide(&g, dir, notion, &ProblemKind::Test(m), &budget(cli))?;
            let mut o = SolveOutput::from_answer(&g, "check", dir, notion, &ans);
            o.witness = Some(g.format_set(m));
            o
        }
    };
    emit(cli, &o, out)?;
    Ok(0)
}

/// Maps the problem flags onto a [`ProblemKind`], rejecting missing or
/// superfluous parameters.
pub fn problem_kind(g: &DominanceGraph, a: &SolveArgs) -> Result<ProblemKind, CliError> {
    let need = |what: &str| CliError::Usage(format!("--problem {:?} needs --{what}", a.problem));
    let kind = match a.problem {
        ProblemArg::Size => ProblemKind::Size(a.k.ok_or_else(|| need("k"))?),
        ProblemArg::Member => ProblemKind::Member(g.require(a.alt.as_deref().ok_or_else(|| need("alt"))?)?),
        ProblemArg::MemberAll => ProblemKind::MemberAll(g.require(a.alt.as_deref().ok_or_else(|| need("alt"))?)?),
        ProblemArg::Test => ProblemKind::Test(parse_set(g, a.set.as_deref().ok_or_else(|| need("set"))?)?),
        ProblemArg::Unique => ProblemKind::Unique,
        ProblemArg::Find => ProblemKind::Find,
        ProblemArg::Exists => ProblemKind::Exists,
    };
    let extra = [
        ("k", a.k.is_some() && a.problem != ProblemArg::Size),
        ("alt", a.alt.is_some() && !matches!(a.problem, ProblemArg::Member | ProblemArg::MemberAll)),
        ("set", a.set.is_some() && a.problem != ProblemArg::Test),
    ];
    if let Some((flag, _)) = extra.iter().find(|(_, bad)| *bad) {
        return Err(CliError::Usage(format!("--{flag} does not apply to --problem {}", kind.name())));
    }
    Ok(kind)
}

fn solve(cli: &Cli, a: &SolveArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let g = load_graph(&a.graph)?;
    let kind = problem_kind(&g, a)?;
    let (dir, notion): (Direction, Notion) = (a.direction.into(), a.notion.into());
    let ans = if a.all {
        decide_collecting(&g, dir, notion, &kind, &budget(cli))?
    } else {
        decide(&g, dir, notion, &kind, &budget(cli))?
    };
    emit(cli, &SolveOutput::from_answer(&g, kind.name(), dir, notion, &ans), out)?;
    Ok(0)
}

fn reduce(a: &ReduceArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let id = a.construction;
    let mut formulas =
        a.cnf.iter().map(|p| load_cnf(p, id.allows_empty_clauses())).collect::<Result<Vec<_>, _>>()?;
    if a.normalize {
        formulas = formulas.iter().map(|f| normalize_formula(f, NormalizeFlags::ALL)).collect();
    }
    let built = reductions::build(id, &formulas)?;
    write_output(a.out.as_deref(), &built.graph.to_dg(), out)?;
    if let Some(p) = &a.labels {
        write_output(Some(p), &(built.labels_json() + "\n"), out)?;
    }
    Ok(0)
}

fn verify(cli: &Cli, a: &VerifyArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let formulas = a.cnf.iter().map(|p| load_cnf(p, true)).collect::<Result<Vec<_>, _>>()?;
    let budget = budget(cli);
    let mut reports = Vec::with_capacity(a.claim.len());
    for &id in &a.claim {
        let inst = if id.takes_chain() {
            ClaimInstance::Chain(formulas.clone())
        } else if formulas.len() == 1 {
            ClaimInstance::Single(formulas[0].clone())
        } else {
            return Err(CliError::Usage(format!("{id} takes exactly one --cnf")));
        };
        reports.push(verify_claim(id, &inst, &budget)?);
    }
    if cli.plain {
        let mut text = String::new();
        for r in &reports {
            text.push_str(&format!("{} {} ({} ms)\n", r.claim, r.verdict, r.elapsed_ms));
            for c in &r.checks {
                text.push_str(&format!("  {} {}: {}\n", c.verdict, c.name, c.detail));
            }
            if let Some(cx) = &r.counterexample {
                text.push_str(&format!("  counterexample: {}\n", cx.description));
            }
        }
        write_output(None, &text, out)?;
    } else {
        print_json(&reports, out)?;
    }
    Ok(exit_code(&reports) as u8)
}

fn realize(a: &RealizeArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let text = match (&a.source.graph, &a.source.profile) {
        (Some(g), _) => mcgarvey_profile(&load_graph(g)?).to_json() + "\n",
        (_, Some(p)) => majority_graph(&PreferenceProfile::from_json(&read_input(p)?)?)?.to_dg(),
        _ => unreachable!("clap requires one source"),
    };
    write_output(a.out.as_deref(), &text, out)?;
    Ok(0)
}
