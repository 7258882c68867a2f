use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use oddtrail::apath::ApathBudget;
use oddtrail::driver::{self, SolveConfig};
use oddtrail::oracle::{self, OracleBudget};
use oddtrail::schema::GraphDoc;
use oddtrail::trail::{verify_trail, TrailCollection};
use oddtrail::{fixtures, minmax, untangle, EdgeSet, Error, Multigraph, Trail, VertexId};

const EXIT_USAGE: u8 = 64;
const EXIT_BUDGET: u8 = 65;
const EXIT_INVALID: u8 = 66;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(name = "oddtrail", version, about = "Pack or cover odd (u,v)-trails in multigraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a fixture or random graph as JSON.
    Generate(GenerateArgs),
    /// k disjoint odd trails or a small cover.
    Solve(SolveArgs),
    /// The optimal (s,s) min-max certificate.
    Minmax(MinmaxArgs),
    /// Exact brute-force values.
    Oracle(OracleArgs),
    /// Check a claimed packing or cover; exits 0 iff valid.
    Verify(VerifyArgs),
    /// Turn odd trails with ends in {u,v} into odd (u,v)-trails.
    Untangle(UntangleArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Graph document; stdin when absent.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Family {
    Fig2,
    Fig6,
    Hk,
    Fig8,
    Random,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Number of w-paths for hk/fig8.
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertices of a random graph.
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Edges of a random graph.
    #[arg(long, default_value_t = 10)]
    edges: usize,
    #[arg(long, default_value_t = 0.2)]
    parallel_prob: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_prob: f64,
    /// Write Graphviz instead of JSON.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct Budgets {
    /// Largest gadget (in nodes) the A-path search accepts.
    #[arg(long)]
    apath_budget: Option<usize>,
    /// Largest graph (in edges) the oracle accepts.
    #[arg(long)]
    oracle_budget: Option<usize>,
}

impl Budgets {
    fn oracle(&self) -> OracleBudget {
        self.oracle_budget.map(OracleBudget::edges).unwrap_or_default()
    }

    fn config(&self) -> SolveConfig {
        SolveConfig {
            apath: self.apath_budget.map(ApathBudget::nodes).unwrap_or_default(),
            oracle: self.oracle(),
            ..SolveConfig::default()
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    budgets: Budgets,
    #[arg(long)]
    k: usize,
    /// Solve for (s,s)-trails with s the document's `u` terminal.
    #[arg(long, conflicts_with = "cd")]
    ss: bool,
    /// Terminal sets, e.g. `--cd C=0,2 D=1`.
    #[arg(long, num_args = 2, value_names = ["C=..", "D=.."])]
    cd: Option<Vec<String>>,
    /// Untangling steps to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct MinmaxArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Defaults to the document's `u` terminal.
    #[arg(long)]
    s: Option<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Quantity {
    Nu,
    Tau,
    Exists,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(value_enum)]
    quantity: Quantity,
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    oracle_budget: Option<usize>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Claim {
    Trails,
    Cover,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    what: Claim,
    #[command(flatten)]
    input: InputArgs,
    /// A solve outcome, `{"trails": [..]}`/`{"cover": [..]}`, or a bare array.
    #[arg(long)]
    claim: PathBuf,
    /// Also require at least this many trails.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    oracle_budget: Option<usize>,
}

#[derive(Args)]
struct UntangleArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Odd trails with both ends in {u,v}.
    #[arg(long)]
    trails: PathBuf,
    #[arg(long)]
    trace: bool,
}

/// An error carrying its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<Error>() {
            Some(e) => library_code(e),
            None if error.downcast_ref::<serde_json::Error>().is_some() || error.downcast_ref::<io::Error>().is_some() => {
                EXIT_INVALID
            }
            None => EXIT_ERROR,
        };
        Failure { code, error }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: library_code(&e), error: e.into() }
    }
}

fn library_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::LoopWouldForm { .. }
        | Error::SameVertex(_)
        | Error::VertexOutOfRange { .. }
        | Error::UnknownEdge(_)
        | Error::InvalidGraph(_)
        | Error::MalformedTrail(_)
        | Error::InvalidTrail(_)
        | Error::InvalidCollection(_)
        | Error::InvalidCertificate(_)
        | Error::OverlappingTerminalSets
        | Error::BadParameter(_)
        | Error::EmptyTrail => EXIT_INVALID,
        _ => EXIT_ERROR,
    }
}

fn invalid(error: anyhow::Error) -> Failure {
    Failure { code: EXIT_INVALID, error }
}

type Outcome = Result<u8, Failure>;

fn read_text(path: Option<&Path>) -> anyhow::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading stdin")?;
            Ok(s)
        }
    }
}

fn read_graph(input: &InputArgs) -> Result<(GraphDoc, Multigraph), Failure> {
    let text = read_text(input.input.as_deref())?;
    let doc: GraphDoc = serde_json::from_str(&text).context("parsing graph document")?;
    let g = doc.to_graph()?;
    Ok((doc, g))
}

fn terminals(doc: &GraphDoc) -> Result<(VertexId, VertexId), Failure> {
    doc.terminals().ok_or_else(|| invalid(anyhow!("graph document has no terminals")))
}

fn emit<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn generate(a: &GenerateArgs) -> Outcome {
    let (g, ends, name) = match a.family {
        Family::Random => {
            let g = fixtures::random_multigraph(a.seed, a.n, a.edges, a.parallel_prob, a.sigma_prob)?;
            (g, (VertexId(0), VertexId(1)), format!("random-{}", a.seed))
        }
        family => {
            let f = match family {
                Family::Fig2 => fixtures::fig2(a.k),
                Family::Fig6 => fixtures::fig6(a.k),
                Family::Hk => fixtures::hk(a.k, a.m),
                Family::Fig8 => fixtures::fig8(a.k, a.m),
                Family::Random => unreachable!(),
            }?;
            (f.graph, (f.u, f.v), f.name)
        }
    };
    if a.dot {
        print!("{}", g.to_dot(&name.replace('-', "_")));
    } else {
        emit(&GraphDoc::from_graph(&g, Some(ends)))?;
    }
    Ok(0)
}

fn parse_set(arg: &str, label: &str) -> anyhow::Result<BTreeSet<VertexId>> {
    let Some(list) = arg.strip_prefix(label).and_then(|r| r.strip_prefix('=')) else {
        bail!("expected {label}=<v>,<v>,.. but got {arg:?}");
    };
    list.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<usize>().map(VertexId).with_context(|| format!("bad vertex {s:?} in {arg:?}")))
        .collect()
}

fn solve(a: &SolveArgs) -> Outcome {
    let (doc, g) = read_graph(&a.input)?;
    let cfg = a.budgets.config();
    let packed = if let Some(cd) = &a.cd {
        let c = parse_set(&cd[0], "C").map_err(invalid)?;
        let d = parse_set(&cd[1], "D").map_err(invalid)?;
        let out = driver::solve_cd(&g, &c, &d, a.k, &cfg)?;
        emit(&out)?;
        out.is_packing()
    } else {
        let (u, v) = terminals(&doc)?;
        let out = if a.ss { driver::solve_ss(&g, u, a.k, &cfg)? } else { driver::solve_uv(&g, u, v, a.k, &cfg)? };
        if a.trace {
            for step in &out.trace {
                eprintln!("{}", serde_json::to_string(step).map_err(anyhow::Error::from)?);
            }
        }
        emit(&out)?;
        out.is_packing()
    };
    Ok(if packed { 0 } else { 1 })
}

fn run_minmax(a: &MinmaxArgs) -> Outcome {
    let (doc, g) = read_graph(&a.input)?;
    let s = match a.s {
        Some(s) => VertexId(s),
        None => terminals(&doc)?.0,
    };
    emit(&minmax::minmax_rhs(&g, s)?)?;
    Ok(0)
}

fn run_oracle(a: &OracleArgs) -> Outcome {
    let (doc, g) = read_graph(&a.input)?;
    let (u, v) = terminals(&doc)?;
    let budget = a.oracle_budget.map(OracleBudget::edges).unwrap_or_default();
    let out = match a.quantity {
        Quantity::Nu => {
            let trails = oracle::nu_witness(&g, u, v, &budget)?;
            json!({ "nu": trails.len(), "trails": trails })
        }
        Quantity::Tau => {
            let (tau, cover) = oracle::tau_exact_with(&g, u, v, &budget)?;
            json!({ "tau": tau, "cover": cover })
        }
        Quantity::Exists => json!({ "exists": oracle::odd_trail_exists_with(&g, u, v, &budget)? }),
    };
    emit(&out)?;
    Ok(0)
}

/// Pulls `field` out of an object, or takes a bare array as is.
fn claim_field(text: &str, field: &str) -> anyhow::Result<Value> {
    let value: Value = serde_json::from_str(text).context("parsing claim")?;
    match value {
        Value::Array(_) => Ok(value),
        Value::Object(mut map) => map.remove(field).ok_or_else(|| anyhow!("claim has no {field:?} field")),
        _ => bail!("claim must be an object or an array"),
    }
}

fn read_trails(path: &Path) -> Result<Vec<Trail>, Failure> {
    let text = read_text(Some(path))?;
    let value = claim_field(&text, "trails").map_err(invalid)?;
    Ok(serde_json::from_value(value).context("parsing trails")?)
}

/// `Err(reason)` when the trails are not disjoint odd `(u,v)`-trails.
fn check_trails(g: &Multigraph, u: VertexId, v: VertexId, trails: &[Trail]) -> Result<(), String> {
    let mut used = EdgeSet::new();
    for (i, t) in trails.iter().enumerate() {
        let t = if t.start() == v && u != v { t.reverse() } else { t.clone() };
        verify_trail(g, &t, (u, v), true).map_err(|why| format!("trail {i}: {why}"))?;
        for &e in t.edges() {
            if !used.insert(e) {
                return Err(format!("edge {} is used twice", e.0));
            }
        }
    }
    Ok(())
}

fn verify(a: &VerifyArgs) -> Outcome {
    let (doc, g) = read_graph(&a.input)?;
    let (u, v) = terminals(&doc)?;
    let verdict = match a.what {
        Claim::Trails => {
            let trails = read_trails(&a.claim)?;
            check_trails(&g, u, v, &trails).and_then(|()| match a.k {
                Some(k) if trails.len() < k => Err(format!("{} trails, expected {k}", trails.len())),
                _ => Ok(()),
            })
        }
        Claim::Cover => {
            let text = read_text(Some(&a.claim))?;
            let value = claim_field(&text, "cover").map_err(invalid)?;
            let cover: EdgeSet = serde_json::from_value(value).context("parsing cover")?;
            let budget = a.oracle_budget.map(OracleBudget::edges).unwrap_or_default();
            let stray = cover.iter().find(|e| !g.contains_edge(*e));
            if let Some(e) = stray {
                Err(format!("edge {} is not in the graph", e.0))
            } else if a.k.is_some_and(|k| cover.len() > (2 * k).saturating_sub(1)) {
                Err(format!("{} edges exceed 2k - 1", cover.len()))
            } else if oracle::is_cover(&g, u, v, &cover, &budget)? {
                Ok(())
            } else {
                Err("an odd trail avoids the cover".into())
            }
        }
    };
    match verdict {
        Ok(()) => {
            emit(&json!({ "valid": true }))?;
            Ok(0)
        }
        Err(reason) => {
            emit(&json!({ "valid": false, "reason": reason }))?;
            Ok(EXIT_INVALID)
        }
    }
}

fn run_untangle(a: &UntangleArgs) -> Outcome {
    let (doc, g) = read_graph(&a.input)?;
    let (u, v) = terminals(&doc)?;
    let trails = read_trails(&a.trails)?;
    let coll = TrailCollection::new(&g, u, v, trails)?;
    let out = untangle::untangle(&g, coll)?;
    if a.trace {
        for step in &out.steps {
            eprintln!("{}", serde_json::to_string(step).map_err(anyhow::Error::from)?);
        }
    }
    emit(&json!({ "trails": out.trails, "iterations": out.steps.len(), "bound": out.bound }))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Minmax(a) => run_minmax(a),
        Command::Oracle(a) => run_oracle(a),
        Command::Verify(a) => verify(a),
        Command::Untangle(a) => run_untangle(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
