//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests with in-memory streams.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::fast_tester::{find_violation_quadruple, test_mconvexity, Policy};
use crate::generators::{
    build_f_graph, gen_linear_typed, gen_perturbed_linear, gen_tree_metric_type1, GenError,
    SimpleGraph,
};
use crate::instance::{parse_instance, serialize_instance, InstanceError, QuadraticInstance};
use crate::oracle::{Oracle, OracleError, DEFAULT_DOMAIN_BUDGET};
use crate::structure::{check_condition_a_under_b, classify, Structure};
use crate::value::{Tolerance, DEFAULT_EPSILON};
use crate::verdict::{Status, Verdict};

pub const EXIT_IO: i32 = 4;
pub const EXIT_DISAGREE: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "qmconvex",
    version,
    about = "M-convexity tester for quadratic set functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide M-convexity and print the verdict.
    Test(TestArgs),
    /// Print the infinity-graph structure and the type.
    Classify(InputArgs),
    /// `test` with a violated quadruple attached to negative verdicts.
    Explain(TestArgs),
    /// Decide by brute force over the cardinality slice.
    Oracle(OracleArgs),
    /// Run the fast path and the exchange oracle and compare.
    Crosscheck(TestArgs),
    /// Write a generated instance.
    Gen(GenArgs),
    /// Time the tester on generated Type I instances.
    Bench(BenchArgs),
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        Ok(_) => Err("must be a positive finite number".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    match s.parse::<u64>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Instance JSON; stdin when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, env = "MCONVEX_EPSILON", default_value_t = DEFAULT_EPSILON, value_parser = positive_f64)]
    pub epsilon: f64,
    /// Indented JSON.
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Treat a Condition B failure as conclusive.
    #[arg(long)]
    pub assume_condition_a: bool,
    #[arg(long)]
    pub explain: bool,
    /// Largest C(n, r) that brute force may enumerate.
    #[arg(long, default_value_t = DEFAULT_DOMAIN_BUDGET, value_parser = positive_u64)]
    pub budget: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleMethod {
    Exchange,
    Local,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub test: TestArgs,
    #[arg(long, value_enum, default_value_t = OracleMethod::Exchange)]
    pub method: OracleMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Tree,
    Linear2,
    Linear3,
    Fgraph,
    Perturbed,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub r: usize,
    /// Comma-separated block sizes for the linear kinds.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge-list file for `fgraph`; stdin when absent.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [100, 200, 400, 800, 1600, 3200])]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 3, value_parser = positive_u64)]
    pub repeats: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub pretty: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Instance(#[from] InstanceError),
    #[error("{0}")]
    Gen(#[from] GenError),
    #[error("{0}")]
    Oracle(#[from] OracleError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Instance(_) | CliError::Oracle(OracleError::EmptyDomain) => {
                Status::InvalidInstance.exit_code()
            }
            CliError::Oracle(_) => Status::Undecided.exit_code(),
            CliError::Io(_) | CliError::Gen(_) | CliError::Usage(_) => EXIT_IO,
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_text(&mut self, path: Option<&PathBuf>) -> Result<String, CliError> {
        match path {
            Some(p) => Ok(fs::read_to_string(p)?),
            None => {
                let mut s = String::new();
                self.stdin.read_to_string(&mut s)?;
                Ok(s)
            }
        }
    }

    fn emit(&mut self, value: &impl Serialize, pretty: bool) -> Result<(), CliError> {
        let text = if pretty {
            serde_json::to_string_pretty(value)
        } else {
            serde_json::to_string(value)
        }
        .expect("report types serialize");
        writeln!(self.stdout, "{text}")?;
        Ok(())
    }
}

/// Parses `args` (program name first) and runs the subcommand. Returns the
/// process exit code.
pub fn run<I, T>(
    args: I,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut io = Io {
        stdin,
        stdout,
        stderr,
    };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let code = e.exit_code();
            if code == Status::InvalidInstance.exit_code() {
                let report =
                    json!({ "status": Status::InvalidInstance.as_str(), "error": e.to_string() });
                let _ = io.emit(&report, false);
            }
            let _ = writeln!(io.stderr, "error: {e}");
            code
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> Result<i32, CliError> {
    match command {
        Command::Test(a) => cmd_test(&a, a.explain, io),
        Command::Explain(a) => cmd_test(&a, true, io),
        Command::Classify(a) => cmd_classify(&a, io),
        Command::Oracle(a) => cmd_oracle(&a, io),
        Command::Crosscheck(a) => cmd_crosscheck(&a, io),
        Command::Gen(a) => cmd_gen(&a, io),
        Command::Bench(a) => cmd_bench(&a, io),
    }
}

fn load(args: &InputArgs, io: &mut Io<'_>) -> Result<QuadraticInstance, CliError> {
    let text = io.read_text(args.input.as_ref())?;
    Ok(parse_instance(&text)?)
}

fn policy(args: &TestArgs, explain: bool) -> Policy {
    Policy {
        assume_condition_a: args.assume_condition_a,
        brute_force_budget: args.budget,
        explain,
        tol: Tolerance::new(args.input.epsilon),
    }
}

fn cmd_test(args: &TestArgs, explain: bool, io: &mut Io<'_>) -> Result<i32, CliError> {
    let inst = load(&args.input, io)?;
    let mut verdict = test_mconvexity(&inst, &policy(args, explain));
    if explain && verdict.status == Status::NotMConvex && verdict.witness.is_none() {
        let s = Structure::of(&inst);
        if let Some(t) = s.type_class(inst.r()) {
            let w = find_violation_quadruple(
                &inst,
                &s.decomposition,
                t,
                Tolerance::new(args.input.epsilon),
            );
            verdict = verdict.with_witness(w);
        }
    }
    io.emit(&verdict.report(args.input.epsilon), args.input.pretty)?;
    Ok(verdict.status.exit_code())
}

fn cmd_classify(args: &InputArgs, io: &mut Io<'_>) -> Result<i32, CliError> {
    let inst = load(args, io)?;
    let s = Structure::of(&inst);
    let b = s.condition_b.is_ok();
    let one_based = |v: &[usize]| v.iter().map(|x| x + 1).collect::<Vec<_>>();
    let report = json!({
        "condition_b": b,
        "condition_a": b.then(|| check_condition_a_under_b(&s.decomposition, inst.r())),
        "type": b.then(|| classify(&s.decomposition, inst.r()).label()),
        "components": s.decomposition.big().iter().map(|c| one_based(c)).collect::<Vec<_>>(),
        "isolated": one_based(s.decomposition.isolated()),
    });
    io.emit(&report, args.pretty)?;
    Ok(0)
}

fn run_oracle(
    inst: &QuadraticInstance,
    args: &TestArgs,
    method: OracleMethod,
) -> Result<Verdict, OracleError> {
    let oracle = Oracle::new(Tolerance::new(args.input.epsilon)).with_domain_budget(args.budget);
    match method {
        OracleMethod::Exchange => oracle.exchange_axiom_holds(inst),
        OracleMethod::Local => oracle.local_exchange_holds(inst),
    }
}

fn cmd_oracle(args: &OracleArgs, io: &mut Io<'_>) -> Result<i32, CliError> {
    let inst = load(&args.test.input, io)?;
    let verdict = run_oracle(&inst, &args.test, args.method)?;
    io.emit(
        &verdict.report(args.test.input.epsilon),
        args.test.input.pretty,
    )?;
    Ok(verdict.status.exit_code())
}

fn cmd_crosscheck(args: &TestArgs, io: &mut Io<'_>) -> Result<i32, CliError> {
    let inst = load(&args.input, io)?;
    let eps = args.input.epsilon;
    let fast = test_mconvexity(&inst, &policy(args, args.explain));
    let oracle = run_oracle(&inst, args, OracleMethod::Exchange);
    let (oracle_json, agree) = match &oracle {
        Ok(v) => (
            serde_json::to_value(v.report(eps)).expect("serializable"),
            Some(v.status == fast.status),
        ),
        Err(e) => (json!({ "error": e.to_string() }), None),
    };
    let report = json!({
        "fast": fast.report(eps),
        "oracle": oracle_json,
        "agree": agree,
    });
    io.emit(&report, args.input.pretty)?;
    Ok(match agree {
        Some(true) => 0,
        Some(false) => EXIT_DISAGREE,
        None => Status::Undecided.exit_code(),
    })
}

/// Near-equal split of `n` into `blocks` positive parts, largest first.
fn even_sizes(n: usize, blocks: usize) -> Vec<usize> {
    (0..blocks)
        .map(|b| n / blocks + usize::from(b < n % blocks))
        .collect()
}

fn cmd_gen(args: &GenArgs, io: &mut Io<'_>) -> Result<i32, CliError> {
    let need_n = || {
        args.n
            .ok_or_else(|| CliError::Usage(format!("--n is required for {:?}", args.kind)))
    };
    let sizes = |blocks: usize| -> Result<Vec<usize>, CliError> {
        match &args.sizes {
            Some(s) => Ok(s.clone()),
            None => {
                let n = need_n()?;
                if n <= blocks {
                    return Err(CliError::Usage(format!(
                        "n = {n} leaves no room for a block of size 2 among {blocks} blocks"
                    )));
                }
                Ok(even_sizes(n, blocks))
            }
        }
    };
    let inst = match args.kind {
        GenKind::Tree => gen_tree_metric_type1(need_n()?, args.r, args.seed)?,
        GenKind::Linear2 => gen_linear_typed(&sizes(args.r + 1)?, args.r, args.seed)?,
        GenKind::Linear3 => gen_linear_typed(&sizes(args.r)?, args.r, args.seed)?,
        GenKind::Perturbed => gen_perturbed_linear(&sizes(args.r + 1)?, args.r, args.seed)?,
        GenKind::Fgraph => {
            let text = io.read_text(args.graph.as_ref())?;
            build_f_graph(&SimpleGraph::parse_edge_list(&text)?, args.r)?
        }
    };
    let text = serialize_instance(&inst);
    match &args.out {
        Some(p) => fs::write(p, text + "\n")?,
        None => writeln!(io.stdout, "{text}")?,
    }
    Ok(0)
}

#[derive(Debug, Serialize)]
struct BenchRow {
    n: usize,
    r: usize,
    status: Status,
    median_ms: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

/// Least-squares slope of `ln t` against `ln n`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().map(|&(n, t)| (n.ln(), t.ln())).unzip();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn cmd_bench(args: &BenchArgs, io: &mut Io<'_>) -> Result<i32, CliError> {
    let mut rows = Vec::with_capacity(args.sizes.len());
    for &n in &args.sizes {
        let r = n / 2;
        let inst = gen_tree_metric_type1(n, r, args.seed ^ n as u64)?;
        let mut times = Vec::with_capacity(args.repeats as usize);
        let mut status = Status::Undecided;
        for _ in 0..args.repeats {
            let start = Instant::now();
            status = test_mconvexity(&inst, &Policy::default()).status;
            times.push(start.elapsed().as_secs_f64() * 1e3);
        }
        rows.push(BenchRow {
            n,
            r,
            status,
            median_ms: median(times),
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|row| (row.n as f64, row.median_ms.max(1e-6)))
        .collect();
    let slope = (points.len() >= 2).then(|| log_log_slope(&points));
    let report: Value = json!({ "results": rows, "log_log_slope": slope });
    io.emit(&report, args.pretty)?;
    Ok(0)
}
