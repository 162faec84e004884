//! Command-line front end for the `eqw` binary.
//!
//! [`execute`] runs a parsed command and returns its rendered output and exit
//! code, so the binary and the tests share one code path.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eqw::census::{
    self, asymptotics_table, dj_formula_report, enumerate_dj, enumerate_grover,
    grover_formula_report, simon_report, CensusReport, EnumOptions,
};
use eqw::function::{bv_function, parse_bit_string, BooleanFunction, LinearForm};
use eqw::oracle::{
    grover_function, make_simon_instance, prepare_dj_state, simon_canonical_state, simon_measure,
    SimonInstance, SimonInstanceJson,
};
use eqw::render;
use eqw::separability::{classify_with_cap, SeparabilityReport, DEFAULT_QUBIT_CAP};
use eqw::verify::{self, Suite, VerifyOptions};
use eqw::{Error, StateVector};

/// Environment variable that raises the qubit caps.
pub const MAX_N_VAR: &str = "EQW_MAX_N";

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const CAP: i32 = 3;
}

#[derive(Parser, Debug)]
#[command(
    name = "eqw",
    version,
    about = "Exact entanglement analysis of oracle-algorithm states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classify the separability of a phase state.
    Classify(ClassifyArgs),
    /// Run a state-preparation pipeline and classify its output.
    Simulate(SimulateArgs),
    /// Closed-form counts, optionally reconciled against enumeration.
    Census(CensusArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
    /// Log2 fractions of the separable classes as n grows.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Dj,
    Grover,
    Simon,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("input").required(true).multiple(false))]
pub struct ClassifyArgs {
    #[arg(long)]
    pub n: usize,
    /// Truth table as 2^n bits (x = 0 first) or hex `0x...`.
    #[arg(long, group = "input")]
    pub truth_table: Option<String>,
    /// Simon period; classifies `|0> + |r>`.
    #[arg(long, group = "input")]
    pub simon_r: Option<String>,
    /// Bernstein-Vazirani string; classifies the state of `f(x) = a.x`.
    #[arg(long, group = "input")]
    pub bv_a: Option<String>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub n: usize,
    /// DJ oracle function.
    #[arg(long)]
    pub truth_table: Option<String>,
    /// Grover: number of marked inputs, placed by the seed.
    #[arg(long, conflicts_with = "solutions")]
    pub m: Option<u64>,
    /// Grover: comma-separated marked inputs as bit strings.
    #[arg(long, value_delimiter = ',')]
    pub solutions: Option<Vec<String>>,
    /// Simon period as a bit string.
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Simon: load the instance from a JSON file instead of generating it.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Simon: write the instance used to a JSON file.
    #[arg(long)]
    pub dump_instance: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(value_enum)]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub n: usize,
    /// Grover: number of marked inputs.
    #[arg(long)]
    pub m: Option<u64>,
    /// Add enumeration oracle counts and relations.
    #[arg(long)]
    pub exhaustive: bool,
    /// DJ: enumerate balanced truth tables only.
    #[arg(long)]
    pub balanced_only: bool,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_parser = ["dj", "grover", "simon", "lemma", "wht", "all"])]
    pub suite: String,
    /// A size `N` or an inclusive range `A..B`.
    #[arg(long, value_parser = parse_range)]
    pub n: (usize, usize),
    #[arg(long)]
    pub workers: Option<usize>,
    /// Random samples per size where exhaustive checks are too large.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = VerifyOptions::default().seed)]
    pub seed: u64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct AsymptoticsArgs {
    #[arg(long)]
    pub max_n: usize,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a == 0 || a > b {
                return Err(format!("empty or invalid range {s:?}"));
            }
            Ok((a, b))
        }
        None => num(s).map(|n| (n, n)),
    }
}

/// Result of running one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: exit::OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(code: i32, msg: impl Into<String>) -> Self {
        Self {
            code,
            stdout: String::new(),
            stderr: format!("eqw: {}\n", msg.into()),
        }
    }
}

/// Failure mapped to its exit code.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Structural(_) | Error::Domain(_) => exit::INPUT,
            Error::ResourceLimit { .. } => exit::CAP,
            Error::InvariantViolation(_) => exit::FAILURE,
        };
        Failure(code, e.to_string())
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure(exit::INPUT, msg.into())
}

type Res<T> = Result<T, Failure>;

/// Caps in effect for this run, raised by `EQW_MAX_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub raise_to: Option<usize>,
}

impl Caps {
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(MAX_N_VAR) {
            Err(_) => Ok(Self { raise_to: None }),
            Ok(v) => v
                .trim()
                .parse::<usize>()
                .map(|n| Self { raise_to: Some(n) })
                .map_err(|_| format!("{MAX_N_VAR} must be a positive integer, got {v:?}")),
        }
    }

    fn lift(&self, default: usize) -> usize {
        self.raise_to.map_or(default, |n| n.max(default))
    }

    fn qubits(&self) -> usize {
        self.lift(DEFAULT_QUBIT_CAP)
    }

    fn census(&self, workers: Option<usize>) -> EnumOptions {
        let d = EnumOptions::default();
        EnumOptions {
            workers,
            max_full_n: self.lift(d.max_full_n),
            max_balanced_n: self.lift(d.max_balanced_n),
            max_simon_n: self.lift(d.max_simon_n),
            ..d
        }
    }
}

fn check_qubits(n: usize, caps: &Caps) -> Res<()> {
    let cap = caps.qubits();
    if n > cap {
        return Err(Failure(
            exit::CAP,
            format!("n = {n} exceeds the classification cap {cap} (raise with {MAX_N_VAR})"),
        ));
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn classify(s: &StateVector, caps: &Caps) -> Res<SeparabilityReport> {
    Ok(classify_with_cap(s, caps.qubits())?)
}

fn render_report(r: &SeparabilityReport, format: Format) -> String {
    match format {
        Format::Json => pretty(&render::report_json(r)),
        Format::Csv => render::report_csv(r),
        Format::Table => render::report_table(r),
    }
}

fn run_classify(a: &ClassifyArgs, caps: &Caps) -> Res<String> {
    check_qubits(a.n, caps)?;
    let state = if let Some(t) = &a.truth_table {
        BooleanFunction::parse(a.n, t)?.to_state()
    } else if let Some(r) = &a.simon_r {
        simon_canonical_state(a.n, parse_bit_string(r, a.n)?)?
    } else if let Some(bits) = &a.bv_a {
        bv_function(&LinearForm::parse(a.n, bits)?)?.to_state()
    } else {
        return Err(input("one of --truth-table, --simon-r, --bv-a is required"));
    };
    Ok(render_report(&classify(&state, caps)?, a.format))
}

fn render_simulation(
    mut doc: Value,
    state: &StateVector,
    report: &SeparabilityReport,
    format: Format,
) -> String {
    match format {
        Format::Json => {
            doc["state"] = render::state_json(state);
            doc["report"] = render::report_json(report);
            pretty(&doc)
        }
        Format::Csv => render::state_csv(state),
        Format::Table => {
            let mut out = String::new();
            if let Value::Object(fields) = &doc {
                for (k, v) in fields {
                    let v = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    out.push_str(&format!("{k}: {v}\n"));
                }
            }
            out.push_str(&format!("state: {}\n", render::state_kets(state)));
            out.push_str(&render::report_table(report));
            out
        }
    }
}

fn run_simulate(a: &SimulateArgs, caps: &Caps) -> Res<String> {
    check_qubits(a.n, caps)?;
    let n = a.n;
    match a.algorithm {
        Algorithm::Dj => {
            let t = a
                .truth_table
                .as_deref()
                .ok_or_else(|| input("simulate dj needs --truth-table"))?;
            let f = BooleanFunction::parse(n, t)?;
            let state = prepare_dj_state(&f)?;
            let report = classify(&state, caps)?;
            let doc = json!({ "algorithm": "dj", "n": n, "truth_table": f.to_bit_string() });
            Ok(render_simulation(doc, &state, &report, a.format))
        }
        Algorithm::Grover => {
            let f = match (&a.solutions, a.m) {
                (Some(list), _) => {
                    let sols = list
                        .iter()
                        .map(|s| parse_bit_string(s.trim(), n))
                        .collect::<eqw::Result<Vec<_>>>()?;
                    BooleanFunction::from_solutions(n, &sols)?
                }
                (None, Some(m)) => grover_function(n, m, a.seed)?,
                (None, None) => return Err(input("simulate grover needs --m or --solutions")),
            };
            let state = prepare_dj_state(&f)?;
            let report = classify(&state, caps)?;
            let marked: Vec<String> = (0..1u64 << n)
                .filter(|&x| f.eval(x as usize))
                .map(|x| eqw::function::format_bit_string(x, n))
                .collect();
            let doc = json!({ "algorithm": "grover", "n": n, "m": marked.len(), "seed": a.seed.to_string(), "solutions": marked });
            Ok(render_simulation(doc, &state, &report, a.format))
        }
        Algorithm::Simon => {
            let inst = match &a.instance {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
                    let json: SimonInstanceJson = serde_json::from_str(&text)
                        .map_err(|e| input(format!("invalid instance {}: {e}", path.display())))?;
                    let inst = SimonInstance::from_json(&json)?;
                    if inst.n() != n {
                        return Err(input(format!(
                            "instance has n = {}, expected {n}",
                            inst.n()
                        )));
                    }
                    if let Some(r) = &a.r {
                        if parse_bit_string(r, n)? != inst.r() {
                            return Err(input("--r disagrees with the instance period"));
                        }
                    }
                    inst
                }
                None => {
                    let r =
                        a.r.as_deref()
                            .ok_or_else(|| input("simulate simon needs --r or --instance"))?;
                    make_simon_instance(n, parse_bit_string(r, n)?, a.seed)?
                }
            };
            if let Some(path) = &a.dump_instance {
                let text =
                    pretty(&serde_json::to_value(inst.to_json()).expect("instances serialize"));
                fs::write(path, text)
                    .map_err(|e| input(format!("cannot write {}: {e}", path.display())))?;
            }
            let outcome = simon_measure(&inst, a.seed)?;
            let report = classify(&outcome.collapsed, caps)?;
            let fmt = |v: u64| eqw::function::format_bit_string(v, n);
            let doc = json!({
                "algorithm": "simon",
                "n": n,
                "r": fmt(inst.r()),
                "seed": a.seed.to_string(),
                "observed": fmt(outcome.observed),
                "xbar": fmt(outcome.xbar),
            });
            Ok(render_simulation(
                doc,
                &outcome.collapsed,
                &report,
                a.format,
            ))
        }
    }
}

fn render_census(r: &CensusReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = r.to_json_string();
            s.push('\n');
            s
        }
        Format::Csv => r.to_csv_string(),
        Format::Table => r.to_table_string(),
    }
}

fn run_census(a: &CensusArgs, caps: &Caps) -> Res<String> {
    if a.workers == Some(0) {
        return Err(input("--workers must be at least 1"));
    }
    let mut opts = caps.census(a.workers);
    opts.balanced_only = a.balanced_only;
    let report = match a.algorithm {
        Algorithm::Dj => {
            if a.m.is_some() {
                return Err(input("--m only applies to grover"));
            }
            if a.exhaustive {
                enumerate_dj(a.n, &opts)?
            } else {
                dj_formula_report(a.n)?
            }
        }
        Algorithm::Grover => {
            let m = a.m.ok_or_else(|| input("census grover needs --m"))?;
            if a.exhaustive {
                enumerate_grover(a.n, m, &opts)?
            } else {
                grover_formula_report(a.n, m)?
            }
        }
        Algorithm::Simon => {
            if a.m.is_some() {
                return Err(input("--m only applies to grover"));
            }
            simon_report(a.n, a.exhaustive.then_some(&opts))?
        }
    };
    Ok(render_census(&report, a.format))
}

fn run_verify(a: &VerifyArgs, caps: &Caps) -> Res<(String, bool)> {
    if a.workers == Some(0) {
        return Err(input("--workers must be at least 1"));
    }
    let suite: Suite = a.suite.parse()?;
    let opts = VerifyOptions {
        census: caps.census(a.workers),
        random_samples: a.samples,
        seed: a.seed,
    };
    let report = verify::run(suite, a.n.0, a.n.1, &opts)?;
    let text = match a.format {
        None | Some(Format::Table) => report.to_text(),
        Some(Format::Csv) => report.to_csv_string(),
        Some(Format::Json) => {
            let mut v = serde_json::to_value(&report).expect("reports serialize");
            v["passed"] = Value::Bool(report.passed());
            pretty(&v)
        }
    };
    Ok((text, report.passed()))
}

fn run_asymptotics(a: &AsymptoticsArgs) -> Res<String> {
    if a.max_n > census::MAX_FORMULA_N {
        return Err(Failure(
            exit::CAP,
            format!(
                "max n = {} exceeds the exact-evaluation cap {}",
                a.max_n,
                census::MAX_FORMULA_N
            ),
        ));
    }
    let rows = asymptotics_table(a.max_n)?;
    Ok(match a.format {
        Format::Json => pretty(&render::asymptotics_json(&rows)),
        Format::Csv => render::asymptotics_csv(&rows),
        Format::Table => render::asymptotics_table(&rows),
    })
}

/// Run a parsed command with the given caps.
pub fn execute(cli: &Cli, caps: &Caps) -> Outcome {
    let result = match &cli.command {
        Command::Classify(a) => run_classify(a, caps),
        Command::Simulate(a) => run_simulate(a, caps),
        Command::Census(a) => run_census(a, caps),
        Command::Asymptotics(a) => run_asymptotics(a),
        Command::Verify(a) => match run_verify(a, caps) {
            Ok((text, true)) => Ok(text),
            Ok((text, false)) => {
                return Outcome {
                    code: exit::FAILURE,
                    stdout: text,
                    stderr: "eqw: verification failed\n".into(),
                }
            }
            Err(e) => Err(e),
        },
    };
    match result {
        Ok(stdout) => Outcome::ok(stdout),
        Err(Failure(code, msg)) => Outcome::error(code, msg),
    }
}

/// Parse `args` (program name first) and run it.
pub fn run_args<I, T>(args: I, caps: &Caps) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli, caps),
        Err(e) => {
            let code = if e.use_stderr() {
                exit::INPUT
            } else {
                exit::OK
            };
            let text = e.render().to_string();
            if code == exit::OK {
                Outcome::ok(text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            }
        }
    }
}
