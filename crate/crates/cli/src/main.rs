use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;
use thiserror::Error;

use epsclt::checks::{verify_model, VerifyOptions, DEFAULT_SEED};
use epsclt::combinatorics::{Exponent, WordSpec};
use epsclt::finite_n::{convergence_table, FullMoment, Strategy, DEFAULT_BUDGET};
use epsclt::graphon::{rho_graph, rho_graphon};
use epsclt::graphs::h_graph;
use epsclt::io::{parse_graph, parse_graphon, parse_json, parse_model, scalar_to_json, ModelFile};
use epsclt::limit_laws::{classify_sj, lex_limit_moment, s_limit_moment, Normalization};
use epsclt::subset::Subset;
use epsclt::{Error, Rational, Scalar};

mod output;

use output::{render, Format, Table};

const BUNDLED_TENSOR_MODEL: &str = include_str!("../../../models/tensor_l2.json");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Input { path: String, message: String },
    #[error(transparent)]
    Engine(#[from] Error),
    #[error("{0} verification check(s) failed")]
    Verify(usize),
    #[error("cannot write output: {0}")]
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Engine(Error::Budget { .. }) => 2,
            CliError::Verify(_) => 3,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    Auto,
    Brute,
    Classes,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Brute => Strategy::BruteForce,
            StrategyArg::Classes => Strategy::Classes,
        }
    }
}

/// Exact moments of graph-independent central limit laws and of their
/// finite-n approximations.
///
/// Inputs are JSON files; any argument starting with `{` is read as inline
/// JSON instead.
#[derive(Debug, Parser)]
#[command(name = "epsclt", version)]
struct Cli {
    /// Rational arithmetic or f64.
    #[arg(long, value_enum, default_value_t = Mode::Exact, global = true)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Cap on brute-force work, in elementary terms.
    #[arg(long, env = "EPSCLT_BUDGET", default_value_t = DEFAULT_BUDGET, global = true)]
    budget: u128,
    /// Seed of the randomized verification suites.
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Limit moments of S and of each s_J, plus the words listed in the model.
    LimitMoments {
        #[arg(long)]
        model: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p_max: Option<u64>,
    },
    /// Moments of S_n, raw and unit-variance.
    FiniteMoments {
        #[arg(long)]
        model: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p_max: Option<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
    /// Unit-variance moments of S_n against their limits, even orders.
    Converge {
        #[arg(long)]
        model: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        p_max: Option<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
    },
    /// Cross-check suites; always exact. Defaults to the bundled two-layer
    /// tensor model.
    Verify {
        #[arg(long)]
        model: Option<String>,
        /// Random instances per seeded suite.
        #[arg(long, default_value_t = 50)]
        instances: usize,
        /// Longest word in the exhaustive word suites.
        #[arg(long, default_value_t = 4)]
        word_p_max: usize,
    },
    /// Homomorphism density of a graph f in a graphon w or a graph g.
    Rho {
        #[arg(long)]
        f: String,
        #[arg(long, required_unless_present = "g", conflicts_with = "g")]
        w: Option<String>,
        #[arg(long)]
        g: Option<String>,
    },
    /// The graph h_L on nonempty subsets of the layers, with the type of each s_J.
    HlGraph {
        #[arg(long = "g-l")]
        g_l: String,
    },
}

fn read_json(arg: &str) -> Result<Value, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Input {
            path: arg.to_string(),
            message: e.to_string(),
        })?
    };
    Ok(parse_json(&text)?)
}

fn load_model<T: Scalar>(arg: &str, p_max: Option<u64>) -> Result<ModelFile<T>, CliError> {
    Ok(parse_model(&read_json(arg)?, p_max.map(|p| p as usize))?)
}

fn num<T: Scalar>(x: &T) -> Value {
    scalar_to_json(x)
}

fn ones(p: usize) -> Vec<Exponent> {
    vec![Exponent::One; p]
}

fn limit_moments<T: Scalar>(m: &ModelFile<T>) -> Result<Vec<Table>, CliError> {
    let subsets = Subset::nonempty(m.model.layers());
    let mut headers = vec!["p".to_string(), "S".into(), "S_unit".into()];
    headers.extend(subsets.iter().map(|j| format!("s_{j}")));
    let mut table = Table {
        name: "moments",
        headers,
        rows: Vec::new(),
    };
    for p in 1..=m.p_max {
        let mut row = vec![Value::from(p)];
        row.push(num(&s_limit_moment(
            &m.model,
            &ones(p),
            Normalization::Raw,
        )?));
        row.push(num(&s_limit_moment(
            &m.model,
            &ones(p),
            Normalization::UnitVariance,
        )?));
        for &j in &subsets {
            let spec = WordSpec::uniform(j, ones(p))?;
            row.push(num(&lex_limit_moment(
                m.model.layer_graph(),
                m.model.graphon(),
                &spec,
            )?));
        }
        table.push(row);
    }
    let mut tables = vec![table];
    if !m.words.is_empty() {
        let mut words = Table::new("words", &["word", "value"]);
        for spec in &m.words {
            let v = lex_limit_moment(m.model.layer_graph(), m.model.graphon(), spec)?;
            words.push(vec![Value::from(spec.to_string()), num(&v)]);
        }
        tables.push(words);
    }
    Ok(tables)
}

/// Irrational cells are reported as text rather than failing the table.
fn value_or_irrational<T: Scalar>(r: epsclt::Result<T>) -> Result<Value, CliError> {
    match r {
        Ok(v) => Ok(num(&v)),
        Err(Error::Irrational(_)) => Ok(Value::from("irrational")),
        Err(e) => Err(e.into()),
    }
}

fn finite_moments<T: Scalar>(
    m: &ModelFile<T>,
    ns: &[usize],
    strategy: Strategy,
    budget: u128,
) -> Result<Vec<Table>, CliError> {
    let mut table = Table::new("finite_moments", &["p", "n", "raw", "unit"]);
    for p in 1..=m.p_max {
        let prepared = FullMoment::new(&m.family, &m.law, &ones(p), strategy, budget)?;
        for &n in ns {
            table.push(vec![
                Value::from(p),
                Value::from(n),
                value_or_irrational(prepared.eval(n, Normalization::Raw))?,
                value_or_irrational(prepared.eval(n, Normalization::UnitVariance))?,
            ]);
        }
    }
    Ok(vec![table])
}

fn converge<T: Scalar>(
    m: &ModelFile<T>,
    ns: &[usize],
    strategy: Strategy,
    budget: u128,
) -> Result<Vec<Table>, CliError> {
    let mut table = Table::new("convergence", &["p", "n", "finite", "limit", "abs_diff"]);
    for row in convergence_table(&m.family, &m.law, m.p_max, ns, strategy, budget)? {
        table.push(vec![
            Value::from(row.p),
            Value::from(row.n),
            num(&row.finite),
            num(&row.limit),
            num(&row.abs_diff),
        ]);
    }
    Ok(vec![table])
}

fn rho<T: Scalar>(f: &str, w: Option<&str>, g: Option<&str>) -> Result<Vec<Table>, CliError> {
    let f = parse_graph(&read_json(f)?, "$f")?;
    let value: T = match (w, g) {
        (Some(w), _) => rho_graphon(&f, &parse_graphon::<T>(&read_json(w)?, "$w")?),
        (None, Some(g)) => rho_graph(&f, &parse_graph(&read_json(g)?, "$g")?)?,
        (None, None) => unreachable!("clap requires --w or --g"),
    };
    let mut table = Table::new("rho", &["rho"]);
    table.push(vec![num(&value)]);
    Ok(vec![table])
}

fn hl_graph(arg: &str) -> Result<Vec<Table>, CliError> {
    let gl = parse_graph(&read_json(arg)?, "$")?;
    let h = h_graph(&gl)?;
    let mut vertices = Table::new("vertices", &["vertex", "subset", "kind"]);
    for (idx, &j) in h.subsets.iter().enumerate() {
        vertices.push(vec![
            Value::from(idx + 1),
            Value::from(j.to_string()),
            Value::from(classify_sj(&gl, j)?.to_string()),
        ]);
    }
    let mut edges = Table::new("edges", &["u", "v"]);
    for (u, v) in h.graph.edges() {
        edges.push(vec![Value::from(u + 1), Value::from(v + 1)]);
    }
    Ok(vec![vertices, edges])
}

fn verify(
    cli: &Cli,
    model: Option<&str>,
    instances: usize,
    word_p_max: usize,
) -> Result<Vec<Table>, CliError> {
    let value = match model {
        Some(arg) => read_json(arg)?,
        None => parse_json(BUNDLED_TENSOR_MODEL)?,
    };
    let m: ModelFile<Rational> = parse_model(&value, None)?;
    let opts = VerifyOptions {
        seed: cli.seed,
        random_instances: instances,
        word_p_max,
        moment_p_max: m.p_max,
    };
    let reports = verify_model(&m.model, opts)?;
    let mut table = Table::new("checks", &["check", "status", "cases", "failed", "detail"]);
    for r in &reports {
        let status = if r.skipped {
            "SKIP"
        } else if r.passed() {
            "PASS"
        } else {
            "FAIL"
        };
        eprintln!("{status} {}", r.name);
        table.push(vec![
            Value::from(r.name.clone()),
            Value::from(status),
            Value::from(r.cases),
            Value::from(r.failure_count),
            Value::from(r.failures.join("; ")),
        ]);
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    print!("{}", render(&[table], cli.format)?);
    if failed > 0 {
        return Err(CliError::Verify(failed));
    }
    Ok(Vec::new())
}

fn dispatch<T: Scalar>(cli: &Cli) -> Result<Vec<Table>, CliError> {
    match &cli.command {
        Command::LimitMoments { model, p_max } => limit_moments(&load_model::<T>(model, *p_max)?),
        Command::FiniteMoments {
            model,
            p_max,
            ns,
            strategy,
        } => finite_moments(
            &load_model::<T>(model, *p_max)?,
            ns,
            (*strategy).into(),
            cli.budget,
        ),
        Command::Converge {
            model,
            p_max,
            ns,
            strategy,
        } => converge(
            &load_model::<T>(model, *p_max)?,
            ns,
            (*strategy).into(),
            cli.budget,
        ),
        Command::Rho { f, w, g } => rho::<T>(f, w.as_deref(), g.as_deref()),
        Command::HlGraph { g_l } => hl_graph(g_l),
        Command::Verify {
            model,
            instances,
            word_p_max,
        } => verify(cli, model.as_deref(), *instances, *word_p_max),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let tables = match cli.mode {
        Mode::Exact => dispatch::<Rational>(cli)?,
        Mode::Float => dispatch::<f64>(cli)?,
    };
    if !tables.is_empty() {
        print!("{}", render(&tables, cli.format)?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
