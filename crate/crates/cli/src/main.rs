use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tensorcoh::checks::REGISTRY;
use tensorcoh::GroundField;
use tensorcoh_cli::corpus;
use tensorcoh_cli::dsl;
use tensorcoh_cli::explore::explore;
use tensorcoh_cli::runner::{self, FixtureRun};
use tensorcoh_cli::session::Options;

#[derive(Parser)]
#[command(name = "tensorcoh", version, about = "Local cohomology of tensor products over graded rings")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a script file, `fixture <id>`, or `corpus`.
    Run(RunArgs),
    /// Print the check registry.
    ListChecks {
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a bound on seeded random monomial instances and emit CSV.
    Explore {
        id: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long)]
        field_char: Option<u32>,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print a script in canonical form.
    Fmt { file: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    /// `corpus`, `fixture <id>`, or a script path.
    #[arg(required = true, num_args = 1..=2)]
    target: Vec<String>,
    /// Directory of `.tc` fixtures to use instead of the built-in corpus.
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Write all check records as a JSON array.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write explorer CSV output here.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    field_char: Option<u32>,
    #[arg(long)]
    bound: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// Zero all timings so output is byte-stable.
    #[arg(long)]
    no_timing: bool,
}

/// Exit codes: 0 all hold, 1 mismatch or soundness failure, 2 bad input.
fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Run(args) => run(args),
        Cmd::ListChecks { json } => {
            if json {
                println!("{}", serde_json::to_string_pretty(REGISTRY)?);
            } else {
                for s in REGISTRY {
                    println!("{:<13} {:<10} {}", s.id, format!("{:?}", s.family).to_lowercase(), s.statement);
                    println!("{:13} anchor: {}", "", s.anchor);
                    if !s.hypotheses.is_empty() {
                        println!("{:13} hypotheses: {}", "", s.hypotheses.join("; "));
                    }
                }
            }
            Ok(true)
        }
        Cmd::Explore { id, trials, seed, vars, field_char, csv } => {
            let field = match field_char {
                Some(p) => GroundField::new(p)?,
                None => GroundField::default(),
            };
            let run = explore(&id, trials, seed, vars, field)?;
            let text = run.csv().map_err(anyhow::Error::msg)?;
            match csv {
                Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
                None => print!("{text}"),
            }
            let max = run.max_ratio().map_or("n/a".to_string(), |r| format!("{r:.6}"));
            eprintln!("{id}: {} instances, max lhs/rhs {max}", run.rows.len());
            Ok(true)
        }
        Cmd::Fmt { file } => {
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let script = dsl::parse(&text).map_err(|e| anyhow::anyhow!("{}:{e}", file.display()))?;
            print!("{script}");
            Ok(true)
        }
    }
}

fn run(args: RunArgs) -> Result<bool> {
    if let Some(t) = args.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let opts = Options {
        field_char: args.field_char,
        bound: args.bound,
        seed: args.seed,
        timing: !args.no_timing,
        ..Options::default()
    };
    let fixtures = match &args.dir {
        Some(d) => corpus::load_dir(d).with_context(|| format!("reading {}", d.display()))?,
        None => corpus::builtin(),
    };
    let target: Vec<&str> = args.target.iter().map(String::as_str).collect();
    match target.as_slice() {
        ["corpus"] => {
            let run = runner::run_corpus(&fixtures, &opts)?;
            print!("{}", run.summary());
            for f in &run.fixtures {
                for d in f.diagnostics() {
                    eprintln!("{d}");
                }
            }
            let records: Vec<_> = run.records().collect();
            write_json(&args.json, &serde_json::to_value(records)?)?;
            let csv: Vec<&String> = run.fixtures.iter().flat_map(|f| &f.csv).collect();
            write_csv(&args.csv, &csv)?;
            Ok(run.passed())
        }
        ["fixture", id] => {
            let Some(f) = fixtures.iter().find(|f| f.id == *id) else {
                bail!("no fixture `{id}`");
            };
            let run = runner::run_fixture(f, &opts)?;
            println!("{}", Value::Object(run.outputs.clone()));
            finish_single(&run, &args)
        }
        [path] => {
            let f = corpus::load_file(path.as_ref()).with_context(|| format!("reading {path}"))?;
            let run = runner::run_fixture(&f, &opts)?;
            for r in &run.records {
                println!("{}", json!({ "check": r.check, "verdict": r.verdict, "lhs": r.lhs, "rhs": r.rhs }));
            }
            finish_single(&run, &args)
        }
        _ => bail!("expected `corpus`, `fixture <id>` or a script path"),
    }
}

fn finish_single(run: &FixtureRun, args: &RunArgs) -> Result<bool> {
    for d in run.diagnostics() {
        eprintln!("{d}");
    }
    for d in &run.discrepancies {
        eprintln!("{} known discrepancy: {d}", run.id);
    }
    write_json(&args.json, &serde_json::to_value(&run.records)?)?;
    write_csv(&args.csv, &run.csv.iter().collect::<Vec<_>>())?;
    Ok(run.passed())
}

fn write_json(path: &Option<PathBuf>, v: &Value) -> Result<()> {
    if let Some(p) = path {
        let mut text = serde_json::to_string_pretty(v)?;
        text.push('\n');
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn write_csv(path: &Option<PathBuf>, tables: &[&String]) -> Result<()> {
    if let Some(p) = path {
        let text: String = tables.iter().map(|t| t.as_str()).collect();
        std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}
