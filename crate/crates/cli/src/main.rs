use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use clap::{Parser, Subcommand, ValueEnum};
use lepage_core::cli::{analyze, emit, exit_code, fixture, parse_override, parse_problem_with, Format, ProblemDocument, FIXTURES};
use lepage_core::symcore::Rat;

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;

#[derive(Parser)]
#[command(name = "lepage", version, about = "Constraint analysis of Lepage-equivalent Hamiltonian systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Text => Format::Text,
            OutputFormat::Structured => Format::Structured,
        }
    }
}

#[derive(clap::Args)]
struct RunOptions {
    /// Override the run seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the prolongation budget.
    #[arg(long = "max-prolong")]
    max_prolong: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
    /// Write reports here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads when several problems are given.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one or more problem files.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Bind a parameter, `name=p/q`. Repeatable.
        #[arg(long = "param", value_name = "NAME=P/Q")]
        params: Vec<String>,
        #[command(flatten)]
        run: RunOptions,
    },
    /// The bundled problem corpus.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
}

#[derive(Subcommand)]
enum FixtureAction {
    List,
    /// Run the named fixtures, or all of them.
    Run {
        names: Vec<String>,
        #[command(flatten)]
        run: RunOptions,
    },
}

/// One queued analysis: a label for stderr and either a document or a load error.
struct Job {
    label: String,
    doc: Result<ProblemDocument, String>,
}

struct Outcome {
    bytes: Vec<u8>,
    code: u8,
}

fn run_one(job: &Job, opts: &RunOptions) -> Outcome {
    let mut doc = match &job.doc {
        Ok(d) => d.clone(),
        Err(e) => {
            eprintln!("{}: {e}", job.label);
            return Outcome { bytes: Vec::new(), code: EXIT_DATA };
        }
    };
    if let Some(s) = opts.seed {
        doc.seed = s;
    }
    if let Some(p) = opts.max_prolong {
        doc.max_prolong = p;
    }
    match analyze(&doc) {
        Ok(a) => {
            eprintln!("{}: {} in {:.3?}", job.label, a.report.verdict, a.timing);
            Outcome { bytes: emit(&a, opts.format.into()), code: exit_code(a.ladder.verdict) as u8 }
        }
        Err(e) => {
            eprintln!("{}: analysis failed: {e}", job.label);
            Outcome { bytes: Vec::new(), code: EXIT_DATA }
        }
    }
}

/// Runs every job on up to `opts.jobs` threads; output keeps input order.
fn run_all(jobs: &[Job], opts: &RunOptions) -> u8 {
    let slots: Vec<Mutex<Option<Outcome>>> = jobs.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..opts.jobs.clamp(1, jobs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= jobs.len() {
                    break;
                }
                let o = run_one(&jobs[i], opts);
                *slots[i].lock().unwrap() = Some(o);
            });
        }
    });
    let mut out = Vec::new();
    let mut code = 0;
    for slot in slots {
        let o = slot.into_inner().unwrap().expect("every job ran");
        out.extend_from_slice(&o.bytes);
        code = code.max(o.code);
    }
    let written = match &opts.out {
        Some(p) => std::fs::write(p, &out),
        None => std::io::stdout().write_all(&out),
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {e}");
        return EXIT_USAGE;
    }
    code
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match cli.command {
        Command::Analyze { files, params, run } => {
            let mut overrides: Vec<(String, Rat)> = Vec::new();
            for p in &params {
                match parse_override(p) {
                    Some(o) => overrides.push(o),
                    None => {
                        eprintln!("bad --param `{p}`: expected name=p/q");
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
            }
            let jobs: Vec<Job> = files
                .iter()
                .map(|f| {
                    let label = f.display().to_string();
                    let doc = std::fs::read_to_string(f)
                        .map_err(|e| format!("cannot read: {e}"))
                        .and_then(|text| parse_problem_with(&text, &overrides).map_err(|e| e.to_string()));
                    Job { label, doc }
                })
                .collect();
            ExitCode::from(run_all(&jobs, &run))
        }
        Command::Fixtures { action: FixtureAction::List } => {
            for f in FIXTURES {
                let params: Vec<String> = f.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!("{:<20} {:<24} {:<16} {}", f.name, f.file, f.expected_verdict, params.join(" "));
            }
            ExitCode::SUCCESS
        }
        Command::Fixtures { action: FixtureAction::Run { names, run } } => {
            let mut jobs = Vec::new();
            let selected: Vec<&str> = if names.is_empty() { FIXTURES.iter().map(|f| f.name).collect() } else { names.iter().map(String::as_str).collect() };
            for n in selected {
                let Some(f) = fixture(n) else {
                    eprintln!("unknown fixture `{n}`");
                    return ExitCode::from(EXIT_USAGE);
                };
                jobs.push(Job { label: f.name.to_string(), doc: f.document().map_err(|e| e.to_string()) });
            }
            ExitCode::from(run_all(&jobs, &run))
        }
    }
}
