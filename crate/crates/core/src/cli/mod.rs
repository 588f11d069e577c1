//! Command-line front end: `analyze`, `pad` and `paper-suite`.

pub mod commands;
pub mod corpus;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use commands::{ErrorDoc, Options, EXIT_INVALID, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "orthomono", version, about = "Arithmeticity witnesses for orthogonal hypergeometric monodromy")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Coefficient bound for the isotropic vector search.
    #[arg(long, global = true, default_value_t = 3)]
    pub search_bound: u32,
    /// Maximal word length when searching the orbit of v.
    #[arg(long, global = true, default_value_t = 8)]
    pub word_bound: usize,
    /// Write the JSON report to PATH (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Suppress the human-readable summary.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze one pair, or a file of pairs with --batch.
    Analyze(AnalyzeArgs),
    /// Build and analyze the padded pair f0(x)P(x^d), g0(x)Q(x^d).
    Pad(PadArgs),
    /// Recompute every printed datum of the worked examples.
    PaperSuite,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    pub f: Option<String>,
    #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
    pub g: Option<String>,
    /// File with one pair per line (`f ; g` or `{"f": .., "g": ..}`);
    /// writes one JSON line per pair.
    #[arg(long, value_name = "FILE")]
    pub batch: Option<PathBuf>,
    /// Swap f and g, or substitute x -> -x, if the constant terms are reversed.
    #[arg(long)]
    pub auto_shift: bool,
}

#[derive(Debug, Args)]
pub struct PadArgs {
    #[arg(long)]
    pub f0: String,
    #[arg(long)]
    pub g0: String,
    /// Padding factor of f, in the variable y.
    #[arg(long = "P", value_name = "P")]
    pub p: String,
    /// Padding factor of g, in the variable y.
    #[arg(long = "Q", value_name = "Q")]
    pub q: String,
    #[arg(long, default_value_t = 6)]
    pub d: usize,
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INVALID
        }
    }
}

fn emit(path: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(p) if p.as_os_str() == "-" => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}")
        }
        Some(p) => std::fs::write(p, format!("{text}\n")),
        None => Ok(()),
    }
}

fn json_to_stdout(path: &Option<PathBuf>) -> bool {
    path.as_ref().is_some_and(|p| p.as_os_str() == "-")
}

fn execute(cli: &Cli) -> std::io::Result<i32> {
    let g = &cli.global;
    let opts = Options { search_bound: g.search_bound, word_bound: g.word_bound, auto_shift: false };
    let show_summary = !g.quiet && !json_to_stdout(&g.json);
    match &cli.command {
        Command::Analyze(a) => {
            let opts = Options { auto_shift: a.auto_shift, ..opts };
            if let Some(path) = &a.batch {
                let text = match std::fs::read_to_string(path) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("error: cannot read {}: {e}", path.display());
                        return Ok(EXIT_INVALID);
                    }
                };
                let rows = commands::batch(&text, &opts);
                let lines: Vec<String> =
                    rows.iter().map(|r| serde_json::to_string(r).expect("batch row serializes")).collect();
                let joined = lines.join("\n");
                if g.json.is_some() {
                    emit(&g.json, &joined)?;
                } else {
                    println!("{joined}");
                }
                return Ok(rows.iter().map(|r| r.exit_code()).max().unwrap_or(EXIT_OK));
            }
            let (f, gg) = (a.f.as_deref().unwrap_or_default(), a.g.as_deref().unwrap_or_default());
            finish(commands::analyze(f, gg, &opts), &g.json, show_summary)
        }
        Command::Pad(p) => finish(commands::pad(&p.f0, &p.g0, &p.p, &p.q, p.d, &opts), &g.json, show_summary),
        Command::PaperSuite => match commands::suite(&opts) {
            Ok((rows, code)) => {
                if show_summary {
                    println!("{}", commands::suite_table(&rows));
                }
                if g.json.is_some() {
                    emit(&g.json, &serde_json::to_string_pretty(&rows).expect("rows serialize"))?;
                }
                Ok(code)
            }
            Err(e) => Ok(report_error(&e, &g.json)),
        },
    }
}

fn finish(res: crate::Result<report::ReportDocument>, json: &Option<PathBuf>, show_summary: bool) -> std::io::Result<i32> {
    match res {
        Ok(doc) => {
            if show_summary {
                println!("{}", commands::summary(&doc));
            }
            emit(json, &doc.to_json())?;
            Ok(EXIT_OK)
        }
        Err(e) => Ok(report_error(&e, json)),
    }
}

fn report_error(e: &crate::Error, json: &Option<PathBuf>) -> i32 {
    let doc = ErrorDoc::new(e);
    eprintln!("error: {e}");
    if json.is_some() {
        let text = serde_json::to_string_pretty(&serde_json::json!({ "error": doc })).expect("error serializes");
        let _ = emit(json, &text);
    }
    doc.exit_code
}
