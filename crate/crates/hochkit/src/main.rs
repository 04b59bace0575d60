use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use hochkit::{run_source, Format, Outcome, EXIT_INPUT};
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

/// Hochschild cohomology and integrable derivations over finite chain rings.
#[derive(Parser, Debug)]
#[command(name = "hochkit", version)]
struct Cli {
    /// Job files to run.
    #[arg(required = true)]
    specs: Vec<PathBuf>,

    /// Output format; overrides the `format` key of each job.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,

    /// Number of job files to run concurrently.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn run_file(path: &PathBuf, format: Option<Format>) -> Outcome {
    match std::fs::read_to_string(path) {
        Ok(text) => {
            let mut out = run_source(&text, format);
            if !out.stderr.is_empty() {
                out.stderr = format!("{}: {}", path.display(), out.stderr);
            }
            out
        }
        Err(e) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("{}: {e}\n", path.display()) },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format.map(Format::from);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("cannot start worker threads: {e}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let outcomes: Vec<Outcome> = pool.install(|| cli.specs.par_iter().map(|p| run_file(p, format)).collect());

    let batch = cli.specs.len() > 1;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for (path, o) in cli.specs.iter().zip(&outcomes) {
        if batch {
            let _ = writeln!(out, "== {} ==", path.display());
        }
        let _ = out.write_all(o.stdout.as_bytes());
        eprint!("{}", o.stderr);
    }
    let code = outcomes.iter().map(|o| o.code).max().unwrap_or(0);
    ExitCode::from(code as u8)
}
