use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use skewlab_cli::analyze::{self, AnalyzeConfig, Format};
use skewlab_cli::{figure, quad_spec_from_env, verify, CliError, Outcome};

/// Skew-symmetric distributions: figure data, property suites and analysis.
#[derive(Debug, Parser)]
#[command(name = "skewlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the data behind figure 1, 2 or 3 as CSV.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        n: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a property suite (or `all`) and print a JSON report.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Summarize the law 2 f0(x) G0(w(x)).
    Analyze {
        #[arg(long, default_value = "normal")]
        base: String,
        #[arg(long = "G0", alias = "g0", default_value = "normal")]
        g0: String,
        #[arg(long, default_value = "linear:0")]
        w: String,
        #[arg(long, value_enum, default_value_t = OutFormat::Json)]
        format: OutFormat,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        grid: usize,
        #[arg(long, default_value_t = 2000)]
        pairs: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn dispatch(cmd: Command) -> Result<Outcome, CliError> {
    let quad = quad_spec_from_env()?;
    match cmd {
        Command::Figure { n, out } => figure::run(n, &out, quad),
        Command::Verify { suite, seed } => verify::run(&suite, seed, quad),
        Command::Analyze {
            base,
            g0,
            w,
            format,
            seed,
            grid,
            pairs,
            out,
        } => {
            let format = match format {
                OutFormat::Json => Format::Json,
                OutFormat::Csv => Format::Csv,
            };
            let cfg = AnalyzeConfig {
                base,
                g0,
                w,
                format,
                seed,
                grid,
                pairs,
            };
            let text = analyze::run(&cfg, quad)?;
            match out {
                Some(path) => {
                    std::fs::write(path, text)?;
                    Ok(Outcome {
                        stdout: String::new(),
                        pass: true,
                    })
                }
                None => Ok(Outcome { stdout: text, pass: true }),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("skewlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
