//! `liftdec`: generators, encoders, decoders and measurements as subcommands.

mod args;
mod decode;
mod gen;
mod load;
mod measure;
mod report;
mod word;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use liftdec_core::Error;

use crate::report::{Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "liftdec",
    version,
    about = "Lifted codes over expanders and their SOS decoders"
)]
struct Cli {
    /// Global seed; every stage derives its own stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Compare against the brute-force oracle (exit 3 on mismatch).
    #[arg(long, global = true)]
    oracle: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Append the report to DIR/<command>.report.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Write the artifact (graph, code, word, list) here instead of stdout.
    #[arg(short = 'o', long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Random, complete or cycle regular graph.
    GenGraph(gen::GenGraph),
    /// Complete or noisy complete simplicial complex.
    GenComplex(gen::GenComplex),
    /// Random linear code with certified distance.
    GenCode(gen::GenCode),
    /// Lift a ground codeword.
    Encode(word::Encode),
    /// Flip a fraction of positions of a lifted word.
    Corrupt(word::Corrupt),
    #[command(subcommand)]
    Decode(Box<decode::DecodeCmd>),
    #[command(subcommand)]
    Measure(measure::MeasureCmd),
}

pub struct Ctx {
    pub seed: u64,
    pub oracle: bool,
}

/// What a command produced.
pub struct Output {
    pub report: Report,
    pub artifact: Option<String>,
    pub mismatch: bool,
}

impl Output {
    pub fn report(report: Report) -> Self {
        Self {
            report,
            artifact: None,
            mismatch: false,
        }
    }

    pub fn with_artifact(report: Report, artifact: String) -> Self {
        Self {
            report,
            artifact: Some(artifact),
            mismatch: false,
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => 2,
            Failure::Core(Error::InvalidInput(_) | Error::InvalidConfig(_) | Error::Parse { .. }) => 2,
            Failure::Core(Error::ResourceLimit(_) | Error::Infeasible(_) | Error::InvalidCondition(_)) => 4,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => format!("usage error: {m}"),
            Failure::Io(m) => format!("i/o error: {m}"),
            Failure::Core(e) => e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, Failure>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn run(cli: &Cli) -> CliResult<Output> {
    let ctx = Ctx {
        seed: cli.seed,
        oracle: cli.oracle,
    };
    match &cli.command {
        Command::GenGraph(a) => gen::gen_graph(a, &ctx),
        Command::GenComplex(a) => gen::gen_complex(a, &ctx),
        Command::GenCode(a) => gen::gen_code(a, &ctx),
        Command::Encode(a) => word::encode(a),
        Command::Corrupt(a) => word::corrupt(a, &ctx),
        Command::Decode(c) => decode::run(c, &ctx),
        Command::Measure(c) => measure::run(c, &ctx),
    }
}

fn emit(cli: &Cli, out: &Output) -> CliResult<()> {
    let rendered = out.report.render(cli.format);
    let mut report_to_stderr = false;
    if let Some(artifact) = &out.artifact {
        match &cli.output {
            Some(path) => std::fs::write(path, artifact)?,
            None => {
                std::io::stdout().write_all(artifact.as_bytes())?;
                report_to_stderr = true;
            }
        }
    }
    if report_to_stderr {
        std::io::stderr().write_all(rendered.as_bytes())?;
    } else {
        std::io::stdout().write_all(rendered.as_bytes())?;
    }
    if let Some(dir) = &cli.out {
        out.report.append_to(dir, cli.format)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| emit(&cli, &out).map(|_| out.mismatch));
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("oracle mismatch");
            ExitCode::from(3)
        }
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
