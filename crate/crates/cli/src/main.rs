use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use eqtree_cli::{run, Command, Format, JobSpec, ProviderSpec, EXIT_INPUT};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Ideal,
    FlattenIdeal,
    Evaluate,
    Phi,
    Toric,
    Verify,
    RootExtendIdeal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

/// Equivariant tree models: evaluation, ideal generators and verification.
#[derive(Parser, Debug)]
#[command(name = "eqtree", version)]
struct Args {
    command: CommandArg,
    /// Tree description (JSON).
    tree: PathBuf,
    #[arg(long, default_value_t = 2)]
    degree_bound: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// builtin, file:PATH or oracle.
    #[arg(long, default_value = "oracle")]
    provider: ProviderSpec,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Also list the linear forms cutting out the invariant subspace.
    #[arg(long)]
    emit_linear_cuts: bool,
    /// Root vertex for `phi` and `root-extend-ideal`.
    #[arg(long)]
    root: Option<String>,
    /// Representation file for `evaluate` and `phi`.
    #[arg(long)]
    representation: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT as u8);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let command = match args.command {
        CommandArg::Ideal => Command::Ideal,
        CommandArg::FlattenIdeal => Command::FlattenIdeal,
        CommandArg::Evaluate => Command::Evaluate,
        CommandArg::Phi => Command::Phi,
        CommandArg::Toric => Command::Toric,
        CommandArg::Verify => Command::Verify,
        CommandArg::RootExtendIdeal => Command::RootExtendIdeal,
    };
    let job = JobSpec {
        tree: args.tree,
        command,
        provider: args.provider,
        degree_bound: args.degree_bound,
        seed: args.seed,
        samples: args.samples,
        format: match args.format {
            FormatArg::Text => Format::Text,
            FormatArg::Json => Format::Json,
        },
        emit_linear_cuts: args.emit_linear_cuts,
        root: args.root,
        representation: args.representation,
    };
    let outcome = run(&job);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.code as u8)
}
