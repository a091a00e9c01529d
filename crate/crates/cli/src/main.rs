use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use orbicoh_cli::{execute, Command, Format, Twist};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CommandArg {
    Validate,
    Sectors,
    Betti,
    Hodge,
    Ring,
    H2,
    Regular,
    Center,
    VerifyLs,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum FormatArg {
    #[default]
    Text,
    Json,
}

/// Orbifold cohomology of global quotients, with discrete torsion and inner local systems.
#[derive(Debug, Parser)]
#[command(name = "orbicoh", version)]
struct Args {
    command: CommandArg,
    /// Problem file (JSON).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: FormatArg,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Twist by the local system induced from the file's cocycle.
    #[arg(long, conflicts_with = "local_system")]
    cocycle_induced: bool,
    /// Twist by a named local system from the file.
    #[arg(long)]
    local_system: Option<String>,
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn real_main() -> anyhow::Result<u8> {
    let args = Args::parse();
    let input = std::fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let command = match args.command {
        CommandArg::Validate => Command::Validate,
        CommandArg::Sectors => Command::Sectors,
        CommandArg::Betti => Command::Betti,
        CommandArg::Hodge => Command::Hodge,
        CommandArg::Ring => Command::Ring,
        CommandArg::H2 => Command::H2,
        CommandArg::Regular => Command::Regular,
        CommandArg::Center => Command::Center,
        CommandArg::VerifyLs => Command::VerifyLs,
    };
    let twist = match (args.cocycle_induced, args.local_system) {
        (true, _) => Twist::CocycleInduced,
        (false, Some(name)) => Twist::LocalSystem(name),
        (false, None) => Twist::Trivial,
    };
    let format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let outcome = execute(command, &input, &twist, format);
    eprint!("{}", outcome.stderr);
    match &args.output {
        Some(path) if outcome.exit_code == 0 => std::fs::write(path, &outcome.stdout)
            .with_context(|| format!("writing {}", path.display()))?,
        _ => print!("{}", outcome.stdout),
    }
    Ok(outcome.exit_code as u8)
}
