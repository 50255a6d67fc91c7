use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quiver_torsion::random::random_suite;
use quiver_torsion::report::{self, Output, RunConfig};
use quiver_torsion::spec_file::render_spec;

#[derive(Parser)]
#[command(
    name = "qtorsion",
    version,
    about = "Split torsion pairs closed under quotients for bound quiver algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test every vertex subset and list the valid ones.
    Classify(Common),
    /// Enumerate indecomposables up to --max-dim.
    Catalog(Common),
    /// Compute the left part and its support algebra.
    LeftPart(Common),
    /// Cross-check the classification against the catalog oracles.
    Verify(Common),
    /// Print seeded random bound quivers in spec-file format.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
}

#[derive(Args)]
struct Common {
    /// Algebra spec file.
    file: PathBuf,
    #[arg(long, default_value_t = 4)]
    max_dim: usize,
    /// Treat the truncated catalog as complete.
    #[arg(long)]
    assume_complete: bool,
    /// Hom and endomorphism enumeration cap, as an exponent of two.
    #[arg(long, default_value_t = 16)]
    end_cap: u32,
    #[arg(long, default_value_t = 8)]
    pd_cap: usize,
    /// Accepted for symmetry with `random`; the fixed-file commands do not sample.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

type Cmd = fn(&str, &RunConfig) -> quiver_torsion::Result<Output>;

fn run(name: &str, cmd: Cmd, args: &Common) -> ExitCode {
    let text = match std::fs::read_to_string(&args.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}: {e}", args.file.display());
            return ExitCode::from(2);
        }
    };
    let cfg = RunConfig {
        max_dim: args.max_dim,
        assume_complete: args.assume_complete,
        end_cap: args.end_cap,
        pd_cap: args.pd_cap,
        ..Default::default()
    };
    let out = match cmd(&text, &cfg) {
        Ok(o) => o,
        Err(e) if e.is_inconclusive() => match report::inconclusive_output(name, &text, &cfg, &e) {
            Ok(o) => o,
            Err(e) => return input_error(&args.file, e),
        },
        Err(e) => return input_error(&args.file, e),
    };
    print!("{}", out.summary);
    if let Some(path) = &args.out {
        if let Err(e) = std::fs::write(path, out.json()) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if out.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn input_error(file: &std::path::Path, e: quiver_torsion::Error) -> ExitCode {
    eprintln!("error: {}: {e}", file.display());
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Classify(a) => run("classify", report::cmd_classify, a),
        Command::Catalog(a) => run("catalog", report::cmd_catalog, a),
        Command::LeftPart(a) => run("left-part", report::cmd_left_part, a),
        Command::Verify(a) => run("verify", report::cmd_verify, a),
        Command::Random { seed, count } => {
            for (i, spec) in random_suite(*seed, *count).iter().enumerate() {
                println!("# random algebra {i} (seed {seed})");
                println!("{}", render_spec(spec));
            }
            ExitCode::SUCCESS
        }
    }
}
