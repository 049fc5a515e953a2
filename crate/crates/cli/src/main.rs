use cflab::{run, CliError, ExperimentConfig, Overrides, Subcommand};
use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

/// Probe first L^p-cohomology phenomena on balls in Cayley graphs.
#[derive(Debug, Parser)]
#[command(name = "cflab", version)]
struct Args {
    #[arg(value_enum)]
    subcommand: Subcommand,
    /// JSON experiment config.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    radius: Option<u32>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (overrides `out` in the config).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn error_record(kind: &str, code: i32, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "exit_code": code, "message": message } })
        .to_string()
}

fn fail(e: &CliError) -> ExitCode {
    let code = e.exit_code();
    eprintln!("{}", error_record(e.kind(), code, &e.to_string()));
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            eprintln!("{}", error_record("usage", 2, e.to_string().trim_end()));
            return ExitCode::from(2);
        }
        Err(e) => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let overrides = Overrides {
        radius: args.radius,
        p: args.p,
        seed: args.seed,
        out: args.out,
    };
    let config = match ExperimentConfig::load(&args.config, &overrides) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match run(args.subcommand, &config) {
        Ok(manifest) => {
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            let code = manifest.exit_code();
            if code != 0 {
                let msg = manifest.warnings.join("; ");
                eprintln!("{}", error_record("nonconvergence", code, &msg));
            }
            println!("{}", config.out.join(cflab::MANIFEST_NAME).display());
            ExitCode::from(code as u8)
        }
        Err(e) => fail(&e),
    }
}
