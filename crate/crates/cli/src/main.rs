use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use carnot_cli::commands::{self, CheckTask, NumericTask};
use carnot_cli::spec::{self, SpecDocument};
use carnot_cli::{CliError, Format, RunReport};
use carnot_core::annihilator::{example_operator, ExampleId};
use carnot_core::numerics::DEFAULT_TOLERANCE;
use carnot_core::GradedLieAlgebra;

#[derive(Parser)]
#[command(name = "carnot", version, about = "Exact annihilator certificates and L¹ inequality probes on Carnot groups")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "text")]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a symbol or composition check on an operator spec.
    Check {
        #[arg(long)]
        spec: PathBuf,
        /// cocanceling, canceling or compose-zero.
        #[arg(long, default_value = "cocanceling")]
        task: CheckTask,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Consecutive non-shrinking samples before the canceling test gives up.
        #[arg(long, default_value_t = 32)]
        budget: usize,
    },
    /// Build and verify a closed-form annihilator.
    VerifyExample {
        /// gradient, powers:K, korn or korn-reduction.
        #[arg(long)]
        example: String,
        #[arg(long, default_value = "heisenberg:1")]
        group: String,
        /// Also check the Korn reduction identities.
        #[arg(long)]
        korn_reduction: bool,
    },
    /// Search the annihilators of a fixed order for a cocanceling one.
    FindAnnihilator {
        #[arg(long, conflicts_with_all = ["example", "group"])]
        spec: Option<PathBuf>,
        #[arg(long)]
        example: Option<String>,
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        degree: usize,
        #[arg(long = "dim-f", default_value_t = 1)]
        dim_f: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sobolev-type ratio under grid refinement.
    Sobolev {
        #[command(flatten)]
        numeric: NumericArgs,
    },
    /// Hardy-type ratio under grid refinement.
    Hardy {
        #[command(flatten)]
        numeric: NumericArgs,
        #[arg(long, default_value_t = 1)]
        ell: usize,
        #[arg(long, default_value_t = 1.0)]
        p: f64,
    },
    /// Describe a group: layers, weights, basis and brackets.
    GroupInfo {
        #[arg(long, conflicts_with = "spec")]
        group: Option<String>,
        #[arg(long)]
        spec: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct NumericArgs {
    #[arg(long, default_value = "heisenberg:1")]
    group: String,
    #[arg(long, default_value = "gradient")]
    example: String,
    #[arg(long, default_value_t = 4)]
    bump: u32,
    /// Comma-separated cells per axis.
    #[arg(long, value_delimiter = ',')]
    grid: Option<Vec<usize>>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
}

fn load_spec(path: &PathBuf) -> Result<SpecDocument, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })?;
    spec::parse_document(&text)
}

fn group(descriptor: &str) -> Result<Arc<GradedLieAlgebra>, CliError> {
    Ok(Arc::new(GradedLieAlgebra::from_descriptor(descriptor)?))
}

fn example(text: &str) -> Result<ExampleId, CliError> {
    Ok(text.replace(':', "(").replace("((", "(").parse::<ExampleId>().or_else(|_| text.parse())?)
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    match &cli.command {
        Command::Check { spec, task, seed, budget } => commands::check(&load_spec(spec)?, *task, *seed, *budget),
        Command::VerifyExample { example: ex, group: g, korn_reduction } => {
            let (id, reduction) =
                if ex == "korn-reduction" { (ExampleId::Korn, true) } else { (example(ex)?, *korn_reduction) };
            commands::verify_example(group(g)?, id, reduction)
        }
        Command::FindAnnihilator { spec, example: ex, group: g, degree, dim_f, seed } => {
            let (alg, a) = match spec {
                Some(path) => {
                    let doc = load_spec(path)?;
                    let a = doc
                        .operator
                        .clone()
                        .ok_or_else(|| CliError::Field { path: "$.operator".into(), msg: "missing".into() })?;
                    (doc.group, a)
                }
                None => {
                    let alg = group(g.as_deref().unwrap_or("heisenberg:1"))?;
                    let id = example(ex.as_deref().unwrap_or("gradient"))?;
                    let a = example_operator(id, &alg)?;
                    (alg, a)
                }
            };
            commands::find(alg, &a, *degree, *dim_f, *seed)
        }
        Command::Sobolev { numeric } => run_numeric(numeric, NumericTask::Sobolev, &[16, 32, 64]),
        Command::Hardy { numeric, ell, p } => {
            run_numeric(numeric, NumericTask::Hardy { ell: *ell, p: *p }, &[32, 64, 128])
        }
        Command::GroupInfo { group: g, spec } => {
            let alg = match (g, spec) {
                (_, Some(path)) => load_spec(path)?.group,
                (Some(d), None) => group(d)?,
                (None, None) => return Err(CliError::Usage("group-info needs --group or --spec".into())),
            };
            Ok(commands::group_info(&alg))
        }
    }
}

fn run_numeric(args: &NumericArgs, task: NumericTask, default_levels: &[usize]) -> Result<RunReport, CliError> {
    let alg = group(&args.group)?;
    let id = example(&args.example)?;
    let levels = args.grid.clone().unwrap_or_else(|| default_levels.to_vec());
    commands::numeric(&alg, task, id, args.bump, &levels, args.tolerance)
}

fn configure_threads() {
    if let Some(n) = std::env::var("CARNOT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = run(&cli).and_then(|rep| rep.render(cli.format).map(|text| (rep.exit_code, text)));
    match outcome {
        Ok((code, text)) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(carnot_cli::exit::INPUT as u8);
                }
            } else {
                print!("{text}");
            }
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
