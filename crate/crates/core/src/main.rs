use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use modopt::error::{Error, Result};
use modopt::evaluators::{self, brute_force_optimum, DEFAULT_CAP};
use modopt::objective::compose_objective;
use modopt::problem::Solution;
use modopt::runner::{self, parse_config, read_best, write_reports, RunConfig};

#[derive(Parser)]
#[command(name = "modopt", version, about = "GA/SA optimization driven by a YAML input file")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured optimizer and write trace.csv, progress.csv and best.json.
    Run {
        #[arg(long)]
        input: PathBuf,
        /// Overrides `run.seed` from the input file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Overrides `run.threads`; GA children are scored in parallel.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Parse and check the input file without running anything.
    Validate {
        #[arg(long)]
        input: PathBuf,
    },
    /// Enumerate every feasible solution and report the best one.
    BruteForce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
    },
    /// Re-score the solution stored in a best.json file.
    Replay {
        #[arg(long)]
        best: PathBuf,
        #[arg(long)]
        input: PathBuf,
    },
}

fn load(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_config(&text)?)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            input,
            seed,
            out,
            threads,
        } => {
            let cfg = load(&input)?;
            let seed = seed.or(cfg.settings.seed).ok_or_else(|| {
                Error::Usage(modopt::error::UsageError(
                    "no seed given (use --seed or run.seed)".into(),
                ))
            })?;
            let threads = threads.or(cfg.settings.threads).unwrap_or(1).max(1);
            let record = runner::run(&cfg, seed, threads)?;
            let best = write_reports(&record, &cfg, seed, &out)?;
            println!(
                "{} evaluations, best F = {} (row {}), reports in {}",
                best.evaluations,
                best.fitness,
                best.found_at_row,
                out.display()
            );
        }
        Command::Validate { input } => {
            let cfg = load(&input)?;
            runner::check_compatibility(&cfg)?;
            let def = &cfg.problem;
            println!(
                "ok: {}, {} positions, {} decisions, {} groups, {} objectives, digest {}",
                cfg.methodology.keyword(),
                def.n_variables,
                def.n_decisions(),
                def.groups.len(),
                def.objectives.len(),
                cfg.digest()
            );
        }
        Command::BruteForce { input, cap } => {
            let cfg = load(&input)?;
            let def = &cfg.problem;
            let evaluator = evaluators::build(def)?;
            let best = brute_force_optimum(def, evaluator.as_ref(), &def.objectives, cap)?;
            println!(
                "{} feasible solutions; best F = {}",
                best.feasible_count,
                best.fitness()
            );
            println!("assignment: {}", def.describe(&best.solution.assignment));
            for c in &best.breakdown.contributions {
                println!("  {} = {} ({:+})", c.name, c.value, c.contribution);
            }
        }
        Command::Replay { best, input } => {
            let cfg = load(&input)?;
            let stored = read_best(&best)?;
            let def = &cfg.problem;
            if stored.config_digest != cfg.digest() {
                log::warn!("best file was produced from a different configuration");
            }
            let assignment = stored
                .assignment
                .iter()
                .map(|id| {
                    def.decision_index(&id.as_str().into()).ok_or_else(|| {
                        Error::Infeasible(format!("unknown decision `{id}` in {}", best.display()))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let solution = Solution::new(assignment);
            if let Some(v) = def.solution_violations(&solution).first() {
                return Err(Error::Infeasible(format!("{v:?}")));
            }
            let evaluator = evaluators::build(def)?;
            let result = evaluator
                .evaluate(&solution.assignment)
                .map_err(|source| Error::Evaluation {
                    solution: def.describe(&solution.assignment),
                    source,
                })?;
            let breakdown = compose_objective(&result, &def.objectives).map_err(|source| Error::Evaluation {
                solution: def.describe(&solution.assignment),
                source,
            })?;
            println!("stored F = {}, replayed F = {}", stored.fitness, breakdown.total);
            for c in &breakdown.contributions {
                println!("  {} = {} ({:+})", c.name, c.value, c.contribution);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
