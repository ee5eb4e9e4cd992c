use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use navier_mild::norms::weighted_norm_terms;
use navier_mild::{Domain, MixedNormSpec};

use navier_mild_cli::acceptance::{acceptance_suite, Level, Mutation};
use navier_mild_cli::config::ExperimentConfig;
use navier_mild_cli::data::{make_initial_data, InitialData};
use navier_mild_cli::error::HarnessError;
use navier_mild_cli::experiment::run_experiment;
use navier_mild_cli::trajfile::TrajectoryFile;

#[derive(Parser)]
#[command(name = "nsmild", version, about = "Mild Navier-Stokes solutions and weighted norms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML file.
    Run { config: PathBuf },
    /// Run the acceptance criteria.
    Accept {
        #[arg(long, default_value = "quick")]
        level: Level,
        /// Comma-separated criterion numbers; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        /// Run against a deliberately broken build.
        #[arg(long)]
        mutate: Option<MutationArg>,
    },
    /// Write initial data as a single-node trajectory file.
    Data {
        choice: DataChoice,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 2.0 * std::f64::consts::PI)]
        box_length: f64,
        #[arg(long, default_value_t = 0.1)]
        amplitude: f64,
        #[arg(long, default_value_t = 2.0)]
        decay: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.9)]
        alpha: f64,
        /// Mollification radius; three grid spacings when omitted.
        #[arg(long)]
        radius: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Evaluate weighted mixed norms of a stored trajectory.
    Norms {
        trajectory: PathBuf,
        /// `p,q,m,n,delta`; repeatable.
        #[arg(long, required = true)]
        spec: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DataChoice {
    TaylorGreen,
    RandomDivfree,
    SingularLd,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    FlipLeray,
    SkipDealiasing,
}

fn parse_spec(text: &str) -> Result<MixedNormSpec, HarnessError> {
    let bad = || HarnessError::config("--spec", format!("expected p,q,m,n,delta, got `{text}`"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 5 {
        return Err(bad());
    }
    let p = if parts[0] == "inf" {
        f64::INFINITY
    } else {
        parts[0].parse().map_err(|_| bad())?
    };
    let q = parts[1].parse().map_err(|_| bad())?;
    let m = parts[2].parse().map_err(|_| bad())?;
    let n = parts[3].parse().map_err(|_| bad())?;
    let delta = parts[4].parse().map_err(|_| bad())?;
    MixedNormSpec::new(p, q, m, n, delta).map_err(|e| HarnessError::config("--spec", e.to_string()))
}

fn run(cli: Cli) -> Result<i32, HarnessError> {
    match cli.command {
        Command::Run { config } => {
            let config = ExperimentConfig::load(&config)?;
            let outcome = run_experiment(&config)?;
            let r = &outcome.report;
            println!("status: {:?}", r.status);
            if let Some(m) = &r.message {
                println!("message: {m}");
            }
            for n in &r.norms {
                match (n.value, &n.error) {
                    (Some(v), _) => println!(
                        "norm (p={}, q={}, m={}, n={}, delta={}) = {v:.10e}",
                        n.p, n.q, n.m, n.n, n.delta
                    ),
                    (None, Some(e)) => println!("norm (p={}, q={}) failed: {e}", n.p, n.q),
                    _ => {}
                }
            }
            println!("output: {}", config.output.directory.display());
            Ok(r.status.exit_code())
        }
        Command::Accept { level, only, mutate } => {
            let mutation = Mutation {
                flip_leray_sign: matches!(mutate, Some(MutationArg::FlipLeray)),
                skip_dealiasing: matches!(mutate, Some(MutationArg::SkipDealiasing)),
            };
            let results = acceptance_suite(level, mutation, &only, |r| println!("{r}"));
            let failed = results.iter().filter(|r| !r.passed).count();
            println!("{} of {} criteria passed", results.len() - failed, results.len());
            Ok(if failed == 0 { 0 } else { 3 })
        }
        Command::Data {
            choice,
            out,
            dim,
            grid,
            box_length,
            amplitude,
            decay,
            seed,
            alpha,
            radius,
            scale,
        } => {
            let domain = Domain::new(dim, box_length, grid)
                .map_err(|e| HarnessError::config("domain", e.to_string()))?;
            let data = match choice {
                DataChoice::TaylorGreen => InitialData::TaylorGreen,
                DataChoice::RandomDivfree => InitialData::RandomDivfree {
                    amplitude,
                    spectral_decay: decay,
                    seed,
                },
                DataChoice::SingularLd => InitialData::SingularLd {
                    alpha,
                    mollification_radius: radius.unwrap_or(3.0 * domain.spacing()),
                    center: None,
                    scale,
                },
            };
            let field = make_initial_data(&data, &domain)?;
            TrajectoryFile::from_field(&field).write(&out)?;
            println!("wrote {}", out.display());
            Ok(0)
        }
        Command::Norms { trajectory, spec } => {
            let file = TrajectoryFile::read(&trajectory)?;
            if file.times.first() == Some(&0.0) {
                return Err(HarnessError::Format(format!(
                    "{} holds initial data at t = 0; norms need a solved trajectory",
                    trajectory.display()
                )));
            }
            let traj = file.into_trajectory()?;
            for text in &spec {
                let s = parse_spec(text)?;
                let terms = weighted_norm_terms(&traj, &s)?;
                println!(
                    "p={} q={} m={} n={} delta={}: {:.12e}",
                    s.p,
                    s.q,
                    s.m,
                    s.n,
                    s.delta,
                    terms.total()
                );
                for j in 0..=s.m {
                    for k in 0..=s.n {
                        println!("  j={j} k={k}: {:.12e}", terms.get(j, k));
                    }
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
