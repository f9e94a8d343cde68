//! `forage` CLI: run rounds, run tournaments, render traces.

use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Parser, Subcommand};

use forage_harness::{
    render_trace, run_round, run_tournament, MatrixConfig, RoundConfig,
};

#[derive(Parser)]
#[command(
    name = "forage",
    about = "Deterministic central-place-foraging swarm simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one seeded round from a config file.
    Simulate {
        /// Round configuration (TOML).
        #[arg(long)]
        config: PathBuf,
        /// Write the trace file here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Render the round's trace to SVG here.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Override the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a strategies x distributions x seeds matrix.
    Tournament {
        /// Matrix configuration (TOML).
        #[arg(long)]
        matrix: PathBuf,
        /// Write the result records (JSON) here.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (default: one per core).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Render an existing trace file to SVG.
    Render {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        svg: PathBuf,
    },
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Simulate {
            config,
            trace,
            svg,
            seed,
        } => {
            let text = fs::read_to_string(&config)
                .with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = RoundConfig::from_toml(&text)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            let (result, trace_text) = run_round(&cfg)?;

            println!("seed:            {}", cfg.seed);
            println!("score:           {}", result.score);
            println!("config digest:   {}", result.config_digest);
            println!("wall-clock:      {:.1} ms", result.runtime.as_secs_f64() * 1e3);
            for r in &result.robots {
                println!(
                    "robot {}: banked {:2}  grasps {}/{}  avoids {:3}  distance {:7.1} m",
                    r.robot_id,
                    r.cubes_banked,
                    r.grasp_successes,
                    r.grasp_attempts,
                    r.collisions_avoided,
                    r.distance_traveled
                );
            }
            if let Some(path) = trace {
                fs::write(&path, &trace_text)
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("trace:           {}", path.display());
            }
            if let Some(path) = svg {
                let doc = render_trace(&trace_text)?;
                fs::write(&path, doc).with_context(|| format!("writing {}", path.display()))?;
                println!("svg:             {}", path.display());
            }
        }
        Command::Tournament { matrix, out, jobs } => {
            let text = fs::read_to_string(&matrix)
                .with_context(|| format!("reading {}", matrix.display()))?;
            let cfg = MatrixConfig::from_toml(&text)?;
            let result = run_tournament(&cfg, jobs)?;

            println!(
                "{:<24} {:<24} {:>7} {:>5} {:>5}",
                "strategy", "distribution", "median", "min", "max"
            );
            for cell in &result.cells {
                println!(
                    "{:<24} {:<24} {:>7.1} {:>5} {:>5}",
                    cell.strategy, cell.distribution, cell.median, cell.min, cell.max
                );
            }
            let json = serde_json::to_string_pretty(&result)?;
            fs::write(&out, json).with_context(|| format!("writing {}", out.display()))?;
            println!("results: {}", out.display());
        }
        Command::Render { trace, svg } => {
            let text =
                fs::read_to_string(&trace).with_context(|| format!("reading {}", trace.display()))?;
            let doc = render_trace(&text)?;
            fs::write(&svg, doc).with_context(|| format!("writing {}", svg.display()))?;
            println!("svg: {}", svg.display());
        }
    }
    Ok(())
}
