use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use dirflow_cli::config::Seeds;
use dirflow_cli::{emit_plot_data, preset, run_scenario, run_suite, BatchSummary, ExperimentConfig, PRESETS, SUITES};

#[derive(Parser)]
#[command(name = "dirflow", version, about = "Distributed gradient controllers over directed networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the batch described by a JSON (or .toml) config.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a bundled preset: formation4, formation6 or matching.
    Preset {
        name: String,
        /// Override the number of seeds.
        #[arg(long)]
        seeds: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Print the preset config instead of running it.
        #[arg(long)]
        print: bool,
    },
    /// Run a property suite: gbar, graph, gradient, assignment, descent, attraction.
    Validate {
        suite: String,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Regenerate the plot CSVs from a summary.json.
    PlotData {
        summary: PathBuf,
        /// Defaults to the summary's directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run_batch(cfg: &ExperimentConfig, out: &Path) -> Result<()> {
    let batch = run_scenario(cfg)?;
    batch.write(out).with_context(|| format!("writing results to {}", out.display()))?;
    for g in &batch.summary.groups {
        let mut line = format!("{:<12} {:<9} runs {:>3}  converged {:>3}  incomplete {:>3}", g.case, g.method.name(), g.runs, g.converged, g.incomplete);
        if let Some(b) = &g.formation_error {
            line += &format!("  median error {:.4}", b.median);
        }
        if let Some(b) = &g.input_norm {
            line += &format!("  median |u| {:.3e}", b.median);
        }
        if let (Some(m), Some(f)) = (g.mean_pairs, g.full_match_rate) {
            line += &format!("  mean pairs {m:.2}  full matches {:.0}%", 100.0 * f);
        }
        println!("{line}");
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            run_batch(&cfg, &out)?;
        }
        Command::Preset { name, seeds, out, print } => {
            let Some(mut cfg) = preset(&name) else {
                bail!("unknown preset `{name}` (expected one of {})", PRESETS.join(", "));
            };
            if let Some(s) = seeds {
                cfg.seeds = Seeds::Count(s);
            }
            if print {
                println!("{}", cfg.to_json());
            } else {
                run_batch(&cfg, &out)?;
            }
        }
        Command::Validate { suite, samples, seed } => {
            let Some(report) = run_suite(&suite, samples, seed) else {
                bail!("unknown suite `{suite}` (expected one of {})", SUITES.join(", "));
            };
            println!("{report}");
            if !report.passed() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::PlotData { summary, out } => {
            let text = std::fs::read_to_string(&summary).with_context(|| format!("reading {}", summary.display()))?;
            let parsed = BatchSummary::from_json(&text).context("parsing summary")?;
            let dir = out.unwrap_or_else(|| summary.parent().map(PathBuf::from).unwrap_or_default());
            for path in emit_plot_data(&parsed, &dir)? {
                println!("wrote {}", path.display());
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
