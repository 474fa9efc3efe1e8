use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use holeflux::experiments::{
    run_all, run_circle_check, run_cover_equivalence, run_flux_sweep, run_multiplicity_experiment, run_nodal,
    run_slit_infimum, write_verdicts, ExperimentConfig, Verdict,
};

#[derive(Parser)]
#[command(name = "holeflux", version, about = "Flux spectra, double covers and nodal sets on lattices with holes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; overrides the config's `output`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Repeat the slit study at half the spacing.
    #[arg(long, global = true)]
    grid_refine: bool,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// λ1..λm over a flux sweep
    Sweep,
    /// Exact circle spectrum and its half-flux degeneracy
    Circle,
    /// Slit-Dirichlet energies against the half-flux ground energy
    Slit,
    /// Half-flux ground multiplicity, with and without a symmetry-breaking bump
    Multiplicity,
    /// Spectra of the double cover against the magnetic operator
    Cover,
    /// Nodal sets of the half-flux ground states
    Nodal,
    /// Everything above
    All,
}

fn run(cli: &Cli) -> holeflux::Result<Vec<Verdict>> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| holeflux::Error::Config("--config is required".into()))?;
    let cfg = ExperimentConfig::from_path(path)?;
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.as_ref().map(|o| cfg.base_dir.join(o)))
        .unwrap_or_else(|| PathBuf::from("runs").join(&cfg.name));
    let refine = cli.grid_refine;
    let verdicts = match cli.command {
        Command::Sweep => run_flux_sweep(&cfg, &out)?.1,
        Command::Circle => run_circle_check(&cfg, &out)?.1,
        Command::Slit => run_slit_infimum(&cfg, &out, refine)?.1,
        Command::Multiplicity => run_multiplicity_experiment(&cfg, &out)?,
        Command::Cover => run_cover_equivalence(&cfg, &out)?.1,
        Command::Nodal => run_nodal(&cfg, &out)?.1,
        Command::All => run_all(&cfg, &out, refine)?,
    };
    write_verdicts(&out, &verdicts)?;
    Ok(verdicts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(verdicts) => {
            for v in &verdicts {
                println!("{}", v.line());
            }
            if verdicts.iter().all(Verdict::passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
