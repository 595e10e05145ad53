//! `secrecy-lab` — parameter sweeps, MGF tables and Monte-Carlo validation
//! reports for the V2V secrecy-capacity model, emitted as CSV.
//!
//! Exit codes: 0 success, 1 validation failure, 2 bad configuration,
//! 3 numeric non-convergence.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use secrecy_lab::channel::SystemParams;
use secrecy_lab::cli::{
    cmd_mgf_table, cmd_sweep, cmd_validate, ConfigFile, MgfTableKind, SweepSpec, SweepVariable,
};
use secrecy_lab::error::{Error, Result};

#[derive(Parser)]
#[command(
    name = "secrecy-lab",
    about = "Average secrecy capacity of a V2V link under interference and double-Rayleigh fading",
    long_about = "Average secrecy capacity of a V2V link under interference and double-Rayleigh \
                  fading.\n\nUnits convention: powers in watts, distances in meters, capacities \
                  in bits/s/Hz. Output is CSV with a leading '#' comment line restating the \
                  units.\n\nExit codes: 0 success, 1 validation failure, 2 bad configuration, \
                  3 numeric non-convergence."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file with SystemParams fields and an optional sweep block
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output path, or '-' for stdout
    #[arg(long, default_value = "-")]
    out: String,

    /// Thread budget for sweeps and Monte-Carlo runs
    #[arg(long)]
    jobs: Option<usize>,

    /// RNG seed for Monte-Carlo estimates
    #[arg(long, env = "SECRECY_LAB_SEED")]
    seed: Option<u64>,

    /// Monte-Carlo sample count
    #[arg(long)]
    samples: Option<u64>,

    /// Source transmit power P_s (W)
    #[arg(long)]
    ps: Option<f64>,

    /// Per-interferer transmit power P_K (W)
    #[arg(long)]
    pk: Option<f64>,

    /// Number of interferers K
    #[arg(long)]
    k: Option<usize>,

    /// Source-to-destination distance r_D (m)
    #[arg(long)]
    rd: Option<f64>,

    /// Maximum eavesdropper radius r_max (m)
    #[arg(long)]
    rmax: Option<f64>,

    /// Maximum interferer radius R (m)
    #[arg(long)]
    rint: Option<f64>,

    /// Path-loss exponent (must exceed 2)
    #[arg(long)]
    beta: Option<f64>,

    /// Noise power N_0 (W)
    #[arg(long)]
    n0: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep one parameter and emit analytic (and optionally Monte-Carlo)
    /// secrecy capacities per value
    Sweep {
        #[command(flatten)]
        common: CommonArgs,

        /// Variable to sweep: k, r_d, p_s, r_max, r_int, n_0 or beta
        #[arg(long)]
        variable: Option<String>,

        /// Comma-separated, strictly increasing sweep values
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,

        /// Attach a Monte-Carlo cross-check to every sweep point
        #[arg(long)]
        mc_check: bool,
    },

    /// Tabulate one MGF over a z-grid as z,value,method rows
    MgfTable {
        #[command(flatten)]
        common: CommonArgs,

        /// Which MGF: psi, interference, main or eavesdropper
        #[arg(long)]
        which: String,

        /// Comma-separated nonnegative z values
        #[arg(long, value_delimiter = ',')]
        z: Vec<f64>,
    },

    /// Run the analytic pipeline against the Monte-Carlo oracle and report
    /// per-quantity sigma distances
    Validate {
        #[command(flatten)]
        common: CommonArgs,
    },
}

struct Resolved {
    params: SystemParams,
    config: ConfigFile,
    out: String,
    seed: u64,
    samples: u64,
}

fn resolve(common: &CommonArgs) -> Result<Resolved> {
    let config = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::InvalidConfig(format!("cannot read config {}: {e}", path.display()))
            })?;
            ConfigFile::parse(&text)?
        }
        None => ConfigFile::default(),
    };
    let mut params = config.apply_params(SystemParams::default());
    if let Some(v) = common.ps {
        params.p_s = v;
    }
    if let Some(v) = common.pk {
        params.p_k = v;
    }
    if let Some(v) = common.k {
        params.k = v;
    }
    if let Some(v) = common.rd {
        params.r_d = v;
    }
    if let Some(v) = common.rmax {
        params.r_max = v;
    }
    if let Some(v) = common.rint {
        params.r_int = v;
    }
    if let Some(v) = common.beta {
        params.beta = v;
    }
    if let Some(v) = common.n0 {
        params.n_0 = v;
    }
    params.validate()?;

    let file_seed = config.sweep.as_ref().and_then(|s| s.seed);
    let file_samples = config.sweep.as_ref().and_then(|s| s.mc_samples);
    Ok(Resolved {
        params,
        out: common.out.clone(),
        seed: common.seed.or(file_seed).unwrap_or(0),
        samples: common.samples.or(file_samples).unwrap_or(1_000_000),
        config,
    })
}

fn write_output(path: &str, bytes: &[u8]) -> Result<()> {
    if path == "-" {
        std::io::stdout().write_all(bytes)?;
    } else {
        fs::write(path, bytes)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    let common = match &cli.command {
        Command::Sweep { common, .. } => common,
        Command::MgfTable { common, .. } => common,
        Command::Validate { common } => common,
    };
    if let Some(jobs) = common.jobs {
        // ignore the error if a pool already exists (tests call run() twice)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    let resolved = resolve(common)?;
    let mut buf: Vec<u8> = Vec::new();

    let passed = match &cli.command {
        Command::Sweep {
            variable,
            values,
            mc_check,
            ..
        } => {
            let file_sweep = resolved.config.sweep.as_ref();
            let variable = variable
                .clone()
                .or_else(|| file_sweep.map(|s| s.variable.clone()))
                .ok_or_else(|| {
                    Error::InvalidConfig("sweep requires --variable or a config sweep block".into())
                })?;
            let values = values
                .clone()
                .or_else(|| file_sweep.map(|s| s.values.clone()))
                .ok_or_else(|| {
                    Error::InvalidConfig("sweep requires --values or a config sweep block".into())
                })?;
            let spec = SweepSpec {
                variable: variable.parse::<SweepVariable>()?,
                values,
                fixed: resolved.params,
                mc_check: *mc_check
                    || file_sweep.and_then(|s| s.mc_check).unwrap_or(false),
                mc_samples: resolved.samples,
                seed: resolved.seed,
            };
            cmd_sweep(&spec, &mut buf)?;
            true
        }
        Command::MgfTable { which, z, .. } => {
            cmd_mgf_table(which.parse::<MgfTableKind>()?, z, &resolved.params, &mut buf)?;
            true
        }
        Command::Validate { .. } => {
            let report = cmd_validate(&resolved.params, resolved.samples, resolved.seed, &mut buf)?;
            report.passed
        }
    };

    write_output(&resolved.out, &buf)?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
