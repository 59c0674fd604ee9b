use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use coexsim_cli::{run, write_error_record, Command, Overrides, RunConfig};
use coexsim_core::AllocationMethod;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandName {
    SinrSweep,
    CdfSingle,
    Allocate,
    DensityPlan,
    Verify,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    /// Per-CBSD sweep.
    Method1,
    /// Per-sector sweep.
    Method2,
}

/// CBRS downlink interference at a shipborne radar: SINR distributions,
/// protection-distance sweeps and CBSD power planning.
#[derive(Debug, Parser)]
#[command(name = "coexsim", version)]
struct Args {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    #[arg(long, value_enum)]
    command: CommandName,
    /// Allocation method for `allocate` and `verify`.
    #[arg(long, value_enum, default_value = "method1")]
    method: Method,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Protection distance(s), km.
    #[arg(long = "r-min", value_delimiter = ',', num_args = 1..)]
    r_min: Vec<f64>,
    /// Target range(s), km.
    #[arg(long = "r-target", value_delimiter = ',', num_args = 1..)]
    r_target: Vec<f64>,
    /// Adjacent-channel rejection, dB.
    #[arg(long = "fdr-db", allow_hyphen_values = true)]
    fdr_db: Option<f64>,
    /// Fixed maximum tolerable interference, dBm.
    #[arg(long = "i-th-dbm", allow_hyphen_values = true)]
    i_th_dbm: Option<f64>,
    #[arg(long)]
    sectors: Option<usize>,
    #[arg(long = "power-step-db")]
    power_step_db: Option<f64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    let method = match args.method {
        Method::Method1 => AllocationMethod::PerCbsd,
        Method::Method2 => AllocationMethod::PerSector,
    };
    let command = match args.command {
        CommandName::SinrSweep => Command::SinrSweep,
        CommandName::CdfSingle => Command::CdfSingle,
        CommandName::Allocate => Command::Allocate { method },
        CommandName::DensityPlan => Command::DensityPlan,
        CommandName::Verify => Command::Verify { method },
    };
    let rc = RunConfig {
        config_path: args.config,
        command,
        out_dir: args.out,
        trials: args.trials,
        seed: args.seed,
        overrides: Overrides {
            r_min_km: args.r_min,
            r_target_km: args.r_target,
            fdr_db: args.fdr_db,
            i_th_dbm: args.i_th_dbm,
            sectors: args.sectors,
            power_step_db: args.power_step_db,
        },
    };
    match run(&rc) {
        Ok(summary) => {
            if !summary.feasible {
                log::warn!("allocation infeasible for this configuration");
            }
            for f in &summary.files {
                println!("{}", rc.out_dir.join(f).display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            write_error_record(&rc.out_dir, &e);
            ExitCode::from(2)
        }
    }
}
