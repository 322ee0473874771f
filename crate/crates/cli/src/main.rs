use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rabs_core::harness::{
    run_coverage_experiment, run_energy_experiment, run_traffic_experiment, ExperimentConfig,
    SINGLE_PLATFORMS,
};
use rabs_core::Error;

/// Robotic aerial base station simulator.
#[derive(Parser, Debug)]
#[command(name = "rabs-sim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coverage of hovering, tethered, laser-powered and perched platforms.
    Coverage(RunArgs),
    /// 24 h energy ledgers and efficiency ratios.
    Energy(RunArgs),
    /// Served traffic of relocating RABSs against fixed micro BSs.
    Traffic(RunArgs),
}

#[derive(Args, Debug)]
struct RunArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; overrides RABS_SIM_OUT and the config file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a gnuplot script next to the CSVs.
    #[arg(long)]
    emit_gnuplot: bool,
}

const OUT_ENV: &str = "RABS_SIM_OUT";

fn load(args: &RunArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::load(&args.config)?;
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    }
    if let Some(dir) = std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()) {
        cfg.output_dir = PathBuf::from(dir);
    }
    if let Some(dir) = &args.out {
        cfg.output_dir = dir.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn report_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(command: &Command) -> Result<(), Error> {
    match command {
        Command::Coverage(args) => {
            let cfg = load(args)?;
            let dir: &Path = &cfg.output_dir;
            let r = run_coverage_experiment(&cfg)?;
            let mut paths = r.write(dir)?;
            if args.emit_gnuplot {
                paths.push(r.write_gnuplot(dir)?);
            }
            report_paths(&paths);
            println!(
                "coverage radius: aerial {:.2} m, RABS {:.2} m",
                r.aerial_radius.radius_m, r.rabs_radius.radius_m
            );
            for p in SINGLE_PLATFORMS {
                let mean = r.mean(p, 1).unwrap_or(f64::NAN);
                match r.crossover(p) {
                    Some(k) => println!("{p}: mean coverage {mean:.4}, matched by {k} RABSs"),
                    None => println!("{p}: mean coverage {mean:.4}, not matched by the evaluated RABS counts"),
                }
            }
        }
        Command::Energy(args) => {
            let cfg = load(args)?;
            let dir: &Path = &cfg.output_dir;
            let r = run_energy_experiment(&cfg)?;
            let mut paths = r.write(dir)?;
            if args.emit_gnuplot {
                paths.push(r.write_gnuplot(dir)?);
            }
            report_paths(&paths);
            for e in r.references.iter().chain(&r.rabs) {
                println!(
                    "{} x{} (gripper {} W): {:.1} Wh, {} recharges per unit",
                    e.platform, e.n, e.gripper_w, e.total_wh, e.recharge_count
                );
            }
        }
        Command::Traffic(args) => {
            let cfg = load(args)?;
            let dir: &Path = &cfg.output_dir;
            let r = run_traffic_experiment(&cfg)?;
            let mut paths = r.write(dir)?;
            if args.emit_gnuplot {
                paths.push(r.write_gnuplot(dir)?);
            }
            report_paths(&paths);
            for &(kr, km) in &r.pairs {
                if let Some(s) = r.ratio_summary(kr, km) {
                    println!(
                        "RABS({kr}) / micro({km}) cumulative traffic ratio: {:.3} ± {:.3} (95% CI, n = {})",
                        s.mean, s.ci95_half_width, s.n
                    );
                }
            }
        }
    }
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    if e.is_config() {
        2
    } else if e.is_infeasible() {
        3
    } else {
        1
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
