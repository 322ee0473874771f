//! Monte Carlo driver: configuration, the three experiments, aggregation
//! and CSV output.

mod config;
mod coverage;
mod energy;
mod output;
mod stats;
mod traffic;

use std::path::{Path, PathBuf};

pub use config::{ChannelConfig, EnergyConfig, ExperimentConfig, PlatformConfig, ScenarioConfig, TrafficConfig};
pub use coverage::{run_coverage_experiment, CoverageReport, CoverageRow, CoverageSummaryRow, SINGLE_PLATFORMS};
pub use energy::{run_energy_experiment, EnergyRatioRow, EnergyReport, EnergyRow};
pub use stats::{aggregate, AggregateReport, Z_95};
pub use traffic::{run_traffic_experiment, TrafficReport, TrafficRow, TrafficSummaryRow, TrafficTrial};

use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Coverage,
    Energy,
    Traffic,
}

/// Run one experiment and write its CSVs (and optionally a gnuplot script)
/// into `dir`. Returns the written paths.
pub fn run_to_dir(experiment: Experiment, cfg: &ExperimentConfig, dir: &Path, emit_gnuplot: bool) -> Result<Vec<PathBuf>> {
    let mut paths = match experiment {
        Experiment::Coverage => {
            let r = run_coverage_experiment(cfg)?;
            let mut p = r.write(dir)?;
            if emit_gnuplot {
                p.push(r.write_gnuplot(dir)?);
            }
            p
        }
        Experiment::Energy => {
            let r = run_energy_experiment(cfg)?;
            let mut p = r.write(dir)?;
            if emit_gnuplot {
                p.push(r.write_gnuplot(dir)?);
            }
            p
        }
        Experiment::Traffic => {
            let r = run_traffic_experiment(cfg)?;
            let mut p = r.write(dir)?;
            if emit_gnuplot {
                p.push(r.write_gnuplot(dir)?);
            }
            p
        }
    };
    paths.sort();
    Ok(paths)
}
