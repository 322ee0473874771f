use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ExperimentConfig;
use super::output::{write_csv, write_text};
use crate::energy::{day_energy, efficiency_ratio, LedgerEntry};
use crate::platform::{feasible_horizontal_region, PlatformKind};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyRow {
    pub platform: &'static str,
    pub n: usize,
    pub gripper_w: f64,
    pub propulsion_wh: f64,
    pub grasp_wh: f64,
    pub comm_wh: f64,
    pub overhead_wh: f64,
    pub total_wh: f64,
    pub recharges: u64,
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyRatioRow {
    pub reference: &'static str,
    pub reference_wh: f64,
    pub rabs_n: usize,
    pub rabs_gripper_w: f64,
    pub rabs_wh: f64,
    pub ratio: f64,
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct EnergyReport {
    pub references: Vec<LedgerEntry>,
    pub rabs: Vec<LedgerEntry>,
    pub rows: Vec<EnergyRow>,
    pub ratios: Vec<EnergyRatioRow>,
}

impl EnergyReport {
    pub fn ledger(&self, platform: &str, n: usize, gripper_w: f64) -> Option<&LedgerEntry> {
        self.references
            .iter()
            .chain(&self.rabs)
            .find(|e| e.platform == platform && e.n == n && e.gripper_w == gripper_w)
    }

    pub fn ratio(&self, reference: &str, rabs_n: usize, rabs_gripper_w: f64) -> Option<f64> {
        self.ratios
            .iter()
            .find(|r| r.reference == reference && r.rabs_n == rabs_n && r.rabs_gripper_w == rabs_gripper_w)
            .map(|r| r.ratio)
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        Ok(vec![
            write_csv(dir, "energy.csv", &self.rows)?,
            write_csv(dir, "energy_summary.csv", &self.ratios)?,
        ])
    }

    pub fn write_gnuplot(&self, dir: &Path) -> Result<PathBuf> {
        let s = "set datafile separator ','\n\
                 set terminal pngcairo size 800,500\n\
                 set output 'energy.png'\n\
                 set ylabel 'energy over the horizon (Wh)'\n\
                 set logscale y\n\
                 set style fill solid 0.6\n\
                 set boxwidth 0.7\n\
                 set xtics rotate by -30\n\
                 plot 'energy.csv' every ::1 using 0:8:xtic(sprintf('%s x%d, %g W', strcol(1), $2, $3)) \
                 with boxes notitle\n";
        write_text(dir, "energy.gp", s)
    }
}

fn row(e: &LedgerEntry, hash: &str, seed: u64) -> EnergyRow {
    EnergyRow {
        platform: e.platform,
        n: e.n,
        gripper_w: e.gripper_w,
        propulsion_wh: e.propulsion_wh,
        grasp_wh: e.grasp_wh,
        comm_wh: e.comm_wh,
        overhead_wh: e.delivery_overhead_wh,
        total_wh: e.total_wh,
        recharges: e.recharge_count,
        config_hash: hash.to_owned(),
        seed,
    }
}

/// Daily ledgers of one hovering, tethered and laser platform against every
/// configured RABS swarm size and gripper draw.
pub fn run_energy_experiment(cfg: &ExperimentConfig) -> Result<EnergyReport> {
    cfg.validate()?;
    let hash = cfg.config_hash();
    let seed = cfg.master_seed;
    let plan = &cfg.energy.plan;
    let aux = cfg.energy_aux();
    let profile = cfg.platform.power;
    feasible_horizontal_region(&cfg.platform.laser())?;

    let references = [cfg.platform.hovering(), cfg.platform.tethered(), cfg.platform.laser()]
        .iter()
        .map(|kind| day_energy(kind, 1, &profile, plan, &aux))
        .collect::<Result<Vec<_>>>()?;

    let rabs_kind = PlatformKind::Rabs {
        grid: cfg.scenario.site_grid()?,
    };
    let mut rabs = Vec::new();
    for &n in &cfg.energy.swarm_sizes {
        for &g in &cfg.energy.gripper_w {
            rabs.push(day_energy(&rabs_kind, n, &profile.with_grasp(g), plan, &aux)?);
        }
    }

    let mut ratios = Vec::new();
    for reference in &references {
        for r in &rabs {
            ratios.push(EnergyRatioRow {
                reference: reference.platform,
                reference_wh: reference.total_wh,
                rabs_n: r.n,
                rabs_gripper_w: r.gripper_w,
                rabs_wh: r.total_wh,
                ratio: efficiency_ratio(reference, r)?,
                config_hash: hash.clone(),
                seed,
            });
        }
    }
    let rows = references.iter().chain(&rabs).map(|e| row(e, &hash, seed)).collect();
    Ok(EnergyReport {
        references,
        rabs,
        rows,
        ratios,
    })
}
