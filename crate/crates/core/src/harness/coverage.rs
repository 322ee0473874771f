use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::output::{write_csv, write_text};
use super::stats::{aggregate, AggregateReport};
use crate::channel::{coverage_radius, CoverageRadius};
use crate::placement::{greedy_site_order, place_in_region};
use crate::platform::{feasible_horizontal_region, Region};
use crate::scenario::{generate_users, SeedSpec};
use crate::Result;

pub const SINGLE_PLATFORMS: [&str; 3] = ["hovering", "tethered", "laser"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageRow {
    pub trial: usize,
    pub platform: &'static str,
    pub k: usize,
    pub covered: usize,
    pub coverage_fraction: f64,
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageSummaryRow {
    pub platform: &'static str,
    pub k: usize,
    pub n: usize,
    pub mean: f64,
    pub stddev: f64,
    pub ci95_half_width: f64,
    pub min: f64,
    pub max: f64,
    pub degenerate: bool,
    pub config_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub aerial_radius: CoverageRadius,
    pub rabs_radius: CoverageRadius,
    /// Horizontal service radius of the tethered and laser platforms.
    pub tethered_reach_m: f64,
    pub laser_reach_m: f64,
    /// Sorted by trial, then platform, then k.
    pub rows: Vec<CoverageRow>,
    pub summary: Vec<CoverageSummaryRow>,
}

impl CoverageReport {
    pub fn mean(&self, platform: &str, k: usize) -> Option<f64> {
        self.summary
            .iter()
            .find(|s| s.platform == platform && s.k == k)
            .map(|s| s.mean)
    }

    /// Per-trial coverage fractions of one platform configuration.
    pub fn fractions(&self, platform: &str, k: usize) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.platform == platform && r.k == k)
            .map(|r| r.coverage_fraction)
            .collect()
    }

    /// Smallest evaluated RABS count whose mean coverage reaches that of `reference`.
    pub fn crossover(&self, reference: &str) -> Option<usize> {
        let target = self.mean(reference, 1)?;
        self.summary
            .iter()
            .filter(|s| s.platform == "rabs" && s.mean >= target)
            .map(|s| s.k)
            .min()
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        Ok(vec![
            write_csv(dir, "coverage.csv", &self.rows)?,
            write_csv(dir, "coverage_summary.csv", &self.summary)?,
        ])
    }

    pub fn write_gnuplot(&self, dir: &Path) -> Result<PathBuf> {
        let mut s = String::from(
            "set datafile separator ','\n\
             set terminal pngcairo size 800,500\n\
             set output 'coverage.png'\n\
             set xlabel 'number of RABSs'\n\
             set ylabel 'mean coverage'\n\
             set yrange [0:1.05]\n\
             set key bottom right\n\
             plot 'coverage_summary.csv' every ::1 using 2:(strcol(1) eq 'rabs' ? $4 : 1/0):6 \
             with yerrorlines title 'RABS'",
        );
        for p in SINGLE_PLATFORMS {
            if let Some(m) = self.mean(p, 1) {
                s.push_str(&format!(", {m} with lines title '{p}'"));
            }
        }
        s.push('\n');
        write_text(dir, "coverage.gp", &s)
    }
}

fn region_reach(region: &Region<'_>) -> f64 {
    match region {
        Region::Disk { radius_m, .. } => *radius_m,
        _ => f64::INFINITY,
    }
}

/// Coverage of a single hovering, tethered and laser platform and of greedy
/// RABS swarms on fresh user drops.
pub fn run_coverage_experiment(cfg: &ExperimentConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let hash = cfg.config_hash();
    let seed = cfg.master_seed;
    let sc = &cfg.scenario;
    let rule = cfg.channel.rule();
    let aerial_radius = coverage_radius(&cfg.channel.atg_link(cfg.platform.altitude_m, sc), &rule)?;
    let rabs_radius = coverage_radius(&cfg.channel.umi_link(sc), &rule)?;

    let hovering = cfg.platform.hovering();
    let tethered = cfg.platform.tethered();
    let laser = cfg.platform.laser();
    let regions = [
        feasible_horizontal_region(&hovering)?,
        feasible_horizontal_region(&tethered)?,
        feasible_horizontal_region(&laser)?,
    ];
    let grid = sc.site_grid()?;
    let mut ks = cfg.platform.rabs_counts.clone();
    ks.sort_unstable();
    ks.dedup();
    let k_max = ks.last().copied().unwrap_or(1).min(grid.len());
    log::info!(
        "coverage: aerial radius {:.2} m, RABS radius {:.2} m, {} trials",
        aerial_radius.radius_m,
        rabs_radius.radius_m,
        cfg.trials
    );

    let per_trial: Vec<Vec<CoverageRow>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| -> Result<Vec<CoverageRow>> {
            let mut users = generate_users(&sc.area, sc.users, SeedSpec::new(seed, trial as u64));
            users.user_height_m = sc.user_height_m;
            let n = users.len() as f64;
            let row = |platform, k, covered: usize| CoverageRow {
                trial,
                platform,
                k,
                covered,
                coverage_fraction: covered as f64 / n,
                config_hash: hash.clone(),
                seed,
            };
            let mut rows = Vec::with_capacity(SINGLE_PLATFORMS.len() + ks.len());
            for (name, region) in SINGLE_PLATFORMS.iter().zip(&regions) {
                let covered = if aerial_radius.degenerate {
                    0
                } else {
                    place_in_region(region, &users, aerial_radius.radius_m, 1)?.covered_count()
                };
                rows.push(row(*name, 1, covered));
            }
            let gains = if rabs_radius.degenerate {
                Vec::new()
            } else {
                greedy_site_order(&users, rabs_radius.radius_m, &grid, k_max)?.1
            };
            for &k in &ks {
                let covered = gains.iter().take(k).sum();
                rows.push(row("rabs", k, covered));
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let rows: Vec<CoverageRow> = per_trial.into_iter().flatten().collect();

    let mut groups: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    let order = |p: &str| SINGLE_PLATFORMS.iter().position(|s| *s == p).unwrap_or(SINGLE_PLATFORMS.len());
    for r in &rows {
        groups.entry((order(r.platform), r.k)).or_default().push(r.coverage_fraction);
    }
    let summary = groups
        .into_iter()
        .map(|((p, k), xs)| {
            let a: AggregateReport = aggregate(&xs)?;
            Ok(CoverageSummaryRow {
                platform: SINGLE_PLATFORMS.get(p).copied().unwrap_or("rabs"),
                k,
                n: a.n,
                mean: a.mean,
                stddev: a.stddev,
                ci95_half_width: a.ci95_half_width,
                min: a.min,
                max: a.max,
                degenerate: a.degenerate,
                config_hash: hash.clone(),
                seed,
            })
        })
        .collect::<Result<_>>()?;

    Ok(CoverageReport {
        aerial_radius,
        rabs_radius,
        tethered_reach_m: region_reach(&regions[1]),
        laser_reach_m: region_reach(&regions[2]),
        rows,
        summary,
    })
}
