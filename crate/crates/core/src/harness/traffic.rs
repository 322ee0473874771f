use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::output::{write_csv, write_text};
use super::stats::aggregate;
use crate::scenario::SeedSpec;
use crate::traffic::{generate_traffic, micro_plan, rabs_plan, DeploymentPlan, ServiceMap};
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrafficRow {
    pub trial: usize,
    pub scheme: &'static str,
    pub k: usize,
    pub epoch: usize,
    pub served_mbps: f64,
    pub cumulative_mbps: f64,
    pub config_hash: String,
    pub seed: u64,
}

/// One aggregate line: either a cumulative-traffic point of a scheme
/// (`metric = cumulative_mbps`) or a final RABS/micro ratio (`metric = ratio`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrafficSummaryRow {
    pub metric: &'static str,
    pub scheme: &'static str,
    pub k: usize,
    pub k_micro: Option<usize>,
    pub epoch: Option<usize>,
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
pub struct TrafficTrial {
    pub rabs: BTreeMap<usize, DeploymentPlan>,
    pub micro: BTreeMap<usize, DeploymentPlan>,
}

impl TrafficTrial {
    pub fn ratio(&self, k_rabs: usize, k_micro: usize) -> f64 {
        self.rabs[&k_rabs].cumulative_served() / self.micro[&k_micro].cumulative_served()
    }
}

#[derive(Debug, Clone)]
pub struct TrafficReport {
    pub pairs: Vec<(usize, usize)>,
    pub trials: Vec<TrafficTrial>,
    pub rows: Vec<TrafficRow>,
    pub summary: Vec<TrafficSummaryRow>,
}

impl TrafficReport {
    pub fn ratio_summary(&self, k_rabs: usize, k_micro: usize) -> Option<&TrafficSummaryRow> {
        self.summary
            .iter()
            .find(|s| s.metric == "ratio" && s.k == k_rabs && s.k_micro == Some(k_micro))
    }

    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        Ok(vec![
            write_csv(dir, "traffic.csv", &self.rows)?,
            write_csv(dir, "traffic_summary.csv", &self.summary)?,
        ])
    }

    pub fn write_gnuplot(&self, dir: &Path) -> Result<PathBuf> {
        let mut s = String::from(
            "set datafile separator ','\n\
             set terminal pngcairo size 800,500\n\
             set output 'traffic.png'\n\
             set xlabel 'epoch (h)'\n\
             set ylabel 'cumulative served traffic (Mbps h)'\n\
             set key top left\n\
             plot ",
        );
        let mut curves = Vec::new();
        let schemes = [("rabs", self.trials.first().map(|t| t.rabs.keys().copied().collect::<Vec<_>>())),
            ("micro", self.trials.first().map(|t| t.micro.keys().copied().collect::<Vec<_>>()))];
        for (scheme, ks) in schemes {
            for k in ks.unwrap_or_default() {
                curves.push(format!(
                    "'traffic_summary.csv' every ::1 using \
                     (strcol(1) eq 'cumulative_mbps' && strcol(2) eq '{scheme}' && $3 == {k} ? $5 : 1/0):7:9 \
                     with yerrorlines title '{scheme} k={k}'"
                ));
            }
        }
        s.push_str(&curves.join(", \\\n     "));
        s.push('\n');
        write_text(dir, "traffic.gp", &s)
    }
}

/// Served traffic of RABSs re-placed every epoch against micro BSs fixed on
/// the day-averaged demand, on a fresh demand field per trial.
pub fn run_traffic_experiment(cfg: &ExperimentConfig) -> Result<TrafficReport> {
    cfg.validate()?;
    let hash = cfg.config_hash();
    let seed = cfg.master_seed;
    let t = &cfg.traffic;
    let grid = cfg.scenario.site_grid()?;
    let params = t.effective_demand();
    let map = ServiceMap::new(&grid, &t.service);
    let rabs_ks: BTreeSet<usize> = t.pairs.iter().map(|p| p.0).collect();
    let micro_ks: BTreeSet<usize> = t.pairs.iter().map(|p| p.1).collect();
    log::info!("traffic: {} trials, {} epochs, pairs {:?}", cfg.trials, t.epochs, t.pairs);

    let trials: Vec<TrafficTrial> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| -> Result<TrafficTrial> {
            let field = generate_traffic(&grid, &params, t.epochs, SeedSpec::new(seed, trial as u64))?;
            let rabs = rabs_ks
                .iter()
                .map(|&k| Ok((k, rabs_plan(&map, &field, k)?)))
                .collect::<Result<_>>()?;
            let micro = micro_ks
                .iter()
                .map(|&k| Ok((k, micro_plan(&map, &field, k)?)))
                .collect::<Result<_>>()?;
            Ok(TrafficTrial { rabs, micro })
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for (trial, tr) in trials.iter().enumerate() {
        for (scheme, plans) in [("rabs", &tr.rabs), ("micro", &tr.micro)] {
            for (&k, plan) in plans {
                for epoch in 0..plan.served_mbps.len() {
                    rows.push(TrafficRow {
                        trial,
                        scheme,
                        k,
                        epoch,
                        served_mbps: plan.served_mbps[epoch],
                        cumulative_mbps: plan.cumulative_mbps[epoch],
                        config_hash: hash.clone(),
                        seed,
                    });
                }
            }
        }
    }

    let summary_row = |metric, scheme, k, k_micro, epoch, xs: &[f64]| -> Result<TrafficSummaryRow> {
        let a = aggregate(xs)?;
        Ok(TrafficSummaryRow {
            metric,
            scheme,
            k,
            k_micro,
            epoch,
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
    };
    let mut summary = Vec::new();
    for (scheme, ks) in [("rabs", &rabs_ks), ("micro", &micro_ks)] {
        for &k in ks {
            for epoch in 0..t.epochs {
                let xs: Vec<f64> = trials
                    .iter()
                    .map(|tr| {
                        let plans = if scheme == "rabs" { &tr.rabs } else { &tr.micro };
                        plans[&k].cumulative_mbps[epoch]
                    })
                    .collect();
                summary.push(summary_row("cumulative_mbps", scheme, k, None, Some(epoch), &xs)?);
            }
        }
    }
    for &(kr, km) in &t.pairs {
        let xs: Vec<f64> = trials.iter().map(|tr| tr.ratio(kr, km)).collect();
        let s = summary_row("ratio", "rabs/micro", kr, Some(km), None, &xs)?;
        log::info!(
            "traffic: RABS({kr})/micro({km}) cumulative ratio {:.3} ± {:.3}",
            s.mean,
            s.ci95_half_width
        );
        summary.push(s);
    }

    Ok(TrafficReport {
        pairs: t.pairs.clone(),
        trials,
        rows,
        summary,
    })
}
