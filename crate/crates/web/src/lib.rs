//! Browser bindings for the interactive demo page in `www/`.
//!
//! Every export returns a JSON string. The `*_json` functions carry the
//! logic and are callable from native code.

use rabs_core::channel::{coverage_radius, PathLossModel};
use rabs_core::harness::ExperimentConfig;
use rabs_core::placement::{place_in_region, select_sites_greedy};
use rabs_core::platform::{feasible_horizontal_region, Region};
use rabs_core::scenario::{generate_users, Point2, SeedSpec};
use rabs_core::traffic::{generate_traffic, simulate_day};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn point(p: &Point2) -> Value {
    json!([p.x, p.y])
}

fn demo_config(altitude_m: f64, threshold_db: f64) -> Result<ExperimentConfig, String> {
    let mut cfg = ExperimentConfig::default();
    cfg.platform.altitude_m = altitude_m;
    cfg.channel.threshold_db = threshold_db;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

/// Mean path loss of the aerial and lamppost links over `[1, max_distance_m]`,
/// plus both coverage radii.
pub fn path_loss_curves_json(altitude_m: f64, threshold_db: f64, max_distance_m: f64, points: usize) -> Result<String, String> {
    let cfg = demo_config(altitude_m, threshold_db)?;
    if max_distance_m.is_nan() || max_distance_m <= 1.0 || points < 2 {
        return Err("need max distance > 1 m and at least 2 points".into());
    }
    let atg = cfg.channel.atg_link(altitude_m, &cfg.scenario);
    let umi = cfg.channel.umi_link(&cfg.scenario);
    let rule = cfg.channel.rule();
    let step = (max_distance_m - 1.0) / (points - 1) as f64;
    let d: Vec<f64> = (0..points).map(|i| 1.0 + i as f64 * step).collect();
    let curve = |m: &dyn PathLossModel| -> Result<Vec<f64>, String> {
        d.iter().map(|&x| m.path_loss_db(x).map_err(|e| e.to_string())).collect()
    };
    let ra = coverage_radius(&atg, &rule).map_err(|e| e.to_string())?;
    let ru = coverage_radius(&umi, &rule).map_err(|e| e.to_string())?;
    Ok(json!({
        "distance_m": d,
        "aerial_db": curve(&atg)?,
        "lamppost_db": curve(&umi)?,
        "threshold_db": threshold_db,
        "aerial_radius_m": ra.radius_m,
        "lamppost_radius_m": ru.radius_m,
    })
    .to_string())
}

/// One user drop with the hovering, tethered and laser placements and a
/// greedy swarm of `rabs_k` RABSs.
pub fn coverage_demo_json(seed: u64, users: usize, altitude_m: f64, threshold_db: f64, rabs_k: usize) -> Result<String, String> {
    let mut cfg = demo_config(altitude_m, threshold_db)?;
    cfg.scenario.users = users;
    cfg.validate().map_err(|e| e.to_string())?;
    let err = |e: rabs_core::Error| e.to_string();
    let rule = cfg.channel.rule();
    let aerial = coverage_radius(&cfg.channel.atg_link(altitude_m, &cfg.scenario), &rule).map_err(err)?;
    let lamppost = coverage_radius(&cfg.channel.umi_link(&cfg.scenario), &rule).map_err(err)?;
    let drop = generate_users(&cfg.scenario.area, users, SeedSpec::new(seed, 0));
    let grid = cfg.scenario.site_grid().map_err(err)?;

    let mut platforms = Vec::new();
    for kind in [cfg.platform.hovering(), cfg.platform.tethered(), cfg.platform.laser()] {
        let region = feasible_horizontal_region(&kind).map_err(err)?;
        let placed = if aerial.degenerate {
            None
        } else {
            Some(place_in_region(&region, &drop, aerial.radius_m, 1).map_err(err)?)
        };
        let region_json = match region {
            Region::Disk { center, radius_m } => json!({ "center": point(&center), "radius_m": radius_m }),
            _ => Value::Null,
        };
        platforms.push(json!({
            "name": kind.name(),
            "position": placed.as_ref().map(|p| point(&p.positions[0])),
            "covered": placed.as_ref().map_or(Vec::new(), |p| p.covered.clone()),
            "region": region_json,
        }));
    }
    let rabs = if lamppost.degenerate || rabs_k == 0 {
        None
    } else {
        Some(select_sites_greedy(&drop, lamppost.radius_m, &grid, rabs_k.min(grid.len())).map_err(err)?)
    };
    Ok(json!({
        "area": [cfg.scenario.area.width_m, cfg.scenario.area.height_m],
        "users": drop.positions.iter().map(point).collect::<Vec<_>>(),
        "aerial_radius_m": aerial.radius_m,
        "lamppost_radius_m": lamppost.radius_m,
        "platforms": platforms,
        "rabs": {
            "sites": rabs.as_ref().map_or(Vec::new(), |p| p.positions.iter().map(point).collect()),
            "covered": rabs.as_ref().map_or(Vec::new(), |p| p.covered.clone()),
        },
    })
    .to_string())
}

/// A seeded demand day with RABS and micro BS placements for every epoch.
pub fn traffic_demo_json(seed: u64, k_rabs: usize, k_micro: usize) -> Result<String, String> {
    let cfg = ExperimentConfig::default();
    let err = |e: rabs_core::Error| e.to_string();
    let grid = cfg.scenario.site_grid().map_err(err)?;
    let t = &cfg.traffic;
    let field = generate_traffic(&grid, &t.demand, t.epochs, SeedSpec::new(seed, 0)).map_err(err)?;
    let day = simulate_day(&field, k_rabs, k_micro, &t.service).map_err(err)?;
    let sites = |idx: &[usize]| idx.iter().map(|&i| point(&grid.ground(i))).collect::<Vec<_>>();
    let epochs: Vec<Value> = (0..field.epochs)
        .map(|e| {
            json!({
                "demand_mbps": field.epoch(e),
                "rabs_sites": sites(&day.rabs.sites[e]),
                "micro_sites": sites(&day.micro.sites[e]),
                "rabs_served_mbps": day.rabs.served_mbps[e],
                "micro_served_mbps": day.micro.served_mbps[e],
            })
        })
        .collect();
    Ok(json!({
        "columns": grid.columns,
        "rows": grid.rows,
        "spacing_m": grid.spacing_m,
        "serving_radius_m": t.service.serving_radius_m,
        "epochs": epochs,
        "rabs_cumulative_mbps": day.rabs.cumulative_mbps,
        "micro_cumulative_mbps": day.micro.cumulative_mbps,
        "ratio": day.ratio(),
    })
    .to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn path_loss_curves(altitude_m: f64, threshold_db: f64, max_distance_m: f64, points: usize) -> Result<String, JsValue> {
    js(path_loss_curves_json(altitude_m, threshold_db, max_distance_m, points))
}

#[wasm_bindgen]
pub fn coverage_demo(seed: u32, users: usize, altitude_m: f64, threshold_db: f64, rabs_k: usize) -> Result<String, JsValue> {
    js(coverage_demo_json(seed as u64, users, altitude_m, threshold_db, rabs_k))
}

#[wasm_bindgen]
pub fn traffic_demo(seed: u32, k_rabs: usize, k_micro: usize) -> Result<String, JsValue> {
    js(traffic_demo_json(seed as u64, k_rabs, k_micro))
}
