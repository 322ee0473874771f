//! Day-long energy accounting per platform.
//!
//! Every ledger entry splits a swarm's energy into propulsion, grasping,
//! communication and delivery overhead (energy lost between the wall or the
//! laser director and the platform). Totals are always the sum of the parts.

use serde::{Deserialize, Serialize};

use crate::platform::{Battery, PlatformKind, PowerProfile};
use crate::{Error, Result};

const SECONDS_PER_HOUR: f64 = 3600.0;

/// Operating horizon and the relocation pattern of a perching swarm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DayPlan {
    pub horizon_h: f64,
    /// Share of the swarm that relocates every hour.
    pub relocation_fraction: f64,
    pub relocation_distance_m: f64,
    pub flight_speed_mps: f64,
}

impl Default for DayPlan {
    fn default() -> Self {
        Self {
            horizon_h: 24.0,
            relocation_fraction: 0.5,
            relocation_distance_m: 500.0,
            flight_speed_mps: 10.0,
        }
    }
}

impl DayPlan {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon_h > 0.0) {
            return Err(Error::Config(format!("horizon must be positive, got {}", self.horizon_h)));
        }
        if !(0.0..=1.0).contains(&self.relocation_fraction) {
            return Err(Error::Config(format!(
                "relocation fraction must be in [0, 1], got {}",
                self.relocation_fraction
            )));
        }
        if !(self.relocation_distance_m >= 0.0) {
            return Err(Error::Config("relocation distance must be >= 0".into()));
        }
        if !(self.flight_speed_mps > 0.0) {
            return Err(Error::Config(format!(
                "flight speed must be positive, got {}",
                self.flight_speed_mps
            )));
        }
        Ok(())
    }

    /// Hours spent flying per relocating unit per hour of operation.
    fn relocation_flight_h(&self) -> f64 {
        self.relocation_distance_m / self.flight_speed_mps / SECONDS_PER_HOUR
    }
}

/// Platform-independent inputs of the energy model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyAux {
    pub battery: Battery,
    /// Fraction of wall energy that reaches a tethered platform.
    pub tether_delivery_eff: f64,
    /// Extra energy charged per battery swap of a hovering platform.
    pub swap_overhead_wh: f64,
}

impl Default for EnergyAux {
    fn default() -> Self {
        Self {
            battery: Battery::default(),
            tether_delivery_eff: 0.8,
            swap_overhead_wh: 0.0,
        }
    }
}

impl EnergyAux {
    pub fn validate(&self) -> Result<()> {
        self.battery.validate()?;
        if !(self.tether_delivery_eff > 0.0 && self.tether_delivery_eff <= 1.0) {
            return Err(Error::Config(format!(
                "tether delivery efficiency must be in (0, 1], got {}",
                self.tether_delivery_eff
            )));
        }
        if !(self.swap_overhead_wh >= 0.0) {
            return Err(Error::Config("swap overhead must be >= 0".into()));
        }
        Ok(())
    }
}

/// Energy of `n` identical platforms over the plan horizon.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LedgerEntry {
    pub platform: &'static str,
    pub n: usize,
    pub gripper_w: f64,
    pub propulsion_wh: f64,
    pub grasp_wh: f64,
    pub comm_wh: f64,
    pub delivery_overhead_wh: f64,
    pub total_wh: f64,
    /// Battery swaps per unit over the horizon; zero for grid-fed platforms.
    pub recharge_count: u64,
}

impl LedgerEntry {
    fn new(
        platform: &'static str,
        n: usize,
        gripper_w: f64,
        [propulsion_wh, grasp_wh, comm_wh, delivery_overhead_wh]: [f64; 4],
    ) -> Self {
        Self {
            platform,
            n,
            gripper_w,
            propulsion_wh,
            grasp_wh,
            comm_wh,
            delivery_overhead_wh,
            total_wh: propulsion_wh + grasp_wh + comm_wh + delivery_overhead_wh,
            recharge_count: 0,
        }
    }

    pub fn per_unit_wh(&self) -> f64 {
        self.total_wh / self.n as f64
    }
}

/// Number of full battery charges contained in `total_wh`.
pub fn recharge_count(total_wh: f64, battery: &Battery) -> u64 {
    (total_wh / battery.energy_wh()).floor() as u64
}

/// 24 h (or `plan.horizon_h`) energy of a swarm of `n` platforms.
pub fn day_energy(
    kind: &PlatformKind,
    n: usize,
    profile: &PowerProfile,
    plan: &DayPlan,
    aux: &EnergyAux,
) -> Result<LedgerEntry> {
    if n == 0 {
        return Err(Error::Config("swarm size must be at least 1".into()));
    }
    plan.validate()?;
    aux.validate()?;
    let units = n as f64;
    let h = plan.horizon_h;
    let hover_wh = units * profile.hover_w * h;
    let comm_wh = units * profile.comm_w * h;

    let mut entry = match kind {
        PlatformKind::Hovering { .. } => {
            let per_unit = (profile.hover_w + profile.comm_w) * h;
            let swaps = recharge_count(per_unit, &aux.battery);
            let overhead = units * swaps as f64 * aux.swap_overhead_wh;
            let mut e = LedgerEntry::new(kind.name(), n, 0.0, [hover_wh, 0.0, comm_wh, overhead]);
            e.recharge_count = swaps;
            e
        }
        PlatformKind::Tethered { .. } => {
            let delivered = hover_wh + comm_wh;
            let overhead = delivered / aux.tether_delivery_eff - delivered;
            LedgerEntry::new(kind.name(), n, 0.0, [hover_wh, 0.0, comm_wh, overhead])
        }
        PlatformKind::LaserPowered { laser_tx_w, .. } => {
            if *laser_tx_w < profile.hover_w + profile.comm_w {
                return Err(Error::Infeasible(format!(
                    "laser of {laser_tx_w} W cannot feed a {} W platform",
                    profile.hover_w + profile.comm_w
                )));
            }
            let drawn = units * laser_tx_w * h;
            let overhead = drawn - hover_wh - comm_wh;
            LedgerEntry::new(kind.name(), n, 0.0, [hover_wh, 0.0, comm_wh, overhead])
        }
        PlatformKind::Rabs { .. } => {
            let relocating = plan.relocation_fraction * units;
            let propulsion = relocating * plan.relocation_flight_h() * profile.fly_w * h;
            let grasp = units * profile.grasp_w * h;
            let mut e = LedgerEntry::new(kind.name(), n, profile.grasp_w, [propulsion, grasp, comm_wh, 0.0]);
            e.recharge_count = recharge_count(e.per_unit_wh(), &aux.battery);
            e
        }
        PlatformKind::MicroBs { .. } => LedgerEntry::new(kind.name(), n, 0.0, [0.0, 0.0, comm_wh, 0.0]),
    };
    if !kind.is_battery_operated() {
        entry.recharge_count = 0;
    }
    Ok(entry)
}

/// How many times more energy `reference` uses than `rabs`.
pub fn efficiency_ratio(reference: &LedgerEntry, rabs: &LedgerEntry) -> Result<f64> {
    if !(rabs.total_wh > 0.0) {
        return Err(Error::Domain("RABS energy must be positive to form a ratio".into()));
    }
    Ok(reference.total_wh / rabs.total_wh)
}
