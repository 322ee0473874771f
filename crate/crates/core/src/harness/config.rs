use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::channel::{AtgLink, AtgParams, CoverageRule, UmiLink, UmiParams, WithMargin};
use crate::energy::{DayPlan, EnergyAux};
use crate::platform::{Battery, LaserLinkParams, PlatformKind, PowerProfile};
use crate::scenario::{generate_site_grid, AreaSpec, Point2, SiteGrid};
use crate::traffic::{ServiceParams, TrafficParams};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub area: AreaSpec,
    pub users: usize,
    pub user_height_m: f64,
    pub site_spacing_m: f64,
    pub site_height_m: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            area: AreaSpec::default(),
            users: 100,
            user_height_m: 1.5,
            site_spacing_m: 100.0,
            site_height_m: 7.0,
        }
    }
}

impl ScenarioConfig {
    pub fn site_grid(&self) -> Result<SiteGrid> {
        generate_site_grid(&self.area, self.site_spacing_m, self.site_height_m)
    }
}

/// Channel knobs shared by both path-loss models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub carrier_hz: f64,
    pub atg_a: f64,
    pub atg_b: f64,
    pub atg_eta_los_db: f64,
    pub atg_eta_nlos_db: f64,
    pub threshold_db: f64,
    /// Fade margin added to every path loss; 0 disables shadowing.
    pub shadowing_margin_db: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        let atg = AtgParams::URBAN;
        Self {
            carrier_hz: atg.carrier_hz,
            atg_a: atg.a,
            atg_b: atg.b,
            atg_eta_los_db: atg.eta_los_db,
            atg_eta_nlos_db: atg.eta_nlos_db,
            threshold_db: CoverageRule::default().threshold_db,
            shadowing_margin_db: 0.0,
        }
    }
}

impl ChannelConfig {
    pub fn atg_params(&self) -> AtgParams {
        AtgParams {
            a: self.atg_a,
            b: self.atg_b,
            eta_los_db: self.atg_eta_los_db,
            eta_nlos_db: self.atg_eta_nlos_db,
            carrier_hz: self.carrier_hz,
        }
    }

    pub fn rule(&self) -> CoverageRule {
        CoverageRule {
            threshold_db: self.threshold_db,
        }
    }

    pub fn atg_link(&self, tx_height_m: f64, scenario: &ScenarioConfig) -> WithMargin<AtgLink> {
        WithMargin {
            inner: AtgLink::new(self.atg_params(), tx_height_m, scenario.user_height_m),
            margin_db: self.shadowing_margin_db,
        }
    }

    /// Street-canyon link from a lamppost-mounted node down to a user.
    pub fn umi_link(&self, scenario: &ScenarioConfig) -> WithMargin<UmiLink> {
        WithMargin {
            inner: UmiLink::new(UmiParams {
                carrier_hz: self.carrier_hz,
                bs_height_m: scenario.site_height_m,
                ut_height_m: scenario.user_height_m,
            }),
            margin_db: self.shadowing_margin_db,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlatformConfig {
    /// Service altitude of the hovering, tethered and laser-powered platforms.
    pub altitude_m: f64,
    pub tether_anchor: Point2,
    pub cable_m: f64,
    pub laser_director: Point2,
    pub laser_tx_w: f64,
    pub laser_link: LaserLinkParams,
    pub power: PowerProfile,
    pub battery: Battery,
    /// Swarm sizes evaluated in the coverage study.
    pub rabs_counts: Vec<usize>,
}

impl Default for PlatformConfig {
    fn default() -> Self {
        Self {
            altitude_m: 100.0,
            tether_anchor: Point2::default(),
            cable_m: 150.0,
            laser_director: Point2::default(),
            laser_tx_w: 800.0,
            laser_link: LaserLinkParams::default(),
            power: PowerProfile::default(),
            battery: Battery::default(),
            rabs_counts: (1..=20).collect(),
        }
    }
}

impl PlatformConfig {
    pub fn hovering(&self) -> PlatformKind {
        PlatformKind::Hovering {
            altitude_m: self.altitude_m,
        }
    }

    pub fn tethered(&self) -> PlatformKind {
        PlatformKind::Tethered {
            anchor: self.tether_anchor,
            cable_m: self.cable_m,
            altitude_m: self.altitude_m,
        }
    }

    /// Laser platform drawing hover plus comm power.
    pub fn laser(&self) -> PlatformKind {
        PlatformKind::LaserPowered {
            director: self.laser_director,
            laser_tx_w: self.laser_tx_w,
            link: self.laser_link,
            demand_w: self.power.hover_w + self.power.comm_w,
            altitude_m: self.altitude_m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyConfig {
    pub plan: DayPlan,
    pub tether_delivery_eff: f64,
    pub swap_overhead_wh: f64,
    pub swarm_sizes: Vec<usize>,
    pub gripper_w: Vec<f64>,
}

impl Default for EnergyConfig {
    fn default() -> Self {
        let aux = EnergyAux::default();
        Self {
            plan: DayPlan::default(),
            tether_delivery_eff: aux.tether_delivery_eff,
            swap_overhead_wh: aux.swap_overhead_wh,
            swarm_sizes: vec![8, 10],
            gripper_w: vec![0.0, 5.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrafficConfig {
    pub demand: TrafficParams,
    pub service: ServiceParams,
    pub epochs: usize,
    /// `(k_rabs, k_micro)` comparisons.
    pub pairs: Vec<(usize, usize)>,
    /// Freeze the hotspots so every epoch carries the same demand.
    pub time_constant: bool,
}

impl Default for TrafficConfig {
    fn default() -> Self {
        Self {
            demand: TrafficParams::default(),
            service: ServiceParams::default(),
            epochs: 24,
            pairs: vec![(1, 1), (1, 4)],
            time_constant: false,
        }
    }
}

impl TrafficConfig {
    pub fn effective_demand(&self) -> TrafficParams {
        if self.time_constant {
            self.demand.time_constant()
        } else {
            self.demand
        }
    }
}

/// Everything one experiment run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub channel: ChannelConfig,
    pub platform: PlatformConfig,
    pub energy: EnergyConfig,
    pub traffic: TrafficConfig,
    pub trials: usize,
    pub master_seed: u64,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            channel: ChannelConfig::default(),
            platform: PlatformConfig::default(),
            energy: EnergyConfig::default(),
            traffic: TrafficConfig::default(),
            trials: 100,
            master_seed: 20_240_601,
            output_dir: PathBuf::from("out"),
        }
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Check every block against its model's invariants.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let s = &self.scenario;
        s.area.validate()?;
        if s.users == 0 {
            return Err(Error::Config("need at least one user".into()));
        }
        if !(s.user_height_m >= 0.0) {
            return Err(Error::Config("user height must be >= 0".into()));
        }
        s.site_grid()?;

        let c = &self.channel;
        c.atg_params().validate()?;
        c.rule().validate()?;
        UmiParams {
            carrier_hz: c.carrier_hz,
            bs_height_m: s.site_height_m,
            ut_height_m: s.user_height_m,
        }
        .validate()?;
        if !(c.shadowing_margin_db >= 0.0) {
            return Err(Error::Config("shadowing margin must be >= 0".into()));
        }

        let p = &self.platform;
        positive("altitude_m", p.altitude_m)?;
        if p.altitude_m <= s.user_height_m {
            return Err(Error::Config("platform altitude must exceed user height".into()));
        }
        positive("cable_m", p.cable_m)?;
        positive("laser_tx_w", p.laser_tx_w)?;
        p.laser_link.validate()?;
        p.power.validate()?;
        p.battery.validate()?;
        if p.rabs_counts.is_empty() || p.rabs_counts.contains(&0) {
            return Err(Error::Config("rabs_counts must be a non-empty list of positive counts".into()));
        }

        let e = &self.energy;
        e.plan.validate()?;
        self.energy_aux().validate()?;
        if e.swarm_sizes.is_empty() || e.swarm_sizes.contains(&0) {
            return Err(Error::Config("swarm_sizes must be a non-empty list of positive sizes".into()));
        }
        if e.gripper_w.is_empty() || e.gripper_w.iter().any(|g| !(*g >= 0.0) || *g > p.power.fly_w) {
            return Err(Error::Config("gripper_w entries must lie in [0, fly_w]".into()));
        }

        let t = &self.traffic;
        t.demand.validate()?;
        t.service.validate()?;
        if t.epochs == 0 {
            return Err(Error::Config("traffic epochs must be at least 1".into()));
        }
        if t.pairs.is_empty() || t.pairs.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::Config("traffic pairs must be non-empty with positive counts".into()));
        }
        Ok(())
    }

    pub fn energy_aux(&self) -> EnergyAux {
        EnergyAux {
            battery: self.platform.battery,
            tether_delivery_eff: self.energy.tether_delivery_eff,
            swap_overhead_wh: self.energy.swap_overhead_wh,
        }
    }

    /// Short digest of every setting except the output directory.
    pub fn config_hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output_dir = PathBuf::new();
        let json = serde_json::to_vec(&canonical).expect("config serialises");
        let digest = Sha256::digest(&json);
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}
