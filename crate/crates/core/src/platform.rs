//! Platform taxonomy, where each platform may operate, and the small
//! physical models around it: laser power balance, gripper holding force,
//! payload-dependent endurance and rotor noise decay.

use serde::{Deserialize, Serialize};

use crate::scenario::{Point2, SiteGrid};
use crate::{Error, Result};

pub const STANDARD_GRAVITY: f64 = 9.8;

/// Electrical power draw in each operating mode, in watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerProfile {
    pub hover_w: f64,
    pub fly_w: f64,
    pub comm_w: f64,
    pub grasp_w: f64,
}

impl Default for PowerProfile {
    fn default() -> Self {
        Self {
            hover_w: 170.0,
            fly_w: 162.0,
            comm_w: 2.0,
            grasp_w: 0.0,
        }
    }
}

impl PowerProfile {
    /// Same profile with a powered (non energy-neutral) gripper.
    pub fn with_grasp(self, grasp_w: f64) -> Self {
        Self { grasp_w, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.hover_w, self.fly_w, self.comm_w, self.grasp_w];
        if all.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::Config(format!("power values must be >= 0: {self:?}")));
        }
        if self.grasp_w > self.fly_w {
            return Err(Error::Config(format!(
                "grasp power {} W exceeds flying power {} W",
                self.grasp_w, self.fly_w
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Battery {
    pub capacity_mah: f64,
    pub nominal_v: f64,
}

impl Default for Battery {
    fn default() -> Self {
        Self {
            capacity_mah: 6700.0,
            nominal_v: 14.8,
        }
    }
}

impl Battery {
    pub fn energy_wh(&self) -> f64 {
        self.capacity_mah * self.nominal_v / 1000.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.capacity_mah > 0.0 && self.nominal_v > 0.0) {
            return Err(Error::Config(format!("battery must have positive capacity and voltage: {self:?}")));
        }
        Ok(())
    }
}

/// Laser power beaming: received power is `eff * P_t * exp(-alpha d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaserLinkParams {
    pub conversion_eff: f64,
    pub attenuation_per_m: f64,
}

impl Default for LaserLinkParams {
    fn default() -> Self {
        Self {
            conversion_eff: 0.25,
            attenuation_per_m: 1e-4,
        }
    }
}

impl LaserLinkParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.conversion_eff > 0.0 && self.conversion_eff <= 1.0) {
            return Err(Error::Config(format!(
                "laser conversion efficiency must be in (0, 1], got {}",
                self.conversion_eff
            )));
        }
        if !(self.attenuation_per_m >= 0.0) {
            return Err(Error::Config("laser attenuation must be >= 0".into()));
        }
        Ok(())
    }
}

/// Friction grip on a lamppost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GripperSpec {
    pub friction_coeff: f64,
    pub safety_factor: f64,
    pub g: f64,
}

impl Default for GripperSpec {
    fn default() -> Self {
        Self {
            friction_coeff: 0.1,
            safety_factor: 2.0,
            g: STANDARD_GRAVITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlatformKind {
    /// Battery-powered, free to hover anywhere.
    Hovering { altitude_m: f64 },
    /// Powered through a cable from a ground anchor.
    Tethered {
        anchor: Point2,
        cable_m: f64,
        altitude_m: f64,
    },
    /// Powered by a ground laser director; must stay within the critical
    /// charging distance while drawing `demand_w`.
    LaserPowered {
        director: Point2,
        laser_tx_w: f64,
        link: LaserLinkParams,
        demand_w: f64,
        altitude_m: f64,
    },
    /// Perches on one of the grid sites.
    Rabs { grid: SiteGrid },
    /// Fixed terrestrial small cell on one of the grid sites.
    MicroBs { sites: SiteGrid },
}

impl PlatformKind {
    pub fn name(&self) -> &'static str {
        match self {
            PlatformKind::Hovering { .. } => "hovering",
            PlatformKind::Tethered { .. } => "tethered",
            PlatformKind::LaserPowered { .. } => "laser",
            PlatformKind::Rabs { .. } => "rabs",
            PlatformKind::MicroBs { .. } => "micro",
        }
    }

    pub fn hovering() -> Self {
        PlatformKind::Hovering { altitude_m: 100.0 }
    }

    pub fn tethered() -> Self {
        PlatformKind::Tethered {
            anchor: Point2::default(),
            cable_m: 150.0,
            altitude_m: 100.0,
        }
    }

    /// Laser-powered platform that hovers and serves (170 W + 2 W).
    pub fn laser() -> Self {
        let profile = PowerProfile::default();
        PlatformKind::LaserPowered {
            director: Point2::default(),
            laser_tx_w: 800.0,
            link: LaserLinkParams::default(),
            demand_w: profile.hover_w + profile.comm_w,
            altitude_m: 100.0,
        }
    }

    /// Whether the platform runs from swappable onboard batteries.
    pub fn is_battery_operated(&self) -> bool {
        matches!(self, PlatformKind::Hovering { .. } | PlatformKind::Rabs { .. })
    }
}

/// Horizontal positions a platform may occupy while serving.
#[derive(Debug, Clone, PartialEq)]
pub enum Region<'a> {
    Anywhere,
    Disk { center: Point2, radius_m: f64 },
    Sites(&'a SiteGrid),
}

impl Region<'_> {
    pub fn contains(&self, p: &Point2) -> bool {
        match self {
            Region::Anywhere => true,
            Region::Disk { center, radius_m } => center.distance(p) <= *radius_m,
            Region::Sites(grid) => grid.sites.iter().any(|s| s.ground() == *p),
        }
    }
}

fn horizontal_reach(slant_m: f64, altitude_m: f64, what: &str) -> Result<f64> {
    if slant_m < altitude_m {
        return Err(Error::EmptyRegion(format!(
            "{what} of {slant_m:.2} m cannot reach the {altitude_m} m operating altitude"
        )));
    }
    Ok((slant_m * slant_m - altitude_m * altitude_m).sqrt())
}

/// Feasible horizontal service region of a platform.
pub fn feasible_horizontal_region(kind: &PlatformKind) -> Result<Region<'_>> {
    match kind {
        PlatformKind::Hovering { .. } => Ok(Region::Anywhere),
        PlatformKind::Tethered {
            anchor,
            cable_m,
            altitude_m,
        } => Ok(Region::Disk {
            center: *anchor,
            radius_m: horizontal_reach(*cable_m, *altitude_m, "tether")?,
        }),
        PlatformKind::LaserPowered {
            director,
            laser_tx_w,
            link,
            demand_w,
            altitude_m,
        } => {
            let dc = critical_charging_distance(*laser_tx_w, link, *demand_w)?;
            let radius_m = if dc.is_infinite() {
                f64::INFINITY
            } else {
                horizontal_reach(dc, *altitude_m, "critical charging distance")?
            };
            Ok(Region::Disk {
                center: *director,
                radius_m,
            })
        }
        PlatformKind::Rabs { grid } => Ok(Region::Sites(grid)),
        PlatformKind::MicroBs { sites } => Ok(Region::Sites(sites)),
    }
}

/// Largest director-to-platform distance at which the beamed power still
/// covers `demand_w`: `ln(eff P_t / demand) / alpha`. Infinite when the link
/// has no attenuation.
pub fn critical_charging_distance(
    laser_tx_w: f64,
    link: &LaserLinkParams,
    demand_w: f64,
) -> Result<f64> {
    if !(demand_w > 0.0) {
        return Err(Error::Config(format!("laser demand must be positive, got {demand_w}")));
    }
    let delivered = link.conversion_eff * laser_tx_w;
    if delivered < demand_w {
        return Err(Error::Infeasible(format!(
            "laser delivers at most {delivered:.1} W, platform needs {demand_w:.1} W"
        )));
    }
    if link.attenuation_per_m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((delivered / demand_w).ln() / link.attenuation_per_m)
}

/// Normal force the gripper must apply so friction holds `mass_kg`.
pub fn gripper_holding_force(mass_kg: f64, spec: &GripperSpec) -> f64 {
    spec.safety_factor * mass_kg * spec.g / spec.friction_coeff
}

/// Measured flight time at one take-off mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnduranceAnchor {
    pub mass_kg: f64,
    pub minutes: f64,
}

/// Two measured points defining a propulsion power linear in mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnduranceCalibration {
    pub light: EnduranceAnchor,
    pub heavy: EnduranceAnchor,
}

impl Default for EnduranceCalibration {
    /// DJI Matrice 300 RTK: 55 min empty (6.3 kg), 31 min at 9 kg.
    fn default() -> Self {
        Self {
            light: EnduranceAnchor {
                mass_kg: 6.3,
                minutes: 55.0,
            },
            heavy: EnduranceAnchor {
                mass_kg: 9.0,
                minutes: 31.0,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endurance {
    pub minutes: f64,
    pub power_w: f64,
    /// Mass lies outside the calibrated range.
    pub extrapolated: bool,
}

/// Flight endurance from a propulsion power linear in mass, fitted so that
/// the battery lasts exactly the anchor durations at the anchor masses.
pub fn flight_endurance(
    total_mass_kg: f64,
    battery: &Battery,
    calib: &EnduranceCalibration,
) -> Result<Endurance> {
    let e = battery.energy_wh();
    let (m1, m2) = (calib.light.mass_kg, calib.heavy.mass_kg);
    if m1 == m2 {
        return Err(Error::Config("endurance anchors need distinct masses".into()));
    }
    let p1 = e / (calib.light.minutes / 60.0);
    let p2 = e / (calib.heavy.minutes / 60.0);
    let power_w = p1 + (p2 - p1) * (total_mass_kg - m1) / (m2 - m1);
    if !(power_w > 0.0) {
        return Err(Error::Domain(format!(
            "propulsion power at {total_mass_kg} kg is not positive ({power_w:.2} W)"
        )));
    }
    Ok(Endurance {
        minutes: e / power_w * 60.0,
        power_w,
        extrapolated: total_mass_kg < m1.min(m2) || total_mass_kg > m1.max(m2),
    })
}

/// Free-field spherical spreading: 20 log10 per decade of distance.
pub fn noise_at_distance(ref_level_db: f64, ref_distance_m: f64, distance_m: f64) -> f64 {
    ref_level_db - 20.0 * (distance_m / ref_distance_m).log10()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FlightStatus {
    Hovering,
    /// Level flight at 3.23 m/s.
    Flying,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseSample {
    pub status: FlightStatus,
    pub altitude_m: f64,
    pub lateral_m: f64,
    pub noise_db: f64,
}

impl NoiseSample {
    pub fn slant_distance_m(&self) -> f64 {
        self.altitude_m.hypot(self.lateral_m)
    }
}

const fn sample(status: FlightStatus, altitude_m: f64, lateral_m: f64, noise_db: f64) -> NoiseSample {
    NoiseSample {
        status,
        altitude_m,
        lateral_m,
        noise_db,
    }
}

/// Measured noise emission of a DJI Matrice 600 Pro.
pub const MATRICE_600_NOISE: [NoiseSample; 10] = [
    sample(FlightStatus::Hovering, 9.18, 0.0, 89.6),
    sample(FlightStatus::Hovering, 9.18, 2.45, 88.7),
    sample(FlightStatus::Hovering, 9.18, 5.28, 87.3),
    sample(FlightStatus::Hovering, 9.18, 9.14, 83.7),
    sample(FlightStatus::Hovering, 9.18, 15.84, 79.2),
    sample(FlightStatus::Flying, 7.5, 0.0, 85.3),
    sample(FlightStatus::Flying, 7.5, 2.45, 84.0),
    sample(FlightStatus::Flying, 7.5, 5.28, 82.7),
    sample(FlightStatus::Flying, 7.5, 9.14, 79.6),
    sample(FlightStatus::Flying, 7.5, 15.84, 75.9),
];

/// The zero-lateral measurement for the same flight status.
pub fn noise_reference(status: FlightStatus) -> NoiseSample {
    *MATRICE_600_NOISE
        .iter()
        .find(|s| s.status == status && s.lateral_m == 0.0)
        .expect("table has a zero-lateral row per status")
}

/// Spreading-law prediction for every table row, paired with the measurement.
pub fn noise_predictions() -> Vec<(NoiseSample, f64)> {
    MATRICE_600_NOISE
        .iter()
        .map(|s| {
            let r = noise_reference(s.status);
            (*s, noise_at_distance(r.noise_db, r.slant_distance_m(), s.slant_distance_m()))
        })
        .collect()
}
