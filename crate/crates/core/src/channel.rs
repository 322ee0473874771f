//! Path loss for the two link classes in the coverage study and the
//! coverage-radius solver built on top of them.
//!
//! High-altitude platforms use the probabilistic line-of-sight air-to-ground
//! model: free-space loss plus the LoS/NLoS excess losses weighted by a
//! sigmoid LoS probability in elevation angle. Low-altitude perched nodes use
//! the 3GPP urban street-canyon small-cell model, weighted the same way by
//! its distance-based LoS probability. Both are mean models (no shadowing
//! draw), so coverage becomes a disk test of a fixed radius.

use serde::{Deserialize, Serialize};

use crate::scenario::{geometry_at, LinkGeometry};
use crate::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Bisection stops once the bracket is this narrow.
pub const RADIUS_TOLERANCE_M: f64 = 0.1;
pub const MAX_BISECTION_ITERATIONS: usize = 200;
/// Search ceiling for the coverage radius bracket.
const MAX_SEARCH_RADIUS_M: f64 = 1.0e7;

/// Air-to-ground environment constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtgParams {
    pub a: f64,
    pub b: f64,
    pub eta_los_db: f64,
    pub eta_nlos_db: f64,
    pub carrier_hz: f64,
}

impl AtgParams {
    /// Urban environment at 2 GHz.
    pub const URBAN: AtgParams = AtgParams {
        a: 9.61,
        b: 0.16,
        eta_los_db: 1.0,
        eta_nlos_db: 20.0,
        carrier_hz: 2.0e9,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.b > 0.0) {
            return Err(Error::Config(format!(
                "air-to-ground sigmoid parameters must be positive (a={}, b={})",
                self.a, self.b
            )));
        }
        if !(0.0 <= self.eta_los_db && self.eta_los_db <= self.eta_nlos_db) {
            return Err(Error::Config(format!(
                "need 0 <= eta_los_db <= eta_nlos_db, got {} and {}",
                self.eta_los_db, self.eta_nlos_db
            )));
        }
        if !(self.carrier_hz > 0.0) {
            return Err(Error::Config("carrier frequency must be positive".into()));
        }
        Ok(())
    }
}

impl Default for AtgParams {
    fn default() -> Self {
        Self::URBAN
    }
}

/// Urban street-canyon small-cell parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UmiParams {
    pub carrier_hz: f64,
    pub bs_height_m: f64,
    pub ut_height_m: f64,
}

impl Default for UmiParams {
    fn default() -> Self {
        Self {
            carrier_hz: 2.0e9,
            bs_height_m: 7.0,
            ut_height_m: 1.5,
        }
    }
}

impl UmiParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_hz > 0.0) {
            return Err(Error::Config("carrier frequency must be positive".into()));
        }
        if !(self.bs_height_m > self.ut_height_m && self.ut_height_m >= 0.0) {
            return Err(Error::Config(format!(
                "need bs_height_m > ut_height_m >= 0, got {} and {}",
                self.bs_height_m, self.ut_height_m
            )));
        }
        Ok(())
    }

    /// Breakpoint distance with 1 m effective environment height.
    pub fn breakpoint_m(&self) -> f64 {
        4.0 * (self.bs_height_m - 1.0) * (self.ut_height_m - 1.0) * self.carrier_hz / SPEED_OF_LIGHT
    }
}

/// A user is covered when its path loss does not exceed the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageRule {
    pub threshold_db: f64,
}

impl Default for CoverageRule {
    fn default() -> Self {
        Self { threshold_db: 118.0 }
    }
}

impl CoverageRule {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold_db > 0.0) {
            return Err(Error::Config(format!(
                "coverage threshold must be positive, got {}",
                self.threshold_db
            )));
        }
        Ok(())
    }
}

pub fn free_space_path_loss_db(d3d: f64, carrier_hz: f64) -> f64 {
    20.0 * (4.0 * std::f64::consts::PI * carrier_hz * d3d / SPEED_OF_LIGHT).log10()
}

/// Sigmoid LoS probability `1 / (1 + a exp(-b (theta - a)))`, theta in degrees.
pub fn atg_los_probability(elevation_deg: f64, p: &AtgParams) -> f64 {
    1.0 / (1.0 + p.a * (-p.b * (elevation_deg - p.a)).exp())
}

/// Mean air-to-ground path loss in dB.
pub fn atg_mean_path_loss(g: &LinkGeometry, p: &AtgParams) -> Result<f64> {
    if !(g.d3d > 0.0) {
        return Err(Error::Domain("air-to-ground path loss needs d3d > 0".into()));
    }
    let p_los = atg_los_probability(g.elevation_deg, p);
    Ok(free_space_path_loss_db(g.d3d, p.carrier_hz)
        + p_los * p.eta_los_db
        + (1.0 - p_los) * p.eta_nlos_db)
}

/// LoS probability of the street-canyon model; 1 up to 18 m.
pub fn umi_los_probability(d2d: f64) -> f64 {
    if d2d <= 18.0 {
        1.0
    } else {
        18.0 / d2d + (-d2d / 36.0).exp() * (1.0 - 18.0 / d2d)
    }
}

/// Street-canyon LoS path loss, two-slope beyond the breakpoint.
pub fn umi_los_path_loss(g: &LinkGeometry, p: &UmiParams) -> f64 {
    let f_ghz = p.carrier_hz / 1e9;
    let bp = p.breakpoint_m();
    if g.d2d <= bp {
        32.4 + 21.0 * g.d3d.log10() + 20.0 * f_ghz.log10()
    } else {
        let dh = p.bs_height_m - p.ut_height_m;
        32.4 + 40.0 * g.d3d.log10() + 20.0 * f_ghz.log10() - 9.5 * (bp * bp + dh * dh).log10()
    }
}

/// Street-canyon NLoS path loss, never below the LoS value.
pub fn umi_nlos_path_loss(g: &LinkGeometry, p: &UmiParams) -> f64 {
    let f_ghz = p.carrier_hz / 1e9;
    let nlos = 22.4 + 35.3 * g.d3d.log10() + 21.3 * f_ghz.log10() - 0.3 * (p.ut_height_m - 1.5);
    nlos.max(umi_los_path_loss(g, p))
}

/// LoS-probability weighted street-canyon path loss in dB.
pub fn umi_mean_path_loss(g: &LinkGeometry, p: &UmiParams) -> Result<f64> {
    if !(g.d2d > 0.0) {
        return Err(Error::Domain("street-canyon path loss needs d2d > 0".into()));
    }
    let p_los = umi_los_probability(g.d2d);
    Ok(p_los * umi_los_path_loss(g, p) + (1.0 - p_los) * umi_nlos_path_loss(g, p))
}

/// Path loss as a function of horizontal distance only, for a fixed pair of
/// heights.
pub trait PathLossModel {
    fn path_loss_db(&self, d2d: f64) -> Result<f64>;

    /// Smallest horizontal distance at which the model is evaluated.
    fn min_distance_m(&self) -> f64 {
        0.0
    }
}

/// Air-to-ground link from a platform at `tx_height_m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtgLink {
    pub params: AtgParams,
    pub tx_height_m: f64,
    pub rx_height_m: f64,
}

impl AtgLink {
    pub fn new(params: AtgParams, tx_height_m: f64, rx_height_m: f64) -> Self {
        Self {
            params,
            tx_height_m,
            rx_height_m,
        }
    }
}

impl PathLossModel for AtgLink {
    fn path_loss_db(&self, d2d: f64) -> Result<f64> {
        atg_mean_path_loss(&geometry_at(d2d, self.tx_height_m, self.rx_height_m), &self.params)
    }
}

/// Street-canyon link; heights come from the parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UmiLink {
    pub params: UmiParams,
}

impl UmiLink {
    pub fn new(params: UmiParams) -> Self {
        Self { params }
    }
}

impl PathLossModel for UmiLink {
    fn path_loss_db(&self, d2d: f64) -> Result<f64> {
        umi_mean_path_loss(
            &geometry_at(d2d, self.params.bs_height_m, self.params.ut_height_m),
            &self.params,
        )
    }

    fn min_distance_m(&self) -> f64 {
        0.01
    }
}

/// Adds a fixed fade margin on top of another model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WithMargin<M> {
    pub inner: M,
    pub margin_db: f64,
}

impl<M: PathLossModel> PathLossModel for WithMargin<M> {
    fn path_loss_db(&self, d2d: f64) -> Result<f64> {
        Ok(self.inner.path_loss_db(d2d)? + self.margin_db)
    }

    fn min_distance_m(&self) -> f64 {
        self.inner.min_distance_m()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageRadius {
    pub radius_m: f64,
    /// The threshold is below the path loss at the minimum distance, so
    /// nobody can be covered.
    pub degenerate: bool,
}

/// Largest horizontal distance whose path loss stays within the threshold,
/// by bisection on a monotone model.
pub fn coverage_radius<M: PathLossModel + ?Sized>(
    model: &M,
    rule: &CoverageRule,
) -> Result<CoverageRadius> {
    let t = rule.threshold_db;
    let mut lo = model.min_distance_m();
    if model.path_loss_db(lo)? > t {
        return Ok(CoverageRadius {
            radius_m: 0.0,
            degenerate: true,
        });
    }
    let mut hi = lo.max(1.0);
    while model.path_loss_db(hi)? <= t {
        lo = hi;
        hi *= 2.0;
        if hi > MAX_SEARCH_RADIUS_M {
            return Err(Error::Domain(format!(
                "path loss stays below {t} dB beyond {MAX_SEARCH_RADIUS_M} m"
            )));
        }
    }
    // Invariant: PL(lo) <= t < PL(hi).
    for _ in 0..MAX_BISECTION_ITERATIONS {
        if hi - lo <= RADIUS_TOLERANCE_M {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if model.path_loss_db(mid)? <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(CoverageRadius {
        radius_m: lo,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::DEFAULT_USER_HEIGHT_M;
    use proptest::prelude::*;

    fn urban_atg(h: f64) -> AtgLink {
        AtgLink::new(AtgParams::URBAN, h, DEFAULT_USER_HEIGHT_M)
    }

    /// Largest sample on a uniform grid whose loss is within the threshold.
    fn dense_radius(model: &dyn PathLossModel, threshold: f64, step: f64, max: f64) -> f64 {
        let mut last = 0.0;
        let mut i = 1;
        loop {
            let d = i as f64 * step;
            if d > max {
                return last;
            }
            if model.path_loss_db(d).unwrap() <= threshold {
                last = d;
            }
            i += 1;
        }
    }

    #[test]
    fn los_probability_examples() {
        let p = AtgParams::URBAN;
        let at90 = atg_los_probability(90.0, &p);
        let expected = 1.0 / (1.0 + 9.61 * (-0.16f64 * (90.0 - 9.61)).exp());
        assert!((at90 - expected).abs() < 1e-15);
        assert!((at90 - 0.99997).abs() < 1e-5);
        assert!((atg_los_probability(9.61, &p) - 1.0 / 10.61).abs() < 1e-15);
        assert!((atg_los_probability(5.71, &p) - 0.0528).abs() < 1e-4);
    }

    #[test]
    fn atg_overhead_is_free_space_plus_los_excess() {
        let g = geometry_at(0.0, 100.0, 0.0);
        let fspl = free_space_path_loss_db(100.0, 2e9);
        assert!((fspl - 78.46).abs() < 0.01);
        let pl = atg_mean_path_loss(&g, &AtgParams::URBAN).unwrap();
        assert!((pl - 79.5).abs() < 0.05, "{pl}");
    }

    #[test]
    fn atg_reference_distance() {
        // Frozen from an independent evaluation of the same closed form.
        let pl = urban_atg(100.0).path_loss_db(1000.0).unwrap();
        assert!((pl - 117.5197).abs() < 1e-3, "{pl}");
        assert!((pl - 117.5).abs() < 0.2);
    }

    #[test]
    fn doubling_distance_adds_six_db_of_free_space() {
        let a = free_space_path_loss_db(350.0, 2e9);
        let b = free_space_path_loss_db(700.0, 2e9);
        assert!((b - a - 20.0 * 2f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn atg_zero_distance_is_domain_error() {
        let g = LinkGeometry {
            d2d: 0.0,
            d3d: 0.0,
            height_diff: 0.0,
            elevation_deg: 90.0,
        };
        assert!(matches!(atg_mean_path_loss(&g, &AtgParams::URBAN), Err(Error::Domain(_))));
    }

    #[test]
    fn umi_reference_distance() {
        let p = UmiParams::default();
        let pl = umi_mean_path_loss(&geometry_at(300.0, 7.0, 1.5), &p).unwrap();
        // Hand evaluation: P_LoS = 0.0602, LoS 101.30 dB, NLoS 116.25 dB.
        assert!((pl - 115.358).abs() < 1e-2, "{pl}");
        assert!((114.0 - 1.0..=115.0 + 1.0).contains(&pl));
    }

    #[test]
    fn umi_close_in_is_pure_los() {
        assert_eq!(umi_los_probability(5.0), 1.0);
        assert_eq!(umi_los_probability(18.0), 1.0);
        assert!(umi_los_probability(18.5) < 1.0);
        let p = UmiParams::default();
        let g = geometry_at(15.0, 7.0, 1.5);
        assert_eq!(umi_mean_path_loss(&g, &p).unwrap(), umi_los_path_loss(&g, &p));
    }

    #[test]
    fn umi_zero_distance_is_domain_error() {
        let g = geometry_at(0.0, 7.0, 1.5);
        assert!(matches!(
            umi_mean_path_loss(&g, &UmiParams::default()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn breakpoint_at_two_ghz() {
        let bp = UmiParams::default().breakpoint_m();
        assert!((bp - 4.0 * 6.0 * 0.5 * 2e9 / SPEED_OF_LIGHT).abs() < 1e-12);
        assert!((bp - 80.06).abs() < 0.01);
    }

    #[test]
    fn atg_radius_matches_dense_sampling() {
        let model = urban_atg(100.0);
        let r = coverage_radius(&model, &CoverageRule::default()).unwrap();
        assert!(!r.degenerate);
        let oracle = dense_radius(&model, 118.0, 0.01, 5000.0);
        assert!((r.radius_m - oracle).abs() <= 0.11, "{} vs {oracle}", r.radius_m);
        assert!((r.radius_m - 1052.36).abs() < 0.2);
    }

    #[test]
    fn umi_radius_matches_dense_sampling() {
        let model = UmiLink::new(UmiParams::default());
        let r = coverage_radius(&model, &CoverageRule::default()).unwrap();
        let oracle = dense_radius(&model, 118.0, 0.01, 5000.0);
        assert!((r.radius_m - oracle).abs() <= 0.11, "{} vs {oracle}", r.radius_m);
        assert!((300.0..=420.0).contains(&r.radius_m));
        assert!((r.radius_m - 352.89).abs() < 0.2);
    }

    #[test]
    fn radius_inverts_path_loss() {
        for (model, r_star) in [
            (&urban_atg(100.0) as &dyn PathLossModel, 640.0),
            (&UmiLink::new(UmiParams::default()) as &dyn PathLossModel, 210.0),
        ] {
            let rule = CoverageRule {
                threshold_db: model.path_loss_db(r_star).unwrap(),
            };
            let r = coverage_radius(model, &rule).unwrap();
            assert!((r.radius_m - r_star).abs() <= RADIUS_TOLERANCE_M, "{}", r.radius_m);
        }
    }

    #[test]
    fn threshold_below_minimum_loss_is_degenerate() {
        let r = coverage_radius(&urban_atg(100.0), &CoverageRule { threshold_db: 60.0 }).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.radius_m, 0.0);
    }

    #[test]
    fn margin_shrinks_radius() {
        let base = UmiLink::new(UmiParams::default());
        let rule = CoverageRule::default();
        let r0 = coverage_radius(&base, &rule).unwrap().radius_m;
        let r1 = coverage_radius(&WithMargin { inner: base, margin_db: 3.0 }, &rule)
            .unwrap()
            .radius_m;
        assert!(r1 < r0);
    }

    #[test]
    fn atg_is_strictly_increasing_on_grid() {
        for h in [50.0, 100.0, 300.0] {
            let m = urban_atg(h);
            let mut prev = m.path_loss_db(0.0).unwrap();
            for i in 1..=4000 {
                let pl = m.path_loss_db(i as f64).unwrap();
                assert!(pl > prev, "h={h} d={i}");
                prev = pl;
            }
        }
    }

    #[test]
    fn umi_is_non_decreasing_across_breakpoint() {
        let m = UmiLink::new(UmiParams::default());
        let mut prev = m.path_loss_db(0.01).unwrap();
        for i in 1..=200_000 {
            let pl = m.path_loss_db(0.01 + i as f64 * 0.01).unwrap();
            assert!(pl >= prev, "d={}", 0.01 + i as f64 * 0.01);
            prev = pl;
        }
    }

    proptest! {
        #[test]
        fn los_probability_bounded_and_increasing(t1 in 0.01..90.0f64, dt in 0.01..10.0f64) {
            let p = AtgParams::URBAN;
            let t2 = (t1 + dt).min(90.0);
            let a = atg_los_probability(t1, &p);
            let b = atg_los_probability(t2, &p);
            prop_assert!(a > 0.0 && a < 1.0);
            prop_assert!(t2 == t1 || b > a);
        }

        #[test]
        fn umi_weighted_between_branches(d in 0.5..5000.0f64) {
            let p = UmiParams::default();
            let g = geometry_at(d, 7.0, 1.5);
            let w = umi_mean_path_loss(&g, &p).unwrap();
            prop_assert!(w >= umi_los_path_loss(&g, &p) - 1e-9);
            prop_assert!(w <= umi_nlos_path_loss(&g, &p) + 1e-9);
        }

        #[test]
        fn radius_monotone_in_threshold(t in 90.0..130.0f64, dt in 0.0..10.0f64) {
            let m = UmiLink::new(UmiParams::default());
            let r1 = coverage_radius(&m, &CoverageRule { threshold_db: t }).unwrap().radius_m;
            let r2 = coverage_radius(&m, &CoverageRule { threshold_db: t + dt }).unwrap().radius_m;
            prop_assert!(r2 >= r1);
        }

        #[test]
        fn radius_brackets_threshold(t in 85.0..130.0f64, h in 30.0..300.0f64) {
            let m = urban_atg(h);
            let r = coverage_radius(&m, &CoverageRule { threshold_db: t }).unwrap();
            prop_assume!(!r.degenerate);
            prop_assert!(m.path_loss_db(r.radius_m).unwrap() <= t);
            prop_assert!(m.path_loss_db(r.radius_m + 1.0).unwrap() > t);
        }
    }
}
