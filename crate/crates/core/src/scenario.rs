//! The simulation world: area geometry, random user drops, the Manhattan
//! lamppost grid and per-trial random substreams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// Default handset height above ground.
pub const DEFAULT_USER_HEIGHT_M: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn distance_sq(&self, other: &Point2) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn ground(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// Rectangular service area with its lower-left corner at `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AreaSpec {
    pub width_m: f64,
    pub height_m: f64,
    #[serde(default)]
    pub origin: Point2,
}

impl Default for AreaSpec {
    fn default() -> Self {
        Self::new(2000.0, 2000.0)
    }
}

impl AreaSpec {
    pub fn new(width_m: f64, height_m: f64) -> Self {
        Self {
            width_m,
            height_m,
            origin: Point2::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width_m > 0.0 && self.height_m > 0.0) {
            return Err(Error::Config(format!(
                "area must have positive extent, got {} x {}",
                self.width_m, self.height_m
            )));
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point2) -> bool {
        p.x >= self.origin.x
            && p.y >= self.origin.y
            && p.x <= self.origin.x + self.width_m
            && p.y <= self.origin.y + self.height_m
    }

    pub fn center(&self) -> Point2 {
        Point2::new(
            self.origin.x + self.width_m / 2.0,
            self.origin.y + self.height_m / 2.0,
        )
    }

    /// Reflect a point back into the area (one bounce per axis is enough for
    /// steps shorter than the area side).
    pub fn reflect(&self, p: Point2) -> Point2 {
        fn bounce(v: f64, lo: f64, hi: f64) -> f64 {
            let span = hi - lo;
            if span <= 0.0 {
                return lo;
            }
            // Fold onto [0, 2 span) then mirror the upper half.
            let t = (v - lo).rem_euclid(2.0 * span);
            if t > span {
                lo + 2.0 * span - t
            } else {
                lo + t
            }
        }
        Point2::new(
            bounce(p.x, self.origin.x, self.origin.x + self.width_m),
            bounce(p.y, self.origin.y, self.origin.y + self.height_m),
        )
    }
}

/// Ground users of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserSet {
    pub positions: Vec<Point2>,
    pub user_height_m: f64,
}

impl UserSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Regular grid of candidate anchoring sites (lampposts), inclusive of both
/// area edges. Sites are indexed row by row, starting at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteGrid {
    pub spacing_m: f64,
    pub site_height_m: f64,
    pub columns: usize,
    pub rows: usize,
    pub sites: Vec<Point3>,
}

impl SiteGrid {
    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn ground(&self, index: usize) -> Point2 {
        self.sites[index].ground()
    }

    /// Index of the site nearest to `p` (lowest index on ties).
    pub fn nearest(&self, p: &Point2) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in self.sites.iter().enumerate() {
            let d = s.ground().distance_sq(p);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Identifies one Monte Carlo trial's randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedSpec {
    pub const fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    /// Deterministic generator for a named purpose within this trial.
    ///
    /// The 256-bit ChaCha key is the SHA-256 digest of
    /// `(master_seed, trial_index, purpose)`, so substreams depend only on
    /// their identity and never on the order trials are run in.
    pub fn rng(&self, purpose: &str) -> ChaCha8Rng {
        let mut hasher = Sha256::new();
        hasher.update(b"rabs-sim/v1");
        hasher.update(self.master_seed.to_le_bytes());
        hasher.update(self.trial_index.to_le_bytes());
        hasher.update((purpose.len() as u64).to_le_bytes());
        hasher.update(purpose.as_bytes());
        ChaCha8Rng::from_seed(hasher.finalize().into())
    }
}

/// Drop `n` users uniformly over the area.
pub fn generate_users(area: &AreaSpec, n: usize, seed: SeedSpec) -> UserSet {
    let mut rng = seed.rng("users");
    let positions = (0..n)
        .map(|_| {
            Point2::new(
                area.origin.x + rng.gen::<f64>() * area.width_m,
                area.origin.y + rng.gen::<f64>() * area.height_m,
            )
        })
        .collect();
    UserSet {
        positions,
        user_height_m: DEFAULT_USER_HEIGHT_M,
    }
}

/// Lay out sites every `spacing` metres along both axes, including both
/// boundary lines.
pub fn generate_site_grid(area: &AreaSpec, spacing: f64, site_height: f64) -> Result<SiteGrid> {
    area.validate()?;
    if !(spacing > 0.0) || spacing > area.width_m.min(area.height_m) {
        return Err(Error::Config(format!(
            "site spacing must be in (0, {}], got {spacing}",
            area.width_m.min(area.height_m)
        )));
    }
    if !(site_height >= 0.0) {
        return Err(Error::Config(format!(
            "site height must be non-negative, got {site_height}"
        )));
    }
    // Relative slack so that 2000 / 100 lands on 20 and not 19.999...
    let count = |extent: f64| (extent / spacing * (1.0 + 1e-12)).floor() as usize + 1;
    let columns = count(area.width_m);
    let rows = count(area.height_m);
    let mut sites = Vec::with_capacity(columns * rows);
    for j in 0..rows {
        for i in 0..columns {
            sites.push(Point3::new(
                area.origin.x + i as f64 * spacing,
                area.origin.y + j as f64 * spacing,
                site_height,
            ));
        }
    }
    Ok(SiteGrid {
        spacing_m: spacing,
        site_height_m: site_height,
        columns,
        rows,
        sites,
    })
}

/// Transmitter-to-receiver link geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub d2d: f64,
    pub d3d: f64,
    pub height_diff: f64,
    pub elevation_deg: f64,
}

/// Geometry of the link from `tx` down to a receiver at `rx_2d`, `rx_height`
/// above ground. The transmitter is expected to be above the receiver.
pub fn geometry(tx: &Point3, rx_2d: &Point2, rx_height: f64) -> LinkGeometry {
    let d2d = tx.ground().distance(rx_2d);
    let height_diff = tx.z - rx_height;
    let d3d = d2d.hypot(height_diff);
    let elevation_deg = if d2d == 0.0 {
        90.0
    } else {
        (height_diff / d2d).atan().to_degrees()
    };
    LinkGeometry {
        d2d,
        d3d,
        height_diff,
        elevation_deg,
    }
}

/// Geometry for a given horizontal separation, without explicit points.
pub fn geometry_at(d2d: f64, tx_height: f64, rx_height: f64) -> LinkGeometry {
    geometry(
        &Point3::new(0.0, 0.0, tx_height),
        &Point2::new(d2d, 0.0),
        rx_height,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest};

    #[test]
    fn zero_users() {
        let u = generate_users(&AreaSpec::default(), 0, SeedSpec::new(7, 0));
        assert!(u.is_empty());
    }

    #[test]
    fn users_are_deterministic() {
        let area = AreaSpec::default();
        let a = generate_users(&area, 100, SeedSpec::new(42, 3));
        let b = generate_users(&area, 100, SeedSpec::new(42, 3));
        let bits = |u: &UserSet| {
            u.positions
                .iter()
                .flat_map(|p| [p.x.to_bits(), p.y.to_bits()])
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b));
        let c = generate_users(&area, 100, SeedSpec::new(42, 4));
        assert_ne!(bits(&a), bits(&c));
    }

    #[test]
    fn user_mean_matches_uniform_moment() {
        let area = AreaSpec::default();
        let n = 10_000;
        let u = generate_users(&area, n, SeedSpec::new(1, 0));
        let mean = u.positions.iter().map(|p| p.x).sum::<f64>() / n as f64;
        let bound = 3.0 * (2000.0 / 12f64.sqrt()) / (n as f64).sqrt();
        assert!((mean - 1000.0).abs() <= bound, "mean {mean}, bound {bound}");
    }

    #[test]
    fn trial_streams_are_uncorrelated() {
        let mut a = SeedSpec::new(9, 0).rng("users");
        let mut b = SeedSpec::new(9, 1).rng("users");
        let n = 20_000;
        let xs: Vec<f64> = (0..n).map(|_| a.gen::<f64>() - 0.5).collect();
        let ys: Vec<f64> = (0..n).map(|_| b.gen::<f64>() - 0.5).collect();
        let cov = xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / n as f64;
        let corr = cov / (1.0 / 12.0);
        // 4 sigma of the null distribution of the sample correlation.
        assert!(corr.abs() < 4.0 / (n as f64).sqrt(), "corr {corr}");
    }

    #[test]
    fn lamppost_grid_counts() {
        let g = generate_site_grid(&AreaSpec::default(), 100.0, 7.0).unwrap();
        assert_eq!(g.len(), 441);
        assert_eq!((g.columns, g.rows), (21, 21));
        assert!(g.sites.iter().all(|s| s.z == 7.0));

        let corners = generate_site_grid(&AreaSpec::default(), 2000.0, 7.0).unwrap();
        assert_eq!(corners.len(), 4);

        let g = generate_site_grid(&AreaSpec::new(1000.0, 2000.0), 500.0, 10.0).unwrap();
        assert_eq!((g.columns, g.rows, g.len()), (3, 5, 15));
    }

    #[test]
    fn invalid_spacing_is_rejected() {
        let area = AreaSpec::default();
        assert!(matches!(generate_site_grid(&area, 0.0, 7.0), Err(Error::Config(_))));
        assert!(matches!(generate_site_grid(&area, -5.0, 7.0), Err(Error::Config(_))));
        assert!(matches!(generate_site_grid(&area, 2500.0, 7.0), Err(Error::Config(_))));
    }

    #[test]
    fn geometry_examples() {
        let g = geometry(&Point3::new(0.0, 0.0, 100.0), &Point2::new(0.0, 0.0), 0.0);
        assert_eq!((g.d2d, g.d3d, g.elevation_deg), (0.0, 100.0, 90.0));

        let g = geometry(&Point3::new(0.0, 0.0, 100.0), &Point2::new(100.0, 0.0), 0.0);
        assert!((g.d3d - 20000f64.sqrt()).abs() < 1e-12);
        assert!((g.elevation_deg - 45.0).abs() < 1e-12);

        let g = geometry(&Point3::new(0.0, 0.0, 7.0), &Point2::new(300.0, 400.0), 1.5);
        assert!((g.d2d - 500.0).abs() < 1e-12);
        assert!((g.d3d - (500f64 * 500.0 + 5.5 * 5.5).sqrt()).abs() < 1e-12);
        assert!((g.d3d - 500.03).abs() < 5e-3);
    }

    #[test]
    fn reflect_stays_inside() {
        let area = AreaSpec::default();
        assert_eq!(area.reflect(Point2::new(-100.0, 2100.0)), Point2::new(100.0, 1900.0));
        assert_eq!(area.reflect(Point2::new(500.0, 500.0)), Point2::new(500.0, 500.0));
    }

    proptest! {
        #[test]
        fn geometry_invariants(
            x in -3000.0..3000.0f64, y in -3000.0..3000.0f64,
            h in 2.0..500.0f64, rx_h in 0.0..1.9f64,
        ) {
            let g = geometry(&Point3::new(0.0, 0.0, h), &Point2::new(x, y), rx_h);
            prop_assert!(g.elevation_deg > 0.0 && g.elevation_deg <= 90.0);
            prop_assert!(g.d3d >= g.d2d);
            prop_assert!(g.d3d >= h - rx_h);
        }

        #[test]
        fn users_and_sites_inside_area(
            w in 50.0..3000.0f64, h in 50.0..3000.0f64,
            n in 0usize..200, seed in any::<u64>(), frac in 0.05..1.0f64,
        ) {
            let area = AreaSpec::new(w, h);
            let users = generate_users(&area, n, SeedSpec::new(seed, 0));
            prop_assert_eq!(users.len(), n);
            prop_assert!(users.positions.iter().all(|p| area.contains(p)));
            let grid = generate_site_grid(&area, frac * w.min(h), 7.0).unwrap();
            prop_assert!(grid.sites.iter().all(|s| area.contains(&s.ground())));
        }

        #[test]
        fn reflection_lands_in_area(x in -5000.0..7000.0f64, y in -5000.0..7000.0f64) {
            let area = AreaSpec::default();
            prop_assert!(area.contains(&area.reflect(Point2::new(x, y))));
        }
    }
}
