//! Coverage-maximising placement.
//!
//! Coverage is reduced to a disk test: a user is covered by a node when their
//! horizontal distance is within the node's coverage radius, which the
//! channel module derives once per model and height.

use crate::platform::Region;
use crate::scenario::{Point2, SiteGrid, UserSet};
use crate::{Error, Result};

/// Slack on the covering test so that users exactly on a circle stay covered
/// despite rounding in the intersection construction.
pub const BOUNDARY_EPS_M: f64 = 1e-9;

/// Upper bound on the number of subsets [`select_sites_exact`] will visit.
pub const MAX_EXACT_SUBSETS: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub positions: Vec<Point2>,
    /// Grid indices of the positions for site-based placements, empty otherwise.
    pub site_indices: Vec<usize>,
    /// Sorted indices of covered users.
    pub covered: Vec<usize>,
    pub coverage_fraction: f64,
}

impl Placement {
    fn new(positions: Vec<Point2>, site_indices: Vec<usize>, radius: f64, users: &UserSet) -> Self {
        let mut mask = vec![false; users.len()];
        for p in &positions {
            for i in covered_users(p, radius, &users.positions) {
                mask[i] = true;
            }
        }
        let covered: Vec<usize> = (0..users.len()).filter(|&i| mask[i]).collect();
        let coverage_fraction = if users.is_empty() {
            0.0
        } else {
            covered.len() as f64 / users.len() as f64
        };
        Self {
            positions,
            site_indices,
            covered,
            coverage_fraction,
        }
    }

    pub fn covered_count(&self) -> usize {
        self.covered.len()
    }
}

#[inline]
fn within(p: &Point2, u: &Point2, radius: f64) -> bool {
    let r = radius + BOUNDARY_EPS_M;
    p.distance_sq(u) <= r * r
}

/// Indices of users within `radius` of `position` (boundary inclusive).
pub fn covered_users(position: &Point2, radius: f64, users: &[Point2]) -> Vec<usize> {
    users
        .iter()
        .enumerate()
        .filter(|(_, u)| within(position, u, radius))
        .map(|(i, _)| i)
        .collect()
}

fn count_covered(position: &Point2, radius: f64, users: &[Point2]) -> usize {
    users.iter().filter(|u| within(position, u, radius)).count()
}

/// Candidate centres for a maximum-covering disk: every user, plus both
/// points where radius-`r` circles around each close-enough pair of users
/// intersect. Some optimal disk can always be moved to one of these.
pub fn disk_candidates(users: &[Point2], radius: f64) -> Vec<Point2> {
    let mut out = users.to_vec();
    for (i, a) in users.iter().enumerate() {
        for b in &users[i + 1..] {
            let d = a.distance(b);
            if d == 0.0 || d > 2.0 * radius {
                continue;
            }
            let mid = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
            let h = (radius * radius - 0.25 * d * d).max(0.0).sqrt();
            let (ux, uy) = ((b.x - a.x) / d, (b.y - a.y) / d);
            out.push(Point2::new(mid.x - uy * h, mid.y + ux * h));
            out.push(Point2::new(mid.x + uy * h, mid.y - ux * h));
        }
    }
    out
}

fn best_of(candidates: impl IntoIterator<Item = Point2>, radius: f64, users: &[Point2]) -> Option<Point2> {
    let mut best: Option<(Point2, usize)> = None;
    for c in candidates {
        let n = count_covered(&c, radius, users);
        if best.is_none_or(|(_, bn)| n > bn) {
            best = Some((c, n));
        }
    }
    best.map(|(c, _)| c)
}

/// Single disk of radius `radius` placed anywhere to cover the most users.
/// Exact, O(n^3).
pub fn best_free_disk(users: &UserSet, radius: f64) -> Result<Placement> {
    if users.is_empty() {
        return Err(Error::Domain("cannot place a disk over zero users".into()));
    }
    check_radius(radius)?;
    let pos = best_of(disk_candidates(&users.positions, radius), radius, &users.positions)
        .expect("at least one candidate");
    Ok(Placement::new(vec![pos], Vec::new(), radius, users))
}

fn project_onto_disk(p: Point2, center: Point2, feasible_radius: f64) -> Point2 {
    let d = p.distance(&center);
    if d <= feasible_radius {
        return p;
    }
    let s = feasible_radius / d;
    Point2::new(center.x + (p.x - center.x) * s, center.y + (p.y - center.y) * s)
}

/// Single disk whose centre must stay within `feasible_radius` of `center`.
///
/// Heuristic: the unconstrained candidates are projected onto the feasible
/// disk, and the feasible disk's centre is tried as well.
pub fn best_constrained_disk(
    users: &UserSet,
    radius: f64,
    center: Point2,
    feasible_radius: f64,
) -> Result<Placement> {
    if !(feasible_radius >= 0.0) {
        return Err(Error::EmptyRegion(format!(
            "feasible radius {feasible_radius} is negative"
        )));
    }
    if feasible_radius.is_infinite() {
        return best_free_disk(users, radius);
    }
    check_radius(radius)?;
    let candidates = std::iter::once(center).chain(
        disk_candidates(&users.positions, radius)
            .into_iter()
            .map(|c| project_onto_disk(c, center, feasible_radius)),
    );
    let pos = best_of(candidates, radius, &users.positions).expect("at least one candidate");
    Ok(Placement::new(vec![pos], Vec::new(), radius, users))
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("coverage radius must be positive, got {radius}")));
    }
    Ok(())
}

fn clamp_k(k: usize, grid: &SiteGrid) -> Result<usize> {
    if k == 0 {
        return Err(Error::Config("need at least one site to select".into()));
    }
    if k > grid.len() {
        log::warn!("requested {k} sites but only {} exist; clamping", grid.len());
        return Ok(grid.len());
    }
    Ok(k)
}

/// Users covered by each grid site.
pub fn site_coverage_lists(users: &UserSet, radius: f64, grid: &SiteGrid) -> Vec<Vec<usize>> {
    grid.sites
        .iter()
        .map(|s| covered_users(&s.ground(), radius, &users.positions))
        .collect()
}

/// Greedy maximum-coverage order over the grid.
///
/// Returns the chosen site indices and the number of newly covered users
/// each contributed. Stops after `k` picks or as soon as no site adds
/// coverage; ties go to the lowest site index.
pub fn greedy_site_order(users: &UserSet, radius: f64, grid: &SiteGrid, k: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    let k = clamp_k(k, grid)?;
    check_radius(radius)?;
    let lists = site_coverage_lists(users, radius, grid);
    let mut covered = vec![false; users.len()];
    let mut taken = vec![false; grid.len()];
    let mut order = Vec::with_capacity(k);
    let mut gains = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(usize, usize)> = None;
        for (s, list) in lists.iter().enumerate() {
            if taken[s] {
                continue;
            }
            let gain = list.iter().filter(|&&u| !covered[u]).count();
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((s, gain));
            }
        }
        match best {
            Some((s, gain)) if gain > 0 => {
                taken[s] = true;
                for &u in &lists[s] {
                    covered[u] = true;
                }
                order.push(s);
                gains.push(gain);
            }
            _ => break,
        }
    }
    Ok((order, gains))
}

/// Greedy selection of up to `k` grid sites maximising covered users.
pub fn select_sites_greedy(users: &UserSet, radius: f64, grid: &SiteGrid, k: usize) -> Result<Placement> {
    let (order, _) = greedy_site_order(users, radius, grid, k)?;
    Ok(sites_placement(order, radius, grid, users))
}

fn sites_placement(indices: Vec<usize>, radius: f64, grid: &SiteGrid, users: &UserSet) -> Placement {
    let positions = indices.iter().map(|&i| grid.ground(i)).collect();
    Placement::new(positions, indices, radius, users)
}

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Optimal `k`-subset of sites by exhaustive enumeration, refusing
/// instances with more than [`MAX_EXACT_SUBSETS`] subsets. The first subset
/// in lexicographic order wins ties.
pub fn select_sites_exact(users: &UserSet, radius: f64, grid: &SiteGrid, k: usize) -> Result<Placement> {
    let k = clamp_k(k, grid)?;
    check_radius(radius)?;
    let n = grid.len();
    let subsets = binomial(n, k);
    if subsets > MAX_EXACT_SUBSETS {
        return Err(Error::TooManySubsets {
            subsets,
            limit: MAX_EXACT_SUBSETS,
        });
    }
    let words = users.len().div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = site_coverage_lists(users, radius, grid)
        .into_iter()
        .map(|list| {
            let mut m = vec![0u64; words];
            for u in list {
                m[u / 64] |= 1 << (u % 64);
            }
            m
        })
        .collect();

    let mut combo: Vec<usize> = (0..k).collect();
    let mut best: Option<(Vec<usize>, u32)> = None;
    let mut union = vec![0u64; words];
    loop {
        union.iter_mut().for_each(|w| *w = 0);
        for &s in &combo {
            for (w, m) in union.iter_mut().zip(&masks[s]) {
                *w |= m;
            }
        }
        let count: u32 = union.iter().map(|w| w.count_ones()).sum();
        if best.as_ref().is_none_or(|(_, c)| count > *c) {
            best = Some((combo.clone(), count));
        }
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        loop {
            if i == 0 {
                let (indices, _) = best.expect("at least one subset");
                return Ok(sites_placement(indices, radius, grid, users));
            }
            i -= 1;
            if combo[i] < n - k + i {
                combo[i] += 1;
                for j in i + 1..k {
                    combo[j] = combo[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Best placement of `count` nodes of a platform within its feasible region.
/// Free and disk regions take a single node; site regions use greedy
/// selection.
pub fn place_in_region(region: &Region<'_>, users: &UserSet, radius: f64, count: usize) -> Result<Placement> {
    match region {
        Region::Anywhere => best_free_disk(users, radius),
        Region::Disk { center, radius_m } => best_constrained_disk(users, radius, *center, *radius_m),
        Region::Sites(grid) => select_sites_greedy(users, radius, grid, count),
    }
}
