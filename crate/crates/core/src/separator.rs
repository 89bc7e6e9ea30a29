//! Box separators.
//!
//! The pipeline: take the greedy packing estimate `g` of the collection,
//! find a small box `B` of aspect ratio at most 2 whose centered objects
//! reach `tau = ceil((1 + eps) / 3 * g)`, then sweep the magnified copies
//! `B_m`, `m = 1 + j / g^(1/d)` for `j = 0 ..= floor((2^(1/d) - 1) g^(1/d))`,
//! and keep the one whose boundary is crossed by the least measure. Objects
//! smaller than `l = l_d / (8 g^(1/d))` that cross different shells are
//! pairwise disjoint, which is what bounds the best shell.
//!
//! Every measure here is the greedy packing estimate.

use rayon::prelude::*;

use crate::collection::Collection;
use crate::error::{Error, Result};
use crate::geometry::{classify, BoxRegion, FatObject, RegionClass, GEOM_TOL};
use crate::measure::{EstimateKind, MeasureEstimate, Witness};

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorConfig {
    /// Slack in the target measure of the base box, in (0, 1/2].
    pub epsilon: f64,
    /// Largest fraction of the total measure either side may carry before a
    /// caller treats the split as unbalanced.
    pub balance_cap: f64,
    /// Upper limit on the number of shells evaluated.
    pub shell_samples_cap: usize,
    /// Ratio between consecutive side lengths in the base-box search.
    pub side_search_ratio: f64,
    /// Anchor coordinates tried per axis; larger sets are thinned evenly.
    pub anchor_cap: usize,
}

impl Default for SeparatorConfig {
    fn default() -> Self {
        SeparatorConfig {
            epsilon: 0.25,
            balance_cap: 0.8,
            shell_samples_cap: 64,
            side_search_ratio: 1.05,
            anchor_cap: 48,
        }
    }
}

impl SeparatorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon <= 0.5) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in (0, 1/2], got {}",
                self.epsilon
            )));
        }
        if !(self.balance_cap >= 0.0 && self.balance_cap <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "balance_cap must lie in [0, 1], got {}",
                self.balance_cap
            )));
        }
        if !(self.side_search_ratio > 1.0) || self.shell_samples_cap == 0 || self.anchor_cap < 2 {
            return Err(Error::InvalidConfig(
                "side_search_ratio must exceed 1, shell_samples_cap >= 1, anchor_cap >= 2".into(),
            ));
        }
        Ok(())
    }

    /// Measure above which a balanced separator is guaranteed in the worst
    /// case: `(3 c d^2 8^d / eps)^d` for fatness constant `c`. Astronomical for
    /// every practical input, so solvers use a small base threshold instead.
    pub fn worst_case_threshold(&self, dim: usize, fatness: f64) -> f64 {
        let d = dim as f64;
        (3.0 * fatness * d * d * 8f64.powi(dim as i32) / self.epsilon).powf(d)
    }
}

/// One evaluated shell `B_m` of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellReport {
    pub index: usize,
    pub magnification: f64,
    /// Greedy measure of every object meeting the shell boundary.
    pub boundary_measure: usize,
    /// Greedy measure of the objects smaller than the size threshold that
    /// meet the shell boundary.
    pub small_measure: usize,
    /// Ids of those small boundary objects.
    pub small_ids: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShellSweep {
    pub m_star: f64,
    pub boundary_measure: usize,
    /// Objects of size strictly below this are the "small" class.
    pub size_threshold: f64,
    pub shells: Vec<ShellReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatorResult {
    /// The separating box `R = B_{m*}`.
    pub region: BoxRegion,
    pub base_box: BoxRegion,
    pub m_star: f64,
    pub inside_ids: Vec<usize>,
    pub outside_ids: Vec<usize>,
    pub boundary_ids: Vec<usize>,
    pub mu_total: MeasureEstimate,
    pub mu_inside: MeasureEstimate,
    pub mu_outside: MeasureEstimate,
    pub mu_boundary: MeasureEstimate,
    /// All centers coincide; the region is a tiny cube around that point.
    pub degenerate: bool,
    pub sweep: ShellSweep,
}

impl SeparatorResult {
    /// Both sides carry at most `cap` of the total measure.
    pub fn is_balanced(&self, cap: f64) -> bool {
        let total = self.mu_total.value as f64;
        self.mu_inside.value as f64 <= cap * total && self.mu_outside.value as f64 <= cap * total
    }

    pub fn class_of(&self, id: usize) -> Option<RegionClass> {
        if self.inside_ids.contains(&id) {
            Some(RegionClass::Inside)
        } else if self.outside_ids.contains(&id) {
            Some(RegionClass::Outside)
        } else if self.boundary_ids.contains(&id) {
            Some(RegionClass::Boundary)
        } else {
            None
        }
    }
}

/// Separator over collection positions; the solvers work with this form.
#[derive(Debug, Clone)]
pub(crate) struct Split {
    pub region: BoxRegion,
    pub base: BoxRegion,
    pub m_star: f64,
    pub inside: Vec<usize>,
    pub outside: Vec<usize>,
    pub boundary: Vec<usize>,
    pub total: Vec<usize>,
    pub mu_inside: Vec<usize>,
    pub mu_outside: Vec<usize>,
    pub mu_boundary: Vec<usize>,
    pub degenerate: bool,
    pub sweep: ShellSweep,
}

impl Split {
    pub fn is_balanced(&self, cap: f64) -> bool {
        let total = self.total.len() as f64;
        self.mu_inside.len() as f64 <= cap * total && self.mu_outside.len() as f64 <= cap * total
    }
}

fn estimate(coll: &Collection<'_>, positions: &[usize]) -> MeasureEstimate {
    let mut ids = coll.ids(positions);
    ids.sort_unstable();
    MeasureEstimate {
        value: positions.len(),
        kind: EstimateKind::ApproxLower,
        witness: Witness::Objects(ids),
    }
}

fn sorted_ids(coll: &Collection<'_>, positions: &[usize]) -> Vec<usize> {
    let mut ids = coll.ids(positions);
    ids.sort_unstable();
    ids
}

/// Smallest box (aspect ratio <= 2) in the ladder/anchor search family whose
/// centered objects have greedy measure at least `tau`.
pub fn find_base_box(objs: &[FatObject], tau: usize, cfg: &SeparatorConfig) -> Result<BoxRegion> {
    cfg.validate()?;
    let coll = Collection::new(objs)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    base_box_in(&coll, &all, tau, cfg)
}

pub fn shell_sweep(
    objs: &[FatObject],
    base: &BoxRegion,
    g: usize,
    cfg: &SeparatorConfig,
) -> Result<ShellSweep> {
    cfg.validate()?;
    if g == 0 {
        return Err(Error::InvalidConfig("shell sweep needs g >= 1".into()));
    }
    let coll = Collection::new(objs)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    Ok(sweep_in(&coll, &all, base, g, cfg))
}

pub fn separate(objs: &[FatObject], cfg: &SeparatorConfig) -> Result<SeparatorResult> {
    cfg.validate()?;
    let coll = Collection::new(objs)?;
    let all: Vec<usize> = (0..coll.len()).collect();
    let split = separate_in(&coll, &all, cfg)?;
    Ok(SeparatorResult {
        inside_ids: sorted_ids(&coll, &split.inside),
        outside_ids: sorted_ids(&coll, &split.outside),
        boundary_ids: sorted_ids(&coll, &split.boundary),
        mu_total: estimate(&coll, &split.total),
        mu_inside: estimate(&coll, &split.mu_inside),
        mu_outside: estimate(&coll, &split.mu_outside),
        mu_boundary: estimate(&coll, &split.mu_boundary),
        region: split.region,
        base_box: split.base,
        m_star: split.m_star,
        degenerate: split.degenerate,
        sweep: split.sweep,
    })
}

pub(crate) fn separate_in(
    coll: &Collection<'_>,
    subset: &[usize],
    cfg: &SeparatorConfig,
) -> Result<Split> {
    if subset.len() < 2 {
        return Err(Error::InvalidConfig(
            "a separator needs at least two objects".into(),
        ));
    }
    let total = coll.greedy_pack(subset);
    let g = total.len();
    let centers: Vec<Vec<f64>> = subset
        .iter()
        .map(|&p| coll.object(p).center().coords().to_vec())
        .collect();
    let degenerate = centers.iter().all(|c| c == &centers[0]);
    let (base, sweep) = if degenerate {
        let scale = 1.0 + centers[0].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let half = 1e-6 * scale;
        let low: Vec<f64> = centers[0].iter().map(|x| x - half).collect();
        let base = BoxRegion::from_corner(&low, &vec![2.0 * half; low.len()]);
        let sweep = ShellSweep {
            m_star: 1.0,
            boundary_measure: 0,
            size_threshold: 0.0,
            shells: Vec::new(),
        };
        (base, sweep)
    } else {
        let tau = (((1.0 + cfg.epsilon) / 3.0) * g as f64).ceil().max(1.0) as usize;
        let base = base_box_in(coll, subset, tau, cfg)?;
        let sweep = sweep_in(coll, subset, &base, g, cfg);
        (base, sweep)
    };
    let region = base.magnify(sweep.m_star)?;
    let (mut inside, mut outside, mut boundary) = (Vec::new(), Vec::new(), Vec::new());
    for &p in subset {
        match classify(coll.object(p), &region) {
            RegionClass::Inside => inside.push(p),
            RegionClass::Outside => outside.push(p),
            RegionClass::Boundary => boundary.push(p),
        }
    }
    Ok(Split {
        mu_inside: coll.greedy_pack(&inside),
        mu_outside: coll.greedy_pack(&outside),
        mu_boundary: coll.greedy_pack(&boundary),
        region,
        base,
        m_star: sweep.m_star,
        inside,
        outside,
        boundary,
        total,
        degenerate,
        sweep,
    })
}

pub(crate) fn base_box_in(
    coll: &Collection<'_>,
    subset: &[usize],
    tau: usize,
    cfg: &SeparatorConfig,
) -> Result<BoxRegion> {
    let d = coll.dim().ok_or(Error::Unreachable { tau })?;
    if subset.is_empty() || tau == 0 {
        return Err(Error::Unreachable { tau });
    }
    let centers: Vec<Vec<f64>> = (0..coll.len())
        .map(|p| coll.object(p).center().coords().to_vec())
        .collect();
    let ladder = side_ladder(subset, &centers, d, cfg.side_search_ratio);
    let search = PlacementSearch {
        coll,
        centers: &centers,
        tau,
        anchor_cap: cfg.anchor_cap,
        d,
    };
    let mut best: Option<(f64, BoxRegion)> = None;
    // shape classes: axes in `mask` get twice the base side; all-doubled is
    // the cube one octave up and is skipped
    for mask in 0..(1usize << d) - 1 {
        let sides_at = |i: usize| -> Vec<f64> {
            (0..d)
                .map(|a| if mask >> a & 1 == 1 { 2.0 * ladder[i] } else { ladder[i] })
                .collect()
        };
        let last = ladder.len() - 1;
        let Some(top) = search.place(subset, &sides_at(last)) else {
            continue;
        };
        // first rung that admits a placement, assuming monotonicity
        let (mut lo, mut hi, mut found) = (0usize, last, top);
        if let Some(b) = search.place(subset, &sides_at(0)) {
            hi = 0;
            found = b;
        }
        while hi > lo + 1 {
            let mid = (lo + hi) / 2;
            match search.place(subset, &sides_at(mid)) {
                Some(b) => {
                    hi = mid;
                    found = b;
                }
                None => lo = mid,
            }
        }
        let vol = found.volume();
        if best.as_ref().is_none_or(|(v, _)| vol < *v * (1.0 - 1e-12)) {
            best = Some((vol, found));
        }
    }
    best.map(|(_, b)| b).ok_or(Error::Unreachable { tau })
}

/// Geometric side-length ladder from the smallest positive L-inf distance
/// between centers up to the largest extent of the centers.
fn side_ladder(subset: &[usize], centers: &[Vec<f64>], d: usize, ratio: f64) -> Vec<f64> {
    let mut extent = 0.0f64;
    for a in 0..d {
        let (lo, hi) = subset.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &p| {
            (lo.min(centers[p][a]), hi.max(centers[p][a]))
        });
        extent = extent.max(hi - lo);
    }
    let mut min_gap = f64::INFINITY;
    for (i, &p) in subset.iter().enumerate() {
        for &q in &subset[i + 1..] {
            let dist = (0..d)
                .map(|a| (centers[p][a] - centers[q][a]).abs())
                .fold(0.0, f64::max);
            if dist > 0.0 {
                min_gap = min_gap.min(dist);
            }
        }
    }
    if !min_gap.is_finite() || extent <= 0.0 {
        return vec![extent.max(GEOM_TOL)];
    }
    let mut ladder = Vec::new();
    let mut s = min_gap;
    while s < extent {
        ladder.push(s);
        s *= ratio;
    }
    ladder.push(extent);
    ladder
}

struct PlacementSearch<'s, 'a> {
    coll: &'s Collection<'a>,
    centers: &'s [Vec<f64>],
    tau: usize,
    anchor_cap: usize,
    d: usize,
}

impl PlacementSearch<'_, '_> {
    /// A box with the given sides, low faces on center coordinates, whose
    /// centered objects reach `tau`.
    fn place(&self, members: &[usize], sides: &[f64]) -> Option<BoxRegion> {
        let mut low = vec![0.0; self.d];
        self.place_axis(0, members, sides, &mut low)
            .then(|| BoxRegion::from_corner(&low, sides))
    }

    fn place_axis(&self, axis: usize, members: &[usize], sides: &[f64], low: &mut [f64]) -> bool {
        if members.len() < self.tau {
            return false;
        }
        if axis == self.d {
            return self.coll.greedy_pack(members).len() >= self.tau;
        }
        let mut coords: Vec<f64> = members.iter().map(|&p| self.centers[p][axis]).collect();
        coords.sort_by(f64::total_cmp);
        coords.dedup();
        let anchors = thin(&coords, self.anchor_cap);
        for a in anchors {
            let hi = a + sides[axis];
            let window: Vec<usize> = members
                .iter()
                .copied()
                .filter(|&p| self.centers[p][axis] >= a && self.centers[p][axis] <= hi)
                .collect();
            low[axis] = a;
            if self.place_axis(axis + 1, &window, sides, low) {
                return true;
            }
        }
        false
    }
}

/// At most `cap` evenly spaced entries of a sorted list, keeping the first
/// and last.
fn thin(coords: &[f64], cap: usize) -> Vec<f64> {
    if coords.len() <= cap {
        return coords.to_vec();
    }
    let last = coords.len() - 1;
    (0..cap).map(|i| coords[i * last / (cap - 1)]).collect()
}

pub(crate) fn sweep_in(
    coll: &Collection<'_>,
    subset: &[usize],
    base: &BoxRegion,
    g: usize,
    cfg: &SeparatorConfig,
) -> ShellSweep {
    let d = base.dim();
    let root = (g as f64).powf(1.0 / d as f64);
    let size_threshold = base.longest_side() / (8.0 * root);
    let shells = (((2f64.powf(1.0 / d as f64) - 1.0) * root).floor() as usize + 1)
        .min(cfg.shell_samples_cap);
    let reports: Vec<ShellReport> = (0..shells)
        .into_par_iter()
        .map(|j| {
            let m = 1.0 + j as f64 / root;
            let shell = base.magnify(m).expect("magnification >= 1");
            let crossing: Vec<usize> = subset
                .iter()
                .copied()
                .filter(|&p| classify(coll.object(p), &shell) == RegionClass::Boundary)
                .collect();
            let small: Vec<usize> = crossing
                .iter()
                .copied()
                .filter(|&p| coll.size(p) < size_threshold)
                .collect();
            ShellReport {
                index: j,
                magnification: m,
                boundary_measure: coll.greedy_pack(&crossing).len(),
                small_measure: coll.greedy_pack(&small).len(),
                small_ids: sorted_ids(coll, &small),
            }
        })
        .collect();
    let best = reports
        .iter()
        .min_by_key(|r| (r.boundary_measure, r.index))
        .expect("at least one shell");
    ShellSweep {
        m_star: best.magnification,
        boundary_measure: best.boundary_measure,
        size_threshold,
        shells: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::center_in;
    use crate::instance::{gen_instance, GenSpec, Layout, ShapeFamily};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn disks(cs: &[(f64, f64, f64)]) -> Vec<FatObject> {
        cs.iter()
            .enumerate()
            .map(|(i, &(x, y, r))| FatObject::ball(i, [x, y], r).unwrap())
            .collect()
    }

    fn centered_measure(objs: &[FatObject], b: &BoxRegion) -> usize {
        let inside: Vec<FatObject> = objs.iter().filter(|o| center_in(o, b)).cloned().collect();
        crate::measure::greedy_pack(&inside).unwrap().value
    }

    #[test]
    fn base_box_for_single_cluster_matches_exhaustive_ladder_scan() {
        // 9 small disjoint disks on a 3x3 lattice inside the unit square
        let mut cs = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                cs.push((0.1 + 0.4 * i as f64, 0.1 + 0.4 * j as f64, 0.05));
            }
        }
        let objs = disks(&cs);
        let cfg = SeparatorConfig::default();
        let b = find_base_box(&objs, 3, &cfg).unwrap();
        assert!(centered_measure(&objs, &b) >= 3);
        assert!(b.aspect_ratio() <= 2.0 + 1e-12);
        // oracle: every cube on the ladder, every anchor pair, smallest success
        let centers: Vec<(f64, f64)> = cs.iter().map(|&(x, y, _)| (x, y)).collect();
        let mut s = 0.4;
        let mut smallest = None;
        while smallest.is_none() {
            for &(ax, _) in &centers {
                for &(_, ay) in &centers {
                    let cube = BoxRegion::from_corner(&[ax, ay], &[s, s]);
                    if centered_measure(&objs, &cube) >= 3 {
                        smallest = Some(s * s);
                    }
                }
            }
            s *= cfg.side_search_ratio;
        }
        assert!(b.volume() <= smallest.unwrap() + 1e-12, "{} vs {:?}", b.volume(), smallest);
        assert!(b.longest_side() < 1.0);
    }

    #[test]
    fn base_box_at_full_measure_holds_all_centers() {
        let objs = disks(&[(0.0, 0.0, 0.5), (5.0, 1.0, 0.5), (2.0, 7.0, 0.5), (9.0, 9.0, 0.5)]);
        let b = find_base_box(&objs, 4, &SeparatorConfig::default()).unwrap();
        assert!(objs.iter().all(|o| center_in(o, &b)));
        assert!(matches!(
            find_base_box(&objs, 5, &SeparatorConfig::default()),
            Err(Error::Unreachable { tau: 5 })
        ));
    }

    #[test]
    fn base_box_picks_one_of_two_far_clusters() {
        let mut cs = Vec::new();
        for k in 0..2 {
            for i in 0..5 {
                cs.push((1000.0 * k as f64 + 0.3 * i as f64, 0.0, 0.1));
            }
        }
        let objs = disks(&cs);
        let b = find_base_box(&objs, 5, &SeparatorConfig::default()).unwrap();
        let inside = objs.iter().filter(|o| center_in(o, &b)).count();
        assert_eq!(inside, 5);
        assert!(b.longest_side() < 10.0);
    }

    #[test]
    fn sweep_with_no_crossings() {
        let objs = disks(&[(0.0, 0.0, 0.1), (1.0, 1.0, 0.1)]);
        let base = BoxRegion::new([-5.0, -5.0], [5.0, 5.0]).unwrap();
        let s = shell_sweep(&objs, &base, 2, &SeparatorConfig::default()).unwrap();
        assert_eq!((s.m_star, s.boundary_measure), (1.0, 0));
    }

    #[test]
    fn sweep_with_unit_measure_has_one_shell() {
        let objs = disks(&[(0.0, 0.0, 1.0), (0.5, 0.0, 1.0)]);
        let base = BoxRegion::new([-1.0, -1.0], [1.0, 1.0]).unwrap();
        let s = shell_sweep(&objs, &base, 1, &SeparatorConfig::default()).unwrap();
        assert_eq!(s.shells.len(), 1);
        assert_eq!(s.m_star, 1.0);
    }

    #[test]
    fn sweep_of_random_small_disks_takes_the_minimum_shell() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cs: Vec<(f64, f64, f64)> = (0..100)
            .map(|_| (rng.gen_range(0.0..20.0), rng.gen_range(0.0..20.0), rng.gen_range(0.05..0.3)))
            .collect();
        let objs = disks(&cs);
        let base = BoxRegion::new([4.0, 5.0], [14.0, 13.0]).unwrap();
        let s = shell_sweep(&objs, &base, 25, &SeparatorConfig::default()).unwrap();
        assert_eq!(s.shells.len(), 3);
        // independent re-evaluation of every shell
        let mut values = Vec::new();
        for j in 0..3 {
            let shell = base.magnify(1.0 + j as f64 / 5.0).unwrap();
            let crossing: Vec<FatObject> = objs
                .iter()
                .filter(|o| classify(o, &shell) == RegionClass::Boundary)
                .cloned()
                .collect();
            values.push(crate::measure::greedy_pack(&crossing).unwrap().value);
        }
        let min = *values.iter().min().unwrap();
        assert_eq!(s.boundary_measure, min);
        let j = values.iter().position(|&v| v == min).unwrap();
        assert!((s.m_star - (1.0 + j as f64 / 5.0)).abs() < 1e-12);
    }

    #[test]
    fn two_far_clusters_split_cleanly() {
        let spec = GenSpec {
            family: ShapeFamily::Balls,
            dim: 2,
            layout: Layout::Clusters {
                clusters: 2,
                per_cluster: 10,
                spread: 1.0,
                gap: 500.0,
            },
            seed: 3,
        };
        // make the clusters internally disjoint: tiny disks on a lattice
        let mut inst = gen_instance(&spec).unwrap();
        for (i, o) in inst.objects.iter_mut().enumerate() {
            let k = (i / 10) as f64;
            let m = (i % 10) as f64;
            o.shape = crate::geometry::Shape::ball([500.0 * k + (m % 5.0), (m / 5.0).floor()], 0.1);
        }
        let r = separate(&inst.objects, &SeparatorConfig::default()).unwrap();
        assert_eq!(r.mu_total.value, 20);
        assert_eq!(r.mu_boundary.value, 0);
        assert!(r.is_balanced(0.8));
        assert_eq!(r.inside_ids.len() + r.outside_ids.len(), 20);
    }

    #[test]
    fn degenerate_centers_are_flagged() {
        let objs = disks(&[(1.0, 1.0, 1.0), (1.0, 1.0, 2.0), (1.0, 1.0, 3.0)]);
        let r = separate(&objs, &SeparatorConfig::default()).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.boundary_ids, vec![0, 1, 2]);
    }

    #[test]
    fn result_invariants_on_random_instances() {
        for seed in 0..20 {
            let inst = gen_instance(&GenSpec {
                family: ShapeFamily::Mixed,
                dim: 2 + (seed as usize % 2),
                layout: Layout::Random { n: 60, density: 0.4 },
                seed,
            })
            .unwrap();
            let cfg = SeparatorConfig::default();
            let r = separate(&inst.objects, &cfg).unwrap();
            assert!(r.region.aspect_ratio() <= 2.0 + GEOM_TOL);
            assert!(r.region.contains_box(&r.base_box));
            let d = inst.dim as f64;
            assert!(r.base_box.magnify(2f64.powf(1.0 / d)).unwrap().contains_box(&r.region));
            let mut all: Vec<usize> = r
                .inside_ids
                .iter()
                .chain(&r.outside_ids)
                .chain(&r.boundary_ids)
                .copied()
                .collect();
            all.sort_unstable();
            assert_eq!(all, (0..inst.len()).collect::<Vec<_>>());
            for o in &inst.objects {
                assert_eq!(r.class_of(o.id), Some(classify(o, &r.region)));
            }
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = SeparatorConfig::default();
        cfg.epsilon = 0.6;
        assert!(cfg.validate().is_err());
        cfg.epsilon = 0.5;
        assert!(cfg.validate().is_ok());
        assert!((cfg.worst_case_threshold(2, 1.0) - 1536f64.powi(2)).abs() < 1e-6);
    }
}
