//! Brute-force ground truth for small instances. Deliberately naive and
//! independent of the solver code: only the geometry predicates are shared.

use crate::error::{Error, Result};
use crate::geometry::{intersects, FatObject, Point, Shape};
use crate::instance::Instance;
use crate::measure::Witness;

pub const PACK_LIMIT: usize = 24;
pub const PIERCE_LIMIT: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMethod {
    ExhaustiveSubset,
    SetCoverExhaustive,
    FineGrid,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub value: usize,
    pub witness: Witness,
    pub method: OracleMethod,
}

fn adjacency(objs: &[FatObject]) -> Result<Vec<u32>> {
    let mut adj = vec![0u32; objs.len()];
    for i in 0..objs.len() {
        for j in i + 1..objs.len() {
            if intersects(&objs[i], &objs[j])? {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    Ok(adj)
}

/// Maximum pairwise-disjoint subfamily by include/exclude search.
pub fn brute_pack(inst: &Instance) -> Result<OracleResult> {
    let order: Vec<usize> = (0..inst.len()).collect();
    brute_pack_in_order(inst, &order)
}

/// As [`brute_pack`], visiting objects in the given order.
pub fn brute_pack_in_order(inst: &Instance, order: &[usize]) -> Result<OracleResult> {
    let n = inst.len();
    if n > PACK_LIMIT {
        return Err(Error::OracleGuard { n, limit: PACK_LIMIT });
    }
    let adj = adjacency(&inst.objects)?;
    let mut best = 0u32;
    dfs_pack(&adj, order, 0, 0, &mut best);
    let witness: Vec<usize> = (0..n).filter(|&i| best >> i & 1 == 1).collect();
    Ok(OracleResult {
        value: witness.len(),
        witness: Witness::Objects(witness),
        method: OracleMethod::ExhaustiveSubset,
    })
}

fn dfs_pack(adj: &[u32], order: &[usize], k: usize, chosen: u32, best: &mut u32) {
    if chosen.count_ones() + (order.len() - k) as u32 <= best.count_ones() {
        return;
    }
    let Some(&v) = order.get(k) else {
        *best = chosen;
        return;
    };
    if adj[v] & chosen == 0 {
        dfs_pack(adj, order, k + 1, chosen | 1 << v, best);
    }
    dfs_pack(adj, order, k + 1, chosen, best);
}

/// Minimum piercing by exhaustive cover over a finite point set that always
/// contains an optimal solution: the grid of lower corners for boxes, and
/// lowest points plus pairwise circle crossings for disks.
pub fn brute_pierce(inst: &Instance) -> Result<OracleResult> {
    let n = inst.len();
    if n > PIERCE_LIMIT {
        return Err(Error::OracleGuard { n, limit: PIERCE_LIMIT });
    }
    let points = oracle_points(inst)?;
    let (value, chosen) = min_cover(&inst.objects, &points);
    Ok(OracleResult {
        value,
        witness: Witness::Points(chosen),
        method: OracleMethod::SetCoverExhaustive,
    })
}

/// Minimum piercing using only points of a regular grid with `steps`
/// intervals per axis over the bounding box (d = 2). Never below the true
/// piercing number; equal to it unless some needed region is thinner than
/// a grid cell.
pub fn fine_grid_pierce(inst: &Instance, steps: usize) -> Result<OracleResult> {
    let n = inst.len();
    if inst.dim != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: inst.dim });
    }
    if n > PIERCE_LIMIT {
        return Err(Error::OracleGuard { n, limit: PIERCE_LIMIT });
    }
    if n == 0 {
        return Ok(OracleResult {
            value: 0,
            witness: Witness::Points(Vec::new()),
            method: OracleMethod::FineGrid,
        });
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for o in &inst.objects {
        let bb = o.bounding_box();
        for a in 0..2 {
            lo[a] = lo[a].min(bb.low.coords()[a]);
            hi[a] = hi[a].max(bb.high.coords()[a]);
        }
    }
    let mut points = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for i in 0..=steps {
        let x = lo[0] + (hi[0] - lo[0]) * i as f64 / steps as f64;
        for j in 0..=steps {
            let y = lo[1] + (hi[1] - lo[1]) * j as f64 / steps as f64;
            let p = Point::new(vec![x, y]);
            let mask = mask_of(&inst.objects, &p);
            if mask != 0 && seen.insert(mask) {
                points.push(p);
            }
        }
    }
    let (value, chosen) = min_cover(&inst.objects, &points);
    Ok(OracleResult {
        value,
        witness: Witness::Points(chosen),
        method: OracleMethod::FineGrid,
    })
}

fn mask_of(objs: &[FatObject], p: &Point) -> u32 {
    objs.iter()
        .enumerate()
        .filter(|(_, o)| o.contains_point(p))
        .fold(0, |m, (i, _)| m | 1 << i)
}

fn oracle_points(inst: &Instance) -> Result<Vec<Point>> {
    let objs = &inst.objects;
    let all_boxes = objs.iter().all(|o| matches!(o.shape, Shape::AxisBox { .. }));
    let all_balls = objs.iter().all(|o| matches!(o.shape, Shape::Ball { .. }));
    if all_boxes {
        let d = inst.dim;
        let mut axes: Vec<Vec<f64>> = vec![Vec::new(); d];
        for o in objs {
            if let Shape::AxisBox { low, .. } = &o.shape {
                for (a, &v) in low.coords().iter().enumerate() {
                    axes[a].push(v);
                }
            }
        }
        let mut points = vec![Vec::new()];
        for axis in &axes {
            points = points
                .into_iter()
                .flat_map(|p: Vec<f64>| {
                    axis.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        return Ok(points.into_iter().map(Point::new).collect());
    }
    if all_balls && inst.dim == 2 {
        let disks: Vec<(f64, f64, f64)> = objs
            .iter()
            .map(|o| match &o.shape {
                Shape::Ball { center, radius } => (center.coords()[0], center.coords()[1], *radius),
                Shape::AxisBox { .. } => unreachable!(),
            })
            .collect();
        let mut points: Vec<Point> = disks
            .iter()
            .map(|&(x, y, r)| Point::new(vec![x, y - r]))
            .collect();
        for i in 0..disks.len() {
            for j in i + 1..disks.len() {
                points.extend(crossings(disks[i], disks[j]));
            }
        }
        return Ok(points);
    }
    Err(Error::UnsupportedPiercing(format!(
        "oracle piercing needs all boxes, or all disks in the plane (d = {})",
        inst.dim
    )))
}

/// Intersection points of two circles, via the radical line.
fn crossings((x1, y1, r1): (f64, f64, f64), (x2, y2, r2): (f64, f64, f64)) -> Vec<Point> {
    let (dx, dy) = (x2 - x1, y2 - y1);
    let dd = dx * dx + dy * dy;
    if dd == 0.0 {
        return Vec::new();
    }
    let d = dd.sqrt();
    if d > r1 + r2 || d < (r1 - r2).abs() {
        return Vec::new();
    }
    let along = (r1 * r1 - r2 * r2 + dd) / (2.0 * d);
    let h = (r1 * r1 - along * along).max(0.0).sqrt();
    let (ux, uy) = (dx / d, dy / d);
    let (mx, my) = (x1 + along * ux, y1 + along * uy);
    vec![
        Point::new(vec![mx - h * uy, my + h * ux]),
        Point::new(vec![mx + h * uy, my - h * ux]),
    ]
}

/// Smallest subset of `points` meeting every object, by iterative deepening
/// over the lowest-indexed unpierced object.
fn min_cover(objs: &[FatObject], points: &[Point]) -> (usize, Vec<Point>) {
    let n = objs.len();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut masks: Vec<(u32, usize)> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let m = mask_of(objs, p);
        if m != 0 && !masks.iter().any(|&(q, _)| q == m) {
            masks.push((m, i));
        }
    }
    let maximal: Vec<(u32, usize)> = masks
        .iter()
        .copied()
        .filter(|&(m, _)| !masks.iter().any(|&(q, _)| q != m && q & m == m))
        .collect();
    let mut chosen = Vec::new();
    for k in 0..=n {
        if cover_within(&maximal, full, 0, k, &mut chosen) {
            return (k, chosen.iter().map(|&i| points[i].clone()).collect());
        }
    }
    unreachable!("every object holds one of its own points")
}

fn cover_within(masks: &[(u32, usize)], full: u32, covered: u32, left: usize, chosen: &mut Vec<usize>) -> bool {
    if covered == full {
        return true;
    }
    if left == 0 {
        return false;
    }
    let first = (!covered & full).trailing_zeros();
    for &(m, i) in masks {
        if m >> first & 1 == 1 {
            chosen.push(i);
            if cover_within(masks, full, covered | m, left - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}
