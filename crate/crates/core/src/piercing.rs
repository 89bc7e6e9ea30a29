//! Finite candidate sets for piercing.
//!
//! For any subfamily with a common point, the returned set contains a point
//! lying in every member of that subfamily, so an optimal piercing can always
//! be drawn from it:
//!
//! * axis boxes: the common part of a set of boxes has its low corner at the
//!   per-axis maximum of their lows, so the grid of all low coordinates works;
//! * disks: the lowest point of a common part is either the lowest point of
//!   one disk or a crossing of two circles.
//!
//! Balls in three or more dimensions and mixed ball/box instances are not
//! supported.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::collection::Collection;
use crate::error::{Error, Result};
use crate::geometry::{FatObject, Point, Shape, GEOM_TOL};

/// Candidate pierce points for `objs`; see the module docs for soundness.
pub fn candidate_pierce_points(objs: &[FatObject]) -> Result<Vec<Point>> {
    let refs: Vec<&FatObject> = objs.iter().collect();
    candidates_for(&refs)
}

fn candidates_for(objs: &[&FatObject]) -> Result<Vec<Point>> {
    let Some(first) = objs.first() else {
        return Ok(Vec::new());
    };
    let d = first.dim();
    let all_boxes = objs
        .iter()
        .all(|o| matches!(o.shape, Shape::AxisBox { .. }));
    let all_balls = objs.iter().all(|o| matches!(o.shape, Shape::Ball { .. }));
    if all_boxes {
        Ok(box_grid(objs, d))
    } else if all_balls && d == 2 {
        Ok(disk_points(objs))
    } else if all_balls {
        Err(Error::UnsupportedPiercing(format!(
            "balls in dimension {d}; only disks (d = 2) are supported"
        )))
    } else {
        Err(Error::UnsupportedPiercing(
            "mixed ball/box instances".to_string(),
        ))
    }
}

fn box_grid(objs: &[&FatObject], d: usize) -> Vec<Point> {
    let mut axes: Vec<Vec<f64>> = vec![Vec::new(); d];
    for o in objs {
        if let Shape::AxisBox { low, .. } = &o.shape {
            for (axis, &c) in axes.iter_mut().zip(low.coords()) {
                axis.push(c);
            }
        }
    }
    for axis in &mut axes {
        axis.sort_by(f64::total_cmp);
        axis.dedup();
    }
    let mut out = Vec::new();
    // only grid points inside some box matter; walk each box's slab
    let mut seen: std::collections::HashSet<Vec<usize>> = std::collections::HashSet::new();
    for o in objs {
        let Shape::AxisBox { low, high } = &o.shape else {
            continue;
        };
        let ranges: Vec<Vec<usize>> = (0..d)
            .map(|i| {
                axes[i]
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| {
                        c >= low.coords()[i] - GEOM_TOL && c <= high.coords()[i] + GEOM_TOL
                    })
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        let mut idx = vec![0usize; d];
        'grid: loop {
            let key: Vec<usize> = (0..d).map(|i| ranges[i][idx[i]]).collect();
            if seen.insert(key.clone()) {
                out.push(Point::new(
                    key.iter().enumerate().map(|(i, &k)| axes[i][k]).collect(),
                ));
            }
            for i in 0..d {
                idx[i] += 1;
                if idx[i] < ranges[i].len() {
                    continue 'grid;
                }
                idx[i] = 0;
            }
            break;
        }
    }
    out
}

fn disk_points(objs: &[&FatObject]) -> Vec<Point> {
    let disks: Vec<(f64, f64, f64)> = objs
        .iter()
        .filter_map(|o| match &o.shape {
            Shape::Ball { center, radius } => Some((center.coords()[0], center.coords()[1], *radius)),
            _ => None,
        })
        .collect();
    let mut out: Vec<Point> = disks
        .iter()
        .map(|&(x, y, r)| Point::new(vec![x, y - r]))
        .collect();
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            out.extend(circle_crossings(disks[i], disks[j]));
        }
    }
    out
}

/// Crossing points of two circles given as (x, y, r).
pub(crate) fn circle_crossings(a: (f64, f64, f64), b: (f64, f64, f64)) -> Vec<Point> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let dist = dx.hypot(dy);
    if dist == 0.0 || dist > a.2 + b.2 + GEOM_TOL || dist < (a.2 - b.2).abs() - GEOM_TOL {
        return Vec::new();
    }
    let along = (dist * dist + a.2 * a.2 - b.2 * b.2) / (2.0 * dist);
    let h = (a.2 * a.2 - along * along).max(0.0).sqrt();
    let (ux, uy) = (dx / dist, dy / dist);
    let (mx, my) = (a.0 + along * ux, a.1 + along * uy);
    if h == 0.0 {
        vec![Point::new(vec![mx, my])]
    } else {
        vec![
            Point::new(vec![mx - h * uy, my + h * ux]),
            Point::new(vec![mx + h * uy, my - h * ux]),
        ]
    }
}

/// Candidate points of a subset together with the members each one pierces.
/// Points with identical coverage are merged, keeping the first.
pub(crate) struct CandidateSet {
    pub points: Vec<Point>,
    pub coverage: Vec<FixedBitSet>,
    /// Candidates piercing each position (indexed by collection position).
    pub by_object: Vec<Vec<usize>>,
}

impl CandidateSet {
    pub fn build(coll: &Collection<'_>, subset: &[usize]) -> Result<Self> {
        let objs: Vec<&FatObject> = subset.iter().map(|&p| coll.object(p)).collect();
        let raw = candidates_for(&objs)?;
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut points = Vec::new();
        let mut coverage = Vec::new();
        let mut by_object = vec![Vec::new(); coll.len()];
        for pt in raw {
            let mut cov = coll.empty_set();
            for &p in subset {
                if coll.object(p).contains_point(&pt) {
                    cov.insert(p);
                }
            }
            if cov.is_clear() || index.contains_key(&cov) {
                continue;
            }
            let k = points.len();
            for p in cov.ones() {
                by_object[p].push(k);
            }
            index.insert(cov.clone(), k);
            points.push(pt);
            coverage.push(cov);
        }
        Ok(CandidateSet {
            points,
            coverage,
            by_object,
        })
    }

    /// Candidates piercing `pos`, restricted to those whose coverage within
    /// `live` is not dominated by another's, most coverage first.
    pub fn branches(&self, pos: usize, live: &FixedBitSet) -> Vec<usize> {
        let eff: Vec<(usize, FixedBitSet)> = self.by_object[pos]
            .iter()
            .map(|&c| {
                let mut s = self.coverage[c].clone();
                s.intersect_with(live);
                (c, s)
            })
            .collect();
        let mut keep: Vec<(usize, usize)> = Vec::new();
        for (i, (c, s)) in eff.iter().enumerate() {
            let dominated = eff.iter().enumerate().any(|(j, (_, t))| {
                j != i && s.is_subset(t) && (s != t || j < i)
            });
            if !dominated {
                keep.push((*c, s.count_ones(..)));
            }
        }
        keep.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        keep.into_iter().map(|(c, _)| c).collect()
    }
}
