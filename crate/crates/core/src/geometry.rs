//! Geometric primitives: points, fat objects (balls and bounded-aspect axis
//! boxes), box regions, and the closed-set predicates everything else is
//! built on.
//!
//! All predicates treat shapes as closed sets. Coincidences within
//! [`GEOM_TOL`] count as contact, so near-tangent objects intersect and
//! objects grazing a box face are classified [`RegionClass::Boundary`].

use std::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance applied to every boundary coincidence test.
pub const GEOM_TOL: f64 = 1e-9;

/// Largest aspect ratio accepted for an [`Shape::AxisBox`] by default.
pub const DEFAULT_MAX_ASPECT: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn dist_sq(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Point(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Point(v.to_vec())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Ball { center: Point, radius: f64 },
    AxisBox { low: Point, high: Point },
}

impl Shape {
    pub fn ball(center: impl Into<Point>, radius: f64) -> Self {
        Shape::Ball {
            center: center.into(),
            radius,
        }
    }

    pub fn axis_box(low: impl Into<Point>, high: impl Into<Point>) -> Self {
        Shape::AxisBox {
            low: low.into(),
            high: high.into(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Shape::Ball { center, .. } => center.dim(),
            Shape::AxisBox { low, .. } => low.dim(),
        }
    }

    pub fn validate(&self, max_aspect: f64) -> Result<()> {
        match self {
            Shape::Ball { center, radius } => {
                if !center.is_finite() || !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::InvalidShape(format!(
                        "ball needs a finite center and positive radius, got {center} r={radius}"
                    )));
                }
            }
            Shape::AxisBox { low, high } => {
                if low.dim() != high.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: low.dim(),
                        found: high.dim(),
                    });
                }
                if !low.is_finite() || !high.is_finite() {
                    return Err(Error::InvalidShape("box corners must be finite".into()));
                }
                if low.coords().iter().zip(high.coords()).any(|(l, h)| l >= h) {
                    return Err(Error::InvalidShape(format!(
                        "box needs low < high on every axis, got {low} .. {high}"
                    )));
                }
                let aspect = side_aspect(low.coords(), high.coords());
                if aspect > max_aspect + GEOM_TOL {
                    return Err(Error::InvalidShape(format!(
                        "box aspect ratio {aspect} exceeds {max_aspect}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A member of the collection: a shape tagged with its index in the instance.
#[derive(Debug, Clone, PartialEq)]
pub struct FatObject {
    pub id: usize,
    pub shape: Shape,
}

impl FatObject {
    /// Builds an object and checks it against [`DEFAULT_MAX_ASPECT`].
    pub fn new(id: usize, shape: Shape) -> Result<Self> {
        shape.validate(DEFAULT_MAX_ASPECT)?;
        Ok(FatObject { id, shape })
    }

    pub fn ball(id: usize, center: impl Into<Point>, radius: f64) -> Result<Self> {
        Self::new(id, Shape::ball(center, radius))
    }

    pub fn axis_box(id: usize, low: impl Into<Point>, high: impl Into<Point>) -> Result<Self> {
        Self::new(id, Shape::axis_box(low, high))
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    /// Side of the smallest enclosing axis-aligned cube.
    pub fn size(&self) -> f64 {
        match &self.shape {
            Shape::Ball { radius, .. } => 2.0 * radius,
            Shape::AxisBox { low, high } => low
                .coords()
                .iter()
                .zip(high.coords())
                .map(|(l, h)| h - l)
                .fold(0.0, f64::max),
        }
    }

    /// Ball center, or box midpoint.
    pub fn center(&self) -> Point {
        match &self.shape {
            Shape::Ball { center, .. } => center.clone(),
            Shape::AxisBox { low, high } => Point(
                low.coords()
                    .iter()
                    .zip(high.coords())
                    .map(|(l, h)| 0.5 * (l + h))
                    .collect(),
            ),
        }
    }

    pub fn bounding_box(&self) -> BoxRegion {
        match &self.shape {
            Shape::Ball { center, radius } => BoxRegion {
                low: Point(center.coords().iter().map(|c| c - radius).collect()),
                high: Point(center.coords().iter().map(|c| c + radius).collect()),
            },
            Shape::AxisBox { low, high } => BoxRegion {
                low: low.clone(),
                high: high.clone(),
            },
        }
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        match &self.shape {
            Shape::Ball { center, radius } => {
                let r = radius + GEOM_TOL;
                center.dist_sq(p) <= r * r
            }
            Shape::AxisBox { low, high } => p
                .coords()
                .iter()
                .zip(low.coords().iter().zip(high.coords()))
                .all(|(x, (l, h))| *x >= l - GEOM_TOL && *x <= h + GEOM_TOL),
        }
    }
}

fn side_aspect(low: &[f64], high: &[f64]) -> f64 {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (l, h) in low.iter().zip(high) {
        let s = h - l;
        lo = lo.min(s);
        hi = hi.max(s);
    }
    hi / lo
}

/// Squared Euclidean distance from `p` to the closed box `[low, high]`.
fn point_box_dist_sq(p: &[f64], low: &[f64], high: &[f64]) -> f64 {
    p.iter()
        .zip(low.iter().zip(high))
        .map(|(x, (l, h))| {
            let d = if x < l {
                l - x
            } else if x > h {
                x - h
            } else {
                0.0
            };
            d * d
        })
        .sum()
}

/// True iff the closed shapes share a point (up to [`GEOM_TOL`]).
pub fn intersects(a: &FatObject, b: &FatObject) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(intersects_unchecked(a, b))
}

pub(crate) fn intersects_unchecked(a: &FatObject, b: &FatObject) -> bool {
    use Shape::*;
    match (&a.shape, &b.shape) {
        (
            Ball {
                center: c1,
                radius: r1,
            },
            Ball {
                center: c2,
                radius: r2,
            },
        ) => {
            let r = r1 + r2 + GEOM_TOL;
            c1.dist_sq(c2) <= r * r
        }
        (Ball { center, radius }, AxisBox { low, high })
        | (AxisBox { low, high }, Ball { center, radius }) => {
            let r = radius + GEOM_TOL;
            point_box_dist_sq(center.coords(), low.coords(), high.coords()) <= r * r
        }
        (AxisBox { low: l1, high: h1 }, AxisBox { low: l2, high: h2 }) => (0..l1.dim()).all(|i| {
            l1.coords()[i] <= h2.coords()[i] + GEOM_TOL && l2.coords()[i] <= h1.coords()[i] + GEOM_TOL
        }),
    }
}

/// Where an object sits relative to a closed box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionClass {
    /// Contained in the open interior.
    Inside,
    /// Disjoint from the closed box.
    Outside,
    /// Meets the box boundary.
    Boundary,
}

pub fn classify(obj: &FatObject, region: &BoxRegion) -> RegionClass {
    let (bl, bh) = (region.low.coords(), region.high.coords());
    match &obj.shape {
        Shape::Ball { center, radius } => {
            let c = center.coords();
            let r = radius + GEOM_TOL;
            if point_box_dist_sq(c, bl, bh) > r * r {
                RegionClass::Outside
            } else if c
                .iter()
                .zip(bl.iter().zip(bh))
                .all(|(x, (l, h))| x - radius > l + GEOM_TOL && x + radius < h - GEOM_TOL)
            {
                RegionClass::Inside
            } else {
                RegionClass::Boundary
            }
        }
        Shape::AxisBox { low, high } => {
            let (ol, oh) = (low.coords(), high.coords());
            let mut inside = true;
            for i in 0..ol.len() {
                if ol[i] > bh[i] + GEOM_TOL || oh[i] < bl[i] - GEOM_TOL {
                    return RegionClass::Outside;
                }
                if !(ol[i] > bl[i] + GEOM_TOL && oh[i] < bh[i] - GEOM_TOL) {
                    inside = false;
                }
            }
            if inside {
                RegionClass::Inside
            } else {
                RegionClass::Boundary
            }
        }
    }
}

/// True iff the object's center lies in the closed box.
pub fn center_in(obj: &FatObject, region: &BoxRegion) -> bool {
    region.contains_point(&obj.center())
}

/// An axis-aligned box region with `low < high` on every axis.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRegion {
    pub low: Point,
    pub high: Point,
}

impl BoxRegion {
    pub fn new(low: impl Into<Point>, high: impl Into<Point>) -> Result<Self> {
        let (low, high) = (low.into(), high.into());
        if low.dim() != high.dim() {
            return Err(Error::DimensionMismatch {
                expected: low.dim(),
                found: high.dim(),
            });
        }
        if !low.is_finite() || !high.is_finite() {
            return Err(Error::InvalidShape("box corners must be finite".into()));
        }
        if low.coords().iter().zip(high.coords()).any(|(l, h)| l >= h) {
            return Err(Error::InvalidShape(format!(
                "box needs low < high on every axis, got {low} .. {high}"
            )));
        }
        Ok(BoxRegion { low, high })
    }

    /// Axis-aligned box with the given low corner and side lengths.
    pub fn from_corner(low: &[f64], sides: &[f64]) -> Self {
        BoxRegion {
            low: Point(low.to_vec()),
            high: Point(low.iter().zip(sides).map(|(l, s)| l + s).collect()),
        }
    }

    pub fn dim(&self) -> usize {
        self.low.dim()
    }

    pub fn sides(&self) -> Vec<f64> {
        self.low
            .coords()
            .iter()
            .zip(self.high.coords())
            .map(|(l, h)| h - l)
            .collect()
    }

    pub fn center(&self) -> Point {
        Point(
            self.low
                .coords()
                .iter()
                .zip(self.high.coords())
                .map(|(l, h)| 0.5 * (l + h))
                .collect(),
        )
    }

    pub fn volume(&self) -> f64 {
        self.sides().iter().product()
    }

    pub fn longest_side(&self) -> f64 {
        self.sides().into_iter().fold(0.0, f64::max)
    }

    pub fn shortest_side(&self) -> f64 {
        self.sides().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Longest side over shortest side.
    pub fn aspect_ratio(&self) -> f64 {
        side_aspect(self.low.coords(), self.high.coords())
    }

    pub fn contains_point(&self, p: &Point) -> bool {
        p.coords()
            .iter()
            .zip(self.low.coords().iter().zip(self.high.coords()))
            .all(|(x, (l, h))| *x >= *l && *x <= *h)
    }

    /// Closed containment of `other` in `self`, with [`GEOM_TOL`] slack.
    pub fn contains_box(&self, other: &BoxRegion) -> bool {
        (0..self.dim()).all(|i| {
            other.low.coords()[i] >= self.low.coords()[i] - GEOM_TOL
                && other.high.coords()[i] <= self.high.coords()[i] + GEOM_TOL
        })
    }

    /// Same center, every side scaled by `m >= 1`.
    pub fn magnify(&self, m: f64) -> Result<BoxRegion> {
        if !(m >= 1.0) || !m.is_finite() {
            return Err(Error::InvalidMagnification(m));
        }
        let c = self.center();
        let (low, high) = c
            .coords()
            .iter()
            .zip(self.sides())
            .map(|(c, s)| (c - 0.5 * m * s, c + 0.5 * m * s))
            .unzip();
        Ok(BoxRegion {
            low: Point(low),
            high: Point(high),
        })
    }

    /// Cuts the box through the middle of its longest side; ties go to the
    /// lowest axis index.
    pub fn split_longest(&self) -> (BoxRegion, BoxRegion) {
        let sides = self.sides();
        let mut axis = 0;
        for (i, s) in sides.iter().enumerate() {
            if *s > sides[axis] {
                axis = i;
            }
        }
        let mid = 0.5 * (self.low.coords()[axis] + self.high.coords()[axis]);
        let mut first = self.clone();
        let mut second = self.clone();
        first.high.0[axis] = mid;
        second.low.0[axis] = mid;
        (first, second)
    }
}

impl fmt::Display for BoxRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} .. {}]", self.low, self.high)
    }
}
