//! Instances, seeded generators, and the line-oriented text format.
//!
//! ```text
//! fatsep v1 d=2 n=2
//! # label=example
//! # seed=7
//! ball 0 0 1
//! box 2 2 3 3.5
//! ```
//!
//! A `ball` line carries `d` center coordinates and a radius; a `box` line
//! carries `d` low and then `d` high coordinates. Other `#` lines are
//! comments. Numbers are written in shortest round-trip form.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{FatObject, Shape};

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub dim: usize,
    pub objects: Vec<FatObject>,
    pub label: String,
    pub seed: u64,
}

impl Instance {
    /// Builds an instance from shapes, assigning dense ids in order.
    pub fn new(dim: usize, shapes: Vec<Shape>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidConfig(format!("dimension must be >= 2, got {dim}")));
        }
        let objects = shapes
            .into_iter()
            .enumerate()
            .map(|(id, shape)| {
                if shape.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: shape.dim(),
                    });
                }
                FatObject::new(id, shape)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            dim,
            objects,
            label: String::new(),
            seed: 0,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Sub-instance on the given ids, renumbered densely in the given order.
    pub fn subset(&self, ids: &[usize]) -> Instance {
        Instance {
            dim: self.dim,
            objects: ids
                .iter()
                .enumerate()
                .map(|(k, &id)| FatObject {
                    id: k,
                    shape: self.objects[id].shape.clone(),
                })
                .collect(),
            label: self.label.clone(),
            seed: self.seed,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "fatsep v1 d={} n={}", self.dim, self.objects.len()).unwrap();
        if !self.label.is_empty() {
            writeln!(out, "# label={}", self.label).unwrap();
        }
        writeln!(out, "# seed={}", self.seed).unwrap();
        for o in &self.objects {
            match &o.shape {
                Shape::Ball { center, radius } => {
                    out.push_str("ball");
                    for c in center.coords() {
                        write!(out, " {c}").unwrap();
                    }
                    writeln!(out, " {radius}").unwrap();
                }
                Shape::AxisBox { low, high } => {
                    out.push_str("box");
                    for c in low.coords().iter().chain(high.coords()) {
                        write!(out, " {c}").unwrap();
                    }
                    out.push('\n');
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Instance> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hline, header) = lines
            .by_ref()
            .find(|(_, l)| !l.is_empty())
            .ok_or(Error::Parse {
                line: 1,
                msg: "empty input".into(),
            })?;
        let (dim, n) = parse_header(header).map_err(|msg| Error::Parse { line: hline, msg })?;
        let mut label = String::new();
        let mut seed = 0;
        let mut shapes = Vec::new();
        for (line, l) in lines {
            if l.is_empty() {
                continue;
            }
            if let Some(comment) = l.strip_prefix('#') {
                let comment = comment.trim_start();
                if let Some(v) = comment.strip_prefix("label=") {
                    label = v.to_string();
                } else if let Some(v) = comment.strip_prefix("seed=") {
                    seed = v.trim().parse().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad seed {v:?}"),
                    })?;
                }
                continue;
            }
            let shape = parse_object(l, dim).map_err(|msg| Error::Parse { line, msg })?;
            shape
                .validate(crate::geometry::DEFAULT_MAX_ASPECT)
                .map_err(|e| Error::Parse {
                    line,
                    msg: e.to_string(),
                })?;
            shapes.push(shape);
        }
        if shapes.len() != n {
            return Err(Error::Parse {
                line: hline,
                msg: format!("header declares n={n} but {} objects follow", shapes.len()),
            });
        }
        Ok(Instance::new(dim, shapes)?.with_label(label).with_seed(seed))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Instance> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    Instance::read(path)
}

pub fn write_instance(inst: &Instance, path: impl AsRef<Path>) -> Result<()> {
    inst.write(path)
}

fn parse_header(l: &str) -> std::result::Result<(usize, usize), String> {
    let mut parts = l.split_whitespace();
    if parts.next() != Some("fatsep") || parts.next() != Some("v1") {
        return Err(format!("expected `fatsep v1 d=<d> n=<n>`, got {l:?}"));
    }
    let mut dim = None;
    let mut n = None;
    for p in parts {
        if let Some(v) = p.strip_prefix("d=") {
            dim = v.parse().ok();
        } else if let Some(v) = p.strip_prefix("n=") {
            n = v.parse().ok();
        }
    }
    match (dim, n) {
        (Some(d), Some(n)) if d >= 2 => Ok((d, n)),
        _ => Err(format!("header needs d>=2 and n, got {l:?}")),
    }
}

fn parse_object(l: &str, dim: usize) -> std::result::Result<Shape, String> {
    let mut parts = l.split_whitespace();
    let kind = parts.next().unwrap_or_default();
    let nums: Vec<f64> = parts
        .map(|t| t.parse::<f64>().map_err(|_| format!("bad number {t:?}")))
        .collect::<std::result::Result<_, _>>()?;
    match kind {
        "ball" if nums.len() == dim + 1 => {
            Ok(Shape::ball(nums[..dim].to_vec(), nums[dim]))
        }
        "ball" => Err(format!(
            "ball needs {} numbers (center and radius), got {}",
            dim + 1,
            nums.len()
        )),
        "box" if nums.len() == 2 * dim => {
            Ok(Shape::axis_box(nums[..dim].to_vec(), nums[dim..].to_vec()))
        }
        "box" => Err(format!(
            "box needs {} numbers (low and high corners), got {}",
            2 * dim,
            nums.len()
        )),
        other => Err(format!("unknown object kind {other:?}")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeFamily {
    Balls,
    Boxes,
    Mixed,
}

impl ShapeFamily {
    pub fn name(self) -> &'static str {
        match self {
            ShapeFamily::Balls => "balls",
            ShapeFamily::Boxes => "boxes",
            ShapeFamily::Mixed => "mixed",
        }
    }
}

impl std::str::FromStr for ShapeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "balls" | "ball" | "disks" | "disk" => Ok(ShapeFamily::Balls),
            "boxes" | "box" => Ok(ShapeFamily::Boxes),
            "mixed" => Ok(ShapeFamily::Mixed),
            _ => Err(Error::InvalidConfig(format!("unknown shape family {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Layout {
    /// `n` objects with sizes in [1, 3] and centers uniform in a cube sized so
    /// that a size-2 cube holds `density` centers on average.
    Random { n: usize, density: f64 },
    /// `clusters` groups of `per_cluster` objects, cluster centers on a line
    /// `gap` apart, members within `spread` of their cluster center.
    Clusters {
        clusters: usize,
        per_cluster: usize,
        spread: f64,
        gap: f64,
    },
    /// `k^d` cells `spacing` apart; each cell holds `per_cell` objects that
    /// all contain the cell center, so the packing and piercing numbers are
    /// both exactly `k^d` when `spacing` is at least 6.
    Grid {
        k: usize,
        per_cell: usize,
        spacing: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub family: ShapeFamily,
    pub dim: usize,
    pub layout: Layout,
    pub seed: u64,
}

impl GenSpec {
    pub fn label(&self) -> String {
        let layout = match &self.layout {
            Layout::Random { n, density } => format!("random-n{n}-rho{density}"),
            Layout::Clusters {
                clusters,
                per_cluster,
                ..
            } => format!("clusters-{clusters}x{per_cluster}"),
            Layout::Grid { k, per_cell, .. } => format!("grid-k{k}-m{per_cell}"),
        };
        format!("{}-d{}-{}-s{}", self.family.name(), self.dim, layout, self.seed)
    }
}

pub fn gen_instance(spec: &GenSpec) -> Result<Instance> {
    let d = spec.dim;
    if d < 2 {
        return Err(Error::InvalidConfig(format!("dimension must be >= 2, got {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut shapes = Vec::new();
    match spec.layout {
        Layout::Random { n, density } => {
            if !(density > 0.0) {
                return Err(Error::InvalidConfig("density must be positive".into()));
            }
            let side = 2.0 * (n.max(1) as f64 / density).powf(1.0 / d as f64);
            for _ in 0..n {
                let c: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..side)).collect();
                let size = rng.gen_range(1.0..3.0);
                shapes.push(random_shape(&mut rng, spec.family, &c, size));
            }
        }
        Layout::Clusters {
            clusters,
            per_cluster,
            spread,
            gap,
        } => {
            for k in 0..clusters {
                for _ in 0..per_cluster {
                    let mut c: Vec<f64> = (0..d).map(|_| rng.gen_range(-spread..=spread)).collect();
                    c[0] += k as f64 * gap;
                    let size = rng.gen_range(0.1..0.3) * spread.max(1e-3) * 2.0;
                    shapes.push(random_shape(&mut rng, spec.family, &c, size));
                }
            }
        }
        Layout::Grid {
            k,
            per_cell,
            spacing,
        } => {
            let cells = k.pow(d as u32);
            for cell in 0..cells {
                let mut rem = cell;
                let center: Vec<f64> = (0..d)
                    .map(|_| {
                        let i = rem % k;
                        rem /= k;
                        i as f64 * spacing
                    })
                    .collect();
                for m in 0..per_cell {
                    let (c, size) = if m == 0 {
                        (center.clone(), 2.0)
                    } else {
                        let c = center
                            .iter()
                            .map(|x| x + rng.gen_range(-0.2..0.2))
                            .collect();
                        (c, rng.gen_range(1.2..2.0))
                    };
                    shapes.push(cell_shape(&mut rng, spec.family, &c, &center, size));
                }
            }
        }
    }
    Ok(Instance::new(d, shapes)?
        .with_label(spec.label())
        .with_seed(spec.seed))
}

fn random_shape(rng: &mut ChaCha8Rng, family: ShapeFamily, c: &[f64], size: f64) -> Shape {
    let ball = match family {
        ShapeFamily::Balls => true,
        ShapeFamily::Boxes => false,
        ShapeFamily::Mixed => rng.gen_bool(0.5),
    };
    if ball {
        Shape::ball(c.to_vec(), 0.5 * size)
    } else {
        let sides: Vec<f64> = c.iter().map(|_| size * rng.gen_range(0.5..1.0)).collect();
        Shape::axis_box(
            c.iter().zip(&sides).map(|(x, s)| x - 0.5 * s).collect::<Vec<_>>(),
            c.iter().zip(&sides).map(|(x, s)| x + 0.5 * s).collect::<Vec<_>>(),
        )
    }
}

/// A shape around `c` that contains `anchor`: jitter is at most 0.2 per axis
/// and every half-extent is at least 0.3.
fn cell_shape(
    rng: &mut ChaCha8Rng,
    family: ShapeFamily,
    c: &[f64],
    anchor: &[f64],
    size: f64,
) -> Shape {
    let s = random_shape(rng, family, c, size);
    match &s {
        Shape::Ball { center, radius } => {
            debug_assert!(center.dist_sq(&anchor.to_vec().into()) <= radius * radius);
        }
        Shape::AxisBox { low, high } => {
            debug_assert!(low
                .coords()
                .iter()
                .zip(high.coords())
                .zip(anchor)
                .all(|((l, h), a)| l <= a && a <= h));
        }
    }
    s
}
