//! Static SVG figures of planar instances.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{BoxRegion, Point, RegionClass, Shape};
use crate::instance::Instance;
use crate::separator::SeparatorResult;

const WIDTH: f64 = 800.0;

/// What to draw on top of the objects.
#[derive(Debug, Clone, Copy)]
pub enum Overlay<'a> {
    Plain,
    /// Box R, the base box, and objects colored by class.
    Separator(&'a SeparatorResult),
    /// Ids of a packing, drawn filled.
    Packing(&'a [usize]),
    /// Piercing points.
    Piercing(&'a [Point]),
}

pub fn render_svg(inst: &Instance, overlay: Overlay<'_>) -> Result<String> {
    if inst.dim != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: inst.dim,
        });
    }
    let mut boxes: Vec<BoxRegion> = inst.objects.iter().map(|o| o.bounding_box()).collect();
    if let Overlay::Separator(sep) = overlay {
        boxes.push(sep.region.clone());
    }
    let view = View::fit(&boxes);
    let mut out = String::new();
    let _ = write!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.0} {h:.0}\">\n\
         <style>.obj{{fill:none;stroke-width:1.2}}.inside{{stroke:#2b6cb0}}.outside{{stroke:#718096}}\
         .boundary{{stroke:#c53030}}.plain{{stroke:#2d3748}}.witness{{fill:#68d39155;stroke:#276749}}\
         .region{{fill:none;stroke:#d69e2e;stroke-width:2}}.base{{fill:none;stroke:#d69e2e;stroke-dasharray:4 3}}\
         .pierce{{fill:#c53030}}</style>\n\
         <rect class=\"frame\" x=\"0\" y=\"0\" width=\"{w:.0}\" height=\"{h:.0}\" fill=\"#ffffff\" stroke=\"#cbd5e0\"/>\n",
        w = view.width,
        h = view.height,
    );
    let witness: Vec<bool> = match overlay {
        Overlay::Packing(ids) => {
            let mut mark = vec![false; inst.len()];
            for &i in ids {
                if let Some(m) = mark.get_mut(i) {
                    *m = true;
                }
            }
            mark
        }
        _ => vec![false; inst.len()],
    };
    for (o, &filled) in inst.objects.iter().zip(&witness) {
        let class = match overlay {
            Overlay::Separator(sep) => match sep.class_of(o.id) {
                Some(RegionClass::Inside) => "inside",
                Some(RegionClass::Outside) => "outside",
                _ => "boundary",
            },
            _ => "plain",
        };
        let class = if filled {
            format!("obj {class} witness")
        } else {
            format!("obj {class}")
        };
        match &o.shape {
            Shape::Ball { center, radius } => {
                let (x, y) = view.map(center.coords());
                let _ = writeln!(
                    out,
                    "<circle class=\"{class}\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"{:.2}\"/>",
                    radius * view.scale
                );
            }
            Shape::AxisBox { low, high } => {
                let _ = writeln!(out, "{}", view.rect(&class, low.coords(), high.coords()));
            }
        }
    }
    match overlay {
        Overlay::Separator(sep) => {
            let _ = writeln!(out, "{}", view.rect("base", sep.base_box.low.coords(), sep.base_box.high.coords()));
            let _ = writeln!(out, "{}", view.rect("region", sep.region.low.coords(), sep.region.high.coords()));
        }
        Overlay::Piercing(points) => {
            for p in points {
                let (x, y) = view.map(p.coords());
                let _ = writeln!(out, "<circle class=\"pierce\" cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\"/>");
            }
        }
        Overlay::Plain | Overlay::Packing(_) => {}
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn save_svg(inst: &Instance, overlay: Overlay<'_>, path: impl AsRef<Path>) -> Result<()> {
    let text = render_svg(inst, overlay)?;
    std::fs::write(path, text)?;
    Ok(())
}

struct View {
    lo: [f64; 2],
    hi_y: f64,
    scale: f64,
    width: f64,
    height: f64,
    pad: f64,
}

impl View {
    fn fit(boxes: &[BoxRegion]) -> View {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for b in boxes {
            for a in 0..2 {
                lo[a] = lo[a].min(b.low.coords()[a]);
                hi[a] = hi[a].max(b.high.coords()[a]);
            }
        }
        if boxes.is_empty() {
            lo = [0.0, 0.0];
            hi = [1.0, 1.0];
        }
        let span_x = (hi[0] - lo[0]).max(1e-9);
        let span_y = (hi[1] - lo[1]).max(1e-9);
        let pad = 20.0;
        let scale = (WIDTH - 2.0 * pad) / span_x.max(span_y);
        View {
            lo,
            hi_y: hi[1],
            scale,
            width: span_x * scale + 2.0 * pad,
            height: span_y * scale + 2.0 * pad,
            pad,
        }
    }

    fn map(&self, c: &[f64]) -> (f64, f64) {
        (
            self.pad + (c[0] - self.lo[0]) * self.scale,
            self.pad + (self.hi_y - c[1]) * self.scale,
        )
    }

    fn rect(&self, class: &str, low: &[f64], high: &[f64]) -> String {
        let (x, y) = self.map(&[low[0], high[1]]);
        format!(
            "<rect class=\"{class}\" x=\"{x:.2}\" y=\"{y:.2}\" width=\"{:.2}\" height=\"{:.2}\"/>",
            (high[0] - low[0]) * self.scale,
            (high[1] - low[1]) * self.scale
        )
    }
}
