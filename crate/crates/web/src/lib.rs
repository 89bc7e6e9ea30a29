//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every operation takes an instance in the text format and returns a
//! [`Scene`]: an SVG drawing plus a one-line summary.

use wasm_bindgen::prelude::*;

use fatsep::exact::{solve_pack, solve_pierce, SolveConfig};
use fatsep::instance::{gen_instance, GenSpec, Instance, Layout, ShapeFamily};
use fatsep::separator::{separate, SeparatorConfig};
use fatsep::svg::{render_svg, Overlay};

/// Largest instance the page will solve exactly.
pub const MAX_SOLVE: usize = 300;

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Scene {
    svg: String,
    summary: String,
}

#[wasm_bindgen]
impl Scene {
    #[wasm_bindgen(getter)]
    pub fn svg(&self) -> String {
        self.svg.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn summary(&self) -> String {
        self.summary.clone()
    }
}

pub fn random_text(family: &str, n: usize, seed: u32) -> fatsep::Result<String> {
    let spec = GenSpec {
        family: family.parse::<ShapeFamily>()?,
        dim: 2,
        layout: Layout::Random { n, density: 0.8 },
        seed: seed.into(),
    };
    Ok(gen_instance(&spec)?.to_text())
}

fn planar(text: &str) -> fatsep::Result<Instance> {
    let inst = Instance::parse(text)?;
    if inst.dim != 2 {
        return Err(fatsep::Error::DimensionMismatch {
            expected: 2,
            found: inst.dim,
        });
    }
    Ok(inst)
}

fn solvable(text: &str) -> fatsep::Result<Instance> {
    let inst = planar(text)?;
    if inst.len() > MAX_SOLVE {
        return Err(fatsep::Error::InvalidConfig(format!(
            "the demo solves at most {MAX_SOLVE} objects, got {}",
            inst.len()
        )));
    }
    Ok(inst)
}

pub fn separator_scene(text: &str, epsilon: f64) -> fatsep::Result<Scene> {
    let inst = planar(text)?;
    let cfg = SeparatorConfig {
        epsilon,
        ..SeparatorConfig::default()
    };
    let sep = separate(&inst.objects, &cfg)?;
    let summary = format!(
        "measure {} | inside {} | outside {} | boundary {} ({} objects) | m* {:.3}{}",
        sep.mu_total.value,
        sep.mu_inside.value,
        sep.mu_outside.value,
        sep.mu_boundary.value,
        sep.boundary_ids.len(),
        sep.m_star,
        if sep.is_balanced(cfg.balance_cap) { "" } else { " | unbalanced" }
    );
    Ok(Scene {
        svg: render_svg(&inst, Overlay::Separator(&sep))?,
        summary,
    })
}

pub fn packing_scene(text: &str) -> fatsep::Result<Scene> {
    let inst = solvable(text)?;
    let s = solve_pack(&inst, &SolveConfig::default())?;
    Ok(Scene {
        svg: render_svg(&inst, Overlay::Packing(&s.witness))?,
        summary: format!(
            "packing number {} | {} search nodes | recursion depth {}",
            s.value, s.nodes, s.depth
        ),
    })
}

pub fn piercing_scene(text: &str) -> fatsep::Result<Scene> {
    let inst = solvable(text)?;
    let s = solve_pierce(&inst, &SolveConfig::default())?;
    Ok(Scene {
        svg: render_svg(&inst, Overlay::Piercing(&s.witness))?,
        summary: format!(
            "piercing number {} | {} search nodes | recursion depth {}",
            s.value, s.nodes, s.depth
        ),
    })
}

fn js(e: fatsep::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn generate(family: &str, n: usize, seed: u32) -> Result<String, JsError> {
    random_text(family, n, seed).map_err(js)
}

#[wasm_bindgen(js_name = showSeparator)]
pub fn show_separator(text: &str, epsilon: f64) -> Result<Scene, JsError> {
    separator_scene(text, epsilon).map_err(js)
}

#[wasm_bindgen(js_name = showPacking)]
pub fn show_packing(text: &str) -> Result<Scene, JsError> {
    packing_scene(text).map_err(js)
}

#[wasm_bindgen(js_name = showPiercing)]
pub fn show_piercing(text: &str) -> Result<Scene, JsError> {
    piercing_scene(text).map_err(js)
}
