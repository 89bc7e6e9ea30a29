//! Instance suites and checks shared by the acceptance and calibration
//! targets.

#![allow(dead_code)]

use fatsep::bench::{run_bench, BenchRecord, BenchSuite, SolverKind};
use fatsep::exact::SolveConfig;
use fatsep::geometry::{intersects, Point};
use fatsep::instance::{gen_instance, GenSpec, Instance, Layout, ShapeFamily};
use fatsep::measure::greedy_pack;
use fatsep::oracle::brute_pack;
use fatsep::separator::{separate, SeparatorConfig, SeparatorResult};

pub const PACK_SHAPES: [(ShapeFamily, usize); 4] = [
    (ShapeFamily::Balls, 2),
    (ShapeFamily::Boxes, 2),
    (ShapeFamily::Balls, 3),
    (ShapeFamily::Boxes, 3),
];
pub const PACK_SIZES: [usize; 3] = [8, 12, 18];

pub const PIERCE_SHAPES: [(ShapeFamily, usize); 3] = [
    (ShapeFamily::Balls, 2),
    (ShapeFamily::Boxes, 2),
    (ShapeFamily::Boxes, 3),
];
pub const PIERCE_SIZES: [usize; 3] = [6, 10, 12];

pub const ORACLE_SEEDS: std::ops::RangeInclusive<u64> = 1..=200;
pub const HELD_OUT_SEEDS: std::ops::RangeInclusive<u64> = 1001..=2000;

pub const SEPARATOR_FIT_K: std::ops::RangeInclusive<usize> = 3..=5;
pub const SEPARATOR_CHECK_K: std::ops::RangeInclusive<usize> = 6..=10;
pub const SEPARATOR_SEEDS: [u64; 2] = [1, 2];

pub const LAW_FIT_P: [usize; 2] = [4, 9];
pub const LAW_CHECK_P: [usize; 2] = [16, 25];

pub fn shape_name(family: ShapeFamily, dim: usize) -> String {
    match (family, dim) {
        (ShapeFamily::Balls, 2) => "disks".to_string(),
        _ => format!("{}{}", family.name(), dim),
    }
}

pub fn random_instance(family: ShapeFamily, dim: usize, n: usize, seed: u64) -> Instance {
    gen_instance(&GenSpec {
        family,
        dim,
        layout: Layout::Random { n, density: 0.8 },
        seed,
    })
    .expect("generator accepts the suite parameters")
}

pub fn grid_instance(family: ShapeFamily, dim: usize, k: usize, seed: u64) -> Instance {
    gen_instance(&GenSpec {
        family,
        dim,
        layout: Layout::Grid {
            k,
            per_cell: 2,
            spacing: 6.0,
        },
        seed,
    })
    .expect("generator accepts the suite parameters")
}

/// The three solver settings every oracle comparison runs under: the
/// default, an always-recursing one, and one that always takes the pivot
/// fallback.
pub fn solver_configs() -> Vec<(&'static str, SolveConfig)> {
    vec![
        ("default", SolveConfig::default()),
        (
            "recursive",
            SolveConfig {
                base_threshold: 1,
                ..SolveConfig::default()
            },
        ),
        (
            "fallback",
            SolveConfig {
                base_threshold: 0,
                balance_cap: 0.0,
                ..SolveConfig::default()
            },
        ),
    ]
}

pub fn is_packing(inst: &Instance, ids: &[usize]) -> bool {
    let mut seen = ids.to_vec();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != ids.len() || seen.iter().any(|&i| i >= inst.len()) {
        return false;
    }
    ids.iter().enumerate().all(|(k, &a)| {
        ids[k + 1..]
            .iter()
            .all(|&b| !intersects(&inst.objects[a], &inst.objects[b]).unwrap_or(true))
    })
}

pub fn is_piercing(inst: &Instance, points: &[Point]) -> bool {
    inst.objects
        .iter()
        .all(|o| points.iter().any(|p| o.contains_point(p)))
}

/// `(greedy, exact)` packing numbers, the exact one from exhaustive search.
pub fn pack_sandwich(inst: &Instance) -> (usize, usize) {
    let greedy = greedy_pack(&inst.objects).expect("valid instance").value;
    let exact = brute_pack(inst).expect("within oracle limit").value;
    (greedy, exact)
}

pub fn separator_of(inst: &Instance) -> SeparatorResult {
    separate(&inst.objects, &SeparatorConfig::default()).expect("grid instances separate")
}

/// Boundary measure in units of `p^((d-1)/d)`.
pub fn boundary_ratio(sep: &SeparatorResult, p: usize, dim: usize) -> f64 {
    let scale = (p as f64).powf((dim as f64 - 1.0) / dim as f64);
    sep.mu_boundary.value as f64 / scale
}

pub fn node_law_rows() -> Vec<BenchRecord> {
    run_bench(&BenchSuite::node_law()).expect("node-law suite runs")
}

pub fn max_exponent(rows: &[BenchRecord], solver: SolverKind, ps: &[usize]) -> f64 {
    rows.iter()
        .filter(|r| r.solver == solver && ps.contains(&r.value))
        .filter_map(|r| r.law_exponent)
        .fold(0.0, f64::max)
}

/// Freezing rule: round a measured maximum up to the next multiple of `step`.
pub fn round_up(x: f64, step: f64) -> f64 {
    (x / step - 1e-9).ceil() / step.recip()
}
