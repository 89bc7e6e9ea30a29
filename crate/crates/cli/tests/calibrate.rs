//! Measures the empirical constants frozen in `fatsep::calibration`.
//!
//! `cargo test -p fatsep-cli --release --test calibrate -- --ignored --nocapture`

mod common;

use common::*;
use fatsep::bench::SolverKind;

#[test]
#[ignore = "prints calibration values; run on demand"]
fn calibrate() {
    for (family, dim) in PACK_SHAPES {
        let mut worst = 1.0f64;
        for n in PACK_SIZES {
            for seed in ORACLE_SEEDS {
                let (greedy, exact) = pack_sandwich(&random_instance(family, dim, n, seed));
                worst = worst.max(exact as f64 / greedy as f64);
            }
        }
        println!(
            "kappa {}: max ratio {worst:.4}, frozen {}",
            shape_name(family, dim),
            round_up(worst, 1.0)
        );
    }

    let mut worst = 0.0f64;
    for dim in [2, 3] {
        for family in [fatsep::instance::ShapeFamily::Balls, fatsep::instance::ShapeFamily::Boxes] {
            for k in SEPARATOR_FIT_K {
                for seed in SEPARATOR_SEEDS {
                    let sep = separator_of(&grid_instance(family, dim, k, seed));
                    worst = worst.max(boundary_ratio(&sep, k.pow(dim as u32), dim));
                }
            }
        }
    }
    println!("c_sep: max ratio {worst:.4}, frozen {:.2}", round_up(worst, 0.01));

    let rows = node_law_rows();
    for solver in [SolverKind::Pack, SolverKind::Pierce] {
        let fit = max_exponent(&rows, solver, &LAW_FIT_P);
        println!("node law {solver}: max exponent {fit:.4}, frozen {:.2}", round_up(fit, 0.01));
    }
}
