//! Empirical constants, measured once by the `calibrate` test target of the
//! command-line crate
//! (`cargo test -p fatsep-cli --release --test calibrate -- --ignored --nocapture`)
//! and frozen here. Maxima are rounded up: kappa to an integer, the others
//! to two decimals. The acceptance suite checks them on instances that were
//! not part of the measurement.

use crate::bench::SolverKind;
use crate::instance::ShapeFamily;

/// Bound on `Pack / greedy_pack` for disks in the plane.
pub const KAPPA_BALLS_2D: f64 = 2.0;
pub const KAPPA_BOXES_2D: f64 = 2.0;
pub const KAPPA_BALLS_3D: f64 = 2.0;
pub const KAPPA_BOXES_3D: f64 = 2.0;

/// Bound on the boundary measure of a separator on grid instances, in
/// units of `p^((d-1)/d)`.
pub const C_SEP: f64 = 1.34;

/// Node-count law constants: `nodes <= n^(K sqrt(p))` on planar grids with
/// the bench configuration.
pub const NODE_LAW_K_PACK: f64 = 0.69;
pub const NODE_LAW_K_PIERCE: f64 = 0.59;

pub fn kappa(family: ShapeFamily, dim: usize) -> Option<f64> {
    match (family, dim) {
        (ShapeFamily::Balls, 2) => Some(KAPPA_BALLS_2D),
        (ShapeFamily::Boxes, 2) => Some(KAPPA_BOXES_2D),
        (ShapeFamily::Balls, 3) => Some(KAPPA_BALLS_3D),
        (ShapeFamily::Boxes, 3) => Some(KAPPA_BOXES_3D),
        _ => None,
    }
}

pub fn node_law_k(solver: SolverKind) -> Option<f64> {
    match solver {
        SolverKind::Pack => Some(NODE_LAW_K_PACK),
        SolverKind::Pierce => Some(NODE_LAW_K_PIERCE),
        SolverKind::PtasPack | SolverKind::PtasPierce => None,
    }
}
