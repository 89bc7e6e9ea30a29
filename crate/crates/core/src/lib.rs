//! Box separators for collections of fat objects (balls and bounded-aspect
//! axis boxes) and the exact and approximate packing and piercing solvers
//! built on them.

pub mod bench;
pub mod calibration;
mod clock;
pub mod collection;
pub mod exact;
pub mod error;
pub mod geometry;
pub mod instance;
pub mod measure;
pub mod oracle;
pub mod piercing;
pub mod ptas;
mod search;
pub mod separator;
pub mod svg;

pub use error::{Error, Result};
