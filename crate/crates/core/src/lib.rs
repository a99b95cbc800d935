pub mod blockpos;
pub mod channels;
pub mod cones;
pub mod error;
pub mod json;
pub mod lab;
pub mod matrix;
pub mod random;
pub mod separability;
pub mod spectrahedron;
pub mod stats;
pub mod verdict;

pub use error::{Error, Result};
