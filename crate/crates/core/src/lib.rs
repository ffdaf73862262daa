pub mod analysis;
pub mod curve;
pub mod error;
pub mod intersection;
pub mod mcg;
pub mod model;
pub mod registry;
pub mod sample;
pub mod surface;

pub use error::{Error, Result};
