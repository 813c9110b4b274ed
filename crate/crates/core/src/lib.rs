pub mod boxworld;
pub mod correlations;
mod dd;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod scalar;
pub mod selfdual;
pub mod swapping;
pub mod system;
pub mod tensor;
pub mod vector;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use vector::Vector;
