pub mod error;
pub mod category;
pub mod cohomology;
pub mod homology;
pub mod hyperplane;
pub mod input;
pub mod lattice;
pub mod random;
pub mod generators;
pub mod toric;

pub use error::{Error, Result};
