pub mod cells;
pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod grading;
pub mod linalg;
pub mod moment;
pub mod rep;
pub mod symbolic;

pub use error::{Error, Result};
