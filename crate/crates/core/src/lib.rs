pub mod algebra;
pub mod catalog;
pub mod error;
pub mod fixtures;
pub mod left_part;
pub mod linalg;
pub mod module;
pub mod random;
pub mod report;
pub mod spec_file;
pub mod torsion;

pub use error::{Error, Result};
