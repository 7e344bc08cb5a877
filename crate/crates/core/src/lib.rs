pub mod budget;
pub mod deep;
pub mod error;
pub mod generators;
pub mod hull;
pub mod instance;
pub mod linalg;
pub mod lp;
pub mod matrix;
pub mod polyhedron;
pub mod subdet;
pub mod theory;
pub use error::{Error, Result};
