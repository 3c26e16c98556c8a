pub mod error;
pub mod inner_fn;
pub mod radius;
pub mod paley_wiener;
pub mod reps;
pub mod witness;
pub mod catalog;
pub mod cli;

pub use error::{Error, Result};
